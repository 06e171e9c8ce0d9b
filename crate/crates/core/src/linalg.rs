//! Dense matrices and row-space subspaces over a [`FieldCtx`], plus the
//! Frobenius-semilinear operations used by the forms calculus.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Scalar};

#[derive(Clone)]
pub struct Matrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && *self.ctx == *other.ctx
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_rows(ctx: &Arc<FieldCtx>, rows: &[Vec<Scalar>], cols: usize) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            ctx: ctx.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix over the prime field from small integers.
    pub fn from_ints(ctx: &Arc<FieldCtx>, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|&x| ctx.from_int(x))
            })
            .collect();
        Matrix {
            ctx: ctx.clone(),
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn random<R: Rng + ?Sized>(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Matrix {
        Matrix::from_fn(ctx, rows, cols, |_, _| ctx.random(rng))
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(
        ctx: &Arc<FieldCtx>,
        n: usize,
        rng: &mut R,
    ) -> Matrix {
        loop {
            let m = Matrix::random(ctx, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> Matrix {
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ctx, self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Entrywise x -> x^(q^k), q = p^e.
    pub fn frobenius_twist(&self, e: u32, k: i64) -> Matrix {
        let ctx = self.ctx.clone();
        self.map(|x| ctx.q_frobenius(x, e, k))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = f.add(out[(i, j)], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}-column matrix times {}-vector",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| dot(&self.ctx, self.row(r), v))
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        let f = &self.ctx;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            ctx: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(
                "stacking matrices of different widths".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the listed rows.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            ctx: self.ctx.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ctx, self.rows, cols.len(), |r, c| self[(r, cols[c])])
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.ctx.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m[(r, c)]);
            for j in c..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..m.cols {
                    let v = m[(r, j)];
                    if !v.is_zero() {
                        m[(i, j)] = f.add(m[(i, j)], f.mul(nf, v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right null space {x : M x = 0}.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let f = &self.ctx;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Scalar::ZERO; self.cols];
            v[fc] = Scalar::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[(i, fc)]);
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, &basis)
    }

    /// Column space, as a subspace of the `rows`-dimensional space.
    pub fn image(&self) -> Subspace {
        let t = self.transpose();
        Subspace::from_matrix(&t)
    }

    /// Some x with M x = b, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "{} rows vs right-hand side of length {}",
                self.rows,
                b.len()
            )));
        }
        let f = &self.ctx;
        let aug = Matrix::from_fn(f, self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)]
            } else {
                b[r]
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::ZERO; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)];
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.ctx;
        let aug = Matrix::from_fn(f, n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)]
            } else if c - n == r {
                Scalar::ONE
            } else {
                Scalar::ZERO
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(f, n, n, |i, j| r[(i, n + j)]))
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        let f = &self.ctx;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Scalar::ZERO);
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = m[(c, c)];
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for i in c + 1..n {
                let factor = f.neg(f.mul(m[(i, c)], inv));
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    m[(i, j)] = f.add(m[(i, j)], f.mul(factor, m[(c, j)]));
                }
            }
        }
        Ok(det)
    }

    /// Same entries viewed in a larger field.
    pub fn embed(&self, target: &Arc<FieldCtx>) -> Result<Matrix> {
        let emb = self.ctx.embedding_into(target)?;
        Ok(Matrix {
            ctx: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| emb.apply(x)).collect(),
        })
    }
}

#[inline]
pub fn dot(f: &FieldCtx, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn vec_add(f: &FieldCtx, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_scale(f: &FieldCtx, c: Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn vec_twist(f: &FieldCtx, e: u32, k: i64, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|&x| f.q_frobenius(x, e, k)).collect()
}

/// A subspace of a coordinate space, stored as an RREF basis without zero rows.
/// Two subspaces are equal exactly when their bases are.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}) {:?}",
            self.dim(),
            self.ambient(),
            self.basis.row_vectors()
        )
    }
}

impl Subspace {
    pub fn zero(ctx: &Arc<FieldCtx>, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::zeros(ctx, 0, ambient),
        }
    }

    pub fn full(ctx: &Arc<FieldCtx>, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(ctx, ambient),
        }
    }

    /// Row space of a matrix.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        Subspace {
            basis: r.select_rows(&(0..pivots.len()).collect::<Vec<_>>()),
        }
    }

    pub fn span(ctx: &Arc<FieldCtx>, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        let m = Matrix::from_rows(ctx, vectors, ambient).expect("vectors of ambient length");
        Subspace::from_matrix(&m)
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(ctx: &Arc<FieldCtx>, ambient: usize, coords: &[usize]) -> Subspace {
        let vs: Vec<Vec<Scalar>> = coords
            .iter()
            .map(|&i| {
                (0..ambient)
                    .map(|j| if i == j { Scalar::ONE } else { Scalar::ZERO })
                    .collect()
            })
            .collect();
        Subspace::span(ctx, ambient, &vs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.basis.ctx()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(Error::Dimension(format!(
                "ambient {} vs {}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient() {
            return Err(Error::Dimension(
                "vector length differs from ambient".into(),
            ));
        }
        let m = self.basis.stack(&Matrix::from_rows(
            self.ctx(),
            &[v.to_vec()],
            self.ambient(),
        )?)?;
        Ok(m.rank() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.sum(other)?.dim() == other.dim())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix(&self.basis.stack(&other.basis)?))
    }

    /// {y : s . y = 0 for every s in self} (plain dot product).
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ctx(), self.ambient());
        }
        self.basis.kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let stacked = self.annihilator().basis.stack(&other.annihilator().basis)?;
        if stacked.rows() == 0 {
            return Ok(Subspace::full(self.ctx(), self.ambient()));
        }
        Ok(stacked.kernel())
    }

    /// Image under entrywise x -> x^(q^k).
    pub fn frobenius_twist(&self, e: u32, k: i64) -> Subspace {
        Subspace::from_matrix(&self.basis.frobenius_twist(e, k))
    }

    /// {v : v^(q) in self}, obtained by taking q-th roots of the basis.
    pub fn frobenius_preimage(&self, e: u32) -> Subspace {
        self.frobenius_twist(e, -1)
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vectors()
    }

    pub fn embed(&self, target: &Arc<FieldCtx>) -> Result<Subspace> {
        Ok(Subspace::from_matrix(&self.basis.embed(target)?))
    }

    /// Every vector of the subspace (field-size^dim of them).
    pub fn all_vectors(&self) -> Vec<Vec<Scalar>> {
        let f = self.ctx();
        let elems: Vec<Scalar> = f.elements().collect();
        combinations(f, &self.vectors(), &elems, self.ambient())
    }
}

/// All linear combinations of `basis` with coefficients drawn from `coeffs`.
pub fn combinations(
    f: &FieldCtx,
    basis: &[Vec<Scalar>],
    coeffs: &[Scalar],
    len: usize,
) -> Vec<Vec<Scalar>> {
    let mut out = vec![vec![Scalar::ZERO; len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * coeffs.len());
        for v in &out {
            for &c in coeffs {
                next.push(vec_add(f, v, &vec_scale(f, c, b)));
            }
        }
        out = next;
    }
    out
}

/// Solution set of A x = C x^(q^k), a vector space over GF(p^d) with
/// d = gcd(e k, s).
#[derive(Clone, Debug)]
pub struct SemilinearSolution {
    /// Degree over GF(p) of the coefficient field of the solution space.
    pub subfield_degree: u32,
    /// A basis over GF(p^d) of the solution set.
    pub basis: Vec<Vec<Scalar>>,
}

impl SemilinearSolution {
    /// Number of solutions, (p^d)^dim, if it fits in u128.
    pub fn count(&self, p: u32) -> u128 {
        (p as u128).pow(self.subfield_degree * self.basis.len() as u32)
    }

    /// Every solution vector.
    pub fn elements(&self, ctx: &FieldCtx, n: usize) -> Vec<Vec<Scalar>> {
        let coeffs = ctx
            .subfield_elements(self.subfield_degree)
            .expect("subfield");
        combinations(ctx, &self.basis, &coeffs, n)
    }
}

/// Solves A x = C x^(q^k) by writing GF(p^s) as an m-dimensional space over
/// GF(p^d), on which x -> x^(q^k) is linear, and solving the blown-up system.
pub fn semilinear_kernel(a: &Matrix, c: &Matrix, e: u32, k: i64) -> Result<SemilinearSolution> {
    if !a.is_square() || !c.is_square() || a.rows() != c.rows() {
        return Err(Error::Dimension(
            "semilinear system needs square matrices of equal size".into(),
        ));
    }
    let f = a.ctx().clone();
    let s = f.s();
    let n = a.rows();
    let shift = (e as i64 * k).rem_euclid(s as i64) as u64;
    let d = crate::gf::gcd(shift, s as u64) as u32;
    let d = if d == 0 { s } else { d };
    let m = (s / d) as usize;

    // Moore matrix of the basis 1, g, .., g^(m-1) with respect to x -> x^(p^d).
    let g = f.generator();
    let powers: Vec<Scalar> = (0..m).map(|j| f.pow(g, j as u64)).collect();
    let moore = Matrix::from_fn(&f, m, m, |t, j| {
        f.frob_p(powers[j], (d as usize * t) as i64)
    });
    let moore_inv = moore.inverse()?;
    let coords = |y: Scalar| -> Vec<Scalar> {
        let conj: Vec<Scalar> = (0..m)
            .map(|t| f.frob_p(y, (d as usize * t) as i64))
            .collect();
        moore_inv.mul_vec(&conj).expect("square")
    };

    // Column (i, j) of the big system is the image of g^j e_i.
    let size = n * m;
    let mut big = Matrix::zeros(&f, size, size);
    for i in 0..n {
        for j in 0..m {
            let x = powers[j];
            let xt = f.frob_p(x, shift as i64);
            for r in 0..n {
                let val = f.sub(f.mul(a[(r, i)], x), f.mul(c[(r, i)], xt));
                for (t, cv) in coords(val).into_iter().enumerate() {
                    big[(r * m + t, i * m + j)] = cv;
                }
            }
        }
    }
    let ker = big.kernel();
    let basis = ker
        .vectors()
        .into_iter()
        .map(|cv| {
            (0..n)
                .map(|i| {
                    (0..m).fold(Scalar::ZERO, |acc, j| {
                        f.add(acc, f.mul(cv[i * m + j], powers[j]))
                    })
                })
                .collect()
        })
        .collect();
    Ok(SemilinearSolution {
        subfield_degree: d,
        basis,
    })
}
