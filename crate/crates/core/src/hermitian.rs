//! Hermitian vectors of a q-bic form, the canonical self-map `phi`, and
//! orthonormal bases.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forms::QBicForm;
use crate::gf::{FieldCtx, Scalar};
use crate::linalg::{combinations, semilinear_kernel, vec_add, vec_scale, Matrix, Subspace};

/// `B v = B^(q)T v^(q^2)`.
pub fn is_hermitian_vector(f: &QBicForm, v: &[Scalar]) -> Result<bool> {
    if v.len() != f.dim() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a form of dimension {}",
            v.len(),
            f.dim()
        )));
    }
    let lhs = f.gram().mul_vec(v)?;
    let rhs = f.twisted_gram(1).transpose().mul_vec(&f.twist_vec(v, 2))?;
    Ok(lhs == rhs)
}

/// Hermitian vectors of `f` over GF(q^(2m)), as an GF(q^2)-basis.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    /// The form extended to GF(q^(2m)).
    pub form: QBicForm,
    pub ext: u32,
    pub vectors: Vec<Vec<Scalar>>,
}

impl HermitianBasis {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.form.ctx()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Number of Hermitian vectors, `q^(2 dim)`.
    pub fn count(&self) -> u128 {
        (self.form.q() as u128).pow(2 * self.dim() as u32)
    }

    /// True when the Hermitian vectors span the whole space.
    pub fn is_full(&self) -> bool {
        self.dim() == self.form.dim()
    }

    /// Every Hermitian vector, zero included.
    pub fn elements(&self) -> Vec<Vec<Scalar>> {
        let coeffs = self
            .ctx()
            .subfield_elements(2 * self.form.e())
            .expect("GF(q^2) is a subfield");
        combinations(self.ctx(), &self.vectors, &coeffs, self.form.dim())
    }

    /// Gram matrix of the basis; Hermitian (`H^T = H^(q)`) with GF(q^2) entries.
    pub fn gram(&self) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(self.ctx(), n, n, |i, j| {
            self.form.pair(&self.vectors[i], &self.vectors[j])
        })
    }
}

/// The field GF(q^(2m)) for the form's q, or an error if it does not contain
/// the form's field of definition.
pub fn extension_field(f: &QBicForm, m: u32) -> Result<Arc<FieldCtx>> {
    let ctx = f.ctx();
    let t = 2 * f.e() * m;
    if m == 0 || !t.is_multiple_of(ctx.s()) {
        return Err(Error::NoEmbedding {
            p: ctx.p(),
            from: ctx.s(),
            p2: ctx.p(),
            to: t,
        });
    }
    FieldCtx::get(ctx.p(), t)
}

/// Solutions of the Hermitian equations over GF(q^(2m)).
pub fn hermitian_space(f: &QBicForm, m: u32) -> Result<HermitianBasis> {
    let big = extension_field(f, m)?;
    let g = f.extend_to(&big)?;
    let c = g.twisted_gram(1).transpose();
    let sol = semilinear_kernel(g.gram(), &c, g.e(), 2)?;
    debug_assert_eq!(sol.subfield_degree, 2 * g.e());
    Ok(HermitianBasis {
        form: g,
        ext: m,
        vectors: sol.basis,
    })
}

/// The matrix `B^-1 B^(q)T`, so that `phi(v) = F v^(q^2)`.
pub fn phi_matrix(f: &QBicForm) -> Result<Matrix> {
    f.gram().inverse()?.mul(&f.twisted_gram(1).transpose())
}

pub fn phi(f: &QBicForm, v: &[Scalar]) -> Result<Vec<Scalar>> {
    phi_matrix(f)?.mul_vec(&f.twist_vec(v, 2))
}

/// Dimension of the span of `v, phi(v), phi^2(v), ...`.
pub fn hermitian_closure_dim(f: &QBicForm, v: &[Scalar]) -> Result<usize> {
    let fm = phi_matrix(f)?;
    if v.len() != f.dim() {
        return Err(Error::Dimension("vector length".into()));
    }
    let mut span = Subspace::span(f.ctx(), f.dim(), &[v.to_vec()]);
    let mut cur = v.to_vec();
    loop {
        cur = fm.mul_vec(&f.twist_vec(&cur, 2))?;
        let next = span.sum(&Subspace::span(f.ctx(), f.dim(), &[cur.clone()]))?;
        if next.dim() == span.dim() {
            return Ok(span.dim());
        }
        span = next;
    }
}

/// How an orthonormal basis was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthonormalWitness {
    /// Extension degree m at which the Hermitian vectors first spanned.
    pub ext: u32,
    /// Number of candidate coefficient vectors tried in the scans.
    pub candidates_tried: u64,
}

/// An invertible `A` over GF(q^(2m)) with `gram_in_basis(A) = I`.
///
/// Tries m = 1, 2, .., `max_ext` until the Hermitian vectors span, then
/// picks non-isotropic Hermitian vectors one at a time (lexicographic scan of
/// GF(q^2)-coefficients), scales them to unit length and passes to the
/// orthogonal complement.
pub fn orthonormalize(f: &QBicForm, max_ext: u32) -> Result<(Matrix, OrthonormalWitness)> {
    if !f.is_nonsingular() {
        return Err(Error::Singular);
    }
    let n = f.dim();
    let mut herm = None;
    for m in 1..=max_ext {
        if !(2 * f.e() * m).is_multiple_of(f.ctx().s()) {
            continue;
        }
        let h = hermitian_space(f, m)?;
        if h.is_full() {
            herm = Some(h);
            break;
        }
    }
    let herm = herm.ok_or(Error::NotSplit(max_ext))?;
    let g = &herm.form;
    let ctx = g.ctx().clone();
    let q = g.q();
    let coeffs = ctx.subfield_elements(2 * g.e())?;
    let mut tried = 0u64;

    let mut current = herm.vectors.clone();
    let mut found: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    while !current.is_empty() {
        let k = current.len();
        let gram = Matrix::from_fn(&ctx, k, k, |i, j| g.pair(&current[i], &current[j]));
        let mut c = vec![Scalar::ZERO; k];
        let mut hit = None;
        // odometer over GF(q^2)^k with the first coordinate varying fastest,
        // so the current basis vectors themselves come early
        let mut idx = vec![0usize; k];
        'scan: loop {
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < coeffs.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                if pos == k {
                    break 'scan;
                }
            }
            for i in 0..k {
                c[i] = coeffs[idx[i]];
            }
            tried += 1;
            let cq: Vec<Scalar> = c.iter().map(|&x| ctx.q_frobenius(x, g.e(), 1)).collect();
            let val = crate::linalg::dot(&ctx, &cq, &gram.mul_vec(&c)?);
            if !val.is_zero() {
                hit = Some((cq, val));
                break;
            }
        }
        // a nonsingular Hermitian form always has a non-isotropic vector
        let (cq, val) = hit.ok_or(Error::Singular)?;
        let root = ctx.nth_root(val, q + 1).ok_or(Error::Singular)?;
        let scale = ctx.inv(root);
        let v = current
            .iter()
            .zip(&c)
            .fold(vec![Scalar::ZERO; n], |acc, (w, &ci)| {
                vec_add(&ctx, &acc, &vec_scale(&ctx, ci, w))
            });
        found.push(vec_scale(&ctx, scale, &v));

        // right orthogonal of c inside the current Hermitian space
        let row = Matrix::from_rows(&ctx, &[cq], k)?.mul(&gram)?;
        let ker = row.kernel();
        current = ker
            .vectors()
            .iter()
            .map(|kv| {
                current
                    .iter()
                    .zip(kv)
                    .fold(vec![Scalar::ZERO; n], |acc, (w, &ci)| {
                        vec_add(&ctx, &acc, &vec_scale(&ctx, ci, w))
                    })
            })
            .collect();
    }
    let a = Matrix::from_rows(&ctx, &found, n)?.transpose();
    Ok((
        a,
        OrthonormalWitness {
            ext: herm.ext,
            candidates_tried: tried,
        },
    ))
}

/// A random nonsingular Hermitian Gram matrix (`H^T = H^(q)`) over `ctx`,
/// which must contain GF(q^2); entries are drawn from GF(q^2).
pub fn random_hermitian_form<R: rand::Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    e: u32,
    dim: usize,
    rng: &mut R,
) -> Result<QBicForm> {
    let sub = ctx.subfield_elements(2 * e)?;
    let base = ctx.subfield_elements(e)?;
    loop {
        let mut h = Matrix::zeros(ctx, dim, dim);
        for i in 0..dim {
            h[(i, i)] = base[rng.gen_range(0..base.len())];
            for j in i + 1..dim {
                let x = sub[rng.gen_range(0..sub.len())];
                h[(i, j)] = x;
                h[(j, i)] = ctx.q_frobenius(x, e, 1);
            }
        }
        let f = QBicForm::new(h, e)?;
        if f.is_nonsingular() {
            return Ok(f);
        }
    }
}
