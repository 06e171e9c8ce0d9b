//! Linear subspaces of projective space and the r-planes lying in a q-bic
//! hypersurface.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{classify, QBicForm};
use crate::geometry::{enumerate_points, hypersurface_points, is_singular_point, ProjPoint};
use crate::gf::{FieldCtx, Scalar};
use crate::hermitian::extension_field;
use crate::linalg::{Matrix, Subspace};

/// Largest number of subspaces [`enumerate_subspaces`] will produce.
pub const SUBSPACE_LIMIT: u128 = 10_000_000;

/// An r-plane in P^n, stored by its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjSubspace {
    basis: Matrix,
}

impl ProjSubspace {
    pub fn from_subspace(s: &Subspace) -> Result<ProjSubspace> {
        if s.is_zero() {
            return Err(Error::Invalid(
                "the zero subspace is not a projective subspace".into(),
            ));
        }
        Ok(ProjSubspace {
            basis: s.basis().clone(),
        })
    }

    pub fn span(f: &Arc<FieldCtx>, vectors: &[Vec<Scalar>]) -> Result<ProjSubspace> {
        let n = vectors.first().map_or(0, |v| v.len());
        ProjSubspace::from_subspace(&Subspace::span(f, n, vectors))
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.cols() - 1
    }

    pub fn r(&self) -> usize {
        self.basis.rows() - 1
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::from_matrix(&self.basis)
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.subspace().contains(pt.coords()).unwrap_or(false)
    }

    /// Points of the r-plane over its field.
    pub fn points(&self) -> Vec<ProjPoint> {
        let f = self.basis.ctx();
        enumerate_points(f, self.r())
            .expect("a plane inside an enumerable space is enumerable")
            .map(|c| {
                let v: Vec<Scalar> = (0..=self.n())
                    .map(|j| {
                        (0..=self.r()).fold(Scalar::ZERO, |acc, i| {
                            f.add(acc, f.mul(c.coords()[i], self.basis[(i, j)]))
                        })
                    })
                    .collect();
                ProjPoint::new(f, &v).expect("independent rows")
            })
            .collect()
    }
}

/// Gaussian binomial `[n choose k]_Q`.
pub fn gaussian_binomial(order: u32, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = order as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The RREF matrices with a fixed pivot pattern; free entries are decoded
/// from an index in mixed radix so cells can be split across threads.
#[derive(Clone, Debug)]
pub struct SchubertCell {
    ctx: Arc<FieldCtx>,
    cols: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl SchubertCell {
    pub fn size(&self) -> u128 {
        (self.ctx.order() as u128).pow(self.free.len() as u32)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn matrix(&self, mut idx: u128) -> Matrix {
        let mut m = Matrix::zeros(&self.ctx, self.pivots.len(), self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            m[(i, p)] = Scalar::ONE;
        }
        let order = self.ctx.order() as u128;
        for &(r, c) in self.free.iter().rev() {
            m[(r, c)] = Scalar::from_code((idx % order) as u32);
            idx /= order;
        }
        m
    }
}

/// Pivot cells of the Grassmannian of (r+1)-dimensional subspaces of GF^(n+1).
pub fn schubert_cells(f: &Arc<FieldCtx>, n: usize, r: usize) -> Vec<SchubertCell> {
    let cols = n + 1;
    let k = r + 1;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    if k > cols {
        return out;
    }
    loop {
        let free = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                ((p + 1)..cols)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        out.push(SchubertCell {
            ctx: f.clone(),
            cols,
            pivots: pivots.clone(),
            free,
        });
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < cols - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every r-plane of P^n over `f`, each once.
pub fn enumerate_subspaces(
    f: &Arc<FieldCtx>,
    n: usize,
    r: usize,
) -> Result<impl Iterator<Item = ProjSubspace>> {
    let total = gaussian_binomial(f.order(), n + 1, r + 1);
    if total > SUBSPACE_LIMIT {
        return Err(Error::RangeExceeded(format!("{total} {r}-planes in P^{n}")));
    }
    Ok(schubert_cells(f, n, r).into_iter().flat_map(|cell| {
        (0..cell.size()).map(move |i| ProjSubspace {
            basis: cell.matrix(i),
        })
    }))
}

/// All `(r+1)^2` pairings of basis vectors vanish.
pub fn is_isotropic_subspace(f: &QBicForm, s: &ProjSubspace) -> bool {
    is_isotropic_rows(f, &s.basis)
}

fn is_isotropic_rows(f: &QBicForm, u: &Matrix) -> bool {
    let rows = u.rows();
    for i in 0..rows {
        for j in 0..rows {
            if !f.pair(u.row(i), u.row(j)).is_zero() {
                return false;
            }
        }
    }
    true
}

/// The isotropic r-planes of X over the form's own field, in enumeration order.
pub fn isotropic_subspaces_here(f: &QBicForm, r: usize) -> Result<Vec<ProjSubspace>> {
    let n = f.dim() - 1;
    let ctx = f.ctx();
    let total = gaussian_binomial(ctx.order(), n + 1, r + 1);
    if total > SUBSPACE_LIMIT {
        return Err(Error::RangeExceeded(format!("{total} {r}-planes in P^{n}")));
    }
    let mut out = Vec::new();
    for cell in schubert_cells(ctx, n, r) {
        let found: Vec<ProjSubspace> = (0..cell.size() as u64)
            .into_par_iter()
            .filter_map(|i| {
                let m = cell.matrix(i as u128);
                is_isotropic_rows(f, &m).then_some(ProjSubspace { basis: m })
            })
            .collect();
        out.extend(found);
    }
    Ok(out)
}

/// The GF(q^(2m))-rational isotropic r-planes of X.
pub fn isotropic_subspaces(f: &QBicForm, r: usize, m: u32) -> Result<Vec<ProjSubspace>> {
    let g = f.extend_to(&extension_field(f, m)?)?;
    isotropic_subspaces_here(&g, r)
}

pub fn count_isotropic(f: &QBicForm, r: usize, m: u32) -> Result<u64> {
    Ok(isotropic_subspaces(f, r, m)?.len() as u64)
}

/// Lines of X through `pt`, over the form's own field. Each line through
/// `pt` meets the coordinate hyperplane at the pivot of `pt` exactly once,
/// so the candidates are the points of that hyperplane.
pub fn lines_through_point_here(f: &QBicForm, pt: &ProjPoint) -> Result<Vec<ProjSubspace>> {
    let n = f.dim() - 1;
    let ctx = f.ctx();
    let v = pt.coords();
    if v.len() != f.dim() {
        return Err(Error::Dimension("point and form dimensions differ".into()));
    }
    if !f.self_pairing(v).is_zero() {
        return Ok(Vec::new());
    }
    let pivot = v
        .iter()
        .position(|x| !x.is_zero())
        .expect("normalized point");
    let cands: Vec<ProjPoint> = enumerate_points(ctx, n - 1)?.collect();
    let mut lines: Vec<ProjSubspace> = cands
        .into_par_iter()
        .filter_map(|c| {
            let mut w = c.coords().to_vec();
            w.insert(pivot, Scalar::ZERO);
            let ok =
                f.self_pairing(&w).is_zero() && f.pair(v, &w).is_zero() && f.pair(&w, v).is_zero();
            ok.then(|| ProjSubspace::span(ctx, &[v.to_vec(), w]).expect("independent"))
        })
        .collect();
    lines.sort_by_key(|a| a.basis.row_vectors());
    Ok(lines)
}

/// Lines of X through `pt` over GF(q^(2m)); `pt` must have coordinates in
/// that field.
pub fn lines_through_point(f: &QBicForm, pt: &ProjPoint, m: u32) -> Result<Vec<ProjSubspace>> {
    let g = f.extend_to(&extension_field(f, m)?)?;
    lines_through_point_here(&g, pt)
}

/// Dimension of the first-order deformations of the isotropic plane `s`:
/// maps N in Hom(U, V/U) with `beta(u_i^(q), N u_j) = 0` for all i, j.
/// V/U is identified with the non-pivot coordinates of the RREF basis.
pub fn fano_tangent_dim(f: &QBicForm, s: &ProjSubspace) -> Result<usize> {
    if s.basis.cols() != f.dim() {
        return Err(Error::Dimension(
            "subspace and form dimensions differ".into(),
        ));
    }
    if !is_isotropic_subspace(f, s) {
        return Err(Error::Invalid("subspace is not isotropic".into()));
    }
    let (_, pivots) = s.basis.rref();
    let complement: Vec<usize> = (0..f.dim()).filter(|c| !pivots.contains(c)).collect();
    // row i: beta(u_i^(q), e_c) for c in the complement
    let m = s
        .basis
        .frobenius_twist(f.e(), 1)
        .mul(f.gram())?
        .select_cols(&complement);
    let nullity = complement.len() - m.rank();
    Ok(s.basis.rows() * nullity)
}

/// Set-theoretic line census of X over GF(q^(2m)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineReport {
    pub field_order: u32,
    pub total: u64,
    pub points_on_x: u64,
    /// Number of lines through a point -> number of such X-points.
    pub per_point: BTreeMap<u64, u64>,
    /// Number of lines through each singular point, in point order.
    pub singular_point_incidences: Vec<u64>,
    /// Points per line -> number of lines (always Q + 1).
    pub points_per_line: BTreeMap<u64, u64>,
    pub form_type: Option<String>,
    pub set_theoretic: bool,
}

pub fn line_count_report(f: &QBicForm, m: u32) -> Result<LineReport> {
    let g = f.extend_to(&extension_field(f, m)?)?;
    let lines = isotropic_subspaces_here(&g, 1)?;
    let pts = hypersurface_points(&g)?;
    let index: std::collections::HashMap<&ProjPoint, usize> =
        pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut through = vec![0u64; pts.len()];
    let mut points_per_line = BTreeMap::new();
    for l in &lines {
        let lp = l.points();
        *points_per_line.entry(lp.len() as u64).or_insert(0) += 1;
        for p in &lp {
            through[index[p]] += 1;
        }
    }
    let mut per_point = BTreeMap::new();
    for &c in &through {
        *per_point.entry(c).or_insert(0) += 1;
    }
    let mut singular_point_incidences = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if is_singular_point(&g, p)? {
            singular_point_incidences.push(through[i]);
        }
    }
    Ok(LineReport {
        field_order: g.ctx().order(),
        total: lines.len() as u64,
        points_on_x: pts.len() as u64,
        per_point,
        singular_point_incidences,
        points_per_line,
        form_type: classify(f).ok().map(|t| t.to_string()),
        set_theoretic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{random_form, standard_gram, TypeSignature};
    use crate::geometry::is_cone_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32, s: u32) -> Arc<FieldCtx> {
        FieldCtx::get(p, s).unwrap()
    }

    fn std_form(sig: &str, ctx: &Arc<FieldCtx>) -> QBicForm {
        standard_gram(&sig.parse::<TypeSignature>().unwrap(), ctx, 1).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert_eq!(gaussian_binomial(4, 5, 2), 5797);
        assert_eq!(gaussian_binomial(4, 6, 3), 376805);
        assert_eq!(gaussian_binomial(9, 5, 2), 605242);
    }

    #[test]
    fn subspace_enumeration_is_exact() {
        let f = gf(2, 1);
        let all: Vec<_> = enumerate_subspaces(&f, 3, 1).unwrap().collect();
        assert_eq!(all.len(), 35);
        let mut seen = std::collections::HashSet::new();
        for s in &all {
            assert_eq!(s.basis().rref().0, *s.basis());
            assert!(seen.insert(s.basis().row_vectors()));
        }
        assert_eq!(enumerate_subspaces(&gf(2, 2), 4, 1).unwrap().count(), 5797);
        let cells = schubert_cells(&gf(2, 2), 5, 2);
        assert_eq!(cells.iter().map(|c| c.size()).sum::<u128>(), 376805);
        assert!(enumerate_subspaces(&gf(2, 4), 6, 2).is_err());
    }

    #[test]
    fn isotropy_examples() {
        let f = gf(2, 2);
        let id = std_form("1^4", &f);
        let c = f.nth_root(f.neg(Scalar::ONE), 3).unwrap();
        let l = ProjSubspace::span(
            &f,
            &[
                vec![Scalar::ONE, c, Scalar::ZERO, Scalar::ZERO],
                vec![Scalar::ZERO, Scalar::ZERO, Scalar::ONE, c],
            ],
        )
        .unwrap();
        assert!(is_isotropic_subspace(&id, &l));
        let cone = std_form("N1^2+1^2", &f);
        let rad = ProjSubspace::from_subspace(&cone.radical()).unwrap();
        assert!(is_isotropic_subspace(&cone, &rad));
        // restriction criterion agrees with pointwise isotropy
        let g = gf(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let form = random_form(&g, 1, 4, 3, &mut rng).unwrap();
        for s in enumerate_subspaces(&g, 3, 1).unwrap() {
            let pointwise = s
                .points()
                .iter()
                .all(|p| form.self_pairing(p.coords()).is_zero());
            assert_eq!(is_isotropic_subspace(&form, &s), pointwise);
            assert_eq!(
                form.restrict(&s.subspace()).unwrap().gram().is_zero(),
                pointwise
            );
        }
    }

    #[test]
    fn fermat_surface_lines() {
        let f = gf(2, 2);
        let id = std_form("1^4", &f);
        let lines = isotropic_subspaces(&id, 1, 1).unwrap();
        assert_eq!(lines.len(), 27);
        let rep = line_count_report(&id, 1).unwrap();
        assert_eq!(rep.total, 27);
        assert_eq!(rep.per_point, BTreeMap::from([(3, 45)]));
        assert_eq!(rep.points_per_line, BTreeMap::from([(5, 27)]));
        assert_eq!(rep.form_type.as_deref(), Some("1^4"));
        for p in hypersurface_points(&id).unwrap() {
            let through = lines_through_point(&id, &p, 1).unwrap();
            assert_eq!(through.len(), 3);
            for l in &through {
                assert!(lines.contains(l));
            }
        }
        for l in &lines {
            assert_eq!(fano_tangent_dim(&id, l).unwrap(), 0);
        }
    }

    #[test]
    fn tangent_dim_matches_twisted_orthogonal() {
        // oracle: (r+1) * (dim Fr*(U)^perp - (r+1))
        let f = gf(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for rank in [3, 4, 5] {
            let form = random_form(&f, 1, 5, rank, &mut rng).unwrap();
            for l in isotropic_subspaces_here(&form, 1).unwrap().iter().take(50) {
                let perp = form.twisted_orthogonal(&l.subspace()).dim();
                assert_eq!(fano_tangent_dim(&form, l).unwrap(), 2 * (perp - 2));
            }
        }
    }

    #[test]
    fn singular_surface_censuses() {
        let f = gf(2, 2);
        for (sig, total) in [("N2+1^2", 6u64), ("N3+1", 1), ("N2^2", 7), ("N1+1^3", 9)] {
            let form = std_form(sig, &f);
            let lines = isotropic_subspaces(&form, 1, 1).unwrap();
            assert_eq!(lines.len() as u64, total, "{sig}");
            for l in &lines {
                assert!(
                    l.points().iter().any(|p| is_cone_point(&form, p).unwrap()),
                    "{sig}"
                );
            }
        }
        let rep = line_count_report(&std_form("N1+1^3", &f), 1).unwrap();
        assert_eq!(rep.singular_point_incidences, vec![9]);
    }

    #[test]
    fn nodal_surface_lines_through_special_points() {
        // N2+1^2: x- = e0 and x+ = e1 each carry q+1 lines, every line meets exactly one
        let f = gf(2, 2);
        let form = std_form("N2+1^2", &f);
        let xm =
            ProjPoint::new(&f, &[Scalar::ONE, Scalar::ZERO, Scalar::ZERO, Scalar::ZERO]).unwrap();
        let xp =
            ProjPoint::new(&f, &[Scalar::ZERO, Scalar::ONE, Scalar::ZERO, Scalar::ZERO]).unwrap();
        assert_eq!(lines_through_point(&form, &xm, 1).unwrap().len(), 3);
        assert_eq!(lines_through_point(&form, &xp, 1).unwrap().len(), 3);
        for l in isotropic_subspaces(&form, 1, 1).unwrap() {
            assert!(l.contains(&xm) ^ l.contains(&xp));
        }
    }
}
