//! Points of projective space and of q-bic hypersurfaces over finite fields.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::QBicForm;
use crate::gf::{FieldCtx, Scalar};
use crate::hermitian::{extension_field, phi_matrix};
use crate::linalg::Subspace;

/// Largest number of points [`enumerate_points`] will produce.
pub const POINT_LIMIT: u128 = 10_000_000;

/// A point of projective space, leftmost nonzero coordinate equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    /// Normalizes a nonzero vector.
    pub fn new(f: &FieldCtx, v: &[Scalar]) -> Result<ProjPoint> {
        let lead = v
            .iter()
            .find(|x| !x.is_zero())
            .ok_or_else(|| Error::Invalid("zero vector is not a point".into()))?;
        let inv = f.inv(*lead);
        Ok(ProjPoint {
            coords: v.iter().map(|&x| f.mul(inv, x)).collect(),
        })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Projective dimension n of the ambient P^n.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }
}

/// (Q^(n+1) - 1) / (Q - 1).
pub fn projective_count(order: u32, n: usize) -> u128 {
    let q = order as u128;
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

/// Points of P^n over `f` in lexicographic order of coordinate codes.
pub fn enumerate_points(f: &Arc<FieldCtx>, n: usize) -> Result<PointIter> {
    let count = projective_count(f.order(), n);
    if count > POINT_LIMIT {
        return Err(Error::RangeExceeded(format!("{count} points in P^{n}")));
    }
    Ok(PointIter {
        order: f.order(),
        len: n + 1,
        pivot: n,
        tail: vec![0; 0],
        done: false,
    })
}

/// Lazy point enumeration: the pivot (first nonzero position) runs from
/// the last coordinate down to the first, the tail behind it as an odometer.
pub struct PointIter {
    order: u32,
    len: usize,
    pivot: usize,
    tail: Vec<u32>,
    done: bool,
}

impl Iterator for PointIter {
    type Item = ProjPoint;

    fn next(&mut self) -> Option<ProjPoint> {
        if self.done {
            return None;
        }
        let mut coords = vec![Scalar::ZERO; self.len];
        coords[self.pivot] = Scalar::ONE;
        for (i, &c) in self.tail.iter().enumerate() {
            coords[self.pivot + 1 + i] = Scalar::from_code(c);
        }
        // advance
        let mut i = self.tail.len();
        loop {
            if i == 0 {
                if self.pivot == 0 {
                    self.done = true;
                } else {
                    self.pivot -= 1;
                    self.tail = vec![0; self.len - self.pivot - 1];
                }
                break;
            }
            i -= 1;
            self.tail[i] += 1;
            if self.tail[i] < self.order {
                break;
            }
            self.tail[i] = 0;
        }
        Some(ProjPoint { coords })
    }
}

fn check_point(f: &QBicForm, pt: &ProjPoint) -> Result<()> {
    if pt.coords.len() != f.dim() {
        return Err(Error::Dimension(format!(
            "point in P^{} for a form of dimension {}",
            pt.n(),
            f.dim()
        )));
    }
    Ok(())
}

fn check_on(f: &QBicForm, pt: &ProjPoint) -> Result<()> {
    check_point(f, pt)?;
    if !f.self_pairing(&pt.coords).is_zero() {
        return Err(Error::Invalid("point is not on the hypersurface".into()));
    }
    Ok(())
}

pub fn on_hypersurface(f: &QBicForm, pt: &ProjPoint) -> bool {
    f.self_pairing(&pt.coords).is_zero()
}

/// Points of X over the form's own field.
pub fn hypersurface_points(f: &QBicForm) -> Result<Vec<ProjPoint>> {
    let pts: Vec<ProjPoint> = enumerate_points(f.ctx(), f.dim() - 1)?.collect();
    Ok(pts
        .into_par_iter()
        .filter(|p| on_hypersurface(f, p))
        .collect())
}

/// `#X(GF(q^(2m)))` by exhaustive scan.
pub fn count_points(f: &QBicForm, m: u32) -> Result<u64> {
    let g = f.extend_to(&extension_field(f, m)?)?;
    Ok(hypersurface_points(&g)?.len() as u64)
}

/// `B^T v^(q) = 0`, i.e. v lies under Fr^-1(V^perp).
pub fn is_singular_point(f: &QBicForm, pt: &ProjPoint) -> Result<bool> {
    check_on(f, pt)?;
    let vq = f.twist_vec(&pt.coords, 1);
    Ok(f.gram()
        .transpose()
        .mul_vec(&vq)?
        .iter()
        .all(|x| x.is_zero()))
}

/// The embedded tangent space `Fr*(L)^perp` at a smooth point.
pub fn tangent_space(f: &QBicForm, pt: &ProjPoint) -> Result<Subspace> {
    if is_singular_point(f, pt)? {
        return Err(Error::Invalid(
            "tangent space requested at a singular point".into(),
        ));
    }
    let l = Subspace::span(f.ctx(), f.dim(), std::slice::from_ref(&pt.coords));
    Ok(f.twisted_orthogonal(&l))
}

/// `dim(Fr*(L)^perp ∩ Fr^-1(L^perp)) >= n`.
pub fn is_cone_point(f: &QBicForm, pt: &ProjPoint) -> Result<bool> {
    check_on(f, pt)?;
    let l = Subspace::span(f.ctx(), f.dim(), std::slice::from_ref(&pt.coords));
    let meet = f
        .twisted_orthogonal(&l)
        .intersect(&f.preimage_orthogonal(&l))?;
    Ok(meet.dim() + 1 >= f.dim())
}

/// Membership in X^r: `beta(phi^i(v)^(q), v) = 0` for `0 <= i <= r`.
pub fn filtration_membership(f: &QBicForm, pt: &ProjPoint, r: usize) -> Result<bool> {
    check_point(f, pt)?;
    let fm = phi_matrix(f)?;
    let v = &pt.coords;
    let mut cur = v.clone();
    for i in 0..=r {
        if i > 0 {
            cur = fm.mul_vec(&f.twist_vec(&cur, 2))?;
        }
        if !f.pair(&cur, v).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The vertex `P rad(beta)`; nonzero exactly for cones.
pub fn vertex(f: &QBicForm) -> Subspace {
    f.radical()
}
