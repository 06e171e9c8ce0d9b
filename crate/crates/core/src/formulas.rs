//! Closed-form invariants in exact integer arithmetic: two-row Schubert
//! calculus on G(2, N), Chern numbers and Euler characteristics of the Fano
//! surface, zeta-function point counts, and Hermitian counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gf::is_prime;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn pow(b: i64, e: u32) -> BigInt {
    num_traits::pow(big(b), e as usize)
}

/// Exact division; panics if `d` does not divide `n`, which would mean a
/// closed form was transcribed wrongly.
fn exact_div(n: &BigInt, d: &BigInt) -> BigInt {
    assert!((n % d).is_zero(), "{n} is not divisible by {d}");
    n / d
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A class in the Chow ring of G(2, N): integer combination of sigma_(a,b)
/// with N - 2 >= a >= b >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertClass {
    n: usize,
    terms: BTreeMap<(usize, usize), BigInt>,
}

impl SchubertClass {
    pub fn zero(n: usize) -> SchubertClass {
        assert!(n >= 2, "G(2, N) needs N >= 2");
        SchubertClass {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `sigma_(a,b)`, or zero if the partition does not fit.
    pub fn sigma(n: usize, a: usize, b: usize) -> SchubertClass {
        let mut c = SchubertClass::zero(n);
        c.add_term(a, b, BigInt::one());
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn admissible(&self, a: usize, b: usize) -> bool {
        a <= self.n - 2 && b <= a
    }

    fn add_term(&mut self, a: usize, b: usize, c: BigInt) {
        if c.is_zero() || !self.admissible(a, b) {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn coeff(&self, a: usize, b: usize) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &BigInt)> {
        self.terms.iter()
    }

    pub fn scale(&self, k: &BigInt) -> SchubertClass {
        let mut out = SchubertClass::zero(self.n);
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, c * k);
        }
        out
    }

    pub fn add(&self, other: &SchubertClass) -> SchubertClass {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    fn sub(&self, other: &SchubertClass) -> SchubertClass {
        self.add(&other.scale(&big(-1)))
    }

    /// Multiplication by the special class sigma_c:
    /// `sigma_c sigma_(a,b) = sum sigma_(a',b')` over a' + b' = a + b + c,
    /// a <= a', b <= b' <= a.
    pub fn mul_special(&self, c: usize) -> SchubertClass {
        let mut out = SchubertClass::zero(self.n);
        for (&(a, b), coeff) in &self.terms {
            for b2 in b..=a {
                let total = a + b + c;
                if total < b2 {
                    continue;
                }
                let a2 = total - b2;
                if a2 >= a {
                    out.add_term(a2, b2, coeff.clone());
                }
            }
        }
        out
    }

    /// Pieri's rule iterated: multiplication by sigma_1^k.
    pub fn pieri(&self, k: usize) -> SchubertClass {
        (0..k).fold(self.clone(), |acc, _| acc.mul_special(1))
    }

    /// Product via Giambelli: `sigma_(a,b) = sigma_a sigma_b - sigma_(a+1) sigma_(b-1)`.
    pub fn mul(&self, other: &SchubertClass) -> SchubertClass {
        assert_eq!(self.n, other.n);
        let mut out = SchubertClass::zero(self.n);
        for (&(a, b), c) in &self.terms {
            let mut part = other.mul_special(b).mul_special(a);
            if b > 0 {
                part = part.sub(&other.mul_special(b - 1).mul_special(a + 1));
            }
            out = out.add(&part.scale(c));
        }
        out
    }

    /// Coefficient of the point class sigma_(N-2,N-2).
    pub fn grassmannian_degree(&self) -> Result<BigInt> {
        let top = self.n - 2;
        if self.terms.keys().any(|&(a, b)| a + b != 2 * top) {
            return Err(Error::Invalid("class is not of top degree".into()));
        }
        Ok(self.coeff(top, top))
    }
}

/// `(1/(N-2)) C(2N-4, N-1)`, the degree of G(2, N) in its Pluecker embedding.
pub fn grassmannian_degree_closed(n: usize) -> BigInt {
    let n = n as i64;
    exact_div(&binomial(2 * n - 4, n - 1), &big(n - 2))
}

/// The class `(q+1)(q^3+1) sigma_(2,2) + q(q+1)^2 sigma_(3,1)` of the Fano
/// scheme of lines in G(2, n+1).
pub fn fano_line_class(q: i64, n: usize) -> SchubertClass {
    let ambient = n + 1;
    SchubertClass::sigma(ambient, 2, 2)
        .scale(&((big(q) + 1) * (pow(q, 3) + 1)))
        .add(&SchubertClass::sigma(ambient, 3, 1).scale(&(big(q) * pow(q + 1, 2))))
}

/// Degree of the Fano scheme of lines, by Pieri and by the closed form.
pub fn fano_plucker_degree(q: i64, n: usize) -> Result<(BigInt, BigInt)> {
    if n < 4 {
        return Err(Error::Invalid(format!("n = {n} < 4")));
    }
    let schubert = fano_line_class(q, n)
        .pieri(2 * n - 6)
        .grassmannian_degree()?;
    let nn = n as i64;
    let num = factorial(2 * n as u32 - 6)
        * pow(q + 1, 2)
        * (big(nn - 1) * pow(q, 2) + big(2 * nn - 8) * q + (nn - 1));
    let den = factorial(n as u32 - 1) * factorial(n as u32 - 3);
    Ok((schubert, exact_div(&num, &den)))
}

/// `(c1^2, c2, chi)` of the Fano surface of a smooth q-bic threefold.
pub fn chern_and_chi(q: i64) -> (BigInt, BigInt, BigInt) {
    let q2 = pow(q + 1, 2);
    let c1sq = &q2 * (pow(q, 2) + 1) * pow(2 * q - 3, 2);
    let c2 = &q2 * (pow(q, 4) - 3 * pow(q, 3) + 4 * pow(q, 2) - 4 * q + 3);
    let chi = exact_div(
        &(&q2 * (5 * pow(q, 4) - 15 * pow(q, 3) + 17 * pow(q, 2) - 16 * q + 12)),
        &big(12),
    );
    (c1sq, c2, chi)
}

/// `(h^0, h^1, h^2)` of the structure sheaf of the Fano surface when q = p.
pub fn cohomology_dims(p: u32) -> Result<(BigInt, BigInt, BigInt)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p = p as i64;
    let h1 = exact_div(&(big(p) * (p - 1) * (pow(p, 2) + 1)), &big(2));
    let h2 = exact_div(
        &(big(p) * (p - 1) * (5 * pow(p, 4) - 2 * pow(p, 2) - 5 * p - 2)),
        &big(12),
    );
    Ok((BigInt::one(), h1, h2))
}

/// Betti numbers `(b0, .., b4)` of the Fano surface.
pub fn betti_s(q: i64) -> [BigInt; 5] {
    let b1: BigInt = big(q) * (q - 1) * (pow(q, 2) + 1);
    let b2 = (pow(q, 4) - pow(q, 3) + 1) * (pow(q, 2) + 1);
    [BigInt::one(), b1.clone(), b2, b1, BigInt::one()]
}

/// `b_(n-1, prim) = q(q^n - (-1)^n)/(q+1)`.
pub fn primitive_betti(q: i64, n: u32) -> BigInt {
    exact_div(&(big(q) * (pow(q, n) - pow(-1, n))), &big(q + 1))
}

/// Data of a zeta function over GF(q^2) whose counts are expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZetaSpec {
    /// Fano surface of lines on the Fermat threefold.
    FanoSurface { q: i64 },
    /// Smooth q-bic hypersurface in P^n with the primitive middle
    /// eigenvalue `sign * q^(n-1)`.
    Hypersurface { q: i64, n: u32, sign: i64 },
}

/// Number of GF(q^(2k))-points predicted by a zeta function.
pub fn zeta_point_count(spec: &ZetaSpec, k: u32) -> BigInt {
    match *spec {
        ZetaSpec::FanoSurface { q } => {
            let [_, b1, b2, b3, _] = betti_s(q);
            BigInt::one() + b2 * pow(q, 2 * k) + pow(q, 4 * k)
                - b1 * pow(-q, k)
                - b3 * pow(-(q * q * q), k)
        }
        ZetaSpec::Hypersurface { q, n, sign } => zeta_x_count(q, n, sign, k),
    }
}

/// `1 + q^(2k) + .. + q^((2n-2)k) + (-1)^(n-1) (sign q^(n-1))^k b_prim`.
pub fn zeta_x_count(q: i64, n: u32, sign: i64, k: u32) -> BigInt {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let trivial: BigInt = (0..n).map(|i| pow(q, 2 * i * k)).sum();
    let middle = pow(sign, k) * pow(q, (n - 1) * k) * primitive_betti(q, n);
    if (n - 1).is_multiple_of(2) {
        trivial + middle
    } else {
        trivial - middle
    }
}

/// The sign reproducing a given GF(q^2)-count at k = 1, if exactly one does.
pub fn determine_sign(q: i64, n: u32, count: &BigInt) -> Option<i64> {
    let ok: Vec<i64> = [1, -1]
        .into_iter()
        .filter(|&s| zeta_x_count(q, n, s, 1) == *count)
        .collect();
    (ok.len() == 1).then(|| ok[0])
}

/// `C(2p+1, 4) - 4 C(p+1, 4) = (p^2+1) C(p, 2) + C(p, 3)`.
pub fn binomial_identity_h0cf(p: i64) -> (BigInt, BigInt) {
    let lhs = binomial(2 * p + 1, 4) - 4 * binomial(p + 1, 4);
    let rhs = (pow(p, 2) + 1) * binomial(p, 2) + binomial(p, 3);
    (lhs, rhs)
}

/// Hermitian points of a smooth q-bic (n-1)-fold in P^n and the number of
/// maximal isotropic Hermitian subspaces.
pub fn hermitian_count_formulas(q: i64, n: u32) -> (BigInt, BigInt) {
    let points = exact_div(
        &((pow(q, n + 1) - pow(-1, n + 1)) * (pow(q, n) - pow(-1, n))),
        &(pow(q, 2) - 1),
    );
    let d = n - 1;
    let m = d / 2;
    let maximal = if d.is_multiple_of(2) {
        (0..=m).map(|i| pow(q, 2 * i + 1) + 1).product()
    } else {
        (0..=m).map(|i| pow(q, 2 * i + 3) + 1).product()
    };
    (points, maximal)
}

/// Whether every value in the slice is nonnegative.
pub fn all_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
