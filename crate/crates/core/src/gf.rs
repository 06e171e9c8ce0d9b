//! Finite fields GF(p^s) in Zech-logarithm representation.
//!
//! Every nonzero element is stored as `1 + log_g(x)` for a fixed generator `g`
//! (the class of the variable modulo a primitive polynomial), and zero as `0`.
//! Multiplication is exponent addition; addition goes through the Zech table
//! `g^a + g^b = g^a (1 + g^(b-a))`. Both are O(1), which is what the
//! exhaustive enumerations downstream need.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// A field element. `0` is zero, `k + 1` is `g^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw table index; `0` for zero.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn from_code(code: u32) -> Scalar {
        Scalar(code)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "0")
        } else {
            write!(f, "g^{}", self.0 - 1)
        }
    }
}

/// Serializable description of a field: enough to rebuild it bit for bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub s: u32,
    /// Monic modulus, constant term first (length `s + 1`).
    pub modulus: Vec<u32>,
}

pub struct FieldCtx {
    p: u32,
    s: u32,
    order: u32,
    modulus: Vec<u32>,
    /// log -> polynomial-basis integer (digit i = coefficient of x^i).
    exp: Vec<u32>,
    /// polynomial-basis integer -> log (entry 0 unused).
    log: Vec<u32>,
    /// zech[k] = 1 + g^k.
    zech: Vec<Scalar>,
    /// p^j mod (order - 1), j = 0..s.
    frob: Vec<u64>,
    neg_one: Scalar,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.s)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u32, s: u32) -> Result<u32> {
    if s == 0 {
        return Err(Error::ZeroDegree);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut n: u64 = 1;
    for _ in 0..s {
        n *= p as u64;
        if n > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, s });
        }
    }
    Ok(n as u32)
}

/// Digit-wise helpers on polynomial-basis integers (base p, constant digit first).
fn digits(mut v: u32, p: u32, s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s as usize);
    for _ in 0..s {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplication by x modulo the monic polynomial with low coefficients `low`.
fn times_x(v: &mut [u32], low: &[u32], p: u32) {
    let s = v.len();
    let top = v[s - 1];
    for i in (1..s).rev() {
        v[i] = v[i - 1];
    }
    v[0] = 0;
    if top != 0 {
        for i in 0..s {
            v[i] = (v[i] + (p - low[i]) * top) % p;
        }
    }
}

/// Builds the exp table for the candidate modulus if x is primitive.
fn primitive_exp_table(low: &[u32], p: u32, order: u32) -> Option<Vec<u32>> {
    if low[0] == 0 {
        return None;
    }
    let s = low.len() as u32;
    let mut cur = vec![0u32; s as usize];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(order as usize - 1);
    for k in 0..(order - 1) {
        let v = undigits(&cur, p);
        if k > 0 && v == 1 {
            return None;
        }
        exp.push(v);
        times_x(&mut cur, low, p);
    }
    if undigits(&cur, p) == 1 {
        Some(exp)
    } else {
        None
    }
}

/// Product of polynomials modulo the monic polynomial with low coefficients `low`.
fn mul_mod(a: &[u32], b: &[u32], low: &[u32], p: u32) -> Vec<u32> {
    let s = low.len();
    let mut prod = vec![0u64; 2 * s - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce from the top: x^s = -low
    for k in (s..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..s {
            prod[k - s + i] = (prod[k - s + i] + (p - low[i]) as u64 * c) % p as u64;
        }
    }
    prod.truncate(s);
    prod.into_iter().map(|c| c as u32).collect()
}

fn x_pow_mod(mut e: u64, low: &[u32], p: u32) -> Vec<u32> {
    let s = low.len();
    let mut result = vec![0u32; s];
    result[0] = 1;
    let mut base = vec![0u32; s];
    if s == 1 {
        base[0] = (p - low[0]) % p;
    } else {
        base[1] = 1;
    }
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, low, p);
        }
        base = mul_mod(&base, &base, low, p);
        e >>= 1;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x has order exactly p^s - 1 modulo the candidate, which forces the
/// candidate to be primitive (a reducible modulus has fewer units).
fn passes_order_test(low: &[u32], p: u32, order: u32) -> bool {
    if low[0] == 0 {
        return false;
    }
    let m = order as u64 - 1;
    let mut one = vec![0u32; low.len()];
    one[0] = 1;
    if x_pow_mod(m, low, p) != one {
        return false;
    }
    prime_factors(m)
        .into_iter()
        .all(|r| x_pow_mod(m / r, low, p) != one)
}

impl FieldCtx {
    /// Builds GF(p^s) using the lexicographically smallest monic primitive
    /// modulus, comparing coefficient tuples constant term first.
    pub fn new(p: u32, s: u32) -> Result<FieldCtx> {
        let order = checked_order(p, s)?;
        let candidates = order; // p^s tuples of low coefficients
        for idx in 0..candidates {
            // idx enumerates tuples with c0 as the most significant digit.
            let mut low = vec![0u32; s as usize];
            let mut t = idx;
            for i in (0..s as usize).rev() {
                low[i] = t % p;
                t /= p;
            }
            if !passes_order_test(&low, p, order) {
                continue;
            }
            if let Some(exp) = primitive_exp_table(&low, p, order) {
                let mut modulus = low;
                modulus.push(1);
                return Ok(Self::from_tables(p, s, order, modulus, exp));
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    /// Rebuilds a field from a serialized descriptor, checking the modulus is primitive.
    pub fn from_descriptor(d: &FieldDescriptor) -> Result<FieldCtx> {
        let order = checked_order(d.p, d.s)?;
        if d.modulus.len() != d.s as usize + 1 || d.modulus[d.s as usize] != 1 {
            return Err(Error::Parse("modulus must be monic of degree s".into()));
        }
        if d.modulus.iter().any(|&c| c >= d.p) {
            return Err(Error::Parse("modulus coefficient out of range".into()));
        }
        let low = &d.modulus[..d.s as usize];
        let exp = primitive_exp_table(low, d.p, order)
            .ok_or_else(|| Error::Parse("modulus is not primitive".into()))?;
        Ok(Self::from_tables(d.p, d.s, order, d.modulus.clone(), exp))
    }

    fn from_tables(p: u32, s: u32, order: u32, modulus: Vec<u32>, exp: Vec<u32>) -> FieldCtx {
        let m = order - 1;
        let mut log = vec![0u32; order as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let zech = exp
            .iter()
            .map(|&v| {
                let mut d = digits(v, p, s);
                d[0] = (d[0] + 1) % p;
                let w = undigits(&d, p);
                if w == 0 {
                    Scalar::ZERO
                } else {
                    Scalar(log[w as usize] + 1)
                }
            })
            .collect();
        let mut frob = Vec::with_capacity(s as usize);
        let mut pj: u64 = 1 % m.max(1) as u64;
        for _ in 0..s {
            frob.push(pj);
            pj = (pj * p as u64) % m.max(1) as u64;
        }
        let neg_one = if p == 2 {
            Scalar::ONE
        } else {
            Scalar(m / 2 + 1)
        };
        FieldCtx {
            p,
            s,
            order,
            modulus,
            exp,
            log,
            zech,
            frob,
            neg_one,
        }
    }

    /// Shared, lazily built context for GF(p^s).
    pub fn get(p: u32, s: u32) -> Result<Arc<FieldCtx>> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<FieldCtx>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, s)) {
            return Ok(f.clone());
        }
        let f = Arc::new(FieldCtx::new(p, s)?);
        Ok(cache.lock().unwrap().entry((p, s)).or_insert(f).clone())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            s: self.s,
            modulus: self.modulus.clone(),
        }
    }

    #[inline]
    fn mult_order(&self) -> u32 {
        self.order - 1
    }

    pub fn generator(&self) -> Scalar {
        if self.order == 2 {
            Scalar::ONE
        } else {
            Scalar(2)
        }
    }

    /// All elements in code order: 0, 1, g, g^2, ...
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + Clone {
        (0..self.order).map(Scalar)
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, x: Scalar) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(x.0 - 1)
        }
    }

    #[inline]
    pub fn exp(&self, k: u64) -> Scalar {
        Scalar((k % self.mult_order() as u64) as u32 + 1)
    }

    /// Image of an integer under Z -> GF(p).
    pub fn from_int(&self, n: i64) -> Scalar {
        let c = n.rem_euclid(self.p as i64) as u32;
        if c == 0 {
            Scalar::ZERO
        } else {
            Scalar(self.log[c as usize] + 1)
        }
    }

    /// Coefficients over GF(p) in the polynomial basis, constant term first.
    pub fn to_coeffs(&self, x: Scalar) -> Vec<u32> {
        let v = if x.is_zero() {
            0
        } else {
            self.exp[(x.0 - 1) as usize]
        };
        digits(v, self.p, self.s)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Scalar> {
        if c.len() != self.s as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::Parse(format!(
                "bad coefficient vector {c:?} for {self:?}"
            )));
        }
        let v = undigits(c, self.p);
        Ok(if v == 0 {
            Scalar::ZERO
        } else {
            Scalar(self.log[v as usize] + 1)
        })
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 || b.0 == 0 {
            return Scalar::ZERO;
        }
        let m = self.mult_order();
        let mut k = (a.0 - 1) + (b.0 - 1);
        if k >= m {
            k -= m;
        }
        Scalar(k + 1)
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let (lo, hi) = if a.0 <= b.0 {
            (a.0 - 1, b.0 - 1)
        } else {
            (b.0 - 1, a.0 - 1)
        };
        let z = self.zech[(hi - lo) as usize];
        if z.0 == 0 {
            return Scalar::ZERO;
        }
        let m = self.mult_order();
        let mut k = lo + (z.0 - 1);
        if k >= m {
            k -= m;
        }
        Scalar(k + 1)
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        self.mul(a, self.neg_one)
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero in {self:?}");
        let m = self.mult_order();
        let l = a.0 - 1;
        Scalar(if l == 0 { 1 } else { m - l + 1 })
    }

    #[inline]
    pub fn div(&self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Scalar, n: u64) -> Scalar {
        if n == 0 {
            return Scalar::ONE;
        }
        if a.is_zero() {
            return Scalar::ZERO;
        }
        let m = self.mult_order() as u64;
        Scalar((((a.0 - 1) as u64 * (n % m)) % m) as u32 + 1)
    }

    /// x^(p^j) for any integer j (negative j inverts Frobenius).
    #[inline]
    pub fn frob_p(&self, a: Scalar, j: i64) -> Scalar {
        if a.is_zero() {
            return a;
        }
        let j = j.rem_euclid(self.s as i64) as usize;
        let m = self.mult_order() as u64;
        Scalar((((a.0 - 1) as u64 * self.frob[j]) % m) as u32 + 1)
    }

    /// x^(q^k) with q = p^e; k may be negative.
    #[inline]
    pub fn q_frobenius(&self, a: Scalar, e: u32, k: i64) -> Scalar {
        self.frob_p(a, e as i64 * k)
    }

    /// Some y with y^n = x, choosing the one of smallest discrete log.
    pub fn nth_root(&self, x: Scalar, n: u64) -> Option<Scalar> {
        assert!(n > 0, "root index must be positive");
        if x.is_zero() {
            return Some(Scalar::ZERO);
        }
        let m = self.mult_order() as u64;
        let l = (x.0 - 1) as u64;
        let g = gcd(n % m, m);
        if !l.is_multiple_of(g) {
            return None;
        }
        let mg = m / g;
        if mg == 1 {
            return Some(Scalar::ONE);
        }
        let inv = mod_inverse((n / g) % mg, mg)?;
        let k = ((l / g) % mg) * inv % mg;
        Some(Scalar(k as u32 + 1))
    }

    /// Whether x lies in the subfield GF(p^d).
    pub fn in_subfield(&self, x: Scalar, d: u32) -> Result<bool> {
        if d == 0 || !self.s.is_multiple_of(d) {
            return Err(Error::NotASubfield { d, s: self.s });
        }
        Ok(self.frob_p(x, d as i64) == x)
    }

    /// The elements of GF(p^d) inside this field, zero first then by log.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<Scalar>> {
        if d == 0 || !self.s.is_multiple_of(d) {
            return Err(Error::NotASubfield { d, s: self.s });
        }
        let sub = self.p.pow(d);
        let step = self.mult_order() / (sub - 1);
        let mut out = vec![Scalar::ZERO];
        out.extend((0..sub - 1).map(|i| Scalar(i * step + 1)));
        Ok(out)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar(rng.gen_range(0..self.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar(rng.gen_range(1..self.order))
    }

    /// Evaluates a polynomial with GF(p) coefficients (constant first) at x.
    fn eval_prime_poly(&self, coeffs: &[u32], x: Scalar) -> Scalar {
        coeffs.iter().rev().fold(Scalar::ZERO, |acc, &c| {
            self.add(self.mul(acc, x), self.from_int(c as i64))
        })
    }

    /// Field embedding from `self` into `target`, sending the generator of
    /// `self` to the root of its modulus of smallest code in `target`.
    pub fn embedding_into(&self, target: &FieldCtx) -> Result<Embedding> {
        if self.p != target.p || !target.s.is_multiple_of(self.s) {
            return Err(Error::NoEmbedding {
                p: self.p,
                from: self.s,
                p2: target.p,
                to: target.s,
            });
        }
        if self == target {
            return Ok(Embedding {
                map: self.elements().collect(),
            });
        }
        let root = target
            .elements()
            .skip(1)
            .find(|&y| target.eval_prime_poly(&self.modulus, y).is_zero())
            .expect("modulus splits in the extension field");
        let map = self
            .elements()
            .map(|x| {
                let c = self.to_coeffs(x);
                target.eval_prime_poly(&c, root)
            })
            .collect();
        Ok(Embedding { map })
    }
}

/// A ring homomorphism GF(p^s) -> GF(p^t), tabulated.
#[derive(Clone, Debug)]
pub struct Embedding {
    map: Vec<Scalar>,
}

impl Embedding {
    #[inline]
    pub fn apply(&self, x: Scalar) -> Scalar {
        self.map[x.0 as usize]
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
