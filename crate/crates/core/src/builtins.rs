//! Named forms: Fermat, the Hermitian curve and surface, the Deligne-Lusztig
//! curve, every standard type, and two degeneration families.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forms::{standard_gram, QBicForm, TypeSignature};
use crate::gf::{is_prime, FieldCtx, Scalar};
use crate::linalg::Matrix;

/// Splits a prime power q into (p, e).
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Invalid(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2");
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    if r != 1 || !is_prime(p) {
        return Err(Error::Invalid(format!("{q} is not a prime power")));
    }
    Ok((p, e))
}

/// GF(q^(2k)) for q = p^e.
pub fn field_for(q: u32, k: u32) -> Result<(Arc<FieldCtx>, u32)> {
    let (p, e) = prime_power(q)?;
    Ok((FieldCtx::get(p, 2 * e * k)?, e))
}

/// Parses a field element: an integer (taken in the prime field) or `g^k`.
pub fn parse_scalar(ctx: &FieldCtx, s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("g^") {
        let k: u64 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        return Ok(ctx.exp(k));
    }
    if s == "g" {
        return Ok(ctx.generator());
    }
    let n: i64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
    Ok(ctx.from_int(n))
}

/// `[[0,1],[t,0]]`: type 1^2 for t != 0 and N2 at t = 0.
pub fn point_family(ctx: &Arc<FieldCtx>, e: u32, t: Scalar) -> Result<QBicForm> {
    let mut g = Matrix::zeros(ctx, 2, 2);
    g[(0, 1)] = Scalar::ONE;
    g[(1, 0)] = t;
    QBicForm::new(g, e)
}

/// `[[0,1,t,0],[0,0,1,t],[0,0,0,1],[0,0,0,0]]`: N3+1 at t = 1, N4 for general t.
pub fn n4_family(ctx: &Arc<FieldCtx>, e: u32, t: Scalar) -> Result<QBicForm> {
    let mut g = Matrix::zeros(ctx, 4, 4);
    g[(0, 1)] = Scalar::ONE;
    g[(0, 2)] = t;
    g[(1, 2)] = Scalar::ONE;
    g[(1, 3)] = t;
    g[(2, 3)] = Scalar::ONE;
    QBicForm::new(g, e)
}

/// Resolves a builtin name for the given q, and n (projective dimension) where it matters.
///
/// Names: `fermat`, `hermitian-curve`, `hermitian-surface`, `ddl-curve`,
/// `standard:<signature>`, `family:point:<t>`, `family:n4-degeneration:<t>`
/// (`t=` prefix optional). Families live over GF(q^2) and GF(q^4).
pub fn builtin(name: &str, q: u32, n: Option<usize>) -> Result<QBicForm> {
    let (ctx, e) = field_for(q, 1)?;
    let one = Scalar::ONE;
    let minus = ctx.neg(one);
    let from = |entries: &[(usize, usize, Scalar)], dim: usize| -> Result<QBicForm> {
        let mut g = Matrix::zeros(&ctx, dim, dim);
        for &(i, j, x) in entries {
            g[(i, j)] = x;
        }
        QBicForm::new(g, e)
    };
    match name {
        "fermat" => {
            let n = n.ok_or_else(|| Error::Invalid("fermat needs n".into()))?;
            standard_gram(&TypeSignature::nonsingular(n + 1), &ctx, e)
        }
        // x0^q x1 + x0 x1^q - x2^(q+1)
        "hermitian-curve" => from(&[(0, 1, one), (1, 0, one), (2, 2, minus)], 3),
        // x0^q x1 + x0 x1^q + x2^q x3 + x2 x3^q
        "hermitian-surface" => from(&[(0, 1, one), (1, 0, one), (2, 3, one), (3, 2, one)], 4),
        // x0^q x1 - x0 x1^q - x2^(q+1)
        "ddl-curve" => from(&[(0, 1, one), (1, 0, minus), (2, 2, minus)], 3),
        _ => {
            if let Some(sig) = name.strip_prefix("standard:") {
                return standard_gram(&sig.parse()?, &ctx, e);
            }
            if let Some(rest) = name.strip_prefix("family:") {
                let (fam, t) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("family needs a parameter: {name}")))?;
                let t = t.strip_prefix("t=").unwrap_or(t);
                return match fam {
                    "point" => point_family(&ctx, e, parse_scalar(&ctx, t)?),
                    "n4-degeneration" => {
                        let (big, _) = field_for(q, 2)?;
                        n4_family(&big, e, parse_scalar(&big, t)?)
                    }
                    _ => Err(Error::Parse(format!("unknown family {fam:?}"))),
                };
            }
            Err(Error::Parse(format!("unknown builtin {name:?}")))
        }
    }
}
