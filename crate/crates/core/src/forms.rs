//! q-bic forms: Gram matrices, orthogonals, the two canonical filtrations,
//! and classification by invariant matching against the standard forms.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Scalar};
use crate::linalg::{dot, vec_twist, Matrix, Subspace};

/// A q-bic form on a coordinate space, given by its Gram matrix
/// `B[i][j] = beta(e_i^(q), e_j)` with `q = p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBicForm {
    gram: Matrix,
    e: u32,
}

/// Which argument of the pairing a subspace lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `N` inside the twisted space `Fr*(V)`; orthogonal is `{w : beta(x, w) = 0}`.
    Left,
    /// `N` inside `V`; orthogonal is `{x : beta(x, n) = 0}` inside `Fr*(V)`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernels {
    /// `Fr*(V)^perp = ker B`.
    pub left: Subspace,
    /// `V^perp = ker B^T`, in `Fr*(V)` coordinates.
    pub right: Subspace,
    /// `Fr^{-1}(V^perp)`.
    pub right_preimage: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementCheck {
    pub exists: bool,
    /// The complement, when it exists and is unique.
    pub complement: Option<Subspace>,
}

impl QBicForm {
    pub fn new(gram: Matrix, e: u32) -> Result<QBicForm> {
        if !gram.is_square() {
            return Err(Error::Dimension(format!(
                "Gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        let (p, s) = (gram.ctx().p(), gram.ctx().s());
        if e == 0 || s % (2 * e) != 0 {
            return Err(Error::NoQuadraticSubfield { p, s, e });
        }
        Ok(QBicForm { gram, e })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.gram.ctx()
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u64 {
        (self.ctx().p() as u64).pow(self.e)
    }
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Gram matrix of the q^k-twisted form.
    pub fn twisted_gram(&self, k: i64) -> Matrix {
        self.gram.frobenius_twist(self.e, k)
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }
    pub fn corank(&self) -> usize {
        self.dim() - self.rank()
    }
    pub fn is_nonsingular(&self) -> bool {
        self.rank() == self.dim()
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a form of dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `beta(v^(q), w) = v^(q)^T B w`.
    pub fn evaluate(&self, v: &[Scalar], w: &[Scalar]) -> Result<Scalar> {
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(self.pair(v, w))
    }

    /// Unchecked pairing for inner loops.
    #[inline]
    pub fn pair(&self, v: &[Scalar], w: &[Scalar]) -> Scalar {
        let f = self.ctx();
        let n = self.dim();
        let mut acc = Scalar::ZERO;
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            let vq = f.q_frobenius(v[i], self.e, 1);
            let row = self.gram.row(i);
            acc = f.add(acc, f.mul(vq, dot(f, row, w)));
        }
        acc
    }

    /// `beta(v^(q), v)`: the q-bic equation at v.
    #[inline]
    pub fn self_pairing(&self, v: &[Scalar]) -> Scalar {
        self.pair(v, v)
    }

    /// Gram matrix in the basis given by the columns of `a`: `Fr*(A)^T B A`.
    pub fn gram_in_basis(&self, a: &Matrix) -> Result<QBicForm> {
        if a.rows() != self.dim() || !a.is_square() {
            return Err(Error::Dimension(
                "change of basis must be square of the form's dimension".into(),
            ));
        }
        if a.rank() < a.rows() {
            return Err(Error::Singular);
        }
        let g = a
            .frobenius_twist(self.e, 1)
            .transpose()
            .mul(&self.gram)?
            .mul(a)?;
        QBicForm::new(g, self.e)
    }

    /// Gram matrix of the restriction to `s`, on its RREF basis.
    pub fn restrict(&self, s: &Subspace) -> Result<QBicForm> {
        if s.ambient() != self.dim() {
            return Err(Error::Dimension(
                "subspace ambient differs from the form's dimension".into(),
            ));
        }
        let u = s.basis();
        let g = u
            .frobenius_twist(self.e, 1)
            .mul(&self.gram)?
            .mul(&u.transpose())?;
        QBicForm::new(g, self.e)
    }

    /// The same form over a field containing this one.
    pub fn extend_to(&self, target: &Arc<FieldCtx>) -> Result<QBicForm> {
        if **target == **self.ctx() {
            return Ok(self.clone());
        }
        QBicForm::new(self.gram.embed(target)?, self.e)
    }

    pub fn kernels(&self) -> Kernels {
        let left = self.gram.kernel();
        let right = self.gram.transpose().kernel();
        let right_preimage = right.frobenius_preimage(self.e);
        Kernels {
            left,
            right,
            right_preimage,
        }
    }

    /// `rad = Fr*(V)^perp ∩ Fr^{-1}(V^perp)`.
    pub fn radical(&self) -> Subspace {
        let k = self.kernels();
        k.left.intersect(&k.right_preimage).expect("same ambient")
    }

    pub fn orthogonal(&self, s: &Subspace, side: Side) -> Result<Subspace> {
        if s.ambient() != self.dim() {
            return Err(Error::Dimension(
                "subspace ambient differs from the form's dimension".into(),
            ));
        }
        Ok(match side {
            Side::Left => s.basis().mul(&self.gram)?.kernel(),
            Side::Right => s.basis().mul(&self.gram.transpose())?.kernel(),
        })
    }

    /// `Fr*(S)^perp = {w : beta(s^(q), w) = 0 for s in S}`.
    pub fn twisted_orthogonal(&self, s: &Subspace) -> Subspace {
        self.orthogonal(&s.frobenius_twist(self.e, 1), Side::Left)
            .expect("same ambient")
    }

    /// `Fr^{-1}(S^perp) = {w : beta(w^(q), s) = 0 for s in S}`.
    pub fn preimage_orthogonal(&self, s: &Subspace) -> Subspace {
        self.orthogonal(s, Side::Right)
            .expect("same ambient")
            .frobenius_preimage(self.e)
    }

    /// The perp-filtration `M_0 = rad`, `M_i = Fr*(Fr*(M_{i-1})^perp)^perp`,
    /// returned with `dim + 1` terms (it stabilizes well before that).
    pub fn perp_filtration(&self) -> Vec<Subspace> {
        let mut chain = vec![self.radical()];
        for _ in 0..self.dim() {
            let last = chain.last().unwrap();
            let outer = self.twisted_orthogonal(last);
            chain.push(self.twisted_orthogonal(&outer));
        }
        chain
    }

    /// `{x : x^T B^(q^level) s = 0 for s in S}`: orthogonal with respect to the
    /// `q^level`-twisted form, landing one twist higher.
    fn perp_up(&self, s: &Subspace, level: i64) -> Subspace {
        let b = self.twisted_gram(level);
        s.basis()
            .mul(&b.transpose())
            .expect("same ambient")
            .kernel()
    }

    /// Subspaces `W_i ⊆ Fr^{2i-1,*}(V)` of the Fr*(perp)-filtration together
    /// with their Frobenius-twisted orthogonals, `i = 0..=dim`.
    pub fn frstar_perp_chain(&self) -> Vec<(Subspace, Subspace)> {
        let mut w = self.radical().frobenius_twist(self.e, -1);
        let mut out = vec![(w.clone(), self.perp_up(&w, -1))];
        for i in 1..=self.dim() as i64 {
            let x = self.perp_up(&w, 2 * i - 3);
            w = self.perp_up(&x, 2 * i - 2);
            let wp = self.perp_up(&w, 2 * i - 1);
            out.push((w.clone(), wp));
        }
        out
    }

    /// Dimension pairs `(dim W_i, dim W_i^{Fr*(perp)})`.
    pub fn frstar_perp_filtration(&self) -> Vec<(usize, usize)> {
        self.frstar_perp_chain()
            .iter()
            .map(|(a, b)| (a.dim(), b.dim()))
            .collect()
    }

    pub fn invariant_profile(&self) -> FiltrationProfile {
        let m = self.perp_filtration();
        let m_perp_dims = m.iter().map(|s| self.twisted_orthogonal(s).dim()).collect();
        FiltrationProfile {
            dim: self.dim(),
            rank: self.rank(),
            m_dims: m.iter().map(Subspace::dim).collect(),
            m_perp_dims,
            w_dims: self.frstar_perp_filtration(),
        }
    }

    /// Orthogonal-complement criterion: with `W = Fr*(S)^perp ∩ Fr^{-1}(S^perp)`,
    /// S has a complement iff `dim V - dim S = dim W - dim (W ∩ S)`; it is
    /// unique exactly when `W ∩ S = 0`.
    pub fn has_orthogonal_complement(&self, s: &Subspace) -> Result<ComplementCheck> {
        if s.ambient() != self.dim() {
            return Err(Error::Dimension(
                "subspace ambient differs from the form's dimension".into(),
            ));
        }
        let w = self
            .twisted_orthogonal(s)
            .intersect(&self.preimage_orthogonal(s))?;
        let ws = w.intersect(s)?;
        let exists = self.dim() - s.dim() == w.dim() - ws.dim();
        let complement = (exists && ws.is_zero()).then_some(w);
        Ok(ComplementCheck { exists, complement })
    }

    /// Whether `restrict(s)` vanishes identically.
    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        self.restrict(s).map(|r| r.gram.is_zero()).unwrap_or(false)
    }

    /// Pointwise check of `beta(v^(q), v) = 0` on a list of vectors.
    pub fn all_isotropic(&self, vs: &[Vec<Scalar>]) -> bool {
        vs.iter().all(|v| self.self_pairing(v).is_zero())
    }

    /// `v^(q)` for a vector of this form's field.
    pub fn twist_vec(&self, v: &[Scalar], k: i64) -> Vec<Scalar> {
        vec_twist(self.ctx(), self.e, k, v)
    }
}

/// Geometric type `N_1^{a_1} ⊕ N_2^{a_2} ⊕ ... ⊕ 1^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeSignature {
    /// `nilpotent[k - 1] = a_k`, with no trailing zeros.
    nilpotent: Vec<usize>,
    ones: usize,
}

impl TypeSignature {
    pub fn new(mut nilpotent: Vec<usize>, ones: usize) -> TypeSignature {
        while nilpotent.last() == Some(&0) {
            nilpotent.pop();
        }
        TypeSignature { nilpotent, ones }
    }

    /// `1^n`.
    pub fn nonsingular(n: usize) -> TypeSignature {
        TypeSignature::new(vec![], n)
    }

    pub fn dim(&self) -> usize {
        self.ones
            + self
                .nilpotent
                .iter()
                .enumerate()
                .map(|(i, a)| (i + 1) * a)
                .sum::<usize>()
    }

    /// Number of `N_k` blocks.
    pub fn count(&self, k: usize) -> usize {
        assert!(k >= 1);
        self.nilpotent.get(k - 1).copied().unwrap_or(0)
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    /// Block sizes in Gram order: every `N_k` ascending in k, then the unit blocks.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        for (i, &a) in self.nilpotent.iter().enumerate() {
            out.extend(std::iter::repeat_n(Block::Nilpotent(i + 1), a));
        }
        out.extend(std::iter::repeat_n(Block::One, self.ones));
        out
    }

    /// Every signature of total dimension `dim`.
    pub fn all_of_dim(dim: usize) -> Vec<TypeSignature> {
        fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if n == 0 {
                out.push(cur.clone());
                return;
            }
            for k in (1..=max.min(n)).rev() {
                cur.push(k);
                partitions(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for ones in (0..=dim).rev() {
            let mut parts = Vec::new();
            partitions(dim - ones, dim - ones, &mut Vec::new(), &mut parts);
            for part in parts {
                let mut counts = vec![0; dim];
                for k in part {
                    counts[k - 1] += 1;
                }
                out.push(TypeSignature::new(counts, ones));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Nilpotent(usize),
    One,
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: String, a: usize| match a {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{a}")),
        };
        for (i, &a) in self.nilpotent.iter().enumerate() {
            push(format!("N{}", i + 1), a);
        }
        push("1".into(), self.ones);
        if parts.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl FromStr for TypeSignature {
    type Err = Error;

    /// Accepts `N2+1+1+1`, `N2+1^3`, `0+1^3` (`0` is `N1`), `N1^4`.
    fn from_str(s: &str) -> Result<TypeSignature> {
        let bad = || Error::Parse(format!("bad type signature {s:?}"));
        let mut nil = Vec::new();
        let mut ones = 0;
        for tok in s.trim().split('+').map(str::trim) {
            let (base, exp) = match tok.split_once('^') {
                Some((b, x)) => (b, x.parse::<usize>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            match base {
                "1" => ones += exp,
                "0" => bump(&mut nil, 1, exp),
                _ => {
                    let k = base
                        .strip_prefix('N')
                        .ok_or_else(bad)?
                        .parse::<usize>()
                        .map_err(|_| bad())?;
                    if k == 0 {
                        return Err(bad());
                    }
                    bump(&mut nil, k, exp);
                }
            }
        }
        Ok(TypeSignature::new(nil, ones))
    }
}

fn bump(nil: &mut Vec<usize>, k: usize, by: usize) {
    if nil.len() < k {
        nil.resize(k, 0);
    }
    nil[k - 1] += by;
}

/// The numerical invariants read off from both canonical filtrations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiltrationProfile {
    pub dim: usize,
    pub rank: usize,
    /// `dim M_i` for the perp-filtration.
    pub m_dims: Vec<usize>,
    /// `dim Fr*(M_i)^perp`.
    pub m_perp_dims: Vec<usize>,
    /// `(dim W_i, dim W_i^{Fr*(perp)})`.
    pub w_dims: Vec<(usize, usize)>,
}

/// Standard form of the given type.
pub fn standard_gram(sig: &TypeSignature, ctx: &Arc<FieldCtx>, e: u32) -> Result<QBicForm> {
    let n = sig.dim();
    let mut g = Matrix::zeros(ctx, n, n);
    let mut at = 0;
    for b in sig.blocks() {
        match b {
            Block::One => {
                g[(at, at)] = Scalar::ONE;
                at += 1;
            }
            Block::Nilpotent(k) => {
                for i in 0..k - 1 {
                    g[(at + i, at + i + 1)] = Scalar::ONE;
                }
                at += k;
            }
        }
    }
    QBicForm::new(g, e)
}

/// Profiles of all standard forms of one dimension.
#[derive(Debug)]
pub struct ProfileTable {
    dim: usize,
    by_profile: HashMap<FiltrationProfile, Vec<TypeSignature>>,
}

impl ProfileTable {
    pub fn build(ctx: &Arc<FieldCtx>, e: u32, dim: usize) -> Result<ProfileTable> {
        let mut by_profile: HashMap<FiltrationProfile, Vec<TypeSignature>> = HashMap::new();
        for sig in TypeSignature::all_of_dim(dim) {
            let prof = standard_gram(&sig, ctx, e)?.invariant_profile();
            by_profile.entry(prof).or_default().push(sig);
        }
        Ok(ProfileTable { dim, by_profile })
    }

    /// Cached table for `(p, e, dim)`, computed over GF(q^2).
    pub fn shared(p: u32, e: u32, dim: usize) -> Result<Arc<ProfileTable>> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32, usize), Arc<ProfileTable>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&(p, e, dim)) {
            return Ok(t.clone());
        }
        let ctx = FieldCtx::get(p, 2 * e)?;
        let t = Arc::new(ProfileTable::build(&ctx, e, dim)?);
        Ok(cache
            .lock()
            .unwrap()
            .entry((p, e, dim))
            .or_insert(t)
            .clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Groups of signatures that share a profile; empty when the table is injective.
    pub fn collisions(&self) -> Vec<Vec<TypeSignature>> {
        let mut out: Vec<Vec<TypeSignature>> = self
            .by_profile
            .values()
            .filter(|v| v.len() > 1)
            .cloned()
            .collect();
        out.sort();
        out
    }

    pub fn is_injective(&self) -> bool {
        self.by_profile.values().all(|v| v.len() == 1)
    }

    pub fn lookup(&self, prof: &FiltrationProfile) -> Result<TypeSignature> {
        match self.by_profile.get(prof).map(Vec::as_slice) {
            None | Some([]) => Err(Error::NoMatch),
            Some([one]) => Ok(one.clone()),
            Some(many) => Err(Error::AmbiguousMatch(
                many.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", "),
            )),
        }
    }
}

/// Geometric type of a form, by matching its invariant profile against the
/// standard forms of the same dimension.
pub fn classify(f: &QBicForm) -> Result<TypeSignature> {
    let table = ProfileTable::shared(f.ctx().p(), f.e(), f.dim())?;
    table.lookup(&f.invariant_profile())
}

/// `P D Q` with P, Q uniformly random invertible and D a rank-`rank` 0/1 diagonal.
pub fn random_form<R: Rng + ?Sized>(
    ctx: &Arc<FieldCtx>,
    e: u32,
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<QBicForm> {
    if rank > dim {
        return Err(Error::Invalid(format!(
            "rank {rank} exceeds dimension {dim}"
        )));
    }
    let p = Matrix::random_invertible(ctx, dim, rng);
    let q = Matrix::random_invertible(ctx, dim, rng);
    let d = Matrix::from_fn(ctx, dim, dim, |i, j| {
        if i == j && i < rank {
            Scalar::ONE
        } else {
            Scalar::ZERO
        }
    });
    QBicForm::new(p.mul(&d)?.mul(&q)?, e)
}

/// Largest search space accepted by [`automorphism_count_bruteforce`].
pub const AUTOMORPHISM_SEARCH_LIMIT: u128 = 1 << 24;

/// Number of invertible `g` over GF(p^d) with `Fr*(g)^T B g = B`, by exhaustive
/// column-by-column search (pairings between columns are checked as soon as
/// both columns are chosen).
pub fn automorphism_count_bruteforce(f: &QBicForm, d: u32) -> Result<u64> {
    let ctx = f.ctx();
    let elems = ctx.subfield_elements(d)?;
    let n = f.dim();
    let space = (elems.len() as u128)
        .checked_pow((n * n) as u32)
        .unwrap_or(u128::MAX);
    if space > AUTOMORPHISM_SEARCH_LIMIT {
        return Err(Error::RangeExceeded(format!(
            "{} candidate matrices",
            space
        )));
    }
    let columns = crate::linalg::combinations(
        ctx,
        &(0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Scalar::ONE } else { Scalar::ZERO })
                    .collect()
            })
            .collect::<Vec<_>>(),
        &elems,
        n,
    );
    let b = f.gram();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut count = 0u64;

    fn search(
        f: &QBicForm,
        b: &Matrix,
        columns: &[Vec<Scalar>],
        chosen: &mut Vec<usize>,
        count: &mut u64,
    ) {
        let n = f.dim();
        let j = chosen.len();
        if j == n {
            let cols: Vec<Vec<Scalar>> = chosen.iter().map(|&c| columns[c].clone()).collect();
            if Subspace::span(f.ctx(), n, &cols).dim() == n {
                *count += 1;
            }
            return;
        }
        for (ci, c) in columns.iter().enumerate() {
            if f.pair(c, c) != b[(j, j)] {
                continue;
            }
            let ok = chosen.iter().enumerate().all(|(i, &prev)| {
                let u = &columns[prev];
                f.pair(u, c) == b[(i, j)] && f.pair(c, u) == b[(j, i)]
            });
            if ok {
                chosen.push(ci);
                search(f, b, columns, chosen, count);
                chosen.pop();
            }
        }
    }

    search(f, b, &columns, &mut chosen, &mut count);
    Ok(count)
}
