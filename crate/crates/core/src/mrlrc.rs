//! Maximally recoverable locally recoverable codes with unequal locality.
//!
//! The generator is block diagonal in the local parts and carries `h` global
//! parity columns on the right:
//!
//! ```text
//! [ G_0  0   ...  0        P_0     ]
//! [ 0    G_1 ...  0        P_1     ]
//! [ ...                    ...     ]
//! [ 0    0   ...  G_{l-1}  P_{l-1} ]
//! ```
//!
//! Each `G_i` is a `k_i x n_i` Cauchy matrix over the base field `GF(q)`, and
//! `P_i` is `diag(1, a^i, a^(2i), ..., a^((h-1)i))` stacked on zeros, with `a`
//! primitive in `GF(q^d)`. For `d` at least [`field_degree_bound`] every
//! puncturing that removes `n_i - k_i` coordinates from each local group leaves
//! an MDS code.

use std::ops::Range;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::completion::{self, CompletionError, VerificationReport, DEFAULT_FAILURE_CAP};
use crate::field::Field;
use crate::gf::{Elem, Embedding, GaloisField, GfError};
use crate::matrix::{cauchy, Matrix, MatrixError, Solution};
use crate::GfMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MrLrcError {
    #[error("profile violation: {0}")]
    ProfileViolation(String),
    #[error("base field of order {q} is too small: {needed} distinct points needed")]
    FieldTooSmall { q: u64, needed: u64 },
    #[error("extension degree {d} is below the guaranteed bound {bound}")]
    DegreeTooSmall { d: u32, bound: u32 },
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unrecoverable erasure pattern: surviving columns have rank {rank} < {needed}")]
    Unrecoverable { rank: usize, needed: usize },
    #[error("received symbols are not consistent with any codeword")]
    InconsistentCodeword,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

/// Group sizes `n_i`, local dimensions `k_i` and number of global parities `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityProfile {
    pub ell: usize,
    pub h: usize,
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
}

impl LocalityProfile {
    pub fn new(ell: usize, h: usize, ns: Vec<usize>, ks: Vec<usize>) -> Result<Self, MrLrcError> {
        let p = LocalityProfile { ell, h, ns, ks };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MrLrcError> {
        if self.ell == 0 {
            return Err(MrLrcError::ProfileViolation("at least one local group is required".into()));
        }
        if self.ns.len() != self.ell || self.ks.len() != self.ell {
            return Err(MrLrcError::ProfileViolation(format!(
                "ell = {} but {} group sizes and {} dimensions given",
                self.ell,
                self.ns.len(),
                self.ks.len()
            )));
        }
        if let Some(i) = (0..self.ell).find(|&i| self.ks[i] == 0 || self.ns[i] < self.ks[i]) {
            return Err(MrLrcError::ProfileViolation(format!(
                "group {i} needs n_i >= k_i >= 1 (n = {}, k = {})",
                self.ns[i], self.ks[i]
            )));
        }
        Ok(())
    }

    /// Message length `K = sum k_i`.
    pub fn k_total(&self) -> usize {
        self.ks.iter().sum()
    }

    /// Code length `N = sum n_i + h`.
    pub fn n_total(&self) -> usize {
        self.ns.iter().sum::<usize>() + self.h
    }

    pub fn group_columns(&self, i: usize) -> Range<usize> {
        let start: usize = self.ns[..i].iter().sum();
        start..start + self.ns[i]
    }

    pub fn group_rows(&self, i: usize) -> Range<usize> {
        let start: usize = self.ks[..i].iter().sum();
        start..start + self.ks[i]
    }

    pub fn global_columns(&self) -> Range<usize> {
        let start: usize = self.ns.iter().sum();
        start..start + self.h
    }

    /// Local group owning column `c`, `None` for global columns.
    pub fn group_of_column(&self, c: usize) -> Option<usize> {
        (0..self.ell).find(|&i| self.group_columns(i).contains(&c))
    }
}

/// Smallest extension degree for which the construction is guaranteed to be
/// maximally recoverable: 1 when `h <= 1`, else `(l-1) * floor(h/2) * ceil(h/2) + 1`.
pub fn field_degree_bound(profile: &LocalityProfile) -> u32 {
    let h = profile.h as u32;
    if h <= 1 {
        return 1;
    }
    (profile.ell as u32 - 1) * (h / 2) * h.div_ceil(2) + 1
}

/// A constructed code together with the fields it lives in.
#[derive(Debug, Clone)]
pub struct MrLrcCode {
    profile: LocalityProfile,
    base_field: GaloisField,
    ext_field: GaloisField,
    alpha: Elem,
    locals: Vec<GfMatrix>,
    parities: Vec<GfMatrix>,
    generator: GfMatrix,
}

/// Per-part outcome of [`verify_mr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrVerification {
    /// Sweep over all admissible full-size minors of the generator.
    pub global: VerificationReport,
    /// Whether each local `G_i` is MDS on its own.
    pub local_mds: Vec<bool>,
}

impl MrVerification {
    pub fn passed(&self) -> bool {
        self.global.passed && self.local_mds.iter().all(|&ok| ok)
    }

    pub fn failed_groups(&self) -> Vec<usize> {
        self.local_mds.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect()
    }
}

/// Result of [`decode_erasures`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<Elem>,
    pub codeword: Vec<Elem>,
    /// Groups whose message block was recovered from local symbols only.
    pub locally_repaired: Vec<usize>,
    /// Whether the global solve over all surviving columns was needed.
    pub used_global_solve: bool,
}

/// Result of [`update_symbol`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Update {
    pub codeword: Vec<Elem>,
    /// Recomputed columns, ascending.
    pub touched: Vec<usize>,
}

impl MrLrcCode {
    /// Assembles and validates a code from its parts. `locals` and `parities`
    /// must already live in `ext_field`.
    pub fn from_parts(
        profile: LocalityProfile,
        base_field: GaloisField,
        ext_field: GaloisField,
        alpha: Elem,
        locals: Vec<GfMatrix>,
        parities: Vec<GfMatrix>,
    ) -> Result<Self, MrLrcError> {
        profile.validate()?;
        if base_field.p() != ext_field.p() || !ext_field.m().is_multiple_of(base_field.m()) {
            return Err(GfError::NoSubfield { p: ext_field.p(), sub: base_field.m(), m: ext_field.m() }.into());
        }
        if !ext_field.contains(alpha) {
            return Err(GfError::FieldMismatch(alpha.enc()).into());
        }
        if locals.len() != profile.ell || parities.len() != profile.ell {
            return Err(MrLrcError::InvariantViolation(format!(
                "{} local and {} parity blocks for {} groups",
                locals.len(),
                parities.len(),
                profile.ell
            )));
        }
        for i in 0..profile.ell {
            let (k, n) = (profile.ks[i], profile.ns[i]);
            if locals[i].shape() != (k, n) || parities[i].shape() != (k, profile.h) {
                return Err(MrLrcError::InvariantViolation(format!("block shapes of group {i}")));
            }
            if locals[i].field() != &ext_field || parities[i].field() != &ext_field {
                return Err(MrLrcError::Matrix(MatrixError::FieldMismatch));
            }
            if !locals[i].is_mds()? {
                return Err(MrLrcError::InvariantViolation(format!("local generator {i} is not MDS")));
            }
        }
        let (kk, nn) = (profile.k_total(), profile.n_total());
        let mut generator = Matrix::zeros(ext_field.clone(), kk, nn);
        for i in 0..profile.ell {
            let r0 = profile.group_rows(i).start;
            generator.put_block(r0, profile.group_columns(i).start, &locals[i]);
            generator.put_block(r0, profile.global_columns().start, &parities[i]);
        }
        Ok(MrLrcCode { profile, base_field, ext_field, alpha, locals, parities, generator })
    }

    pub fn profile(&self) -> &LocalityProfile {
        &self.profile
    }

    pub fn base_field(&self) -> &GaloisField {
        &self.base_field
    }

    pub fn ext_field(&self) -> &GaloisField {
        &self.ext_field
    }

    /// Extension degree `d` of `GF(q^d)` over `GF(q)`.
    pub fn degree(&self) -> u32 {
        self.ext_field.m() / self.base_field.m()
    }

    pub fn alpha(&self) -> Elem {
        self.alpha
    }

    pub fn locals(&self) -> &[GfMatrix] {
        &self.locals
    }

    pub fn parities(&self) -> &[GfMatrix] {
        &self.parities
    }

    pub fn generator(&self) -> &GfMatrix {
        &self.generator
    }

    /// Checks that every `P_i` has the diagonal shape of the construction for
    /// this code's `alpha`.
    pub fn check_parity_shape(&self) -> Result<(), MrLrcError> {
        let f = &self.ext_field;
        for (i, p) in self.parities.iter().enumerate() {
            let expected = diagonal_parity(f, self.alpha, i, self.profile.ks[i], self.profile.h);
            if p != &expected {
                return Err(MrLrcError::InvariantViolation(format!(
                    "parity block {i} is not diag(alpha^0, alpha^{i}, ...) over zeros"
                )));
            }
        }
        Ok(())
    }
}

fn diagonal_parity(f: &GaloisField, alpha: Elem, i: usize, k: usize, h: usize) -> GfMatrix {
    let mut p = Matrix::zeros(f.clone(), k, h);
    for t in 0..h {
        p.set(t, t, f.pow(alpha, (t * i) as u64));
    }
    p
}

/// Builds the code over `GF(q^d)` from local Cauchy blocks over `q_field`.
///
/// Degrees below [`field_degree_bound`] are refused unless
/// `allow_below_bound` is set, since nothing is guaranteed there.
pub fn build_theorem3(
    profile: &LocalityProfile,
    q_field: &GaloisField,
    d: u32,
    allow_below_bound: bool,
) -> Result<MrLrcCode, MrLrcError> {
    profile.validate()?;
    let min_k = *profile.ks.iter().min().expect("ell >= 1");
    if profile.h > min_k {
        return Err(MrLrcError::ProfileViolation(format!(
            "h = {} exceeds min k_i = {min_k}",
            profile.h
        )));
    }
    let bound = field_degree_bound(profile);
    if d == 0 || (d < bound && !allow_below_bound) {
        return Err(MrLrcError::DegreeTooSmall { d, bound });
    }
    let needed = (0..profile.ell).map(|i| profile.ks[i] + profile.ns[i]).max().unwrap() as u64;
    if q_field.order() < needed {
        return Err(MrLrcError::FieldTooSmall { q: q_field.order(), needed });
    }
    let ext = GaloisField::new(q_field.p(), q_field.m() * d, None)?;
    let emb = Embedding::new(q_field, &ext)?;
    let alpha = ext.primitive_element();
    let points: Vec<Elem> = q_field.elements().take(needed as usize).collect();

    let mut locals = Vec::with_capacity(profile.ell);
    let mut parities = Vec::with_capacity(profile.ell);
    for i in 0..profile.ell {
        let (k, n) = (profile.ks[i], profile.ns[i]);
        let local = cauchy(q_field, &points[..k], &points[k..k + n])?;
        locals.push(local.map_into(ext.clone(), |x| emb.apply(*x)));
        parities.push(diagonal_parity(&ext, alpha, i, k, profile.h));
    }
    MrLrcCode::from_parts(profile.clone(), q_field.clone(), ext, alpha, locals, parities)
}

/// Column sets of size `K` with at most `k_i` columns in each local group, in
/// ascending lexicographic order.
pub fn admissible_column_sets(profile: &LocalityProfile) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(profile.k_total());
    fill_groups(profile, 0, &mut current, &mut out);
    out.sort();
    out
}

fn fill_groups(profile: &LocalityProfile, group: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let k_total = profile.k_total();
    if group == profile.ell {
        let rest = k_total - current.len();
        if rest <= profile.h {
            for g in profile.global_columns().combinations(rest) {
                let mut set = current.clone();
                set.extend(g);
                out.push(set);
            }
        }
        return;
    }
    let cols = profile.group_columns(group);
    let cap = profile.ks[group].min(k_total - current.len());
    for a in 0..=cap {
        for pick in cols.clone().combinations(a) {
            let len = current.len();
            current.extend(pick);
            fill_groups(profile, group + 1, current, out);
            current.truncate(len);
        }
    }
}

/// Checks every admissible full-size minor and the MDS property of each local block.
pub fn verify_mr(code: &MrLrcCode) -> Result<MrVerification, MrLrcError> {
    let global = completion::verify_nonvanishing(
        &code.generator,
        admissible_column_sets(&code.profile),
        DEFAULT_FAILURE_CAP,
    )?;
    let local_mds = code.locals.iter().map(|g| g.is_mds()).collect::<Result<_, _>>()?;
    Ok(MrVerification { global, local_mds })
}

fn check_symbols(code: &MrLrcCode, v: &[Elem], expected: usize) -> Result<(), MrLrcError> {
    if v.len() != expected {
        return Err(MrLrcError::LengthMismatch { expected, got: v.len() });
    }
    if let Some(bad) = v.iter().find(|x| !code.ext_field.contains(**x)) {
        return Err(GfError::FieldMismatch(bad.enc()).into());
    }
    Ok(())
}

/// `message * G`, computed group by group.
pub fn encode(code: &MrLrcCode, message: &[Elem]) -> Result<Vec<Elem>, MrLrcError> {
    let p = &code.profile;
    check_symbols(code, message, p.k_total())?;
    let f = &code.ext_field;
    let mut out = vec![Elem::ZERO; p.n_total()];
    let globals = p.global_columns();
    for i in 0..p.ell {
        let block = &message[p.group_rows(i)];
        let local = code.locals[i].left_mul_vec(block)?;
        out[p.group_columns(i)].copy_from_slice(&local);
        let parity = code.parities[i].left_mul_vec(block)?;
        for (slot, v) in out[globals.clone()].iter_mut().zip(parity) {
            *slot = f.add(slot, &v);
        }
    }
    Ok(out)
}

/// Solves `x * A = b` for a row vector `x`, where `A` has full row rank on the
/// supplied columns.
fn solve_left(a: &GfMatrix, b: &[Elem]) -> Result<Result<Vec<Elem>, usize>, MrLrcError> {
    let rhs = Matrix::new(a.field().clone(), b.len(), 1, b.to_vec())?;
    let rs = a.transpose().rank_and_solve(Some(&rhs))?;
    match rs.solution {
        Solution::Unique(x) => Ok(Ok(x.entries().to_vec())),
        Solution::Inconsistent if rs.rank == a.rows() => Err(MrLrcError::InconsistentCodeword),
        _ => Ok(Err(rs.rank)),
    }
}

/// Recovers the message from a received word with erasures (`None`).
///
/// Groups with at most `n_i - k_i` erasures are repaired from their own
/// symbols first; if any group remains, the message is solved from all
/// surviving columns, which succeeds exactly when they have rank `K`.
pub fn decode_erasures(code: &MrLrcCode, received: &[Option<Elem>]) -> Result<Decoded, MrLrcError> {
    let p = &code.profile;
    let n = p.n_total();
    if received.len() != n {
        return Err(MrLrcError::LengthMismatch { expected: n, got: received.len() });
    }
    if let Some(bad) = received.iter().flatten().find(|x| !code.ext_field.contains(**x)) {
        return Err(GfError::FieldMismatch(bad.enc()).into());
    }
    let mut message = vec![Elem::ZERO; p.k_total()];
    let mut work: Vec<Option<Elem>> = received.to_vec();
    let mut locally_repaired = Vec::new();
    for i in 0..p.ell {
        let cols = p.group_columns(i);
        let k = p.ks[i];
        let survivors: Vec<usize> = cols.clone().filter(|&c| received[c].is_some()).take(k).collect();
        if survivors.len() < k {
            continue;
        }
        let local_cols: Vec<usize> = survivors.iter().map(|c| c - cols.start).collect();
        let a = code.locals[i].select_columns(&local_cols)?;
        let b: Vec<Elem> = survivors.iter().map(|&c| received[c].unwrap()).collect();
        let block = solve_left(&a, &b)?.expect("square MDS block is invertible");
        message[p.group_rows(i)].copy_from_slice(&block);
        let refill = code.locals[i].left_mul_vec(&block)?;
        for (c, v) in cols.zip(refill) {
            work[c] = Some(v);
        }
        locally_repaired.push(i);
    }

    let used_global_solve = locally_repaired.len() < p.ell;
    if used_global_solve {
        let known: Vec<usize> = (0..n).filter(|&c| work[c].is_some()).collect();
        let a = code.generator.select_columns(&known)?;
        let b: Vec<Elem> = known.iter().map(|&c| work[c].unwrap()).collect();
        match solve_left(&a, &b)? {
            Ok(x) => message = x,
            Err(rank) => return Err(MrLrcError::Unrecoverable { rank, needed: p.k_total() }),
        }
    }
    let codeword = encode(code, &message)?;
    if received.iter().zip(&codeword).any(|(r, c)| r.is_some_and(|r| r != *c)) {
        return Err(MrLrcError::InconsistentCodeword);
    }
    Ok(Decoded { message, codeword, locally_repaired, used_global_solve })
}

/// Changes message symbol `t` of group `group` and recomputes only the
/// codeword columns that depend on it.
pub fn update_symbol(
    code: &MrLrcCode,
    codeword: &[Elem],
    group: usize,
    t: usize,
    new_value: Elem,
) -> Result<Update, MrLrcError> {
    let p = &code.profile;
    if group >= p.ell {
        return Err(MrLrcError::IndexOutOfRange(format!("group {group} of {}", p.ell)));
    }
    if t >= p.ks[group] {
        return Err(MrLrcError::IndexOutOfRange(format!(
            "message index {t} of group {group} with k = {}",
            p.ks[group]
        )));
    }
    check_symbols(code, codeword, p.n_total())?;
    if !code.ext_field.contains(new_value) {
        return Err(GfError::FieldMismatch(new_value.enc()).into());
    }
    let received: Vec<Option<Elem>> = codeword.iter().copied().map(Some).collect();
    let decoded = decode_erasures(code, &received)?;
    let row = p.group_rows(group).start + t;
    let f = &code.ext_field;
    let delta = f.sub(&new_value, &decoded.message[row]);
    let g_row = code.generator.row(row);
    let touched: Vec<usize> = (0..p.n_total()).filter(|&c| !f.is_zero(&g_row[c])).collect();
    let mut out = codeword.to_vec();
    for &c in &touched {
        out[c] = f.add(&out[c], &f.mul(&delta, &g_row[c]));
    }
    Ok(Update { codeword: out, touched })
}

/// `sum_{i<j} (j - i) * x_i * x_j`.
pub fn qh(xs: &[u64]) -> u64 {
    let mut acc = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            acc += (j - i) as u64 * xs[i] * xs[j];
        }
    }
    acc
}

/// Maximum of [`qh`] over all ways to write `h` as `ell` nonnegative parts,
/// by exhaustive enumeration.
pub fn qh_max(ell: usize, h: u64) -> u64 {
    assert!(ell >= 1, "at least one part");
    let mut best = 0;
    let mut xs = vec![0u64; ell];
    visit_compositions(&mut xs, 0, h, &mut |x| best = best.max(qh(x)));
    best
}

/// Calls `f` on every composition of `remaining` into `xs[pos..]`.
pub(crate) fn visit_compositions(xs: &mut [u64], pos: usize, remaining: u64, f: &mut impl FnMut(&[u64])) {
    if pos + 1 == xs.len() {
        xs[pos] = remaining;
        f(xs);
        return;
    }
    for v in 0..=remaining {
        xs[pos] = v;
        visit_compositions(xs, pos + 1, remaining - v, f);
    }
}
