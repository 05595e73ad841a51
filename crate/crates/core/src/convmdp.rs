//! Partial unit-memory convolutional codes with maximum distance profile.
//!
//! A code is given by `G(z) = G_0 + G_1 z + ... + G_mu z^mu` with `k x n`
//! coefficients. Its column distances are governed by the sliding matrices
//!
//! ```text
//! generator               parity-check
//! [ G_0 G_1 ... G_j ]     [ H_0            ]
//! [     G_0 ...     ]     [ H_1 H_0        ]
//! [          .  :   ]     [  :       .     ]
//! [             G_0 ]     [ H_j ...    H_0 ]
//! ```
//!
//! and the code is MDP exactly when every full-size minor of the window
//! matrix that is not forced to vanish by the block structure is nonzero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::completion::{self, CompletionError, SupportPattern, VerificationReport, DEFAULT_FAILURE_CAP};
use crate::field::Field;
use crate::gf::{linearly_independent_over, minimal_polynomial, Elem, Embedding, GaloisField, GfError};
use crate::matrix::{cauchy, vandermonde, Matrix, MatrixError};
use crate::poly::{Poly, PolyRing};
use crate::polymat::PolyMatrix;
use crate::GfMatrix;

/// Candidate evaluations allowed in [`column_distance_bruteforce`].
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvError {
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
    #[error("base field of order {q} is too small: {needed} distinct points needed")]
    FieldTooSmall { q: u64, needed: u64 },
    #[error("no element outside GF({q}) has a cubic minimal polynomial with constant term other than -1")]
    NoValidZ { q: u64 },
    #[error("brute force needs {evaluations} evaluations, limit is {limit}")]
    TooLarge { evaluations: u128, limit: u128 },
    #[error("window {0} is not supported, only j = 1")]
    UnsupportedWindow(usize),
    #[error("no full-rank parity-check matrix of degree <= {nu}: rank {rank} of {needed}")]
    Failure { nu: usize, rank: usize, needed: usize },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

/// An `(n, k, delta)` convolutional code with a polynomial generator matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvCode {
    n: usize,
    k: usize,
    field: GaloisField,
    coeffs: Vec<GfMatrix>,
    delta: usize,
}

impl ConvCode {
    /// Trailing zero coefficients are dropped. The declared degree is kept
    /// as given; [`ConvCode::check_degree`] compares it with the minors.
    pub fn new(field: GaloisField, coeffs: Vec<GfMatrix>, delta: usize) -> Result<Self, ConvError> {
        let Some(first) = coeffs.first() else {
            return Err(ConvError::ParameterViolation("no coefficient matrices".into()));
        };
        let (k, n) = first.shape();
        if k == 0 || k > n {
            return Err(ConvError::ParameterViolation(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        for c in &coeffs {
            if c.shape() != (k, n) {
                return Err(ConvError::ParameterViolation(format!(
                    "coefficient of shape {:?}, expected {:?}",
                    c.shape(),
                    (k, n)
                )));
            }
            if c.field() != &field {
                return Err(MatrixError::FieldMismatch.into());
            }
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(Matrix::is_zero) {
            coeffs.pop();
        }
        let code = ConvCode { n, k, field, coeffs, delta };
        if code.polymatrix().rank() < k {
            return Err(ConvError::InvariantViolation(format!("G(z) does not have rank {k}")));
        }
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coeffs(&self) -> &[GfMatrix] {
        &self.coeffs
    }

    pub fn memory(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn declared_degree(&self) -> usize {
        self.delta
    }

    pub fn polymatrix(&self) -> PolyMatrix<GaloisField> {
        PolyMatrix::from_coefficients(&self.coeffs)
    }

    /// Largest degree among the full-size minors of `G(z)`.
    pub fn computed_degree(&self) -> usize {
        self.polymatrix()
            .full_size_minors()
            .iter()
            .filter_map(|(_, m)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn check_degree(&self) -> Result<(), ConvError> {
        let computed = self.computed_degree();
        if computed != self.delta {
            return Err(ConvError::InvariantViolation(format!(
                "declared degree {} but the full-size minors have degree {computed}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Largest window `L` for which the column-distance bound can be met, with
/// the bounds `(n-k)(j+1) + 1` for `j = 0..=L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowBound {
    pub window: usize,
    pub bounds: Vec<usize>,
}

pub fn window_bound(n: usize, k: usize, delta: usize) -> Result<WindowBound, ConvError> {
    if k == 0 || k >= n {
        return Err(ConvError::ParameterViolation(format!("need 1 <= k <= n - 1, got k = {k}, n = {n}")));
    }
    let window = delta / k + delta / (n - k);
    let bounds = (0..=window).map(|j| (n - k) * (j + 1) + 1).collect();
    Ok(WindowBound { window, bounds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Block `(r, c)` is `coeffs[c - r]`.
    Generator,
    /// Block `(r, c)` is `coeffs[r - c]`.
    ParityCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlidingMatrix {
    pub j: usize,
    pub layout: Layout,
    pub body: GfMatrix,
}

/// Block-Toeplitz window matrix of `j + 1` block rows and columns;
/// coefficients past the end of `coeffs` are zero.
pub fn sliding(coeffs: &[GfMatrix], j: usize, layout: Layout) -> SlidingMatrix {
    let first = coeffs.first().expect("at least one coefficient");
    let (r, c) = first.shape();
    let mut body = Matrix::zeros(first.field().clone(), (j + 1) * r, (j + 1) * c);
    for br in 0..=j {
        for bc in 0..=j {
            let lag = match layout {
                Layout::Generator if bc >= br => bc - br,
                Layout::ParityCheck if br >= bc => br - bc,
                _ => continue,
            };
            if let Some(block) = coeffs.get(lag) {
                body.put_block(br * r, bc * c, block);
            }
        }
    }
    SlidingMatrix { j, layout, body }
}

/// Column sets of the generator window `j` whose minor is not forced to
/// vanish: at most `s k` columns among the first `s n`, for `s = 1..=j`.
pub fn nontrivial_sets_generator(n: usize, k: usize, j: usize) -> Vec<Vec<usize>> {
    let size = (j + 1) * k;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    // element number s*k (0-based) must lie at or beyond column s*n
    let admissible = |idx: usize, c: usize| idx == 0 || !idx.is_multiple_of(k) || c >= (idx / k) * n;
    collect_sets((j + 1) * n, size, 0, &mut current, &admissible, &mut out);
    out
}

/// Column sets of the parity-check window `j` whose minor is not forced to
/// vanish: at least `s (n - k)` columns among the first `s n`, for `s = 1..=j`.
pub fn nontrivial_sets_paritycheck(n: usize, k: usize, j: usize) -> Vec<Vec<usize>> {
    let r = n - k;
    let size = (j + 1) * r;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    // element number s*r - 1 (0-based) must lie before column s*n
    let admissible = |idx: usize, c: usize| {
        let s = (idx + 1) / r;
        !(idx + 1).is_multiple_of(r) || s > j || c < s * n
    };
    if r > 0 {
        collect_sets((j + 1) * n, size, 0, &mut current, &admissible, &mut out);
    }
    out
}

fn collect_sets(
    total: usize,
    size: usize,
    next: usize,
    current: &mut Vec<usize>,
    admissible: &impl Fn(usize, usize) -> bool,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    let idx = current.len();
    for c in next..=total - (size - idx) {
        if admissible(idx, c) {
            current.push(c);
            collect_sets(total, size, c + 1, current, admissible, out);
            current.pop();
        }
    }
}

/// Sweeps the non-trivial minors of the generator window `j`.
pub fn verify_window(code: &ConvCode, j: usize) -> Result<VerificationReport, ConvError> {
    let window = sliding(&code.coeffs, j, Layout::Generator);
    let sets = nontrivial_sets_generator(code.n, code.k, j);
    Ok(completion::verify_nonvanishing(&window.body, sets, DEFAULT_FAILURE_CAP)?)
}

/// MDP test at the window `L` given by the declared degree.
pub fn is_mdp(code: &ConvCode) -> Result<VerificationReport, ConvError> {
    let bound = window_bound(code.n, code.k, code.delta)?;
    verify_window(code, bound.window)
}

/// Exact `j`-th column distance by exhaustion over truncated inputs
/// `u_0, ..., u_j` with `u_0` taken up to a scalar.
pub fn column_distance_bruteforce(code: &ConvCode, j: usize) -> Result<usize, ConvError> {
    let f = &code.field;
    let q = f.order() as u128;
    let (k, n) = (code.k, code.n);
    let reps = (q.pow(k as u32) - 1) / (q - 1);
    let evaluations = q
        .checked_pow((k * j) as u32)
        .and_then(|t| t.checked_mul(reps))
        .unwrap_or(u128::MAX);
    if evaluations > BRUTE_FORCE_LIMIT {
        return Err(ConvError::TooLarge { evaluations, limit: BRUTE_FORCE_LIMIT });
    }
    let q = q as u64;
    let tails = q.pow((k * j) as u32);
    let vector = |mut idx: u64| -> Vec<Elem> {
        (0..k)
            .map(|_| {
                let e = Elem::from_enc(idx % q);
                idx /= q;
                e
            })
            .collect()
    };
    let products = |u: &[Elem]| -> Vec<Vec<Elem>> {
        code.coeffs.iter().map(|g| g.left_mul_vec(u).expect("length k")).collect()
    };
    let block = q.pow(k as u32);
    // u G_i for every u in F^k, indexed by the base-q encoding of u
    let table: Vec<Vec<Vec<Elem>>> = if j > 0 { (0..block).map(|idx| products(&vector(idx))).collect() } else { Vec::new() };

    // representatives: first nonzero coordinate equal to one
    let leads: Vec<Vec<Elem>> = (0..k)
        .flat_map(|lead| {
            let free = q.pow((k - 1 - lead) as u32);
            (0..free).map(move |rest| (lead, rest))
        })
        .map(|(lead, rest)| {
            let mut u = vec![Elem::ZERO; k];
            u[lead] = Elem::ONE;
            for (t, e) in vector(rest).into_iter().take(k - 1 - lead).enumerate() {
                u[lead + 1 + t] = e;
            }
            u
        })
        .collect();

    let best = leads
        .par_iter()
        .filter_map(|u0| {
            let head = products(u0);
            if head[0].iter().all(|x| f.is_zero(x)) {
                return None;
            }
            let mut best = usize::MAX;
            let mut out = vec![Elem::ZERO; n];
            let mut inputs: Vec<&Vec<Vec<Elem>>> = vec![&head; j + 1];
            for tail in 0..tails {
                let mut rest = tail;
                for slot in inputs.iter_mut().skip(1) {
                    *slot = &table[(rest % block) as usize];
                    rest /= block;
                }
                let mut weight = 0;
                for t in 0..=j {
                    out.iter_mut().for_each(|x| *x = Elem::ZERO);
                    for i in 0..=t.min(code.memory()) {
                        for (o, v) in out.iter_mut().zip(&inputs[t - i][i]) {
                            *o = f.add(o, v);
                        }
                    }
                    weight += out.iter().filter(|x| !f.is_zero(x)).count();
                    if weight >= best {
                        break;
                    }
                }
                best = best.min(weight);
            }
            Some(best)
        })
        .min();
    best.ok_or_else(|| ConvError::InvariantViolation("every nonzero u_0 gives v_0 = 0".into()))
}

/// Extension degree `ceil((delta^2 - 1) / 4) + 1` used by the diagonal construction.
pub fn diag_extension_degree(delta: usize) -> u32 {
    ((delta * delta + 2) / 4 + 1) as u32
}

fn extension_of(base: &GaloisField, d: u32) -> Result<(GaloisField, Embedding), ConvError> {
    let ext = GaloisField::new(base.p(), base.m() * d, None)?;
    let emb = Embedding::new(base, &ext)?;
    Ok((ext, emb))
}

/// `[X | 0_{k x k}]` for a `k x (n - k)` block `X`.
fn pad_memory_block(x: &GfMatrix, n: usize) -> GfMatrix {
    let mut g1 = Matrix::zeros(x.field().clone(), x.rows(), n);
    g1.put_block(0, 0, x);
    g1
}

/// `[0_{(2k-n) x (n-k)}; T]` with `T` lower-triangular Toeplitz with first column `betas`.
fn toeplitz_block(field: &GaloisField, k: usize, betas: &[Elem]) -> GfMatrix {
    let r = betas.len();
    let mut x = Matrix::zeros(field.clone(), k, r);
    let offset = k - r;
    for row in 0..r {
        for col in 0..=row {
            x.set(offset + row, col, betas[row - col]);
        }
    }
    x
}

/// Superregular Cauchy `G_0` over `GF(q)` and `X = [diag(a, a^2, ..., a^(n-k)); 0]`
/// with `a` primitive in `GF(q^d)`.
pub fn build_diag(n: usize, k: usize, q_field: &GaloisField) -> Result<ConvCode, ConvError> {
    if k >= n || 2 * k <= n {
        return Err(ConvError::ParameterViolation(format!("need n - k < k < n, got n = {n}, k = {k}")));
    }
    let delta = n - k;
    if q_field.order() < (k + n) as u64 {
        return Err(ConvError::FieldTooSmall { q: q_field.order(), needed: (k + n) as u64 });
    }
    let d = diag_extension_degree(delta);
    let (ext, emb) = extension_of(q_field, d)?;
    let alpha = ext.primitive_element();
    let mp = minimal_polynomial(&ext, alpha, q_field.m())?;
    if mp.degree() != Some(d as usize) {
        return Err(ConvError::InvariantViolation(format!(
            "primitive element has minimal polynomial of degree {:?}, expected {d}",
            mp.degree()
        )));
    }
    let points: Vec<Elem> = q_field.elements().take(k + n).collect();
    let g0 = cauchy(q_field, &points[..k], &points[k..])?;
    if !g0.is_superregular() {
        return Err(ConvError::InvariantViolation("Cauchy block is not superregular".into()));
    }
    let g0 = g0.map_into(ext.clone(), |x| emb.apply(*x));
    let mut x = Matrix::zeros(ext.clone(), k, delta);
    for i in 0..delta {
        x.set(i, i, ext.pow(alpha, (i + 1) as u64));
    }
    let g1 = pad_memory_block(&x, n);
    ConvCode::new(ext, vec![g0, g1], delta)
}

fn vandermonde_g0(q_field: &GaloisField, ext: &GaloisField, emb: &Embedding, n: usize, k: usize) -> Result<GfMatrix, ConvError> {
    let points: Vec<Elem> = q_field.elements().take(n).collect();
    let g0 = vandermonde(q_field, &points, k)?;
    Ok(g0.map_into(ext.clone(), |x| emb.apply(*x)))
}

/// `(n, n-2, 2)` code over `GF(q^2)`: Vandermonde `G_0` and Toeplitz `X`
/// from `(g, 1)`, `g` primitive in `GF(q^2)`.
pub fn build_vdm2(n: usize, q_field: &GaloisField) -> Result<ConvCode, ConvError> {
    if n < 4 || q_field.order() < n as u64 {
        return Err(ConvError::ParameterViolation(format!(
            "need q >= n >= 4, got n = {n}, q = {}",
            q_field.order()
        )));
    }
    let k = n - 2;
    let (ext, emb) = extension_of(q_field, 2)?;
    let betas = [ext.primitive_element(), Elem::ONE];
    if !linearly_independent_over(&ext, &betas, q_field.m())? {
        return Err(ConvError::InvariantViolation("Toeplitz entries are dependent over the base field".into()));
    }
    let g0 = vandermonde_g0(q_field, &ext, &emb, n, k)?;
    let g1 = pad_memory_block(&toeplitz_block(&ext, k, &betas), n);
    ConvCode::new(ext, vec![g0, g1], 2)
}

/// Smallest element of `ext3` outside the base field whose minimal
/// polynomial over the base has constant term other than `-1`.
pub fn find_z(q_field: &GaloisField, ext3: &GaloisField) -> Result<Elem, ConvError> {
    let a = q_field.m();
    if ext3.p() != q_field.p() || ext3.m() != 3 * a {
        return Err(ConvError::ParameterViolation(format!(
            "GF({}) is not a cubic extension of GF({})",
            ext3.order(),
            q_field.order()
        )));
    }
    let minus_one = ext3.neg(&Elem::ONE);
    for z in ext3.elements() {
        if ext3.in_subfield(z, a)? {
            continue;
        }
        let mp = minimal_polynomial(ext3, z, a)?;
        if mp.coeffs()[0] != minus_one {
            return Ok(z);
        }
    }
    Err(ConvError::NoValidZ { q: q_field.order() })
}

/// `(n, n-3, 3)` code over `GF(q^3)`: Vandermonde `G_0` and Toeplitz `X`
/// from `(z, z^2, 1)` with `z` from [`find_z`].
pub fn build_vdm3(n: usize, q_field: &GaloisField) -> Result<ConvCode, ConvError> {
    if n < 7 || q_field.order() < n as u64 {
        return Err(ConvError::ParameterViolation(format!(
            "need q >= n >= 7, got n = {n}, q = {}",
            q_field.order()
        )));
    }
    let k = n - 3;
    let (ext, emb) = extension_of(q_field, 3)?;
    let z = find_z(q_field, &ext)?;
    let betas = [z, ext.mul(&z, &z), Elem::ONE];
    if !linearly_independent_over(&ext, &betas, q_field.m())? {
        return Err(ConvError::InvariantViolation("Toeplitz entries are dependent over the base field".into()));
    }
    let g0 = vandermonde_g0(q_field, &ext, &emb, n, k)?;
    let g1 = pad_memory_block(&toeplitz_block(&ext, k, &betas), n);
    ConvCode::new(ext, vec![g0, g1], 3)
}

/// Left-primeness from the gcd of all full-size minors of `G(z)`.
pub fn noncatastrophic_by_gcd(code: &ConvCode) -> bool {
    let pm = code.polymatrix();
    let ring = pm.ring().clone();
    let g = pm
        .full_size_minors()
        .into_iter()
        .fold(ring.zero(), |acc, (_, m)| ring.gcd(&acc, &m));
    g.degree() == Some(0)
}

/// `Some(true)` for memory-one generators with MDS `G_0` whose `G_1` vanishes
/// on the last `k` columns; `None` when the shape does not apply.
pub fn noncatastrophic_by_shape(code: &ConvCode) -> Option<bool> {
    if code.memory() > 1 || !code.coeffs[0].is_mds().unwrap_or(false) {
        return None;
    }
    let (k, n) = (code.k, code.n);
    let tail_zero = code.coeffs.get(1).is_none_or(|g1| {
        (0..k).all(|r| (n - k..n).all(|c| code.field.is_zero(g1.get(r, c))))
    });
    tail_zero.then_some(true)
}

pub fn is_noncatastrophic(code: &ConvCode) -> bool {
    noncatastrophic_by_shape(code).unwrap_or_else(|| noncatastrophic_by_gcd(code))
}

/// Polynomial row vectors `h(z)` of degree at most `e` with `h(z) G(z)^T = 0`.
fn annihilators(code: &ConvCode, e: usize) -> Vec<Vec<Poly<Elem>>> {
    let f = &code.field;
    let (k, n, mu) = (code.k, code.n, code.memory());
    // unknowns h_0..h_e stacked; equation block t collects sum_i h_i G_{t-i}^T
    let rows = (mu + e + 1) * k;
    let cols = (e + 1) * n;
    let mut a = Matrix::zeros(f.clone(), rows, cols);
    for t in 0..=mu + e {
        for i in 0..=e.min(t) {
            let Some(g) = code.coeffs.get(t - i) else { continue };
            for r in 0..k {
                for c in 0..n {
                    a.set(t * k + r, i * n + c, *g.get(r, c));
                }
            }
        }
    }
    let ring = PolyRing::new(f.clone());
    a.kernel()
        .into_iter()
        .map(|v| {
            (0..n)
                .map(|c| ring.from_coeffs((0..=e).map(|i| v[i * n + c]).collect()))
                .collect()
        })
        .collect()
}

/// Parity-check coefficients `H_0, ..., H_nu` with `H(z) G(z)^T = 0`, built
/// from kernel vectors of increasing degree up to the code degree.
pub fn parity_check_from_generator(code: &ConvCode) -> Result<Vec<GfMatrix>, ConvError> {
    let (k, n) = (code.k, code.n);
    let needed = n - k;
    let f = code.field.clone();
    if needed == 0 {
        return Ok(vec![Matrix::zeros(f, 0, n)]);
    }
    let nu = code.delta;
    let mut chosen: Vec<Vec<Poly<Elem>>> = Vec::new();
    let mut rank = 0;
    for e in 0..=nu {
        for v in annihilators(code, e) {
            if rank == needed {
                break;
            }
            let mut trial = PolyMatrix::zeros(f.clone(), chosen.len() + 1, n);
            for (r, row) in chosen.iter().chain(std::iter::once(&v)).enumerate() {
                for (c, p) in row.iter().enumerate() {
                    trial.set(r, c, p.clone());
                }
            }
            let r = trial.rank();
            if r > rank {
                rank = r;
                chosen.push(v);
            }
        }
    }
    if rank < needed {
        return Err(ConvError::Failure { nu, rank, needed });
    }
    let mut h = PolyMatrix::zeros(f.clone(), needed, n);
    for (r, row) in chosen.iter().enumerate() {
        for (c, p) in row.iter().enumerate() {
            h.set(r, c, p.clone());
        }
    }
    if !h.mul(&code.polymatrix().transpose()).is_zero() {
        return Err(ConvError::InvariantViolation("H(z) G(z)^T is not zero".into()));
    }
    check_random_codewords(code, &h)?;
    Ok(h.coefficients())
}

fn check_random_codewords(code: &ConvCode, h: &PolyMatrix<GaloisField>) -> Result<(), ConvError> {
    let f = &code.field;
    let g = code.polymatrix();
    let ring = g.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        let mut u = PolyMatrix::zeros(f.clone(), 1, code.k);
        for c in 0..code.k {
            let coeffs = (0..4).map(|_| Elem::from_enc(rng.gen_range(0..f.order()))).collect();
            u.set(0, c, ring.from_coeffs(coeffs));
        }
        let v = u.mul(&g);
        if !h.mul(&v.transpose()).is_zero() {
            return Err(ConvError::InvariantViolation("parity check rejects a codeword".into()));
        }
    }
    Ok(())
}

/// Uses the coefficients of `G(z)` as the parity-check matrix of an
/// `(n, n-k, delta)` code and sweeps its parity-check window.
pub fn dual_mdp_check(code: &ConvCode) -> Result<VerificationReport, ConvError> {
    if !is_noncatastrophic(code) {
        return Err(ConvError::ParameterViolation("generator is not left prime".into()));
    }
    let dual_k = code.n - code.k;
    let bound = window_bound(code.n, dual_k, code.delta)?;
    let window = sliding(&code.coeffs, bound.window, Layout::ParityCheck);
    let sets = nontrivial_sets_paritycheck(code.n, dual_k, bound.window);
    Ok(completion::verify_nonvanishing(&window.body, sets, DEFAULT_FAILURE_CAP)?)
}

/// Support of the window-1 generator matrix as a completion problem: the
/// lower-left `k x n` block is zero and each upper-left entry is tied to its
/// copy in the lower-right block.
pub fn sliding_tie_pattern(n: usize, k: usize, j: usize) -> Result<SupportPattern, ConvError> {
    if j != 1 {
        return Err(ConvError::UnsupportedWindow(j));
    }
    let mut p = SupportPattern::from_fn(2 * k, 2 * n, |r, c| !(r >= k && c < n));
    for r in 0..k {
        for c in 0..n {
            p.add_tie((r, c), (r + k, c + n))?;
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn gf(p: u64, m: u32) -> GaloisField {
        GaloisField::new(p, m, None).unwrap()
    }

    fn binom(n: usize, r: usize) -> usize {
        (0..n).combinations(r).count()
    }

    #[test]
    fn window_examples() {
        assert_eq!(window_bound(5, 3, 2).unwrap().window, 1);
        let w = window_bound(2, 1, 1).unwrap();
        assert_eq!(w.window, 2);
        assert_eq!(w.bounds, vec![2, 3, 4]);
        assert_eq!(window_bound(4, 3, 0).unwrap().window, 0);
        assert!(window_bound(3, 3, 1).is_err());
    }

    #[test]
    fn sliding_layouts() {
        let f = gf(5, 1);
        let g0 = Matrix::from_fn(f.clone(), 1, 2, |_, c| f.from_i64(c as i64 + 1));
        let g1 = Matrix::from_fn(f.clone(), 1, 2, |_, c| f.from_i64(c as i64 + 3));
        let s0 = sliding(&[g0.clone(), g1.clone()], 0, Layout::Generator);
        assert_eq!(s0.body, g0);
        let s = sliding(&[g0.clone(), g1.clone()], 1, Layout::Generator).body;
        assert_eq!(s.shape(), (2, 4));
        assert_eq!(s.row(0), &[g0.row(0), g1.row(0)].concat()[..]);
        assert_eq!(s.row(1), &[vec![Elem::ZERO; 2], g0.row(0).to_vec()].concat()[..]);
        let p = sliding(&[g0.clone(), g1.clone()], 1, Layout::ParityCheck).body;
        assert_eq!(p.row(0), &[g0.row(0).to_vec(), vec![Elem::ZERO; 2]].concat()[..]);
        assert_eq!(p.row(1), &[g1.row(0), g0.row(0)].concat()[..]);
    }

    #[test]
    fn nontrivial_set_counts() {
        assert_eq!(nontrivial_sets_generator(5, 3, 0).len(), binom(5, 3));
        assert_eq!(nontrivial_sets_paritycheck(5, 3, 0).len(), binom(5, 2));
        // filter of all C(8,4) sets by prefix counts
        let direct = (0..8).combinations(4).filter(|s| s.iter().filter(|&&c| c < 4).count() <= 2).count();
        assert_eq!(direct, 53);
        assert_eq!(nontrivial_sets_generator(4, 2, 1).len(), 53);
        assert_eq!(nontrivial_sets_paritycheck(4, 2, 1).len(), 53);
        let sets = nontrivial_sets_generator(5, 3, 1);
        assert_eq!(sets.len(), 155);
        assert!(sets.iter().all(|s| s.iter().filter(|&&c| c < 5).count() <= 3));
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn diag_degrees() {
        assert_eq!(diag_extension_degree(1), 1);
        assert_eq!(diag_extension_degree(2), 2);
        assert_eq!(diag_extension_degree(3), 3);
        assert_eq!(diag_extension_degree(4), 5);
    }

    #[test]
    fn builder_parameter_errors() {
        let q5 = gf(5, 1);
        assert!(matches!(build_vdm2(3, &q5), Err(ConvError::ParameterViolation(_))));
        assert!(matches!(build_vdm2(6, &q5), Err(ConvError::ParameterViolation(_))));
        assert!(matches!(build_vdm3(6, &gf(7, 1)), Err(ConvError::ParameterViolation(_))));
        assert!(matches!(build_diag(4, 2, &gf(11, 1)), Err(ConvError::ParameterViolation(_))));
        assert!(matches!(build_diag(5, 3, &gf(7, 1)), Err(ConvError::FieldTooSmall { .. })));
    }

    #[test]
    fn vdm2_small() {
        let code = build_vdm2(4, &gf(5, 1)).unwrap();
        assert_eq!((code.n(), code.k(), code.declared_degree()), (4, 2, 2));
        assert_eq!(code.field().order(), 25);
        code.check_degree().unwrap();
        let r = verify_window(&code, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.total_sets, 53);
        assert!(is_noncatastrophic(&code));
        assert!(noncatastrophic_by_gcd(&code));
        assert!(build_vdm2(4, &gf(2, 2)).is_ok());
    }

    #[test]
    fn find_z_examples() {
        let f7 = gf(7, 1);
        let z = find_z(&f7, &gf(7, 3)).unwrap();
        assert!(!gf(7, 3).in_subfield(z, 1).unwrap());
        assert_eq!(find_z(&gf(2, 1), &gf(2, 3)), Err(ConvError::NoValidZ { q: 2 }));
        assert!(find_z(&f7, &gf(7, 2)).is_err());
    }

    #[test]
    fn column_distance_small() {
        let f = gf(5, 1);
        let g0 = vandermonde(&f, &[Elem::ZERO, Elem::ONE, f.from_i64(2)], 2).unwrap();
        let code = ConvCode::new(f.clone(), vec![g0], 0).unwrap();
        assert_eq!(column_distance_bruteforce(&code, 0).unwrap(), 2);
        let big = build_vdm3(7, &gf(7, 1)).unwrap();
        assert!(matches!(column_distance_bruteforce(&big, 1), Err(ConvError::TooLarge { .. })));
    }

    #[test]
    fn catastrophic_example() {
        let f = gf(5, 1);
        let one = Matrix::from_fn(f.clone(), 1, 2, |_, _| Elem::ONE);
        let code = ConvCode::new(f.clone(), vec![one.clone(), one], 1).unwrap();
        assert!(!noncatastrophic_by_gcd(&code));
        assert!(!is_noncatastrophic(&code));
        let g0 = Matrix::identity(f.clone(), 2);
        let constant = ConvCode::new(f, vec![g0], 0).unwrap();
        assert!(noncatastrophic_by_gcd(&constant));
        assert_eq!(noncatastrophic_by_shape(&constant), Some(true));
    }

    #[test]
    fn parity_check_of_one_z() {
        let f = gf(5, 1);
        let g0 = Matrix::from_rows(f.clone(), vec![vec![Elem::ONE, Elem::ZERO]]).unwrap();
        let g1 = Matrix::from_rows(f.clone(), vec![vec![Elem::ZERO, Elem::ONE]]).unwrap();
        let code = ConvCode::new(f.clone(), vec![g0, g1], 1).unwrap();
        let h = parity_check_from_generator(&code).unwrap();
        assert_eq!(h.len(), 2);
        // h(z) = c * [z, -1]
        let c = *h[1].get(0, 0);
        assert!(!f.is_zero(&c));
        assert_eq!(h[0].row(0), &[Elem::ZERO, f.neg(&c)]);
        assert_eq!(h[1].row(0), &[c, Elem::ZERO]);
    }

    #[test]
    fn tie_pattern() {
        let p = sliding_tie_pattern(4, 2, 1).unwrap();
        assert_eq!((p.rows(), p.cols()), (4, 8));
        assert_eq!(p.zero_count(), 8);
        assert_eq!(p.ties().len(), 8);
        assert!(p.ties().iter().all(|&((i, j), (a, b))| a == i + 2 && b == j + 4));
        for r in 0..4 {
            for c in 0..8 {
                assert_eq!(p.is_free(r, c), !(r >= 2 && c < 4));
            }
        }
        assert_eq!(sliding_tie_pattern(4, 2, 2), Err(ConvError::UnsupportedWindow(2)));
        assert_eq!(completion::zero_pattern_nontrivial_sets(&p), Err(CompletionError::TiesUnsupported));
    }
}
