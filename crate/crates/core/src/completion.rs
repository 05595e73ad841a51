//! Matrix-completion verification.
//!
//! A filled matrix solves its completion problem when every full-size minor
//! that is not forced to vanish by the structural constraints is nonzero. Each
//! code family supplies the column sets of those non-trivial minors; this
//! module evaluates them and, for pure zero patterns, decides triviality with a
//! bipartite matching test.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;

/// Failures recorded before a sweep may stop early.
pub const DEFAULT_FAILURE_CAP: usize = 32;
const CHUNK: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("column set {set:?} does not select {expected} sorted in-range columns")]
    BadSetSize { set: Vec<usize>, expected: usize },
    #[error("tie constraints are not supported by the matching test")]
    TiesUnsupported,
    #[error("tie references cell ({0}, {1}) outside the pattern")]
    TieOutOfRange(usize, usize),
    #[error("empty degree range {lo}..={hi}")]
    EmptyRange { lo: u32, hi: u32 },
}

/// Outcome of a non-trivial minor sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub total_sets: usize,
    pub checked_sets: usize,
    /// Column sets whose minor vanished, ascending, at most the failure cap.
    pub failures: Vec<Vec<usize>>,
    pub elapsed: Duration,
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    passed: bool,
    total_sets: usize,
    checked_sets: usize,
    failures: Vec<Vec<usize>>,
    elapsed_ms: u64,
}

impl Serialize for VerificationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportDoc {
            passed: self.passed,
            total_sets: self.total_sets,
            checked_sets: self.checked_sets,
            failures: self.failures.clone(),
            elapsed_ms: self.elapsed.as_millis() as u64,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VerificationReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ReportDoc::deserialize(d)?;
        Ok(VerificationReport {
            passed: doc.passed,
            total_sets: doc.total_sets,
            checked_sets: doc.checked_sets,
            failures: doc.failures,
            elapsed: Duration::from_millis(doc.elapsed_ms),
        })
    }
}

impl VerificationReport {
    /// Report with the timing field zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { elapsed: Duration::ZERO, ..self.clone() }
    }

    pub fn summary(&self) -> String {
        if self.passed {
            format!("passed, {}/{} minors", self.checked_sets, self.total_sets)
        } else {
            format!(
                "failed, {} vanishing minor(s) among {}/{} checked",
                self.failures.len(),
                self.checked_sets,
                self.total_sets
            )
        }
    }
}

fn valid_set(set: &[usize], k: usize, n: usize) -> bool {
    set.len() == k && set.iter().all(|&c| c < n) && set.windows(2).all(|w| w[0] < w[1])
}

/// Checks that the full-size minor of `m` on every supplied column set is
/// nonzero. The sweep stops early only once `failure_cap` failures are known.
pub fn verify_nonvanishing<F: Field>(
    m: &Matrix<F>,
    sets: impl IntoIterator<Item = Vec<usize>>,
    failure_cap: usize,
) -> Result<VerificationReport, CompletionError> {
    let start = Instant::now();
    let (k, n) = m.shape();
    let sets: Vec<Vec<usize>> = sets.into_iter().collect();
    if let Some(bad) = sets.iter().find(|s| !valid_set(s, k, n)) {
        return Err(CompletionError::BadSetSize { set: bad.clone(), expected: k });
    }
    let cap = failure_cap.max(1);
    let mut failures = Vec::new();
    let mut checked = 0;
    for chunk in sets.chunks(CHUNK) {
        let zero: Vec<bool> = chunk
            .par_iter()
            .map(|s| {
                let sub = m.select_columns(s).expect("validated set");
                m.field().is_zero(&sub.det().expect("square"))
            })
            .collect();
        failures.extend(chunk.iter().zip(zero).filter(|(_, z)| *z).map(|(s, _)| s.clone()));
        checked += chunk.len();
        if failures.len() >= cap {
            break;
        }
    }
    failures.sort();
    failures.truncate(cap);
    Ok(VerificationReport {
        passed: failures.is_empty() && checked == sets.len(),
        total_sets: sets.len(),
        checked_sets: checked,
        failures,
        elapsed: start.elapsed(),
    })
}

/// Free/zero support of a `rows x cols` matrix with optional equality ties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPattern {
    rows: usize,
    cols: usize,
    free: Vec<bool>,
    ties: Vec<((usize, usize), (usize, usize))>,
}

impl SupportPattern {
    /// All entries free, no ties.
    pub fn all_free(rows: usize, cols: usize) -> Self {
        SupportPattern { rows, cols, free: vec![true; rows * cols], ties: Vec::new() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let free = (0..rows * cols).map(|idx| f(idx / cols, idx % cols)).collect();
        SupportPattern { rows, cols, free, ties: Vec::new() }
    }

    /// Support of a concrete matrix: nonzero entries are free.
    pub fn of_matrix<F: Field>(m: &Matrix<F>) -> Self {
        SupportPattern::from_fn(m.rows(), m.cols(), |i, j| !m.field().is_zero(m.get(i, j)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_free(&self, i: usize, j: usize) -> bool {
        self.free[i * self.cols + j]
    }

    pub fn set_zero(&mut self, i: usize, j: usize) {
        self.free[i * self.cols + j] = false;
    }

    pub fn ties(&self) -> &[((usize, usize), (usize, usize))] {
        &self.ties
    }

    pub fn zero_count(&self) -> usize {
        self.free.iter().filter(|f| !**f).count()
    }

    pub fn add_tie(&mut self, a: (usize, usize), b: (usize, usize)) -> Result<(), CompletionError> {
        for (i, j) in [a, b] {
            if i >= self.rows || j >= self.cols {
                return Err(CompletionError::TieOutOfRange(i, j));
            }
        }
        self.ties.push((a, b));
        Ok(())
    }

    /// Tries to match column `c` into `owner` (row -> column) by an augmenting path.
    fn augment(&self, c: usize, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for r in 0..self.rows {
            if !self.is_free(r, c) || seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|other| self.augment(other, owner, seen)) {
                owner[r] = Some(c);
                return true;
            }
        }
        false
    }
}

/// Column sets of size `rows` whose patterned minor is not identically zero,
/// i.e. that admit a perfect matching between rows and chosen columns.
///
/// Only tie-free patterns are supported. Sets come out in ascending
/// lexicographic order.
pub fn zero_pattern_nontrivial_sets(p: &SupportPattern) -> Result<Vec<Vec<usize>>, CompletionError> {
    if !p.ties.is_empty() {
        return Err(CompletionError::TiesUnsupported);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p.rows);
    let owner = vec![None; p.rows];
    extend_matchable(p, 0, &mut chosen, owner, &mut out);
    Ok(out)
}

fn extend_matchable(
    p: &SupportPattern,
    next: usize,
    chosen: &mut Vec<usize>,
    owner: Vec<Option<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == p.rows {
        out.push(chosen.clone());
        return;
    }
    let needed = p.rows - chosen.len();
    for c in next..p.cols {
        if p.cols - c < needed {
            break;
        }
        let mut trial = owner.clone();
        let mut seen = vec![false; p.rows];
        // a subset that cannot saturate its columns has no matchable superset
        if p.augment(c, &mut trial, &mut seen) {
            chosen.push(c);
            extend_matchable(p, c + 1, chosen, trial, out);
            chosen.pop();
        }
    }
}

/// Result of scanning extension degrees for the first passing instance.
#[derive(Debug, Clone)]
pub struct DegreeSearch {
    pub smallest_passing: Option<u32>,
    pub reports: Vec<(u32, VerificationReport)>,
}

/// Builds and verifies the instance for `d = d_lo, d_lo + 1, ...` and stops at
/// the first degree whose sweep passes.
pub fn minimal_degree_search<F, E, B>(mut builder: B, d_lo: u32, d_hi: u32) -> Result<DegreeSearch, E>
where
    F: Field,
    E: From<CompletionError>,
    B: FnMut(u32) -> Result<(Matrix<F>, Vec<Vec<usize>>), E>,
{
    if d_lo > d_hi {
        return Err(CompletionError::EmptyRange { lo: d_lo, hi: d_hi }.into());
    }
    let mut reports = Vec::new();
    for d in d_lo..=d_hi {
        let (m, sets) = builder(d)?;
        let report = verify_nonvanishing(&m, sets, DEFAULT_FAILURE_CAP)?;
        let passed = report.passed;
        reports.push((d, report));
        if passed {
            return Ok(DegreeSearch { smallest_passing: Some(d), reports });
        }
    }
    Ok(DegreeSearch { smallest_passing: None, reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;
    use itertools::Itertools;

    fn gf(p: u64) -> GaloisField {
        GaloisField::new(p, 1, None).unwrap()
    }

    #[test]
    fn verify_examples() {
        let f = gf(5);
        let id = Matrix::identity(f.clone(), 2);
        let r = verify_nonvanishing(&id, vec![vec![0, 1]], 4).unwrap();
        assert!(r.passed);
        assert_eq!((r.total_sets, r.checked_sets), (1, 1));

        let ones = Matrix::from_fn(f.clone(), 2, 2, |_, _| f.one());
        let r = verify_nonvanishing(&ones, vec![vec![0, 1]], 4).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failures, vec![vec![0, 1]]);

        assert!(matches!(
            verify_nonvanishing(&id, vec![vec![0]], 4),
            Err(CompletionError::BadSetSize { .. })
        ));
        assert!(matches!(
            verify_nonvanishing(&id, vec![vec![1, 0]], 4),
            Err(CompletionError::BadSetSize { .. })
        ));
    }

    #[test]
    fn early_exit_only_after_cap() {
        let f = gf(5);
        // 2 x 40 matrix of equal columns: every minor vanishes
        let m = Matrix::from_fn(f.clone(), 2, 40, |i, _| f.from_i64(i as i64 + 1));
        let sets: Vec<Vec<usize>> = (0..40).combinations(2).collect();
        let r = verify_nonvanishing(&m, sets.clone(), 3).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failures.len(), 3);
        assert_eq!(r.failures[0], vec![0, 1]);
        assert!(r.checked_sets >= 3 && r.checked_sets <= sets.len());
    }

    #[test]
    fn matching_enumeration_examples() {
        let all = SupportPattern::all_free(2, 4);
        assert_eq!(zero_pattern_nontrivial_sets(&all).unwrap().len(), 6);

        let mut p = SupportPattern::all_free(2, 4);
        p.set_zero(0, 2);
        p.set_zero(1, 2);
        let sets = zero_pattern_nontrivial_sets(&p).unwrap();
        assert!(sets.iter().all(|s| !s.contains(&2)));
        assert_eq!(sets.len(), 3);

        let mut t = SupportPattern::all_free(2, 2);
        t.add_tie((0, 0), (1, 1)).unwrap();
        assert_eq!(zero_pattern_nontrivial_sets(&t), Err(CompletionError::TiesUnsupported));
        assert!(t.add_tie((2, 0), (0, 0)).is_err());
    }

    #[test]
    fn degree_search_examples() {
        let f = gf(7);
        let id = Matrix::identity(f.clone(), 2);
        let s = minimal_degree_search(
            |_| Ok::<_, CompletionError>((id.clone(), vec![vec![0, 1]])),
            2,
            5,
        )
        .unwrap();
        assert_eq!(s.smallest_passing, Some(2));
        assert_eq!(s.reports.len(), 1);

        let zero = Matrix::zeros(f.clone(), 2, 2);
        let s = minimal_degree_search(
            |_| Ok::<_, CompletionError>((zero.clone(), vec![vec![0, 1]])),
            1,
            4,
        )
        .unwrap();
        assert_eq!(s.smallest_passing, None);
        assert_eq!(s.reports.len(), 4);

        assert!(matches!(
            minimal_degree_search(|_| Ok::<_, CompletionError>((zero.clone(), vec![])), 3, 2),
            Err(CompletionError::EmptyRange { .. })
        ));
    }

    #[test]
    fn report_serialization_shape() {
        let r = VerificationReport {
            passed: false,
            total_sets: 3,
            checked_sets: 3,
            failures: vec![vec![0, 2]],
            elapsed: Duration::from_millis(7),
        };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"passed": false, "total_sets": 3, "checked_sets": 3,
                               "failures": [[0, 2]], "elapsed_ms": 7})
        );
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
