//! Degree, distance and density analysis of constructed codes.
//!
//! * **Degree**: the code degree is the maximal degree over the full-size
//!   minors of the polynomial parity-check matrix (valid because the
//!   constructed `[Htilde(z)  I]` always has a polynomial right inverse).
//!   Reducedness is decided by the rank of the highest-row-coefficient
//!   matrix.
//! * **Column distances**: the `j`-th column distance is certified through
//!   span tests on the truncated sliding matrix — `d` is the answer exactly
//!   when no first-block column lies in the span of `d - 2` other columns
//!   while some first-block column lies in the span of `d - 1` others. The
//!   search enumerates candidate column subsets in increasing size, pruned
//!   by the necessary condition that a spanning set must cover the support
//!   of the target column.
//! * **Free distance**: column distances are monotone nondecreasing in `j`
//!   and every information column plus its systematic companions forms a
//!   codeword of weight (column weight + 1), giving a structural upper
//!   bound. The search walks `j` upward from the memory order and stops as
//!   soon as lower and upper bounds pinch, or at a configurable horizon with
//!   an honest "lower bound only" status.
//! * **Density**: exact rational value of the sliding parity-check density
//!   for a chosen maximal codeword length.

use num::rational::Ratio;
use thiserror::Error;

use crate::budget::{BudgetExceeded, BudgetMeter};
use crate::construction::BaseMatrix;
use crate::field::{FieldElement, FieldError};
use crate::matrix::FieldMatrix;
use crate::poly::PolynomialMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("window of {rows} rows exceeds the 128-row limit of the support filter")]
    WindowTooTall { rows: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("codeword length {n_total} is not a positive multiple of n = {n}")]
    InvalidLength { n_total: u64, n: u64 },
    #[error("polynomial matrix has no nonzero full-size minor")]
    NotFullRank,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Field(#[from] FieldError),
}

// ---------------------------------------------------------------------------
// Degree, reducedness, basicness
// ---------------------------------------------------------------------------

/// Maximal degree over the full-size minors of the polynomial matrix. This
/// equals the code degree when the matrix has a polynomial right inverse,
/// which holds for every constructed `[Htilde(z)  I]`.
pub fn degree(pm: &PolynomialMatrix) -> Result<usize, AnalysisError> {
    let minors = pm.full_size_minors()?;
    minors
        .iter()
        .filter_map(|(_, m)| m.degree())
        .max()
        .ok_or(AnalysisError::NotFullRank)
}

/// Per-row maximal entry degree. Rows that are entirely zero get degree 0
/// (the constructed matrices never have zero rows thanks to the identity
/// block).
pub fn row_degrees(pm: &PolynomialMatrix) -> Vec<usize> {
    (0..pm.rows())
        .map(|r| {
            (0..pm.cols())
                .filter_map(|c| pm.get(r, c).degree())
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Matrix whose `i`-th row holds the coefficients of `z^(row degree i)` in
/// the `i`-th row of the polynomial matrix.
pub fn highest_row_coefficient(pm: &PolynomialMatrix) -> FieldMatrix {
    let degs = row_degrees(pm);
    let mut out = FieldMatrix::zero(pm.field(), pm.rows(), pm.cols());
    for (r, &deg) in degs.iter().enumerate() {
        for c in 0..pm.cols() {
            out.set(r, c, pm.get(r, c).coeff(deg));
        }
    }
    out
}

/// A polynomial matrix is reduced exactly when its highest-row-coefficient
/// matrix has full row rank.
pub fn is_reduced(pm: &PolynomialMatrix) -> Result<bool, AnalysisError> {
    Ok(highest_row_coefficient(pm).rank()? == pm.rows())
}

/// True when the greatest common divisor of all full-size minors is a
/// nonzero constant. For constructed matrices this always holds (the
/// identity block contributes the minor 1); the general check exists for
/// negative controls.
pub fn is_basic(pm: &PolynomialMatrix) -> Result<bool, AnalysisError> {
    let minors = pm.full_size_minors()?;
    let mut g = crate::poly::FieldPoly::zero(pm.field());
    for (_, m) in minors {
        if m.is_zero() {
            continue;
        }
        g = if g.is_zero() { m } else { g.gcd(&m)? };
        if g.degree() == Some(0) {
            return Ok(true);
        }
    }
    Ok(!g.is_zero() && g.degree() == Some(0))
}

/// Aggregate degree facts about one constructed code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub mu: usize,
    /// The code degree (maximal full-size-minor degree).
    pub delta: usize,
    /// Whether the top coefficient block of the parity-check matrix has
    /// full row rank; equivalent to `delta == mu * (n - k)`.
    pub top_block_full_rank: bool,
    pub reduced: bool,
    pub basic: bool,
    pub row_degrees: Vec<usize>,
}

pub fn degree_report(base: &BaseMatrix) -> Result<DegreeReport, AnalysisError> {
    let pm = base.polynomial();
    let delta = degree(&pm)?;
    let top = base.coefficient(base.mu());
    Ok(DegreeReport {
        mu: base.mu(),
        delta,
        top_block_full_rank: top.rank()? == base.n_minus_k(),
        reduced: is_reduced(&pm)?,
        basic: is_basic(&pm)?,
        row_degrees: row_degrees(&pm),
    })
}

// ---------------------------------------------------------------------------
// Column distances
// ---------------------------------------------------------------------------

/// A minimal-weight kernel witness for a truncated sliding matrix: the
/// column indices and coefficients of a kernel vector whose zeroth block is
/// nonzero. Its length is the certified distance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCertificate {
    /// Truncation index the witness lives in.
    pub j: usize,
    /// `(window column, coefficient)` pairs, all coefficients nonzero.
    pub support: Vec<(usize, FieldElement)>,
}

impl DistanceCertificate {
    /// The witness as a dense vector over the window columns.
    pub fn dense(&self, cols: usize, zero: FieldElement) -> Vec<FieldElement> {
        let mut v = vec![zero; cols];
        for &(c, x) in &self.support {
            v[c] = x;
        }
        v
    }
}

/// Columns and coefficients expressing one column in terms of others.
type SpanWitness = (Vec<usize>, Vec<FieldElement>);

struct SpanSearch<'a> {
    matrix: &'a FieldMatrix,
    masks: &'a [u128],
    /// Columns allowed in the spanning set, ascending.
    candidates: &'a [usize],
    /// `suffix_union[i]` = OR of the masks of `candidates[i..]`.
    suffix_union: &'a [u128],
    target: usize,
    size: usize,
}

impl SpanSearch<'_> {
    /// Finds a `size`-subset of the candidates whose span contains the
    /// target column, or proves there is none. Subsets that cannot cover
    /// the target's support are pruned (a column outside every chosen
    /// support row can never contribute there).
    fn run(&self, meter: &mut BudgetMeter) -> Result<Option<SpanWitness>, AnalysisError> {
        let mut chosen = Vec::with_capacity(self.size);
        self.dfs(0, 0, &mut chosen, meter)
    }

    fn dfs(
        &self,
        idx: usize,
        union: u128,
        chosen: &mut Vec<usize>,
        meter: &mut BudgetMeter,
    ) -> Result<Option<SpanWitness>, AnalysisError> {
        meter.charge(1)?;
        if chosen.len() == self.size {
            if self.masks[self.target] & !union != 0 {
                return Ok(None);
            }
            return self.try_solve(chosen, union, meter);
        }
        let remaining = self.size - chosen.len();
        if self.candidates.len() < remaining {
            return Ok(None);
        }
        for i in idx..=(self.candidates.len() - remaining) {
            // Once the remaining pool cannot complete a cover of the
            // target support, later start points cannot either.
            if self.masks[self.target] & !(union | self.suffix_union[i]) != 0 {
                break;
            }
            let c = self.candidates[i];
            if c == self.target {
                continue;
            }
            chosen.push(c);
            let found = self.dfs(i + 1, union | self.masks[c], chosen, meter)?;
            if found.is_some() {
                return Ok(found);
            }
            chosen.pop();
        }
        Ok(None)
    }

    fn try_solve(
        &self,
        chosen: &[usize],
        union: u128,
        meter: &mut BudgetMeter,
    ) -> Result<Option<SpanWitness>, AnalysisError> {
        meter.charge(chosen.len() as u64 + 1)?;
        // Rows outside the union are zero in every involved column.
        let rows: Vec<usize> = (0..self.matrix.rows())
            .filter(|&r| union >> r & 1 == 1)
            .collect();
        let sub = self.matrix.submatrix(&rows, chosen);
        let target: Vec<FieldElement> = rows
            .iter()
            .map(|&r| self.matrix.get(r, self.target))
            .collect();
        match sub.solve(&target)? {
            Some(coeffs) => Ok(Some((chosen.to_vec(), coeffs))),
            None => Ok(None),
        }
    }
}

fn column_masks(m: &FieldMatrix) -> Result<Vec<u128>, AnalysisError> {
    if m.rows() > 128 {
        return Err(AnalysisError::WindowTooTall { rows: m.rows() });
    }
    Ok((0..m.cols())
        .map(|c| {
            m.column_support(c)
                .iter()
                .fold(0u128, |acc, &r| acc | 1 << r)
        })
        .collect())
}

/// The `j`-th column distance with a minimal kernel witness.
///
/// Iterates candidate distances upward: `d` is confirmed once no column of
/// the zeroth block lies in the span of `d - 2` other window columns while
/// some zeroth-block column lies in the span of `d - 1` others. The search
/// is capped by the structural witness built from the lightest information
/// column and its systematic companions.
pub fn column_distance(
    base: &BaseMatrix,
    j: usize,
    meter: &mut BudgetMeter,
) -> Result<(usize, DistanceCertificate), AnalysisError> {
    let window = base.truncated(j);
    let m = window.matrix();
    let f = m.field().clone();
    let masks = column_masks(m)?;
    let n = base.n();
    let k = base.k();
    let d_block = base.n_minus_k();

    // A zero column in the zeroth block is a weight-1 kernel vector.
    for (c0, &mask) in masks.iter().enumerate().take(n) {
        if mask == 0 {
            return Ok((
                1,
                DistanceCertificate {
                    j,
                    support: vec![(c0, f.one())],
                },
            ));
        }
    }
    m.require_addition()?;

    let candidates: Vec<usize> = (0..m.cols()).filter(|&c| masks[c] != 0).collect();
    let mut suffix_union = vec![0u128; candidates.len() + 1];
    for i in (0..candidates.len()).rev() {
        suffix_union[i] = suffix_union[i + 1] | masks[candidates[i]];
    }

    // Structural cap: the lightest information column spans via its
    // systematic unit companions.
    let light = (0..k)
        .min_by_key(|&l| base.column_weight_in_window(l, j))
        .expect("k >= 1");
    let cap = base.column_weight_in_window(light, j);

    for size in 1..cap {
        for c0 in 0..n {
            let search = SpanSearch {
                matrix: m,
                masks: &masks,
                candidates: &candidates,
                suffix_union: &suffix_union,
                target: c0,
                size,
            };
            if let Some((cols, coeffs)) = search.run(meter)? {
                let mut support = vec![(c0, f.one())];
                for (&c, &lambda) in cols.iter().zip(coeffs.iter()) {
                    debug_assert!(!lambda.is_zero(), "smaller spanning set missed");
                    support.push((c, f.neg(lambda)));
                }
                support.sort_by_key(|&(c, _)| c);
                let cert = DistanceCertificate { j, support };
                debug_assert!(certificate_in_kernel(m, &cert));
                return Ok((size + 1, cert));
            }
        }
    }

    // No smaller witness exists; realise the structural one.
    let mut support = vec![(light, f.one())];
    for r in m.column_support(light) {
        let unit_col = (r / d_block) * n + k + (r % d_block);
        support.push((unit_col, f.neg(m.get(r, light))));
    }
    support.sort_by_key(|&(c, _)| c);
    let cert = DistanceCertificate { j, support };
    debug_assert!(certificate_in_kernel(m, &cert));
    Ok((cap + 1, cert))
}

fn certificate_in_kernel(m: &FieldMatrix, cert: &DistanceCertificate) -> bool {
    let f = m.field();
    let v = cert.dense(m.cols(), f.zero());
    match m.mul_vec(&v) {
        Ok(out) => out.iter().all(|x| x.is_zero()),
        Err(_) => true, // additionless fields cannot be double-checked
    }
}

/// Column distances for `j = 0 ..= j_max`.
pub fn column_distances(
    base: &BaseMatrix,
    j_max: usize,
    meter: &mut BudgetMeter,
) -> Result<Vec<usize>, AnalysisError> {
    (0..=j_max)
        .map(|j| column_distance(base, j, meter).map(|(d, _)| d))
        .collect()
}

// ---------------------------------------------------------------------------
// Free distance
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeDistanceStatus {
    /// Lower and upper bounds met; the reported value is the free distance.
    Exact,
    /// The search stopped at its horizon; the true free distance lies in
    /// `[lower, upper]`.
    LowerBounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreeDistanceReport {
    pub lower: usize,
    pub upper: usize,
    pub status: FreeDistanceStatus,
    /// Last truncation index examined.
    pub last_j: usize,
    /// Witness for the last column distance computed.
    pub certificate: DistanceCertificate,
}

impl FreeDistanceReport {
    pub fn exact(&self) -> Option<usize> {
        (self.status == FreeDistanceStatus::Exact).then_some(self.lower)
    }
}

/// Checks whether a window kernel witness extends (by zeros) to a genuine
/// codeword: the row blocks below the window must also annihilate it.
pub fn is_codeword(
    base: &BaseMatrix,
    support: &[(usize, FieldElement)],
    j: usize,
) -> Result<bool, AnalysisError> {
    let n = base.n();
    let f = base.field().clone();
    let mut blocks = vec![vec![f.zero(); n]; j + 1];
    for &(c, x) in support {
        if c >= (j + 1) * n {
            return Err(AnalysisError::InvalidParameters(format!(
                "column {c} outside a window of {} blocks",
                j + 1
            )));
        }
        blocks[c / n][c % n] = x;
    }
    for i in 0..=(j + base.mu()) {
        let mut acc = vec![f.zero(); base.n_minus_k()];
        // Only block coefficients within the memory reach row block i.
        #[allow(clippy::needless_range_loop)]
        for b in i.saturating_sub(base.mu())..=i.min(j) {
            let part = base.coefficient(i - b).mul_vec(&blocks[b])?;
            for (a, p) in acc.iter_mut().zip(part) {
                *a = f.add(*a, p);
            }
        }
        if acc.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Free distance bounds with the default horizon `3 * (mu + 1)`.
pub fn free_distance(
    base: &BaseMatrix,
    meter: &mut BudgetMeter,
) -> Result<FreeDistanceReport, AnalysisError> {
    free_distance_with_horizon(base, 3 * (base.mu() + 1), meter)
}

/// Free distance bounds: walks truncations from the memory order upward
/// (column distances are monotone, so smaller windows cannot improve the
/// lower bound) until the bounds pinch or the horizon is reached.
///
/// The upper bound starts from the structural codeword (lightest
/// information column plus its systematic companions, weight `w + 1`) and
/// is tightened by any window witness that extends to a genuine codeword.
pub fn free_distance_with_horizon(
    base: &BaseMatrix,
    horizon: usize,
    meter: &mut BudgetMeter,
) -> Result<FreeDistanceReport, AnalysisError> {
    let k = base.k();
    let full_weight = |l: usize| base.column_weight_in_window(l, base.mu());
    let mut upper = (0..k).map(full_weight).min().expect("k >= 1") + 1;

    let start = base.mu();
    let mut lower = 0;
    let mut last = None;
    for j in start..=horizon.max(start) {
        let (d, cert) = column_distance(base, j, meter)?;
        lower = lower.max(d);
        if is_codeword(base, &cert.support, j)? {
            upper = upper.min(cert.support.len());
        }
        let done = lower >= upper;
        last = Some((j, cert));
        if done {
            break;
        }
    }
    let (last_j, certificate) = last.expect("at least one truncation examined");
    let status = if lower >= upper {
        FreeDistanceStatus::Exact
    } else {
        FreeDistanceStatus::LowerBounded
    };
    Ok(FreeDistanceReport {
        lower,
        upper,
        status,
        last_j,
        certificate,
    })
}

// ---------------------------------------------------------------------------
// Density
// ---------------------------------------------------------------------------

/// Density of the sliding parity-check matrix for maximal codeword length
/// `n_total` (a positive multiple of `n`), as an exact rational:
/// `(w k + n - k) / ((n - k)(mu n + n_total))`.
pub fn density(n: u64, k: u64, w: u64, mu: u64, n_total: u64) -> Result<Ratio<u64>, AnalysisError> {
    if k == 0 || n <= k || w == 0 {
        return Err(AnalysisError::InvalidParameters(format!(
            "need n > k >= 1 and w >= 1, got n = {n}, k = {k}, w = {w}"
        )));
    }
    if n_total == 0 || !n_total.is_multiple_of(n) {
        return Err(AnalysisError::InvalidLength { n_total, n });
    }
    Ok(Ratio::new(w * k + n - k, (n - k) * (mu * n + n_total)))
}

// ---------------------------------------------------------------------------
// Span-avoidance hypothesis for the distance sandwich
// ---------------------------------------------------------------------------

/// Outcome of the span-avoidance check behind the distance sandwich bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub holds: bool,
    /// When violated: the restricted row set and the column set whose first
    /// column lies in the span of the others.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Checks, on the canonical sliding window, that no zeroth-block
/// information column — restricted to its own support rows — lies in the
/// span of up to `w_tilde - 1` later columns. When this holds, the free
/// distance is at least `w_tilde + 1` and each column distance at least
/// `min(w_j, w_tilde) + 1`.
///
/// Requires all information columns to have the same weight `w` with
/// `1 <= w_tilde <= w`.
pub fn distance_hypothesis(
    base: &BaseMatrix,
    w_tilde: usize,
    meter: &mut BudgetMeter,
) -> Result<HypothesisReport, AnalysisError> {
    let k = base.k();
    let mu = base.mu();
    let w = base.column_weight_in_window(0, mu);
    if (1..k).any(|l| base.column_weight_in_window(l, mu) != w) {
        return Err(AnalysisError::InvalidParameters(
            "span-avoidance check needs uniform information-column weight".into(),
        ));
    }
    if w_tilde == 0 || w_tilde > w {
        return Err(AnalysisError::InvalidParameters(format!(
            "need 1 <= w_tilde <= {w}, got {w_tilde}"
        )));
    }
    let window = base.sliding_window();
    let m = window.matrix();
    let masks = column_masks(m)?;
    m.require_addition()?;

    for c0 in 0..k {
        let rows = m.column_support(c0);
        let restricted = m.submatrix(&rows, &(0..m.cols()).collect::<Vec<_>>());
        let sub_masks = column_masks(&restricted)?;
        let candidates: Vec<usize> = (c0 + 1..m.cols()).filter(|&c| masks[c] != 0).collect();
        let mut suffix_union = vec![0u128; candidates.len() + 1];
        for i in (0..candidates.len()).rev() {
            suffix_union[i] = suffix_union[i + 1] | sub_masks[candidates[i]];
        }
        for size in 1..w_tilde {
            let search = SpanSearch {
                matrix: &restricted,
                masks: &sub_masks,
                candidates: &candidates,
                suffix_union: &suffix_union,
                target: c0,
                size,
            };
            if let Some((cols, _)) = search.run(meter)? {
                let mut j_set = vec![c0];
                j_set.extend(cols);
                return Ok(HypothesisReport {
                    holds: false,
                    witness: Some((rows, j_set)),
                });
            }
        }
    }
    Ok(HypothesisReport {
        holds: true,
        witness: None,
    })
}
