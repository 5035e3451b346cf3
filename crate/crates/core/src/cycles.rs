//! Cycle enumeration on the Tanner graph of a parity-check matrix, the
//! full rank condition (FRC) on cycles, and cycle signatures on sliding
//! windows.
//!
//! A cycle of half-length `l` alternates `l` distinct rows and `l`
//! distinct columns, `r_1 - c_1 - r_2 - c_2 - ... - r_l - c_l - r_1`,
//! where column `c_h` is incident to rows `r_h` and `r_{h+1}` (indices
//! wrapping). Its edge length is `2 l`. A cycle satisfies the FRC when the
//! `l x l` matrix holding exactly the `2 l` cycle entries is invertible;
//! writing `P1` for the product of the entries `M[r_h][c_h]` and `P2` for
//! the product of the `M[r_{h+1}][c_h]`, that determinant is
//! `P1 - (-1)^l P2`, so the check reduces to comparing two discrete-log
//! sums — no field addition needed.

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::budget::{BudgetExceeded, BudgetMeter};
use crate::construction::SlidingMatrix;
use crate::field::FieldError;
use crate::matrix::FieldMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclesError {
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("minor audit supports sizes 2 and 3, got {0}")]
    BadMinorSize(usize),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A cycle in canonical form: the first row is the smallest, and the first
/// column index is smaller than the last (fixing the traversal direction).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Cycle {
    /// Builds a cycle from any traversal order (`cols[h]` incident to
    /// `rows[h]` and `rows[h + 1]`, wrapping) and canonicalizes it.
    pub fn from_traversal(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, CyclesError> {
        let l = rows.len();
        if l < 2 || cols.len() != l {
            return Err(CyclesError::InvalidCycle(format!(
                "need matching row/column counts of at least 2, got {l} rows and {} columns",
                cols.len()
            )));
        }
        for (label, seq) in [("row", &rows), ("column", &cols)] {
            let mut sorted = seq.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|p| p[0] == p[1]) {
                return Err(CyclesError::InvalidCycle(format!(
                    "repeated {label} in {seq:?}"
                )));
            }
        }
        let t = rows
            .iter()
            .enumerate()
            .min_by_key(|&(_, &r)| r)
            .map(|(i, _)| i)
            .expect("nonempty");
        let mut rows: Vec<usize> = (0..l).map(|h| rows[(t + h) % l]).collect();
        let mut cols: Vec<usize> = (0..l).map(|h| cols[(t + h) % l]).collect();
        if cols[0] > cols[l - 1] {
            rows = std::iter::once(rows[0])
                .chain(rows[1..].iter().rev().copied())
                .collect();
            cols.reverse();
        }
        Ok(Cycle { rows, cols })
    }

    /// Number of rows (equivalently columns) on the cycle.
    pub fn half_length(&self) -> usize {
        self.rows.len()
    }

    /// Number of edges, `2 * half_length`.
    pub fn length(&self) -> usize {
        2 * self.rows.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Checks that every cycle edge is a nonzero entry of the matrix.
    pub fn is_cycle_of(&self, m: &FieldMatrix) -> bool {
        let l = self.rows.len();
        self.rows.iter().all(|&r| r < m.rows())
            && self.cols.iter().all(|&c| c < m.cols())
            && (0..l).all(|h| {
                !m.get(self.rows[h], self.cols[h]).is_zero()
                    && !m.get(self.rows[(h + 1) % l], self.cols[h]).is_zero()
            })
    }
}

struct CycleSearch<'a> {
    rows_of: &'a [Vec<usize>],
    cols_of: &'a [Vec<usize>],
    lmax: usize,
    r0: usize,
}

impl CycleSearch<'_> {
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        current_row: usize,
        path_rows: &mut Vec<usize>,
        path_cols: &mut Vec<usize>,
        used_rows: &mut [bool],
        used_cols: &mut [bool],
        out: &mut Vec<Cycle>,
        meter: &mut BudgetMeter,
    ) -> Result<(), CyclesError> {
        for &c in &self.cols_of[current_row] {
            meter.charge(1)?;
            if used_cols[c] {
                continue;
            }
            // Closing edge back to the start row? Direction is fixed by
            // demanding the first column be smaller than the closing one,
            // so each cycle is reported exactly once.
            if !path_cols.is_empty()
                && path_cols[0] < c
                && self.rows_of[c].binary_search(&self.r0).is_ok()
            {
                let mut cols = path_cols.clone();
                cols.push(c);
                out.push(Cycle {
                    rows: path_rows.clone(),
                    cols,
                });
            }
            if path_cols.len() + 1 < self.lmax {
                for &r in &self.rows_of[c] {
                    meter.charge(1)?;
                    // Keeping every other row above r0 makes r0 the unique
                    // canonical start.
                    if r <= self.r0 || used_rows[r] {
                        continue;
                    }
                    used_cols[c] = true;
                    used_rows[r] = true;
                    path_cols.push(c);
                    path_rows.push(r);
                    self.dfs(r, path_rows, path_cols, used_rows, used_cols, out, meter)?;
                    path_rows.pop();
                    path_cols.pop();
                    used_rows[r] = false;
                    used_cols[c] = false;
                }
            }
        }
        Ok(())
    }
}

/// All cycles of half-length at most `lmax`, each in canonical form.
pub fn enumerate_cycles(
    m: &FieldMatrix,
    lmax: usize,
    meter: &mut BudgetMeter,
) -> Result<Vec<Cycle>, CyclesError> {
    let mut out = Vec::new();
    if lmax < 2 {
        return Ok(out);
    }
    let rows_of: Vec<Vec<usize>> = (0..m.cols()).map(|c| m.column_support(c)).collect();
    let cols_of: Vec<Vec<usize>> = (0..m.rows())
        .map(|r| (0..m.cols()).filter(|&c| !m.get(r, c).is_zero()).collect())
        .collect();
    let mut used_rows = vec![false; m.rows()];
    let mut used_cols = vec![false; m.cols()];
    for r0 in 0..m.rows() {
        let search = CycleSearch {
            rows_of: &rows_of,
            cols_of: &cols_of,
            lmax,
            r0,
        };
        let mut path_rows = vec![r0];
        let mut path_cols = Vec::new();
        used_rows[r0] = true;
        search.dfs(
            r0,
            &mut path_rows,
            &mut path_cols,
            &mut used_rows,
            &mut used_cols,
            &mut out,
            meter,
        )?;
        used_rows[r0] = false;
    }
    Ok(out)
}

/// Edge length of the shortest cycle with half-length at most `lmax`, or
/// `None` when there is none in that range.
pub fn girth(
    m: &FieldMatrix,
    lmax: usize,
    meter: &mut BudgetMeter,
) -> Result<Option<usize>, CyclesError> {
    Ok(enumerate_cycles(m, lmax, meter)?
        .iter()
        .map(Cycle::length)
        .min())
}

/// Discrete-log sums `(E1, E2)` of the two entry products along the cycle,
/// both reduced modulo the multiplicative group order.
fn cycle_log_sums(m: &FieldMatrix, cycle: &Cycle) -> Result<(u64, u64), CyclesError> {
    if !cycle.is_cycle_of(m) {
        return Err(CyclesError::InvalidCycle(format!(
            "{cycle:?} is not a cycle of the matrix"
        )));
    }
    let modulus = m.field().unit_order().max(1);
    let l = cycle.half_length();
    let mut e1 = 0u64;
    let mut e2 = 0u64;
    for h in 0..l {
        let log =
            |r: usize, c: usize| m.get(r, c).log().expect("cycle entries are nonzero") % modulus;
        e1 = (e1 + log(cycle.rows[h], cycle.cols[h])) % modulus;
        e2 = (e2 + log(cycle.rows[(h + 1) % l], cycle.cols[h])) % modulus;
    }
    Ok((e1, e2))
}

/// Whether the cycle satisfies the full rank condition: the matrix holding
/// exactly the cycle entries is invertible. Decided entirely in log space:
/// for even half-length the two products must differ; for odd half-length
/// their ratio must avoid `-1` (which in odd characteristic is the power
/// `(q - 1) / 2` of the primitive element, and in characteristic 2 is 1).
pub fn cycle_frc_satisfied(m: &FieldMatrix, cycle: &Cycle) -> Result<bool, CyclesError> {
    let (e1, e2) = cycle_log_sums(m, cycle)?;
    let modulus = m.field().unit_order().max(1);
    let even = cycle.half_length().is_multiple_of(2);
    if even || m.field().p() == 2 {
        Ok(e1 != e2)
    } else {
        Ok((e1 + modulus - e2) % modulus != modulus / 2)
    }
}

/// The `l x l` matrix holding exactly the cycle entries (all other
/// positions zero); the FRC asks for this matrix to be invertible.
pub fn cycle_matrix(m: &FieldMatrix, cycle: &Cycle) -> Result<FieldMatrix, CyclesError> {
    if !cycle.is_cycle_of(m) {
        return Err(CyclesError::InvalidCycle(format!(
            "{cycle:?} is not a cycle of the matrix"
        )));
    }
    let l = cycle.half_length();
    let mut out = FieldMatrix::zero(m.field(), l, l);
    for h in 0..l {
        out.set(h, h, m.get(cycle.rows[h], cycle.cols[h]));
        out.set(
            (h + 1) % l,
            h,
            m.get(cycle.rows[(h + 1) % l], cycle.cols[h]),
        );
    }
    Ok(out)
}

/// Enumeration plus FRC verdicts in one pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrcReport {
    /// Largest half-length examined.
    pub lmax: usize,
    pub total_cycles: usize,
    pub violations: Vec<Cycle>,
}

pub fn frc_report(
    m: &FieldMatrix,
    lmax: usize,
    meter: &mut BudgetMeter,
) -> Result<FrcReport, CyclesError> {
    let cycles = enumerate_cycles(m, lmax, meter)?;
    let total_cycles = cycles.len();
    let mut violations = Vec::new();
    for cycle in cycles {
        if !cycle_frc_satisfied(m, &cycle)? {
            violations.push(cycle);
        }
    }
    Ok(FrcReport {
        lmax,
        total_cycles,
        violations,
    })
}

/// Outcome of a minor audit: how many submatrices had a zero pattern that
/// does not force the determinant to vanish, and the row/column witnesses of
/// those whose determinant vanished anyway.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorAudit {
    pub size: usize,
    pub examined: u64,
    pub vanishing: Vec<(Vec<usize>, Vec<usize>)>,
}

impl MinorAudit {
    pub fn clean(&self) -> bool {
        self.vanishing.is_empty()
    }
}

/// True when the zero pattern of the submatrix admits at least one
/// all-nonzero transversal, i.e. the determinant is not structurally zero.
/// For size 2 only the all-nonzero pattern can have a vanishing determinant,
/// so sparser patterns are skipped there.
fn pattern_not_forced_zero(m: &FieldMatrix, rows: &[usize], cols: &[usize]) -> bool {
    let nz = |r: usize, c: usize| !m.get(rows[r], cols[c]).is_zero();
    match rows.len() {
        2 => nz(0, 0) && nz(0, 1) && nz(1, 0) && nz(1, 1),
        3 => {
            (nz(0, 0) && (nz(1, 1) && nz(2, 2) || nz(1, 2) && nz(2, 1)))
                || (nz(0, 1) && (nz(1, 0) && nz(2, 2) || nz(1, 2) && nz(2, 0)))
                || (nz(0, 2) && (nz(1, 0) && nz(2, 1) || nz(1, 1) && nz(2, 0)))
        }
        _ => unreachable!("audit sizes are validated"),
    }
}

/// Examines every `size`-by-`size` submatrix whose zero pattern does not
/// already force a zero determinant, and records those whose determinant
/// vanishes anyway. Size 2 covers four-nonzero-entry minors; size 3 covers
/// every pattern admitting a nonzero expansion term.
pub fn audit_minors(
    m: &FieldMatrix,
    size: usize,
    meter: &mut BudgetMeter,
) -> Result<MinorAudit, CyclesError> {
    if !(2..=3).contains(&size) {
        return Err(CyclesError::BadMinorSize(size));
    }
    m.require_addition()?;
    let mut examined = 0u64;
    let mut vanishing = Vec::new();
    let mut row_pick = Vec::new();
    let mut outcome = Ok(());
    arith::for_each_combination(m.rows(), size, |rows| {
        if outcome.is_err() {
            return;
        }
        row_pick.clear();
        row_pick.extend_from_slice(rows);
        let rows = row_pick.clone();
        arith::for_each_combination(m.cols(), size, |cols| {
            if outcome.is_err() {
                return;
            }
            if let Err(e) = meter.charge(1) {
                outcome = Err(CyclesError::from(e));
                return;
            }
            if !pattern_not_forced_zero(m, &rows, cols) {
                return;
            }
            examined += 1;
            match m.submatrix(&rows, cols).det() {
                Ok(d) if d.is_zero() => vanishing.push((rows.clone(), cols.to_vec())),
                Ok(_) => {}
                Err(e) => outcome = Err(CyclesError::from(e)),
            }
        });
    });
    outcome?;
    Ok(MinorAudit {
        size,
        examined,
        vanishing,
    })
}

/// Structure of a cycle living in a sliding window: which information
/// column and block shift each cycle column comes from, the successive row
/// differences, and the alternating sum that decides whether value
/// assignments can repair the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleSignature {
    /// 1-based information-column index of each cycle column.
    pub s: Vec<usize>,
    /// Block shift of each cycle column within the window.
    pub shifts: Vec<usize>,
    /// Successive row differences `r_{h+1} - r_h` (one fewer than the
    /// half-length).
    pub i: Vec<i64>,
    /// `sum_h i_h * (s_{h+1} - s_1)`.
    pub f: i64,
}

/// Extracts the signature of a cycle on a sliding window. Fails if any
/// cycle column is a systematic (weight-1) column — such columns cannot
/// lie on cycles of the constructed matrices.
pub fn cycle_signature(
    window: &SlidingMatrix,
    cycle: &Cycle,
) -> Result<CycleSignature, CyclesError> {
    if !cycle.is_cycle_of(window.matrix()) {
        return Err(CyclesError::InvalidCycle(format!(
            "{cycle:?} is not a cycle of the window"
        )));
    }
    let mut s = Vec::new();
    let mut shifts = Vec::new();
    for &c in cycle.cols() {
        match window.base_column_of(c) {
            Some(info) => s.push(info + 1),
            None => {
                return Err(CyclesError::InvalidCycle(format!(
                    "column {c} of the cycle is systematic"
                )))
            }
        }
        shifts.push(window.shift_of(c));
    }
    let i: Vec<i64> = cycle
        .rows()
        .windows(2)
        .map(|p| p[1] as i64 - p[0] as i64)
        .collect();
    let f = i
        .iter()
        .enumerate()
        .map(|(h, &ih)| ih * (s[h + 1] as i64 - s[0] as i64))
        .sum();
    Ok(CycleSignature { s, shifts, i, f })
}
