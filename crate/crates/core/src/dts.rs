//! (Weak) difference triangle sets: validation in three modes, difference
//! queries used by the guarantee certifiers, and minimal-scope search.
//!
//! A collection `{T_1, ..., T_k}` of sets of positive integers is validated
//! in one of three modes:
//!
//! * **weak** — inside each single set, all pairwise differences are
//!   distinct;
//! * **strict** — all pairwise differences across the whole collection are
//!   distinct;
//! * **relaxed(d)** — differences from two different sets are always
//!   distinct, while two equal differences inside the same set are only a
//!   violation when `d` divides the difference of their larger endpoints.
//!
//! Strict implies both weak and relaxed(d) for every `d`; weak and
//! relaxed(d) do not imply each other.
//!
//! A [`DifferenceTriangleSet`] only guarantees *structural* soundness
//! (non-empty, strictly increasing, positive elements) plus a declared mode;
//! whether the collection actually satisfies its mode is interrogated with
//! [`DifferenceTriangleSet::validate`] or enforced up front with
//! [`DifferenceTriangleSet::new_valid`]. This split matters because codes
//! can be built from collections that tolerate some repeated differences:
//! the guarantees that hold for such codes are then decided per theorem, not
//! by the container.
//!
//! Elements are required to be >= 1 because the sets serve as 1-based row
//! supports of a parity-check matrix column. Differences are invariant under
//! translation, so this loses no generality for scope minimisation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{BudgetExceeded, BudgetMeter};

/// Validation mode for a difference triangle collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum DtsMode {
    Weak,
    Strict,
    Relaxed { d: u64 },
}

impl std::fmt::Display for DtsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DtsMode::Weak => write!(f, "weak"),
            DtsMode::Strict => write!(f, "strict"),
            DtsMode::Relaxed { d } => write!(f, "relaxed({d})"),
        }
    }
}

/// One repeated difference that breaks the requested mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Set index (0-based) of the first occurrence.
    pub set_a: usize,
    /// Set index (0-based) of the second occurrence.
    pub set_b: usize,
    /// The repeated difference value.
    pub difference: u64,
    /// Larger endpoints of the two pairs producing the difference.
    pub endpoints: (u64, u64),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.set_a == self.set_b {
            write!(
                f,
                "difference {} repeats inside set {} (pairs ending at {} and {})",
                self.difference, self.set_a, self.endpoints.0, self.endpoints.1
            )
        } else {
            write!(
                f,
                "difference {} occurs in both set {} and set {}",
                self.difference, self.set_a, self.set_b
            )
        }
    }
}

/// Outcome of checking a collection against a mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: DtsMode,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DtsError {
    #[error("a difference triangle collection needs at least one set")]
    NoSets,
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("set {set} must be strictly increasing (element {element} out of order or repeated)")]
    NotIncreasing { set: usize, element: u64 },
    #[error("set {0} contains 0; elements are 1-based support rows and must be positive")]
    ZeroElement(usize),
    #[error("relaxed mode requires d >= 1")]
    ZeroModulus,
    #[error("divisibility checks require a divisor >= 1")]
    ZeroDivisor,
    #[error("collection is not {mode}: {count} repeated difference(s), first: {first}")]
    ModeViolation {
        mode: DtsMode,
        count: usize,
        first: Violation,
    },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// A structurally sound difference triangle collection together with its
/// declared mode. Mode conformance is checked by [`Self::validate`]; use
/// [`Self::new_valid`] when a violation should be an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferenceTriangleSet {
    sets: Vec<Vec<u64>>,
    mode: DtsMode,
}

/// Structural checks shared by validation and construction: at least one
/// set, strictly increasing, positive elements, sane mode parameter.
fn check_structure(sets: &[Vec<u64>], mode: DtsMode) -> Result<(), DtsError> {
    if sets.is_empty() {
        return Err(DtsError::NoSets);
    }
    if let DtsMode::Relaxed { d: 0 } = mode {
        return Err(DtsError::ZeroModulus);
    }
    for (i, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(DtsError::EmptySet(i));
        }
        if set[0] == 0 {
            return Err(DtsError::ZeroElement(i));
        }
        for w in set.windows(2) {
            if w[1] <= w[0] {
                return Err(DtsError::NotIncreasing {
                    set: i,
                    element: w[1],
                });
            }
        }
    }
    Ok(())
}

/// All differences of a single strictly increasing set, as
/// `(difference, larger endpoint)` pairs.
fn set_difference_pairs(set: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(set.len() * (set.len() - 1) / 2);
    for (j, &hi) in set.iter().enumerate() {
        for &lo in &set[..j] {
            out.push((hi - lo, hi));
        }
    }
    out
}

/// Checks a collection against a mode, listing every repeated difference
/// that the mode forbids. Structural problems are reported as errors.
pub fn validate(sets: &[Vec<u64>], mode: DtsMode) -> Result<ValidationReport, DtsError> {
    check_structure(sets, mode)?;
    let mut violations = Vec::new();
    let per_set: Vec<Vec<(u64, u64)>> = sets.iter().map(|s| set_difference_pairs(s)).collect();

    // Within-set repetitions.
    for (i, pairs) in per_set.iter().enumerate() {
        for (b, &(diff_b, end_b)) in pairs.iter().enumerate() {
            for &(diff_a, end_a) in &pairs[..b] {
                if diff_a != diff_b {
                    continue;
                }
                let forbidden = match mode {
                    DtsMode::Weak | DtsMode::Strict => true,
                    DtsMode::Relaxed { d } => end_a.abs_diff(end_b) % d == 0,
                };
                if forbidden {
                    violations.push(Violation {
                        set_a: i,
                        set_b: i,
                        difference: diff_b,
                        endpoints: (end_a, end_b),
                    });
                }
            }
        }
    }

    // Cross-set repetitions (strict and relaxed modes only).
    if !matches!(mode, DtsMode::Weak) {
        for (i, pairs_i) in per_set.iter().enumerate() {
            for (j, pairs_j) in per_set.iter().enumerate().skip(i + 1) {
                for &(diff_a, end_a) in pairs_i {
                    for &(diff_b, end_b) in pairs_j {
                        if diff_a == diff_b {
                            violations.push(Violation {
                                set_a: i,
                                set_b: j,
                                difference: diff_a,
                                endpoints: (end_a, end_b),
                            });
                        }
                    }
                }
            }
        }
    }

    Ok(ValidationReport { mode, violations })
}

impl DifferenceTriangleSet {
    /// Wraps a structurally sound collection with a declared mode. Repeated
    /// differences are *not* rejected here; call [`Self::validate`] to learn
    /// whether the declared mode actually holds.
    pub fn new(sets: Vec<Vec<u64>>, mode: DtsMode) -> Result<Self, DtsError> {
        check_structure(&sets, mode)?;
        Ok(DifferenceTriangleSet { sets, mode })
    }

    /// Like [`Self::new`], but any repeated difference forbidden by `mode`
    /// is an error as well.
    pub fn new_valid(sets: Vec<Vec<u64>>, mode: DtsMode) -> Result<Self, DtsError> {
        let report = validate(&sets, mode)?;
        if let Some(first) = report.violations.first() {
            return Err(DtsError::ModeViolation {
                mode,
                count: report.violations.len(),
                first: first.clone(),
            });
        }
        Ok(DifferenceTriangleSet { sets, mode })
    }

    /// Checks the collection against its declared mode.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.sets, self.mode).expect("structure was checked at construction")
    }

    /// Checks the collection against an arbitrary mode.
    pub fn validate_as(&self, mode: DtsMode) -> Result<ValidationReport, DtsError> {
        validate(&self.sets, mode)
    }

    /// True when the collection satisfies its declared mode.
    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn sets(&self) -> &[Vec<u64>] {
        &self.sets
    }

    pub fn mode(&self) -> DtsMode {
        self.mode
    }

    /// Number of sets (the `k` of a `(k, w)` collection).
    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Set size when all sets have the same cardinality.
    pub fn uniform_weight(&self) -> Option<usize> {
        let w = self.sets[0].len();
        self.sets.iter().all(|s| s.len() == w).then_some(w)
    }

    pub fn min_weight(&self) -> usize {
        self.sets.iter().map(|s| s.len()).min().unwrap()
    }

    pub fn total_weight(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// Largest element across the collection.
    pub fn scope(&self) -> u64 {
        self.sets.iter().map(|s| *s.last().unwrap()).max().unwrap()
    }

    /// Whether every set has 1 as its smallest element.
    pub fn all_sets_start_at_one(&self) -> bool {
        self.sets.iter().all(|s| s[0] == 1)
    }

    /// Sorted pairwise differences of one set.
    pub fn within_differences(&self, set: usize) -> Vec<u64> {
        let mut diffs: Vec<u64> = set_difference_pairs(&self.sets[set])
            .into_iter()
            .map(|(d, _)| d)
            .collect();
        diffs.sort_unstable();
        diffs
    }

    /// Sorted pairwise differences of all sets (with multiplicity).
    pub fn all_within_differences(&self) -> Vec<u64> {
        let mut diffs: Vec<u64> = (0..self.sets.len())
            .flat_map(|i| self.within_differences(i))
            .collect();
        diffs.sort_unstable();
        diffs
    }

    /// True when no within-set difference is a multiple of `d`. This is the
    /// hypothesis forcing adjacent cycle columns to come from different base
    /// columns.
    pub fn within_differences_avoid_multiples_of(&self, d: u64) -> bool {
        assert!(d > 0);
        self.all_within_differences().iter().all(|&x| x % d != 0)
    }

    /// Checked variant of [`Self::within_differences_avoid_multiples_of`]:
    /// true iff no within-set difference is divisible by `d`.
    pub fn no_difference_divisible(&self, d: u64) -> Result<bool, DtsError> {
        if d == 0 {
            return Err(DtsError::ZeroDivisor);
        }
        Ok(self.within_differences_avoid_multiples_of(d))
    }

    /// The triangular difference tables, one per set: row `r` (from 1) of a
    /// table holds the differences between elements `r` apart.
    pub fn triangles(&self) -> Vec<Vec<Vec<u64>>> {
        self.sets
            .iter()
            .map(|set| {
                (1..set.len())
                    .map(|r| (0..set.len() - r).map(|j| set[j + r] - set[j]).collect())
                    .collect()
            })
            .collect()
    }

    /// True when no column of the window built from this collection can meet
    /// one of its own shifts (by multiples of `d` rows) in two places: every
    /// repeated within-set difference must have endpoints whose gap is not a
    /// multiple of `d`. This is the working hypothesis behind the small-minor
    /// guarantees, and is weaker than weak-mode validity.
    pub fn self_shift_overlap_free(&self, d: u64) -> Result<bool, DtsError> {
        if d == 0 {
            return Err(DtsError::ZeroDivisor);
        }
        let report = self
            .validate_as(DtsMode::Relaxed { d })
            .expect("structure was checked at construction");
        Ok(report.violations.iter().all(|v| v.set_a != v.set_b))
    }

    /// True when the collection guarantees a cycle-free Tanner graph for an
    /// `(n, k)` code regardless of field or values: the collection is
    /// strict-mode valid, every set starts at 1, and no difference between
    /// any two elements anywhere is a nonzero multiple of `n - k`.
    pub fn cyclefree_conditions(&self, n: usize, k: usize) -> Result<bool, DtsError> {
        if k != self.num_sets() || n <= k {
            return Err(DtsError::BadParameters(format!(
                "need n > k = number of sets, got n = {n}, k = {k} for {} sets",
                self.num_sets()
            )));
        }
        Ok(self.validate_as(DtsMode::Strict)?.is_valid()
            && self.all_sets_start_at_one()
            && self.all_pairwise_differences_avoid_multiples_of((n - k) as u64))
    }

    /// Window height `(mu + 1)(n - k)` of the canonical sliding window for
    /// an `(n, k)` code built from this collection.
    pub fn window_height(&self, n: usize, k: usize) -> usize {
        let nk = n - k;
        let mu = (self.scope() as usize).div_ceil(nk) - 1;
        (mu + 1) * nk
    }

    /// Decides whether the alternating sum `f(i, s)` can vanish over the
    /// integers for even-half-length cycle patterns, at two levels:
    ///
    /// * **abstract** — every tuple admitted by the guarantee hypothesis:
    ///   `s` in `{1..k}^l` not all equal, `|i_h|` a difference of the set
    ///   indexed by `s_{h+1}`, the absolute sum of the `i_h` a difference of
    ///   the set indexed by `s_1`, pruned by row feasibility (all implied
    ///   row positions must fit inside the window);
    /// * **realizable** — only patterns arising from actual cycles in the
    ///   support of the canonical sliding window (enumerated here directly
    ///   from the sets, independent of any matrix code path).
    ///
    /// Every pattern with `f = 0` defeats the corresponding even-cycle
    /// field-size guarantee at that level.
    pub fn even_cycle_f_nonzero(
        &self,
        n: usize,
        k: usize,
        l: usize,
        meter: &mut BudgetMeter,
    ) -> Result<EvenCycleFReport, DtsError> {
        if k != self.num_sets() || n <= k {
            return Err(DtsError::BadParameters(format!(
                "need n > k = number of sets, got n = {n}, k = {k} for {} sets",
                self.num_sets()
            )));
        }
        if l < 2 || !l.is_multiple_of(2) {
            return Err(DtsError::BadParameters(format!(
                "half-length must be even and at least 2, got {l}"
            )));
        }
        let d = (n - k) as u64;
        if !self.no_difference_divisible(d)? {
            return Err(DtsError::BadParameters(format!(
                "a within-set difference is divisible by n - k = {d}; the \
                 even-cycle analysis requires the divisibility precondition"
            )));
        }
        let height = self.window_height(n, k);
        let diffs: Vec<Vec<u64>> = (0..k)
            .map(|t| {
                let mut ds = self.within_differences(t);
                ds.dedup();
                ds
            })
            .collect();

        let mut abstract_zero_patterns = Vec::new();
        let mut s = vec![0usize; l];
        loop {
            if s.iter().any(|&x| x != s[0]) {
                let mut i = Vec::with_capacity(l - 1);
                abstract_scan(
                    &diffs,
                    &s,
                    height,
                    &mut i,
                    0,
                    0,
                    0,
                    &mut abstract_zero_patterns,
                    meter,
                )?;
            }
            // Odometer over {0..k}^l.
            let mut pos = l;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                s[pos] += 1;
                if s[pos] < k {
                    break;
                }
                s[pos] = 0;
            }
            if s.iter().all(|&x| x == 0) {
                break;
            }
        }

        let realizable_signatures = self.window_cycle_patterns(n, k, l, height, meter)?;
        Ok(EvenCycleFReport {
            l,
            abstract_zero_patterns,
            realizable_signatures,
        })
    }

    /// Enumerates cycles of half-length exactly `l` in the support of the
    /// canonical sliding window and returns their `(s, i, f)` patterns.
    fn window_cycle_patterns(
        &self,
        n: usize,
        k: usize,
        l: usize,
        height: usize,
        meter: &mut BudgetMeter,
    ) -> Result<Vec<FPattern>, DtsError> {
        let nk = n - k;
        let shifts = height / nk;
        // Columns in window order (shift-major, then set), with their
        // cropped 0-based row supports.
        let mut columns: Vec<(usize, Vec<usize>)> = Vec::new();
        for b in 0..shifts {
            for (t, set) in self.sets.iter().enumerate() {
                let rows: Vec<usize> = set
                    .iter()
                    .map(|&a| a as usize - 1 + b * nk)
                    .filter(|&r| r < height)
                    .collect();
                columns.push((t, rows));
            }
        }
        let mut patterns = Vec::new();
        let walker = PatternWalk {
            columns: &columns,
            l,
        };
        for r0 in 0..height {
            let mut used_cols = vec![false; columns.len()];
            let mut used_rows = vec![false; height];
            used_rows[r0] = true;
            let mut path_rows = vec![r0];
            let mut path_cols = Vec::new();
            walker.step(
                r0,
                r0,
                &mut path_rows,
                &mut path_cols,
                &mut used_rows,
                &mut used_cols,
                &mut patterns,
                meter,
            )?;
        }
        Ok(patterns)
    }
}

/// Depth-first enumeration of the admissible abstract `i` vectors for a
/// fixed `s`, pruned by the window-feasibility of the implied row offsets.
#[allow(clippy::too_many_arguments)]
fn abstract_scan(
    diffs: &[Vec<u64>],
    s: &[usize],
    height: usize,
    i: &mut Vec<i64>,
    prefix: i64,
    prefix_min: i64,
    prefix_max: i64,
    out: &mut Vec<FPattern>,
    meter: &mut BudgetMeter,
) -> Result<(), DtsError> {
    meter.charge(1)?;
    let l = s.len();
    if i.len() == l - 1 {
        if diffs[s[0]].binary_search(&prefix.unsigned_abs()).is_err() {
            return Ok(());
        }
        let f: i64 = i
            .iter()
            .enumerate()
            .map(|(h, &ih)| ih * (s[h + 1] as i64 - s[0] as i64))
            .sum();
        if f == 0 {
            out.push(FPattern {
                s: s.iter().map(|&x| x + 1).collect(),
                i: i.clone(),
                f: 0,
            });
        }
        return Ok(());
    }
    let next_set = s[i.len() + 1];
    for &mag in &diffs[next_set] {
        for sign in [1i64, -1] {
            let ih = sign * mag as i64;
            let p = prefix + ih;
            let lo = prefix_min.min(p);
            let hi = prefix_max.max(p);
            // All rows r_1 + prefix offsets must fit in 1..=height.
            if (hi - lo) as usize > height - 1 {
                continue;
            }
            i.push(ih);
            abstract_scan(diffs, s, height, i, p, lo, hi, out, meter)?;
            i.pop();
        }
    }
    Ok(())
}

/// Support-level cycle walk used by the realizable pattern enumeration.
/// Deliberately self-contained: it re-derives cycles from the difference
/// sets alone so it can cross-validate the matrix-level enumeration.
struct PatternWalk<'a> {
    columns: &'a [(usize, Vec<usize>)],
    l: usize,
}

impl PatternWalk<'_> {
    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        r0: usize,
        current: usize,
        path_rows: &mut Vec<usize>,
        path_cols: &mut Vec<usize>,
        used_rows: &mut [bool],
        used_cols: &mut [bool],
        out: &mut Vec<FPattern>,
        meter: &mut BudgetMeter,
    ) -> Result<(), DtsError> {
        for (ci, (_, rows)) in self.columns.iter().enumerate() {
            meter.charge(1)?;
            if used_cols[ci] || rows.binary_search(&current).is_err() {
                continue;
            }
            if path_cols.len() + 1 == self.l {
                // Closing column: must return to the start row, and the
                // direction is fixed by comparing first and last columns.
                if path_cols[0] < ci && rows.binary_search(&r0).is_ok() {
                    let s: Vec<usize> = path_cols
                        .iter()
                        .chain(std::iter::once(&ci))
                        .map(|&c| self.columns[c].0 + 1)
                        .collect();
                    let i: Vec<i64> = path_rows
                        .windows(2)
                        .map(|p| p[1] as i64 - p[0] as i64)
                        .collect();
                    let f = i
                        .iter()
                        .enumerate()
                        .map(|(h, &ih)| ih * (s[h + 1] as i64 - s[0] as i64))
                        .sum();
                    out.push(FPattern { s, i, f });
                }
                continue;
            }
            for &r in rows {
                meter.charge(1)?;
                if r <= r0 || used_rows[r] {
                    continue;
                }
                used_cols[ci] = true;
                used_rows[r] = true;
                path_cols.push(ci);
                path_rows.push(r);
                self.step(
                    r0, r, path_rows, path_cols, used_rows, used_cols, out, meter,
                )?;
                path_rows.pop();
                path_cols.pop();
                used_rows[r] = false;
                used_cols[ci] = false;
            }
        }
        Ok(())
    }
}

/// One cycle pattern: which base sets the columns come from (1-based, in
/// cycle order), the successive row differences, and the alternating sum
/// `f = sum_h i_h (s_{h+1} - s_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FPattern {
    pub s: Vec<usize>,
    pub i: Vec<i64>,
    pub f: i64,
}

/// Two-level answer to "can `f(i, s)` vanish over the integers?".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenCycleFReport {
    /// Half-length under examination (even).
    pub l: usize,
    /// Hypothesis-level tuples with `f = 0` (empty means the guarantee's
    /// blanket hypothesis holds as stated).
    pub abstract_zero_patterns: Vec<FPattern>,
    /// Patterns of every support cycle of this half-length in the canonical
    /// window, with their `f` values.
    pub realizable_signatures: Vec<FPattern>,
}

impl EvenCycleFReport {
    /// No admissible abstract tuple has `f = 0`.
    pub fn abstract_holds(&self) -> bool {
        self.abstract_zero_patterns.is_empty()
    }

    /// No realizable cycle pattern has `f = 0`; this is the condition the
    /// certifier uses, since only realizable cycles exist in the code.
    pub fn realizable_holds(&self) -> bool {
        self.realizable_signatures.iter().all(|p| p.f != 0)
    }

    pub fn realizable_zero_patterns(&self) -> Vec<&FPattern> {
        self.realizable_signatures
            .iter()
            .filter(|p| p.f == 0)
            .collect()
    }
}

impl DifferenceTriangleSet {
    /// True when no difference between any two elements anywhere in the
    /// collection (same set or not) is a nonzero multiple of `d`. This is
    /// the hypothesis of the value-independent cycle-free guarantee.
    pub fn all_pairwise_differences_avoid_multiples_of(&self, d: u64) -> bool {
        assert!(d > 0);
        let elements: Vec<u64> = self.sets.iter().flatten().copied().collect();
        for (i, &a) in elements.iter().enumerate() {
            for &b in &elements[..i] {
                let diff = a.abs_diff(b);
                if diff != 0 && diff % d == 0 {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search needs k >= 1 and w >= 1")]
    InvalidParameters,
    #[error("relaxed mode requires d >= 1")]
    ZeroModulus,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Finds a `(k, w)` collection of the requested mode with minimal scope, by
/// iterative deepening on the scope. Every set starts at 1 (differences are
/// translation-invariant, so this is no restriction for minimality) and the
/// sets are produced in lexicographically nondecreasing order.
///
/// Returns `None` only when `max_scope` is given and no collection fits it.
pub fn search_min_scope(
    k: usize,
    w: usize,
    mode: DtsMode,
    max_scope: Option<u64>,
    meter: &mut BudgetMeter,
) -> Result<Option<DifferenceTriangleSet>, SearchError> {
    if k == 0 || w == 0 {
        return Err(SearchError::InvalidParameters);
    }
    if let DtsMode::Relaxed { d: 0 } = mode {
        return Err(SearchError::ZeroModulus);
    }
    // Scope lower bounds: the largest within-set difference is scope - 1;
    // weak mode needs w*(w-1)/2 distinct differences per set, strict mode
    // that many for each of the k sets simultaneously. Relaxed mode can
    // tolerate repeats, so only the trivial bound applies there.
    let pair_count = (w * (w - 1) / 2) as u64;
    let mut m = w as u64;
    match mode {
        DtsMode::Weak => m = m.max(pair_count + 1),
        DtsMode::Strict => m = m.max(k as u64 * pair_count + 1),
        DtsMode::Relaxed { .. } => {}
    }
    loop {
        if let Some(cap) = max_scope {
            if m > cap {
                return Ok(None);
            }
        }
        let mut sets: Vec<Vec<u64>> = Vec::new();
        if search_sets(k, w, m, mode, &mut sets, meter)? {
            let found = DifferenceTriangleSet::new_valid(sets, mode)
                .expect("search result must validate against its own mode");
            return Ok(Some(found));
        }
        m += 1;
    }
}

/// Depth-first search for the remaining sets, each of size `w`, elements in
/// `[1, m]`, first element 1, collection lexicographically nondecreasing.
fn search_sets(
    k: usize,
    w: usize,
    m: u64,
    mode: DtsMode,
    sets: &mut Vec<Vec<u64>>,
    meter: &mut BudgetMeter,
) -> Result<bool, BudgetExceeded> {
    if sets.len() == k {
        return Ok(true);
    }
    let mut current = vec![1u64];
    extend_set(k, w, m, mode, sets, &mut current, meter)
}

fn extend_set(
    k: usize,
    w: usize,
    m: u64,
    mode: DtsMode,
    sets: &mut Vec<Vec<u64>>,
    current: &mut Vec<u64>,
    meter: &mut BudgetMeter,
) -> Result<bool, BudgetExceeded> {
    meter.charge(1)?;
    if current.len() == w {
        // Keep the collection ordered to prune permuted duplicates.
        if let Some(prev) = sets.last() {
            if current.as_slice() < prev.as_slice() {
                return Ok(false);
            }
        }
        sets.push(current.clone());
        let ok = search_sets(k, w, m, mode, sets, meter)?;
        if ok {
            return Ok(true);
        }
        sets.pop();
        return Ok(false);
    }
    let last = *current.last().unwrap();
    // Leave room for the remaining elements of this set.
    let remaining = (w - current.len()) as u64;
    for e in (last + 1)..=(m.saturating_sub(remaining - 1)) {
        current.push(e);
        if candidate_ok(sets, current, mode) {
            let ok = extend_set(k, w, m, mode, sets, current, meter)?;
            if ok {
                return Ok(true);
            }
        }
        current.pop();
    }
    Ok(false)
}

/// Incremental mode check: only differences involving the newest element of
/// the set under construction need inspection.
fn candidate_ok(sets: &[Vec<u64>], current: &[u64], mode: DtsMode) -> bool {
    let newest = *current.last().unwrap();
    let older = &current[..current.len() - 1];
    for &lo in older {
        let diff = newest - lo;
        // Against earlier differences of the same (partial) set.
        for (j, &hi) in current.iter().enumerate() {
            for &lo2 in &current[..j] {
                let other = hi - lo2;
                if hi == newest && lo2 == lo {
                    continue;
                }
                if other != diff {
                    continue;
                }
                match mode {
                    DtsMode::Weak | DtsMode::Strict => return false,
                    DtsMode::Relaxed { d } => {
                        if hi.abs_diff(newest) % d == 0 {
                            return false;
                        }
                    }
                }
            }
        }
        // Against completed sets (cross-set rules).
        if !matches!(mode, DtsMode::Weak) {
            for set in sets {
                for (j, &hi) in set.iter().enumerate() {
                    for &lo2 in &set[..j] {
                        if hi - lo2 == diff {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}
