//! Builds parity-check matrices from a difference triangle collection.
//!
//! The `l`-th information column of the base matrix has its nonzero entries
//! exactly at the rows listed in the `l`-th set of the collection; the last
//! `n - k` columns are an identity block on top of zeros. The window height
//! is `(mu + 1)(n - k)` with `mu = ceil(scope / (n - k)) - 1`, so the whole
//! collection always fits.
//!
//! Entry values come from one of three variants:
//!
//! * `Support` — all ones, a seeded random nonzero assignment, or explicit
//!   per-position values;
//! * `AlphaPowers` — entry at (row `i`, column `l`) is `a^(i*l)`;
//! * `ShiftedAlphaPowers` — entry at (row `i`, column `l`) is `a^(P^i * l)`,
//!   with the exponent reduced modulo `q - 1` by modular exponentiation.
//!
//! From the base matrix one obtains the truncated sliding windows (the
//! square-ish window with `mu + 1` block columns is the canonical object for
//! cycle and minor analysis) and the polynomial form `H(z) = [Htilde(z)  I]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dts::DifferenceTriangleSet;
use crate::field::{FieldError, FiniteField};
use crate::matrix::FieldMatrix;
use crate::poly::{FieldPoly, PolynomialMatrix};

/// How the nonzero entries of the base matrix get their values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    Support(SupportAssignment),
    AlphaPowers,
    ShiftedAlphaPowers { shift_base: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportAssignment {
    /// Every support position holds 1.
    Ones,
    /// Deterministic pseudo-random nonzero values: positions are visited
    /// column by column, rows ascending, drawing a discrete log uniformly
    /// from `[0, q - 1)`.
    Seeded(u64),
    /// Explicit values at chosen positions; unlisted support positions
    /// default to 1. Values use the polynomial-basis encoding.
    Explicit(Vec<ExplicitValue>),
}

/// A single explicit entry assignment (1-based row and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplicitValue {
    pub row: usize,
    pub col: usize,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("need n > k >= 1, got n = {n}, k = {k}")]
    BadRate { n: usize, k: usize },
    #[error("descriptor has k = {k} information columns but the collection provides {sets} sets")]
    SetCountMismatch { k: usize, sets: usize },
    #[error("explicit value targets ({row},{col}) which is not a support position")]
    NotASupportPosition { row: usize, col: usize },
    #[error("explicit value at ({row},{col}) assigned twice")]
    DuplicateAssignment { row: usize, col: usize },
    #[error("assigned value at ({row},{col}) is zero; support entries must be nonzero")]
    ZeroValue { row: usize, col: usize },
    #[error("shift base must be at least 2, got {0}")]
    BadShiftBase(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Everything needed to build one code: rate, field, value variant and the
/// support collection.
#[derive(Debug, Clone)]
pub struct CodeDescriptor {
    n: usize,
    k: usize,
    field: FiniteField,
    variant: Variant,
    dts: DifferenceTriangleSet,
}

impl CodeDescriptor {
    pub fn new(
        n: usize,
        k: usize,
        field: FiniteField,
        variant: Variant,
        dts: DifferenceTriangleSet,
    ) -> Result<Self, ConstructionError> {
        if k == 0 || n <= k {
            return Err(ConstructionError::BadRate { n, k });
        }
        if dts.num_sets() != k {
            return Err(ConstructionError::SetCountMismatch {
                k,
                sets: dts.num_sets(),
            });
        }
        if let Variant::ShiftedAlphaPowers { shift_base } = variant {
            if shift_base < 2 {
                return Err(ConstructionError::BadShiftBase(shift_base));
            }
        }
        Ok(CodeDescriptor {
            n,
            k,
            field,
            variant,
            dts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn dts(&self) -> &DifferenceTriangleSet {
        &self.dts
    }

    /// Memory order of the parity-check matrix:
    /// `ceil(scope / (n - k)) - 1`.
    pub fn mu(&self) -> usize {
        let d = (self.n - self.k) as u64;
        (self.dts.scope().div_ceil(d) - 1) as usize
    }

    /// Height of the base matrix, `(mu + 1)(n - k)`.
    pub fn window_rows(&self) -> usize {
        (self.mu() + 1) * (self.n - self.k)
    }

    /// Builds the base matrix.
    pub fn build(&self) -> Result<BaseMatrix, ConstructionError> {
        let f = &self.field;
        let rows = self.window_rows();
        let mut m = FieldMatrix::zero(f, rows, self.n);

        // Identity block of the systematic part.
        for s in 0..(self.n - self.k) {
            m.set(s, self.k + s, f.one());
        }

        match &self.variant {
            Variant::Support(SupportAssignment::Ones) => {
                for (l, set) in self.dts.sets().iter().enumerate() {
                    for &i in set {
                        m.set(i as usize - 1, l, f.one());
                    }
                }
            }
            Variant::Support(SupportAssignment::Seeded(seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let ord = f.unit_order().max(1);
                for (l, set) in self.dts.sets().iter().enumerate() {
                    for &i in set {
                        let e = rng.gen_range(0..ord);
                        m.set(i as usize - 1, l, f.from_log(e));
                    }
                }
            }
            Variant::Support(SupportAssignment::Explicit(values)) => {
                for (l, set) in self.dts.sets().iter().enumerate() {
                    for &i in set {
                        m.set(i as usize - 1, l, f.one());
                    }
                }
                let mut seen = std::collections::BTreeSet::new();
                for ev in values {
                    let (row, col) = (ev.row, ev.col);
                    let in_support = col >= 1
                        && col <= self.k
                        && self.dts.sets()[col - 1].contains(&(row as u64));
                    if !in_support {
                        return Err(ConstructionError::NotASupportPosition { row, col });
                    }
                    if !seen.insert((row, col)) {
                        return Err(ConstructionError::DuplicateAssignment { row, col });
                    }
                    if ev.value == 0 {
                        return Err(ConstructionError::ZeroValue { row, col });
                    }
                    let el = f.from_value(ev.value)?;
                    m.set(row - 1, col - 1, el);
                }
            }
            Variant::AlphaPowers => {
                for (l, set) in self.dts.sets().iter().enumerate() {
                    for &i in set {
                        let e = i as i128 * (l as i128 + 1);
                        m.set(i as usize - 1, l, f.alpha_pow(e));
                    }
                }
            }
            Variant::ShiftedAlphaPowers { shift_base } => {
                for (l, set) in self.dts.sets().iter().enumerate() {
                    for &i in set {
                        m.set(
                            i as usize - 1,
                            l,
                            f.alpha_pow_shifted(*shift_base, i, l as u64 + 1),
                        );
                    }
                }
            }
        }

        Ok(BaseMatrix {
            n: self.n,
            k: self.k,
            mu: self.mu(),
            matrix: m,
        })
    }
}

/// The base matrix: `mu + 1` stacked coefficient blocks of the parity-check
/// matrix, `(mu + 1)(n - k)` rows by `n` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMatrix {
    n: usize,
    k: usize,
    mu: usize,
    matrix: FieldMatrix,
}

impl BaseMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn n_minus_k(&self) -> usize {
        self.n - self.k
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn field(&self) -> &FiniteField {
        self.matrix.field()
    }

    /// The `i`-th coefficient block: rows `i(n-k) .. (i+1)(n-k)` of the base
    /// matrix, so `[A_0 | I]` for `i = 0` and `[A_i | 0]` afterwards.
    pub fn coefficient(&self, i: usize) -> FieldMatrix {
        let d = self.n_minus_k();
        let f = self.field().clone();
        let mut m = FieldMatrix::zero(&f, d, self.n);
        if i <= self.mu {
            for r in 0..d {
                for c in 0..self.n {
                    m.set(r, c, self.matrix.get(i * d + r, c));
                }
            }
        }
        m
    }

    /// The truncated sliding matrix with `j + 1` block columns: block
    /// column `b` is the base matrix shifted down by `b(n-k)` rows and
    /// cropped to `(j + 1)(n - k)` rows.
    pub fn truncated(&self, j: usize) -> SlidingMatrix {
        let d = self.n_minus_k();
        let rows = (j + 1) * d;
        let cols = (j + 1) * self.n;
        let f = self.field().clone();
        let mut m = FieldMatrix::zero(&f, rows, cols);
        for b in 0..=j {
            for c in 0..self.n {
                for r in 0..self.matrix.rows() {
                    let target = b * d + r;
                    if target >= rows {
                        break;
                    }
                    let el = self.matrix.get(r, c);
                    if !el.is_zero() {
                        m.set(target, b * self.n + c, el);
                    }
                }
            }
        }
        SlidingMatrix {
            n: self.n,
            k: self.k,
            j,
            matrix: m,
        }
    }

    /// The canonical analysis window with `mu + 1` block columns.
    pub fn sliding_window(&self) -> SlidingMatrix {
        self.truncated(self.mu)
    }

    /// The polynomial parity-check matrix `H(z) = [Htilde(z)  I]`,
    /// `(n - k) x n` with entries of degree at most `mu`.
    pub fn polynomial(&self) -> PolynomialMatrix {
        let d = self.n_minus_k();
        let f = self.field().clone();
        let mut pm = PolynomialMatrix::zero(&f, d, self.n);
        for r in 0..d {
            for c in 0..self.n {
                let coeffs = (0..=self.mu)
                    .map(|i| self.matrix.get(i * d + r, c))
                    .collect();
                pm.set(r, c, FieldPoly::new(&f, coeffs));
            }
        }
        pm
    }

    /// Weight of information column `l` (0-based) within the first
    /// `(j + 1)(n - k)` rows.
    pub fn column_weight_in_window(&self, l: usize, j: usize) -> usize {
        let limit = ((j + 1) * self.n_minus_k()).min(self.matrix.rows());
        self.matrix
            .column_support(l)
            .iter()
            .filter(|&&r| r < limit)
            .count()
    }
}

/// A truncated sliding parity-check matrix together with its block
/// geometry: `(j + 1)(n - k)` rows, `j + 1` block columns of `n` columns
/// each (information columns first, then the systematic ones).
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingMatrix {
    n: usize,
    k: usize,
    j: usize,
    matrix: FieldMatrix,
}

impl SlidingMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Truncation index: the window holds block columns `0 ..= j`.
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    /// Block (shift) index of a column.
    pub fn shift_of(&self, col: usize) -> usize {
        col / self.n
    }

    /// 0-based information-column index within the base matrix, or `None`
    /// for a systematic column.
    pub fn base_column_of(&self, col: usize) -> Option<usize> {
        let pos = col % self.n;
        (pos < self.k).then_some(pos)
    }

    pub fn is_systematic(&self, col: usize) -> bool {
        self.base_column_of(col).is_none()
    }
}
