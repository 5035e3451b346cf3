//! Dense matrices over a finite field: elimination, rank, determinants,
//! span membership, kernels, and the plain-text dumps used by the CLI.

use crate::field::{FieldElement, FieldError, FiniteField};

/// A dense `rows x cols` matrix over one field, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zero(field: &FiniteField, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(
        field: &FiniteField,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<Self, FieldError> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(FieldError::DimensionMismatch("ragged row lengths".into()));
        }
        let mut m = FieldMatrix::zero(field, nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, el) in row.into_iter().enumerate() {
                m.set(i, j, el);
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(
        field: &FiniteField,
        cols: &[Vec<FieldElement>],
    ) -> Result<Self, FieldError> {
        let ncols = cols.len();
        let nrows = cols.first().map(|c| c.len()).unwrap_or(0);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(FieldError::DimensionMismatch(
                "ragged column lengths".into(),
            ));
        }
        let mut m = FieldMatrix::zero(field, nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            for (i, &el) in col.iter().enumerate() {
                m.set(i, j, el);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, el: FieldElement) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        // Route through an arithmetic no-op so the field tag is validated.
        let checked = self.field.mul(el, self.field.one());
        self.data[r * self.cols + c] = checked;
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    /// Row indices of the nonzero entries of column `c`.
    pub fn column_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows)
            .filter(|&r| !self.get(r, c).is_zero())
            .collect()
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.data.iter().filter(|el| !el.is_zero()).count()
    }

    /// Submatrix picked out by row and column index lists (in order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> FieldMatrix {
        let mut m = FieldMatrix::zero(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "vector length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        self.require_addition()?;
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (c, &x) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.get(r, c), x));
                }
                acc
            })
            .collect())
    }

    /// Errors out early when the field cannot perform addition (no discrete
    /// log available), which elimination-based operations need.
    pub fn require_addition(&self) -> Result<(), FieldError> {
        if self.field.supports_addition() {
            Ok(())
        } else {
            Err(FieldError::NoDiscreteLog {
                q: self.field.order(),
            })
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<FieldElement, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        self.require_addition()?;
        let f = self.field.clone();
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(pr) = pivot else {
                return Ok(f.zero());
            };
            if pr != col {
                m.swap_rows(pr, col);
                det = f.neg(det);
            }
            let pv = m.get(col, col);
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in (col + 1)..n {
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let scale = f.mul(factor, inv);
                for c in col..n {
                    let upd = f.sub(m.get(r, c), f.mul(scale, m.get(col, c)));
                    m.data[r * n + c] = upd;
                }
            }
        }
        Ok(det)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> Result<usize, FieldError> {
        self.require_addition()?;
        let f = self.field.clone();
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(pr) = pivot else { continue };
            m.swap_rows(pr, rank);
            let inv = f.inv(m.get(rank, col));
            for r in (rank + 1)..m.rows {
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let scale = f.mul(factor, inv);
                for c in col..m.cols {
                    let upd = f.sub(m.get(r, c), f.mul(scale, m.get(rank, c)));
                    m.data[r * m.cols + c] = upd;
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        Ok(rank)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Whether `target` lies in the column span of `self`.
    pub fn spans(&self, target: &[FieldElement]) -> Result<bool, FieldError> {
        if target.len() != self.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "target length {} for {} rows",
                target.len(),
                self.rows
            )));
        }
        Ok(self.solve(target)?.is_some())
    }

    /// Finds coefficients `x` with `self * x = target`, if any (free
    /// variables set to zero).
    pub fn solve(&self, target: &[FieldElement]) -> Result<Option<Vec<FieldElement>>, FieldError> {
        if target.len() != self.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "target length {} for {} rows",
                target.len(),
                self.rows
            )));
        }
        self.require_addition()?;
        let f = self.field.clone();
        // Augmented elimination.
        let mut m = FieldMatrix::zero(&f, self.rows, self.cols + 1);
        for (r, &t) in target.iter().enumerate() {
            for c in 0..self.cols {
                m.data[r * m.cols + c] = self.get(r, c);
            }
            m.data[r * m.cols + self.cols] = t;
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(pr) = pivot else { continue };
            m.swap_rows(pr, rank);
            let inv = f.inv(m.get(rank, col));
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let scale = f.mul(factor, inv);
                for c in col..m.cols {
                    let upd = f.sub(m.get(r, c), f.mul(scale, m.get(rank, c)));
                    m.data[r * m.cols + c] = upd;
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        // Inconsistent iff some row is zero on the left but not on the right.
        for r in rank..m.rows {
            if !m.get(r, self.cols).is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![f.zero(); self.cols];
        for &(pr, pc) in &pivots {
            x[pc] = f.div(m.get(pr, self.cols), m.get(pr, pc));
        }
        Ok(Some(x))
    }

    /// A basis of the right kernel `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<FieldElement>>, FieldError> {
        self.require_addition()?;
        let f = self.field.clone();
        let mut m = self.clone();
        // Reduced row echelon form.
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(pr) = pivot else { continue };
            m.swap_rows(pr, rank);
            let inv = f.inv(m.get(rank, col));
            for c in col..m.cols {
                m.data[rank * m.cols + c] = f.mul(m.get(rank, c), inv);
            }
            for r in 0..m.rows {
                if r == rank {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let upd = f.sub(m.get(r, c), f.mul(factor, m.get(rank, c)));
                    m.data[r * m.cols + c] = upd;
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for &(pr, pc) in &pivots {
                v[pc] = f.neg(m.get(pr, free));
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// One line per row, entries as `a^e` / `0`, single-space separated,
    /// trailing newline.
    pub fn text_dump(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    out.push(' ');
                }
                out.push_str(&self.field.element_string(self.get(r, c)));
            }
            out.push('\n');
        }
        out
    }

    /// Same layout as [`text_dump`](Self::text_dump) but entries reduced to
    /// `1` (nonzero) / `0`.
    pub fn support_dump(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    out.push(' ');
                }
                out.push(if self.get(r, c).is_zero() { '0' } else { '1' });
            }
            out.push('\n');
        }
        out
    }
}
