//! Univariate polynomials over a finite field, enough ring arithmetic for
//! minor degrees, gcds, and evaluation.

use crate::field::{FieldElement, FieldError, FiniteField};

/// A polynomial in one variable `z` with coefficients in one field.
/// Coefficients are stored constant-first with no trailing zeros; the zero
/// polynomial has an empty coefficient vector and degree `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPoly {
    field: FiniteField,
    coeffs: Vec<FieldElement>,
}

impl FieldPoly {
    pub fn new(field: &FiniteField, coeffs: Vec<FieldElement>) -> Self {
        let mut p = FieldPoly {
            field: field.clone(),
            coeffs,
        };
        p.normalise();
        p
    }

    pub fn zero(field: &FiniteField) -> Self {
        FieldPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &FiniteField, el: FieldElement) -> Self {
        Self::new(field, vec![el])
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, field.one())
    }

    /// `el * z^deg`.
    pub fn monomial(field: &FiniteField, el: FieldElement, deg: usize) -> Self {
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = el;
        Self::new(field, coeffs)
    }

    fn normalise(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .copied()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Self::new(f, coeffs)
    }

    pub fn mul_scalar(&self, s: FieldElement) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self), FieldError> {
        if divisor.is_zero() {
            return Err(FieldError::DimensionMismatch(
                "polynomial division by zero".into(),
            ));
        }
        let f = self.field.clone();
        let dlead = divisor.leading().unwrap();
        let dinv = f.inv(dlead);
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = vec![f.zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = f.mul(rem.leading().unwrap(), dinv);
            let shift = rdeg - ddeg;
            quo[shift] = factor;
            let sub = divisor.mul(&Self::monomial(&f, factor, shift));
            rem = rem.sub(&sub);
        }
        Ok((Self::new(&f, quo), rem))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self, FieldError> {
        let f = self.field.clone();
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading() {
            a = a.mul_scalar(f.inv(lead));
        }
        Ok(a)
    }

    pub fn eval(&self, at: FieldElement) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, at), c);
        }
        acc
    }

    /// Renders as `0` or a sum like `a^0 + a^3 z + a^1 z^2` (zero terms
    /// skipped, coefficients always explicit).
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = f.element_string(c);
            let term = match i {
                0 => coeff,
                1 => format!("{coeff} z"),
                _ => format!("{coeff} z^{i}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

/// A matrix with polynomial entries over one finite field, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    entries: Vec<FieldPoly>,
}

impl PolynomialMatrix {
    pub fn zero(field: &FiniteField, rows: usize, cols: usize) -> Self {
        let entries = vec![FieldPoly::zero(field); rows * cols];
        PolynomialMatrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
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

    pub fn get(&self, r: usize, c: usize) -> &FieldPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: FieldPoly) {
        self.entries[r * self.cols + c] = p;
    }

    /// Largest entry degree, `None` when every entry is zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|p| p.degree()).max()
    }

    /// Determinant of the square submatrix on the given columns (all rows),
    /// by cofactor expansion. Intended for the small full-size minors of a
    /// parity-check matrix, not for large matrices.
    pub fn minor(&self, cols: &[usize]) -> Result<FieldPoly, FieldError> {
        if cols.len() != self.rows {
            return Err(FieldError::NotSquare {
                rows: self.rows,
                cols: cols.len(),
            });
        }
        for &c in cols {
            if c >= self.cols {
                return Err(FieldError::DimensionMismatch(format!(
                    "column {c} out of range for {} columns",
                    self.cols
                )));
            }
        }
        Ok(self.minor_rec(0, cols))
    }

    fn minor_rec(&self, row: usize, cols: &[usize]) -> FieldPoly {
        if cols.is_empty() {
            return FieldPoly::one(&self.field);
        }
        let mut acc = FieldPoly::zero(&self.field);
        let mut negate = false;
        for (pos, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if !e.is_zero() {
                let rest: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pos)
                    .map(|(_, &x)| x)
                    .collect();
                let sub = self.minor_rec(row + 1, &rest);
                let term = e.mul(&sub);
                acc = if negate {
                    acc.sub(&term)
                } else {
                    acc.add(&term)
                };
            }
            negate = !negate;
        }
        acc
    }

    /// All full-size minors (one per choice of `rows` columns, in
    /// lexicographic column order).
    pub fn full_size_minors(&self) -> Result<Vec<(Vec<usize>, FieldPoly)>, FieldError> {
        if self.rows > self.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "{} rows exceed {} columns",
                self.rows, self.cols
            )));
        }
        let mut out = Vec::new();
        if self.rows == 0 {
            return Ok(out);
        }
        let mut choice: Vec<usize> = (0..self.rows).collect();
        loop {
            out.push((choice.clone(), self.minor(&choice)?));
            // Advance to the next lexicographic combination.
            let m = self.rows;
            let mut i = m;
            while i > 0 {
                i -= 1;
                if choice[i] != i + self.cols - m {
                    choice[i] += 1;
                    for j in i + 1..m {
                        choice[j] = choice[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    return Ok(out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64, n: u32) -> FiniteField {
        FiniteField::new(p, n).unwrap()
    }

    fn poly_from_values(f: &FiniteField, vals: &[u64]) -> FieldPoly {
        FieldPoly::new(f, vals.iter().map(|&v| f.from_value(v).unwrap()).collect())
    }

    #[test]
    fn degree_and_normalisation() {
        let f = gf(5, 1);
        assert_eq!(FieldPoly::zero(&f).degree(), None);
        assert_eq!(poly_from_values(&f, &[3]).degree(), Some(0));
        assert_eq!(poly_from_values(&f, &[0, 0, 2, 0, 0]).degree(), Some(2));
        assert!(poly_from_values(&f, &[0, 0]).is_zero());
    }

    #[test]
    fn product_degree_adds() {
        let f = gf(7, 1);
        let a = poly_from_values(&f, &[1, 2, 3]);
        let b = poly_from_values(&f, &[0, 5]);
        assert_eq!(a.mul(&b).degree(), Some(3));
    }

    #[test]
    fn eval_finds_roots() {
        let f = gf(7, 1);
        // (z - 1)(z - 2) = z^2 - 3z + 2 = z^2 + 4z + 2
        let p = poly_from_values(&f, &[2, 4, 1]);
        assert!(p.eval(f.from_value(1).unwrap()).is_zero());
        assert!(p.eval(f.from_value(2).unwrap()).is_zero());
        assert!(!p.eval(f.from_value(3).unwrap()).is_zero());
    }

    #[test]
    fn divrem_round_trip_randomised() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [(2u64, 1u32), (5, 1), (2, 2), (3, 2)] {
            let f = gf(p, n);
            for _ in 0..50 {
                let da = rng.gen_range(0..6);
                let db = rng.gen_range(0..4);
                let a = FieldPoly::new(
                    &f,
                    (0..=da)
                        .map(|_| f.from_value(rng.gen_range(0..f.order())).unwrap())
                        .collect(),
                );
                let mut bc: Vec<_> = (0..db)
                    .map(|_| f.from_value(rng.gen_range(0..f.order())).unwrap())
                    .collect();
                bc.push(f.from_value(rng.gen_range(1..f.order())).unwrap());
                let b = FieldPoly::new(&f, bc);
                let (q, r) = a.divrem(&b).unwrap();
                assert_eq!(q.mul(&b).add(&r), a);
                assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
            }
        }
    }

    #[test]
    fn gcd_shared_and_coprime() {
        let f = gf(13, 1);
        let z = FieldPoly::monomial(&f, f.one(), 1);
        // gcd(z, z) = z: a shared non-constant factor.
        let g = z.gcd(&z).unwrap();
        assert_eq!(g.degree(), Some(1));
        // gcd(1 + z, z) is constant: no common factor.
        let one_plus_z = z.add(&FieldPoly::one(&f));
        let g2 = one_plus_z.gcd(&z).unwrap();
        assert_eq!(g2.degree(), Some(0));
        assert_eq!(g2, FieldPoly::one(&f));
        // gcd is monic and divides both of its inputs.
        let a = z.add(&FieldPoly::one(&f)).mul(&z);
        let b = z.add(&FieldPoly::one(&f)).mul(&one_plus_z.mul(&z.mul(&z)));
        let g3 = a.gcd(&b).unwrap();
        assert_eq!(g3.leading(), Some(f.one()));
        assert!(a.divrem(&g3).unwrap().1.is_zero());
        assert!(b.divrem(&g3).unwrap().1.is_zero());
    }

    #[test]
    fn render_is_stable() {
        let f = gf(3, 1);
        let p = poly_from_values(&f, &[1, 0, 2]);
        assert_eq!(p.render(), "a^0 + a^1 z^2");
        assert_eq!(FieldPoly::zero(&f).render(), "0");
        assert_eq!(poly_from_values(&f, &[0, 2]).render(), "a^1 z");
    }

    #[test]
    fn matrix_minor_against_hand_expansion() {
        let f = gf(7, 1);
        let z = FieldPoly::monomial(&f, f.one(), 1);
        let one = FieldPoly::one(&f);
        // [[1, z], [z, 1]] has determinant 1 - z^2.
        let mut m = PolynomialMatrix::zero(&f, 2, 2);
        m.set(0, 0, one.clone());
        m.set(0, 1, z.clone());
        m.set(1, 0, z.clone());
        m.set(1, 1, one.clone());
        let det = m.minor(&[0, 1]).unwrap();
        assert_eq!(det, one.sub(&z.mul(&z)));
        // Swapping the columns flips the sign.
        assert_eq!(m.minor(&[1, 0]).unwrap(), z.mul(&z).sub(&one));
        assert!(matches!(m.minor(&[0]), Err(FieldError::NotSquare { .. })));
    }

    #[test]
    fn full_size_minors_enumerates_column_subsets() {
        let f = gf(5, 1);
        let z = FieldPoly::monomial(&f, f.one(), 1);
        let one = FieldPoly::one(&f);
        // 1 x 3 matrix [1 + z, z, 1]: the three minors are the entries.
        let mut m = PolynomialMatrix::zero(&f, 1, 3);
        m.set(0, 0, one.add(&z));
        m.set(0, 1, z.clone());
        m.set(0, 2, one.clone());
        let minors = m.full_size_minors().unwrap();
        assert_eq!(minors.len(), 3);
        assert_eq!(minors[0].0, vec![0]);
        assert_eq!(minors[0].1, one.add(&z));
        assert_eq!(minors[2].1, one);
        assert_eq!(m.max_degree(), Some(1));

        // 2 x 4: C(4, 2) = 6 subsets in lexicographic order.
        let m2 = PolynomialMatrix::zero(&f, 2, 4);
        let subsets: Vec<Vec<usize>> = m2
            .full_size_minors()
            .unwrap()
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        assert_eq!(
            subsets,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn minor_matches_scalar_determinant_when_constant() {
        use crate::matrix::FieldMatrix;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = gf(13, 1);
        for _ in 0..30 {
            let vals: Vec<u64> = (0..9).map(|_| rng.gen_range(0..13)).collect();
            let mut pm = PolynomialMatrix::zero(&f, 3, 3);
            let mut sm = FieldMatrix::zero(&f, 3, 3);
            for r in 0..3 {
                for c in 0..3 {
                    let el = f.from_value(vals[r * 3 + c]).unwrap();
                    pm.set(r, c, FieldPoly::constant(&f, el));
                    sm.set(r, c, el);
                }
            }
            let det_poly = pm.minor(&[0, 1, 2]).unwrap();
            let det_scalar = sm.det().unwrap();
            if det_scalar.is_zero() {
                assert!(det_poly.is_zero());
            } else {
                assert_eq!(det_poly, FieldPoly::constant(&f, det_scalar));
            }
        }
    }
}
