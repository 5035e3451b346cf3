//! Arithmetic in GF(p^N) with a distinguished primitive element.
//!
//! Every field is built deterministically: for N >= 2 the modulus is the
//! lexicographically smallest monic irreducible polynomial (by coefficient
//! tuple, constant term first) whose root `x` generates the multiplicative
//! group, and the primitive element `a` is that root; for N = 1, `a` is the
//! smallest primitive root mod p.  Building the same field twice therefore
//! yields the same labels, which keeps every matrix dump and report
//! reproducible.
//!
//! Nonzero elements are stored as discrete logarithms with respect to `a`
//! (zero carries a flag), so multiplication, inversion and powering are plain
//! exponent arithmetic at any field size.  Addition needs to move between the
//! log and polynomial-coefficient representations: for fields up to a
//! configurable cap (default 2^20) eager exp/log tables make that a lookup,
//! and beyond the cap a lazily built baby-step/giant-step table covers sizes
//! up to 2^42.  Larger fields still support everything except addition, which
//! is all the power-based constructions need.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{is_prime, mul_mod, pow_mod, prime_divisors};

/// Default size cap below which full exp/log tables are built eagerly.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 20;

/// Largest group order served by the lazy baby-step/giant-step fallback.
const BSGS_MAX_ORDER: u64 = 1 << 42;

/// Hard ceiling on the field size.
const MAX_Q: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidExtension,
    #[error("field size {p}^{n} exceeds the 2^63 budget")]
    TooLarge { p: u64, n: u32 },
    #[error("value {value} is not an element encoding of a field with {q} elements")]
    InvalidValue { value: u64, q: u64 },
    #[error(
        "discrete logarithms in a field with {q} elements exceed both the exp/log table cap \
         and the baby-step table range; addition is unavailable at this size"
    )]
    NoDiscreteLog { q: u64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element belongs to a different field")]
    WrongField,
}

/// An element of a specific GF(p^N): either zero or `a^log`.
///
/// Elements are tagged with `(p, N)` so that accidentally mixing fields is
/// caught immediately (the arithmetic methods on [`FiniteField`] panic on a
/// tag mismatch — that is a programming error, not a data error).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u64,
    ext: u32,
    log: Option<u64>,
}

impl FieldElement {
    /// Discrete log with respect to the field's primitive element, or `None`
    /// for zero.
    pub fn log(&self) -> Option<u64> {
        self.log
    }

    pub fn is_zero(&self) -> bool {
        self.log.is_none()
    }
}

struct Tables {
    /// `exp[e]` = polynomial-basis encoding of `a^e`, length `q - 1`.
    exp: Vec<u64>,
    /// `log[v]` = e with `exp[e] = v`, length `q` (index 0 unused).
    log: Vec<u64>,
}

struct BsgsTable {
    /// `(encoding of a^j, j)` for `j < m`, sorted by encoding.
    baby: Vec<(u64, u64)>,
    /// Encoding of `a^{-m}`.
    giant: u64,
    m: u64,
}

struct FieldData {
    p: u64,
    ext: u32,
    q: u64,
    /// Monic modulus polynomial, coefficients constant-first, length ext + 1.
    modulus: Vec<u64>,
    /// Polynomial-basis encoding of the primitive element.
    alpha_value: u64,
    tables: Option<Tables>,
    bsgs: OnceLock<BsgsTable>,
}

/// Cheap-to-clone handle to a finite field GF(p^N).
#[derive(Clone)]
pub struct FiniteField {
    data: Arc<FieldData>,
}

static FIELDS_BUILT: AtomicU64 = AtomicU64::new(0);

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{})", self.data.p, self.data.ext)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.data.p == other.data.p && self.data.ext == other.data.ext
    }
}
impl Eq for FiniteField {}

impl FiniteField {
    /// Builds GF(p^ext) with the default table cap.
    pub fn new(p: u64, ext: u32) -> Result<Self, FieldError> {
        Self::with_table_cap(p, ext, DEFAULT_TABLE_CAP)
    }

    /// Builds GF(p^ext), with eager exp/log tables only when `q <= table_cap`.
    pub fn with_table_cap(p: u64, ext: u32, table_cap: u64) -> Result<Self, FieldError> {
        if ext < 1 {
            return Err(FieldError::InvalidExtension);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let mut q: u64 = 1;
        for _ in 0..ext {
            q = q
                .checked_mul(p)
                .filter(|&v| v <= MAX_Q)
                .ok_or(FieldError::TooLarge { p, n: ext })?;
        }

        let (modulus, alpha_value) = if ext == 1 {
            let alpha = smallest_primitive_root(p);
            (vec![(p - alpha) % p, 1], alpha)
        } else {
            primitive_modulus(p, ext, q)
        };

        let mut data = FieldData {
            p,
            ext,
            q,
            modulus,
            alpha_value,
            tables: None,
            bsgs: OnceLock::new(),
        };
        if q <= table_cap {
            data.tables = Some(build_tables(&data));
        }
        FIELDS_BUILT.fetch_add(1, Ordering::Relaxed);
        Ok(FiniteField {
            data: Arc::new(data),
        })
    }

    pub fn p(&self) -> u64 {
        self.data.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.data.ext
    }

    pub fn order(&self) -> u64 {
        self.data.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn unit_order(&self) -> u64 {
        self.data.q - 1
    }

    /// Modulus polynomial coefficients, constant term first (length N + 1).
    pub fn modulus(&self) -> &[u64] {
        &self.data.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.data.tables.is_some()
    }

    /// Whether addition (and hence elimination-based linear algebra) is
    /// available: it needs discrete logs, via tables or the BSGS fallback.
    pub fn supports_addition(&self) -> bool {
        self.data.tables.is_some() || self.unit_order() <= BSGS_MAX_ORDER
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            p: self.data.p,
            ext: self.data.ext,
            log: None,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_log(0)
    }

    /// The distinguished primitive element.
    pub fn alpha(&self) -> FieldElement {
        self.from_log(1)
    }

    /// `a^e` for an exponent already reduced or not; reduces mod `q - 1`.
    pub fn from_log(&self, e: u64) -> FieldElement {
        let m = self.unit_order();
        let e = if m == 0 { 0 } else { e % m.max(1) };
        FieldElement {
            p: self.data.p,
            ext: self.data.ext,
            log: Some(if m == 0 { 0 } else { e }),
        }
    }

    /// `a^e` for a signed (possibly huge) exponent.
    pub fn alpha_pow(&self, e: i128) -> FieldElement {
        let m = self.unit_order().max(1) as i128;
        let r = ((e % m) + m) % m;
        self.from_log(r as u64)
    }

    /// `a^e` for an arbitrary-precision exponent.
    pub fn alpha_pow_big(&self, e: &BigInt) -> FieldElement {
        let m = BigInt::from(self.unit_order().max(1));
        let mut r = e % &m;
        if r.is_negative() {
            r += &m;
        }
        self.from_log(r.to_u64().expect("reduced exponent fits in u64"))
    }

    /// `a^(base^i * l)` with the exponent reduced mod `q - 1` by modular
    /// exponentiation, never materialising `base^i * l` itself.
    pub fn alpha_pow_shifted(&self, base: u64, i: u64, l: u64) -> FieldElement {
        let m = self.unit_order().max(1);
        let e = mul_mod(pow_mod(base % m.max(1), i, m), l % m, m);
        self.from_log(e)
    }

    /// Decodes a polynomial-basis encoding (0 = zero, otherwise the base-p
    /// digit string of the coefficient vector).
    pub fn from_value(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value >= self.data.q {
            return Err(FieldError::InvalidValue {
                value,
                q: self.data.q,
            });
        }
        if value == 0 {
            return Ok(self.zero());
        }
        Ok(self.from_log(self.log_of_value(value)?))
    }

    /// Polynomial-basis encoding of an element (0 for zero).
    pub fn value(&self, el: FieldElement) -> u64 {
        self.check(el);
        match el.log {
            None => 0,
            Some(e) => self.exp_value(e),
        }
    }

    fn check(&self, el: FieldElement) {
        assert!(
            el.p == self.data.p && el.ext == self.data.ext,
            "element of GF({}^{}) used with GF({}^{})",
            el.p,
            el.ext,
            self.data.p,
            self.data.ext
        );
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        match (a.log, b.log) {
            (Some(x), Some(y)) => {
                let m = self.unit_order().max(1);
                self.from_log(((x as u128 + y as u128) % m as u128) as u64)
            }
            _ => self.zero(),
        }
    }

    pub fn inv(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        let e = a.log.expect("inverse of zero");
        let m = self.unit_order().max(1);
        self.from_log((m - e % m) % m)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        match a.log {
            None => a,
            Some(e) => {
                if self.data.p == 2 {
                    a
                } else {
                    // -1 = a^((q-1)/2) in odd characteristic.
                    let m = self.unit_order();
                    self.from_log((e + m / 2) % m)
                }
            }
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        match (a.log, b.log) {
            (None, _) => b,
            (_, None) => a,
            (Some(x), Some(y)) => {
                let v = self.value_add(self.exp_value(x), self.exp_value(y));
                if v == 0 {
                    self.zero()
                } else {
                    let e = self
                        .log_of_value(v)
                        .unwrap_or_else(|err| panic!("field addition: {err}"));
                    self.from_log(e)
                }
            }
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// `a^e` for a signed exponent; `0^0 = 1`, `0^e` with `e > 0` is zero and
    /// `e < 0` panics.
    pub fn pow(&self, a: FieldElement, e: i64) -> FieldElement {
        self.check(a);
        match a.log {
            None => {
                if e == 0 {
                    self.one()
                } else if e > 0 {
                    self.zero()
                } else {
                    panic!("negative power of zero")
                }
            }
            Some(x) => self.alpha_pow(x as i128 * e as i128),
        }
    }

    /// Renders an element as `0` or `a^e`.
    pub fn element_string(&self, el: FieldElement) -> String {
        self.check(el);
        match el.log {
            None => "0".to_string(),
            Some(e) => format!("a^{e}"),
        }
    }

    /// Multiplicative order of a nonzero element, by exponent arithmetic.
    pub fn element_order(&self, el: FieldElement) -> u64 {
        self.check(el);
        let e = el.log.expect("order of zero");
        let m = self.unit_order();
        if m == 0 {
            return 1;
        }
        m / crate::arith::gcd(e, m)
    }

    // ---- representation plumbing ----

    fn exp_value(&self, e: u64) -> u64 {
        match &self.data.tables {
            Some(t) => t.exp[e as usize],
            None => self.value_pow(self.data.alpha_value, e),
        }
    }

    fn log_of_value(&self, v: u64) -> Result<u64, FieldError> {
        debug_assert!(v > 0 && v < self.data.q);
        if let Some(t) = &self.data.tables {
            return Ok(t.log[v as usize]);
        }
        let ord = self.unit_order();
        if ord > BSGS_MAX_ORDER {
            return Err(FieldError::NoDiscreteLog { q: self.data.q });
        }
        let table = self.data.bsgs.get_or_init(|| self.build_bsgs());
        let mut cur = v;
        for i in 0..=(ord / table.m) {
            if let Ok(idx) = table.baby.binary_search_by_key(&cur, |&(val, _)| val) {
                let j = table.baby[idx].1;
                return Ok((i * table.m + j) % ord.max(1));
            }
            cur = self.value_mul(cur, table.giant);
        }
        unreachable!("every nonzero encoding has a discrete log")
    }

    fn build_bsgs(&self) -> BsgsTable {
        let ord = self.unit_order().max(1);
        let m = (ord as f64).sqrt().ceil() as u64;
        let m = m.max(1);
        let mut baby = Vec::with_capacity(m as usize);
        let mut v = 1u64;
        for j in 0..m {
            baby.push((v, j));
            v = self.value_mul(v, self.data.alpha_value);
        }
        baby.sort_unstable_by_key(|&(val, _)| val);
        baby.dedup_by_key(|&mut (val, _)| val);
        let giant = self.value_pow(self.data.alpha_value, ord - m % ord.max(1));
        BsgsTable { baby, giant, m }
    }

    /// Addition of two polynomial-basis encodings (digit-wise mod p).
    fn value_add(&self, a: u64, b: u64) -> u64 {
        let p = self.data.p;
        if self.data.ext == 1 {
            return (a + b) % p;
        }
        let mut a = a;
        let mut b = b;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    /// Product of two polynomial-basis encodings, reduced by the modulus.
    fn value_mul(&self, a: u64, b: u64) -> u64 {
        let p = self.data.p;
        if self.data.ext == 1 {
            return mul_mod(a, b, p);
        }
        let n = self.data.ext as usize;
        let da = digits(a, p, n);
        let db = digits(b, p, n);
        let mut conv = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                conv[i + j] = (conv[i + j] + x * y) % p;
            }
        }
        self.reduce_in_place(&mut conv);
        encode(&conv[..n], p)
    }

    fn value_pow(&self, v: u64, mut e: u64) -> u64 {
        let mut base = v;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.value_mul(acc, base);
            }
            base = self.value_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduces a coefficient vector (length >= ext) by the monic modulus.
    fn reduce_in_place(&self, coeffs: &mut [u64]) {
        let p = self.data.p;
        let n = self.data.ext as usize;
        for i in (n..coeffs.len()).rev() {
            let c = coeffs[i];
            if c == 0 {
                continue;
            }
            coeffs[i] = 0;
            for j in 0..n {
                let sub = (self.data.modulus[j] * c) % p;
                coeffs[i - n + j] = (coeffs[i - n + j] + p - sub) % p;
            }
        }
    }
}

fn digits(mut v: u64, p: u64, n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    debug_assert_eq!(v, 0);
    out
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &c in coeffs.iter().rev() {
        out = out * p + c;
    }
    out
}

fn smallest_primitive_root(p: u64) -> u64 {
    let divisors = prime_divisors(p - 1);
    'cand: for a in 1..p {
        for &f in &divisors {
            if pow_mod(a, (p - 1) / f, p) == 1 {
                continue 'cand;
            }
        }
        return a;
    }
    unreachable!("every prime has a primitive root")
}

/// Finds the lexicographically smallest monic irreducible polynomial of
/// degree `ext` over GF(p) whose root `x` is primitive, and returns it with
/// the encoding of `x`.
fn primitive_modulus(p: u64, ext: u32, q: u64) -> (Vec<u64>, u64) {
    let unit_divisors = prime_divisors(q - 1);
    let n = ext as usize;
    let mut low = vec![0u64; n];
    loop {
        let mut modulus = low.clone();
        modulus.push(1);
        if poly_is_irreducible(&modulus, p, ext) && x_is_primitive(&modulus, p, q, &unit_divisors) {
            return (modulus, p);
        }
        // Increment the coefficient tuple (constant term fastest).
        let mut i = 0;
        loop {
            assert!(
                i < n,
                "no primitive polynomial of degree {ext} over GF({p})"
            );
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
        }
    }
}

// ---- dense polynomial arithmetic over GF(p), used only during field setup ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut conv = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] = (conv[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut conv, modulus, p);
    conv
}

/// Remainder of `a` by the monic `modulus`, in place.
fn poly_rem(a: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let n = modulus.len() - 1;
    while a.len() > n {
        let c = *a.last().unwrap();
        let deg = a.len() - 1;
        a.pop();
        if c == 0 {
            continue;
        }
        let start = deg - n;
        for (slot, &m_j) in a[start..start + n].iter_mut().zip(modulus) {
            let sub = (m_j * c) % p;
            *slot = (*slot + p - sub) % p;
        }
    }
    poly_trim(a);
}

fn poly_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // Make b monic, then reduce a by it.
        let lead = *b.last().unwrap();
        let inv = pow_mod(lead, p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&c| (c * inv) % p).collect();
        poly_rem(&mut a, &monic, p);
        std::mem::swap(&mut a, &mut b);
        poly_trim(&mut b);
    }
    a
}

/// Rabin's irreducibility test for a monic polynomial of degree `ext`.
fn poly_is_irreducible(modulus: &[u64], p: u64, ext: u32) -> bool {
    let x = vec![0u64, 1];
    // x^(p^ext) == x (mod modulus)
    let mut frob = x.clone();
    for _ in 0..ext {
        frob = poly_powmod(&frob, p, modulus, p);
    }
    let mut target = x.clone();
    poly_rem(&mut target, modulus, p);
    if frob != target {
        return false;
    }
    for r in prime_divisors(ext as u64) {
        let mut h = x.clone();
        for _ in 0..(ext / r as u32) {
            h = poly_powmod(&h, p, modulus, p);
        }
        // gcd(x^(p^(ext/r)) - x, modulus) must be constant.
        let mut diff = h;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(&diff, modulus, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn x_is_primitive(modulus: &[u64], p: u64, q: u64, unit_divisors: &[u64]) -> bool {
    // x must not vanish (constant term nonzero) so it lies in the unit group.
    if modulus[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    for &f in unit_divisors {
        if poly_powmod(&x, (q - 1) / f, modulus, p) == vec![1] {
            return false;
        }
    }
    true
}

fn build_tables(data: &FieldData) -> Tables {
    let q = data.q as usize;
    let ord = (data.q - 1).max(1) as usize;
    let mut exp = vec![0u64; ord];
    let mut log = vec![0u64; q];
    let p = data.p;
    let n = data.ext as usize;
    let mut cur = vec![0u64; n + 1];
    cur[0] = 1;
    for (e, slot) in exp.iter_mut().enumerate() {
        let v = encode(&cur[..n], p);
        *slot = v;
        log[v as usize] = e as u64;
        // Multiply by alpha. For extensions alpha = x, a coefficient shift;
        // for prime fields a scalar multiplication.
        if n == 1 {
            cur[0] = mul_mod(cur[0], data.alpha_value, p);
        } else {
            for i in (0..n).rev() {
                cur[i + 1] = cur[i];
            }
            cur[0] = 0;
            let c = cur[n];
            if c != 0 {
                cur[n] = 0;
                for (slot, &m_j) in cur[..n].iter_mut().zip(&data.modulus) {
                    let sub = (m_j * c) % p;
                    *slot = (*slot + p - sub) % p;
                }
            }
        }
    }
    Tables { exp, log }
}

/// Reduces an arbitrary-precision *unsigned* integer mod `m`.
pub fn big_mod_u64(e: &BigInt, m: u64) -> u64 {
    let m_big = BigInt::from(m.max(1));
    let mut r = e % &m_big;
    if r.is_negative() {
        r += &m_big;
    }
    if r.is_zero() {
        0
    } else {
        r.to_u64().unwrap()
    }
}
