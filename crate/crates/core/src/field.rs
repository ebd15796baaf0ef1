//! The extension field GF(p^m) on the polynomial basis {1, x, ..., x^(m-1)}.
//!
//! Elements are fixed-size digit arrays, so they are `Copy` and cheap to pass
//! around. The integer encoding of an element is its digit string read in base
//! p, little endian: digit i is the coefficient of x^i.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly;
use crate::prime::{factorize, PrimeField};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 16;

/// Largest field order that exhaustive routines will enumerate.
pub const MAX_ENUMERATION: u64 = 1 << 22;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    digits: [u16; MAX_DEGREE],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement {
        digits: [0; MAX_DEGREE],
    };

    #[inline]
    pub fn digit(&self, i: usize) -> u32 {
        self.digits[i] as u32
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn digits(&self) -> &[u16; MAX_DEGREE] {
        &self.digits
    }
}

// Ordering by integer encoding: the most significant digit sits at the highest index.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits.iter().rev().cmp(other.digits.iter().rev())
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.digits.iter().rposition(|&d| d != 0).unwrap_or(0);
        write!(f, "FieldElement{:?}", &self.digits[..=top])
    }
}

#[derive(Clone)]
struct Inner {
    fp: PrimeField,
    m: usize,
    q: u64,
    /// Monic modulus, m+1 coefficients, lowest degree first.
    modulus: Vec<u32>,
    /// `reduction[k]` holds the digits of x^(m+k) mod the modulus.
    reduction: Vec<[u32; MAX_DEGREE]>,
    /// `frob[i][j]` = (x^j)^(p^i).
    frob: Vec<Vec<FieldElement>>,
    /// `trace_basis[j]` = Tr(x^j).
    trace_basis: Vec<u32>,
    generator: OnceLock<FieldElement>,
}

/// GF(p^m) with a verified irreducible modulus. Cloning is cheap and the
/// context is immutable, so it can be shared freely between threads.
#[derive(Clone)]
pub struct ExtField {
    inner: Arc<Inner>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.fp == other.inner.fp && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField")
            .field("p", &self.p())
            .field("m", &self.m())
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl ExtField {
    /// Build GF(p^m). With no modulus, the monic irreducible polynomial whose
    /// lower coefficients have the smallest base-p encoding is used.
    pub fn new(p: u64, m: usize, modulus: Option<&[u32]>) -> Result<Self> {
        let fp = PrimeField::new(p)?;
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(m));
        }
        let q = checked_order(p, m).ok_or(Error::FieldTooLarge { p, m })?;
        let modulus = match modulus {
            Some(c) => {
                validate_modulus(&fp, m, c)?;
                c.to_vec()
            }
            None => smallest_irreducible(&fp, m),
        };
        Ok(Self::from_parts(fp, m, q, modulus))
    }

    /// Same as [`ExtField::new`] with the modulus given as text "c0,c1,...,cm".
    pub fn with_modulus_text(p: u64, m: usize, modulus: Option<&str>) -> Result<Self> {
        match modulus {
            Some(s) => {
                let coeffs = parse_modulus(s)?;
                Self::new(p, m, Some(&coeffs))
            }
            None => Self::new(p, m, None),
        }
    }

    fn from_parts(fp: PrimeField, m: usize, q: u64, modulus: Vec<u32>) -> Self {
        let mut inner = Inner {
            fp,
            m,
            q,
            modulus,
            reduction: Vec::new(),
            frob: Vec::new(),
            trace_basis: Vec::new(),
            generator: OnceLock::new(),
        };

        // x^m = -(c_0 + ... + c_{m-1} x^{m-1}); later powers by shifting.
        let mut cur = [0u32; MAX_DEGREE];
        for j in 0..m {
            cur[j] = fp.neg(inner.modulus[j]);
        }
        for _ in 0..m.saturating_sub(1) {
            inner.reduction.push(cur);
            let top = cur[m - 1];
            let mut next = [0u32; MAX_DEGREE];
            for j in (1..m).rev() {
                next[j] = cur[j - 1];
            }
            for j in 0..m {
                next[j] = fp.add(next[j], fp.mul(top, fp.neg(inner.modulus[j])));
            }
            cur = next;
        }

        let mut field = ExtField {
            inner: Arc::new(inner),
        };

        let x = if m == 1 {
            field.from_prime(fp.neg(field.inner.modulus[0]))
        } else {
            field.basis(1)
        };
        let mut frob = Vec::with_capacity(m);
        let mut y = x;
        for _ in 0..m {
            let mut row = Vec::with_capacity(m);
            let mut pw = field.one();
            for _ in 0..m {
                row.push(pw);
                pw = field.mul(&pw, &y);
            }
            frob.push(row);
            y = field.pow(&y, p_u64(&fp));
        }
        let trace_basis = (0..m)
            .map(|j| {
                let mut acc = FieldElement::ZERO;
                for row in frob.iter() {
                    acc = field.add(&acc, &row[j]);
                }
                debug_assert!((1..m).all(|k| acc.digit(k) == 0));
                acc.digit(0)
            })
            .collect();
        let inner = Arc::get_mut(&mut field.inner).expect("unique during construction");
        inner.frob = frob;
        inner.trace_basis = trace_basis;
        field
    }

    /// Returns a context whose generator is fixed to `g` (which must be primitive).
    pub fn with_generator(&self, g: FieldElement) -> Result<Self> {
        if !self.is_primitive(&g) {
            return Err(Error::Config(format!(
                "element {} is not primitive",
                self.encode(&g)
            )));
        }
        let mut inner = (*self.inner).clone();
        inner.generator = OnceLock::new();
        let _ = inner.generator.set(g);
        Ok(ExtField {
            inner: Arc::new(inner),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.inner.fp.p() as u64
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.inner.m
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.inner.q
    }

    #[inline]
    pub fn prime_field(&self) -> &PrimeField {
        &self.inner.fp
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn modulus_text(&self) -> String {
        self.inner
            .modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    /// The basis element x^j.
    pub fn basis(&self, j: usize) -> FieldElement {
        let mut e = FieldElement::ZERO;
        e.digits[j] = 1;
        e
    }

    pub fn from_prime(&self, c: u32) -> FieldElement {
        let mut e = FieldElement::ZERO;
        e.digits[0] = (c % self.inner.fp.p()) as u16;
        e
    }

    /// The GF(p) value of an element of the prime subfield.
    pub fn to_prime(&self, x: &FieldElement) -> Option<u32> {
        if (1..self.m()).all(|i| x.digits[i] == 0) {
            Some(x.digit(0))
        } else {
            None
        }
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() != self.m() {
            return Err(Error::CoefficientCount {
                expected: self.m(),
                got: digits.len(),
            });
        }
        let mut e = FieldElement::ZERO;
        for (i, &d) in digits.iter().enumerate() {
            if d >= self.inner.fp.p() {
                return Err(Error::Parse(format!("digit {d} is not reduced mod p")));
            }
            e.digits[i] = d as u16;
        }
        Ok(e)
    }

    pub fn to_digits(&self, x: &FieldElement) -> Vec<u32> {
        (0..self.m()).map(|i| x.digit(i)).collect()
    }

    pub fn encode(&self, x: &FieldElement) -> u64 {
        let p = self.p();
        (0..self.m())
            .rev()
            .fold(0u64, |acc, i| acc * p + x.digits[i] as u64)
    }

    pub fn decode(&self, mut v: u64) -> Result<FieldElement> {
        if v >= self.q() {
            return Err(Error::Parse(format!(
                "element encoding {v} is not below q = {}",
                self.q()
            )));
        }
        let p = self.p();
        let mut e = FieldElement::ZERO;
        for i in 0..self.m() {
            e.digits[i] = (v % p) as u16;
            v /= p;
        }
        Ok(e)
    }

    /// Decode without the range check; the caller guarantees `v < q`.
    #[inline]
    pub fn decode_unchecked(&self, mut v: u64) -> FieldElement {
        let p = self.p();
        let mut e = FieldElement::ZERO;
        for i in 0..self.m() {
            e.digits[i] = (v % p) as u16;
            v /= p;
        }
        e
    }

    pub fn check_enumerable(&self) -> Result<()> {
        if self.q() > MAX_ENUMERATION {
            Err(Error::EnumerationTooLarge(self.q()))
        } else {
            Ok(())
        }
    }

    /// All q elements in ascending encoding order.
    pub fn elements(&self) -> Result<Vec<FieldElement>> {
        self.check_enumerable()?;
        Ok((0..self.q()).map(|v| self.decode_unchecked(v)).collect())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.decode_unchecked(rng.gen_range(0..self.q()))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.decode_unchecked(rng.gen_range(1..self.q()))
    }

    #[inline]
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let fp = &self.inner.fp;
        let mut e = FieldElement::ZERO;
        for i in 0..self.m() {
            e.digits[i] = fp.add(a.digit(i), b.digit(i)) as u16;
        }
        e
    }

    #[inline]
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let fp = &self.inner.fp;
        let mut e = FieldElement::ZERO;
        for i in 0..self.m() {
            e.digits[i] = fp.sub(a.digit(i), b.digit(i)) as u16;
        }
        e
    }

    #[inline]
    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let fp = &self.inner.fp;
        let mut e = FieldElement::ZERO;
        for i in 0..self.m() {
            e.digits[i] = fp.neg(a.digit(i)) as u16;
        }
        e
    }

    #[inline]
    pub fn scale(&self, c: u32, a: &FieldElement) -> FieldElement {
        let fp = &self.inner.fp;
        let mut e = FieldElement::ZERO;
        for i in 0..self.m() {
            e.digits[i] = fp.mul(c, a.digit(i)) as u16;
        }
        e
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.m();
        let p = self.p();
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            let ai = a.digits[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += ai * b.digits[j] as u64;
            }
            // keep the accumulator bounded for large p
            if p > 4096 {
                for v in prod[i..i + m].iter_mut() {
                    *v %= p;
                }
            }
        }
        let mut acc = [0u64; MAX_DEGREE];
        acc[..m].copy_from_slice(&prod[..m]);
        for k in m..(2 * m).saturating_sub(1) {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            let red = &self.inner.reduction[k - m];
            for j in 0..m {
                acc[j] = (acc[j] + c * red[j] as u64) % p;
            }
        }
        let mut e = FieldElement::ZERO;
        for j in 0..m {
            e.digits[j] = (acc[j] % p) as u16;
        }
        e
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// x^(p^i), for any i (reduced mod m).
    pub fn frobenius(&self, a: &FieldElement, i: usize) -> FieldElement {
        let m = self.m();
        let p = self.p();
        let table = &self.inner.frob[i % m];
        let mut acc = [0u64; MAX_DEGREE];
        for j in 0..m {
            let aj = a.digits[j] as u64;
            if aj == 0 {
                continue;
            }
            let img = &table[j];
            for k in 0..m {
                acc[k] = (acc[k] + aj * img.digits[k] as u64) % p;
            }
        }
        let mut e = FieldElement::ZERO;
        for k in 0..m {
            e.digits[k] = acc[k] as u16;
        }
        e
    }

    /// Absolute trace to GF(p).
    #[inline]
    pub fn trace(&self, a: &FieldElement) -> u32 {
        let p = self.p();
        let mut acc = 0u64;
        for (j, &t) in self.inner.trace_basis.iter().enumerate() {
            acc += a.digits[j] as u64 * t as u64;
        }
        (acc % p) as u32
    }

    /// Tr(x^j) for each basis element.
    pub fn trace_basis(&self) -> &[u32] {
        &self.inner.trace_basis
    }

    /// Quadratic character of GF(q), zero at zero.
    pub fn eta(&self, a: &FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.q() - 1) / 2) == self.one() {
            1
        } else {
            -1
        }
    }

    pub fn eta_bar(&self, t: u32) -> i8 {
        self.inner.fp.eta_bar(t)
    }

    pub fn multiplicative_order(&self, a: &FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut order = self.q() - 1;
        for (l, _) in factorize(self.q() - 1) {
            while order % l == 0 && self.pow(a, order / l) == self.one() {
                order /= l;
            }
        }
        Some(order)
    }

    pub fn is_primitive(&self, a: &FieldElement) -> bool {
        if a.is_zero() {
            return false;
        }
        let n = self.q() - 1;
        factorize(n)
            .iter()
            .all(|&(l, _)| self.pow(a, n / l) != self.one())
    }

    /// The primitive element with the smallest encoding, unless one was fixed
    /// with [`ExtField::with_generator`].
    pub fn generator(&self) -> FieldElement {
        *self.inner.generator.get_or_init(|| {
            (1..self.q())
                .map(|v| self.decode_unchecked(v))
                .find(|g| self.is_primitive(g))
                .expect("every finite field has a primitive element")
        })
    }

    /// Parse a decimal encoding, or `g^k` / `g` relative to [`ExtField::generator`].
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if s == "g" {
            return Ok(self.generator());
        }
        if let Some(k) = s.strip_prefix("g^") {
            let k: u64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
            return Ok(self.pow(&self.generator(), k));
        }
        let v: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad element `{s}`")))?;
        self.decode(v)
    }

    /// Human-readable polynomial form, e.g. `2x^2 + 1`.
    pub fn poly_string(&self, a: &FieldElement) -> String {
        let mut terms = Vec::new();
        for i in (0..self.m()).rev() {
            let d = a.digit(i);
            if d == 0 {
                continue;
            }
            let coeff = if d == 1 && i > 0 {
                String::new()
            } else {
                d.to_string()
            };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn p_u64(fp: &PrimeField) -> u64 {
    fp.p() as u64
}

fn checked_order(p: u64, m: usize) -> Option<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.checked_mul(p)?;
    }
    if q >= 1 << 63 {
        None
    } else {
        Some(q)
    }
}

fn validate_modulus(fp: &PrimeField, m: usize, c: &[u32]) -> Result<()> {
    if c.len() != m + 1 {
        return Err(Error::ModulusLength {
            expected: m + 1,
            got: c.len(),
        });
    }
    if let Some(&bad) = c.iter().find(|&&v| v >= fp.p()) {
        return Err(Error::UnreducedCoefficient(bad as u64));
    }
    if c[m] != 1 {
        return Err(Error::NonMonicModulus);
    }
    if !poly::is_irreducible(fp, c) {
        return Err(Error::ReducibleModulus);
    }
    Ok(())
}

fn smallest_irreducible(fp: &PrimeField, m: usize) -> Vec<u32> {
    let p = fp.p() as u64;
    let mut enc: u64 = 0;
    loop {
        let mut f = Vec::with_capacity(m + 1);
        let mut e = enc;
        for _ in 0..m {
            f.push((e % p) as u32);
            e /= p;
        }
        f.push(1);
        if poly::is_irreducible(fp, &f) {
            return f;
        }
        enc += 1;
    }
}

/// Parse "c0,c1,...,cm" into coefficients.
pub fn parse_modulus(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad modulus coefficient `{}`", t.trim())))
        })
        .collect()
}
