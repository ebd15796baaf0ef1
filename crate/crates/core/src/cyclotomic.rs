//! Exact arithmetic in the cyclotomic field Q(zeta_p).
//!
//! A number is stored as p-1 rational coordinates on {1, z, ..., z^(p-2)},
//! where z = zeta_p and z^(p-1) = -(1 + z + ... + z^(p-2)). The square root of
//! p* = (-1)^((p-1)/2) p is fixed to be the quadratic Gauss sum of GF(p), so odd
//! powers of sqrt(p*) are unambiguous.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::prime::{is_prime, PrimeField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u32,
    coords: Vec<BigRational>,
}

impl CycNum {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 3 && p % 2 == 1, "cyclotomic modulus must be an odd prime");
        CycNum {
            p,
            coords: vec![BigRational::zero(); p as usize - 1],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_integer(p, 1)
    }

    pub fn from_integer(p: u32, v: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(p: u32, v: BigInt) -> Self {
        Self::from_rational(p, BigRational::from_integer(v))
    }

    pub fn from_rational(p: u32, v: BigRational) -> Self {
        let mut c = Self::zero(p);
        c.coords[0] = v;
        c
    }

    /// z^k for any integer k.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut ext = vec![BigRational::zero(); p as usize];
        ext[k.rem_euclid(p as i64) as usize] = BigRational::one();
        Self::from_expanded(p, ext)
    }

    /// sum_k counts[k] z^k, for a histogram of exponents in GF(p).
    pub fn from_phase_counts(p: u32, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), p as usize, "one count per residue");
        let ext = counts
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Self::from_expanded(p, ext)
    }

    /// Build from a length-p coefficient vector on {1, z, ..., z^(p-1)}.
    fn from_expanded(p: u32, mut ext: Vec<BigRational>) -> Self {
        debug_assert_eq!(ext.len(), p as usize);
        let top = ext.pop().expect("p > 0");
        if !top.is_zero() {
            for c in ext.iter_mut() {
                *c -= &top;
            }
        }
        CycNum { p, coords: ext }
    }

    fn expanded(&self) -> Vec<BigRational> {
        let mut v = self.coords.clone();
        v.push(BigRational::zero());
        v
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycNum {
            p: self.p,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Galois automorphism z -> z^a.
    pub fn sigma(&self, a: i64) -> Result<Self> {
        let p = self.p as i64;
        let a = a.rem_euclid(p);
        if a == 0 {
            return Err(Error::NonUnit(a));
        }
        let ext = self.expanded();
        let mut out = vec![BigRational::zero(); self.p as usize];
        for (k, c) in ext.into_iter().enumerate() {
            if !c.is_zero() {
                out[(a * k as i64 % p) as usize] += c;
            }
        }
        Ok(Self::from_expanded(self.p, out))
    }

    /// Complex conjugation, i.e. sigma_{-1}.
    pub fn conj(&self) -> Self {
        self.sigma(-1).expect("-1 is a unit")
    }

    /// sum over y in GF(p)* of sigma_y(self).
    pub fn galois_trace(&self) -> Self {
        (1..self.p as i64).fold(Self::zero(self.p), |acc, y| {
            &acc + &self.sigma(y).expect("unit")
        })
    }

    /// Numeric value under z -> exp(2 pi i / p). Diagnostic only.
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.p as f64;
        self.coords
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                let t = 2.0 * std::f64::consts::PI * k as f64 / p;
                (re + v * t.cos(), im + v * t.sin())
            })
    }

    /// Parse a sum of terms `c`, `c*z`, `c*z^k` (c an integer or `num/den`).
    pub fn parse_with_p(p: u32, s: &str) -> Result<Self> {
        if !is_prime(p as u64) || p == 2 {
            return Err(Error::Parse(format!("{p} is not an odd prime")));
        }
        let mut ext = vec![BigRational::zero(); p as usize];
        for term in s.split(" + ") {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse("empty term".into()));
            }
            let (coef, k) = match term.split_once('*') {
                None => (term, 0usize),
                Some((c, zpart)) => {
                    let k = match zpart.trim() {
                        "z" => 1,
                        z => z
                            .strip_prefix("z^")
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| Error::Parse(format!("bad power `{z}`")))?,
                    };
                    (c, k)
                }
            };
            let coef = BigRational::from_str(coef.trim())
                .map_err(|_| Error::Parse(format!("bad coefficient `{coef}`")))?;
            ext[k % p as usize] += coef;
        }
        Ok(Self::from_expanded(p, ext))
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum<{}>({})", self.p, self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Parses the full-coordinate text form, inferring p from the number of terms.
impl FromStr for CycNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms = s.split(" + ").count() as u32;
        Self::parse_with_p(terms + 1, s)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.p, rhs.p, "mixed cyclotomic fields");
        CycNum {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.p, rhs.p, "mixed cyclotomic fields");
        CycNum {
            p: self.p,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.p, rhs.p, "mixed cyclotomic fields");
        let p = self.p as usize;
        let mut ext = vec![BigRational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    ext[(i + j) % p] += a * b;
                }
            }
        }
        CycNum::from_expanded(self.p, ext)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            p: self.p,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// p* = (-1)^((p-1)/2) p.
pub fn pstar(p: u32) -> BigInt {
    if (p - 1) / 2 % 2 == 0 {
        BigInt::from(p)
    } else {
        -BigInt::from(p)
    }
}

/// (p*)^k for any integer k.
pub fn pstar_pow(p: u32, k: i64) -> BigRational {
    let base = BigRational::from_integer(pstar(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), k.unsigned_abs() as usize)
    }
}

/// sum over c in GF(p)* of eta_bar(c) z^c; its square is p*.
pub fn gauss_sum_prime(p: u32) -> CycNum {
    let fp = PrimeField::new(p as u64).expect("odd prime");
    let mut ext = vec![BigRational::zero(); p as usize];
    for c in fp.units() {
        ext[c as usize] = BigRational::from_integer(BigInt::from(fp.eta_bar(c)));
    }
    CycNum::from_expanded(p, ext)
}

/// (p*)^(e/2), with sqrt(p*) taken to be [`gauss_sum_prime`].
pub fn pstar_half_power(p: u32, e: i64) -> CycNum {
    if e % 2 == 0 {
        CycNum::from_rational(p, pstar_pow(p, e / 2))
    } else {
        gauss_sum_prime(p).scale(&pstar_pow(p, (e - 1).div_euclid(2)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSumReport {
    pub p: u32,
    pub r: i64,
    pub z: Option<u32>,
    /// Explicit sum of the Galois conjugates.
    pub lhs: CycNum,
    /// The two-case closed form.
    pub rhs: CycNum,
    pub equal: bool,
}

/// Checks sum_{y in GF(p)*} sigma_y((p*)^(-r/2) z^t) against its closed form.
/// `None` (or t = 0) is the variant without the root-of-unity factor.
pub fn verify_sigma_sum_lemma(p: u32, r: i64, z: Option<u32>) -> SigmaSumReport {
    let fp = PrimeField::new(p as u64).expect("odd prime");
    let z = z.map(|t| t % p).filter(|&t| t != 0);
    let mut inner = pstar_half_power(p, -r);
    if let Some(t) = z {
        inner = &inner * &CycNum::zeta_pow(p, t as i64);
    }
    let lhs = inner.galois_trace();
    let odd = r.rem_euclid(2) == 1;
    let rhs = match (z, odd) {
        (None, true) => CycNum::zero(p),
        (None, false) => pstar_half_power(p, -r).scale_int(p as i64 - 1),
        (Some(t), true) => pstar_half_power(p, -(r - 1)).scale_int(fp.eta_bar(t) as i64),
        (Some(_), false) => -pstar_half_power(p, -r),
    };
    let equal = lhs == rhs;
    SigmaSumReport {
        p,
        r,
        z,
        lhs,
        rhs,
        equal,
    }
}

/// Histogram of a GF(p)-valued function over all of GF(q).
pub fn phase_histogram<F>(field: &ExtField, phase: F) -> Result<Vec<u64>>
where
    F: Fn(&FieldElement) -> u32 + Sync,
{
    field.check_enumerable()?;
    let p = field.p() as usize;
    let hist = (0..field.q())
        .into_par_iter()
        .fold(
            || vec![0u64; p],
            |mut h, v| {
                let x = field.decode_unchecked(v);
                h[phase(&x) as usize % p] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; p],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}

/// sum over x in GF(q) of z^phase(x), by exhaustive enumeration.
pub fn exp_sum<F>(field: &ExtField, phase: F) -> Result<CycNum>
where
    F: Fn(&FieldElement) -> u32 + Sync,
{
    let hist = phase_histogram(field, phase)?;
    Ok(CycNum::from_phase_counts(field.p() as u32, &hist))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticGaussReport {
    /// sum_c chi(a2 c^2 + a1 c + a0)
    pub lhs: CycNum,
    /// chi(a0 - a1^2/(4 a2)) eta(a2) G(eta, chi_1)
    pub rhs: CycNum,
    /// G(eta, chi_1) by direct summation.
    pub gauss_brute: CycNum,
    /// G(eta, chi_1) = (-1)^(m-1) sqrt(p*)^m.
    pub gauss_closed: CycNum,
    pub equal: bool,
    pub gauss_matches: bool,
}

/// G(eta, chi_1) over GF(q) by summation.
pub fn gauss_sum_field(field: &ExtField) -> Result<CycNum> {
    field.check_enumerable()?;
    let p = field.p() as u32;
    let mut plus = vec![0u64; p as usize];
    let mut minus = vec![0u64; p as usize];
    for v in 1..field.q() {
        let c = field.decode_unchecked(v);
        let t = field.trace(&c) as usize;
        if field.eta(&c) == 1 {
            plus[t] += 1;
        } else {
            minus[t] += 1;
        }
    }
    Ok(&CycNum::from_phase_counts(p, &plus) - &CycNum::from_phase_counts(p, &minus))
}

/// Closed form (-1)^(m-1) sqrt(-1)^(((p-1)/2)^2 m) sqrt(q), written as (-1)^(m-1) sqrt(p*)^m.
pub fn gauss_sum_field_closed(p: u32, m: usize) -> CycNum {
    let g = pstar_half_power(p, m as i64);
    if m % 2 == 1 {
        g
    } else {
        -g
    }
}

pub fn verify_quadratic_gauss(
    field: &ExtField,
    a2: &FieldElement,
    a1: &FieldElement,
    a0: &FieldElement,
) -> Result<QuadraticGaussReport> {
    if a2.is_zero() {
        return Err(Error::ZeroLeadCoefficient);
    }
    let p = field.p() as u32;
    let lhs = exp_sum(field, |c| {
        let v = field.add(&field.mul(&field.add(&field.mul(a2, c), a1), c), a0);
        field.trace(&v)
    })?;
    let four_a2 = field.scale(4 % p, a2);
    let shift = field.sub(a0, &field.div(&field.square(a1), &four_a2)?);
    let gauss_brute = gauss_sum_field(field)?;
    let gauss_closed = gauss_sum_field_closed(p, field.m());
    let rhs = (&CycNum::zeta_pow(p, field.trace(&shift) as i64) * &gauss_brute)
        .scale_int(field.eta(a2) as i64);
    Ok(QuadraticGaussReport {
        equal: lhs == rhs,
        gauss_matches: gauss_brute == gauss_closed,
        lhs,
        rhs,
        gauss_brute,
        gauss_closed,
    })
}

/// |x|^2 = x * conj(x), exact.
pub fn abs_squared(x: &CycNum) -> CycNum {
    x * &x.conj()
}

/// Sign of a rational as -1, 0 or 1.
pub fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for p in [3u32, 5, 7, 11] {
            let s = (0..p as i64).fold(CycNum::zero(p), |acc, k| &acc + &CycNum::zeta_pow(p, k));
            assert!(s.is_zero());
            let z = CycNum::zeta_pow(p, 1);
            assert_eq!(&z * &CycNum::zeta_pow(p, p as i64 - 1), CycNum::one(p));
        }
    }

    #[test]
    fn difference_square_p3() {
        let d = &CycNum::zeta_pow(3, 1) - &CycNum::zeta_pow(3, 2);
        assert_eq!(&d * &d, CycNum::from_integer(3, -3));
        assert_eq!(gauss_sum_prime(3), d);
    }

    #[test]
    fn gauss_sum_squares_to_pstar() {
        for p in (3u32..=97).filter(|&p| is_prime(p as u64)) {
            let g = gauss_sum_prime(p);
            assert_eq!(&g * &g, CycNum::from_bigint(p, pstar(p)), "p = {p}");
        }
    }

    #[test]
    fn sigma_is_a_homomorphism() {
        let p = 7;
        let x = CycNum::parse_with_p(p, "1/2 + 3*z + -2*z^4").unwrap();
        let y = CycNum::parse_with_p(p, "5 + -1*z^2 + 1/3*z^5").unwrap();
        for a in 1..7 {
            let sx = x.sigma(a).unwrap();
            let sy = y.sigma(a).unwrap();
            assert_eq!((&x * &y).sigma(a).unwrap(), &sx * &sy);
            assert_eq!((&x + &y).sigma(a).unwrap(), &sx + &sy);
            for b in 1..7 {
                assert_eq!(sx.sigma(b).unwrap(), x.sigma(a * b).unwrap());
            }
        }
        assert_eq!(x.sigma(1).unwrap(), x);
        assert_eq!(x.sigma(7), Err(Error::NonUnit(0)));
        assert_eq!(CycNum::zeta_pow(3, 1).sigma(2).unwrap(), CycNum::zeta_pow(3, 2));
    }

    #[test]
    fn sigma_scales_gauss_sum_by_character() {
        for p in [3u32, 5, 7, 11, 13] {
            let fp = PrimeField::new(p as u64).unwrap();
            let g = gauss_sum_prime(p);
            for a in 1..p {
                assert_eq!(g.sigma(a as i64).unwrap(), g.scale_int(fp.eta_bar(a) as i64));
            }
        }
    }

    #[test]
    fn half_powers() {
        assert_eq!(pstar_half_power(3, 2), CycNum::from_integer(3, -3));
        assert_eq!(pstar_half_power(3, -2), CycNum::from_rational(3, rat(-1, 3)));
        assert_eq!(pstar_half_power(3, 1), gauss_sum_prime(3));
        for p in [3u32, 5, 7] {
            for e in -7i64..=7 {
                let prod = &pstar_half_power(p, e) * &pstar_half_power(p, -e);
                assert_eq!(prod, CycNum::one(p), "p={p} e={e}");
            }
        }
    }

    #[test]
    fn sigma_sum_lemma_examples() {
        let r = verify_sigma_sum_lemma(3, 1, None);
        assert!(r.equal && r.lhs.is_zero());
        let r = verify_sigma_sum_lemma(3, 2, None);
        assert!(r.equal);
        assert_eq!(r.lhs, CycNum::from_rational(3, rat(-2, 3)));
        assert!(verify_sigma_sum_lemma(5, 3, Some(2)).equal);
    }

    #[test]
    fn text_round_trip() {
        let x = CycNum::parse_with_p(5, "-1/3 + 2*z^3 + 7*z^4").unwrap();
        let s = x.to_string();
        assert_eq!(s.split(" + ").count(), 4);
        assert_eq!(s.parse::<CycNum>().unwrap(), x);
        // z - z^2 with z^2 = -1 - z
        assert_eq!(gauss_sum_prime(3).to_string(), "1 + 2*z");
    }

    #[test]
    fn complex_embedding_of_gauss_sum() {
        // sqrt(-3) = i sqrt(3)
        let (re, im) = gauss_sum_prime(3).to_complex();
        assert!(re.abs() < 1e-9 && (im - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn exp_sums_small() {
        let f = ExtField::new(3, 2, None).unwrap();
        assert_eq!(exp_sum(&f, |_| 0).unwrap(), CycNum::from_integer(3, 9));
        assert!(exp_sum(&f, |x| f.trace(x)).unwrap().is_zero());
        assert_eq!(
            exp_sum(&f, |x| f.trace(&f.square(x))).unwrap(),
            CycNum::from_integer(3, 3)
        );
    }

    #[test]
    fn quadratic_gauss_small_fields() {
        let f3 = ExtField::new(3, 1, None).unwrap();
        let r = verify_quadratic_gauss(&f3, &f3.one(), &f3.zero(), &f3.zero()).unwrap();
        assert!(r.equal && r.gauss_matches);
        assert_eq!(r.lhs, gauss_sum_prime(3));

        let f9 = ExtField::new(3, 2, None).unwrap();
        let r = verify_quadratic_gauss(&f9, &f9.one(), &f9.zero(), &f9.zero()).unwrap();
        assert!(r.equal && r.gauss_matches);
        assert_eq!(r.gauss_brute, CycNum::from_integer(3, 3));
        assert_eq!(
            verify_quadratic_gauss(&f9, &f9.zero(), &f9.one(), &f9.one()).unwrap_err(),
            Error::ZeroLeadCoefficient
        );
    }
}
