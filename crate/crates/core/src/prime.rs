//! Arithmetic in the prime field GF(p) and small-integer number theory.

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The prime field GF(p) for an odd prime p. Values are canonical `u32`s in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenPrime(p));
        }
        if p > u16::MAX as u64 {
            return Err(Error::PrimeOutOfRange(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    /// Reduce a signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `1/2`, which exists because p is odd.
    #[inline]
    pub fn half(&self) -> u32 {
        (self.p + 1) / 2
    }

    /// Quadratic character of GF(p), extended by zero at 0.
    pub fn eta_bar(&self, a: u32) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// `(-1)^((p-1)/2)`: the sign of p* = (-1)^((p-1)/2) p.
    pub fn pstar_sign(&self) -> i64 {
        if (self.p - 1) / 2 % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.p
    }

    pub fn units(&self) -> std::ops::Range<u32> {
        1..self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_range() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(9973));
        assert!(!is_prime(9991));
    }

    #[test]
    fn factorization_round_trips() {
        for n in 1..2000u64 {
            let prod: u64 = factorize(n).iter().map(|&(q, e)| q.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(factorize(80), vec![(2, 4), (5, 1)]);
    }

    #[test]
    fn rejects_bad_characteristics() {
        assert_eq!(PrimeField::new(2), Err(Error::EvenPrime(2)));
        assert_eq!(PrimeField::new(9), Err(Error::NonPrime(9)));
        assert!(PrimeField::new(65537).is_err());
    }

    #[test]
    fn eta_bar_mod_3() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.eta_bar(0), 0);
        assert_eq!(f.eta_bar(1), 1);
        assert_eq!(f.eta_bar(2), -1);
    }

    #[test]
    fn eta_bar_is_multiplicative() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in f.units() {
                for b in f.units() {
                    assert_eq!(f.eta_bar(f.mul(a, b)), f.eta_bar(a) * f.eta_bar(b));
                }
            }
            let squares = f.units().filter(|&a| f.eta_bar(a) == 1).count();
            assert_eq!(squares as u32, (f.p() - 1) / 2);
        }
    }

    #[test]
    fn inverse_and_half() {
        let f = PrimeField::new(7).unwrap();
        for a in f.units() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.mul(2, f.half()), 1);
        assert_eq!(f.inv(0), Err(Error::DivisionByZero));
    }
}
