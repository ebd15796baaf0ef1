//! Dense polynomials over GF(p), coefficients stored lowest degree first.

use crate::prime::PrimeField;

pub type Poly = Vec<u32>;

/// Drop trailing zero coefficients. The zero polynomial becomes empty.
pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn sub(fp: &PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            fp.sub(x, y)
        })
        .collect();
    trim(out)
}

pub fn mul(fp: &PrimeField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(out[i + j], fp.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `b`.
pub fn rem(fp: &PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = fp.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = fp.mul(r[dr], lead_inv);
        let shift = dr - db;
        for (j, &bj) in b[..=db].iter().enumerate() {
            r[shift + j] = fp.sub(r[shift + j], fp.mul(c, bj));
        }
        r = trim(r);
    }
    r
}

pub fn mul_mod(fp: &PrimeField, a: &[u32], b: &[u32], modulus: &[u32]) -> Poly {
    rem(fp, &mul(fp, a, b), modulus)
}

pub fn pow_mod(fp: &PrimeField, a: &[u32], mut e: u64, modulus: &[u32]) -> Poly {
    let mut base = rem(fp, a, modulus);
    let mut acc = rem(fp, &[1], modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(fp, &acc, &base, modulus);
        }
        base = mul_mod(fp, &base, &base, modulus);
        e >>= 1;
    }
    acc
}

pub fn gcd(fp: &PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(fp, &a, &b);
        a = b;
        b = r;
    }
    // normalize to monic
    if let Some(d) = degree(&a) {
        let inv = fp.inv(a[d]).expect("nonzero leading coefficient");
        for c in a.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    a
}

/// Distinct-degree irreducibility test: a polynomial of degree m is irreducible
/// iff gcd(x^(p^k) - x, f) = 1 for every 1 <= k <= m/2.
pub fn is_irreducible(fp: &PrimeField, f: &[u32]) -> bool {
    let Some(m) = degree(f) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    let mut h = rem(fp, &x, f);
    for _ in 1..=m / 2 {
        h = pow_mod(fp, &h, fp.p() as u64, f);
        let g = gcd(fp, &sub(fp, &h, &x), f);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_has_root(fp: &PrimeField, f: &[u32]) -> bool {
        fp.elements().any(|t| {
            let mut acc = 0u32;
            for &c in f.iter().rev() {
                acc = fp.add(fp.mul(acc, t), c);
            }
            acc == 0
        })
    }

    #[test]
    fn quadratics_irreducible_iff_rootless() {
        for p in [3u64, 5, 7] {
            let fp = PrimeField::new(p).unwrap();
            for c0 in fp.elements() {
                for c1 in fp.elements() {
                    let f = vec![c0, c1, 1];
                    assert_eq!(is_irreducible(&fp, &f), !brute_has_root(&fp, &f));
                }
            }
        }
    }

    #[test]
    fn counts_monic_irreducibles() {
        // number of monic irreducibles of degree m over GF(p) is (1/m) sum_{d|m} mu(d) p^(m/d)
        let fp = PrimeField::new(3).unwrap();
        let expected = [(1usize, 3usize), (2, 3), (3, 8), (4, 18)];
        for (m, want) in expected {
            let mut count = 0;
            let total = 3usize.pow(m as u32);
            for enc in 0..total {
                let mut f = Vec::with_capacity(m + 1);
                let mut e = enc;
                for _ in 0..m {
                    f.push((e % 3) as u32);
                    e /= 3;
                }
                f.push(1);
                if is_irreducible(&fp, &f) {
                    count += 1;
                }
            }
            assert_eq!(count, want, "degree {m}");
        }
    }

    #[test]
    fn pow_mod_matches_repeated_mul() {
        let fp = PrimeField::new(5).unwrap();
        let f = vec![2, 0, 1, 1];
        let a = vec![3, 1, 4];
        let mut acc = vec![1];
        for e in 0..30u64 {
            assert_eq!(pow_mod(&fp, &a, e, &f), rem(&fp, &acc, &f));
            acc = mul_mod(&fp, &acc, &a, &f);
        }
    }
}
