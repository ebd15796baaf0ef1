//! Exhaustive counters and closed-form solution counts for f(x) - Tr(alpha x) = 0.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{pstar_half_power, CycNum};
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::quadform::FormAnalysis;

/// Number of x in GF(q) satisfying `pred`, by enumeration.
pub fn brute_count<F>(field: &ExtField, pred: F) -> Result<u64>
where
    F: Fn(&FieldElement) -> bool + Sync,
{
    field.check_enumerable()?;
    Ok((0..field.q())
        .into_par_iter()
        .filter(|&v| pred(&field.decode_unchecked(v)))
        .count() as u64)
}

/// Tr(gamma x) for every x, indexed by encoding.
pub fn trace_table(field: &ExtField, gamma: &FieldElement) -> Result<Vec<u32>> {
    field.check_enumerable()?;
    Ok((0..field.q())
        .into_par_iter()
        .map(|v| field.trace(&field.mul(gamma, &field.decode_unchecked(v))))
        .collect())
}

/// sum of z^phase over a list of phases (reduced mod p by the caller or here).
pub fn phase_sum<I: IntoIterator<Item = u32>>(p: u32, phases: I) -> CycNum {
    let mut counts = vec![0u64; p as usize];
    for ph in phases {
        counts[(ph % p) as usize] += 1;
    }
    CycNum::from_phase_counts(p, &counts)
}

/// c * p^k * sqrt(p*)^h as an exact cyclotomic number.
pub(crate) fn term(p: u32, c: i64, k: i64, h: i64) -> CycNum {
    let base = BigRational::from_integer(BigInt::from(p));
    let pk = if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), k.unsigned_abs() as usize)
    };
    pstar_half_power(p, h).scale(&(pk * BigRational::from_integer(BigInt::from(c))))
}

pub(crate) fn halve(x: CycNum) -> CycNum {
    x.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
}

/// Resolve a closed form that must be a nonnegative integer.
pub fn to_count(value: &CycNum, what: &str) -> Result<u64> {
    let n = value
        .to_integer()
        .ok_or_else(|| Error::NonIntegralPrediction(format!("{what} = {value}")))?;
    if n.is_negative() {
        return Err(Error::NegativeMultiplicity(format!("{what} = {n}")));
    }
    n.to_u64()
        .ok_or_else(|| Error::NonIntegralPrediction(format!("{what} = {n} overflows")))
}

/// Which closed-form regime a pair (f, alpha) falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaCase {
    EvenZero,
    EvenNonzero,
    OddZero,
    OddNonzero,
    OutsideEven,
    OutsideOdd,
}

impl AlphaCase {
    pub const ALL: [AlphaCase; 6] = [
        AlphaCase::EvenNonzero,
        AlphaCase::EvenZero,
        AlphaCase::OddNonzero,
        AlphaCase::OddZero,
        AlphaCase::OutsideEven,
        AlphaCase::OutsideOdd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AlphaCase::EvenZero => "even-zero",
            AlphaCase::EvenNonzero => "even-nonzero",
            AlphaCase::OddZero => "odd-zero",
            AlphaCase::OddNonzero => "odd-nonzero",
            AlphaCase::OutsideEven => "outside-even",
            AlphaCase::OutsideOdd => "outside-odd",
        }
    }

    pub fn alpha_in_image(self) -> bool {
        !matches!(self, AlphaCase::OutsideEven | AlphaCase::OutsideOdd)
    }

    pub fn rank_even(self) -> bool {
        matches!(
            self,
            AlphaCase::EvenZero | AlphaCase::EvenNonzero | AlphaCase::OutsideEven
        )
    }
}

impl fmt::Display for AlphaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A form together with a fixed alpha and the derived quantities x_alpha, f(x_alpha).
#[derive(Clone, Debug)]
pub struct AlphaContext {
    pub analysis: FormAnalysis,
    pub alpha: FieldElement,
    pub x_alpha: Option<FieldElement>,
    pub f_x_alpha: Option<u32>,
}

impl AlphaContext {
    pub fn new(analysis: &FormAnalysis, alpha: FieldElement) -> Self {
        let x_alpha = analysis.solve_xb(&alpha);
        let f_x_alpha = x_alpha.map(|x| analysis.evaluate(&x));
        AlphaContext {
            analysis: analysis.clone(),
            alpha,
            x_alpha,
            f_x_alpha,
        }
    }

    pub fn field(&self) -> &ExtField {
        self.analysis.field()
    }

    pub fn p(&self) -> u32 {
        self.field().p() as u32
    }

    pub fn m(&self) -> i64 {
        self.field().m() as i64
    }

    pub fn r(&self) -> i64 {
        self.analysis.rank as i64
    }

    pub fn eps(&self) -> i64 {
        self.analysis.sign as i64
    }

    pub fn case(&self) -> AlphaCase {
        let even = self.analysis.rank % 2 == 0;
        match (self.f_x_alpha, even) {
            (None, true) => AlphaCase::OutsideEven,
            (None, false) => AlphaCase::OutsideOdd,
            (Some(0), true) => AlphaCase::EvenZero,
            (Some(_), true) => AlphaCase::EvenNonzero,
            (Some(0), false) => AlphaCase::OddZero,
            (Some(_), false) => AlphaCase::OddNonzero,
        }
    }

    /// eta_bar(-f(x_alpha)); 0 when f(x_alpha) is zero or undefined.
    pub fn eta_neg_f_x_alpha(&self) -> i64 {
        match self.f_x_alpha {
            Some(v) if v != 0 => {
                let fp = self.analysis.prime_field();
                fp.eta_bar(fp.neg(v)) as i64
            }
            _ => 0,
        }
    }

    /// Closed form for #{x : f(x) = Tr(alpha x)}.
    pub fn n_f_alpha_closed(&self) -> CycNum {
        let (p, m, r, e) = (self.p(), self.m(), self.r(), self.eps());
        let base = term(p, 1, m - 1, 0);
        match self.case() {
            AlphaCase::OutsideEven | AlphaCase::OutsideOdd | AlphaCase::OddZero => base,
            AlphaCase::EvenZero => base + term(p, e * (p as i64 - 1), m - 1, -r),
            AlphaCase::EvenNonzero => base - term(p, e, m - 1, -r),
            AlphaCase::OddNonzero => {
                base + term(p, e * self.eta_neg_f_x_alpha(), m - 1, -(r - 1))
            }
        }
    }

    pub fn predict_n_f_alpha(&self) -> Result<u64> {
        to_count(&self.n_f_alpha_closed(), "N_f(alpha)")
    }

    /// Classify beta relative to this alpha.
    pub fn beta_data(&self, beta: &FieldElement) -> Result<BetaData> {
        if beta.is_zero() {
            return Err(Error::ZeroBeta);
        }
        let a = &self.analysis;
        let f = self.field();
        let fp = a.prime_field();
        let mut d = BetaData {
            beta: *beta,
            in_image: a.in_image(beta),
            x_beta: None,
            f_x_beta: None,
            tr_alpha_x_beta: None,
            e: None,
            z0: None,
            x_prime: None,
            f_x_prime: None,
        };
        if let Some(xb) = a.solve_xb(beta) {
            let fxb = a.evaluate(&xb);
            let tr = f.trace(&f.mul(&self.alpha, &xb));
            d.x_beta = Some(xb);
            d.f_x_beta = Some(fxb);
            d.tr_alpha_x_beta = Some(tr);
            if let (Some(fxa), true) = (self.f_x_alpha, fxb != 0) {
                // E = -f(x_alpha) + Tr(alpha x_beta)^2 / (4 f(x_beta))
                let q = fp.div(fp.mul(tr, tr), fp.mul(4 % fp.p(), fxb))?;
                d.e = Some(fp.sub(q, fxa));
            }
        }
        if self.x_alpha.is_none() {
            d.z0 = a.in_shifted_image(&self.alpha, beta)?;
            if let Some(z0) = d.z0 {
                let gamma = f.sub(&self.alpha, &f.scale(z0, beta));
                let xp = a.solve_xb(&gamma).expect("shifted element lies in the image");
                d.x_prime = Some(xp);
                d.f_x_prime = Some(a.evaluate(&xp));
            }
        }
        Ok(d)
    }

    pub fn shift_branch(&self, d: &BetaData) -> ShiftBranch {
        if self.x_alpha.is_none() {
            return match d.f_x_prime {
                None => ShiftBranch::Other,
                Some(0) => ShiftBranch::UnionZero,
                Some(_) => ShiftBranch::UnionNonzero,
            };
        }
        match (d.f_x_beta, d.tr_alpha_x_beta, d.e) {
            (None, _, _) => ShiftBranch::BetaOutside,
            (Some(0), Some(0), _) => ShiftBranch::ZeroZero,
            (Some(0), _, _) => ShiftBranch::ZeroTrace,
            (_, _, Some(0)) => ShiftBranch::NonzeroEZero,
            _ => ShiftBranch::NonzeroE,
        }
    }

    /// Closed form for #{x : f(x) = Tr(alpha x), Tr(beta x) = 0}.
    pub fn n_f_beta_alpha_closed(&self, d: &BetaData) -> CycNum {
        self.n_f_beta_alpha_with(d, self.shift_branch(d))
    }

    pub(crate) fn n_f_beta_alpha_with(&self, d: &BetaData, branch: ShiftBranch) -> CycNum {
        let (p, m, r, e) = (self.p(), self.m(), self.r(), self.eps());
        let fp = self.analysis.prime_field();
        let pi = p as i64;
        let base = term(p, 1, m - 2, 0);
        let eta_neg = |v: u32| fp.eta_bar(fp.neg(v)) as i64;
        let eta_a = self.eta_neg_f_x_alpha();
        use ShiftBranch::*;
        match (self.case(), branch) {
            (AlphaCase::EvenZero, ZeroZero) => base + term(p, e * (pi - 1), m - 1, -r),
            (AlphaCase::EvenZero, NonzeroE) => {
                base + term(p, e * fp.eta_bar(fp.neg(1)) as i64, m - 2, -(r - 2))
            }
            (AlphaCase::EvenZero, BetaOutside) => base + term(p, e * (pi - 1), m - 2, -r),
            (AlphaCase::EvenNonzero, ZeroZero) => base - term(p, e, m - 1, -r),
            (AlphaCase::EvenNonzero, NonzeroE) => {
                let fe = fp.mul(d.f_x_beta.unwrap(), d.e.unwrap());
                base + term(p, e * eta_neg(fe), m - 2, -(r - 2))
            }
            (AlphaCase::EvenNonzero, BetaOutside) => base - term(p, e, m - 2, -r),
            (AlphaCase::OddZero, NonzeroEZero) => {
                base + term(p, e * eta_neg(d.f_x_beta.unwrap()) * (pi - 1), m - 2, -(r - 1))
            }
            (AlphaCase::OddZero, NonzeroE) => {
                base - term(p, e * eta_neg(d.f_x_beta.unwrap()), m - 2, -(r - 1))
            }
            (AlphaCase::OddNonzero, ZeroZero) => base + term(p, e * eta_a, m - 1, -(r - 1)),
            (AlphaCase::OddNonzero, NonzeroEZero) => {
                base + term(p, e * eta_a * (pi - 1), m - 2, -(r - 1))
            }
            (AlphaCase::OddNonzero, NonzeroE) => {
                base - term(p, e * eta_neg(d.f_x_beta.unwrap()), m - 2, -(r - 1))
            }
            (AlphaCase::OddNonzero, BetaOutside) => base + term(p, e * eta_a, m - 2, -(r - 1)),
            (AlphaCase::OutsideEven, UnionNonzero) => base - term(p, e, m - 2, -r),
            (AlphaCase::OutsideEven, UnionZero) => base + term(p, (pi - 1) * e, m - 2, -r),
            (AlphaCase::OutsideOdd, UnionNonzero) => {
                base + term(p, e * eta_neg(d.f_x_prime.unwrap()), m - 2, -(r - 1))
            }
            _ => base,
        }
    }

    pub fn predict_n_f_beta_alpha(&self, beta: &FieldElement) -> Result<u64> {
        let d = self.beta_data(beta)?;
        to_count(&self.n_f_beta_alpha_closed(&d), "N_f,beta(alpha)")
    }
}

/// Derived data for one beta != 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaData {
    pub beta: FieldElement,
    pub in_image: bool,
    pub x_beta: Option<FieldElement>,
    pub f_x_beta: Option<u32>,
    pub tr_alpha_x_beta: Option<u32>,
    /// -f(x_alpha) + Tr(alpha x_beta)^2 / (4 f(x_beta)), when all terms exist and f(x_beta) != 0.
    pub e: Option<u32>,
    /// For alpha outside the image: the z0 with alpha - z0 beta in the image.
    pub z0: Option<u32>,
    /// Solution of L_f(x') = -(alpha - z0 beta)/2.
    pub x_prime: Option<FieldElement>,
    pub f_x_prime: Option<u32>,
}

/// How beta sits relative to alpha; selects the row of the N_f,beta(alpha) table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShiftBranch {
    /// f(x_beta) = 0 and Tr(alpha x_beta) = 0.
    ZeroZero,
    /// f(x_beta) = 0 and Tr(alpha x_beta) != 0.
    ZeroTrace,
    /// f(x_beta) != 0 and E = 0 (equivalently Tr(alpha x_beta) = 0 when f(x_alpha) = 0).
    NonzeroEZero,
    NonzeroE,
    BetaOutside,
    UnionNonzero,
    UnionZero,
    Other,
}

impl ShiftBranch {
    pub fn label(self) -> &'static str {
        match self {
            ShiftBranch::ZeroZero => "zz",
            ShiftBranch::ZeroTrace => "z-nz",
            ShiftBranch::NonzeroEZero => "nz-e0",
            ShiftBranch::NonzeroE => "nz-enz",
            ShiftBranch::BetaOutside => "beta-out",
            ShiftBranch::UnionNonzero => "union-nz",
            ShiftBranch::UnionZero => "union-z",
            ShiftBranch::Other => "other",
        }
    }

    pub fn for_case(case: AlphaCase) -> &'static [ShiftBranch] {
        use ShiftBranch::*;
        if case.alpha_in_image() {
            &[ZeroZero, ZeroTrace, NonzeroEZero, NonzeroE, BetaOutside]
        } else {
            &[UnionNonzero, UnionZero, Other]
        }
    }
}

/// N_f(alpha) for a form analysis and alpha.
pub fn predict_n_f_alpha(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<u64> {
    AlphaContext::new(analysis, *alpha).predict_n_f_alpha()
}

/// N_f,beta(alpha) for beta != 0.
pub fn predict_n_f_beta_alpha(
    analysis: &FormAnalysis,
    alpha: &FieldElement,
    beta: &FieldElement,
) -> Result<u64> {
    AlphaContext::new(analysis, *alpha).predict_n_f_beta_alpha(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{preset_trace_square, sum_of_trace_squares, QuadraticFunction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_counts() {
        let f = ExtField::new(3, 3, None).unwrap();
        assert_eq!(brute_count(&f, |_| true).unwrap(), 27);
        let beta = f.basis(1);
        assert_eq!(brute_count(&f, |x| f.trace(&f.mul(&beta, x)) == 0).unwrap(), 9);
    }

    #[test]
    fn gf9_trace_square() {
        let f = ExtField::new(3, 2, None).unwrap();
        let a = preset_trace_square(&f, &f.one()).unwrap().analyze();
        // alpha = 1: x_alpha = 1, f(1) = Tr(1) = 2
        let ctx = AlphaContext::new(&a, f.one());
        assert_eq!(ctx.f_x_alpha, Some(2));
        assert_eq!(ctx.predict_n_f_alpha().unwrap(), 2);
        let brute = brute_count(&f, |x| a.evaluate(x) == f.trace(x)).unwrap();
        assert_eq!(brute, 2);
        let zero = brute_count(&f, |x| a.evaluate(x) == 0).unwrap();
        assert_eq!(predict_n_f_alpha(&a, &f.zero()).unwrap(), zero);
    }

    #[test]
    fn predictions_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut cases = std::collections::BTreeSet::new();
        for (p, m) in [(3u64, 4usize), (3, 3), (5, 3), (3, 5)] {
            let f = ExtField::new(p, m, None).unwrap();
            for _ in 0..25 {
                let k = rng.gen_range(1..=m);
                let terms: Vec<(u32, FieldElement)> = (0..k)
                    .map(|_| (rng.gen_range(1..p as u32), f.random_nonzero(&mut rng)))
                    .collect();
                let q = sum_of_trace_squares(&f, &terms).unwrap();
                let a = q.analyze();
                let values = q.value_table().unwrap();
                let alpha = if rng.gen_bool(0.5) {
                    f.random(&mut rng)
                } else {
                    let x = f.random(&mut rng);
                    f.scale(f.prime_field().neg(2), &q.lf_apply(&x))
                };
                let ctx = AlphaContext::new(&a, alpha);
                cases.insert(ctx.case());
                let ta = trace_table(&f, &alpha).unwrap();
                let n = values.iter().zip(&ta).filter(|(v, t)| v == t).count() as u64;
                assert_eq!(ctx.predict_n_f_alpha().unwrap(), n);
                for _ in 0..8 {
                    let beta = f.random_nonzero(&mut rng);
                    let tb = trace_table(&f, &beta).unwrap();
                    let nb = (0..values.len())
                        .filter(|&i| values[i] == ta[i] && tb[i] == 0)
                        .count() as u64;
                    let d = ctx.beta_data(&beta).unwrap();
                    assert_eq!(ctx.predict_n_f_beta_alpha(&beta).unwrap(), nb, "p={p} m={m} r={} eps={} case={:?} br={:?} d={:?} fxa={:?}", a.rank, a.sign, ctx.case(), ctx.shift_branch(&d), d, ctx.f_x_alpha);
                }
            }
        }
        assert!(cases.len() >= 4);
    }

    #[test]
    fn zero_beta_rejected() {
        let f = ExtField::new(3, 2, None).unwrap();
        let a = QuadraticFunction::new(&f, vec![f.one(), f.zero()]).unwrap().analyze();
        let ctx = AlphaContext::new(&a, f.one());
        assert_eq!(ctx.beta_data(&f.zero()).unwrap_err(), Error::ZeroBeta);
    }

    #[test]
    fn term_values() {
        assert_eq!(term(3, 2, 2, 0), CycNum::from_integer(3, 18));
        // (p*)^(-1) for p = 3 is -1/3
        assert_eq!(term(3, 9, 0, -2), CycNum::from_integer(3, -3));
        assert!(to_count(&term(3, -1, 0, 0), "x").is_err());
        assert!(to_count(&term(3, 1, -1, 0), "x").is_err());
    }
}
