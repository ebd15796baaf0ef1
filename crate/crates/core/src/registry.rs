//! Registry of closed-form counting identities, each checked head-to-head against
//! exhaustive enumeration on seeded random instances.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{
    halve, phase_sum, term, trace_table, AlphaCase, AlphaContext, BetaData, ShiftBranch,
};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::quadform::{sum_of_trace_squares, FormAnalysis, QuadraticFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    ShiftedExpSum,
    BinaryFormSum,
    LevelCount,
    HyperplaneLevelCount,
    ZeroCount,
    HyperplaneSums,
    HyperplaneZeroCount,
    ShiftUniqueness,
    ShiftedLineSum,
    ShiftedLineGaloisSum,
    ShiftedZeroCount,
    CompletedSquareSum,
    CompletedSquareLevels,
    PartitionCounts,
    ZeroCenterPartition,
}

impl LemmaId {
    pub const ALL: [LemmaId; 15] = [
        LemmaId::ShiftedExpSum,
        LemmaId::BinaryFormSum,
        LemmaId::LevelCount,
        LemmaId::HyperplaneLevelCount,
        LemmaId::ZeroCount,
        LemmaId::HyperplaneSums,
        LemmaId::HyperplaneZeroCount,
        LemmaId::ShiftUniqueness,
        LemmaId::ShiftedLineSum,
        LemmaId::ShiftedLineGaloisSum,
        LemmaId::ShiftedZeroCount,
        LemmaId::CompletedSquareSum,
        LemmaId::CompletedSquareLevels,
        LemmaId::PartitionCounts,
        LemmaId::ZeroCenterPartition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::ShiftedExpSum => "shifted-exp-sum",
            LemmaId::BinaryFormSum => "binary-form-sum",
            LemmaId::LevelCount => "level-count",
            LemmaId::HyperplaneLevelCount => "hyperplane-level-count",
            LemmaId::ZeroCount => "zero-count",
            LemmaId::HyperplaneSums => "hyperplane-sums",
            LemmaId::HyperplaneZeroCount => "hyperplane-zero-count",
            LemmaId::ShiftUniqueness => "shift-uniqueness",
            LemmaId::ShiftedLineSum => "shifted-line-sum",
            LemmaId::ShiftedLineGaloisSum => "shifted-line-galois-sum",
            LemmaId::ShiftedZeroCount => "shifted-zero-count",
            LemmaId::CompletedSquareSum => "completed-square-sum",
            LemmaId::CompletedSquareLevels => "completed-square-levels",
            LemmaId::PartitionCounts => "partition-counts",
            LemmaId::ZeroCenterPartition => "zero-center-partition",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            LemmaId::ShiftedExpSum => "sum_x z^(f(x) - Tr(b x))",
            LemmaId::BinaryFormSum => "sum_(z,w) z^(a z^2 + 2 b z w + c w^2) over GF(p)",
            LemmaId::LevelCount => "#{x : f(x) = t}, t != 0",
            LemmaId::HyperplaneLevelCount => "#{x : f(x) = t, Tr(alpha x) = 0} with f(x_alpha) = 0",
            LemmaId::ZeroCount => "N_f(alpha) = #{x : f(x) = Tr(alpha x)}",
            LemmaId::HyperplaneSums => "S1, S2 and the Galois sum S3 along Tr(beta x)",
            LemmaId::HyperplaneZeroCount => "#{x : f(x) = 0, Tr(beta x) = 0}",
            LemmaId::ShiftUniqueness => "#{z != 0 : alpha - z beta in Im(L_f)} <= 1 for alpha outside the image",
            LemmaId::ShiftedLineSum => "S4 = sum_z sum_x z^(f(x) - Tr((alpha - beta z) x))",
            LemmaId::ShiftedLineGaloisSum => "S5 = sum_y sigma_y(S4)",
            LemmaId::ShiftedZeroCount => "N_f,beta(alpha) = #{x : f(x) = Tr(alpha x), Tr(beta x) = 0}",
            LemmaId::CompletedSquareSum => "S6, its Galois sum and N_E for g = f - Tr(alpha x)^2 / (4 f(x_alpha))",
            LemmaId::CompletedSquareLevels => "sum_x z^g(x) and #{x : g(x) = t} for every t",
            LemmaId::PartitionCounts => "partition of GF(q) by f(x), Tr(alpha x) and E(x) when f(x_alpha) != 0",
            LemmaId::ZeroCenterPartition => "partition of {f(x) != 0} by Tr(alpha x) and the class of -f(x) when f(x_alpha) = 0",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown lemma id `{s}`")))
    }

    /// Every branch label the sweep tries to cover.
    pub fn branches(self) -> Vec<String> {
        let parity = |v: &[&str]| -> Vec<String> {
            ["even", "odd"]
                .iter()
                .flat_map(|p| v.iter().map(move |b| format!("{p}/{b}")))
                .collect()
        };
        match self {
            LemmaId::ShiftedExpSum => vec!["b-in-image".into(), "b-outside-image".into()],
            LemmaId::BinaryFormSum => vec!["nondegenerate".into(), "degenerate".into()],
            LemmaId::LevelCount
            | LemmaId::HyperplaneLevelCount
            | LemmaId::CompletedSquareSum
            | LemmaId::CompletedSquareLevels
            | LemmaId::PartitionCounts
            | LemmaId::ZeroCenterPartition => vec!["rank-even".into(), "rank-odd".into()],
            LemmaId::ZeroCount => AlphaCase::ALL.iter().map(|c| c.label().to_string()).collect(),
            LemmaId::HyperplaneSums | LemmaId::HyperplaneZeroCount => {
                parity(&["zero", "nonzero", "outside"])
            }
            LemmaId::ShiftUniqueness => vec!["in-union".into(), "not-in-union".into()],
            LemmaId::ShiftedLineSum => ["in/zz", "in/z-nz", "in/nz", "in/beta-out", "out/union", "out/other"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            LemmaId::ShiftedLineGaloisSum | LemmaId::ShiftedZeroCount => AlphaCase::ALL
                .iter()
                .flat_map(|c| {
                    ShiftBranch::for_case(*c)
                        .iter()
                        .map(move |b| format!("{}/{}", c.label(), b.label()))
                })
                .collect(),
        }
    }
}

/// Parameters for one registry check. Unused fields are ignored.
#[derive(Clone, Debug)]
pub struct LemmaParams {
    pub analysis: FormAnalysis,
    pub alpha: Option<FieldElement>,
    pub beta: Option<FieldElement>,
    pub t: Option<u32>,
    /// (a, b, c) for the binary form a z^2 + 2 b z w + c w^2.
    pub binary: Option<[u32; 3]>,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub quantity: String,
    pub closed: CycNum,
    pub brute: CycNum,
}

impl Check {
    fn new(quantity: impl Into<String>, closed: CycNum, brute: CycNum) -> Self {
        Check {
            quantity: quantity.into(),
            closed,
            brute,
        }
    }

    fn count(quantity: impl Into<String>, closed: CycNum, brute: u64, p: u32) -> Self {
        Check::new(quantity, closed, CycNum::from_integer(p, brute as i64))
    }

    pub fn equal(&self) -> bool {
        self.closed == self.brute
    }
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub branch: String,
    pub checks: Vec<Check>,
    /// Informational checks of alternative readings: (name, holds).
    pub variants: Vec<(String, bool)>,
}

impl Evaluation {
    pub fn all_equal(&self) -> bool {
        self.checks.iter().all(Check::equal)
    }
}

fn need<T: Copy>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or(Error::MissingParam(name))
}

fn violated(msg: &str) -> Error {
    Error::PreconditionViolated(msg.to_string())
}

fn parity(a: &FormAnalysis) -> &'static str {
    if a.rank % 2 == 0 {
        "even"
    } else {
        "odd"
    }
}

fn rank_label(a: &FormAnalysis) -> String {
    format!("rank-{}", parity(a))
}

fn nonzero_beta(params: &LemmaParams) -> Result<FieldElement> {
    let b = need(params.beta, "beta")?;
    if b.is_zero() {
        return Err(Error::ZeroBeta);
    }
    Ok(b)
}

fn alpha_context(params: &LemmaParams) -> Result<AlphaContext> {
    Ok(AlphaContext::new(&params.analysis, need(params.alpha, "alpha")?))
}

/// alpha in the image with f(x_alpha) of the requested class; alpha != 0 when zero class.
fn centered_context(params: &LemmaParams, want_zero: bool) -> Result<AlphaContext> {
    let ctx = alpha_context(params)?;
    match ctx.f_x_alpha {
        None => Err(violated("alpha must lie in Im(L_f)")),
        Some(v) if want_zero && v != 0 => Err(violated("needs f(x_alpha) = 0")),
        Some(0) if !want_zero => Err(violated("needs f(x_alpha) != 0")),
        _ if want_zero && ctx.alpha.is_zero() => Err(violated("needs alpha != 0")),
        _ => Ok(ctx),
    }
}

fn shift_label(ctx: &AlphaContext, b: ShiftBranch) -> String {
    format!("{}/{}", ctx.case().label(), b.label())
}

fn line_label(b: ShiftBranch) -> &'static str {
    match b {
        ShiftBranch::ZeroZero => "in/zz",
        ShiftBranch::ZeroTrace => "in/z-nz",
        ShiftBranch::NonzeroEZero | ShiftBranch::NonzeroE => "in/nz",
        ShiftBranch::BetaOutside => "in/beta-out",
        ShiftBranch::UnionNonzero | ShiftBranch::UnionZero => "out/union",
        ShiftBranch::Other => "out/other",
    }
}

fn hyperplane_label(a: &FormAnalysis, beta: &FieldElement) -> String {
    let kind = match a.solve_xb(beta) {
        None => "outside",
        Some(x) if a.evaluate(&x) == 0 => "zero",
        Some(_) => "nonzero",
    };
    format!("{}/{}", parity(a), kind)
}

/// Branch label of an instance; validates the lemma's preconditions without enumerating.
pub fn lemma_branch(id: LemmaId, params: &LemmaParams) -> Result<String> {
    let a = &params.analysis;
    match id {
        LemmaId::ShiftedExpSum => {
            let b = need(params.alpha, "alpha")?;
            Ok(if a.in_image(&b) { "b-in-image" } else { "b-outside-image" }.into())
        }
        LemmaId::BinaryFormSum => {
            let [x, y, z] = need(params.binary, "binary")?;
            let fp = a.prime_field();
            let det = fp.sub(fp.mul(x, z), fp.mul(y, y));
            if det != 0 {
                Ok("nondegenerate".into())
            } else if x != 0 {
                Ok("degenerate".into())
            } else {
                Err(violated("needs ac - b^2 != 0 or a != 0"))
            }
        }
        LemmaId::LevelCount => {
            if need(params.t, "t")? == 0 {
                return Err(violated("needs t != 0"));
            }
            Ok(rank_label(a))
        }
        LemmaId::HyperplaneLevelCount => {
            centered_context(params, true)?;
            if need(params.t, "t")? == 0 {
                return Err(violated("needs t != 0"));
            }
            Ok(rank_label(a))
        }
        LemmaId::ZeroCount => Ok(alpha_context(params)?.case().label().into()),
        LemmaId::HyperplaneSums | LemmaId::HyperplaneZeroCount => {
            Ok(hyperplane_label(a, &nonzero_beta(params)?))
        }
        LemmaId::ShiftUniqueness => {
            let alpha = need(params.alpha, "alpha")?;
            let beta = nonzero_beta(params)?;
            Ok(match a.in_shifted_image(&alpha, &beta)? {
                Some(_) => "in-union",
                None => "not-in-union",
            }
            .into())
        }
        LemmaId::ShiftedLineSum => {
            let ctx = alpha_context(params)?;
            let d = ctx.beta_data(&nonzero_beta(params)?)?;
            Ok(line_label(ctx.shift_branch(&d)).into())
        }
        LemmaId::ShiftedLineGaloisSum | LemmaId::ShiftedZeroCount => {
            let ctx = alpha_context(params)?;
            let d = ctx.beta_data(&nonzero_beta(params)?)?;
            Ok(shift_label(&ctx, ctx.shift_branch(&d)))
        }
        LemmaId::CompletedSquareSum | LemmaId::CompletedSquareLevels | LemmaId::PartitionCounts => {
            centered_context(params, false)?;
            Ok(rank_label(a))
        }
        LemmaId::ZeroCenterPartition => {
            centered_context(params, true)?;
            Ok(rank_label(a))
        }
    }
}

/// Closed form and exhaustive value for every quantity the identity covers.
pub fn lemma_oracle(id: LemmaId, params: &LemmaParams) -> Result<Evaluation> {
    let branch = lemma_branch(id, params)?;
    let a = &params.analysis;
    let field = a.field();
    let fp = *a.prime_field();
    let p = fp.p();
    let pi = p as i64;
    let m = field.m() as i64;
    let r = a.rank as i64;
    let e = a.sign as i64;
    let q = field.q();
    let eta_neg = |v: u32| fp.eta_bar(fp.neg(v)) as i64;
    let values = a.func().value_table()?;
    let mut checks = Vec::new();
    let mut variants = Vec::new();

    match id {
        LemmaId::ShiftedExpSum => {
            let b = params.alpha.unwrap();
            let tb = trace_table(field, &b)?;
            let brute0 = phase_sum(p, values.iter().copied());
            checks.push(Check::new("sum z^f", term(p, e, m, -r), brute0));
            let brute = phase_sum(p, values.iter().zip(&tb).map(|(v, t)| fp.sub(*v, *t)));
            let closed = match a.solve_xb(&b) {
                None => CycNum::zero(p),
                Some(xb) => {
                    term(p, e, m, -r) * CycNum::zeta_pow(p, -(a.evaluate(&xb) as i64))
                }
            };
            checks.push(Check::new("sum z^(f - Tr(bx))", closed, brute));
        }
        LemmaId::BinaryFormSum => {
            let [x, y, z] = params.binary.unwrap();
            let brute = phase_sum(
                p,
                (0..p).flat_map(|u| {
                    (0..p).map(move |w| {
                        let s = fp.add(fp.mul(x, fp.mul(u, u)), fp.mul(2, fp.mul(y, fp.mul(u, w))));
                        fp.add(s, fp.mul(z, fp.mul(w, w)))
                    })
                }),
            );
            let det = fp.sub(fp.mul(x, z), fp.mul(y, y));
            let closed = if det != 0 {
                term(p, fp.eta_bar(det) as i64, 2, -2)
            } else {
                term(p, fp.eta_bar(x) as i64, 1, 1)
            };
            checks.push(Check::new("S", closed, brute));
        }
        LemmaId::LevelCount => {
            let t = params.t.unwrap();
            let brute = values.iter().filter(|&&v| v == t).count() as u64;
            let closed = if r % 2 == 0 {
                term(p, 1, m - 1, 0) - term(p, e, m - 1, -r)
            } else {
                term(p, 1, m - 1, 0) + term(p, e * eta_neg(t), m - 1, -(r - 1))
            };
            checks.push(Check::count("N(f=t)", closed, brute, p));
        }
        LemmaId::HyperplaneLevelCount => {
            let t = params.t.unwrap();
            let ta = trace_table(field, &params.alpha.unwrap())?;
            let brute = (0..values.len())
                .filter(|&i| values[i] == t && ta[i] == 0)
                .count() as u64;
            let printed = term(p, 1, m - 2, 0) + term(p, e * eta_neg(t), m - 1, -(r - 1));
            let closed = if r % 2 == 1 {
                printed.clone()
            } else {
                term(p, 1, m - 2, 0) - term(p, e, m - 1, -r)
            };
            if r % 2 == 0 {
                variants.push((
                    "odd-rank formula applied at even rank".to_string(),
                    printed == CycNum::from_integer(p, brute as i64),
                ));
            }
            checks.push(Check::count("#{f=t, Tr(alpha x)=0}", closed, brute, p));
        }
        LemmaId::ZeroCount => {
            let ctx = alpha_context(params)?;
            let ta = trace_table(field, &ctx.alpha)?;
            let brute = values.iter().zip(&ta).filter(|(v, t)| v == t).count() as u64;
            let closed = ctx.n_f_alpha_closed();
            if ctx.case() == AlphaCase::OddNonzero {
                let printed = &closed + &CycNum::one(p);
                variants.push((
                    "extra +1 in the odd-rank, f(x_alpha) != 0 row".to_string(),
                    printed == CycNum::from_integer(p, brute as i64),
                ));
            }
            checks.push(Check::count("N_f(alpha)", closed, brute, p));
        }
        LemmaId::HyperplaneSums | LemmaId::HyperplaneZeroCount => {
            let beta = params.beta.unwrap();
            let tb = trace_table(field, &beta)?;
            let xb = a.solve_xb(&beta);
            let fxb = xb.map(|x| a.evaluate(&x));
            let even = r % 2 == 0;
            if id == LemmaId::HyperplaneSums {
                let s1 = phase_sum(p, tb.iter().flat_map(|t| (0..p).map(move |z| fp.neg(fp.mul(z, *t)))));
                checks.push(Check::new("S1", CycNum::from_integer(p, q as i64), s1));
                let s2 = phase_sum(
                    p,
                    values
                        .iter()
                        .zip(&tb)
                        .flat_map(|(v, t)| (0..p).map(move |z| fp.sub(*v, fp.mul(z, *t)))),
                );
                let s2_closed = match fxb {
                    Some(0) => term(p, e, m + 1, -r),
                    Some(v) => term(p, e * eta_neg(v), m, -(r - 1)),
                    None => term(p, e, m, -r),
                };
                let s3_closed = match (even, fxb) {
                    (true, Some(0)) => term(p, e * (pi - 1), m + 1, -r),
                    (true, Some(_)) => CycNum::zero(p),
                    (true, None) => term(p, e * (pi - 1), m, -r),
                    (false, Some(v)) if v != 0 => term(p, e * eta_neg(v) * (pi - 1), m, -(r - 1)),
                    (false, _) => CycNum::zero(p),
                };
                let s3 = s2.galois_trace();
                checks.push(Check::new("S2", s2_closed, s2));
                checks.push(Check::new("S3", s3_closed, s3));
            } else {
                let brute = (0..values.len())
                    .filter(|&i| values[i] == 0 && tb[i] == 0)
                    .count() as u64;
                let base = term(p, 1, m - 2, 0);
                let closed = match (even, fxb) {
                    (true, Some(0)) => base + term(p, e * (pi - 1), m - 1, -r),
                    (true, Some(_)) => base,
                    (true, None) => base + term(p, e * (pi - 1), m - 2, -r),
                    (false, Some(v)) if v != 0 => {
                        base + term(p, e * eta_neg(v) * (pi - 1), m - 2, -(r - 1))
                    }
                    (false, _) => base,
                };
                checks.push(Check::count("N_f,beta", closed, brute, p));
            }
        }
        LemmaId::ShiftUniqueness => {
            let alpha = params.alpha.unwrap();
            let beta = params.beta.unwrap();
            let image: HashSet<FieldElement> = field
                .elements()?
                .iter()
                .map(|x| a.func().lf_apply(x))
                .collect();
            if image.contains(&alpha) {
                return Err(Error::AlphaInImage);
            }
            let hits: Vec<u32> = fp
                .units()
                .filter(|&z| image.contains(&field.sub(&alpha, &field.scale(z, &beta))))
                .collect();
            let z0 = a.in_shifted_image(&alpha, &beta)?;
            checks.push(Check::count(
                "#{z : alpha - z beta in Im}",
                CycNum::from_integer(p, z0.is_some() as i64),
                hits.len() as u64,
                p,
            ));
            if let (Some(z), Some(h)) = (z0, hits.first()) {
                checks.push(Check::count("z0", CycNum::from_integer(p, z as i64), *h as u64, p));
            }
            // beta in z' alpha + Im(L_f) exactly when z0 = 1/z' exists
            let union = fp
                .units()
                .any(|zp| image.contains(&field.sub(&beta, &field.scale(zp, &alpha))));
            checks.push(Check::count(
                "beta in union of shifted images",
                CycNum::from_integer(p, z0.is_some() as i64),
                union as u64,
                p,
            ));
        }
        LemmaId::ShiftedLineSum | LemmaId::ShiftedLineGaloisSum | LemmaId::ShiftedZeroCount => {
            let ctx = alpha_context(params)?;
            let beta = params.beta.unwrap();
            let d = ctx.beta_data(&beta)?;
            let sb = ctx.shift_branch(&d);
            let ta = trace_table(field, &ctx.alpha)?;
            let tb = trace_table(field, &beta)?;
            if id == LemmaId::ShiftedZeroCount {
                let brute = (0..values.len())
                    .filter(|&i| values[i] == ta[i] && tb[i] == 0)
                    .count() as u64;
                let closed = ctx.n_f_beta_alpha_closed(&d);
                if let Some(z0) = d.z0 {
                    // literal reading: "f(x') = -(alpha - beta z0)/2" tested for zero as a field element
                    let gamma = field.sub(&ctx.alpha, &field.scale(z0, &beta));
                    let literal = if gamma.is_zero() {
                        ShiftBranch::UnionZero
                    } else {
                        ShiftBranch::UnionNonzero
                    };
                    let value = ctx.n_f_beta_alpha_with(&d, literal);
                    variants.push((
                        "f(x') read literally as -(alpha - beta z0)/2".to_string(),
                        value == CycNum::from_integer(p, brute as i64),
                    ));
                }
                checks.push(Check::count("N_f,beta(alpha)", closed, brute, p));
            } else {
                let s4 = phase_sum(
                    p,
                    (0..values.len()).flat_map(|i| {
                        let base = fp.sub(values[i], ta[i]);
                        let tbi = tb[i];
                        (0..p).map(move |z| fp.add(base, fp.mul(z, tbi)))
                    }),
                );
                if id == LemmaId::ShiftedLineSum {
                    checks.push(Check::new("S4", s4_closed(&ctx, &d, sb), s4));
                } else {
                    checks.push(Check::new("S5", s5_closed(&ctx, &d, sb), s4.galois_trace()));
                }
            }
        }
        LemmaId::CompletedSquareSum | LemmaId::CompletedSquareLevels => {
            let ctx = centered_context(params, false)?;
            let fxa = ctx.f_x_alpha.unwrap();
            let eta = ctx.eta_neg_f_x_alpha();
            let c = fp.inv(fp.mul(4 % p, fxa))?;
            let ta = trace_table(field, &ctx.alpha)?;
            let g: Vec<u32> = values
                .iter()
                .zip(&ta)
                .map(|(v, t)| fp.sub(*v, fp.mul(c, fp.mul(*t, *t))))
                .collect();
            let odd = r % 2 == 1;
            if id == LemmaId::CompletedSquareSum {
                let s6 = phase_sum(
                    p,
                    (0..values.len()).flat_map(|i| {
                        let (v, t) = (values[i], ta[i]);
                        (0..p).flat_map(move |z| {
                            (0..p).map(move |w| {
                                let s = fp.sub(v, fp.mul(c, fp.mul(z, z)));
                                fp.add(s, fp.mul(w, fp.sub(z, t)))
                            })
                        })
                    }),
                );
                let s6_closed = term(p, e * eta, m + 1, -(r - 1));
                let gs_closed = if odd {
                    term(p, e * eta * (pi - 1), m + 1, -(r - 1))
                } else {
                    CycNum::zero(p)
                };
                let gs = s6.galois_trace();
                checks.push(Check::new("S6", s6_closed, s6));
                checks.push(Check::new("sum_y sigma_y(S6)", gs_closed, gs));
                let ne = g.iter().filter(|&&v| v == 0).count() as u64;
                let ne_closed = if odd {
                    term(p, 1, m - 1, 0) + term(p, e * eta * (pi - 1), m - 1, -(r - 1))
                } else {
                    term(p, 1, m - 1, 0)
                };
                checks.push(Check::count("N_E", ne_closed, ne, p));
            } else {
                let sum = phase_sum(p, g.iter().copied());
                checks.push(Check::new("sum z^g", term(p, e * eta, m, -(r - 1)), sum));
                for t in 0..p {
                    let brute = g.iter().filter(|&&v| v == t).count() as u64;
                    let base = term(p, 1, m - 1, 0);
                    let closed = match (odd, t == 0) {
                        (false, true) => base,
                        (false, false) => base + term(p, e * eta_neg(t) * eta, m - 1, -(r - 2)),
                        (true, true) => base + term(p, e * eta * (pi - 1), m - 1, -(r - 1)),
                        (true, false) => base - term(p, e * eta, m - 1, -(r - 1)),
                    };
                    checks.push(Check::count(format!("N(g={t})"), closed, brute, p));
                }
            }
        }
        LemmaId::PartitionCounts => {
            let ctx = centered_context(params, false)?;
            let ta = trace_table(field, &ctx.alpha)?;
            let fxa = ctx.f_x_alpha.unwrap();
            let eta = ctx.eta_neg_f_x_alpha();
            let plus = partition_counts(&fp, &values, &ta, fxa, true);
            let minus = partition_counts(&fp, &values, &ta, fxa, false);
            let closed = partition_closed(p, m, r, e, eta);
            let names: Vec<String> = if r % 2 == 0 {
                (1..=4).map(|i| format!("I{i}")).collect()
            } else {
                (1..=6).map(|i| format!("J{i}")).collect()
            };
            let brute = if r % 2 == 0 { &plus.even[..] } else { &plus.odd[..] };
            let brute_minus = if r % 2 == 0 { &minus.even[..] } else { &minus.odd[..] };
            let mut total = CycNum::zero(p);
            for ((name, c), b) in names.iter().zip(&closed).zip(brute) {
                total = &total + c;
                checks.push(Check::count(name.clone(), c.clone(), *b, p));
            }
            // J1 is contained in J2's count in the literal definition, so the parts
            // J2..J6 partition GF(q); I1..I4 partition it directly
            if r % 2 == 1 {
                total = &total - &closed[0];
            }
            checks.push(Check::count("sum of parts", total, q, p));
            let holds = closed
                .iter()
                .zip(brute_minus)
                .all(|(c, b)| *c == CycNum::from_integer(p, *b as i64));
            variants.push(("E with the minus sign".to_string(), holds));
            if r % 2 == 1 {
                variants.push((
                    "J2 without the E != 0 condition".to_string(),
                    closed[1] == CycNum::from_integer(p, plus.j2_literal as i64),
                ));
            }
        }
        LemmaId::ZeroCenterPartition => {
            let ctx = centered_context(params, true)?;
            let ta = trace_table(field, &ctx.alpha)?;
            let mut counts = [0u64; 4];
            for (v, t) in values.iter().zip(&ta) {
                if *v == 0 {
                    continue;
                }
                let sq = fp.eta_bar(fp.neg(*v)) == 1;
                let idx = match (*t == 0, sq) {
                    (true, true) => 0,
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => 3,
                };
                counts[idx] += 1;
            }
            let half_p1 = |x: CycNum| halve(x.scale_int(pi - 1));
            let odd_first = [
                half_p1(term(p, 1, m - 2, 0) + term(p, e, m - 1, -(r - 1))),
                half_p1(term(p, 1, m - 2, 0) - term(p, e, m - 1, -(r - 1))),
            ];
            let rest = halve(term(p, (pi - 1) * (pi - 1), m - 2, 0));
            let first = if r % 2 == 1 {
                odd_first.clone()
            } else {
                let v = half_p1(term(p, 1, m - 2, 0) - term(p, e, m - 1, -r));
                [v.clone(), v]
            };
            let closed = [first[0].clone(), first[1].clone(), rest.clone(), rest];
            let names = [
                "#{f!=0, Tr=0, -f SQ}",
                "#{f!=0, Tr=0, -f NSQ}",
                "#{f Tr!=0, -f SQ}",
                "#{f Tr!=0, -f NSQ}",
            ];
            for i in 0..4 {
                checks.push(Check::count(names[i], closed[i].clone(), counts[i], p));
            }
            if r % 2 == 0 {
                let holds = (0..2).all(|i| odd_first[i] == CycNum::from_integer(p, counts[i] as i64));
                variants.push(("odd-rank formula applied at even rank".to_string(), holds));
            }
        }
    }
    Ok(Evaluation {
        branch,
        checks,
        variants,
    })
}

fn s4_closed(ctx: &AlphaContext, d: &BetaData, sb: ShiftBranch) -> CycNum {
    let (p, m, r, e) = (ctx.p(), ctx.m(), ctx.r(), ctx.eps());
    let fp = ctx.analysis.prime_field();
    let z = |v: u32| CycNum::zeta_pow(p, v as i64);
    match sb {
        ShiftBranch::ZeroZero => {
            term(p, e, m + 1, -r) * z(fp.neg(ctx.f_x_alpha.unwrap()))
        }
        ShiftBranch::ZeroTrace => CycNum::zero(p),
        ShiftBranch::NonzeroEZero | ShiftBranch::NonzeroE => {
            let fxb = d.f_x_beta.unwrap();
            term(p, e * fp.eta_bar(fp.neg(fxb)) as i64, m, -(r - 1)) * z(d.e.unwrap())
        }
        ShiftBranch::BetaOutside => term(p, e, m, -r) * z(fp.neg(ctx.f_x_alpha.unwrap())),
        ShiftBranch::UnionNonzero | ShiftBranch::UnionZero => {
            term(p, e, m, -r) * z(fp.neg(d.f_x_prime.unwrap()))
        }
        ShiftBranch::Other => CycNum::zero(p),
    }
}

fn s5_closed(ctx: &AlphaContext, d: &BetaData, sb: ShiftBranch) -> CycNum {
    let (p, m, r, e) = (ctx.p(), ctx.m(), ctx.r(), ctx.eps());
    let pi = p as i64;
    let fp = ctx.analysis.prime_field();
    let eta_neg = |v: u32| fp.eta_bar(fp.neg(v)) as i64;
    let eta_a = ctx.eta_neg_f_x_alpha();
    use ShiftBranch::*;
    match (ctx.case(), sb) {
        (AlphaCase::EvenZero, ZeroZero) => term(p, e * (pi - 1), m + 1, -r),
        (AlphaCase::EvenZero, NonzeroE) => term(p, e * eta_neg(1), m, -(r - 2)),
        (AlphaCase::EvenZero, BetaOutside) => term(p, e * (pi - 1), m, -r),
        (AlphaCase::EvenNonzero, ZeroZero) => term(p, -e, m + 1, -r),
        (AlphaCase::EvenNonzero, NonzeroE) => {
            let fe = fp.mul(d.f_x_beta.unwrap(), d.e.unwrap());
            term(p, e * eta_neg(fe), m, -(r - 2))
        }
        (AlphaCase::EvenNonzero, BetaOutside) => term(p, -e, m, -r),
        (AlphaCase::OddZero, NonzeroEZero) => {
            term(p, e * eta_neg(d.f_x_beta.unwrap()) * (pi - 1), m, -(r - 1))
        }
        (AlphaCase::OddZero, NonzeroE) => term(p, -e * eta_neg(d.f_x_beta.unwrap()), m, -(r - 1)),
        (AlphaCase::OddNonzero, ZeroZero) => term(p, e * eta_a, m + 1, -(r - 1)),
        (AlphaCase::OddNonzero, NonzeroEZero) => term(p, e * eta_a * (pi - 1), m, -(r - 1)),
        (AlphaCase::OddNonzero, NonzeroE) => term(p, -e * eta_neg(d.f_x_beta.unwrap()), m, -(r - 1)),
        (AlphaCase::OddNonzero, BetaOutside) => term(p, e * eta_a, m, -(r - 1)),
        (AlphaCase::OutsideEven, UnionNonzero) => term(p, -e, m, -r),
        (AlphaCase::OutsideEven, UnionZero) => term(p, (pi - 1) * e, m, -r),
        (AlphaCase::OutsideOdd, UnionNonzero) => {
            term(p, e * eta_neg(d.f_x_prime.unwrap()), m, -(r - 1))
        }
        _ => CycNum::zero(p),
    }
}

struct PartitionTally {
    even: [u64; 4],
    odd: [u64; 6],
    j2_literal: u64,
}

/// I1..I4 and J1..J6 from value and trace tables, with E(x) = -f(x_alpha) +/- Tr(alpha x)^2 / (4 f(x)).
fn partition_counts(
    fp: &crate::prime::PrimeField,
    values: &[u32],
    ta: &[u32],
    fxa: u32,
    plus: bool,
) -> PartitionTally {
    let mut even = [0u64; 4];
    let mut odd = [0u64; 6];
    let mut j2_literal = 0;
    let class_a = fp.eta_bar(fxa);
    for (&v, &t) in values.iter().zip(ta) {
        if v == 0 {
            if t == 0 {
                even[0] += 1;
                odd[2] += 1;
            } else {
                even[1] += 1;
                odd[3] += 1;
            }
            continue;
        }
        let frac = fp.div(fp.mul(t, t), fp.mul(4 % fp.p(), v)).expect("v != 0");
        let ex = if plus {
            fp.sub(frac, fxa)
        } else {
            fp.neg(fp.add(frac, fxa))
        };
        let same = fp.eta_bar(v) == class_a;
        if same {
            j2_literal += 1;
        }
        if ex == 0 {
            even[1] += 1;
            odd[4] += 1;
            if same {
                odd[0] += 1;
            }
        } else {
            if fp.eta_bar(fp.mul(v, ex)) == -1 {
                even[2] += 1;
            } else {
                even[3] += 1;
            }
            if same {
                odd[1] += 1;
            } else {
                odd[5] += 1;
            }
        }
    }
    PartitionTally {
        even,
        odd,
        j2_literal,
    }
}

fn partition_closed(p: u32, m: i64, r: i64, e: i64, eta: i64) -> Vec<CycNum> {
    let pi = p as i64;
    let one = || term(p, 1, 0, 0);
    if r % 2 == 0 {
        let x = term(p, e, 1, -r);
        vec![
            term(p, 1, m - 2, 0),
            term(p, pi - 1, m - 2, 0) * (one().scale_int(2) + x.clone()),
            halve(term(p, pi - 1, m - 1, 0) * (one() - x.clone())),
            halve(term(p, (pi - 1) * (pi - 2), m - 2, 0) * (one() + x)),
        ]
    } else {
        let h = term(p, e * eta, 0, -(r - 1));
        let j1 = term(p, pi - 1, m - 2, 0) * (one() + h.scale_int(pi - 1));
        vec![
            j1.clone(),
            halve(term(p, (pi - 1) * (pi - 2), m - 2, 0) * (one() - h.clone())),
            term(p, 1, m - 2, 0) + term(p, pi - 1, m - 2, 0) * h.clone(),
            term(p, pi - 1, m - 2, 0) * (one() - h.clone()),
            j1,
            halve(term(p, pi - 1, m - 1, 0) * (one() - h)),
        ]
    }
}

/// Settings for a seeded registry sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub degrees: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub max_attempts: usize,
}

impl SweepConfig {
    pub fn new(primes: Vec<u64>, degrees: Vec<usize>, trials: usize, seed: u64) -> Self {
        SweepConfig {
            primes,
            degrees,
            trials,
            seed,
            max_attempts: 600,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BranchTally {
    pub trials: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VariantTally {
    pub holds: u64,
    pub fails: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub p: u64,
    pub m: usize,
    pub modulus: String,
    pub coeffs: String,
    pub alpha: Option<u64>,
    pub beta: Option<u64>,
    pub t: Option<u32>,
    pub binary: Option<[u32; 3]>,
    pub branch: String,
    pub quantity: String,
    pub closed: String,
    pub brute: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub summary: String,
    pub trials: usize,
    pub all_equal: bool,
    pub min_branch_coverage: u64,
    pub branches: BTreeMap<String, BranchTally>,
    pub missing_branches: Vec<String>,
    pub variants: BTreeMap<String, VariantTally>,
    pub counterexamples: Vec<Counterexample>,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub all_equal: bool,
    pub lemmas: Vec<LemmaReport>,
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over a simple combination
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random forms and branch-seeking element proposals.
pub struct Sampler<'a> {
    fields: &'a [ExtField],
    pub rng: ChaCha8Rng,
}

impl<'a> Sampler<'a> {
    pub fn new(fields: &'a [ExtField], seed: u64) -> Self {
        Sampler {
            fields,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn field(&mut self) -> ExtField {
        let i = self.rng.gen_range(0..self.fields.len());
        self.fields[i].clone()
    }

    /// A form of random rank: usually a sum of k trace squares, sometimes fully random.
    pub fn form(&mut self, field: &ExtField) -> QuadraticFunction {
        let m = field.m();
        let p = field.p() as u32;
        if self.rng.gen_ratio(1, 5) {
            let coeffs = (0..m).map(|_| field.random(&mut self.rng)).collect();
            return QuadraticFunction::new(field, coeffs).expect("m coefficients");
        }
        let k = self.rng.gen_range(1..=m);
        let terms: Vec<(u32, FieldElement)> = (0..k)
            .map(|_| (self.rng.gen_range(1..p), field.random_nonzero(&mut self.rng)))
            .collect();
        sum_of_trace_squares(field, &terms).expect("m coefficients")
    }

    fn zero_of(&mut self, a: &FormAnalysis, tries: usize) -> Option<FieldElement> {
        let field = a.field();
        (0..tries)
            .map(|_| field.random(&mut self.rng))
            .find(|x| a.evaluate(x) == 0)
    }

    /// -2 L_f(x), so that x_gamma is x up to the kernel.
    fn image_of(a: &FormAnalysis, x: &FieldElement) -> FieldElement {
        let field = a.field();
        field.scale(field.prime_field().neg(2), &a.func().lf_apply(x))
    }

    pub fn alpha(&mut self, a: &FormAnalysis) -> FieldElement {
        let field = a.field();
        match self.rng.gen_range(0..3) {
            0 => field.random(&mut self.rng),
            1 => {
                let x = field.random(&mut self.rng);
                Self::image_of(a, &x)
            }
            _ => match self.zero_of(a, 64) {
                Some(x) => Self::image_of(a, &x),
                None => field.random(&mut self.rng),
            },
        }
    }

    pub fn beta(&mut self, a: &FormAnalysis, alpha: &FieldElement) -> FieldElement {
        let field = a.field();
        let fp = *field.prime_field();
        let p = fp.p();
        let kind = self.rng.gen_range(0..7);
        let x = match kind {
            0 => return field.random_nonzero(&mut self.rng),
            1 | 3 => field.random(&mut self.rng),
            2 | 4 => self.zero_of(a, 64).unwrap_or_else(|| field.random(&mut self.rng)),
            5 => (0..64)
                .map(|_| field.random(&mut self.rng))
                .find(|x| field.trace(&field.mul(alpha, x)) == 0)
                .unwrap_or_else(|| field.random(&mut self.rng)),
            _ => (0..256)
                .map(|_| field.random(&mut self.rng))
                .find(|x| a.evaluate(x) == 0 && field.trace(&field.mul(alpha, x)) == 0)
                .unwrap_or_else(|| field.random(&mut self.rng)),
        };
        let gamma = Self::image_of(a, &x);
        if kind == 3 || kind == 4 {
            // beta = (alpha - gamma) / z0 puts alpha - z0 beta in the image
            let z0 = self.rng.gen_range(1..p);
            let inv = fp.inv(z0).expect("unit");
            field.scale(inv, &field.sub(alpha, &gamma))
        } else {
            gamma
        }
    }

    pub fn params(&mut self, a: &FormAnalysis) -> LemmaParams {
        let p = a.field().p() as u32;
        let alpha = self.alpha(a);
        let beta = self.beta(a, &alpha);
        let t = self.rng.gen_range(1..p);
        let fp = a.prime_field();
        let x = self.rng.gen_range(0..p);
        let y = self.rng.gen_range(0..p);
        let binary = if x != 0 && self.rng.gen_bool(0.5) {
            [x, y, fp.div(fp.mul(y, y), x).expect("x != 0")]
        } else {
            [x, y, self.rng.gen_range(0..p)]
        };
        LemmaParams {
            analysis: a.clone(),
            alpha: Some(alpha),
            beta: Some(beta),
            t: Some(t),
            binary: Some(binary),
        }
    }
}

struct TrialOutcome {
    params: LemmaParams,
    result: Result<Evaluation>,
}

fn run_trial(id: LemmaId, fields: &[ExtField], cfg: &SweepConfig, trial: usize) -> Option<TrialOutcome> {
    let branches = id.branches();
    let target = &branches[trial % branches.len()];
    let mut s = Sampler::new(fields, mix(cfg.seed, id as u64 + 1, trial as u64));
    let mut fallback: Option<LemmaParams> = None;
    let mut analysis: Option<FormAnalysis> = None;
    for attempt in 0..cfg.max_attempts.max(1) {
        if attempt % 8 == 0 || analysis.is_none() {
            let field = s.field();
            analysis = Some(s.form(&field).analyze());
        }
        let a = analysis.as_ref().unwrap();
        if a.rank == 0 {
            analysis = None;
            continue;
        }
        let params = s.params(a);
        let Ok(branch) = lemma_branch(id, &params) else {
            continue;
        };
        if &branch == target {
            fallback = Some(params);
            break;
        }
        if fallback.is_none() {
            fallback = Some(params);
        }
    }
    let params = fallback?;
    let result = lemma_oracle(id, &params);
    Some(TrialOutcome { params, result })
}

fn build_fields(cfg: &SweepConfig) -> Result<Vec<ExtField>> {
    let mut fields = Vec::new();
    for &p in &cfg.primes {
        for &m in &cfg.degrees {
            let f = ExtField::new(p, m, None)?;
            f.check_enumerable()?;
            fields.push(f);
        }
    }
    if fields.is_empty() {
        return Err(Error::Config("no (p, m) pairs to sample from".into()));
    }
    Ok(fields)
}

/// Run `cfg.trials` seeded trials of one identity.
pub fn sweep_lemma(id: LemmaId, cfg: &SweepConfig) -> Result<LemmaReport> {
    let fields = build_fields(cfg)?;
    Ok(sweep_with_fields(id, cfg, &fields))
}

fn sweep_with_fields(id: LemmaId, cfg: &SweepConfig, fields: &[ExtField]) -> LemmaReport {
    let outcomes: Vec<Option<TrialOutcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(id, fields, cfg, t))
        .collect();
    let mut branches: BTreeMap<String, BranchTally> = id
        .branches()
        .into_iter()
        .map(|b| (b, BranchTally::default()))
        .collect();
    let mut variants: BTreeMap<String, VariantTally> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    let mut errors = Vec::new();
    let mut all_equal = true;
    for (trial, out) in outcomes.into_iter().enumerate() {
        let Some(out) = out else {
            all_equal = false;
            errors.push(format!("trial {trial}: no instance satisfied the preconditions"));
            continue;
        };
        let ev = match out.result {
            Ok(ev) => ev,
            Err(e) => {
                all_equal = false;
                errors.push(format!("trial {trial}: {e}"));
                continue;
            }
        };
        let tally = branches.entry(ev.branch.clone()).or_default();
        tally.trials += 1;
        let bad: Vec<&Check> = ev.checks.iter().filter(|c| !c.equal()).collect();
        if !bad.is_empty() {
            tally.mismatches += 1;
            all_equal = false;
        }
        for c in bad {
            if counterexamples.len() < 10 {
                counterexamples.push(counterexample(trial, &out.params, &ev.branch, c));
            }
        }
        for (name, holds) in ev.variants {
            let v = variants.entry(name).or_default();
            if holds {
                v.holds += 1;
            } else {
                v.fails += 1;
            }
        }
    }
    let missing_branches: Vec<String> = branches
        .iter()
        .filter(|(_, t)| t.trials == 0)
        .map(|(b, _)| b.clone())
        .collect();
    let min_branch_coverage = branches.values().map(|t| t.trials).min().unwrap_or(0);
    LemmaReport {
        id: id.name().to_string(),
        summary: id.summary().to_string(),
        trials: cfg.trials,
        all_equal,
        min_branch_coverage,
        branches,
        missing_branches,
        variants,
        counterexamples,
        errors,
    }
}

fn counterexample(trial: usize, params: &LemmaParams, branch: &str, c: &Check) -> Counterexample {
    let field = params.analysis.field();
    Counterexample {
        trial,
        p: field.p(),
        m: field.m(),
        modulus: field.modulus_text(),
        coeffs: params.analysis.func().coeffs_text(),
        alpha: params.alpha.map(|a| field.encode(&a)),
        beta: params.beta.map(|b| field.encode(&b)),
        t: params.t,
        binary: params.binary,
        branch: branch.to_string(),
        quantity: c.quantity.clone(),
        closed: c.closed.to_string(),
        brute: c.brute.to_string(),
    }
}

/// Sweep every identity (or the given subset) with one configuration.
pub fn sweep(ids: &[LemmaId], cfg: &SweepConfig) -> Result<SweepReport> {
    let fields = build_fields(cfg)?;
    let lemmas: Vec<LemmaReport> = ids
        .iter()
        .map(|id| sweep_with_fields(*id, cfg, &fields))
        .collect();
    Ok(SweepReport {
        config: cfg.clone(),
        all_equal: lemmas.iter().all(|l| l.all_equal),
        lemmas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::preset_trace_square;

    fn gf9_params(alpha: Option<FieldElement>, t: Option<u32>) -> LemmaParams {
        let f = ExtField::new(3, 2, None).unwrap();
        LemmaParams {
            analysis: preset_trace_square(&f, &f.one()).unwrap().analyze(),
            alpha,
            beta: None,
            t,
            binary: None,
        }
    }

    #[test]
    fn binary_form_degenerate_example() {
        let mut params = gf9_params(None, None);
        params.binary = Some([1, 0, 0]);
        let ev = lemma_oracle(LemmaId::BinaryFormSum, &params).unwrap();
        assert_eq!(ev.branch, "degenerate");
        assert!(ev.all_equal());
        // 3 (z - z^2) = 3 + 6z in the reduced basis
        assert_eq!(ev.checks[0].closed.to_string(), "3 + 6*z");
    }

    #[test]
    fn level_count_example() {
        let params = gf9_params(None, Some(1));
        let ev = lemma_oracle(LemmaId::LevelCount, &params).unwrap();
        assert_eq!(ev.checks[0].closed, CycNum::from_integer(3, 2));
        assert!(ev.all_equal());
    }

    #[test]
    fn missing_and_violated_params() {
        let params = gf9_params(None, None);
        assert_eq!(
            lemma_oracle(LemmaId::LevelCount, &params).unwrap_err(),
            Error::MissingParam("t")
        );
        let f = ExtField::new(3, 2, None).unwrap();
        let params = gf9_params(Some(f.one()), Some(1));
        assert!(matches!(
            lemma_oracle(LemmaId::ZeroCenterPartition, &params),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn ids_round_trip() {
        for id in LemmaId::ALL {
            assert_eq!(LemmaId::parse(id.name()).unwrap(), id);
        }
        assert!(LemmaId::parse("nope").is_err());
    }

    #[test]
    fn small_sweep_is_clean_and_deterministic() {
        let cfg = SweepConfig::new(vec![3], vec![3, 4], 12, 5);
        let a = sweep(&LemmaId::ALL, &cfg).unwrap();
        for l in &a.lemmas {
            assert!(l.all_equal, "{}: {:?} {:?}", l.id, l.counterexamples, l.errors);
        }
        let b = sweep(&LemmaId::ALL, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
