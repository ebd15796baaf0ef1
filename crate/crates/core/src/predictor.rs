//! Closed-form length and weight distribution of C_D, and verification against
//! the exhaustively computed code.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{generator_matrix, weight_of, DefiningSet, Enumerator};
use crate::counting::{halve, term, to_count, AlphaCase, AlphaContext};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::FpMatrix;
use crate::quadform::FormAnalysis;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub case: AlphaCase,
    pub alpha_in_image: bool,
    pub rank: usize,
    pub rank_parity: &'static str,
    pub sign: i8,
    /// "zero" or "nonzero"; absent when alpha is outside the image.
    pub f_x_alpha_class: Option<&'static str>,
    /// eta_bar(-f(x_alpha)) when f(x_alpha) != 0.
    pub eta_neg_f_x_alpha: Option<i8>,
}

pub fn classify(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<CaseLabel> {
    if analysis.rank == 0 {
        return Err(Error::DegenerateForm);
    }
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    Ok(label_of(&AlphaContext::new(analysis, *alpha)))
}

fn label_of(ctx: &AlphaContext) -> CaseLabel {
    let case = ctx.case();
    CaseLabel {
        case,
        alpha_in_image: case.alpha_in_image(),
        rank: ctx.analysis.rank,
        rank_parity: if case.rank_even() { "even" } else { "odd" },
        sign: ctx.analysis.sign,
        f_x_alpha_class: ctx
            .f_x_alpha
            .map(|v| if v == 0 { "zero" } else { "nonzero" }),
        eta_neg_f_x_alpha: ctx
            .f_x_alpha
            .filter(|&v| v != 0)
            .map(|_| ctx.eta_neg_f_x_alpha() as i8),
    }
}

fn checked_context(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<AlphaContext> {
    classify(analysis, alpha)?;
    Ok(AlphaContext::new(analysis, *alpha))
}

/// Predicted length n = |D|.
pub fn predict_length(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<u64> {
    let ctx = checked_context(analysis, alpha)?;
    to_count(&length_closed(&ctx), "length")
}

fn length_closed(ctx: &AlphaContext) -> CycNum {
    let (p, m, r, e) = (ctx.p(), ctx.m(), ctx.r(), ctx.eps());
    let pi = p as i64;
    let one = CycNum::one(p);
    let body = match ctx.case() {
        AlphaCase::EvenNonzero => term(p, 1, m - 1, 0) - term(p, e, m - 1, -r),
        AlphaCase::EvenZero => term(p, 1, m - 1, 0) + term(p, e * (pi - 1), m - 1, -r),
        AlphaCase::OddNonzero => {
            term(p, 1, m - 1, 0) + term(p, e * ctx.eta_neg_f_x_alpha(), m - 1, -(r - 1))
        }
        AlphaCase::OddZero | AlphaCase::OutsideEven | AlphaCase::OutsideOdd => {
            term(p, 1, m - 1, 0)
        }
    };
    body - one
}

/// Unresolved (weight, multiplicity) rows of the table for this case, zero word excluded.
pub fn table_rows(ctx: &AlphaContext) -> Vec<(CycNum, CycNum)> {
    let (p, m, r, e) = (ctx.p(), ctx.m(), ctx.r(), ctx.eps());
    let pi = p as i64;
    let pw = |k: i64| term(p, 1, k, 0);
    let c = |v: i64| CycNum::from_integer(p, v);
    let base = pw(m - 2).scale_int(pi - 1);
    match ctx.case() {
        AlphaCase::EvenNonzero => {
            let x = term(p, e, 1, -r);
            let y = term(p, e, 0, -r);
            vec![
                (
                    base.clone(),
                    pw(r - 2) + halve(pw(r - 1).scale_int(pi - 1) * (c(1) - &x)) - c(1),
                ),
                (
                    pw(m - 2) * (c(pi - 1) - &x),
                    pw(r - 2).scale_int(pi - 1) * (c(2) + &x),
                ),
                (
                    pw(m - 2) * (c(pi - 1) - x.scale_int(2)),
                    halve(pw(r - 2).scale_int((pi - 1) * (pi - 2)) * (c(1) + &x)),
                ),
                (base * (c(1) - y), pw(m) - pw(r)),
            ]
        }
        AlphaCase::EvenZero => {
            let x = term(p, e, 1, -r);
            let y = term(p, e, 0, -r);
            vec![
                (
                    base.clone(),
                    pw(r - 2) * (c(1) + x.scale_int(pi - 1)) - c(1),
                ),
                (
                    base.clone() * (c(1) + &x),
                    pw(r - 2).scale_int(pi - 1) * (c(2) - &x),
                ),
                (
                    pw(m - 2) * (c(pi - 1) + x.scale_int(pi - 2)),
                    pw(r - 2).scale_int((pi - 1) * (pi - 1)),
                ),
                (base * (c(1) + y.scale_int(pi - 1)), pw(m) - pw(r)),
            ]
        }
        AlphaCase::OddNonzero => {
            let q = term(p, e * ctx.eta_neg_f_x_alpha(), 0, -(r - 1));
            vec![
                (base.clone(), pw(r - 2) * (c(1) + q.scale_int(pi - 1)) - c(1)),
                (
                    pw(m - 2) * (c(pi - 1) + q.scale_int(pi)),
                    pw(r - 2).scale_int(pi - 1) * (c(1) - &q),
                ),
                (
                    pw(m - 2) * (c(pi - 1) + &q),
                    pw(r - 2).scale_int(pi - 1) * (c(1) + q.scale_int(pi - 1)),
                ),
                (
                    pw(m - 2) * (c(pi - 1) + q.scale_int(pi + 1)),
                    halve(pw(r - 2).scale_int((pi - 1) * (pi - 2)) * (c(1) - &q)),
                ),
                (
                    base * (c(1) + &q),
                    halve(pw(r - 1).scale_int(pi - 1) * (c(1) - &q)) + pw(m) - pw(r),
                ),
            ]
        }
        AlphaCase::OddZero => {
            let x = term(p, e, 0, -(r - 1));
            let half_sq = halve(pw(r - 2).scale_int((pi - 1) * (pi - 1)));
            vec![
                (
                    pw(m - 2) * (c(pi - 1) - x.scale_int(pi - 1)),
                    halve(pw(r - 2).scale_int(pi - 1) * (c(1) + x.scale_int(pi))),
                ),
                (
                    pw(m - 2) * (c(pi - 1) + x.scale_int(pi - 1)),
                    halve(pw(r - 2).scale_int(pi - 1) * (c(1) - x.scale_int(pi))),
                ),
                (pw(m - 2) * (c(pi - 1) + &x), half_sq.clone()),
                (pw(m - 2) * (c(pi - 1) - &x), half_sq),
                (base, pw(r - 1) + pw(m) - pw(r) - c(1)),
            ]
        }
        AlphaCase::OutsideEven => {
            let x = term(p, e, 0, -r);
            vec![
                (
                    base.clone() * (c(1) - &x),
                    pw(r - 1).scale_int(pi - 1) * (c(1) + x.scale_int(pi - 1)),
                ),
                (
                    base.clone() + pw(m - 2) * &x,
                    pw(r - 1).scale_int((pi - 1) * (pi - 1)) * (c(1) - &x),
                ),
                (base, pw(m) - pw(r).scale_int(pi - 1) - c(1)),
            ]
        }
        AlphaCase::OutsideOdd => {
            let x = term(p, e, 0, -(r - 1));
            let half_sq = halve(pw(r - 1).scale_int((pi - 1) * (pi - 1)));
            vec![
                (
                    pw(m - 2) * (c(pi - 1) - &x),
                    half_sq.clone() * (c(1) + &x),
                ),
                (pw(m - 2) * (c(pi - 1) + &x), half_sq.clone() * (c(1) - &x)),
                (base, pw(m) - pw(r - 1).scale_int((pi - 1) * (pi - 1)) - c(1)),
            ]
        }
    }
}

/// One table row evaluated at concrete parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvedRow {
    /// None when the row has multiplicity 0 and its weight is not an integer.
    pub weight: Option<u64>,
    pub multiplicity: u64,
}

/// Code parameters in the shape shared by predictions and computations.
/// Multiplicities count beta in GF(q), so they total p^m even if some
/// nonzero beta gives the zero word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub length: u64,
    pub dimension: usize,
    pub min_distance: Option<u64>,
    pub weight_distribution: BTreeMap<u64, u64>,
    pub enumerator: String,
}

impl CodeSummary {
    pub fn new(length: u64, dimension: usize, counts: BTreeMap<u64, u64>) -> Self {
        CodeSummary {
            length,
            dimension,
            min_distance: counts.keys().copied().find(|&w| w > 0),
            enumerator: Enumerator(counts.clone()).to_string(),
            weight_distribution: counts,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub case: CaseLabel,
    /// Rows in table order after evaluation, before merging; zero multiplicities kept.
    pub rows: Vec<ResolvedRow>,
    pub summary: CodeSummary,
}

fn log_p(p: u64, mut v: u64) -> Option<usize> {
    let mut k = 0;
    while v > 1 {
        if v % p != 0 {
            return None;
        }
        v /= p;
        k += 1;
    }
    Some(k)
}

pub fn predict(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<Prediction> {
    let ctx = checked_context(analysis, alpha)?;
    let length = to_count(&length_closed(&ctx), "length")?;
    let mut rows = Vec::new();
    let mut counts = BTreeMap::from([(0u64, 1u64)]);
    for (i, (w, a)) in table_rows(&ctx).into_iter().enumerate() {
        let multiplicity = to_count(&a, &format!("multiplicity of row {}", i + 1))?;
        let weight = match to_count(&w, &format!("weight of row {}", i + 1)) {
            Ok(w) => Some(w),
            Err(_) if multiplicity == 0 => None,
            Err(e) => return Err(e),
        };
        rows.push(ResolvedRow {
            weight,
            multiplicity,
        });
        if let (Some(w), true) = (weight, multiplicity > 0) {
            *counts.entry(w).or_insert(0) += multiplicity;
        }
    }
    // a row of weight 0 means nonzero beta with c_beta = 0: p^(m-k) words map to zero
    let dimension = log_p(ctx.field().p(), counts[&0])
        .map(|drop| analysis.m() - drop)
        .ok_or_else(|| Error::NonIntegralPrediction(format!("zero-word count {}", counts[&0])))?;
    Ok(Prediction {
        case: label_of(&ctx),
        rows,
        summary: CodeSummary::new(length, dimension, counts),
    })
}

/// Exhaustive parameters of C_D; tolerates nonzero beta with zero weight.
pub fn compute(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<(DefiningSet, CodeSummary)> {
    let set = DefiningSet::new(analysis, *alpha)?;
    let field = set.field().clone();
    let weights: Vec<u64> = (0..field.q())
        .into_par_iter()
        .map(|v| weight_of(&set, &field.decode_unchecked(v)))
        .collect();
    let mut counts = BTreeMap::new();
    for w in weights {
        *counts.entry(w).or_insert(0u64) += 1;
    }
    let dimension = match generator_matrix(&set) {
        Ok(g) => g.rank(),
        Err(Error::DimensionCollapse { .. }) => {
            let m = field.m();
            FpMatrix::from_fn(*field.prime_field(), m, set.len(), |j, i| {
                field.trace(&field.mul(&field.basis(j), &set.elements()[i]))
            })
            .rank()
        }
        Err(e) => return Err(e),
    };
    let summary = CodeSummary::new(set.len() as u64, dimension, counts);
    Ok((set, summary))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub quantity: String,
    pub predicted: Option<u64>,
    pub computed: Option<u64>,
}

/// Every disagreement between two summaries.
pub fn compare(predicted: &CodeSummary, computed: &CodeSummary) -> Vec<Witness> {
    let mut out = Vec::new();
    let mut push = |q: String, a: Option<u64>, b: Option<u64>| {
        if a != b {
            out.push(Witness {
                quantity: q,
                predicted: a,
                computed: b,
            });
        }
    };
    push("length".into(), Some(predicted.length), Some(computed.length));
    push(
        "dimension".into(),
        Some(predicted.dimension as u64),
        Some(computed.dimension as u64),
    );
    push("min_distance".into(), predicted.min_distance, computed.min_distance);
    let mut weights: Vec<u64> = predicted
        .weight_distribution
        .keys()
        .chain(computed.weight_distribution.keys())
        .copied()
        .collect();
    weights.sort_unstable();
    weights.dedup();
    for w in weights {
        push(
            format!("A_{w}"),
            predicted.weight_distribution.get(&w).copied(),
            computed.weight_distribution.get(&w).copied(),
        );
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub case: CaseLabel,
    pub predicted: CodeSummary,
    pub computed: CodeSummary,
    #[serde(rename = "match")]
    pub matches: bool,
    pub witnesses: Vec<Witness>,
}

/// Predict from the tables, build the code exhaustively, and compare everything.
pub fn verify(analysis: &FormAnalysis, alpha: &FieldElement) -> Result<Verdict> {
    let prediction = predict(analysis, alpha)?;
    let (_, computed) = compute(analysis, alpha)?;
    let witnesses = compare(&prediction.summary, &computed);
    Ok(Verdict {
        case: prediction.case,
        predicted: prediction.summary,
        computed,
        matches: witnesses.is_empty(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtField;
    use crate::quadform::{preset_trace_square, preset_trace_square_minus};

    fn example_one() -> (FormAnalysis, FieldElement) {
        let f = ExtField::new(3, 4, None).unwrap();
        let a = preset_trace_square(&f, &f.one()).unwrap().analyze();
        let alpha = (1..f.q())
            .map(|v| f.decode_unchecked(v))
            .find(|x| f.trace(x) != 0)
            .unwrap();
        (a, alpha)
    }

    #[test]
    fn table_one_at_example_one() {
        let (a, alpha) = example_one();
        let pred = predict(&a, &alpha).unwrap();
        assert_eq!(pred.case.case, AlphaCase::EvenNonzero);
        assert_eq!(pred.summary.length, 29);
        assert_eq!(pred.summary.enumerator, "1+44z^18+30z^21+6z^24");
        // r = m drops the last row
        assert_eq!(pred.rows[3].multiplicity, 0);
        let v = verify(&a, &alpha).unwrap();
        assert!(v.matches, "{:?}", v.witnesses);
    }

    #[test]
    fn perturbed_prediction_is_caught() {
        let (a, alpha) = example_one();
        let v = verify(&a, &alpha).unwrap();
        let mut bad = v.predicted.weight_distribution.clone();
        *bad.get_mut(&21).unwrap() += 2;
        let bad = CodeSummary::new(v.predicted.length, 4, bad);
        let w = compare(&bad, &v.computed);
        assert_eq!(
            w,
            vec![Witness {
                quantity: "A_21".into(),
                predicted: Some(32),
                computed: Some(30)
            }]
        );
    }

    #[test]
    fn classify_routes_presets() {
        let f = ExtField::new(3, 5, None).unwrap();
        let a = preset_trace_square_minus(&f, &f.one()).unwrap().analyze();
        // Tr(1) = 5 = 2 in GF(3), so alpha = 1 is outside the image
        let c = classify(&a, &f.one()).unwrap();
        assert!(!c.alpha_in_image);
        assert_eq!(c.case, AlphaCase::OutsideEven);
        assert_eq!(predict_length(&a, &f.one()).unwrap(), 80);
        let inside = (1..f.q())
            .map(|v| f.decode_unchecked(v))
            .find(|x| f.trace(x) == 0)
            .unwrap();
        assert!(classify(&a, &inside).unwrap().alpha_in_image);
        assert_eq!(classify(&a, &f.zero()).unwrap_err(), Error::ZeroAlpha);
        let zero = crate::quadform::QuadraticFunction::new(&f, vec![f.zero(); 5])
            .unwrap()
            .analyze();
        assert_eq!(classify(&zero, &f.one()).unwrap_err(), Error::DegenerateForm);
    }

    #[test]
    fn collapsed_dimension_is_predicted() {
        // p = 3, rank 2 = m, sign -1: one table weight evaluates to 0
        let f = ExtField::new(3, 2, None).unwrap();
        let elems = f.elements().unwrap();
        let mut seen = false;
        for u in elems.iter().filter(|x| !x.is_zero()) {
            let a = preset_trace_square(&f, u).unwrap().analyze();
            for alpha in elems.iter().filter(|x| !x.is_zero()) {
                let v = verify(&a, alpha).unwrap();
                assert!(v.matches, "{:?}", v.witnesses);
                if v.computed.dimension < 2 {
                    seen = true;
                    assert!(v.predicted.weight_distribution[&0] > 1);
                }
            }
        }
        assert!(seen);
    }
}
