use std::collections::BTreeMap;

use proptest::prelude::*;
use qcode_core::code::{
    analytic_weights, naive_weights, weight_distribution, weight_of, DefiningSet, Enumerator,
    WeightMode,
};
use qcode_core::counting::{predict_n_f_alpha, predict_n_f_beta_alpha, AlphaCase, AlphaContext};
use qcode_core::field::{ExtField, FieldElement};
use qcode_core::quadform::FormAnalysis;
use qcode_core::registry::Sampler;

const SMALL: [(u64, usize); 6] = [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)];

fn instance(which: usize, seed: u64) -> Option<(FormAnalysis, FieldElement)> {
    let (p, m) = SMALL[which];
    let fields = [ExtField::new(p, m, None).unwrap()];
    let mut s = Sampler::new(&fields, seed);
    let field = s.field();
    let a = s.form(&field).analyze();
    if a.rank == 0 {
        return None;
    }
    let alpha = s.alpha(&a);
    (!alpha.is_zero()).then_some((a, alpha))
}

fn brute_count(a: &FormAnalysis, alpha: &FieldElement, beta: Option<&FieldElement>) -> u64 {
    let field = a.field();
    (0..field.q())
        .map(|v| field.decode_unchecked(v))
        .filter(|x| a.evaluate(x) == field.trace(&field.mul(alpha, x)))
        .filter(|x| beta.is_none_or(|b| field.trace(&field.mul(b, x)) == 0))
        .count() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerator_round_trips(counts in prop::collection::btree_map(0u64..200, 1u64..10_000, 1..8)) {
        let e = Enumerator(counts.clone());
        let parsed: Enumerator = e.to_string().parse().unwrap();
        prop_assert_eq!(parsed.0, counts);
    }

    #[test]
    fn length_is_solution_count_minus_one(which in 0..SMALL.len(), seed: u64) {
        if let Some((a, alpha)) = instance(which, seed) {
            let set = DefiningSet::new(&a, alpha).unwrap();
            prop_assert_eq!(set.len() as u64 + 1, brute_count(&a, &alpha, None));
            prop_assert_eq!(set.len() as u64 + 1, predict_n_f_alpha(&a, &alpha).unwrap());
        }
    }

    #[test]
    fn weight_is_difference_of_counts(which in 0..SMALL.len(), seed: u64, pick: u64) {
        if let Some((a, alpha)) = instance(which, seed) {
            let field = a.field().clone();
            let beta = field.decode_unchecked(1 + pick % (field.q() - 1));
            let set = DefiningSet::new(&a, alpha).unwrap();
            let n = brute_count(&a, &alpha, None);
            let nb = brute_count(&a, &alpha, Some(&beta));
            prop_assert_eq!(weight_of(&set, &beta), n - nb);
            prop_assert_eq!(nb, predict_n_f_beta_alpha(&a, &alpha, &beta).unwrap());
        }
    }

    #[test]
    fn weight_is_constant_on_prime_multiples(which in 0..SMALL.len(), seed: u64, pick: u64) {
        if let Some((a, alpha)) = instance(which, seed) {
            let field = a.field().clone();
            let beta = field.decode_unchecked(1 + pick % (field.q() - 1));
            let set = DefiningSet::new(&a, alpha).unwrap();
            let w = weight_of(&set, &beta);
            for z in 2..field.p() as u32 {
                prop_assert_eq!(weight_of(&set, &field.scale(z, &beta)), w);
            }
        }
    }

    #[test]
    fn distribution_invariant_under_prime_scaling_of_alpha(which in 0..SMALL.len(), seed: u64) {
        if let Some((a, alpha)) = instance(which, seed) {
            let field = a.field().clone();
            let base = naive_distribution(&a, alpha);
            for z in 2..field.p() as u32 {
                prop_assert_eq!(&naive_distribution(&a, field.scale(z, &alpha)), &base);
            }
        }
    }

    #[test]
    fn outside_image_length(which in 0..SMALL.len(), seed: u64) {
        if let Some((a, alpha)) = instance(which, seed) {
            let case = AlphaContext::new(&a, alpha).case();
            if matches!(case, AlphaCase::OutsideEven | AlphaCase::OutsideOdd) {
                let field = a.field();
                let set = DefiningSet::new(&a, alpha).unwrap();
                prop_assert_eq!(set.len() as u64, field.q() / field.p() - 1);
            }
        }
    }

    #[test]
    fn naive_and_analytic_paths_agree(which in 0..SMALL.len(), seed: u64) {
        if let Some((a, alpha)) = instance(which, seed) {
            let set = DefiningSet::new(&a, alpha).unwrap();
            prop_assert_eq!(naive_weights(&set), analytic_weights(&set).unwrap());
        }
    }
}

fn naive_distribution(a: &FormAnalysis, alpha: FieldElement) -> BTreeMap<u64, u64> {
    let set = DefiningSet::new(a, alpha).unwrap();
    let mut counts = BTreeMap::new();
    for w in naive_weights(&set) {
        *counts.entry(w).or_insert(0) += 1;
    }
    counts
}

#[test]
fn weight_distribution_modes_match_on_trace_square() {
    let field = ExtField::new(3, 4, None).unwrap();
    let a = qcode_core::quadform::preset_trace_square(&field, &field.one())
        .unwrap()
        .analyze();
    let set = DefiningSet::new(&a, field.one()).unwrap();
    let naive = weight_distribution(&set, WeightMode::Naive).unwrap();
    let analytic = weight_distribution(&set, WeightMode::Analytic).unwrap();
    let both = weight_distribution(&set, WeightMode::Both).unwrap();
    assert_eq!(naive, analytic);
    assert_eq!(naive, both);
    assert_eq!(naive.total(), 81);
}

#[test]
fn sampler_yields_usable_instances() {
    let found = (0..SMALL.len())
        .flat_map(|w| (0..20u64).map(move |s| (w, s)))
        .filter(|&(w, s)| instance(w, s).is_some())
        .count();
    assert!(found >= 60, "only {found} of 120 seeds usable");
}
