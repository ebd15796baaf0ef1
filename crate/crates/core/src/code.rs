//! The code C_D = {(Tr(beta d))_{d in D} : beta in GF(q)} with
//! D = {x != 0 : f(x) = Tr(alpha x)}.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::counting::AlphaContext;
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::linalg::FpMatrix;
use crate::quadform::FormAnalysis;

#[derive(Clone, Debug)]
pub struct DefiningSet {
    analysis: FormAnalysis,
    alpha: FieldElement,
    elements: Vec<FieldElement>,
}

impl DefiningSet {
    /// Enumerate D in ascending encoding order.
    pub fn new(analysis: &FormAnalysis, alpha: FieldElement) -> Result<Self> {
        let field = analysis.field();
        field.check_enumerable()?;
        let f = analysis.func();
        let elements: Vec<FieldElement> = (1..field.q())
            .into_par_iter()
            .map(|v| field.decode_unchecked(v))
            .filter(|x| f.evaluate(x) == field.trace(&field.mul(&alpha, x)))
            .collect();
        if elements.is_empty() {
            return Err(Error::EmptyDefiningSet);
        }
        Ok(DefiningSet {
            analysis: analysis.clone(),
            alpha,
            elements,
        })
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn analysis(&self) -> &FormAnalysis {
        &self.analysis
    }

    pub fn field(&self) -> &ExtField {
        self.analysis.field()
    }

    /// alpha = 0 reduces to the homogeneous construction.
    pub fn is_homogeneous(&self) -> bool {
        self.alpha.is_zero()
    }
}

/// Number of d in D with Tr(beta d) != 0.
pub fn weight_of(set: &DefiningSet, beta: &FieldElement) -> u64 {
    let field = set.field();
    set.elements
        .iter()
        .filter(|d| field.trace(&field.mul(beta, d)) != 0)
        .count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Naive,
    Analytic,
    Both,
}

impl FromStr for WeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(WeightMode::Naive),
            "analytic" => Ok(WeightMode::Analytic),
            "both" => Ok(WeightMode::Both),
            _ => Err(Error::Parse(format!("unknown weight mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub n: u64,
    pub k: usize,
    /// weight -> multiplicity, including weight 0.
    pub counts: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn from_weights(n: u64, k: usize, weights: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = BTreeMap::new();
        for w in weights {
            *counts.entry(w).or_insert(0) += 1;
        }
        WeightDistribution { n, k, counts }
    }

    pub fn d_min(&self) -> Option<u64> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn first_moment(&self) -> u128 {
        self.counts.iter().map(|(w, c)| *w as u128 * *c as u128).sum()
    }

    pub fn enumerator(&self) -> String {
        Enumerator(self.counts.clone()).to_string()
    }
}

/// Per-beta weights for every beta in GF(q), indexed by encoding.
pub fn naive_weights(set: &DefiningSet) -> Vec<u64> {
    let field = set.field();
    (0..field.q())
        .into_par_iter()
        .map(|v| weight_of(set, &field.decode_unchecked(v)))
        .collect()
}

/// wt(c_beta) = N_f(alpha) - N_f,beta(alpha) from the closed forms.
pub fn analytic_weights(set: &DefiningSet) -> Result<Vec<u64>> {
    let field = set.field();
    let ctx = AlphaContext::new(&set.analysis, set.alpha);
    let total = ctx.predict_n_f_alpha()?;
    let mut out = vec![0u64; field.q() as usize];
    let rest: Vec<Result<u64>> = (1..field.q())
        .into_par_iter()
        .map(|v| {
            let hit = ctx.predict_n_f_beta_alpha(&field.decode_unchecked(v))?;
            total.checked_sub(hit).ok_or_else(|| {
                Error::NegativeMultiplicity(format!("weight for beta {v}: {total} - {hit}"))
            })
        })
        .collect();
    for (i, w) in rest.into_iter().enumerate() {
        out[i + 1] = w?;
    }
    Ok(out)
}

/// Weight distribution of C_D; refuses codes whose dimension drops below m.
pub fn weight_distribution(set: &DefiningSet, mode: WeightMode) -> Result<WeightDistribution> {
    let weights = match mode {
        WeightMode::Naive => naive_weights(set),
        WeightMode::Analytic => analytic_weights(set)?,
        WeightMode::Both => {
            let naive = naive_weights(set);
            let analytic = analytic_weights(set)?;
            if let Some(i) = (0..naive.len()).find(|&i| naive[i] != analytic[i]) {
                return Err(Error::PathsDisagree {
                    beta: i as u64,
                    naive: naive[i],
                    analytic: analytic[i],
                });
            }
            naive
        }
    };
    if let Some(i) = (1..weights.len()).find(|&i| weights[i] == 0) {
        return Err(Error::DimensionCollapse { witness: i as u64 });
    }
    Ok(WeightDistribution::from_weights(
        set.len() as u64,
        set.field().m(),
        weights,
    ))
}

/// Rows are c_beta for the polynomial basis beta_j = x^j.
pub fn generator_matrix(set: &DefiningSet) -> Result<FpMatrix> {
    let field = set.field();
    let m = field.m();
    let g = FpMatrix::from_fn(*field.prime_field(), m, set.len(), |j, i| {
        field.trace(&field.mul(&field.basis(j), &set.elements[i]))
    });
    if g.rank() < m {
        // a dependency among the rows is a nonzero beta with c_beta = 0
        let dep = g.transpose().kernel();
        let witness = field.encode(&field.from_digits(&dep[0])?);
        return Err(Error::DimensionCollapse { witness });
    }
    Ok(g)
}

/// Weight census of the full row space of `g` (p^rows codewords).
pub fn weight_census(g: &FpMatrix) -> WeightDistribution {
    let fp = *g.field();
    let p = fp.p() as u64;
    let (k, n) = (g.rows(), g.cols());
    let total = p.pow(k as u32);
    let weights: Vec<u64> = (0..total)
        .into_par_iter()
        .map(|mut v| {
            let mut word = vec![0u32; n];
            for j in 0..k {
                let c = (v % p) as u32;
                v /= p;
                if c != 0 {
                    for (w, &x) in word.iter_mut().zip(g.row(j)) {
                        *w = fp.add(*w, fp.mul(c, x));
                    }
                }
            }
            word.iter().filter(|&&x| x != 0).count() as u64
        })
        .collect();
    WeightDistribution::from_weights(n as u64, k, weights)
}

/// Weight enumerator `1+44z^18+30z^21+6z^24`, weight 0 first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumerator(pub BTreeMap<u64, u64>);

impl fmt::Display for Enumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&w, &a) in &self.0 {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if w == 0 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}z^{w}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for Enumerator {
    type Err = Error;

    /// Accepts `A`, `z`, `Az`, `z^w`, `Az^w` terms joined by `+`; whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad weight enumerator `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut counts = BTreeMap::new();
        if compact.is_empty() {
            return Err(bad());
        }
        for t in compact.split('+') {
            let (coeff, w) = match t.find('z') {
                None => (t, 0),
                Some(i) => {
                    let exp = &t[i + 1..];
                    let w = if exp.is_empty() {
                        1
                    } else {
                        exp.strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(bad)?
                    };
                    (&t[..i], w)
                }
            };
            let a: u64 = if coeff.is_empty() && w > 0 {
                1
            } else {
                coeff.parse().map_err(|_| bad())?
            };
            *counts.entry(w).or_insert(0) += a;
        }
        counts.retain(|_, a| *a > 0);
        Ok(Enumerator(counts))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeReport {
    pub p: u64,
    pub m: usize,
    pub modulus: String,
    pub coeffs: String,
    pub alpha: String,
    pub length: u64,
    pub dimension: usize,
    pub min_distance: Option<u64>,
    pub weight_distribution: BTreeMap<u64, u64>,
    pub enumerator: String,
}

impl CodeReport {
    pub fn new(set: &DefiningSet, wd: &WeightDistribution) -> Self {
        let field = set.field();
        CodeReport {
            p: field.p(),
            m: field.m(),
            modulus: field.modulus_text(),
            coeffs: set.analysis.func().coeffs_text(),
            alpha: field.encode(&set.alpha).to_string(),
            length: wd.n,
            dimension: wd.k,
            min_distance: wd.d_min(),
            weight_distribution: wd.counts.clone(),
            enumerator: wd.enumerator(),
        }
    }
}

/// One row per line, digits space-separated.
pub fn generator_csv(g: &FpMatrix) -> String {
    let mut out = String::new();
    for row in g.to_rows() {
        let line: Vec<String> = row.iter().map(|d| d.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::preset_trace_square;

    fn trace_square(p: u64, m: usize) -> FormAnalysis {
        let f = ExtField::new(p, m, None).unwrap();
        preset_trace_square(&f, &f.one()).unwrap().analyze()
    }

    #[test]
    fn gf9_small_set() {
        let a = trace_square(3, 2);
        let f = a.field().clone();
        // alpha with f(x_alpha) != 0 gives N_f(alpha) = 2
        let alpha = f
            .elements()
            .unwrap()
            .into_iter()
            .find(|al| {
                !al.is_zero()
                    && AlphaContext::new(&a, *al).f_x_alpha.is_some_and(|v| v != 0)
            })
            .unwrap();
        let set = DefiningSet::new(&a, alpha).unwrap();
        assert_eq!(set.len(), 1);
        let zero = DefiningSet::new(&a, f.zero()).unwrap();
        assert!(zero.is_homogeneous());
        let brute = (1..9)
            .filter(|&v| a.evaluate(&f.decode_unchecked(v)) == 0)
            .count();
        assert_eq!(zero.len(), brute);
    }

    #[test]
    fn empty_set_rejected() {
        // Tr(x^2) = Tr(alpha x) has only x = 0 for some alpha over GF(3)
        let f = ExtField::new(3, 1, None).unwrap();
        let a = preset_trace_square(&f, &f.one()).unwrap().analyze();
        let err = (0..3)
            .map(|v| DefiningSet::new(&a, f.decode_unchecked(v)))
            .find(|r| r.is_err());
        assert_eq!(err.unwrap().unwrap_err(), Error::EmptyDefiningSet);
    }

    #[test]
    fn example_three_by_eight() {
        let a = trace_square(3, 3);
        let f = a.field().clone();
        let set = DefiningSet::new(&a, f.one()).unwrap();
        let wd = weight_distribution(&set, WeightMode::Both).unwrap();
        assert_eq!(wd.n, 8);
        assert_eq!(wd.enumerator(), "1+6z^4+6z^5+8z^6+6z^7");
        let g = generator_matrix(&set).unwrap();
        assert_eq!(g.rank(), 3);
        assert_eq!(weight_census(&g), wd);
        // c_(beta0 + beta1) = row 0 + row 1
        let b = f.add(&f.basis(0), &f.basis(1));
        let fp = *f.prime_field();
        for (i, d) in set.elements().iter().enumerate() {
            assert_eq!(f.trace(&f.mul(&b, d)), fp.add(g.get(0, i), g.get(1, i)));
        }
        assert_eq!(weight_of(&set, &f.zero()), 0);
    }

    #[test]
    fn collapse_reported_with_witness() {
        // f = Tr(x)^2 with alpha = 0: D lies in the trace-zero line, so c_1 = 0
        let f = ExtField::new(3, 2, None).unwrap();
        let func = crate::quadform::sum_of_trace_squares(&f, &[(1, f.one())]).unwrap();
        let a = func.analyze();
        let set = DefiningSet::new(&a, f.zero()).unwrap();
        match weight_distribution(&set, WeightMode::Naive) {
            Err(Error::DimensionCollapse { witness }) => {
                assert_eq!(weight_of(&set, &f.decode_unchecked(witness)), 0);
            }
            other => panic!("expected collapse, got {other:?}"),
        }
        assert!(matches!(
            generator_matrix(&set),
            Err(Error::DimensionCollapse { .. })
        ));
    }

    #[test]
    fn enumerator_text() {
        let e: Enumerator = "1+44z^18+30z^21+6z^24".parse().unwrap();
        assert_eq!(e.0, BTreeMap::from([(0, 1), (18, 44), (21, 30), (24, 6)]));
        assert_eq!(e.to_string(), "1+44z^18+30z^21+6z^24");
        assert_eq!(Enumerator(BTreeMap::from([(0, 1)])).to_string(), "1");
        let loose: Enumerator = "1 + z + 3 z^2".parse().unwrap();
        assert_eq!(loose.0, BTreeMap::from([(0, 1), (1, 1), (2, 3)]));
        assert!("1+xz".parse::<Enumerator>().is_err());
        assert!("".parse::<Enumerator>().is_err());
    }
}
