//! Ten reference examples of the construction, recomputed exhaustively and
//! compared against their printed parameters and weight enumerators.

use serde::Serialize;

use crate::code::Enumerator;
use crate::counting::AlphaContext;
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::predictor::{compute, predict, CaseLabel, CodeSummary};
use crate::quadform::Preset;

/// How alpha is chosen for an example.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRule {
    /// The element of GF(p)* with value 1.
    One,
    /// Smallest encoding with Tr(alpha) != 0.
    SmallestTraceNonzero,
    /// g^k for the root g of the given modulus.
    GeneratorPower(u64),
}

impl AlphaRule {
    fn text(self) -> String {
        match self {
            AlphaRule::One => "1 (in GF(p)*)".into(),
            AlphaRule::SmallestTraceNonzero => "smallest encoding with Tr(alpha) != 0".into(),
            AlphaRule::GeneratorPower(k) => format!("g^{k}, g a root of the modulus"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExampleSpec {
    pub id: &'static str,
    pub p: u64,
    pub m: usize,
    pub modulus: Option<&'static str>,
    pub preset: &'static str,
    pub alpha: AlphaRule,
    pub length: u64,
    pub dimension: usize,
    pub min_distance: u64,
    pub enumerator: &'static str,
}

pub const EXAMPLES: [ExampleSpec; 10] = [
    ExampleSpec {
        id: "ex1",
        p: 3,
        m: 4,
        modulus: None,
        preset: "square:u=1",
        alpha: AlphaRule::SmallestTraceNonzero,
        length: 29,
        dimension: 4,
        min_distance: 18,
        enumerator: "1+44z^18+30z^21+6z^24",
    },
    ExampleSpec {
        id: "ex2",
        p: 3,
        m: 6,
        modulus: None,
        preset: "square:u=1",
        alpha: AlphaRule::One,
        length: 260,
        dimension: 6,
        min_distance: 162,
        enumerator: "1+98z^162+324z^171+306z^180",
    },
    ExampleSpec {
        id: "ex3",
        p: 3,
        m: 5,
        modulus: None,
        preset: "square:u=1",
        alpha: AlphaRule::One,
        length: 71,
        dimension: 5,
        min_distance: 42,
        enumerator: "1+30z^42+60z^45+90z^48+42z^51+20z^54",
    },
    ExampleSpec {
        id: "ex4",
        p: 3,
        m: 3,
        modulus: None,
        preset: "square:u=1",
        alpha: AlphaRule::One,
        length: 8,
        dimension: 3,
        min_distance: 4,
        enumerator: "1+6z^4+6z^5+8z^6+6z^7",
    },
    ExampleSpec {
        id: "ex5",
        p: 3,
        m: 5,
        modulus: Some("1,2,0,0,0,1"),
        preset: "square-minus:v=1",
        alpha: AlphaRule::GeneratorPower(2),
        length: 89,
        dimension: 5,
        min_distance: 54,
        enumerator: "1+44z^54+162z^60+30z^63+6z^72",
    },
    ExampleSpec {
        id: "ex6",
        p: 3,
        m: 5,
        modulus: Some("1,2,0,0,0,1"),
        preset: "square-minus:v=1",
        alpha: AlphaRule::GeneratorPower(3),
        length: 62,
        dimension: 5,
        min_distance: 62,
        enumerator: "1+42z^36+162z^42+36z^45+2z^54",
    },
    ExampleSpec {
        id: "ex7",
        p: 3,
        m: 4,
        modulus: Some("2,0,0,2,1"),
        preset: "square-minus:v=1",
        alpha: AlphaRule::GeneratorPower(5),
        length: 17,
        dimension: 4,
        min_distance: 6,
        enumerator: "1+4z^4+8z^9+66z^12+2z^15",
    },
    ExampleSpec {
        id: "ex8",
        p: 3,
        m: 4,
        modulus: Some("2,0,0,2,1"),
        preset: "square-minus:v=1",
        alpha: AlphaRule::GeneratorPower(13),
        length: 26,
        dimension: 4,
        min_distance: 12,
        enumerator: "1+6z^12+6z^15+62z^18+6z^21",
    },
    ExampleSpec {
        id: "ex9",
        p: 3,
        m: 5,
        modulus: None,
        preset: "square-minus:v=1",
        alpha: AlphaRule::One,
        length: 26,
        dimension: 5,
        min_distance: 15,
        enumerator: "1+24z^15+44z^18+12z^21",
    },
    ExampleSpec {
        id: "ex10",
        p: 3,
        m: 4,
        modulus: None,
        preset: "square-minus:v=1",
        alpha: AlphaRule::One,
        length: 80,
        dimension: 4,
        min_distance: 51,
        enumerator: "1+120z^51+80z^54+42z^60",
    },
];

pub fn example(id: &str) -> Result<&'static ExampleSpec> {
    EXAMPLES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Parse(format!("unknown example `{id}` (expected ex1..ex10)")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrintedParams {
    pub length: u64,
    pub dimension: usize,
    pub min_distance: u64,
    pub enumerator: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapCheck {
    pub m: usize,
    pub alpha: String,
    pub computed: CodeSummary,
    /// The printed length and enumerator both equal the code computed at this m.
    pub reconciles: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleResult {
    pub id: String,
    pub p: u64,
    pub m: usize,
    pub modulus: String,
    pub form: String,
    pub alpha_rule: String,
    pub alpha: String,
    pub case: CaseLabel,
    pub printed: PrintedParams,
    pub computed: CodeSummary,
    pub prediction_matches_computed: bool,
    pub verdict: &'static str,
    /// Printed quantities that differ from the computed code.
    pub discrepancies: Vec<String>,
    /// Contradictions inside the printed data alone.
    pub printed_inconsistencies: Vec<String>,
    /// Recomputation at the degree implied by the printed enumerator total.
    pub swapped_m: Option<SwapCheck>,
    pub notes: Vec<String>,
}

fn build_field(spec: &ExampleSpec, m: usize) -> Result<ExtField> {
    let modulus = if m == spec.m { spec.modulus } else { None };
    let field = ExtField::with_modulus_text(spec.p, m, modulus)?;
    if modulus.is_some() {
        let x = field.basis(1);
        return field.with_generator(x);
    }
    Ok(field)
}

fn choose_alpha(field: &ExtField, rule: AlphaRule) -> Result<FieldElement> {
    match rule {
        AlphaRule::One => Ok(field.one()),
        AlphaRule::SmallestTraceNonzero => (1..field.q())
            .map(|v| field.decode_unchecked(v))
            .find(|x| field.trace(x) != 0)
            .ok_or(Error::ZeroAlpha),
        AlphaRule::GeneratorPower(k) => Ok(field.pow(&field.generator(), k)),
    }
}

fn printed_inconsistencies(spec: &ExampleSpec, printed: &Enumerator) -> Vec<String> {
    let mut out = Vec::new();
    let p = spec.p;
    let total: u64 = printed.0.values().sum();
    let expected = p.pow(spec.dimension as u32);
    if total != expected {
        out.push(format!(
            "enumerator coefficients total {total}, but dimension {} needs {expected}",
            spec.dimension
        ));
    }
    let smallest = printed.0.keys().copied().find(|&w| w > 0);
    if smallest != Some(spec.min_distance) {
        out.push(format!(
            "stated minimum distance {} but the smallest nonzero weight in the enumerator is {}",
            spec.min_distance,
            smallest.map_or("none".into(), |w| w.to_string())
        ));
    }
    if let Some(&w) = printed.0.keys().last() {
        if w > spec.length {
            out.push(format!("weight {w} exceeds the stated length {}", spec.length));
        }
    }
    if total == expected {
        let moment: u128 = printed.0.iter().map(|(w, a)| *w as u128 * *a as u128).sum();
        let want = spec.length as u128 * (p as u128 - 1) * p.pow(spec.dimension as u32 - 1) as u128;
        if moment != want {
            out.push(format!(
                "first power moment of the enumerator is {moment}, but length {} needs {want}",
                spec.length
            ));
        }
    }
    out
}

/// Recompute one example and compare with its printed data.
pub fn run_example(spec: &ExampleSpec) -> Result<ExampleResult> {
    let field = build_field(spec, spec.m)?;
    let preset = Preset::parse(&field, spec.preset)?;
    let analysis = preset.build(&field)?.analyze();
    let alpha = choose_alpha(&field, spec.alpha)?;
    let prediction = predict(&analysis, &alpha)?;
    let (_, computed) = compute(&analysis, &alpha)?;
    let printed_enum: Enumerator = spec.enumerator.parse()?;
    let printed = PrintedParams {
        length: spec.length,
        dimension: spec.dimension,
        min_distance: spec.min_distance,
        enumerator: spec.enumerator.to_string(),
    };

    let mut discrepancies = Vec::new();
    if computed.length != spec.length {
        discrepancies.push(format!("length: printed {}, computed {}", spec.length, computed.length));
    }
    if computed.dimension != spec.dimension {
        discrepancies.push(format!(
            "dimension: printed {}, computed {}",
            spec.dimension, computed.dimension
        ));
    }
    if computed.min_distance != Some(spec.min_distance) {
        discrepancies.push(format!(
            "minimum distance: printed {}, computed {}",
            spec.min_distance,
            computed.min_distance.map_or("none".into(), |d| d.to_string())
        ));
    }
    if computed.weight_distribution != printed_enum.0 {
        discrepancies.push(format!(
            "enumerator: printed {}, computed {}",
            printed_enum, computed.enumerator
        ));
    }

    let total: u64 = printed_enum.0.values().sum();
    let implied_m = (1..=12usize).find(|&k| spec.p.pow(k as u32) == total);
    let swapped_m = match implied_m {
        Some(k) if k != spec.m && !discrepancies.is_empty() => {
            let f2 = build_field(spec, k)?;
            let a2 = Preset::parse(&f2, spec.preset)?.build(&f2)?.analyze();
            let alpha2 = choose_alpha(&f2, spec.alpha)?;
            let (_, c2) = compute(&a2, &alpha2)?;
            let reconciles = c2.length == spec.length && c2.weight_distribution == printed_enum.0;
            Some(SwapCheck {
                m: k,
                alpha: f2.encode(&alpha2).to_string(),
                computed: c2,
                reconciles,
            })
        }
        _ => None,
    };

    let mut notes = Vec::new();
    if spec.alpha == AlphaRule::SmallestTraceNonzero {
        let ctx = AlphaContext::new(&analysis, alpha);
        notes.push(format!(
            "Tr(alpha) = {}, f(x_alpha) = {}",
            field.trace(&alpha),
            ctx.f_x_alpha.map_or("undefined".into(), |v| v.to_string())
        ));
        let disagree = (1..field.q())
            .map(|v| field.decode_unchecked(v))
            .filter(|a| {
                let fx = AlphaContext::new(&analysis, *a).f_x_alpha;
                (field.trace(a) != 0) != fx.is_some_and(|v| v != 0)
            })
            .count();
        notes.push(if disagree == 0 {
            "Tr(alpha) != 0 coincides with f(x_alpha) != 0 for every nonzero alpha".to_string()
        } else {
            format!("Tr(alpha) != 0 and f(x_alpha) != 0 differ for {disagree} nonzero alpha")
        });
    }
    if let Some(s) = &swapped_m {
        notes.push(format!(
            "the printed enumerator totals {total} = {}^{}; recomputing at m = {} {}",
            spec.p,
            s.m,
            s.m,
            if s.reconciles {
                "reproduces the printed length and enumerator"
            } else {
                "does not reproduce the printed data"
            }
        ));
    }

    Ok(ExampleResult {
        id: spec.id.to_string(),
        p: spec.p,
        m: spec.m,
        modulus: field.modulus_text(),
        form: spec.preset.to_string(),
        alpha_rule: spec.alpha.text(),
        alpha: field.encode(&alpha).to_string(),
        case: prediction.case.clone(),
        printed,
        prediction_matches_computed: prediction.summary == computed,
        computed,
        verdict: if discrepancies.is_empty() { "match" } else { "mismatch" },
        discrepancies,
        printed_inconsistencies: printed_inconsistencies(spec, &printed_enum),
        swapped_m,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub matches: usize,
    pub flagged: Vec<String>,
    pub examples: Vec<ExampleResult>,
}

pub fn run_battery() -> Result<BatteryReport> {
    let examples = EXAMPLES.iter().map(run_example).collect::<Result<Vec<_>>>()?;
    let flagged = examples
        .iter()
        .filter(|e| e.verdict != "match")
        .map(|e| e.id.clone())
        .collect();
    Ok(BatteryReport {
        matches: examples.iter().filter(|e| e.verdict == "match").count(),
        flagged,
        examples,
    })
}
