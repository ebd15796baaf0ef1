use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qcode_core::catalog::{example, run_battery, run_example};
use qcode_core::code::{
    generator_csv, generator_matrix, weight_distribution, CodeReport, DefiningSet, WeightMode,
};
use qcode_core::predictor::{predict, verify};
use qcode_core::registry::{sweep, LemmaId, SweepConfig};
use qcode_core::sweep::{theorem_sweep, TheoremSweepConfig};
use qcode_core::{Error, ExtField, FieldElement, FormAnalysis, Preset, QuadraticFunction};

/// Few-weight linear codes from inhomogeneous quadratic functions over GF(p^m).
#[derive(Parser, Debug)]
#[command(name = "qcode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, sign, Gram matrix and kernel/image of a quadratic function.
    Analyze(FormArgs),
    /// Build C_D exhaustively and report its parameters.
    Build(CodeArgs),
    /// Closed-form length and weight distribution.
    Predict(CodeArgs),
    /// Compare the prediction with the exhaustively built code (exit 1 on mismatch).
    Verify(CodeArgs),
    /// Check the counting identities against enumeration on seeded instances.
    Lemmas(LemmaArgs),
    /// Recompute the ten reference examples and check their stated parameters.
    Examples(ExampleArgs),
    /// Seeded prediction-vs-brute-force sweep over random (f, alpha).
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: usize,
    /// Modulus coefficients "c0,c1,...,cm" (monic, irreducible).
    #[arg(long)]
    modulus: Option<String>,
    /// Generator used by "g^k" syntax, as an encoding (must be primitive).
    #[arg(long)]
    generator: Option<String>,
}

#[derive(Args, Debug)]
struct FormArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Coefficients a_0,...,a_(m-1) of f(x) = sum_i Tr(a_i x^(p^i + 1)), as encodings.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    coeffs: Option<String>,
    /// Named form: square:u=<elem> or square-minus:v=<elem>.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[command(flatten)]
    form: FormArgs,
    /// alpha as an encoding or g^k.
    #[arg(long)]
    alpha: String,
    /// Weight computation path for build.
    #[arg(long, default_value = "both")]
    mode: String,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5])]
    p: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4, 5])]
    m: Vec<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 60)]
    trials: usize,
    /// Identity ids (comma separated); all when omitted.
    #[arg(long, value_delimiter = ',')]
    lemma: Vec<String>,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// One example id (ex1..ex10); all when omitted.
    #[arg(long)]
    id: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5])]
    p: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4, 5])]
    m: Vec<usize>,
    #[arg(long)]
    seed: u64,
    /// Number of (f, alpha) instances.
    #[arg(long, default_value_t = 300)]
    trials: usize,
}

struct Output {
    body: String,
    code: u8,
}

fn json_of<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn build_field(a: &FieldArgs) -> Result<ExtField, Error> {
    let field = ExtField::with_modulus_text(a.p, a.m, a.modulus.as_deref())?;
    match &a.generator {
        Some(g) => {
            let g = field.parse_element(g)?;
            field.with_generator(g)
        }
        None => Ok(field),
    }
}

fn build_form(a: &FormArgs) -> Result<(ExtField, QuadraticFunction, Option<Preset>), Error> {
    let field = build_field(&a.field)?;
    match (&a.coeffs, &a.preset) {
        (Some(c), None) => {
            let f = QuadraticFunction::parse_coeffs(&field, c)?;
            Ok((field, f, None))
        }
        (None, Some(p)) => {
            let preset = Preset::parse(&field, p)?;
            let f = preset.build(&field)?;
            Ok((field, f, Some(preset)))
        }
        _ => Err(Error::Config("give exactly one of --coeffs and --preset".into())),
    }
}

fn build_code_inputs(a: &CodeArgs) -> Result<(ExtField, FormAnalysis, FieldElement), Error> {
    let (field, f, _) = build_form(&a.form)?;
    let alpha = field.parse_element(&a.alpha)?;
    field.check_enumerable()?;
    Ok((field, f.analyze(), alpha))
}

fn only(format: Format, allowed: &[Format]) -> Result<(), Error> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Error::Config(format!("format {format:?} is not available for this command")))
    }
}

fn matrix_text(rows: &[Vec<u32>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_analyze(a: &FormArgs, format: Format) -> Result<Output, Error> {
    only(format, &[Format::Json, Format::Text])?;
    let (field, f, preset) = build_form(a)?;
    let an = f.analyze();
    let preset_check = preset.map(|pr| {
        let (rank, sign) = pr.expected_rank_sign(&field);
        json!({
            "preset": pr.text(&field),
            "expected_rank": rank,
            "expected_sign": sign,
            "agrees": rank == an.rank && sign == an.sign,
        })
    });
    let enc = |v: &[FieldElement]| v.iter().map(|x| field.encode(x)).collect::<Vec<_>>();
    let report = json!({
        "p": field.p(),
        "m": field.m(),
        "modulus": field.modulus_text(),
        "coeffs": f.coeffs_text(),
        "gram": an.gram.to_rows(),
        "rank": an.rank,
        "delta": an.delta,
        "delta_sign": an.delta_sign,
        "sign": an.sign,
        "kernel_dimension": an.ker_basis.len(),
        "image_dimension": an.im_basis.len(),
        "kernel_basis": enc(&an.ker_basis),
        "image_basis": enc(&an.im_basis),
        "preset_check": preset_check,
    });
    let body = match format {
        Format::Json => json_of(&report),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "GF({}^{}) modulus {}", field.p(), field.m(), field.modulus_text());
            let _ = writeln!(s, "coeffs {}", f.coeffs_text());
            let _ = writeln!(s, "rank {}  sign {:+}  delta {}", an.rank, an.sign, an.delta);
            let _ = writeln!(s, "Gram matrix:\n{}", matrix_text(&an.gram.to_rows()));
            let _ = writeln!(
                s,
                "dim Ker(L_f) = {}, dim Im(L_f) = {}",
                an.ker_basis.len(),
                an.im_basis.len()
            );
            if let Some(pc) = report.get("preset_check").filter(|v| !v.is_null()) {
                let _ = writeln!(s, "preset formulas agree: {}", pc["agrees"]);
            }
            s
        }
    };
    Ok(Output { body, code: 0 })
}

fn cmd_build(a: &CodeArgs, format: Format) -> Result<Output, Error> {
    let mode: WeightMode = a.mode.parse()?;
    let (_, an, alpha) = build_code_inputs(a)?;
    let set = DefiningSet::new(&an, alpha)?;
    let body = match format {
        Format::Csv => generator_csv(&generator_matrix(&set)?),
        Format::Json => {
            let wd = weight_distribution(&set, mode)?;
            json_of(&CodeReport::new(&set, &wd))
        }
        Format::Text => {
            let wd = weight_distribution(&set, mode)?;
            format!(
                "[{}, {}, {}]\n{}\n",
                wd.n,
                wd.k,
                wd.d_min().map_or("-".into(), |d| d.to_string()),
                wd.enumerator()
            )
        }
    };
    Ok(Output { body, code: 0 })
}

fn cmd_predict(a: &CodeArgs, format: Format) -> Result<Output, Error> {
    only(format, &[Format::Json, Format::Text])?;
    let (_, an, alpha) = build_code_inputs(a)?;
    let pred = predict(&an, &alpha)?;
    let body = match format {
        Format::Json => json_of(&pred),
        _ => {
            let s = &pred.summary;
            format!(
                "case {}\n[{}, {}, {}]\n{}\n",
                pred.case.case,
                s.length,
                s.dimension,
                s.min_distance.map_or("-".into(), |d| d.to_string()),
                s.enumerator
            )
        }
    };
    Ok(Output { body, code: 0 })
}

fn cmd_verify(a: &CodeArgs, format: Format) -> Result<Output, Error> {
    only(format, &[Format::Json, Format::Text])?;
    let (_, an, alpha) = build_code_inputs(a)?;
    let v = verify(&an, &alpha)?;
    let code = if v.matches { 0 } else { 1 };
    let body = match format {
        Format::Json => json_of(&v),
        _ => {
            let mut s = format!(
                "{} ({})\npredicted {}\ncomputed  {}\n",
                if v.matches { "MATCH" } else { "MISMATCH" },
                v.case.case,
                v.predicted.enumerator,
                v.computed.enumerator
            );
            for w in &v.witnesses {
                let _ = writeln!(s, "  {}: predicted {:?}, computed {:?}", w.quantity, w.predicted, w.computed);
            }
            s
        }
    };
    Ok(Output { body, code })
}

fn cmd_lemmas(a: &LemmaArgs, format: Format) -> Result<Output, Error> {
    only(format, &[Format::Json, Format::Text])?;
    let ids = if a.lemma.is_empty() {
        LemmaId::ALL.to_vec()
    } else {
        a.lemma
            .iter()
            .map(|s| LemmaId::parse(s.trim()))
            .collect::<Result<Vec<_>, _>>()?
    };
    if a.trials == 0 {
        return Err(Error::Config("--trials must be positive".into()));
    }
    let cfg = SweepConfig::new(a.p.clone(), a.m.clone(), a.trials, a.seed);
    let report = sweep(&ids, &cfg)?;
    let code = if report.all_equal { 0 } else { 1 };
    let body = match format {
        Format::Json => json_of(&report),
        _ => {
            let mut s = String::new();
            for l in &report.lemmas {
                let _ = writeln!(
                    s,
                    "{:<26} {:<5} trials {:>4}  min branch {:>3}  missing {:?}",
                    l.id,
                    if l.all_equal { "ok" } else { "FAIL" },
                    l.trials,
                    l.min_branch_coverage,
                    l.missing_branches
                );
                for (name, t) in &l.variants {
                    let _ = writeln!(s, "    variant \"{name}\": holds {}, fails {}", t.holds, t.fails);
                }
            }
            s
        }
    };
    Ok(Output { body, code })
}

fn cmd_examples(a: &ExampleArgs, format: Format) -> Result<Output, Error> {
    only(format, &[Format::Json, Format::Text])?;
    let results = match &a.id {
        Some(id) => vec![run_example(example(id)?)?],
        None => run_battery()?.examples,
    };
    let body = match (format, &a.id) {
        (Format::Json, Some(_)) => json_of(&results[0]),
        (Format::Json, None) => json_of(&run_battery_from(results)),
        _ => {
            let mut s = String::new();
            for r in &results {
                let c = &r.computed;
                let _ = writeln!(
                    s,
                    "{:<5} {:<8} [{}, {}, {}] {}",
                    r.id,
                    r.verdict,
                    c.length,
                    c.dimension,
                    c.min_distance.map_or("-".into(), |d| d.to_string()),
                    c.enumerator
                );
                for d in &r.discrepancies {
                    let _ = writeln!(s, "      {d}");
                }
                for n in &r.notes {
                    let _ = writeln!(s, "      note: {n}");
                }
            }
            s
        }
    };
    Ok(Output { body, code: 0 })
}

fn run_battery_from(examples: Vec<qcode_core::catalog::ExampleResult>) -> serde_json::Value {
    let flagged: Vec<&str> = examples
        .iter()
        .filter(|e| e.verdict != "match")
        .map(|e| e.id.as_str())
        .collect();
    json!({
        "matches": examples.len() - flagged.len(),
        "flagged": flagged,
        "examples": examples,
    })
}

fn cmd_sweep(a: &SweepArgs, format: Format) -> Result<Output, Error> {
    only(format, &[Format::Json, Format::Text])?;
    if a.trials == 0 {
        return Err(Error::Config("--trials must be positive".into()));
    }
    let cfg = TheoremSweepConfig::new(a.p.clone(), a.m.clone(), a.trials, a.seed);
    let report = theorem_sweep(&cfg)?;
    let code = if report.all_match { 0 } else { 1 };
    let body = match format {
        Format::Json => json_of(&report),
        _ => {
            let mut s = format!(
                "{} instances, all match: {}\ncollapsed dimension: {}, invariant failures: {}\n",
                report.records.len(),
                report.all_match,
                report.collapsed,
                report.invariant_failures
            );
            for (case, n) in &report.case_counts {
                let _ = writeln!(s, "  {case:<13} {n}");
            }
            for e in &report.errors {
                let _ = writeln!(s, "  error: {e}");
            }
            s
        }
    };
    Ok(Output { body, code })
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

fn configure_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("QCODE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("QCODE_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, Error> {
    configure_threads()?;
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, cli.format),
        Command::Build(a) => cmd_build(a, cli.format),
        Command::Predict(a) => cmd_predict(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.format),
        Command::Lemmas(a) => cmd_lemmas(a, cli.format),
        Command::Examples(a) => cmd_examples(a, cli.format),
        Command::Sweep(a) => cmd_sweep(a, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.body),
                None => {
                    print!("{}", out.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("{}", json!({"error": "Io", "message": e.to_string()}));
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", json!({"error": error_kind(&e), "message": e.to_string()}));
            ExitCode::from(2)
        }
    }
}
