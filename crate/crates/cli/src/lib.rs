//! Command-line front end: argument parsing, report assembly and the exit
//! code contract (0 ok, 1 verification failure, 2 invalid input).

pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclogon_core::cyclotomic::ComplexPolygon;
use cyclogon_core::diagonal::lemma3_scan;
use cyclogon_core::formats::{PolygonDocument, PolytopeDocument};
use cyclogon_core::modular::{remark5_witnesses, WitnessBranch};
use cyclogon_core::polygon::{
    classify_polygon_with, make_combination, recover_ratio, residue_translation,
};
use cyclogon_core::polytope::{
    build_q, build_q_as_printed, cyclic_isometry, distance_profile, gram_report,
    interleaved_example, john_condition, recover_frequencies, FrequencySet, PolytopeVertices,
};
use cyclogon_core::recurrence::{
    admissible_ratios_with, classify_with, theorem2_sweep_range, SweepScope, Tolerances,
};
use cyclogon_core::{PolygonLabel, RecurrenceSpec, Verdict, C64};
use serde_json::{json, Value};

use output::{complex, computed, envelope, num, nums};

pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_SWEEP_N: usize = 64;
const MAX_LEMMA3_N: usize = 400;

#[derive(Debug, Parser)]
#[command(
    name = "cyclogon",
    version,
    about = "Vertex recurrences on polygons and cyclically symmetric polytopes"
)]
pub struct Cli {
    /// Numerical tolerance; overrides CYCLOGON_TOL.
    #[arg(long, global = true, env = "CYCLOGON_TOL", value_parser = parse_tol)]
    pub tol: Option<f64>,

    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissible ratios, zero-sets and case verdicts for one recurrence.
    Analyze(SpecArgs),
    /// Exhaustive check of the regularity theorem over a range of n.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(4..=MAX_SWEEP_N as u64))]
        n_max: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(4..=MAX_SWEEP_N as u64))]
        n_min: u64,
        /// Also report counterexample families on specs that fail the evenness bound.
        #[arg(long)]
        control_group: bool,
    },
    /// Certified search for repeated diagonal-length ratios.
    Lemma3 {
        #[arg(long, value_parser = clap::value_parser!(u64).range(4..=MAX_LEMMA3_N as u64))]
        n: u64,
        /// Scan every order from this one up to --n.
        #[arg(long, value_parser = clap::value_parser!(u64).range(4..=MAX_LEMMA3_N as u64))]
        from: Option<u64>,
    },
    /// DFT-support label of a polygon file, and optionally its recurrence ratio.
    ClassifyPolygon {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        recurrence: OptionalSpec,
    },
    /// Polygon from Fourier coefficients, optionally translated by residue class.
    BuildPolygon(PolygonArgs),
    /// Canonical symmetric polytope, or the interleaved two-polygon example.
    BuildPolytope {
        #[arg(long, required_unless_present = "interleaved", requires_all = ["d", "ks"])]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Comma-separated frequencies, e.g. 1,2.
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
        /// Use the uniform 1/sqrt(s+1) scale in odd dimension.
        #[arg(long)]
        as_printed: bool,
        #[arg(long, conflicts_with_all = ["n", "d", "ks", "as_printed"])]
        interleaved: Option<usize>,
    },
    /// Distance profile, cyclic isometry, Gram projector, John condition and
    /// frequency recovery for a polytope file.
    VerifyPolytope {
        #[arg(long)]
        input: PathBuf,
    },
    /// SVG drawing of a polygon file or of a Fourier combination.
    Render {
        #[arg(long, conflicts_with = "n")]
        input: Option<PathBuf>,
        #[command(flatten)]
        polygon: OptionalPolygonArgs,
    },
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub m1: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub m2: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
}

#[derive(Debug, Args)]
pub struct OptionalSpec {
    #[arg(long, allow_negative_numbers = true, requires_all = ["m2", "k"])]
    pub m1: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["m1", "k"])]
    pub m2: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["m1", "m2"])]
    pub k: Option<i64>,
}

#[derive(Debug, Args)]
pub struct PolygonArgs {
    #[arg(long)]
    pub n: usize,
    /// Coefficient of v_t as T:RE or T:RE,IM; repeatable.
    #[arg(long = "coeff", value_parser = parse_coeff, required = true)]
    pub coeffs: Vec<(i64, C64)>,
    /// Translation of residue class j mod T0 as RE or RE,IM; repeat T0 times.
    #[arg(long = "shift", value_parser = parse_complex)]
    pub shifts: Vec<C64>,
}

#[derive(Debug, Args)]
pub struct OptionalPolygonArgs {
    #[arg(long, requires = "coeffs")]
    pub n: Option<usize>,
    #[arg(long = "coeff", value_parser = parse_coeff, requires = "n")]
    pub coeffs: Vec<(i64, C64)>,
    #[arg(long = "shift", value_parser = parse_complex, requires = "n")]
    pub shifts: Vec<C64>,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if !(x.is_finite() && x > 0.0 && x < 1.0) {
        return Err(format!("tolerance must lie in (0, 1), got {s}"));
    }
    Ok(x)
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(parse(re)?, 0.0),
        [re, im] => C64::new(parse(re)?, parse(im)?),
        _ => return Err(format!("expected RE or RE,IM, got {s:?}")),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("non-finite value {s:?}"));
    }
    Ok(z)
}

fn parse_coeff(s: &str) -> Result<(i64, C64), String> {
    let (t, z) = s
        .split_once(':')
        .ok_or_else(|| format!("expected T:RE[,IM], got {s:?}"))?;
    let t: i64 = t.trim().parse().map_err(|e| format!("index {t:?}: {e}"))?;
    Ok((t, parse_complex(z)?))
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub body: String,
    /// `false` maps to exit code 1.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl From<cyclogon_core::Error> for CliError {
    fn from(e: cyclogon_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Parses, runs, and writes the artifact. Returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("{line}");
            return 2;
        }
    };
    match execute(&cli) {
        Ok(artifact) => match emit(cli.output.as_deref(), &artifact.body) {
            Ok(()) => u8::from(!artifact.verified),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(path: Option<&Path>, body: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Artifact, CliError> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let render = |value: Value, verified: bool| Artifact {
        body: match cli.format {
            Format::Json => output::to_pretty(&value),
            Format::Text => output::to_text(&value),
        },
        verified,
    };
    match &cli.command {
        Command::Analyze(a) => {
            let (v, ok) = analyze(a, tol)?;
            Ok(render(v, ok))
        }
        Command::Sweep {
            n_max,
            n_min,
            control_group,
        } => {
            let (v, ok) = sweep(*n_min as usize, *n_max as usize, *control_group, tol)?;
            Ok(render(v, ok))
        }
        Command::Lemma3 { n, from } => {
            let (v, ok) = lemma3(from.unwrap_or(*n) as usize, *n as usize, tol)?;
            Ok(render(v, ok))
        }
        Command::ClassifyPolygon { input, recurrence } => {
            let polygon = read_polygon(input)?;
            Ok(render(classify_report(&polygon, recurrence, tol)?, true))
        }
        Command::BuildPolygon(args) => {
            let polygon = build_polygon(args.n, &args.coeffs, &args.shifts)?;
            Ok(render(polygon_document(&polygon, tol), true))
        }
        Command::BuildPolytope {
            n,
            d,
            ks,
            as_printed,
            interleaved,
        } => {
            let p = match (interleaved, n, d, ks) {
                (Some(k), ..) => interleaved_example(*k)?,
                (None, Some(n), Some(d), Some(ks)) => {
                    let set = FrequencySet::new(ks.clone(), *n)?;
                    if *as_printed {
                        build_q_as_printed(*n, *d, &set)?
                    } else {
                        build_q(*n, *d, &set)?
                    }
                }
                _ => {
                    return Err(CliError::Invalid(
                        "build-polytope needs --n, --d and --ks, or --interleaved".into(),
                    ))
                }
            };
            Ok(render(polytope_document(&p, tol), true))
        }
        Command::VerifyPolytope { input } => {
            let p = read_polytope(input)?;
            let (v, ok) = verify_polytope(&p, tol);
            Ok(render(v, ok))
        }
        Command::Render { input, polygon } => {
            if cli.format == Format::Text {
                return Err(CliError::Invalid(
                    "render emits SVG; --format text is not available".into(),
                ));
            }
            let p = match (input, polygon.n) {
                (Some(path), _) => read_polygon(path)?,
                (None, Some(n)) => build_polygon(n, &polygon.coeffs, &polygon.shifts)?,
                (None, None) => {
                    return Err(CliError::Invalid(
                        "render needs --input or --n with --coeff".into(),
                    ))
                }
            };
            if !p.is_pairwise_distinct(tol) {
                return Err(CliError::Invalid(
                    "polygon has repeated vertices; nothing sensible to draw".into(),
                ));
            }
            Ok(Artifact {
                body: svg::polygon_to_svg(&p),
                verified: true,
            })
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("malformed {}: {e}", path.display())))
}

pub fn read_polygon(path: &Path) -> Result<ComplexPolygon, CliError> {
    Ok(read_json::<PolygonDocument>(path)?.to_polygon()?)
}

pub fn read_polytope(path: &Path) -> Result<PolytopeVertices, CliError> {
    Ok(read_json::<PolytopeDocument>(path)?.to_polytope()?)
}

pub fn build_polygon(
    n: usize,
    coeffs: &[(i64, C64)],
    shifts: &[C64],
) -> Result<ComplexPolygon, CliError> {
    let p = make_combination(n, coeffs)?;
    if shifts.is_empty() {
        Ok(p)
    } else {
        Ok(residue_translation(&p, shifts.len(), shifts)?)
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match *v {
        Verdict::Degenerate => json!({ "kind": "Degenerate" }),
        Verdict::Regular(t) => json!({ "kind": "Regular", "t": t }),
        Verdict::AffinelyRegular(t) => json!({ "kind": "AffinelyRegular", "t": t }),
        Verdict::CounterexampleFamily(t, tp) => {
            json!({ "kind": "CounterexampleFamily", "t": t, "t_prime": tp })
        }
        Verdict::OutsideCaseList => json!({ "kind": "OutsideCaseList" }),
    }
}

pub fn analyze(a: &SpecArgs, tol: f64) -> Result<(Value, bool), CliError> {
    let spec = RecurrenceSpec::new(a.n, a.m1, a.m2, a.k)?;
    let tols = Tolerances::uniform(tol);
    let mut ok = true;
    let families: Vec<Value> = admissible_ratios_with(&spec, &tols)
        .into_iter()
        .map(|fam| {
            let mut entry = json!({
                "w": complex(fam.w),
                "zero_set": fam.zero_set,
                "unit_modulus": fam.is_unit_modulus,
                "real": fam.is_real(&tols),
            });
            match classify_with(&spec, fam.w, &tols) {
                Ok(report) => {
                    entry["case"] = json!(format!("{:?}", report.case_label));
                    entry["verdict"] = verdict_json(&report.verdict);
                }
                Err(e) => {
                    ok = false;
                    entry["case"] = Value::Null;
                    entry["error"] = json!(e.to_string());
                }
            }
            entry
        })
        .collect();
    let witnesses = if spec.n() % 2 == 0 {
        Value::Array(
            remark5_witnesses(&spec)?
                .iter()
                .map(|w| {
                    json!({
                        "t": w.t,
                        "t_prime": w.t_prime,
                        "branch": match w.branch { WitnessBranch::CaseI => "I", WitnessBranch::CaseII => "II" },
                        "exchange_closed": w.exchange_closed,
                    })
                })
                .collect(),
        )
    } else {
        Value::Null
    };
    let mut m = envelope("analyze", tol);
    m.insert(
        "spec".into(),
        json!({ "n": spec.n(), "m1": spec.m1(), "m2": spec.m2(), "k": spec.k(), "m": spec.m() }),
    );
    m.insert(
        "hypotheses".into(),
        json!({
            "gcd_condition": spec.gcd_condition(),
            "evenness_bound": spec.evenness_bound(),
            "meets_hypotheses": spec.meets_hypotheses(),
            "m1_plus_m2_congruent_k": spec.congruence_check(),
        }),
    );
    m.insert("families".into(), Value::Array(families));
    m.insert("counterexample_witnesses".into(), witnesses);
    Ok((Value::Object(m), ok))
}

pub fn sweep(
    n_min: usize,
    n_max: usize,
    control: bool,
    tol: f64,
) -> Result<(Value, bool), CliError> {
    if n_min > n_max {
        return Err(CliError::Invalid(format!(
            "--n-min {n_min} exceeds --n-max {n_max}"
        )));
    }
    let scope = if control {
        SweepScope::WithControlGroup
    } else {
        SweepScope::Hypotheses
    };
    let r = theorem2_sweep_range(n_min, n_max, scope, &Tolerances::uniform(tol))?;
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "spec": [v.spec.n(), v.spec.m1(), v.spec.m2(), v.spec.k()],
                "w": complex(v.w),
                "zero_set": v.zero_set,
                "case": v.case_label.map(|c| format!("{c:?}")),
                "reason": v.reason,
            })
        })
        .collect();
    let mut m = envelope("sweep", tol);
    m.insert("n_min".into(), json!(r.n_min));
    m.insert("n_max".into(), json!(r.n_max));
    m.insert("specs_checked".into(), json!(r.specs_checked));
    m.insert("families_checked".into(), json!(r.families_checked));
    m.insert("passed".into(), json!(r.passed));
    m.insert("vacuous".into(), json!(r.vacuous));
    m.insert("unit_modulus_skipped".into(), json!(r.unit_modulus_skipped));
    m.insert("violations".into(), json!(r.violations.len()));
    m.insert("violation_list".into(), Value::Array(violations));
    if control {
        let found: Vec<Value> = r
            .counterexamples
            .iter()
            .map(|c| {
                json!({
                    "spec": [c.spec.n(), c.spec.m1(), c.spec.m2(), c.spec.k()],
                    "w": complex(c.w),
                    "case": format!("{:?}", c.case_label),
                    "t": c.t,
                    "t_prime": c.t_prime,
                })
            })
            .collect();
        m.insert(
            "control_group".into(),
            json!({ "specs": r.control_specs, "counterexamples": found.len(), "families": found }),
        );
    }
    Ok((Value::Object(m), r.violations.is_empty()))
}

pub fn lemma3(from: usize, to: usize, tol: f64) -> Result<(Value, bool), CliError> {
    if from > to {
        return Err(CliError::Invalid(format!("--from {from} exceeds --n {to}")));
    }
    let mut collisions = Vec::new();
    for n in from..=to {
        let found = lemma3_scan(n).map_err(|e| CliError::Verification(e.to_string()))?;
        collisions.extend(found.into_iter().map(|c| {
            json!({
                "n": c.n,
                "k": c.k,
                "l": c.l,
                "k_prime": c.k_prime,
                "l_prime": c.l_prime,
                "ratio": computed(c.ratio),
            })
        }));
    }
    let clean = collisions.is_empty();
    let mut m = envelope("lemma3", tol);
    m.insert("n_from".into(), json!(from));
    m.insert("n_to".into(), json!(to));
    m.insert("collisions".into(), Value::Array(collisions));
    Ok((Value::Object(m), clean))
}

fn label_json(label: &PolygonLabel) -> Value {
    match label {
        PolygonLabel::Regular(t) => json!({ "kind": "Regular", "t": t }),
        PolygonLabel::AffinelyRegular(t) => json!({ "kind": "AffinelyRegular", "t": t }),
        PolygonLabel::ConstantDegenerate => json!({ "kind": "ConstantDegenerate" }),
        PolygonLabel::Other(s) => json!({ "kind": "Other", "support": s }),
    }
}

pub fn classify_report(
    polygon: &ComplexPolygon,
    spec: &OptionalSpec,
    tol: f64,
) -> Result<Value, CliError> {
    let class = classify_polygon_with(polygon, tol);
    let mut m = envelope("classify-polygon", tol);
    m.insert("n".into(), json!(polygon.n()));
    m.insert("label".into(), label_json(&class.label));
    m.insert("support".into(), json!(class.support));
    m.insert(
        "pairwise_distinct".into(),
        json!(polygon.is_pairwise_distinct(tol)),
    );
    m.insert(
        "min_pairwise_distance".into(),
        num(polygon.min_pairwise_distance()),
    );
    if let (Some(m1), Some(m2), Some(k)) = (spec.m1, spec.m2, spec.k) {
        let ratio = match recover_ratio(polygon, m1, m2, k, tol) {
            Ok(w) => json!({ "m1": m1, "m2": m2, "k": k, "w": complex(w) }),
            Err(e) => {
                json!({ "m1": m1, "m2": m2, "k": k, "w": Value::Null, "failure": e.to_string() })
            }
        };
        m.insert("ratio".into(), ratio);
    }
    Ok(Value::Object(m))
}

pub fn polygon_document(polygon: &ComplexPolygon, tol: f64) -> Value {
    let mut m = envelope("build-polygon", tol);
    m.insert("n".into(), json!(polygon.n()));
    m.insert(
        "vertices".into(),
        Value::Array(
            polygon
                .vertices()
                .iter()
                .map(|z| nums([z.re, z.im]))
                .collect(),
        ),
    );
    m.insert(
        "pairwise_distinct".into(),
        json!(polygon.is_pairwise_distinct(tol)),
    );
    Value::Object(m)
}

pub fn polytope_document(p: &PolytopeVertices, tol: f64) -> Value {
    let mut m = envelope("build-polytope", tol);
    m.insert("d".into(), json!(p.d()));
    m.insert("n".into(), json!(p.n()));
    m.insert(
        "vertices".into(),
        Value::Array(
            p.vertices()
                .iter()
                .map(|v| nums(v.iter().copied()))
                .collect(),
        ),
    );
    Value::Object(m)
}

/// Runs every polytope check. Verified when the distance profile, the cyclic
/// isometry and the similarity to a canonical polytope all hold.
pub fn verify_polytope(p: &PolytopeVertices, tol: f64) -> (Value, bool) {
    let profile = distance_profile(p, tol);
    let iso = cyclic_isometry(p, tol);
    let gram = gram_report(p, tol);
    let john = john_condition(p, tol);
    let rec = recover_frequencies(p, tol);

    let iso_json = match &iso {
        Ok(i) => json!({
            "found": true,
            "residual": num(i.residual),
            "orthogonality_defect": num(i.orthogonality_defect),
            "block_angles": nums(i.block_angles.iter().copied()),
            "has_reflection_block": i.has_reflection_block,
        }),
        Err(e) => json!({ "found": false, "reason": e.to_string() }),
    };
    let rec_json = match &rec {
        Ok(r) => json!({
            "found": true,
            "ks": r.ks.ks(),
            "scale": num(r.scale),
            "residual": num(r.residual),
        }),
        Err(e) => json!({ "found": false, "reason": e.to_string() }),
    };
    let mut m = envelope("verify-polytope", tol);
    m.insert("d".into(), json!(p.d()));
    m.insert("n".into(), json!(p.n()));
    m.insert(
        "distance_profile".into(),
        json!({
            "invariant": profile.invariant,
            "max_spread": num(profile.max_spread),
            "rows": profile.rows.iter().map(|r| json!({
                "k": r.k, "mean": num(r.mean), "max_deviation": num(r.max_deviation),
            })).collect::<Vec<_>>(),
        }),
    );
    m.insert("cyclic_isometry".into(), iso_json);
    m.insert(
        "gram".into(),
        json!({
            "on_sphere": gram.on_sphere,
            "sphere_deviation": num(gram.sphere_deviation),
            "is_circulant": gram.is_circulant,
            "circulant_deviation": num(gram.circulant_deviation),
            "idempotency_residual": num(gram.idempotency_residual),
            "trace": num(gram.trace),
            "eigenvalues_near_one": gram.near_one,
            "eigenvalues_near_zero": gram.near_zero,
            "is_projector": gram.is_projector,
            "mu0": num(gram.mu[0]),
            "mu0_is_zero": gram.mu0_is_zero,
            "mu_half": gram.mu_half().map(num),
        }),
    );
    m.insert(
        "john_condition".into(),
        json!({
            "lambda": num(john.lambda),
            "residual_sum": num(john.residual_sum),
            "residual_identity": num(john.residual_identity),
            "holds": john.holds,
        }),
    );
    m.insert("frequencies".into(), rec_json);
    let symmetric = profile.invariant && iso.is_ok() && rec.is_ok();
    m.insert("symmetric".into(), json!(symmetric));
    (Value::Object(m), symmetric)
}
