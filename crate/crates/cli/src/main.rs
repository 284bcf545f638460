use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delta_spectra::models::{
    BoxDeltaSpec, FiniteWellDeltaSpec, HydrogenDeltaSpec, ModelSpec, OscillatorDeltaSpec, Units,
};
use delta_spectra::perturb;
use delta_spectra::series::{self, SumParity};
use delta_spectra::validate::{self, Fault, ValidateOptions};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "delta-spectra", version, about = "Spectra of solvable models with attractive delta potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact energies next to the second-order perturbative estimate.
    Spectrum(SpectrumArgs),
    /// Reproduce one of the three convergence tables.
    Tables(TablesArgs),
    /// Run the cross-validation suite.
    Validate(ValidateArgs),
    /// Partial sums of one of the series identities.
    Series(SeriesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here (atomically) instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    BoxDelta,
    WellDelta,
    ShoDelta,
    HydrogenDelta,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Box length or well half-width.
    #[arg(long = "L")]
    length: Option<f64>,
    /// Delta positions as fractions of L (box); repeat for several deltas.
    #[arg(long, num_args = 1..)]
    p: Vec<f64>,
    /// Relative strength of each delta (box), default 1.
    #[arg(long, num_args = 1..)]
    weight: Vec<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    lambda: f64,
    /// Number of states (default 3; all bound states for the well).
    #[arg(long)]
    states: Option<usize>,
    #[arg(long = "V0")]
    v0: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// Delta position for hydrogen.
    #[arg(long)]
    a: Option<f64>,
    /// Coulomb coupling e² for hydrogen.
    #[arg(long, default_value_t = 1.0)]
    e2: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 0.5)]
    mass: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct TablesArgs {
    /// Table number (1, 2 or 3).
    #[arg(long = "table", value_parser = clap::value_parser!(u8).range(1..=3))]
    table: u8,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FaultKind {
    LambdaSign,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Run only these groups (comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultKind>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    /// Σ over odd l ≠ n of 1/(l² − n²)
    OddReciprocal,
    /// Σ over all l ≥ 0, l ≠ n of 1/(l² − n²)
    Unrestricted,
    /// Σ_l sin(lpπ) sin(lπx/L)/(l² − n²)
    SumRule,
    /// the ungrouped + + − − series for (π − 2)/8
    Sawtooth,
    /// grouped series, reported as π estimates
    Pi,
    /// oscillator bracket sum
    Oscillator,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    kind: SeriesKind,
    #[arg(long, default_value_t = 1000)]
    terms: usize,
    #[arg(long, default_value_t = 1)]
    n: u64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0.25)]
    x: f64,
    #[arg(long = "L", default_value_t = 1.0)]
    length: f64,
    /// Sum over odd l only (sum rule).
    #[arg(long)]
    odd: bool,
    /// Emit only every k-th partial sum (the last one is always emitted).
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[command(flatten)]
    out: OutputArgs,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Solver(String),
    Checks(Vec<String>),
    Io(String),
}

impl From<delta_spectra::Error> for Failure {
    fn from(e: delta_spectra::Error) -> Self {
        match e {
            delta_spectra::Error::InvalidSpec(m) => Failure::Usage(m),
            other => Failure::Solver(other.to_string()),
        }
    }
}

impl From<series::SeriesError> for Failure {
    fn from(e: series::SeriesError) -> Self {
        match e {
            series::SeriesError::Domain(m) => Failure::Usage(m),
            other => Failure::Solver(other.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::Number(fmt_num(*x).parse().expect("finite number")),
            Cell::Num(_) => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

/// 17 significant digits.
fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        // no "-0" in output
        format!("{:.16e}", x + 0.0)
    } else {
        "NaN".into()
    }
}

struct Output {
    command: &'static str,
    params: Map<String, Value>,
    units: Option<Units>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    extra: Map<String, Value>,
}

impl Output {
    fn render(&self, format: Format) -> Result<Vec<u8>, Failure> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                let io = |e: csv::Error| Failure::Io(e.to_string());
                w.write_record(&self.columns).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv)).map_err(io)?;
                }
                w.into_inner().map_err(|e| Failure::Io(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (c, v) in self.columns.iter().zip(r) {
                            m.insert((*c).into(), v.json());
                        }
                        Value::Object(m)
                    })
                    .collect();
                let units = self.units.map_or(Value::Null, |u| json!({ "hbar": u.hbar, "mass": u.mass }));
                let mut top = Map::new();
                top.insert("command".into(), json!(self.command));
                top.insert("params".into(), Value::Object(self.params.clone()));
                top.insert("rows".into(), Value::Array(rows));
                for (k, v) in &self.extra {
                    top.insert(k.clone(), v.clone());
                }
                top.insert(
                    "provenance".into(),
                    json!({
                        "versions": {
                            "delta-spectra": env!("CARGO_PKG_VERSION"),
                        },
                        "units": units,
                    }),
                );
                let mut s = serde_json::to_vec_pretty(&Value::Object(top)).map_err(|e| Failure::Io(e.to_string()))?;
                s.push(b'\n');
                Ok(s)
            }
        }
    }
}

fn emit(out: &Output, args: &OutputArgs) -> Result<(), Failure> {
    let bytes = out.render(args.format)?;
    match &args.output {
        None => std::io::stdout().write_all(&bytes).map_err(|e| Failure::Io(e.to_string())),
        Some(path) => write_atomic(path, &bytes),
    }
}

/// Temp file in the target directory, then rename: readers never see a
/// partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn need(v: Option<f64>, flag: &str, model: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for {model}")))
}

fn build_model(a: &SpectrumArgs) -> Result<ModelSpec, Failure> {
    let units = Units::new(a.hbar, a.mass)?;
    Ok(match a.model {
        ModelKind::BoxDelta => {
            let length = need(a.length, "L", "box-delta")?;
            if a.p.is_empty() {
                return Err(Failure::Usage("--p is required for box-delta".into()));
            }
            if !a.weight.is_empty() && a.weight.len() != a.p.len() {
                return Err(Failure::Usage(format!("{} weights given for {} deltas", a.weight.len(), a.p.len())));
            }
            if a.p.len() == 1 && a.weight.is_empty() {
                ModelSpec::Box(BoxDeltaSpec::single(length, a.p[0], a.lambda, units)?)
            } else {
                let sites: Vec<(f64, f64)> =
                    a.p.iter().enumerate().map(|(i, &p)| (p, a.weight.get(i).copied().unwrap_or(1.0))).collect();
                ModelSpec::Box(BoxDeltaSpec::new(length, &sites, units)?.with_lambda(a.lambda))
            }
        }
        ModelKind::WellDelta => ModelSpec::Well(FiniteWellDeltaSpec::new(
            need(a.length, "L", "well-delta")?,
            need(a.v0, "V0", "well-delta")?,
            a.lambda,
            units,
        )?),
        ModelKind::ShoDelta => {
            ModelSpec::Oscillator(OscillatorDeltaSpec::new(need(a.omega, "omega", "sho-delta")?, a.lambda, units)?)
        }
        ModelKind::HydrogenDelta => {
            ModelSpec::Hydrogen(HydrogenDeltaSpec::new(need(a.a, "a", "hydrogen-delta")?, a.lambda, a.e2, units)?)
        }
    })
}

fn spectrum_params(a: &SpectrumArgs, model: &ModelSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("model".into(), json!(model.name()));
    m.insert("lambda".into(), json!(a.lambda));
    if let Some(l) = a.length {
        m.insert("L".into(), json!(l));
    }
    if !a.p.is_empty() {
        m.insert("p".into(), json!(a.p));
    }
    if !a.weight.is_empty() {
        m.insert("weight".into(), json!(a.weight));
    }
    if let Some(v) = a.v0 {
        m.insert("V0".into(), json!(v));
    }
    if let Some(w) = a.omega {
        m.insert("omega".into(), json!(w));
    }
    if let Some(x) = a.a {
        m.insert("a".into(), json!(x));
        m.insert("e2".into(), json!(a.e2));
    }
    if let Some(s) = a.states {
        m.insert("states".into(), json!(s));
    }
    m
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let model = build_model(a)?;
    if a.states == Some(0) {
        return Err(Failure::Usage("--states must be at least 1".into()));
    }
    let count = match (&model, a.states) {
        (ModelSpec::Well(_), None) => usize::MAX,
        (_, s) => s.unwrap_or(3),
    };
    let roots = model.spectrum(count)?;
    let mut rows = Vec::with_capacity(roots.len());
    for r in &roots {
        let (e0, e1, e2, pt, prov) = match perturb::pt_coefficients(&model, r.ordinal) {
            Ok(c) => (c.e0, c.e1, c.e2, c.energy(a.lambda), c.provenance.label()),
            Err(e) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN, format!("unavailable: {e}")),
        };
        rows.push(vec![
            Cell::Int(r.ordinal as u64),
            Cell::Text(r.parity.as_str().into()),
            Cell::Num(r.energy),
            Cell::Num(pt),
            Cell::Num(e0),
            Cell::Num(e1),
            Cell::Num(e2),
            Cell::Num(r.residual),
            Cell::Num((r.energy - pt).abs()),
            Cell::Text(prov),
        ]);
    }
    let out = Output {
        command: "spectrum",
        params: spectrum_params(a, &model),
        units: Some(model.units()),
        columns: vec!["ordinal", "parity", "e_exact", "e_pt", "e0", "e1", "e2", "residual", "abs_diff", "pt_provenance"],
        rows,
        extra: Map::new(),
    };
    emit(&out, &a.out)
}

fn cmd_tables(a: &TablesArgs) -> Result<(), Failure> {
    let t = series::golden_table(a.table)?;
    let rows = t.rows.iter().map(|r| r.iter().map(|c| Cell::Text(c.clone())).collect()).collect();
    let mut params = Map::new();
    params.insert("table".into(), json!(a.table));
    let mut extra = Map::new();
    extra.insert("title".into(), json!(t.title));
    extra.insert("reference".into(), json!(t.reference));
    let out = Output { command: "tables", params, units: None, columns: t.header.clone(), rows, extra };
    emit(&out, &a.out)
}

fn cmd_validate(a: &ValidateArgs) -> Result<(), Failure> {
    for g in &a.only {
        if !validate::GROUPS.contains(&g.as_str()) {
            return Err(Failure::Usage(format!("unknown group '{g}'; groups: {}", validate::GROUPS.join(", "))));
        }
    }
    let opts = ValidateOptions {
        only: a.only.clone(),
        fault: a.inject_fault.map(|f| match f {
            FaultKind::LambdaSign => Fault::FlipLambdaSign,
        }),
    };
    let report = validate::run(&opts);
    let mut rows: Vec<Vec<Cell>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.group.into()),
                Cell::Text(c.name.into()),
                Cell::Text(if c.passed { "pass" } else { "FAIL" }.into()),
                Cell::Text(c.detail.clone()),
            ]
        })
        .collect();
    for f in &report.findings {
        rows.push(vec![Cell::Text("finding".into()), Cell::Text(String::new()), Cell::Text("note".into()), Cell::Text(f.clone())]);
    }
    let mut params = Map::new();
    params.insert("only".into(), json!(a.only));
    let mut extra = Map::new();
    extra.insert("passed".into(), json!(report.passed()));
    let out = Output {
        command: "validate",
        params,
        units: None,
        columns: vec!["group", "check", "status", "detail"],
        rows,
        extra,
    };
    emit(&out, &a.out)?;
    let failed: Vec<String> = report.failures().iter().map(|c| format!("{}/{}: {}", c.group, c.name, c.detail)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn cmd_series(a: &SeriesArgs) -> Result<(), Failure> {
    if a.terms == 0 || a.every == 0 {
        return Err(Failure::Usage("--terms and --every must be positive".into()));
    }
    let run = match a.kind {
        SeriesKind::OddReciprocal => series::odd_reciprocal_sum(a.n, a.terms)?,
        SeriesKind::Unrestricted => series::unrestricted_sum(a.n, a.terms)?,
        SeriesKind::SumRule => {
            let parity = if a.odd { SumParity::Odd } else { SumParity::All };
            series::sum_rule_series(a.n, a.p, a.x, a.length, a.terms, parity)?
        }
        SeriesKind::Sawtooth => series::sawtooth_series(a.terms),
        SeriesKind::Pi => series::pi_series(a.terms, true)?,
        SeriesKind::Oscillator => series::sho_series(a.n, a.terms as u64)?,
    };
    let is_pi = a.kind == SeriesKind::Pi;
    let sums = &run.partial_sums;
    let last = sums.len() - 1;
    let mut rows = Vec::new();
    for (i, s) in sums.iter().enumerate() {
        if (i + 1) % a.every != 0 && i != last {
            continue;
        }
        let avg = if i >= 1 { run.averaged.as_ref().map(|v| v[i - 1]) } else { None };
        let mut row = vec![Cell::Int(i as u64 + 1), Cell::Num(*s)];
        if run.averaged.is_some() {
            row.push(Cell::Num(avg.unwrap_or(f64::NAN)));
        }
        if is_pi {
            row.push(Cell::Num(8.0 * s + 2.0));
            row.push(Cell::Num(avg.map_or(f64::NAN, |v| 8.0 * v + 2.0)));
        }
        rows.push(row);
    }
    let mut columns = vec!["terms", "partial_sum"];
    if run.averaged.is_some() {
        columns.push("averaged");
    }
    if is_pi {
        columns.extend(["pi_estimate", "pi_averaged"]);
    }
    let mut params = Map::new();
    params.insert("kind".into(), json!(format!("{:?}", run.id)));
    params.insert("terms".into(), json!(a.terms));
    params.insert("index_convention".into(), json!(run.index_convention));
    for (k, v) in [("n", run.params.n.map(|v| v as f64)), ("p", run.params.p), ("x", run.params.x), ("L", run.params.length)] {
        if let Some(v) = v {
            params.insert(k.into(), json!(v));
        }
    }
    let mut extra = Map::new();
    extra.insert(
        "targets".into(),
        Value::Array(run.targets.iter().map(|t| json!({ "label": t.label, "value": Cell::Num(t.value).json() })).collect()),
    );
    extra.insert(
        "supported_target".into(),
        run.supported_target.map_or(Value::Null, |i| json!(run.targets[i].label)),
    );
    extra.insert("final_sum".into(), json!(run.final_sum.to_fixed(30)));
    if let Some(tc) = run.tail_corrected {
        extra.insert("tail_corrected".into(), Cell::Num(tc).json());
    }
    if let Some(pe) = run.pi_estimate {
        extra.insert("pi_raw".into(), json!(pe.raw.to_fixed(20)));
        if let Some(av) = pe.averaged {
            extra.insert("pi_averaged".into(), json!(av.to_fixed(20)));
        }
    }
    let out = Output { command: "series", params, units: None, columns, rows, extra };
    emit(&out, &a.out)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("DELTA_SPECTRA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("DELTA_SPECTRA_THREADS must be a non-negative integer, got '{v}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Solver(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Series(a) => cmd_series(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(list)) => {
            eprintln!("{} check(s) failed:", list.len());
            for l in list {
                eprintln!("  {l}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("solver failure: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("output error: {m}");
            ExitCode::from(3)
        }
    }
}
