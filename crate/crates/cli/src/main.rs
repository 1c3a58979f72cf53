//! `zxz`: query the erroneous ZXZXZ decomposition from the command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 `--check` found
//! disagreeing columns.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use zxz_core::decomposition::effective_params;
use zxz_core::sweep::{parse_angle, recipes};
use zxz_core::{
    classify_case, erroneous_decomposition, fidelity_report, ideal_decomposition,
    mitigate_closed_form, mitigate_numeric, run_sweep, universality_monte_carlo, Error, GateParams,
    OutputFormat, SearchConfig, SweepConfig, Unitary2, XErrorModel, CASE_TOLERANCE,
};

const OUTPUT_DIR_ENV: &str = "ZXZ_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "zxz",
    version,
    about = "Coherent-error analysis of the ZXZXZ single-qubit decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ideal and erroneous decomposition of a target gate.
    Decompose(SingleArgs),
    /// Original and best fidelity for a target gate.
    Fidelity(SingleArgs),
    /// Retuned parameters that maximize fidelity under the given error.
    Mitigate(MitigateArgs),
    /// Fraction of gates still reachable under the given error.
    Universality(UniversalityArgs),
    /// Tabulate fidelities or universality over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// Target θ, in radians or as `pi:<multiple>`.
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    phi: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    lambda: f64,
}

#[derive(Args)]
struct ErrorArgs {
    /// Rotation angle of the physical X pulse (ideal: pi:0.5).
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "pi:0.5", conflicts_with = "delta")]
    theta_x: f64,
    /// Over-rotation; shorthand for `--theta-x` = π/2 + δ.
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    phi_x: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    lambda_x: f64,
}

impl ErrorArgs {
    fn model(&self) -> XErrorModel {
        match self.delta {
            Some(d) => XErrorModel::from_delta(d, self.phi_x, self.lambda_x),
            None => XErrorModel::new(self.theta_x, self.phi_x, self.lambda_x),
        }
    }
}

#[derive(Args)]
struct SingleArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    error: ErrorArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MitigateArgs {
    #[command(flatten)]
    single: SingleArgs,
    /// Search numerically instead of using the closed form.
    #[arg(long)]
    numeric: bool,
    /// Grid points per axis for the numeric search.
    #[arg(long, default_value_t = SearchConfig::default().grid_per_axis)]
    grid: usize,
    #[arg(long, default_value_t = SearchConfig::default().rng_seed)]
    seed: u64,
}

#[derive(Args)]
struct UniversalityArgs {
    #[command(flatten)]
    error: ErrorArgs,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Bundled recipe name (see `--list-recipes`).
    #[arg(long, conflicts_with = "config")]
    recipe: Option<String>,
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. `--set steps=11`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file, or `-` for stdout. Without it the table goes to
    /// `$ZXZ_OUTPUT_DIR/<name>.<ext>` if that variable is set, else stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Exit with code 3 if analytic and numeric columns disagree.
    #[arg(long)]
    check: bool,
    #[arg(long, exclusive = true)]
    list_recipes: bool,
    /// Print a bundled recipe's source.
    #[arg(long, value_name = "NAME", exclusive = true)]
    show_recipe: Option<String>,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s)
}

enum Failure {
    Invalid(String),
    Io(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Decompose(a) => decompose(&a),
        Command::Fidelity(a) => fidelity(&a),
        Command::Mitigate(a) => mitigate(&a),
        Command::Universality(a) => universality(&a),
        Command::Sweep(a) => sweep(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("I/O error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed:\n{m}");
            ExitCode::from(3)
        }
    }
}

fn target(a: &TargetArgs) -> GateParams {
    GateParams::new(a.theta, a.phi, a.lambda)
}

fn matrix_json(u: &Unitary2) -> serde_json::Value {
    let e = u.entries();
    json!([
        [[e[0].re, e[0].im], [e[1].re, e[1].im]],
        [[e[2].re, e[2].im], [e[3].re, e[3].im]]
    ])
}

fn matrix_text(u: &Unitary2) -> String {
    let c: Vec<String> = u
        .entries()
        .iter()
        .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
        .collect();
    format!("  [{}, {}]\n  [{}, {}]", c[0], c[1], c[2], c[3])
}

fn print_json(v: &serde_json::Value) -> CliResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn decompose(a: &SingleArgs) -> CliResult {
    let p = target(&a.target);
    let e = a.error.model();
    let canon = p.canonicalize()?;
    let ideal = ideal_decomposition(&p)?;
    let actual = erroneous_decomposition(&p, &e)?;
    let eff = effective_params(&p, &e)?;
    let case = classify_case(&e, CASE_TOLERANCE);
    if a.json {
        return print_json(&json!({
            "target": p,
            "canonical": canon,
            "error": e,
            "case": case,
            "ideal": matrix_json(&ideal),
            "erroneous": matrix_json(&actual),
            "effective": eff,
        }));
    }
    println!("target      {p}");
    println!("canonical   {canon}");
    println!("case        {case:?}");
    println!("ideal decomposition:\n{}", matrix_text(&ideal));
    println!("erroneous decomposition:\n{}", matrix_text(&actual));
    println!(
        "effective   {} (relative phase {:.6})",
        eff.params(),
        eff.global_phase
    );
    Ok(())
}

fn fidelity(a: &SingleArgs) -> CliResult {
    let p = target(&a.target);
    let e = a.error.model();
    let r = fidelity_report(&p, &e)?;
    if a.json {
        return print_json(&json!(r));
    }
    println!("case        {:?}", r.case);
    println!("F_original  {:.12}", r.f_original);
    println!("F_best      {:.12}", r.f_best);
    println!("coverable   {}", r.coverable);
    Ok(())
}

fn mitigate(a: &MitigateArgs) -> CliResult {
    let p = target(&a.single.target);
    let e = a.single.error.model();
    let r = if a.numeric {
        let cfg = SearchConfig {
            grid_per_axis: a.grid,
            rng_seed: a.seed,
            ..SearchConfig::default()
        };
        mitigate_numeric(&p, &e, &cfg)?
    } else {
        mitigate_closed_form(&p, &e)?
    };
    if a.single.json {
        return print_json(&json!(r));
    }
    println!("program     {}", r.raw);
    println!("implements  {}", r.implemented);
    println!("fidelity    {:.12}", r.achieved_fidelity);
    println!("coverable   {}", r.coverable);
    println!(
        "method      {:?}{}",
        r.method,
        if r.converged { "" } else { " (not converged)" }
    );
    Ok(())
}

fn universality(a: &UniversalityArgs) -> CliResult {
    let e = a.error.model();
    let r = universality_monte_carlo(&e, a.samples, a.seed)?;
    if a.json {
        return print_json(&json!(r));
    }
    println!("UN analytic     {:.12}", r.un_analytic);
    println!(
        "UN Monte Carlo  {:.12} ± {:.2e} ({} samples)",
        r.un_monte_carlo, r.mc_stderr, r.mc_samples
    );
    println!("excluded θ band {:.12}", r.delta_theta);
    Ok(())
}

fn sweep(a: &SweepArgs) -> CliResult {
    if a.list_recipes {
        for n in recipes::names() {
            println!("{n}");
        }
        return Ok(());
    }
    if let Some(name) = &a.show_recipe {
        let src = recipes::source(name)
            .ok_or_else(|| Failure::Invalid(format!("no bundled recipe named `{name}`")))?;
        print!("{src}");
        return Ok(());
    }

    let mut text = match (&a.recipe, &a.config) {
        (Some(name), None) => recipes::source(name)
            .ok_or_else(|| Failure::Invalid(format!("no bundled recipe named `{name}`")))?
            .to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        (None, None) => String::new(),
        (Some(_), Some(_)) => unreachable!("clap rejects --recipe with --config"),
    };
    for kv in &a.overrides {
        if !kv.contains('=') {
            return Err(Failure::Invalid(format!(
                "--set expects KEY=VALUE, got `{kv}`"
            )));
        }
        text.push('\n');
        text.push_str(kv);
    }
    let cfg = SweepConfig::parse(&text)?;
    let table = run_sweep(&cfg)?;
    let format = OutputFormat::from(a.format);

    let dest = match &a.output {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUTPUT_DIR_ENV)
            .map(|dir| PathBuf::from(dir).join(format!("{}.{}", cfg.name, format.extension()))),
    };
    match dest {
        None => table.emit(format, io::stdout().lock())?,
        Some(path) => {
            let f =
                File::create(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            table.emit(format, BufWriter::new(f))?;
        }
    }

    if a.check {
        let v = table.check();
        if !v.is_empty() {
            let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
            return Err(Failure::Check(lines.join("\n")));
        }
    }
    Ok(())
}
