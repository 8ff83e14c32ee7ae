use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use kappa_expand::algebra::{rational::to_f64, Fraction};
use kappa_expand::diagram::Diagram;
use kappa_expand::expansion::{expand, ExpandOptions, KappaSeries};
use kappa_expand::oracles::{compare_series, oneloop_series_via_psi};
use kappa_expand::render::render;
use kappa_expand::spec::{parse_invariants, parse_spec, Dimension, Format, RunConfig, Verify, MAX_ORDER};

/// Exact κ-expansion of a Feynman integral given by a diagram spec file.
#[derive(Parser, Debug)]
#[command(name = "kappa-expand", version)]
struct Cli {
    /// Diagram spec file.
    specfile: PathBuf,
    /// Expansion order in κ (overrides the spec file).
    #[arg(long)]
    order: Option<u32>,
    /// Space dimension: `D` (symbolic), an integer or a rational.
    #[arg(long)]
    dimension: Option<Dimension>,
    #[arg(long, value_parser = ["plain", "latex", "json"])]
    format: Option<String>,
    #[arg(long, value_parser = ["psi", "laguerre"])]
    verify: Option<String>,
    /// Largest κ probed by `--verify laguerre` (grid κ/4, κ/2, κ).
    #[arg(long = "kappa")]
    kappa: Option<f64>,
    /// Relative tolerance for `--verify laguerre`.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Gauss–Laguerre nodes per parameter.
    #[arg(long, default_value_t = 32)]
    nodes: usize,
    /// External invariant for numerical checks, e.g. `s1_1=0.25`.
    #[arg(long = "invariant", value_name = "sI_J=VALUE")]
    invariants: Vec<String>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let text = fs::read_to_string(&cli.specfile)
        .map_err(|e| format!("{}: {e}", cli.specfile.display()))?;
    let (diagram, mut config) = parse_spec(&text).map_err(|e| format!("{}: {e}", cli.specfile.display()))?;
    apply_overrides(cli, &mut config)?;

    let series = expand(&diagram, config.order, ExpandOptions::from_env()).map_err(|e| e.to_string())?;
    let shown = match &config.dimension {
        Dimension::Symbolic => series.clone(),
        Dimension::Numeric(d) => series.with_dimension(d),
    };
    let out = render(&shown, config.format);
    match &cli.output {
        Some(path) => fs::write(path, out).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{out}"),
    }

    match config.verify {
        Verify::None => Ok(true),
        Verify::Psi => verify_psi(&diagram, &series, &config),
        Verify::Laguerre => verify_laguerre(cli, &diagram, &shown, &config),
    }
}

fn apply_overrides(cli: &Cli, config: &mut RunConfig) -> Result<(), String> {
    if let Some(order) = cli.order {
        config.order = order;
    }
    if let Some(d) = &cli.dimension {
        config.dimension = d.clone();
    }
    if let Some(f) = &cli.format {
        config.format = f.parse::<Format>()?;
    }
    if let Some(v) = &cli.verify {
        config.verify = v.parse::<Verify>()?;
    }
    if let Some(k) = cli.kappa {
        config.kappa_probe = k;
    }
    if config.order > MAX_ORDER {
        return Err(format!("order must be in [0, {MAX_ORDER}]"));
    }
    config.validate().map_err(|e| e.to_string())
}

fn verify_psi(d: &Diagram, series: &KappaSeries, config: &RunConfig) -> Result<bool, String> {
    let is_one_loop = d.loops() == 1
        && d.externals() == 0
        && d.lines().len() == 1
        && d.lines()[0].routing[0].abs() == 1;
    if !is_one_loop {
        return Err("--verify psi applies to the single-propagator one-loop integral".into());
    }
    let order = config.order.min(12);
    let mut oracle = oneloop_series_via_psi(&d.lines()[0].power, order).map_err(|e| e.to_string())?;
    let mut ours: Vec<Fraction> = series.coeffs[..=order as usize].to_vec();
    if let Dimension::Numeric(dim) = &config.dimension {
        let fix = |c: &Fraction| {
            c.substitute(&std::collections::HashMap::from([(
                kappa_expand::Var::D,
                kappa_expand::Poly::constant(dim.clone()),
            )]))
        };
        oracle = oracle.iter().map(fix).collect();
        ours = ours.iter().map(fix).collect();
    }
    let mut ok = true;
    for (j, (a, b)) in ours.iter().zip(&oracle).enumerate() {
        let same = a == b;
        ok &= same;
        eprintln!("psi kappa^{j}: {}", if same { "match" } else { "MISMATCH" });
    }
    eprintln!("psi verification: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn verify_laguerre(cli: &Cli, d: &Diagram, series: &KappaSeries, config: &RunConfig) -> Result<bool, String> {
    let Dimension::Numeric(dim) = &config.dimension else {
        return Err("--verify laguerre needs a numeric --dimension".into());
    };
    let invariants = parse_invariants(&cli.invariants, d.externals())?;
    let k = config.kappa_probe;
    let grid = [k / 4.0, k / 2.0, k];
    let report = compare_series(series, d, &invariants, &grid, dim, cli.tol, cli.nodes)
        .map_err(|e| e.to_string())?;
    for row in &report.rows {
        eprintln!(
            "kappa {:.4}: series {:.12e} quadrature {:.12e} (±{:.1e}) rel {:.3e}{}",
            row.kappa,
            row.series,
            row.quadrature,
            row.quadrature_error,
            row.relative,
            if row.flagged { "  EXCEEDS TOLERANCE" } else { "" }
        );
    }
    if let Some(s) = report.slope {
        eprintln!(
            "log-log slope {s:.3} (required >= {:.1}) at D = {}",
            report.order as f64 + 0.5,
            to_f64(dim)
        );
    }
    eprintln!("laguerre verification: {}", if report.passed() { "PASS" } else { "FAIL" });
    Ok(report.passed())
}
