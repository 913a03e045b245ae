mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fuglede_core::{
    build_lambda1, build_omega1, build_omega2, cell_count_check, density_check, descend,
    export_geometry, find_tiling, fuglede_scan_with, import_geometry, is_spectrum, scan_sets,
    spectrum_from_butson, standard_h12, standard_h6, tiling_defect, torus_non_tiling,
    verify_butson, verify_ortho_factorized, verify_ortho_lattice, verify_spectrum_truncation,
    ButsonMatrix, FrequencySet, GroupSpec, LatticeConfig, LatticeSet, LiftedSet, OrthoCheck,
    PairSelection, Ratio, ScanOptions, ScanRecord, SpectralPair, TilingResult, WindowScan,
    DEFAULT_NODE_BUDGET,
};
use serde_json::{json, Value};

use report::{print_error, Report};

#[derive(Parser)]
#[command(
    name = "fuglede",
    version,
    about = "Spectral sets and tilings in finite abelian groups and their lifts"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Node budget for each clique or exact-cover search
    #[arg(long, global = true, env = "FUGLEDE_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify one of the counterexample stages
    Counterexample(CounterexampleArgs),
    /// Compare spectrality and tiling for every subset class of a group
    Scan(ScanArgs),
    /// Verify a Butson matrix, a spectrum, or a tiling complement
    Verify(VerifyArgs),
    /// Write the cube-union geometry and its spectrum as JSON
    Export(ExportArgs),
    /// Check window densities of the lattice set
    Density(DensityArgs),
    /// Verify orthogonality of a truncated spectrum of the cube union
    VerifyContinuum(ContinuumArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    #[value(name = "z2-12")]
    Z2_12,
    #[value(name = "z3-6")]
    Z3_6,
    #[value(name = "z3-5")]
    Z3_5,
    #[value(name = "z2-11")]
    Z2_11,
    Lattice,
    Continuum,
}

#[derive(Args)]
struct CounterexampleArgs {
    variant: Variant,
    /// Truncation scale of the lattice lift
    #[arg(long, default_value_t = 2)]
    m: u64,
    /// Shift radius of the truncated continuum spectrum
    #[arg(long = "k-radius", default_value_t = 1)]
    k_radius: u64,
    /// Pair budget for the continuum check; larger truncations are sampled
    #[arg(long, default_value_t = 1_000_000)]
    pairs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use this Butson matrix file instead of the built-in one
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Skip the direct pairwise summation and rely on the factorized check
    #[arg(long)]
    factorized_only: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Group descriptor such as `8`, `2^4` or `4x2`
    group: String,
    /// Only classes of this size
    #[arg(long)]
    size: Option<usize>,
    /// JSON file with an array of sets; only their classes are scanned
    #[arg(long)]
    set: Option<String>,
    /// Upper bound on enumerated subsets
    #[arg(long, default_value_t = 10_000_000)]
    max_subsets: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// `h12`, `h6`, or a matrix JSON file
    #[arg(long, conflicts_with_all = ["group", "set", "spectrum", "complement"])]
    matrix: Option<String>,
    /// Group descriptor
    #[arg(long, requires = "set")]
    group: Option<String>,
    /// Set as a JSON file or inline, e.g. '{0,1}'
    #[arg(long, requires = "group")]
    set: Option<String>,
    /// Candidate spectrum for the set
    #[arg(long, requires = "set")]
    spectrum: Option<String>,
    /// Candidate tiling complement for the set
    #[arg(long, requires = "set")]
    complement: Option<String>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, default_value_t = 2)]
    m: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 16)]
    m: u64,
    /// Window side
    #[arg(long, default_value_t = 8)]
    l: u64,
    /// Visit every window whose corner coordinates are multiples of this
    #[arg(long, conflicts_with = "trials")]
    stride: Option<u64>,
    /// Visit this many random windows instead
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allowed density deviation as `num/den` (default 12/L)
    #[arg(long)]
    tolerance: Option<String>,
}

#[derive(Args)]
struct ContinuumArgs {
    #[arg(long, default_value_t = 2)]
    m: u64,
    #[arg(long = "k-radius", default_value_t = 1)]
    k_radius: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pairs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verify an exported geometry file instead of rebuilding it
    #[arg(long)]
    geometry: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let outcome = match &cli.command {
        Command::Counterexample(a) => counterexample(a, budget).map(|r| finish(r, cli.json)),
        Command::Scan(a) => scan(a, budget, cli.json),
        Command::Verify(a) => verify(a).map(|r| finish(r, cli.json)),
        Command::Export(a) => export(a).map(|r| finish(r, cli.json)),
        Command::Density(a) => density(a).map(|r| finish(r, cli.json)),
        Command::VerifyContinuum(a) => verify_continuum(a).map(|r| finish(r, cli.json)),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            print_error(cli.json, &e);
            ExitCode::from(2)
        }
    }
}

fn finish(report: Report, json_mode: bool) -> ExitCode {
    report.print(json_mode);
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn check_matrix(report: &mut Report, h: &ButsonMatrix) -> bool {
    let detail = match h.first_non_orthogonal_pair() {
        None => json!({ "size": h.size(), "q": h.q() }),
        Some((a, b)) => json!({ "size": h.size(), "q": h.q(), "non_orthogonal_rows": [a, b] }),
    };
    report.check("verify_butson", verify_butson(h), detail)
}

/// Checks `pair` is spectral and that `find_tiling` rules out tiling.
fn check_finite_pair(report: &mut Report, pair: &SpectralPair, budget: u64) -> Result<bool> {
    let verdict = pair.check()?;
    if !report.check("is_spectrum", verdict.is_valid(), to_value(&verdict)) {
        return Ok(false);
    }
    let tiling = find_tiling(&pair.group, &pair.set, budget)?;
    let detail = match &tiling {
        TilingResult::NotTiles(cert) => to_value(cert),
        TilingResult::Tiles(sigma) => json!({ "complement": sigma }),
    };
    Ok(report.check("find_tiling", !tiling.tiles(), detail))
}

fn finite_stage(
    a: &CounterexampleArgs,
    report: &mut Report,
    budget: u64,
) -> Result<Option<SpectralPair>> {
    let binary = matches!(a.variant, Variant::Z2_12 | Variant::Z2_11);
    let h = match &a.matrix {
        Some(path) => input::load_matrix(path.to_str().context("matrix path is not UTF-8")?)?,
        None if binary => standard_h12(),
        None => standard_h6(),
    };
    if !check_matrix(report, &h) {
        return Ok(None);
    }
    let mut pair = spectrum_from_butson(&h)?;
    if !matches!(a.variant, Variant::Z2_12 | Variant::Z3_6) {
        pair = descend(&pair)?;
    }
    report.artifact("group", to_value(&pair.group));
    if matches!(a.variant, Variant::Lattice | Variant::Continuum) {
        let verdict = pair.check()?;
        report.check("is_spectrum", verdict.is_valid(), to_value(&verdict));
        return Ok(report.passed.then_some(pair));
    }
    report.artifact("set", to_value(&pair.set));
    report.artifact("spectrum", to_value(&pair.spectrum));
    Ok(check_finite_pair(report, &pair, budget)?.then_some(pair))
}

fn ortho_detail(check: &OrthoCheck) -> Value {
    to_value(check)
}

fn lift_stage(
    pair: &SpectralPair,
    m: u64,
    report: &mut Report,
) -> Result<Option<(LiftedSet, FrequencySet)>> {
    let cfg = LatticeConfig::new(pair.group.dimension(), m);
    let lift = build_omega1(&pair.set, &cfg)?;
    let lambda = build_lambda1(&pair.spectrum, &cfg)?;
    let expected = (pair.set.len() as u64).checked_mul(m.pow(cfg.dimension as u32));
    let size = lift.points().len() as u64;
    let ok = report.check(
        "build_omega1",
        Some(size) == expected && lambda.len() as u64 == size,
        json!({ "m": m, "points": size, "frequencies": lambda.len(), "denominator": lambda.denominator }),
    );
    if !ok {
        return Ok(None);
    }
    let cells = cell_count_check(lift.points(), &cfg, pair.set.len());
    if !report.check(
        "cell_count_check",
        cells,
        json!({ "per_cell": pair.set.len() }),
    ) {
        return Ok(None);
    }
    Ok(Some((lift, lambda)))
}

fn torus_stage(omega: &LatticeSet, m: u64, report: &mut Report) -> Result<bool> {
    let cfg = LatticeConfig::new(omega.dimension(), m);
    let cert = torus_non_tiling(omega, &cfg)?;
    let detail = match &cert {
        Some(c) => to_value(c),
        None => Value::String("cardinality divides the torus order".into()),
    };
    Ok(report.check("torus_non_tiling", cert.is_some(), detail))
}

fn selection(total_freqs: u64, pairs: u64, seed: u64) -> PairSelection {
    let all = total_freqs.saturating_mul(total_freqs.saturating_sub(1)) / 2;
    if all <= pairs {
        PairSelection::All { max_pairs: pairs }
    } else {
        PairSelection::Sample { pairs, seed }
    }
}

fn continuum_stage(
    omega1: &LatticeSet,
    lambda: &FrequencySet,
    k_radius: u64,
    pairs: u64,
    seed: u64,
    report: &mut Report,
) -> Result<bool> {
    let omega2 = build_omega2(omega1)?;
    let measure_ok = omega2.measure() == omega1.len() as u64;
    if !report.check(
        "measure",
        measure_ok,
        json!({ "measure": omega2.measure() }),
    ) {
        return Ok(false);
    }
    let side = 2 * k_radius + 1;
    let freqs = side
        .checked_pow(omega1.dimension() as u32)
        .and_then(|s| s.checked_mul(lambda.len() as u64))
        .context("truncated spectrum is too large")?;
    let sel = selection(freqs, pairs, seed);
    let verdict = verify_spectrum_truncation(omega1, lambda, k_radius, sel)?;
    let mode = match sel {
        PairSelection::All { .. } => json!("all"),
        PairSelection::Sample { seed, .. } => json!({ "sampled_seed": seed }),
    };
    Ok(report.check(
        "verify_spectrum_truncation",
        verdict.is_valid(),
        json!({ "k_radius": k_radius, "frequencies": freqs, "pairs": mode, "verdict": ortho_detail(&verdict) }),
    ))
}

fn counterexample(a: &CounterexampleArgs, budget: u64) -> Result<Report> {
    let name = Variant::value_variants()
        .iter()
        .find(|v| **v == a.variant)
        .and_then(|v| v.to_possible_value())
        .map(|p| p.get_name().to_string())
        .unwrap_or_default();
    let mut report = Report::new(format!("counterexample {name}"));
    let Some(pair) = finite_stage(a, &mut report, budget)? else {
        return Ok(report);
    };
    if !matches!(a.variant, Variant::Lattice | Variant::Continuum) {
        return Ok(report);
    }
    let Some((lift, lambda)) = lift_stage(&pair, a.m, &mut report)? else {
        return Ok(report);
    };
    if a.variant == Variant::Lattice {
        let factorized = verify_ortho_factorized(&lift, &lambda)?;
        if !report.check(
            "verify_ortho_factorized",
            factorized.is_valid(),
            ortho_detail(&factorized),
        ) {
            return Ok(report);
        }
        if !a.factorized_only {
            let direct = verify_ortho_lattice(lift.points(), &lambda)?;
            let agree = direct == factorized;
            if !report.check(
                "verify_ortho_lattice",
                direct.is_valid() && agree,
                ortho_detail(&direct),
            ) {
                return Ok(report);
            }
        }
    } else if !continuum_stage(
        lift.points(),
        &lambda,
        a.k_radius,
        a.pairs,
        a.seed,
        &mut report,
    )? {
        return Ok(report);
    }
    torus_stage(lift.points(), a.m, &mut report)?;
    Ok(report)
}

fn scan(a: &ScanArgs, budget: u64, json_mode: bool) -> Result<ExitCode> {
    let g: GroupSpec = a
        .group
        .parse()
        .with_context(|| format!("group descriptor {:?}", a.group))?;
    let opts = ScanOptions {
        size: a.size,
        max_subsets: a.max_subsets,
        node_budget: budget,
    };
    let emit = |rec: &ScanRecord| {
        if json_mode {
            println!("{}", serde_json::to_string(rec).expect("record serializes"));
        } else {
            let set: Vec<String> = rec.set.iter().map(ToString::to_string).collect();
            println!(
                "{{{}}}  spectral: {}  tiles: {}",
                set.join(", "),
                yes_no(rec.spectral),
                yes_no(rec.tiles)
            );
        }
    };
    let summary = match &a.set {
        Some(file) => scan_sets(&g, &input::parse_sets(&g, file)?, &opts, emit)?,
        None => fuglede_scan_with(&g, &opts, emit)?,
    };
    if json_mode {
        println!("{}", json!({ "summary": summary }));
    } else {
        println!(
            "{}: {} classes, {} spectral non-tiles, {} non-spectral tiles{}",
            summary.group,
            summary.classes,
            summary.spectral_non_tiles,
            summary.tiles_non_spectral,
            match &summary.stopped {
                Some(reason) => format!(" (INCOMPLETE: {reason})"),
                None => String::new(),
            }
        );
    }
    Ok(if summary.complete {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verify(a: &VerifyArgs) -> Result<Report> {
    let mut report = Report::new("verify");
    if let Some(m) = &a.matrix {
        let h = input::load_matrix(m)?;
        check_matrix(&mut report, &h);
        return Ok(report);
    }
    let (Some(group), Some(set)) = (&a.group, &a.set) else {
        bail!("pass --matrix, or --group and --set with --spectrum or --complement");
    };
    if a.spectrum.is_none() && a.complement.is_none() {
        bail!("--set needs --spectrum or --complement");
    }
    let g: GroupSpec = group
        .parse()
        .with_context(|| format!("group descriptor {group:?}"))?;
    let set = input::parse_set(&g, set, "set")?;
    if let Some(arg) = &a.spectrum {
        let spectrum = input::parse_set(&g, arg, "spectrum")?;
        let verdict = is_spectrum(&g, &set, &spectrum)?;
        report.check("is_spectrum", verdict.is_valid(), to_value(&verdict));
    }
    if let Some(comp) = &a.complement {
        let sigma = input::parse_set(&g, comp, "complement")?;
        let defect = tiling_defect(&g, &set, &sigma)?;
        let detail = match &defect {
            None => json!({ "verdict": "valid" }),
            Some(d) => json!({ "verdict": "invalid", "witness": d }),
        };
        report.check("verify_tiling", defect.is_none(), detail);
    }
    Ok(report)
}

fn lattice_from_h6(m: u64) -> Result<(LiftedSet, FrequencySet)> {
    let pair = descend(&spectrum_from_butson(&standard_h6())?)?;
    let cfg = LatticeConfig::new(pair.group.dimension(), m);
    Ok((
        build_omega1(&pair.set, &cfg)?,
        build_lambda1(&pair.spectrum, &cfg)?,
    ))
}

fn export(a: &ExportArgs) -> Result<Report> {
    let mut report = Report::new("export");
    let (lift, lambda) = lattice_from_h6(a.m)?;
    let omega2 = build_omega2(lift.points())?;
    export_geometry(&omega2, &lambda, &a.out)?;
    report.check(
        "export_geometry",
        true,
        json!({ "m": a.m, "cubes": omega2.corners().len(), "measure": omega2.measure(), "path": a.out }),
    );
    Ok(report)
}

fn parse_ratio(s: &str) -> Result<Ratio> {
    let (num, den) = s
        .split_once('/')
        .context("tolerance must look like num/den")?;
    let r = Ratio {
        num: num.trim().parse().context("tolerance numerator")?,
        den: den.trim().parse().context("tolerance denominator")?,
    };
    if r.den == 0 {
        bail!("tolerance denominator is zero");
    }
    Ok(r)
}

fn density(a: &DensityArgs) -> Result<Report> {
    let mut report = Report::new("density");
    let (lift, _) = lattice_from_h6(a.m)?;
    let scan = match a.trials {
        Some(trials) => WindowScan::Sampled {
            trials,
            seed: a.seed,
        },
        None => WindowScan::Exhaustive {
            stride: a.stride.unwrap_or(4),
        },
    };
    let tolerance = a.tolerance.as_deref().map(parse_ratio).transpose()?;
    let r = density_check(&lift, a.l, scan, tolerance)?;
    report.check("density_check", r.within_tolerance, to_value(&r));
    Ok(report)
}

fn verify_continuum(a: &ContinuumArgs) -> Result<Report> {
    let mut report = Report::new("verify-continuum");
    let (omega1, lambda) = match &a.geometry {
        Some(path) => {
            let (omega2, lambda) = import_geometry(path)?;
            (omega2.as_lattice_set(), lambda)
        }
        None => {
            let (lift, lambda) = lattice_from_h6(a.m)?;
            (lift.into_points(), lambda)
        }
    };
    continuum_stage(&omega1, &lambda, a.k_radius, a.pairs, a.seed, &mut report)?;
    Ok(report)
}
