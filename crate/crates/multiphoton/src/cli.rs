//! Command-line front end.
//!
//! Subcommands: `check-canonical`, `expand`, `state`, `pnd`, `moments`,
//! `wigner`, `sweep`, `figures`. Every emitted CSV starts with a `#`-prefixed
//! JSON line holding the fully resolved run configuration; JSON outputs embed
//! the same object under a `config` key. Floats are printed with 12
//! significant digits so identical configurations produce byte-identical
//! files.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{
    check_canonical, expand_hamiltonian, expand_hamiltonian_numeric, CanonicalParams,
    NonlinearitySpec, Variant,
};
use crate::numerics::Grid;
use crate::states::{
    build_state, build_state_on, default_native_grid, psi_native, quadrature_stats,
    representation_transform, SampledWavefunction, StateFamily, StateParams,
};
use crate::statistics::{
    factorial_moment, fock_coefficients, fock_coefficients_auto, g_correlation,
    photon_number_distribution,
};
use crate::wigner::{default_axes, wigner_diagnostics, wigner_transform};

enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Numerical(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Entry point used by the `multiphoton` binary; returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let args: Vec<String> = argv.into_iter().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version go to stdout with success.
            if e.use_stderr() {
                eprint!("{e}");
                return 2;
            }
            print!("{e}");
            return 0;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            3
        }
    }
}

#[derive(Parser)]
#[command(
    name = "multiphoton",
    about = "Multiphoton canonical transformations, squeezed states, photon statistics, and Wigner functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonicity residuals of a transformation.
    CheckCanonical(CheckCanonicalArgs),
    /// Expand the multiphoton Hamiltonian b†b + 1/2 in normal order.
    Expand(ExpandArgs),
    /// Emit a sampled wavefunction as CSV.
    State(StateCmdArgs),
    /// Emit the photon number distribution P(n) as CSV.
    Pnd(PndArgs),
    /// Emit {mean_n, g2, g4, tail_mass, N} as JSON.
    Moments(MomentsArgs),
    /// Emit the Wigner distribution as CSV plus a diagnostics JSON.
    Wigner(WignerCmdArgs),
    /// Sweep r or gamma-tilde and emit one row per value.
    Sweep(SweepArgs),
    /// Write the data behind the six reference figures plus a manifest.
    Figures(FiguresArgs),
}

/// Shared state parameters. Exactly one of α/β must be supplied (via the
/// `--alpha-*` or `--beta-*` pairs); missing flags fall back to the config
/// file, then to defaults.
#[derive(Args, Clone, Default)]
struct StateOpts {
    /// State family: tpss | fpss1 | fpss2
    #[arg(long)]
    family: Option<String>,
    /// Squeezing parameter r
    #[arg(long)]
    r: Option<f64>,
    /// Real coupling strength γ̃ ≥ 0
    #[arg(long = "gamma-tilde")]
    gamma_tilde: Option<f64>,
    /// Quadrature phase φ (must be 0; rejected otherwise)
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long = "alpha-re")]
    alpha_re: Option<f64>,
    #[arg(long = "alpha-im")]
    alpha_im: Option<f64>,
    #[arg(long = "beta-re")]
    beta_re: Option<f64>,
    #[arg(long = "beta-im")]
    beta_im: Option<f64>,
    /// key=value file mirroring the long flags; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct GridOpts {
    #[arg(long = "x-min")]
    x_min: Option<f64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long = "n-points")]
    n_points: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct FockOpts {
    /// Fock truncation (default: automatic ladder until the tail < 1e-8)
    #[arg(long = "fock-n")]
    fock_n: Option<usize>,
    /// Gauss–Hermite node count (default: truncation + 128, at least 320)
    #[arg(long = "gh-nodes")]
    gh_nodes: Option<usize>,
}

#[derive(Args)]
struct CheckCanonicalArgs {
    /// Variant: I (nonlinearity on X1) or II (on X2)
    #[arg(long)]
    variant: String,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long = "gamma-tilde")]
    gamma_tilde: Option<f64>,
    /// Free complex coefficients (override the r/γ̃ parameterization)
    #[arg(long = "mu-re")]
    mu_re: Option<f64>,
    #[arg(long = "mu-im")]
    mu_im: Option<f64>,
    #[arg(long = "nu-re")]
    nu_re: Option<f64>,
    #[arg(long = "nu-im")]
    nu_im: Option<f64>,
    #[arg(long = "gamma-re")]
    gamma_re: Option<f64>,
    #[arg(long = "gamma-im")]
    gamma_im: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    /// Variant: I or II
    #[arg(long)]
    variant: String,
    /// Nonlinearity, e.g. "X2^2" (polynomial in the variant's quadrature)
    #[arg(long = "F")]
    f: Option<String>,
    /// Print symbolic coefficients in mu, nu, gamma
    #[arg(long)]
    symbolic: bool,
    /// Emit the term list as JSON instead of text
    #[arg(long)]
    json: bool,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long = "gamma-tilde")]
    gamma_tilde: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StateCmdArgs {
    #[command(flatten)]
    state: StateOpts,
    #[command(flatten)]
    grid: GridOpts,
    /// Representation to emit: x1 (default) or x2
    #[arg(long, default_value = "x1")]
    representation: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PndArgs {
    #[command(flatten)]
    state: StateOpts,
    #[command(flatten)]
    fock: FockOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    state: StateOpts,
    #[command(flatten)]
    fock: FockOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WignerCmdArgs {
    #[command(flatten)]
    state: StateOpts,
    /// CSV output path (required; the map is too large for a terminal)
    #[arg(long)]
    out: PathBuf,
    /// Diagnostics JSON path (default: <out stem>.diagnostics.json)
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Axis points per side (default 201)
    #[arg(long = "axis-points")]
    axis_points: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    state: StateOpts,
    #[command(flatten)]
    fock: FockOpts,
    /// Which parameter to vary: r | gamma-tilde
    #[arg(long)]
    vary: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    step: f64,
    /// Quantity: g2 | g4 | mean-n | var-x1 | var-x2
    #[arg(long)]
    quantity: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Output directory for fig1.csv … fig6.csv and manifest.json
    #[arg(long, default_value = "./figdata")]
    out: PathBuf,
}

/// Fully resolved run configuration, echoed into every output.
#[derive(Serialize, Clone)]
struct RunConfig {
    subcommand: String,
    family: String,
    r: f64,
    gamma_tilde: f64,
    alpha: [f64; 2],
    beta: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fock_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gh_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    representation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm_residual: Option<f64>,
}

fn sig(v: f64) -> String {
    format!("{v:.11e}")
}

fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!(
                "config {}:{}: expected key=value, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn config_get<T: std::str::FromStr>(
    cfg: &BTreeMap<String, String>,
    key: &str,
) -> CliResult<Option<T>> {
    match cfg.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{raw}`"))),
    }
}

struct ResolvedState {
    params: StateParams,
    family_label: String,
}

fn parse_family(name: &str) -> CliResult<StateFamily> {
    match name.to_ascii_lowercase().as_str() {
        "tpss" => Ok(StateFamily::Tpss),
        "fpss1" | "fpss-i" | "fpssi" => Ok(StateFamily::FpssI),
        "fpss2" | "fpss-ii" | "fpssii" => Ok(StateFamily::FpssII),
        other => Err(CliError::usage(format!(
            "unknown family `{other}` (expected tpss | fpss1 | fpss2)"
        ))),
    }
}

fn resolve_state(opts: &StateOpts) -> CliResult<ResolvedState> {
    let cfg = match &opts.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    let family_name: String = opts
        .family
        .clone()
        .or(cfg.get("family").cloned())
        .ok_or_else(|| CliError::usage("missing --family"))?;
    let family = parse_family(&family_name)?;
    let r = match opts.r {
        Some(v) => v,
        None => config_get(&cfg, "r")?.unwrap_or(0.0),
    };
    let phi = match opts.phi {
        Some(v) => v,
        None => config_get(&cfg, "phi")?.unwrap_or(0.0),
    };
    if phi != 0.0 {
        return Err(CliError::usage(format!(
            "the phase φ is fixed to 0 in this artifact; got φ = {phi}"
        )));
    }
    let gamma_tilde = match opts.gamma_tilde {
        Some(v) => v,
        None => config_get(&cfg, "gamma-tilde")?.unwrap_or(0.0),
    };
    let pick = |flag: Option<f64>, key: &str| -> CliResult<Option<f64>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => config_get(&cfg, key),
        }
    };
    let alpha_re = pick(opts.alpha_re, "alpha-re")?;
    let alpha_im = pick(opts.alpha_im, "alpha-im")?;
    let beta_re = pick(opts.beta_re, "beta-re")?;
    let beta_im = pick(opts.beta_im, "beta-im")?;
    let has_alpha = alpha_re.is_some() || alpha_im.is_some();
    let has_beta = beta_re.is_some() || beta_im.is_some();
    let params = match (has_alpha, has_beta) {
        (true, true) => {
            return Err(CliError::usage(
                "supply exactly one of alpha (--alpha-re/--alpha-im) or beta (--beta-re/--beta-im)",
            ))
        }
        (false, false) => {
            return Err(CliError::usage(
                "missing amplitude: supply --alpha-re/--alpha-im or --beta-re/--beta-im",
            ))
        }
        (true, false) => StateParams::from_alpha(
            family,
            r,
            gamma_tilde,
            Complex64::new(alpha_re.unwrap_or(0.0), alpha_im.unwrap_or(0.0)),
        ),
        (false, true) => StateParams::from_beta(
            family,
            r,
            gamma_tilde,
            Complex64::new(beta_re.unwrap_or(0.0), beta_im.unwrap_or(0.0)),
        ),
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(ResolvedState {
        params,
        family_label: family_name.to_ascii_lowercase(),
    })
}

fn run_config(
    subcommand: &str,
    st: &ResolvedState,
    grid: Option<Grid>,
    fock_n: Option<usize>,
    gh_nodes: Option<usize>,
    representation: Option<String>,
) -> RunConfig {
    let beta = st.params.beta();
    RunConfig {
        subcommand: subcommand.to_string(),
        family: st.family_label.clone(),
        r: st.params.r,
        gamma_tilde: st.params.gamma_tilde,
        alpha: [st.params.alpha.re, st.params.alpha.im],
        beta: [beta.re, beta.im],
        grid,
        fock_n,
        gh_nodes,
        representation,
        norm_residual: None,
    }
}

fn header_line(config: &RunConfig) -> String {
    format!(
        "# {}",
        serde_json::to_string(config).expect("config serializes")
    )
}

fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => {
            if let Some(dir) = p.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir).map_err(|e| {
                        CliError::Numerical(format!("mkdir {}: {e}", dir.display()))
                    })?;
                }
            }
            std::fs::write(p, content)
                .map_err(|e| CliError::Numerical(format!("write {}: {e}", p.display())))
        }
    }
}

fn parse_variant(text: &str) -> CliResult<Variant> {
    match text.to_ascii_uppercase().as_str() {
        "I" | "1" => Ok(Variant::I),
        "II" | "2" => Ok(Variant::II),
        other => Err(CliError::usage(format!(
            "unknown variant `{other}` (expected I or II)"
        ))),
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::CheckCanonical(a) => cmd_check_canonical(a),
        Cmd::Expand(a) => cmd_expand(a),
        Cmd::State(a) => cmd_state(a),
        Cmd::Pnd(a) => cmd_pnd(a),
        Cmd::Moments(a) => cmd_moments(a),
        Cmd::Wigner(a) => cmd_wigner(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Figures(a) => cmd_figures(a),
    }
}

fn cmd_check_canonical(a: CheckCanonicalArgs) -> CliResult<()> {
    let variant = parse_variant(&a.variant)?;
    let explicit = a.mu_re.is_some()
        || a.mu_im.is_some()
        || a.nu_re.is_some()
        || a.nu_im.is_some()
        || a.gamma_re.is_some()
        || a.gamma_im.is_some();
    let (mu, nu, gamma) = if explicit {
        (
            Complex64::new(a.mu_re.unwrap_or(1.0), a.mu_im.unwrap_or(0.0)),
            Complex64::new(a.nu_re.unwrap_or(0.0), a.nu_im.unwrap_or(0.0)),
            Complex64::new(a.gamma_re.unwrap_or(0.0), a.gamma_im.unwrap_or(0.0)),
        )
    } else {
        let params = CanonicalParams::new(
            a.r.ok_or_else(|| {
                CliError::usage("supply --r or explicit --mu-re/--nu-re/--gamma-re values")
            })?,
            a.gamma_tilde.unwrap_or(0.0),
            variant,
        );
        (
            Complex64::new(params.mu(), 0.0),
            Complex64::new(params.nu(), 0.0),
            params.gamma(),
        )
    };
    let (r1, r2) = check_canonical(mu, nu, gamma, variant);
    let body = serde_json::json!({
        "variant": variant.to_string(),
        "mu": [mu.re, mu.im],
        "nu": [nu.re, nu.im],
        "gamma": [gamma.re, gamma.im],
        "bogoliubov_residual": r1,
        "linear_residual": r2,
        "canonical": r1.abs() < 1e-12 && r2.abs() < 1e-12,
    });
    write_output(
        a.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
    )
}

fn cmd_expand(a: ExpandArgs) -> CliResult<()> {
    let variant = parse_variant(&a.variant)?;
    let f = match &a.f {
        Some(text) => NonlinearitySpec::parse(text, variant.quadrature())
            .map_err(|e| CliError::usage(e.to_string()))?,
        None => NonlinearitySpec::zero(variant.quadrature()),
    };
    let mut out = String::new();
    if a.symbolic || a.r.is_none() {
        let h = expand_hamiltonian(variant, &f)?;
        if a.json {
            let terms = h.to_term_json();
            writeln!(out, "{}", serde_json::to_string_pretty(&terms).unwrap()).unwrap();
        } else {
            writeln!(out, "H = {h}").unwrap();
        }
    } else {
        let params = CanonicalParams::new(a.r.unwrap(), a.gamma_tilde.unwrap_or(0.0), variant);
        let terms = expand_hamiltonian_numeric(&params, &f)?;
        if a.json {
            let list: Vec<serde_json::Value> = terms
                .iter()
                .map(|(m, z)| {
                    serde_json::json!({
                        "daggers": m.dagger_power,
                        "annihilators": m.annihilation_power,
                        "coefficient": [z.re, z.im],
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&list).unwrap()).unwrap();
        } else {
            for (m, z) in &terms {
                writeln!(out, "{:<12} {} + {}i", m.to_string(), sig(z.re), sig(z.im)).unwrap();
            }
        }
    }
    write_output(a.out.as_deref(), &out)
}

fn state_csv(psi: &SampledWavefunction, config: &RunConfig) -> String {
    let mut out = String::new();
    writeln!(out, "{}", header_line(config)).unwrap();
    writeln!(out, "x,re_psi,im_psi,density").unwrap();
    for (i, v) in psi.values.iter().enumerate() {
        let x = psi.grid.point(i);
        writeln!(
            out,
            "{},{},{},{}",
            sig(x),
            sig(v.re),
            sig(v.im),
            sig(v.norm_sqr())
        )
        .unwrap();
    }
    out
}

fn cmd_state(a: StateCmdArgs) -> CliResult<()> {
    let st = resolve_state(&a.state)?;
    let custom_grid = match (a.grid.x_min, a.grid.x_max, a.grid.n_points) {
        (None, None, None) => None,
        (Some(lo), Some(hi), Some(n)) => {
            Some(Grid::new(lo, hi, n).map_err(|e| CliError::usage(e.to_string()))?)
        }
        _ => {
            return Err(CliError::usage(
                "grid spec needs all of --x-min, --x-max, --n-points",
            ))
        }
    };
    let psi = match a.representation.to_ascii_lowercase().as_str() {
        "x1" => build_state_on(&st.params, custom_grid.as_ref())?,
        "x2" => {
            let (_, variant) = st.params.nonlinearity();
            if variant == Variant::II {
                let def = default_native_grid(&st.params);
                psi_native(&st.params, custom_grid.as_ref().unwrap_or(&def))?
            } else {
                let x1 = build_state(&st.params)?;
                let def = default_native_grid(&StateParams {
                    family: StateFamily::Generic(NonlinearitySpec::zero(2), Variant::II),
                    ..st.params.clone()
                });
                representation_transform(&x1, custom_grid.as_ref().unwrap_or(&def))?
            }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown representation `{other}` (expected x1 or x2)"
            )))
        }
    };
    let mut config = run_config(
        "state",
        &st,
        Some(psi.grid),
        None,
        None,
        Some(psi.representation.to_string()),
    );
    config.norm_residual = Some(psi.norm_residual);
    write_output(a.out.as_deref(), &state_csv(&psi, &config))
}

fn fock_of(params: &StateParams, fock: &FockOpts) -> CliResult<crate::statistics::FockExpansion> {
    let psi = build_state(params)?;
    let f = match fock.fock_n {
        Some(n) => fock_coefficients(&psi, n, fock.gh_nodes)?,
        None => fock_coefficients_auto(&psi)?,
    };
    Ok(f)
}

fn cmd_pnd(a: PndArgs) -> CliResult<()> {
    let st = resolve_state(&a.state)?;
    let f = fock_of(&st.params, &a.fock)?;
    let p = photon_number_distribution(&f);
    let config = run_config("pnd", &st, None, Some(f.truncation()), a.fock.gh_nodes, None);
    let mut out = String::new();
    writeln!(out, "{}", header_line(&config)).unwrap();
    writeln!(out, "n,p").unwrap();
    for (n, v) in p.iter().enumerate() {
        writeln!(out, "{n},{}", sig(*v)).unwrap();
    }
    write_output(a.out.as_deref(), &out)
}

fn cmd_moments(a: MomentsArgs) -> CliResult<()> {
    let st = resolve_state(&a.state)?;
    let f = fock_of(&st.params, &a.fock)?;
    let mean_n = factorial_moment(&f, 1)?;
    let g2 = g_correlation(&f, 2)?;
    let g4 = g_correlation(&f, 4)?;
    let config = run_config(
        "moments",
        &st,
        None,
        Some(f.truncation()),
        a.fock.gh_nodes,
        None,
    );
    let body = serde_json::json!({
        "config": config,
        "mean_n": mean_n,
        "g2": g2,
        "g4": g4,
        "tail_mass": f.tail_mass,
        "N": f.truncation(),
    });
    write_output(
        a.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
    )
}

fn wigner_csv(w: &crate::wigner::WignerGrid, config: &RunConfig) -> String {
    let mut out = String::new();
    writeln!(out, "{}", header_line(config)).unwrap();
    writeln!(out, "x,p,w").unwrap();
    for ix in 0..w.x_axis.n_points {
        let x = w.x_axis.point(ix);
        for ip in 0..w.p_axis.n_points {
            writeln!(
                out,
                "{},{},{}",
                sig(x),
                sig(w.p_axis.point(ip)),
                sig(w.value(ix, ip))
            )
            .unwrap();
        }
    }
    out
}

fn cmd_wigner(a: WignerCmdArgs) -> CliResult<()> {
    let st = resolve_state(&a.state)?;
    let psi = build_state(&st.params)?;
    let (mut xa, mut pa) = default_axes(&psi)?;
    if let Some(n) = a.axis_points {
        xa = Grid::new(xa.x_min, xa.x_max, n).map_err(|e| CliError::usage(e.to_string()))?;
        pa = Grid::new(pa.x_min, pa.x_max, n).map_err(|e| CliError::usage(e.to_string()))?;
    }
    let w = wigner_transform(&psi, &xa, &pa)?;
    let d = wigner_diagnostics(&w, &psi)?;
    let config = run_config("wigner", &st, Some(psi.grid), None, None, None);
    write_output(Some(&a.out), &wigner_csv(&w, &config))?;
    let diag_path = a.diagnostics.unwrap_or_else(|| {
        let mut p = a.out.clone();
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "wigner".to_string());
        p.set_file_name(format!("{stem}.diagnostics.json"));
        p
    });
    let body = serde_json::json!({ "config": config, "diagnostics": d });
    write_output(
        Some(&diag_path),
        &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
    )
}

fn sweep_values(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if step <= 0.0 || to < from {
        return Err(CliError::usage("sweep needs step > 0 and to ≥ from"));
    }
    let n = ((to - from) / step).round() as usize;
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

fn cmd_sweep(a: SweepArgs) -> CliResult<()> {
    let st = resolve_state(&a.state)?;
    let values = sweep_values(a.from, a.to, a.step)?;
    let quantity = a.quantity.to_ascii_lowercase();
    #[derive(Clone, Copy)]
    enum Q {
        G2,
        G4,
        MeanN,
        VarX1,
        VarX2,
    }
    let q = match quantity.as_str() {
        "g2" => Q::G2,
        "g4" => Q::G4,
        "mean-n" | "mean_n" => Q::MeanN,
        "var-x1" | "var_x1" => Q::VarX1,
        "var-x2" | "var_x2" => Q::VarX2,
        other => {
            return Err(CliError::usage(format!(
                "unknown quantity `{other}` (expected g2 | g4 | mean-n | var-x1 | var-x2)"
            )))
        }
    };
    let vary = a.vary.to_ascii_lowercase();
    if vary != "r" && vary != "gamma-tilde" && vary != "gamma_tilde" {
        return Err(CliError::usage(format!(
            "unknown sweep parameter `{vary}` (expected r | gamma-tilde)"
        )));
    }
    let beta = st.params.beta();
    let rows: Vec<CliResult<(f64, f64)>> = values
        .par_iter()
        .map(|&v| {
            let (r, g) = if vary == "r" {
                (v, st.params.gamma_tilde)
            } else {
                (st.params.r, v)
            };
            let params = StateParams::from_beta(st.params.family.clone(), r, g, beta)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let value = match q {
                Q::G2 | Q::G4 | Q::MeanN => {
                    let f = fock_of(
                        &params,
                        &FockOpts {
                            fock_n: a.fock.fock_n,
                            gh_nodes: a.fock.gh_nodes,
                        },
                    )?;
                    match q {
                        Q::G2 => g_correlation(&f, 2)?,
                        Q::G4 => g_correlation(&f, 4)?,
                        _ => factorial_moment(&f, 1)?,
                    }
                }
                Q::VarX1 | Q::VarX2 => {
                    let psi = build_state(&params)?;
                    let stats = quadrature_stats(&psi)?;
                    match q {
                        Q::VarX1 => stats.var_x1,
                        _ => stats.var_x2,
                    }
                }
            };
            Ok((v, value))
        })
        .collect();
    let config = run_config("sweep", &st, None, a.fock.fock_n, a.fock.gh_nodes, None);
    let mut out = String::new();
    writeln!(out, "{}", header_line(&config)).unwrap();
    writeln!(out, "{vary},{quantity}").unwrap();
    for row in rows {
        let (v, val) = row?;
        writeln!(out, "{},{}", sig(v), sig(val)).unwrap();
    }
    write_output(a.out.as_deref(), &out)
}

/// The hard-coded caption parameters behind the six reference figures.
pub mod presets {
    pub const BETA: f64 = 3.0 * std::f64::consts::SQRT_2;
    pub const R: f64 = 0.8;
    pub const GAMMA_FIG1: f64 = 0.14;
    pub const GAMMA_FIG2_FPSS2: [f64; 2] = [0.1, 0.5];
    pub const GAMMA_FIG2_FPSS1: f64 = 0.05;
    pub const GAMMA_CORRELATION: f64 = 0.1;
    pub const R_SWEEP_MAX: f64 = 2.0;
    pub const R_SWEEP_STEP: f64 = 0.02;
}

fn figure_state(family: StateFamily, r: f64, gamma: f64) -> CliResult<StateParams> {
    StateParams::from_beta(family, r, gamma, Complex64::new(presets::BETA, 0.0))
        .map_err(|e| CliError::Numerical(e.to_string()))
}

fn pnd_padded(params: &StateParams, len: usize) -> CliResult<Vec<f64>> {
    let psi = build_state(params)?;
    let f = fock_coefficients_auto(&psi)?;
    let mut p = photon_number_distribution(&f);
    p.resize(len, 0.0);
    Ok(p)
}

fn cmd_figures(a: FiguresArgs) -> CliResult<()> {
    std::fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Numerical(format!("mkdir {}: {e}", a.out.display())))?;
    let mut manifest = Vec::new();

    // fig1: |Ψ|² of the variant-II four-photon state.
    {
        let params = figure_state(StateFamily::FpssII, presets::R, presets::GAMMA_FIG1)?;
        let st = ResolvedState {
            params: params.clone(),
            family_label: "fpss2".to_string(),
        };
        let psi = build_state(&params)?;
        let config = run_config("figures/fig1", &st, Some(psi.grid), None, None, None);
        write_output(Some(&a.out.join("fig1.csv")), &state_csv(&psi, &config))?;
        manifest.push(serde_json::json!({
            "preset": "fig1",
            "file": "fig1.csv",
            "content": "x1-representation wavefunction and density of the fpss2 state",
            "family": "fpss2", "beta": [presets::BETA, 0.0], "r": presets::R,
            "gamma_tilde": presets::GAMMA_FIG1,
        }));
    }

    // fig2: P(n) for the tpss, fpss2 at two couplings, and fpss1.
    {
        let tpss = figure_state(StateFamily::Tpss, presets::R, 0.0)?;
        let f2a = figure_state(StateFamily::FpssII, presets::R, presets::GAMMA_FIG2_FPSS2[0])?;
        let f2b = figure_state(StateFamily::FpssII, presets::R, presets::GAMMA_FIG2_FPSS2[1])?;
        let f1 = figure_state(StateFamily::FpssI, presets::R, presets::GAMMA_FIG2_FPSS1)?;
        let len = 121;
        let p_tpss = pnd_padded(&tpss, len)?;
        let p_f2a = pnd_padded(&f2a, len)?;
        let p_f2b = pnd_padded(&f2b, len)?;
        let p_f1 = pnd_padded(&f1, len)?;
        let st = ResolvedState {
            params: tpss.clone(),
            family_label: "tpss".to_string(),
        };
        let config = run_config("figures/fig2", &st, None, Some(len - 1), None, None);
        let mut out = String::new();
        writeln!(out, "{}", header_line(&config)).unwrap();
        writeln!(out, "n,p_tpss,p_fpss2_g010,p_fpss2_g050,p_fpss1_g005").unwrap();
        for n in 0..len {
            writeln!(
                out,
                "{n},{},{},{},{}",
                sig(p_tpss[n]),
                sig(p_f2a[n]),
                sig(p_f2b[n]),
                sig(p_f1[n])
            )
            .unwrap();
        }
        write_output(Some(&a.out.join("fig2.csv")), &out)?;
        manifest.push(serde_json::json!({
            "preset": "fig2",
            "file": "fig2.csv",
            "content": "photon number distributions",
            "beta": [presets::BETA, 0.0], "r": presets::R,
            "gamma_tilde": {
                "fpss2": presets::GAMMA_FIG2_FPSS2,
                "fpss1": presets::GAMMA_FIG2_FPSS1,
                "tpss": 0.0
            },
        }));
    }

    // fig3 and fig4: Wigner maps of the two four-photon states.
    for (name, family) in [("fig3", StateFamily::FpssII), ("fig4", StateFamily::FpssI)] {
        let params = figure_state(family.clone(), presets::R, presets::GAMMA_FIG1)?;
        let label = match family {
            StateFamily::FpssII => "fpss2",
            _ => "fpss1",
        };
        let st = ResolvedState {
            params: params.clone(),
            family_label: label.to_string(),
        };
        let psi = build_state(&params)?;
        let (xa, pa) = default_axes(&psi)?;
        let w = wigner_transform(&psi, &xa, &pa)?;
        let d = wigner_diagnostics(&w, &psi)?;
        let config = run_config(
            &format!("figures/{name}"),
            &st,
            Some(psi.grid),
            None,
            None,
            None,
        );
        write_output(
            Some(&a.out.join(format!("{name}.csv"))),
            &wigner_csv(&w, &config),
        )?;
        let diag = serde_json::json!({ "config": config, "diagnostics": d });
        write_output(
            Some(&a.out.join(format!("{name}.diagnostics.json"))),
            &format!("{}\n", serde_json::to_string_pretty(&diag).unwrap()),
        )?;
        manifest.push(serde_json::json!({
            "preset": name,
            "file": format!("{name}.csv"),
            "content": format!("Wigner distribution of the {label} state"),
            "family": label, "beta": [presets::BETA, 0.0], "r": presets::R,
            "gamma_tilde": presets::GAMMA_FIG1,
        }));
    }

    // fig5 and fig6: g²(0) and g⁴(0) against r for the three families.
    {
        let n_steps = (presets::R_SWEEP_MAX / presets::R_SWEEP_STEP).round() as usize;
        let rs: Vec<f64> = (0..=n_steps)
            .map(|i| i as f64 * presets::R_SWEEP_STEP)
            .collect();
        let rows: Vec<CliResult<(f64, [f64; 6])>> = rs
            .par_iter()
            .map(|&r| {
                let mut row = [0.0; 6];
                for (slot, family, gamma) in [
                    (0usize, StateFamily::Tpss, 0.0),
                    (2, StateFamily::FpssI, presets::GAMMA_CORRELATION),
                    (4, StateFamily::FpssII, presets::GAMMA_CORRELATION),
                ] {
                    let params = figure_state(family, r, gamma)?;
                    let psi = build_state(&params)?;
                    let f = fock_coefficients_auto(&psi)?;
                    row[slot] = g_correlation(&f, 2)?;
                    row[slot + 1] = g_correlation(&f, 4)?;
                }
                Ok((r, row))
            })
            .collect();
        let tpss = figure_state(StateFamily::Tpss, 0.0, 0.0)?;
        let st = ResolvedState {
            params: tpss,
            family_label: "all".to_string(),
        };
        let mut out5 = String::new();
        let mut out6 = String::new();
        writeln!(
            out5,
            "{}",
            header_line(&run_config("figures/fig5", &st, None, None, None, None))
        )
        .unwrap();
        writeln!(out5, "r,g2_tpss,g2_fpss1,g2_fpss2").unwrap();
        writeln!(
            out6,
            "{}",
            header_line(&run_config("figures/fig6", &st, None, None, None, None))
        )
        .unwrap();
        writeln!(out6, "r,g4_tpss,g4_fpss1,g4_fpss2").unwrap();
        for row in rows {
            let (r, vals) = row?;
            writeln!(
                out5,
                "{},{},{},{}",
                sig(r),
                sig(vals[0]),
                sig(vals[2]),
                sig(vals[4])
            )
            .unwrap();
            writeln!(
                out6,
                "{},{},{},{}",
                sig(r),
                sig(vals[1]),
                sig(vals[3]),
                sig(vals[5])
            )
            .unwrap();
        }
        write_output(Some(&a.out.join("fig5.csv")), &out5)?;
        write_output(Some(&a.out.join("fig6.csv")), &out6)?;
        for (name, content) in [
            ("fig5", "g2(0) against r for the three families"),
            ("fig6", "g4(0) against r for the three families"),
        ] {
            manifest.push(serde_json::json!({
                "preset": name,
                "file": format!("{name}.csv"),
                "content": content,
                "beta": [presets::BETA, 0.0],
                "gamma_tilde": presets::GAMMA_CORRELATION,
                "r_range": [0.0, presets::R_SWEEP_MAX, presets::R_SWEEP_STEP],
            }));
        }
    }

    let manifest = serde_json::json!({ "figures": manifest });
    write_output(
        Some(&a.out.join("manifest.json")),
        &format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap()),
    )?;
    println!(
        "wrote fig1.csv … fig6.csv and manifest.json to {}",
        a.out.display()
    );
    Ok(())
}
