//! Subcommands behind the `sl-laser` binary. Each one reads a [`RunConfig`],
//! writes its result to `--output` and nothing else, and returns a short
//! text report for the terminal.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{BuildFormat, EvolvePicture, Model, RunConfig};
use crate::dynamics::{evolve, heisenberg_expectations, preset_state, EvolveOptions};
use crate::error::{Error, Result};
use crate::generators::{
    build_as_blocks, build_dhlsl_blocks, build_hlsl_blocks, spin_mapped_reduction, GeneratorBlocks, Superoperator,
};
use crate::matching::{as_from_hl_gammas, dhl_match_check, hl_gamma_targets_from_as};
use crate::operator_core::{boson, build_space, pauli, spin_from_fermions, BosonOp, Pauli, SiteKind, SpaceHandle, SparseOp};
use crate::reservoir::{ComputedGammaSet, GammaSet, Interval};
use crate::sl_oracle::convergence_report;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "SL_LASER_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sl-laser", version, about = "Laser generators from reservoir models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Γ coefficients of the configured reservoirs (CSV).
    Gamma(CommonArgs),
    /// Generator summary, or the raw matrix with `[build] format = "binary"`.
    Build(CommonArgs),
    /// Parameter dictionary between the reservoir models and the laser model.
    Match(CommonArgs),
    /// Block-by-block distance between two generators.
    Compare(CommonArgs),
    /// Trajectory of observables (CSV).
    Evolve(CommonArgs),
    /// Second-order convergence table (CSV).
    SlCheck(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Gamma(a)
            | Command::Build(a)
            | Command::Match(a)
            | Command::Compare(a)
            | Command::Evolve(a)
            | Command::SlCheck(a) => a,
        }
    }
}

/// 0 on success, 2 for invalid input, 3 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs the command and returns its exit code, reporting on stdout/stderr.
pub fn main_with(cli: &Cli) -> i32 {
    configure_threads();
    match run(&cli.command) {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cmd: &Command) -> Result<String> {
    let args = cmd.args();
    let cfg = RunConfig::load(&args.config)?;
    let log = |m: &str| {
        if args.verbose {
            eprintln!("[sl-laser] {m}");
        }
    };
    log(&format!("config {} (reference rate {})", args.config.display(), cfg.units.reference_rate));
    let (bytes, report) = match cmd {
        Command::Gamma(_) => gamma_cmd(&cfg)?,
        Command::Build(_) => build_cmd(&cfg)?,
        Command::Match(_) => match_cmd(&cfg)?,
        Command::Compare(_) => compare_cmd(&cfg)?,
        Command::Evolve(_) => evolve_cmd(&cfg)?,
        Command::SlCheck(_) => sl_check_cmd(&cfg)?,
    };
    std::fs::write(&args.output, bytes)?;
    log(&format!("wrote {}", args.output.display()));
    Ok(report)
}

type Outcome = (Vec<u8>, String);

fn gamma_source(cfg: &RunConfig) -> Result<Model> {
    match cfg.system.model {
        Model::As if cfg.hl.is_some() => Ok(Model::Hl),
        Model::As if cfg.dhl.is_some() => Ok(Model::Dhl),
        Model::As => Err(Error::Config("gamma needs an [hl] or [dhl] section".into())),
        m => Ok(m),
    }
}

fn computed_gammas(cfg: &RunConfig, model: Model) -> Result<(ComputedGammaSet, Vec<f64>)> {
    let opts = cfg.gamma.options();
    match model {
        Model::Hl => {
            let (p, lambda) = cfg.hl_params()?;
            Ok((p.gamma_set(&opts)?, lambda))
        }
        Model::Dhl => {
            let (p, lambda) = cfg.dhl_params()?;
            Ok((p.gamma_set(&opts)?, lambda))
        }
        Model::As => unreachable!("the laser model has no reservoir"),
    }
}

fn gamma_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let model = gamma_source(cfg)?;
    let (g, _) = computed_gammas(cfg, model)?;
    let mut csv = String::from("label,re,im,resonance,no_resonance_in_support,residual,warning\n");
    let mut text = format!("model = {}\n", model.name());
    for (label, c) in &g.coefficients {
        writeln!(
            csv,
            "{label},{:.16e},{:.16e},{:.16e},{},{:.3e},{}",
            c.value.re, c.value.im, c.resonance, c.no_resonance_in_support, c.report.residual, c.report.warning
        )
        .unwrap();
        writeln!(text, "{label} = {:.12} {:+.12}i", c.value.re, c.value.im).unwrap();
    }
    if g.any_warning() {
        text.push_str("warning: at least one coefficient missed the regularization tolerance\n");
    }
    Ok((csv.into_bytes(), text))
}

fn spin_space(cfg: &RunConfig) -> Result<SpaceHandle> {
    build_space(cfg.space_spec(SiteKind::Spin))
}

fn fermion_space(cfg: &RunConfig) -> Result<SpaceHandle> {
    build_space(cfg.space_spec(SiteKind::FermionPair))
}

/// Blocks of `model` on its native space.
fn native_blocks(cfg: &RunConfig, model: Model) -> Result<GeneratorBlocks> {
    match model {
        Model::As => build_as_blocks(&cfg.as_params()?, &spin_space(cfg)?),
        Model::Hl => {
            let (g, lambda) = computed_gammas(cfg, Model::Hl)?;
            build_hlsl_blocks(&g.set, &lambda, &spin_space(cfg)?)
        }
        Model::Dhl => {
            let (g, lambda) = computed_gammas(cfg, Model::Dhl)?;
            build_dhlsl_blocks(&g.set, &lambda, &fermion_space(cfg)?)
        }
    }
}

fn build_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let l = native_blocks(cfg, cfg.system.model)?.total();
    let summary = l.summary().to_string();
    match cfg.build.format {
        BuildFormat::Summary => Ok((summary.clone().into_bytes(), summary)),
        BuildFormat::Binary => {
            let mut buf = Vec::new();
            l.write_binary(&mut buf)?;
            Ok((buf, summary))
        }
    }
}

fn match_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.matching.tolerance;
    let report = match cfg.system.model {
        Model::As => hl_gamma_targets_from_as(&cfg.as_params()?, cfg.matching.imaginary_sum, tol)?.report,
        Model::Hl => as_from_hl_gammas(&computed_gammas(cfg, Model::Hl)?.0.set, tol)?,
        Model::Dhl => dhl_match_check(&computed_gammas(cfg, Model::Dhl)?.0.set, tol)?,
    };
    let text = report.to_string();
    Ok((text.clone().into_bytes(), text))
}

/// Both sides of a comparison as blocks on the spin space. A missing side is
/// derived from the other through the parameter dictionary.
fn comparison_blocks(cfg: &RunConfig, left: Model, right: Model) -> Result<(GeneratorBlocks, GeneratorBlocks)> {
    let (other, as_first) = match (left, right) {
        (Model::As, m @ (Model::Hl | Model::Dhl)) => (m, true),
        (m @ (Model::Hl | Model::Dhl), Model::As) => (m, false),
        _ => return Err(Error::Config("compare pairs the laser model (as) with hl or dhl".into())),
    };
    let spins = spin_space(cfg)?;
    let tol = cfg.matching.tolerance;
    let half_chain = cfg.system.half_chain;
    let (a, b) = match other {
        Model::Hl => {
            let (gammas, lambda): (GammaSet, Vec<f64>) = if cfg.hl.is_some() {
                let (g, l) = computed_gammas(cfg, Model::Hl)?;
                (g.set, l)
            } else {
                let p = cfg.as_params()?;
                (hl_gamma_targets_from_as(&p, cfg.matching.imaginary_sum, tol)?.gammas, p.lambda)
            };
            let p = if cfg.as_params.is_some() {
                cfg.as_params()?
            } else {
                as_from_hl_gammas(&gammas, tol)?.resolved.to_as_params(half_chain, lambda.clone())
            };
            (build_as_blocks(&p, &spins)?, build_hlsl_blocks(&gammas, &lambda, &spins)?)
        }
        _ => {
            let (g, lambda) = computed_gammas(cfg, Model::Dhl)?;
            let p = if cfg.as_params.is_some() {
                cfg.as_params()?
            } else {
                dhl_match_check(&g.set, tol)?.resolved.to_as_params(half_chain, lambda.clone())
            };
            let native = build_dhlsl_blocks(&g.set, &lambda, &fermion_space(cfg)?)?;
            let reduce = |l: &Superoperator| spin_mapped_reduction(l, &spins);
            let mapped = GeneratorBlocks {
                radiation: reduce(&native.radiation)?,
                matter: reduce(&native.matter)?,
                interaction: reduce(&native.interaction)?,
            };
            (build_as_blocks(&p, &spins)?, mapped)
        }
    };
    Ok(if as_first { (a, b) } else { (b, a) })
}

fn compare_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.compare.as_ref().ok_or_else(|| Error::Config("compare needs a [compare] section".into()))?;
    let (a, b) = comparison_blocks(cfg, c.left, c.right)?;
    let mut out = String::from("block,left_norm,right_norm,absolute,relative\n");
    let mut rows: Vec<(&str, Superoperator, Superoperator)> =
        a.iter().zip(b.iter()).map(|((n, x), (_, y))| (n, x.clone(), y.clone())).collect();
    rows.push(("total", a.total(), b.total()));
    let mut text = format!("{} vs {}\n", c.left.name(), c.right.name());
    for (name, x, y) in &rows {
        let diff = x.sub(y)?.frobenius_norm();
        let nx = x.frobenius_norm();
        let rel = if nx > 0.0 { diff / nx } else { diff };
        writeln!(out, "{name},{:.16e},{:.16e},{:.16e},{:.16e}", nx, y.frobenius_norm(), diff, rel).unwrap();
        writeln!(text, "{name}: relative {rel:.3e}").unwrap();
    }
    Ok((out.into_bytes(), text))
}

fn observable(spec: &str, space: &SpaceHandle) -> Result<SparseOp> {
    let bad = || Error::Config(format!("observable '{spec}' is not of the form sz:k, sp:k, sm:k, n:l or a:l"));
    let (kind, idx) = spec.split_once(':').ok_or_else(bad)?;
    let idx: usize = idx.parse().map_err(|_| bad())?;
    let atoms = space.matter_sites();
    let modes = space.boson_sites();
    let pick = |v: &[usize]| {
        v.get(idx).copied().ok_or_else(|| Error::Config(format!("observable '{spec}': index out of range")))
    };
    match kind {
        "sz" | "sp" | "sm" => {
            let s = pick(&atoms)?;
            if space.site_kind(s)? == SiteKind::FermionPair {
                let (sp, sm, sz) = spin_from_fermions(s, space)?;
                return Ok(match kind {
                    "sz" => sz,
                    "sp" => sp,
                    _ => sm,
                });
            }
            let which = match kind {
                "sz" => Pauli::Z,
                "sp" => Pauli::Plus,
                _ => Pauli::Minus,
            };
            pauli(which, s, space)
        }
        "n" => boson(BosonOp::Number, pick(&modes)?, space),
        "a" => boson(BosonOp::Annihilate, pick(&modes)?, space),
        _ => Err(bad()),
    }
}

fn evolve_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let l = native_blocks(cfg, cfg.system.model)?.total();
    let space = l.space().clone();
    let names: Vec<String> = match &cfg.run.observables {
        Some(v) => v.clone(),
        None => (0..space.matter_sites().len())
            .map(|k| format!("sz:{k}"))
            .chain((0..space.boson_sites().len()).map(|l| format!("n:{l}")))
            .collect(),
    };
    let obs = names.iter().map(|n| Ok((n.clone(), observable(n, &space)?))).collect::<Result<Vec<_>>>()?;
    let rho0 = preset_state(cfg.run.initial, &space);
    let times = cfg.run.times()?;
    let opts = EvolveOptions::with_tol(cfg.run.tol);
    let traj = match cfg.run.picture {
        EvolvePicture::Schrodinger => evolve(&l.to_schrodinger(), &rho0, &obs, &times, &opts)?,
        EvolvePicture::Heisenberg => heisenberg_expectations(&l, &obs, &rho0, &times, &opts)?,
    };
    let text = format!(
        "{} output times, {} accepted / {} rejected steps, max trace deviation {:.3e}\n",
        traj.times.len(),
        traj.stats.accepted,
        traj.stats.rejected,
        traj.max_trace_dev()
    );
    Ok((traj.to_csv().into_bytes(), text))
}

fn sl_check_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let s = cfg.sl_check.as_ref().ok_or_else(|| Error::Config("sl-check needs an [sl_check] section".into()))?;
    let j = cfg.density(&s.density)?;
    let band = Interval::new(s.band[0], s.band[1])?;
    let t = convergence_report(&j, s.modes, band, s.omega_r, &s.lambdas, s.t, &cfg.gamma.options())?;
    let text = format!(
        "monotone = {}\nfinal_relative_error = {:.3e}\ndiscretization_floor = {:.3e}\ncounter_rotating_ratios = {:?}\n",
        t.monotone,
        t.final_relative_error(),
        t.discretization_floor,
        t.counter_rotating_ratios()
    );
    Ok((t.to_csv().into_bytes(), text))
}
