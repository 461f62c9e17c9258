//! Time evolution under a built generator, with conservation monitors.

mod integrator;

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use integrator::{integrate, StepOptions, StepStats};

use crate::error::{Error, Result};
use crate::generators::{Picture, Superoperator, DENSE_ANALYSIS_CAP};
use crate::operator_core::{fermion_basis, CsrMatrix, SiteKind, SpaceHandle, SparseOp};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monitor {
    /// `|tr ρ − 1|`.
    pub trace_dev: f64,
    /// `max |ρ − ρ†|`.
    pub herm_dev: f64,
    /// Smallest eigenvalue of the hermitian part of `ρ`.
    pub min_eig: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    /// `values[k][m]` is observable `m` at `times[k]`.
    pub values: Vec<Vec<C64>>,
    pub monitors: Vec<Monitor>,
    pub stats: StepStats,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<Vec<C64>> {
        let m = self.names.iter().position(|n| n == name)?;
        Some(self.values.iter().map(|row| row[m]).collect())
    }

    pub fn max_trace_dev(&self) -> f64 {
        self.monitors.iter().map(|m| m.trace_dev).fold(0.0, f64::max)
    }

    pub fn max_herm_dev(&self) -> f64 {
        self.monitors.iter().map(|m| m.herm_dev).fold(0.0, f64::max)
    }

    pub fn min_eig(&self) -> f64 {
        self.monitors.iter().map(|m| m.min_eig).fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `t,<name>.re,<name>.im,…,trace_dev,herm_dev,min_eig`
    /// and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for n in &self.names {
            let _ = write!(s, ",{n}.re,{n}.im");
        }
        s.push_str(",trace_dev,herm_dev,min_eig\n");
        for ((t, row), m) in self.times.iter().zip(&self.values).zip(&self.monitors) {
            s.push_str(&fmt17(*t));
            for v in row {
                let _ = write!(s, ",{},{}", fmt17(v.re), fmt17(v.im));
            }
            let _ = writeln!(s, ",{},{},{}", fmt17(m.trace_dev), fmt17(m.herm_dev), fmt17(m.min_eig));
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_steps: 2_000_000 }
    }
}

impl EvolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn step(&self) -> StepOptions {
        StepOptions { tol: self.tol, monitor_bound: 100.0 * self.tol, max_steps: self.max_steps }
    }
}

/// Named initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Every atom in its lower level, every mode in the vacuum.
    AllDown,
    /// Every atom in its upper level, every mode in the vacuum.
    AllUp,
    MaximallyMixed,
}

pub fn preset_state(preset: InitialState, space: &SpaceHandle) -> SparseOp {
    let d = space.dim();
    if preset == InitialState::MaximallyMixed {
        return SparseOp::identity(space).scale_re(1.0 / d as f64);
    }
    let mut g = 0;
    for (s, k) in space.spec().sites.iter().enumerate() {
        let up = preset == InitialState::AllUp;
        let local = match k {
            SiteKind::Spin => usize::from(up),
            SiteKind::FermionPair => {
                if up {
                    fermion_basis::UPPER
                } else {
                    fermion_basis::LOWER
                }
            }
            SiteKind::BosonMode { .. } => 0,
        };
        g = g * space.site_dim(s) + local;
    }
    let m = CsrMatrix::from_triplets(d, d, vec![(g, g, C64::new(1.0, 0.0))]);
    SparseOp::new(space, m).expect("dimension matches").with_hermitian_hint(true)
}

fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn monitor_of(v: &[C64], d: usize) -> Monitor {
    let m = DMatrix::from_column_slice(d, d, v);
    let tr: C64 = (0..d).map(|i| m[(i, i)]).sum();
    let herm_dev = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eig = hermitian_part(&m).symmetric_eigenvalues();
    Monitor { trace_dev: (tr - C64::new(1.0, 0.0)).norm(), herm_dev, min_eig: eig.iter().copied().fold(f64::INFINITY, f64::min) }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() || times[0] < 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidState("time grid must be nonnegative, finite and strictly increasing".into()));
    }
    Ok(())
}

/// Checks that `rho` is a density matrix within `tol`.
pub fn check_density_matrix(rho: &SparseOp, tol: f64) -> Result<()> {
    let m = rho.to_dense();
    let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm > tol {
        return Err(Error::InvalidState(format!("initial state is not hermitian (deviation {herm:e})")));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::InvalidState(format!("initial state has trace {tr}")));
    }
    let min = hermitian_part(&m).symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(Error::InvalidState(format!("initial state has eigenvalue {min:e}")));
    }
    Ok(())
}

/// Integrates `∂_t ρ = L*(ρ)` and records `tr(ρ(t) X)` for each observable.
pub fn evolve(
    l: &Superoperator,
    rho0: &SparseOp,
    observables: &[(String, SparseOp)],
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    if l.picture() != Picture::Schrodinger {
        return Err(Error::PictureMismatch { expected: "Schrodinger" });
    }
    let space = l.space();
    if !space.same_as(rho0.space()) || observables.iter().any(|(_, x)| !space.same_as(x.space())) {
        return Err(Error::SpaceMismatch);
    }
    check_grid(times)?;
    check_density_matrix(rho0, 1e-12)?;
    let d = space.dim();
    // tr(ρ X) = Σ_{ij} ρ_ij X_ji = vec(Xᵀ) · vec(ρ)
    let xt: Vec<Vec<(usize, C64)>> = observables
        .iter()
        .map(|(_, x)| x.matrix().iter().map(|(i, j, v)| (j + d * i, v)).collect())
        .collect();
    let diag: Vec<usize> = (0..d).map(|i| i * (d + 1)).collect();
    let mut traj = Trajectory {
        times: Vec::with_capacity(times.len()),
        names: observables.iter().map(|(n, _)| n.clone()).collect(),
        values: Vec::with_capacity(times.len()),
        monitors: Vec::with_capacity(times.len()),
        stats: StepStats::default(),
    };
    let mat = l.matrix();
    traj.stats = integrate(
        |y, dy| mat.matvec_into(y, dy),
        |y| diag.iter().map(|&p| y[p].re).sum(),
        rho0.to_vec(),
        0.0,
        times,
        &opts.step(),
        |t, y| {
            traj.times.push(t);
            traj.values.push(xt.iter().map(|x| x.iter().map(|&(p, v)| v * y[p]).sum()).collect());
            traj.monitors.push(monitor_of(y, d));
            Ok(())
        },
    )?;
    Ok(traj)
}

/// Evolves the observables under `∂_t X = L(X)` and contracts with `ρ0`.
/// The identity is evolved alongside; the monitors describe it (trace
/// deviation `|tr ρ0 I(t) − 1|`, and the hermiticity and spectrum of `I(t)`).
pub fn heisenberg_expectations(
    l: &Superoperator,
    observables: &[(String, SparseOp)],
    rho0: &SparseOp,
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    if l.picture() != Picture::Heisenberg {
        return Err(Error::PictureMismatch { expected: "Heisenberg" });
    }
    let space = l.space();
    if !space.same_as(rho0.space()) || observables.iter().any(|(_, x)| !space.same_as(x.space())) {
        return Err(Error::SpaceMismatch);
    }
    check_grid(times)?;
    check_density_matrix(rho0, 1e-12)?;
    let d = space.dim();
    let n = d * d;
    let blocks = observables.len() + 1;
    let mut y0 = Vec::with_capacity(blocks * n);
    y0.extend(SparseOp::identity(space).to_vec());
    for (_, x) in observables {
        y0.extend(x.to_vec());
    }
    // ⟨X(t)⟩ = tr(ρ0 X(t)) = vec(ρ0ᵀ) · vec(X(t))
    let rt: Vec<(usize, C64)> = rho0.matrix().iter().map(|(i, j, v)| (j + d * i, v)).collect();
    let pair = |y: &[C64]| -> C64 { rt.iter().map(|&(p, v)| v * y[p]).sum() };
    let mat = l.matrix();
    let mut traj = Trajectory {
        times: Vec::with_capacity(times.len()),
        names: observables.iter().map(|(n, _)| n.clone()).collect(),
        values: Vec::with_capacity(times.len()),
        monitors: Vec::with_capacity(times.len()),
        stats: StepStats::default(),
    };
    traj.stats = integrate(
        |y, dy| {
            for b in 0..blocks {
                mat.matvec_into(&y[b * n..(b + 1) * n], &mut dy[b * n..(b + 1) * n]);
            }
        },
        |y| pair(&y[..n]).re,
        y0,
        0.0,
        times,
        &opts.step(),
        |t, y| {
            traj.times.push(t);
            traj.values.push((1..blocks).map(|b| pair(&y[b * n..(b + 1) * n])).collect());
            let mut m = monitor_of(&y[..n], d);
            m.trace_dev = (pair(&y[..n]) - C64::new(1.0, 0.0)).norm();
            traj.monitors.push(m);
            Ok(())
        },
    )?;
    Ok(traj)
}

/// Runs independent trajectories in parallel.
pub fn evolve_sweep(
    generators: &[Superoperator],
    rho0: &SparseOp,
    observables: &[(String, SparseOp)],
    times: &[f64],
    opts: &EvolveOptions,
) -> Vec<Result<Trajectory>> {
    generators.par_iter().map(|l| evolve(l, rho0, observables, times, opts)).collect()
}

/// The unique stationary state of a Schrödinger-picture generator, from the
/// right singular vector of its smallest singular value.
pub fn steady_state(l: &Superoperator) -> Result<SparseOp> {
    if l.picture() != Picture::Schrodinger {
        return Err(Error::PictureMismatch { expected: "Schrodinger" });
    }
    let d = l.dim();
    if d > DENSE_ANALYSIS_CAP {
        return Err(Error::DimensionCap { dim: d, cap: DENSE_ANALYSIS_CAP });
    }
    let svd = l.matrix().to_dense().svd(false, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let tol = 1e-10 * smax.max(1e-300);
    let kernel: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] <= tol).collect();
    if kernel.len() != 1 {
        return Err(Error::DegenerateKernel(kernel.len()));
    }
    let vt = svd.v_t.expect("requested");
    let v: Vec<C64> = vt.row(kernel[0]).iter().map(|z| z.conj()).collect();
    let m = DMatrix::from_column_slice(d, d, &v);
    let tr: C64 = (0..d).map(|i| m[(i, i)]).sum();
    if tr.norm() < 1e-12 {
        return Err(Error::DegenerateKernel(0));
    }
    let rho = hermitian_part(&(m / tr));
    Ok(SparseOp::from_dense(l.space(), &rho)?.with_hermitian_hint(true))
}
