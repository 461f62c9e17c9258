//! Time evolution of a laser chain in both pictures, ending with the
//! stationary state.

use sl_laser::dynamics::{evolve, heisenberg_expectations, preset_state, steady_state, EvolveOptions, InitialState};
use sl_laser::generators::{build_as_generator, ASParams};
use sl_laser::operator_core::{boson, build_space, pauli, BosonOp, HilbertSpec, Pauli, SiteKind};

fn main() -> sl_laser::Result<()> {
    let p = ASParams {
        half_chain: 0,
        epsilon: 1.0,
        gamma1: 0.3,
        gamma2: 0.6,
        eta: 0.8,
        omega: vec![1.0],
        kappa: vec![0.2],
        lambda: vec![0.4],
    };
    let space = build_space(HilbertSpec::laser(SiteKind::Spin, 0, 1, 4))?;
    let l = build_as_generator(&p, &space)?;
    let ad = boson(BosonOp::Create, 1, &space)?;
    let observables = vec![
        ("sz".to_string(), pauli(Pauli::Z, 0, &space)?),
        ("n".to_string(), &ad * &ad.adjoint()),
    ];
    let rho0 = preset_state(InitialState::AllUp, &space);
    let times: Vec<f64> = (0..=8).map(|k| k as f64).collect();
    let opts = EvolveOptions::with_tol(1e-10);

    let s = evolve(&l.to_schrodinger(), &rho0, &observables, &times, &opts)?;
    let h = heisenberg_expectations(&l, &observables, &rho0, &times, &opts)?;
    println!("{:>4} {:>12} {:>12} {:>10}", "t", "<sz>", "<n>", "pictures");
    for (k, t) in s.times.iter().enumerate() {
        let gap = (s.values[k][0] - h.values[k][0]).norm().max((s.values[k][1] - h.values[k][1]).norm());
        println!("{t:>4} {:>12.8} {:>12.8} {gap:>10.1e}", s.values[k][0].re, s.values[k][1].re);
    }
    println!("trace deviation {:.1e}, min eigenvalue {:.1e}, {} steps", s.max_trace_dev(), s.min_eig(), s.stats.accepted);

    let rho = steady_state(&l.to_schrodinger())?;
    let sz = (&rho * &observables[0].1).trace().re;
    let n = (&rho * &observables[1].1).trace().re;
    println!("stationary: <sz> = {sz:.8}, <n> = {n:.8}");
    Ok(())
}
