//! Convergence of the second-order stochastic-limit term on a discretized
//! flat band.

use sl_laser::reservoir::{GammaOptions, Interval, SpectralDensity};
use sl_laser::sl_oracle::{convergence_report, discretize, time_consecutive_check};

fn main() -> sl_laser::Result<()> {
    let j = SpectralDensity::flat(0.8, 3.0, 1.0)?;
    let band = Interval::new(2.0, 4.0)?;
    let table = convergence_report(&j, 400, band, 3.0, &[1.0, 0.5, 0.25, 0.125], 2.0, &GammaOptions::default())?;
    println!("Γ₋ = {:.10}", table.gamma_minus);
    println!("{:>8} {:>26} {:>10} {:>10}", "λ", "I/t", "error", "cross");
    for r in &table.rows {
        println!("{:>8} {:>26.10} {:>10.3e} {:>10.3e}", r.lambda, r.second_order / table.t, r.abs_error, r.counter_rotating);
    }
    println!("monotone {}, final relative error {:.2e}, floor {:.1e}", table.monotone, table.final_relative_error(), table.discretization_floor);
    println!("cross-term ratios {:?}", table.counter_rotating_ratios());

    // terms ordered against time vanish in the limit
    let res = discretize(&j, 400, band, Some(3.0))?;
    for lambda in [0.5, 0.25, 0.125] {
        println!("λ = {lambda}: out-of-order term {:.3e}", time_consecutive_check(&res, 3.0, lambda, 2.0, 1.0)?);
    }
    Ok(())
}
