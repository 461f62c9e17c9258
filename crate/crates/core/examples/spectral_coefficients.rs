//! Reservoir coefficients for a few spectral densities, with the
//! regularization table behind each one.

use sl_laser::reservoir::{gamma_minus, Detuning, GammaOptions, Interval, SpectralDensity};

fn main() -> sl_laser::Result<()> {
    let omega_r = 2.0;
    let densities = [
        ("flat", SpectralDensity::flat(1.0, 2.0, 1.5)?),
        ("lorentzian", SpectralDensity::lorentzian(0.5, 2.3, 0.4)?),
        ("gaussian", SpectralDensity::gaussian(0.8, 1.5, 0.7)?),
        ("band-limited", SpectralDensity::lorentzian(0.5, 2.3, 0.4)?.restricted(Interval::new(1.0, 4.0)?)?),
    ];
    for (name, j) in &densities {
        let exact = gamma_minus(j, Detuning::plus(omega_r), &GammaOptions::default())?;
        let quad = gamma_minus(j, Detuning::plus(omega_r), &GammaOptions::quadrature_only())?;
        println!(
            "{name:>13}: Γ = {:.10} (quadrature {:.10}, residual {:.1e}, warning {})",
            exact.value, quad.value, quad.report.residual, quad.report.warning
        );
    }

    // a detuning without a root in the support leaves only the principal value
    let above = SpectralDensity::flat(1.0, 3.0, 0.5)?;
    let g = gamma_minus(&above, Detuning::plus(-omega_r), &GammaOptions::default())?;
    println!("no resonance in support: {} -> Γ = {:.10}", g.no_resonance_in_support, g.value);

    let j = &densities[2].1;
    let r = gamma_minus(j, Detuning::plus(omega_r), &GammaOptions::quadrature_only())?.report;
    println!("ε-table for the gaussian:");
    for (e, v) in r.eps_seq.iter().zip(&r.values) {
        println!("  ε = {e:<10} Γ(ε) = {v:.10}");
    }
    println!("  extrapolated      {:.10}", r.extrapolated);
    Ok(())
}
