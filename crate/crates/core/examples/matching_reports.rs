//! Going back and forth between laser parameters and reservoir coefficients.

use num_complex::Complex64 as C64;
use sl_laser::generators::ASParams;
use sl_laser::matching::{as_from_hl_gammas, hl_gamma_targets_from_as};
use sl_laser::reservoir::GammaSet;

fn main() -> sl_laser::Result<()> {
    let mut p = ASParams {
        half_chain: 0,
        epsilon: 1.3,
        gamma1: 0.4,
        gamma2: 0.8,
        eta: 0.25,
        omega: vec![1.1],
        kappa: vec![0.3],
        lambda: vec![0.5],
    };
    let t = hl_gamma_targets_from_as(&p, 0.0, 1e-10)?;
    println!("coefficients for matched rates:");
    let (h1, h2) = t.gammas.hl_matter()?;
    println!("  g0 = {}, h1 = {h1}, h2 = {h2}", t.gammas.radiation[0]);
    print!("{}", as_from_hl_gammas(&t.gammas, 1e-10)?);

    // extra dephasing has no counterpart in the boson-reservoir model
    p.gamma1 = 0.55;
    let t = hl_gamma_targets_from_as(&p, 0.0, 1e-10)?;
    println!("\nwith gamma1 = {}: {:?}", p.gamma1, t.report.status);

    let g = GammaSet::hl(vec![C64::new(0.2, 1.0)], C64::new(0.05, 0.9), C64::new(0.3, -0.4));
    println!("\nfrom raw coefficients:");
    print!("{}", as_from_hl_gammas(&g, 1e-10)?);
    Ok(())
}
