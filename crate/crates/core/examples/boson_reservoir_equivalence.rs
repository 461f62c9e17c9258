//! The boson-reservoir generator with coefficients read off the laser
//! parameters coincides with the laser generator, block by block.

use sl_laser::generators::{build_as_blocks, build_hlsl_blocks, ASParams};
use sl_laser::matching::hl_gamma_targets_from_as;
use sl_laser::operator_core::{build_space, HilbertSpec, SiteKind};

fn main() -> sl_laser::Result<()> {
    let p = ASParams {
        half_chain: 1,
        epsilon: 1.3,
        gamma1: 0.45,
        gamma2: 0.9,
        eta: 0.3,
        omega: vec![1.1],
        kappa: vec![0.25],
        lambda: vec![0.6],
    };
    let space = build_space(HilbertSpec::laser(SiteKind::Spin, p.half_chain, 1, 3))?;
    for imaginary_sum in [0.0, 0.7] {
        let targets = hl_gamma_targets_from_as(&p, imaginary_sum, 1e-10)?;
        let hl = build_hlsl_blocks(&targets.gammas, &p.lambda, &space)?;
        let laser = build_as_blocks(&p, &space)?;
        println!("imaginary sum {imaginary_sum}:");
        for ((name, a), (_, b)) in laser.iter().zip(hl.iter()) {
            println!("  {name:>12}: relative distance {:.2e}", b.relative_distance(a)?);
        }
        println!("  {:>12}: relative distance {:.2e}", "total", hl.total().relative_distance(&laser.total())?);
    }
    Ok(())
}
