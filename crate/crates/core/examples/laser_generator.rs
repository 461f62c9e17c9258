//! Builds the dissipative laser generator on a three-atom chain with two
//! modes and prints its block norms and summary.

use sl_laser::generators::{build_as_blocks, ASParams};
use sl_laser::operator_core::{build_space, HilbertSpec, SiteKind};

fn main() -> sl_laser::Result<()> {
    let p = ASParams {
        half_chain: 1,
        epsilon: 1.2,
        gamma1: 0.5,
        gamma2: 0.8,
        eta: 0.4,
        omega: vec![1.0, 1.4],
        kappa: vec![0.2, 0.35],
        lambda: vec![0.6, -0.3],
    };
    p.validate()?;
    let space = build_space(HilbertSpec::laser(SiteKind::Spin, p.half_chain, p.modes(), 2))?;
    let blocks = build_as_blocks(&p, &space)?;
    for (name, b) in blocks.iter() {
        println!("{name:>12}: ‖L‖ = {:.6}, nnz = {}", b.frobenius_norm(), b.matrix().nnz());
    }
    print!("{}", blocks.total().summary());
    Ok(())
}
