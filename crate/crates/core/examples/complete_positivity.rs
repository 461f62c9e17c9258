//! Kossakowski matrices of valid and invalid generators.

use num_complex::Complex64 as C64;
use sl_laser::generators::{build_as_generator, build_hlsl_generator, ASParams};
use sl_laser::operator_core::{build_space, HilbertSpec, SiteKind};
use sl_laser::reservoir::GammaSet;

fn main() -> sl_laser::Result<()> {
    let space = build_space(HilbertSpec::laser(SiteKind::Spin, 0, 1, 2))?;
    let p = ASParams {
        half_chain: 0,
        epsilon: 1.0,
        gamma1: 0.5,
        gamma2: 0.7,
        eta: -0.2,
        omega: vec![0.9],
        kappa: vec![0.1],
        lambda: vec![0.5],
    };
    let r = build_as_generator(&p, &space)?.kossakowski(1e-10)?;
    println!("laser:           min {:+.3e}, max {:+.3e}, cp {}", r.min_eigenvalue, r.max_eigenvalue, r.completely_positive);

    let good = GammaSet::hl(vec![C64::new(0.2, 1.0)], C64::new(0.1, 0.3), C64::new(0.4, -0.2));
    let r = build_hlsl_generator(&good, &[0.5], &space)?.kossakowski(1e-10)?;
    println!("reservoir:       min {:+.3e}, max {:+.3e}, cp {}", r.min_eigenvalue, r.max_eigenvalue, r.completely_positive);

    // a negative damping rate is still trace preserving but not CP
    let bad = GammaSet::hl(vec![C64::new(0.2, 1.0)], C64::new(-0.3, 0.3), C64::new(0.4, -0.2));
    let l = build_hlsl_generator(&bad, &[0.5], &space)?;
    let r = l.kossakowski(1e-10)?;
    println!("negative rate:   min {:+.3e}, max {:+.3e}, cp {}", r.min_eigenvalue, r.max_eigenvalue, r.completely_positive);
    println!("conservation defect of the bad generator {:.1e}", l.conservation_defect());
    Ok(())
}
