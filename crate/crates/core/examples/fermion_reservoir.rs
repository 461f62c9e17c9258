//! The fermion-reservoir generator on pairs of levels, reduced to the
//! one-electron sector and compared with a laser atom.

use num_complex::Complex64 as C64;
use sl_laser::generators::{as_matter_block, build_dhlsl_generator, spin_mapped_reduction, spin_spec_of};
use sl_laser::matching::dhl_match_check;
use sl_laser::operator_core::{build_space, HilbertSpec, SiteKind};
use sl_laser::reservoir::GammaSet;

fn main() -> sl_laser::Result<()> {
    let fermions = build_space(HilbertSpec::laser(SiteKind::FermionPair, 1, 0, 2))?;
    let spins = build_space(spin_spec_of(&fermions))?;
    println!("fermion space {} -> spin space {}", fermions.dim(), spins.dim());

    // balanced: Re(B+ + C+) = Re(B− + C−)
    let g = GammaSet::dhl(vec![], C64::new(0.3, 0.2), C64::new(0.25, -0.1), C64::new(0.1, 0.05), C64::new(0.15, 0.3));
    let report = dhl_match_check(&g, 1e-10)?;
    print!("{report}");

    let full = build_dhlsl_generator(&g, &[], &fermions)?;
    let reduced = spin_mapped_reduction(&full, &spins)?;
    let laser = as_matter_block(&report.resolved.atom, &spins.matter_sites(), &spins)?;
    println!("spin-mapped vs laser matter block: {:.2e}", reduced.relative_distance(&laser)?);

    let unbalanced = GammaSet::dhl(vec![], C64::new(0.5, 0.0), C64::new(0.1, 0.0), C64::new(0.1, 0.0), C64::new(0.1, 0.0));
    println!("unbalanced status: {:?}", dhl_match_check(&unbalanced, 1e-10)?.status);
    Ok(())
}
