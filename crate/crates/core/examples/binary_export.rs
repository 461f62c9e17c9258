//! Writes a generator to the binary format and reads it back.

use sl_laser::generators::{build_as_generator, ASParams, Superoperator, BINARY_MAGIC};
use sl_laser::operator_core::{build_space, HilbertSpec, SiteKind};

fn main() -> sl_laser::Result<()> {
    let p = ASParams {
        half_chain: 0,
        epsilon: 1.3,
        gamma1: 0.4,
        gamma2: 0.8,
        eta: 0.25,
        omega: vec![1.1],
        kappa: vec![0.3],
        lambda: vec![0.5],
    };
    let space = build_space(HilbertSpec::laser(SiteKind::Spin, 0, 1, 2))?;
    let l = build_as_generator(&p, &space)?;

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("laser.slsop");
    l.export_binary(&path)?;
    let bytes = std::fs::read(&path)?;
    println!("{} bytes, magic {:?}", bytes.len(), std::str::from_utf8(&bytes[..8]).unwrap_or("?"));
    assert_eq!(bytes[..8], BINARY_MAGIC);

    let back = Superoperator::import_binary(&path, &space)?;
    println!("round trip exact: {}", back.matrix() == l.matrix());
    println!("picture {}, provenance {:?}", back.picture(), back.provenance());

    // a different space is rejected
    let other = build_space(HilbertSpec::laser(SiteKind::Spin, 0, 1, 3))?;
    match Superoperator::import_binary(&path, &other) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("wrong space: {e}"),
    }
    Ok(())
}
