//! Local operators on a mixed chain: a two-level atom, a fermion pair and a
//! truncated mode.

use sl_laser::operator_core::{
    boson, build_space, fermion, pauli, physical_projector, spin_from_fermions, BosonOp, HilbertSpec, Ladder, Level,
    Pauli, SiteKind, SparseOp,
};

fn main() -> sl_laser::Result<()> {
    let space = build_space(HilbertSpec::new(vec![SiteKind::Spin, SiteKind::FermionPair, SiteKind::BosonMode { cutoff: 4 }]))?;
    println!("dimension {} over {} sites", space.dim(), space.num_sites());

    let sp = pauli(Pauli::Plus, 0, &space)?;
    let sm = pauli(Pauli::Minus, 0, &space)?;
    let sz = pauli(Pauli::Z, 0, &space)?;
    println!("|[σ+, σ−] − σz| = {:.1e}", sp.commutator(&sm)?.max_abs_diff(&sz)?);

    let a = boson(BosonOp::Annihilate, 2, &space)?;
    let comm = a.commutator(&a.adjoint())?;
    // the relation holds below the top occupation number
    let below = comm.compress(|g| space.local_index(g, 2) < 4);
    let id = SparseOp::identity(&space).compress(|g| space.local_index(g, 2) < 4);
    println!("|[a, a†] − I| below the cutoff = {:.1e}", below.max_abs_diff(&id)?);

    let up = fermion(Level::Upper, Ladder::Annihilate, 1, &space)?;
    let lo = fermion(Level::Lower, Ladder::Annihilate, 1, &space)?;
    println!("{{b+, b−}} vanishes: {:.1e}", up.anticommutator(&lo)?.frobenius_norm());

    let (qp, qm, qz) = spin_from_fermions(1, &space)?;
    let p = physical_projector(1, &space)?;
    println!("fermion spin: |[Q+, Q−] − Qz| = {:.1e}, |Qz² − P| = {:.1e}", qp.commutator(&qm)?.max_abs_diff(&qz)?, (&qz * &qz).max_abs_diff(&p)?);
    println!("operators on different sites commute: {:.1e}", sp.commutator(&a)?.frobenius_norm());
    Ok(())
}
