//! Model-level composite operators: the collective radiation field and the
//! two-level-atom operators built from paired fermi levels.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::local::{boson, fermion, fermion_basis, BosonOp, Ladder, Level};
use super::op::SparseOp;
use super::space::{SiteKind, SpaceHandle};
use crate::error::{Error, Result};

/// Parameters of the collective radiation field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldParams {
    /// Half chain length `N`; the lattice has `2N+1` sites.
    pub half_chain: usize,
    /// Real mode couplings `λ_l`, one per boson mode.
    pub couplings: Vec<f64>,
}

/// `φ_r = −i (2N+1)^{−1/2} Σ_l λ_l a_l exp(2πi l r / n)` for `r = −N, …, N`,
/// returned in lattice order (index `r + N`). Mode `l` is the `l`-th boson
/// site of `space`.
pub fn radiation_field(params: &FieldParams, space: &SpaceHandle) -> Result<Vec<SparseOp>> {
    let modes = space.boson_sites();
    let n = params.couplings.len();
    if n != modes.len() {
        return Err(Error::ParamMismatch(format!(
            "{} couplings for {} boson modes",
            n,
            modes.len()
        )));
    }
    let nsites = 2 * params.half_chain + 1;
    let norm = (nsites as f64).powf(-0.5);
    let ladders = modes
        .iter()
        .map(|&m| boson(BosonOp::Annihilate, m, space))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(nsites);
    for idx in 0..nsites {
        let r = idx as i64 - params.half_chain as i64;
        let mut phi = SparseOp::zero(space);
        for (l, (a, &lam)) in ladders.iter().zip(&params.couplings).enumerate() {
            let phase = C64::from_polar(1.0, 2.0 * PI * (l as f64) * (r as f64) / n as f64);
            let coef = C64::new(0.0, -norm * lam) * phase;
            phi = &phi + &a.scale(coef);
        }
        out.push(phi);
    }
    Ok(out)
}

/// `(σ₊, σ₋, σ_z) = (b₊†b₋, b₋†b₊, b₊†b₊ − b₋†b₋)` at a fermion-pair site.
pub fn spin_from_fermions(site: usize, space: &SpaceHandle) -> Result<(SparseOp, SparseOp, SparseOp)> {
    let bp = fermion(Level::Upper, Ladder::Annihilate, site, space)?;
    let bm = fermion(Level::Lower, Ladder::Annihilate, site, space)?;
    let (bpd, bmd) = (bp.adjoint(), bm.adjoint());
    let sp = &bpd * &bm;
    let sm = &bmd * &bp;
    let sz = (&(&bpd * &bp) - &(&bmd * &bm)).with_hermitian_hint(true);
    Ok((sp, sm, sz))
}

/// Projector onto the one-electron states of the fermion pair at `site`.
pub fn physical_projector(site: usize, space: &SpaceHandle) -> Result<SparseOp> {
    let k = space.site_kind(site)?;
    if k != SiteKind::FermionPair {
        return Err(Error::SiteMismatch { site, reason: format!("expected FermionPair, found {k}") });
    }
    let id = SparseOp::identity(space);
    let sp = space.clone();
    Ok(id.compress(move |g| {
        let l = sp.local_index(g, site);
        l == fermion_basis::LOWER || l == fermion_basis::UPPER
    }))
}

/// True when every fermion-pair site of basis state `g` holds one electron.
pub fn is_physical_state(space: &SpaceHandle, g: usize) -> bool {
    space.sites_where(|k| *k == SiteKind::FermionPair).into_iter().all(|s| {
        let l = space.local_index(g, s);
        l == fermion_basis::LOWER || l == fermion_basis::UPPER
    })
}

/// Bundle of the composite operators used by the model builders.
#[derive(Debug, Clone)]
pub struct CompositeModelOps {
    pub phi: Vec<SparseOp>,
    pub sigma_from_fermions: Vec<(SparseOp, SparseOp, SparseOp)>,
    pub projector_phys: Vec<SparseOp>,
}

impl CompositeModelOps {
    pub fn new(params: &FieldParams, space: &SpaceHandle) -> Result<Self> {
        let phi = radiation_field(params, space)?;
        let pairs = space.sites_where(|k| *k == SiteKind::FermionPair);
        let sigma_from_fermions = pairs.iter().map(|&s| spin_from_fermions(s, space)).collect::<Result<_>>()?;
        let projector_phys = pairs.iter().map(|&s| physical_projector(s, space)).collect::<Result<_>>()?;
        Ok(Self { phi, sigma_from_fermions, projector_phys })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::{build_space, HilbertSpec};

    #[test]
    fn single_mode_single_site_field_is_minus_i_a() {
        let s = build_space(HilbertSpec::laser(SiteKind::Spin, 0, 1, 3)).unwrap();
        let phi = radiation_field(&FieldParams { half_chain: 0, couplings: vec![1.0] }, &s).unwrap();
        let a = boson(BosonOp::Annihilate, 1, &s).unwrap();
        let expect = a.scale(C64::new(0.0, -1.0));
        assert_eq!(phi.len(), 1);
        assert_eq!(phi[0].max_abs_diff(&expect).unwrap(), 0.0);
    }

    #[test]
    fn prefactor_scales_with_chain_length() {
        for n_half in [0usize, 1, 2] {
            let s = build_space(HilbertSpec::laser(SiteKind::Spin, n_half, 1, 2)).unwrap();
            let phi = radiation_field(&FieldParams { half_chain: n_half, couplings: vec![1.0] }, &s).unwrap();
            let a = boson(BosonOp::Annihilate, 2 * n_half + 1, &s).unwrap();
            let scale = (2.0 * n_half as f64 + 1.0).powf(-0.5);
            for p in &phi {
                for (r, c, v) in p.matrix().iter() {
                    assert!((v.norm() - scale * a.get(r, c).norm()).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn two_mode_phases_alternate_in_sign() {
        // N = 1, n = 2: exp(2πi l r / 2) = (−1)^{l r}
        let s = build_space(HilbertSpec::laser(SiteKind::Spin, 1, 2, 1)).unwrap();
        let lam = [0.7, -1.3];
        let phi = radiation_field(&FieldParams { half_chain: 1, couplings: lam.to_vec() }, &s).unwrap();
        let a0 = boson(BosonOp::Annihilate, 3, &s).unwrap();
        let a1 = boson(BosonOp::Annihilate, 4, &s).unwrap();
        let norm = 3f64.powf(-0.5);
        for (idx, p) in phi.iter().enumerate() {
            let r = idx as i64 - 1;
            let sign = if r.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let direct = &a0.scale(C64::new(0.0, -norm * lam[0])) + &a1.scale(C64::new(0.0, -norm * lam[1] * sign));
            assert!(p.max_abs_diff(&direct).unwrap() < 1e-15);
        }
    }

    #[test]
    fn coupling_count_must_match_modes() {
        let s = build_space(HilbertSpec::laser(SiteKind::Spin, 0, 2, 1)).unwrap();
        let err = radiation_field(&FieldParams { half_chain: 0, couplings: vec![1.0] }, &s);
        assert!(matches!(err, Err(Error::ParamMismatch(_))));
    }

    #[test]
    fn fermion_built_spin_obeys_pauli_algebra_on_physical_states() {
        let s = build_space(HilbertSpec::new(vec![SiteKind::FermionPair])).unwrap();
        let (sp, sm, sz) = spin_from_fermions(0, &s).unwrap();
        let p = physical_projector(0, &s).unwrap();
        let anti = sp.anticommutator(&sm).unwrap();
        assert_eq!((&(&p * &anti) * &p).max_abs_diff(&p).unwrap(), 0.0);
        assert_eq!(sp.commutator(&sm).unwrap().compress(|g| g == 1 || g == 2).max_abs_diff(&sz).unwrap(), 0.0);
        assert_eq!((&sz * &sz).max_abs_diff(&p).unwrap(), 0.0);
        // σ_z b₊†Ψ₀ = +b₊†Ψ₀
        assert_eq!(sz.get(fermion_basis::UPPER, fermion_basis::UPPER), C64::new(1.0, 0.0));
        assert_eq!(sz.get(fermion_basis::LOWER, fermion_basis::LOWER), C64::new(-1.0, 0.0));
        // σ₊ kills ∅ and the doubly occupied state
        let col = |j: usize| sp.matrix().iter().filter(|&(_, c, _)| c == j).count();
        assert_eq!(col(fermion_basis::EMPTY), 0);
        assert_eq!(col(fermion_basis::BOTH), 0);
        assert_eq!(sp.get(fermion_basis::UPPER, fermion_basis::LOWER), C64::new(1.0, 0.0));
    }
}
