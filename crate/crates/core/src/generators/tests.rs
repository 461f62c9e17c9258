use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::operator_core::{
    boson, build_space, fermion, pauli, BosonOp, CsrMatrix, HilbertSpec, Ladder, Level, Pauli, SiteKind, SpaceHandle,
    SparseOp,
};
use crate::reservoir::GammaSet;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn as_params(n_half: usize, modes: usize, lambda: f64) -> ASParams {
    ASParams {
        half_chain: n_half,
        epsilon: 1.3,
        gamma1: 0.7,
        gamma2: 1.1,
        eta: 0.35,
        omega: (0..modes).map(|l| 1.0 + 0.2 * l as f64).collect(),
        kappa: (0..modes).map(|l| 0.4 + 0.1 * l as f64).collect(),
        lambda: vec![lambda; modes],
    }
}

fn laser(n_half: usize, modes: usize, cutoff: usize) -> SpaceHandle {
    build_space(HilbertSpec::laser(SiteKind::Spin, n_half, modes, cutoff)).unwrap()
}

fn random_op(space: &SpaceHandle, rng: &mut ChaCha8Rng) -> SparseOp {
    let d = space.dim();
    let v: Vec<C64> = (0..d * d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SparseOp::from_vec(space, &v).unwrap()
}

fn diff(a: &SparseOp, b: &SparseOp) -> f64 {
    a.max_abs_diff(b).unwrap()
}

#[test]
fn as_actions_on_spin_basis_without_coupling() {
    let s = laser(1, 1, 2);
    let p = as_params(1, 1, 0.0);
    let l = build_as_generator(&p, &s).unwrap();
    for site in 0..3 {
        let sp = pauli(Pauli::Plus, site, &s).unwrap();
        let sm = pauli(Pauli::Minus, site, &s).unwrap();
        let sz = pauli(Pauli::Z, site, &s).unwrap();
        let id = SparseOp::identity(&s);
        assert!(diff(&l.apply(&sp).unwrap(), &sp.scale(-c(p.gamma1, -p.epsilon))) < 1e-13);
        assert!(diff(&l.apply(&sm).unwrap(), &sm.scale(-c(p.gamma1, p.epsilon))) < 1e-13);
        let expect = (&sz - &id.scale_re(p.eta)).scale_re(-p.gamma2);
        assert!(diff(&l.apply(&sz).unwrap(), &expect) < 1e-13);
    }
    let a = boson(BosonOp::Annihilate, 3, &s).unwrap();
    assert!(diff(&l.apply(&a).unwrap(), &a.scale(-c(p.kappa[0], p.omega[0]))) < 1e-13);
}

#[test]
fn as_with_coupling_adds_interaction_commutator() {
    let s = laser(0, 1, 3);
    let p = as_params(0, 1, 0.6);
    let blocks = build_as_blocks(&p, &s).unwrap();
    let l = blocks.total();
    let sp = pauli(Pauli::Plus, 0, &s).unwrap();
    let a = boson(BosonOp::Annihilate, 1, &s).unwrap();
    // φ₀ = −iλa, H = σ₊φ₀ + h.c.
    let phi = a.scale(c(0.0, -0.6));
    let t = &sp * &phi;
    let h = &t + &t.adjoint();
    let expect = &sp.scale(-c(p.gamma1, -p.epsilon)) + &h.commutator(&sp).unwrap().scale(c(0.0, 1.0));
    assert!(diff(&l.apply(&sp).unwrap(), &expect) < 1e-13);
    assert!(blocks.interaction.frobenius_norm() > 0.0);
}

#[test]
fn builders_conserve_identity_and_hermiticity() {
    let s = laser(1, 2, 1);
    let p = as_params(1, 2, 0.4);
    let g = GammaSet::hl(vec![c(0.3, 1.1), c(0.2, 0.9)], c(0.1, 0.4), c(0.25, -0.2));
    let fs = build_space(HilbertSpec::laser(SiteKind::FermionPair, 0, 1, 2)).unwrap();
    let gd = GammaSet::dhl(vec![c(0.3, 1.0)], c(0.1, 0.2), c(0.3, -0.1), c(0.05, 0.3), c(0.2, 0.0));
    for l in [
        build_as_generator(&p, &s).unwrap(),
        build_hlsl_generator(&g, &[0.4, -0.3], &s).unwrap(),
        build_dhlsl_generator(&gd, &[0.7], &fs).unwrap(),
    ] {
        let scale = l.frobenius_norm();
        assert!(l.conservation_defect() <= 1e-12 * scale, "{}", l.provenance().model);
        assert!(l.hermiticity_defect() <= 1e-12 * scale, "{}", l.provenance().model);
        assert!(l.to_schrodinger().conservation_defect() <= 1e-12 * scale);
    }
}

#[test]
fn hl_matter_actions() {
    let s = build_space(HilbertSpec::new(vec![SiteKind::Spin])).unwrap();
    let (g1, g2) = (c(0.3, 0.7), c(0.45, -0.2));
    let l = build_hlsl_generator(&GammaSet::hl(vec![], g1, g2), &[], &s).unwrap();
    let sp = pauli(Pauli::Plus, 0, &s).unwrap();
    let sz = pauli(Pauli::Z, 0, &s).unwrap();
    let id = SparseOp::identity(&s);
    assert!(diff(&l.apply(&sp).unwrap(), &sp.scale(-(g1.conj() + g2))) < 1e-15);
    let expect = &sz.scale_re(-2.0 * (g1 + g2).re) + &id.scale_re(2.0 * (g2 - g1).re);
    assert!(diff(&l.apply(&sz).unwrap(), &expect) < 1e-15);
}

#[test]
fn hl_radiation_on_annihilator() {
    let s = laser(0, 1, 4);
    let g = c(0.35, 1.7);
    let l = build_hlsl_blocks(&GammaSet::hl(vec![g], c(0.0, 0.0), c(0.0, 0.0)), &[0.0], &s).unwrap();
    let a = boson(BosonOp::Annihilate, 1, &s).unwrap();
    assert!(diff(&l.radiation.apply(&a).unwrap(), &a.scale(-g)) < 1e-14);
    assert_eq!(l.matter.frobenius_norm(), 0.0);
}

#[test]
fn as_equals_hlsl_under_matching() {
    let s = laser(0, 1, 3);
    let mut p = as_params(0, 1, 0.8);
    p.gamma2 = 2.0 * p.gamma1;
    let r1 = 0.25 * p.gamma2 * (1.0 - p.eta);
    let r2 = 0.25 * p.gamma2 * (1.0 + p.eta);
    let g = GammaSet::hl(vec![c(p.kappa[0], p.omega[0])], c(r1, 0.5 * p.epsilon), c(r2, -0.5 * p.epsilon));
    let a = build_as_generator(&p, &s).unwrap();
    let h = build_hlsl_generator(&g, &p.lambda, &s).unwrap();
    assert!(h.relative_distance(&a).unwrap() < 1e-13);
}

#[test]
fn dhl_spin_basis_actions() {
    let fs = build_space(HilbertSpec::new(vec![SiteKind::FermionPair])).unwrap();
    let (bp, bm, cp, cm) = (c(0.3, 0.2), c(0.15, -0.4), c(0.05, 0.7), c(0.22, 0.1));
    let l = build_dhlsl_generator(&GammaSet::dhl(vec![], bp, bm, cp, cm), &[], &fs).unwrap();
    let b_up = fermion(Level::Upper, Ladder::Annihilate, 0, &fs).unwrap();
    let b_lo = fermion(Level::Lower, Ladder::Annihilate, 0, &fs).unwrap();
    let np = &b_up.adjoint() * &b_up;
    let nm = &b_lo.adjoint() * &b_lo;
    let id = SparseOp::identity(&fs);
    let x = &b_up.adjoint() * &b_lo;
    let sigma = (bp + bm + cp + cm).re;
    let theta = (bp - bm - cp + cm).im;
    assert!(diff(&l.apply(&x).unwrap(), &x.scale(-c(sigma, -theta))) < 1e-15);
    let z = &np - &nm;
    let expect = (&(&(&np.scale_re(-(bp + cp).re) + &id.scale_re(cp.re)) + &nm.scale_re((bm + cm).re))
        - &id.scale_re(cm.re))
        .scale_re(2.0);
    assert!(diff(&l.apply(&z).unwrap(), &expect) < 1e-15);
}

#[test]
fn zero_dhl_generator_vanishes() {
    let fs = build_space(HilbertSpec::laser(SiteKind::FermionPair, 0, 1, 2)).unwrap();
    let z = c(0.0, 0.0);
    let l = build_dhlsl_generator(&GammaSet::dhl(vec![z], z, z, z, z), &[0.0], &fs).unwrap();
    assert_eq!(l.matrix().nnz(), 0);
}

#[test]
fn spin_mapped_dhl_matches_as_matter_when_balanced() {
    let fs = build_space(HilbertSpec::new(vec![SiteKind::FermionPair])).unwrap();
    let ss = build_space(spin_spec_of(&fs)).unwrap();
    // Re(B+ + C+) = Re(B− + C−) = 0.35
    let (bp, bm, cp, cm) = (c(0.3, 0.2), c(0.15, -0.4), c(0.05, 0.7), c(0.2, 0.1));
    let l = build_dhlsl_generator(&GammaSet::dhl(vec![], bp, bm, cp, cm), &[], &fs).unwrap();
    let red = spin_mapped_reduction(&l, &ss).unwrap();
    let sigma = (bp + bm + cp + cm).re;
    let rates = AtomRates {
        epsilon: (bp - bm - cp + cm).im,
        gamma1: sigma,
        gamma2: sigma,
        eta: 2.0 * (cp - cm).re / sigma,
    };
    let a = as_matter_block(&rates, &[0], &ss).unwrap();
    assert!(red.relative_distance(&a).unwrap() < 1e-13);
}

#[test]
fn spin_mapping_rejects_wrong_space() {
    let fs = build_space(HilbertSpec::new(vec![SiteKind::FermionPair])).unwrap();
    let z = c(0.0, 0.0);
    let l = build_dhlsl_generator(&GammaSet::dhl(vec![], z, z, z, z), &[], &fs).unwrap();
    let wrong = build_space(HilbertSpec::new(vec![SiteKind::Spin, SiteKind::Spin])).unwrap();
    assert!(matches!(spin_mapped_reduction(&l, &wrong), Err(Error::SpaceMismatch)));
}

#[test]
fn dual_satisfies_trace_pairing() {
    let s = laser(0, 1, 2);
    let l = build_as_generator(&as_params(0, 1, 0.5), &s).unwrap();
    let ls = l.to_schrodinger();
    assert_eq!(ls.picture(), Picture::Schrodinger);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let rho = random_op(&s, &mut rng);
        let x = random_op(&s, &mut rng);
        let lhs = (&ls.apply_state(&rho).unwrap() * &x).trace();
        let rhs = (&rho * &l.apply(&x).unwrap()).trace();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        assert!(ls.apply_state(&rho).unwrap().trace().norm() < 1e-12);
    }
    assert!(matches!(ls.apply(&SparseOp::identity(&s)), Err(Error::PictureMismatch { .. })));
    assert!(ls.to_heisenberg().relative_distance(&l).unwrap() == 0.0);
}

#[test]
fn apply_is_linear_and_checks_space() {
    let s = laser(0, 1, 2);
    let l = build_as_generator(&as_params(0, 1, 0.5), &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (x, y) = (random_op(&s, &mut rng), random_op(&s, &mut rng));
    let lhs = l.apply(&(&x + &y)).unwrap();
    let rhs = &l.apply(&x).unwrap() + &l.apply(&y).unwrap();
    assert!(diff(&lhs, &rhs) < 1e-13);
    assert!(l.apply(&SparseOp::identity(&s)).unwrap().frobenius_norm() < 1e-13);
    let other = laser(0, 1, 3);
    assert!(matches!(l.apply(&SparseOp::identity(&other)), Err(Error::SpaceMismatch)));
}

#[test]
fn binary_round_trip() {
    let s = laser(0, 1, 1);
    let l = build_as_generator(&as_params(0, 1, 0.5), &s).unwrap();
    let mut buf = Vec::new();
    l.write_binary(&mut buf).unwrap();
    let d = s.dim();
    assert_eq!(buf.len(), 24 + 16 * d.pow(4));
    assert_eq!(&buf[..8], &BINARY_MAGIC);
    assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), d as u64);
    let back = Superoperator::read_binary(&buf[..], &s).unwrap();
    assert_eq!(back.relative_distance(&l).unwrap(), 0.0);
    // entry (r, c) of the matrix sits at pair index r + d² c
    let (r, cc, v) = l.matrix().iter().next().unwrap();
    let off = 24 + 16 * (r + d * d * cc);
    assert_eq!(f64::from_le_bytes(buf[off..off + 8].try_into().unwrap()), v.re);
    assert!(matches!(Superoperator::read_binary(&buf[..buf.len() - 1], &s), Err(Error::Io(_))));
    let other = laser(0, 1, 2);
    assert!(matches!(Superoperator::read_binary(&buf[..], &other), Err(Error::Format(_))));
}

#[test]
fn kossakowski_detects_positivity() {
    let s = laser(0, 1, 2);
    let l = build_as_generator(&as_params(0, 1, 0.5), &s).unwrap();
    let r = l.kossakowski(1e-10).unwrap();
    assert!(r.completely_positive && r.min_eigenvalue >= -1e-10, "{r:?}");
    // flipping the sign of a damping rate breaks complete positivity
    let g = GammaSet::hl(vec![c(-0.2, 1.0)], c(0.3, 0.0), c(0.1, 0.0));
    let bad = build_hlsl_generator(&g, &[0.0], &s).unwrap();
    let r = bad.kossakowski(1e-10).unwrap();
    assert!(!r.completely_positive && r.min_eigenvalue < -0.1, "{r:?}");
    let zero = Superoperator::zero(&s, Picture::Heisenberg);
    let r = zero.kossakowski(1e-10).unwrap();
    assert_eq!((r.min_eigenvalue, r.max_eigenvalue), (0.0, 0.0));
}

#[test]
fn kossakowski_rejects_non_hermitian_maps() {
    let s = build_space(HilbertSpec::new(vec![SiteKind::Spin])).unwrap();
    let t = vec![(0, 1, c(1.0, 0.0))];
    let l = Superoperator::new(&s, Picture::Heisenberg, CsrMatrix::from_triplets(4, 4, t), Provenance::new("custom", String::new()))
        .unwrap();
    assert!(matches!(l.kossakowski(1e-10), Err(Error::DecompositionFailure(_))));
}

#[test]
fn damped_mode_kernel_is_vacuum() {
    let s = build_space(HilbertSpec::new(vec![SiteKind::BosonMode { cutoff: 3 }])).unwrap();
    let l = as_radiation_block(&[1.0], &[0.5], &[0], &s).unwrap();
    assert_eq!(l.kernel_dimension(1e-10).unwrap(), 1);
    let vac = SparseOp::new(&s, CsrMatrix::from_triplets(4, 4, vec![(0, 0, c(1.0, 0.0))])).unwrap();
    assert!(l.to_schrodinger().apply_state(&vac).unwrap().frobenius_norm() < 1e-14);
}

#[test]
fn matter_is_local_without_coupling() {
    let s = laser(1, 1, 1);
    let l = build_as_generator(&as_params(1, 1, 0.0), &s).unwrap();
    let x = pauli(Pauli::X, 2, &s).unwrap();
    let y = l.apply(&x).unwrap();
    // result commutes with operators on the other sites
    for site in [0, 1] {
        for w in [Pauli::X, Pauli::Z] {
            let o = pauli(w, site, &s).unwrap();
            assert!(y.commutator(&o).unwrap().frobenius_norm() < 1e-14);
        }
    }
}

#[test]
fn summary_reports_structure() {
    let s = laser(0, 1, 1);
    let l = build_as_generator(&as_params(0, 1, 0.5), &s).unwrap();
    let text = l.summary().to_string();
    assert!(text.contains("picture: Heisenberg"));
    assert!(text.contains("completely_positive: true"), "{text}");
    assert!(text.contains("kernel_dimension: 1"), "{text}");
}

#[test]
fn layout_is_checked() {
    let s = build_space(HilbertSpec::new(vec![SiteKind::BosonMode { cutoff: 1 }, SiteKind::Spin])).unwrap();
    assert!(matches!(build_as_generator(&as_params(0, 1, 0.5), &s), Err(Error::SpaceMismatch)));
    let s = laser(0, 2, 1);
    assert!(matches!(
        build_hlsl_generator(&GammaSet::hl(vec![c(1.0, 0.0)], c(0.0, 0.0), c(0.0, 0.0)), &[0.0, 0.0], &s),
        Err(Error::ParamMismatch(_))
    ));
}
