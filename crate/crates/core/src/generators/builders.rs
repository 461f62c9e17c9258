use num_complex::Complex64 as C64;

use super::params::{ASParams, AtomRates};
use super::superop::{Picture, Provenance, Superoperator, TermAccumulator};
use crate::error::{Error, Result};
use crate::operator_core::{
    boson, fermion_basis, radiation_field, spin_from_fermions, BosonOp, CsrMatrix, FieldParams, HilbertSpec, Pauli,
    SiteKind, SpaceHandle, SparseOp,
};
use crate::reservoir::GammaSet;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A generator split into its radiation, matter and interaction parts.
#[derive(Debug, Clone)]
pub struct GeneratorBlocks {
    pub radiation: Superoperator,
    pub matter: Superoperator,
    pub interaction: Superoperator,
}

impl GeneratorBlocks {
    pub fn total(&self) -> Superoperator {
        let sum = self
            .radiation
            .add(&self.matter)
            .and_then(|s| s.add(&self.interaction))
            .expect("blocks share a space and picture");
        let mut p = self.matter.provenance().clone();
        p.block = None;
        sum.with_provenance(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Superoperator)> {
        [("radiation", &self.radiation), ("matter", &self.matter), ("interaction", &self.interaction)].into_iter()
    }
}

/// Checks the `[matter × (2N+1), BosonMode × n]` layout and returns the
/// matter and boson site indices.
fn laser_layout(space: &SpaceHandle, matter: SiteKind, half_chain: usize, modes: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let sites = &space.spec().sites;
    let m = 2 * half_chain + 1;
    let ok = sites.len() == m + modes
        && sites[..m].iter().all(|k| *k == matter)
        && sites[m..].iter().all(|k| matches!(k, SiteKind::BosonMode { .. }));
    if !ok {
        return Err(Error::SpaceMismatch);
    }
    Ok(((0..m).collect(), (m..m + modes).collect()))
}

fn half_chain_of(space: &SpaceHandle, matter: SiteKind) -> Result<usize> {
    let m = space.spec().sites.iter().take_while(|k| **k == matter).count();
    if m % 2 == 0 {
        return Err(Error::SpaceMismatch);
    }
    Ok(m / 2)
}

fn pauli_ops(site: usize, space: &SpaceHandle) -> Result<(SparseOp, SparseOp, SparseOp)> {
    let p = |w| crate::operator_core::pauli(w, site, space);
    Ok((p(Pauli::Plus)?, p(Pauli::Minus)?, p(Pauli::Z)?))
}

/// `X ↦ i [Σ_r (φ_r Q_r + h.c.), X]` with `Q_r` the raising operator at site `r`.
fn interaction_block(
    raising: &[SparseOp],
    lambda: &[f64],
    half_chain: usize,
    space: &SpaceHandle,
    prov: Provenance,
) -> Result<Superoperator> {
    let mut acc = TermAccumulator::new(space.dim());
    if !lambda.is_empty() {
        let phi = radiation_field(&FieldParams { half_chain, couplings: lambda.to_vec() }, space)?;
        let mut h = SparseOp::zero(space);
        for (q, f) in raising.iter().zip(&phi) {
            let t = f * q;
            h = &(&h + &t) + &t.adjoint();
        }
        acc.hamiltonian(&h);
    }
    Ok(acc.finish(space, prov.block("interaction")))
}

/// Dissipative two-level generator on each listed spin site, in Lindblad form:
/// Hamiltonian `(ε/2) σ_z`, decay on `σ₋`, pump on `σ₊`, dephasing on `σ_z`.
/// No parameter bounds are enforced here.
pub fn as_matter_block(rates: &AtomRates, sites: &[usize], space: &SpaceHandle) -> Result<Superoperator> {
    let (decay, pump, deph) = rates.lindblad_rates();
    let mut acc = TermAccumulator::new(space.dim());
    for &s in sites {
        let (sp, sm, sz) = pauli_ops(s, space)?;
        acc.hamiltonian(&sz.scale_re(0.5 * rates.epsilon));
        for (rate, jump) in [(decay, &sm), (pump, &sp)] {
            if rate != 0.0 {
                let jd = jump.adjoint();
                let n = &jd * jump;
                acc.sandwich(C64::new(rate, 0.0), &jd, jump);
                acc.left(C64::new(-0.5 * rate, 0.0), &n);
                acc.right(C64::new(-0.5 * rate, 0.0), &n);
            }
        }
        if deph != 0.0 {
            acc.sandwich(C64::new(deph, 0.0), &sz, &sz);
            acc.scalar(C64::new(-deph, 0.0));
        }
    }
    Ok(acc.finish(space, Provenance::new("as", format!("{rates:?}")).block("matter")))
}

/// `Σ_l (i ω_l [a†a, ·] + 2κ_l a† (·) a − κ_l {a†a, ·})`.
pub fn as_radiation_block(omega: &[f64], kappa: &[f64], modes: &[usize], space: &SpaceHandle) -> Result<Superoperator> {
    let mut acc = TermAccumulator::new(space.dim());
    for ((&w, &k), &m) in omega.iter().zip(kappa).zip(modes) {
        let a = boson(BosonOp::Annihilate, m, space)?;
        let ad = a.adjoint();
        let n = &ad * &a;
        acc.hamiltonian(&n.scale_re(w));
        acc.sandwich(C64::new(2.0 * k, 0.0), &ad, &a);
        acc.left(C64::new(-k, 0.0), &n);
        acc.right(C64::new(-k, 0.0), &n);
    }
    Ok(acc.finish(space, Provenance::new("as", format!("omega={omega:?} kappa={kappa:?}")).block("radiation")))
}

pub fn build_as_blocks(p: &ASParams, space: &SpaceHandle) -> Result<GeneratorBlocks> {
    p.validate()?;
    let (atoms, modes) = laser_layout(space, SiteKind::Spin, p.half_chain, p.modes())?;
    let prov = Provenance::new("as", format!("{p:?}"));
    let matter = as_matter_block(&p.atom(), &atoms, space)?.with_provenance(prov.clone().block("matter"));
    let radiation = as_radiation_block(&p.omega, &p.kappa, &modes, space)?.with_provenance(prov.clone().block("radiation"));
    let raising = atoms.iter().map(|&s| crate::operator_core::pauli(Pauli::Plus, s, space)).collect::<Result<Vec<_>>>()?;
    let interaction = interaction_block(&raising, &p.lambda, p.half_chain, space, prov)?;
    Ok(GeneratorBlocks { radiation, matter, interaction })
}

/// `L = L_mat + L_rad + i[H_int, ·]` in the Heisenberg picture.
pub fn build_as_generator(p: &ASParams, space: &SpaceHandle) -> Result<Superoperator> {
    Ok(build_as_blocks(p, space)?.total())
}

fn radiation_reservoir_block(g: &GammaSet, modes: &[usize], space: &SpaceHandle, prov: Provenance) -> Result<Superoperator> {
    let mut acc = TermAccumulator::new(space.dim());
    for (&gamma, &m) in g.radiation.iter().zip(modes) {
        if gamma != ZERO {
            acc.reservoir_term(gamma, &boson(BosonOp::Annihilate, m, space)?);
        }
    }
    Ok(acc.finish(space, prov.block("radiation")))
}

fn check_counts(g: &GammaSet, lambda: &[f64], modes: usize) -> Result<()> {
    if g.modes() != modes || lambda.len() != modes {
        return Err(Error::ParamMismatch(format!(
            "{} radiation coefficients and {} couplings for {modes} boson modes",
            g.modes(),
            lambda.len()
        )));
    }
    Ok(())
}

/// Blocks `L₁` (radiation), `L₂` (matter), `L₃` (interaction) of the
/// stochastic-limit generator of the boson-reservoir model.
pub fn build_hlsl_blocks(g: &GammaSet, lambda: &[f64], space: &SpaceHandle) -> Result<GeneratorBlocks> {
    let (h1, h2) = g.hl_matter()?;
    let half_chain = half_chain_of(space, SiteKind::Spin)?;
    let (atoms, modes) = laser_layout(space, SiteKind::Spin, half_chain, space.boson_sites().len())?;
    check_counts(g, lambda, modes.len())?;
    let prov = Provenance::new("hl_sl", format!("{g:?} lambda={lambda:?}"));
    let radiation = radiation_reservoir_block(g, &modes, space, prov.clone())?;
    let mut acc = TermAccumulator::new(space.dim());
    let mut raising = Vec::new();
    for &s in &atoms {
        let (sp, sm, _) = pauli_ops(s, space)?;
        acc.reservoir_term(h1, &sm);
        acc.reservoir_term(h2, &sp);
        raising.push(sp);
    }
    let matter = acc.finish(space, prov.clone().block("matter"));
    let interaction = interaction_block(&raising, lambda, half_chain, space, prov)?;
    Ok(GeneratorBlocks { radiation, matter, interaction })
}

pub fn build_hlsl_generator(g: &GammaSet, lambda: &[f64], space: &SpaceHandle) -> Result<Superoperator> {
    Ok(build_hlsl_blocks(g, lambda, space)?.total())
}

/// Blocks of the stochastic-limit generator of the fermion-reservoir model;
/// `L₂` is the eight-term fermionic form.
pub fn build_dhlsl_blocks(g: &GammaSet, lambda: &[f64], space: &SpaceHandle) -> Result<GeneratorBlocks> {
    let (bp, bm, cp, cm) = g.dhl_matter()?;
    let half_chain = half_chain_of(space, SiteKind::FermionPair)?;
    let (pairs, modes) = laser_layout(space, SiteKind::FermionPair, half_chain, space.boson_sites().len())?;
    check_counts(g, lambda, modes.len())?;
    let prov = Provenance::new("dhl_sl", format!("{g:?} lambda={lambda:?}"));
    let radiation = radiation_reservoir_block(g, &modes, space, prov.clone())?;
    let mut acc = TermAccumulator::new(space.dim());
    let mut raising = Vec::new();
    for &s in &pairs {
        use crate::operator_core::{fermion, Ladder, Level};
        let b_up = fermion(Level::Upper, Ladder::Annihilate, s, space)?;
        let b_lo = fermion(Level::Lower, Ladder::Annihilate, s, space)?;
        acc.reservoir_term(bp, &b_up);
        acc.reservoir_term(cp, &b_up.adjoint());
        acc.reservoir_term(bm, &b_lo);
        acc.reservoir_term(cm, &b_lo.adjoint());
        raising.push(spin_from_fermions(s, space)?.0);
    }
    let matter = acc.finish(space, prov.clone().block("matter"));
    let interaction = interaction_block(&raising, lambda, half_chain, space, prov)?;
    Ok(GeneratorBlocks { radiation, matter, interaction })
}

pub fn build_dhlsl_generator(g: &GammaSet, lambda: &[f64], space: &SpaceHandle) -> Result<Superoperator> {
    Ok(build_dhlsl_blocks(g, lambda, space)?.total())
}

/// The spin-space counterpart of a fermion-pair space (pairs become spins).
pub fn spin_spec_of(fermion_space: &SpaceHandle) -> HilbertSpec {
    HilbertSpec::new(
        fermion_space
            .spec()
            .sites
            .iter()
            .map(|k| if *k == SiteKind::FermionPair { SiteKind::Spin } else { *k })
            .collect(),
    )
}

/// Local image of the spin matrix unit `|p⟩⟨q|` (basis `|↓⟩, |↑⟩`) on a
/// fermion pair: `E↑↑ ↦ (I + n₊ − n₋)/2`, `E↓↓ ↦ (I − n₊ + n₋)/2`,
/// `σ₊ ↦ b₊†b₋`, `σ₋ ↦ b₋†b₊`.
fn fermion_image(p: usize, q: usize) -> CsrMatrix {
    use fermion_basis::{BOTH, EMPTY, LOWER, UPPER};
    let one = C64::new(1.0, 0.0);
    let half = C64::new(0.5, 0.0);
    let t = match (p, q) {
        (1, 1) => vec![(EMPTY, EMPTY, half), (UPPER, UPPER, one), (BOTH, BOTH, half)],
        (0, 0) => vec![(EMPTY, EMPTY, half), (LOWER, LOWER, one), (BOTH, BOTH, half)],
        (1, 0) => vec![(UPPER, LOWER, one)],
        (0, 1) => vec![(LOWER, UPPER, one)],
        _ => unreachable!(),
    };
    CsrMatrix::from_triplets(4, 4, t)
}

/// `Y ↦ V† L(Φ(Y)) V` where `Φ` maps spin operators to fermion-pair
/// operators and `V` embeds the one-electron sector. The result acts on
/// `spin_space`, which must be [`spin_spec_of`] the generator's space.
pub fn spin_mapped_reduction(l: &Superoperator, spin_space: &SpaceHandle) -> Result<Superoperator> {
    if l.picture() != Picture::Heisenberg {
        return Err(Error::PictureMismatch { expected: "Heisenberg" });
    }
    let fs = l.space();
    if *spin_space.spec() != spin_spec_of(fs) {
        return Err(Error::SpaceMismatch);
    }
    let sites = &fs.spec().sites;
    let ds = spin_space.dim();
    let df = fs.dim();
    // spin basis index → fermion basis index of the corresponding physical state
    let embed: Vec<usize> = (0..ds)
        .map(|g| {
            let mut f = 0;
            for (s, k) in sites.iter().enumerate() {
                let loc = spin_space.local_index(g, s);
                let lf = if *k == SiteKind::FermionPair {
                    if loc == 1 { fermion_basis::UPPER } else { fermion_basis::LOWER }
                } else {
                    loc
                };
                f = f * fs.site_dim(s) + lf;
            }
            f
        })
        .collect();
    let mut back = vec![usize::MAX; df];
    for (g, &f) in embed.iter().enumerate() {
        back[f] = g;
    }
    let mut t = Vec::new();
    for q_col in 0..ds {
        for p_row in 0..ds {
            // Φ(|p⟩⟨q|) as a Kronecker product of local images
            let mut m = CsrMatrix::identity(1);
            for (s, k) in sites.iter().enumerate() {
                let (lp, lq) = (spin_space.local_index(p_row, s), spin_space.local_index(q_col, s));
                let local = if *k == SiteKind::FermionPair {
                    fermion_image(lp, lq)
                } else {
                    let dim = k.dim();
                    CsrMatrix::from_triplets(dim, dim, vec![(lp, lq, C64::new(1.0, 0.0))])
                };
                m = m.kron(&local);
            }
            let x = SparseOp::new(fs, m)?;
            let y = l.apply(&x)?;
            let col = p_row + ds * q_col;
            for (r, c, v) in y.matrix().iter() {
                let (gr, gc) = (back[r], back[c]);
                if gr != usize::MAX && gc != usize::MAX {
                    t.push((gr + ds * gc, col, v));
                }
            }
        }
    }
    let n = ds * ds;
    let mut prov = l.provenance().clone();
    prov.model = format!("{}_spin_mapped", prov.model);
    Superoperator::new(spin_space, Picture::Heisenberg, CsrMatrix::from_triplets(n, n, t), prov)
}
