//! Single-site operators and their Kronecker embedding.
//!
//! Site 0 is the outermost (slowest) tensor factor. Operators at different
//! sites are combined by plain tensor products, so fermion operators on
//! different sites commute.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::op::SparseOp;
use super::space::{SiteKind, SpaceHandle};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BosonOp {
    Annihilate,
    Create,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ladder {
    Annihilate,
    Create,
}

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2×2 matrix in the basis (|↓⟩, |↑⟩); σ_z|↑⟩ = |↑⟩.
pub fn pauli_matrix(which: Pauli) -> CsrMatrix {
    let t = match which {
        Pauli::X => vec![(0, 1, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))],
        Pauli::Y => vec![(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, -1.0))],
        Pauli::Z => vec![(0, 0, c(-1.0, 0.0)), (1, 1, c(1.0, 0.0))],
        Pauli::Plus => vec![(1, 0, c(1.0, 0.0))],
        Pauli::Minus => vec![(0, 1, c(1.0, 0.0))],
    };
    CsrMatrix::from_triplets(2, 2, t)
}

/// Ladder matrices on occupations `0..=cutoff`.
pub fn boson_matrix(op: BosonOp, cutoff: usize) -> CsrMatrix {
    let n = cutoff + 1;
    let t = match op {
        BosonOp::Annihilate => (1..n).map(|m| (m - 1, m, c((m as f64).sqrt(), 0.0))).collect(),
        BosonOp::Create => (1..n).map(|m| (m, m - 1, c((m as f64).sqrt(), 0.0))).collect(),
        BosonOp::Number => (1..n).map(|m| (m, m, c(m as f64, 0.0))).collect(),
    };
    CsrMatrix::from_triplets(n, n, t)
}

/// Local fermion basis indices: ∅ = 0, − = 1, + = 2, ± = 3, with
/// |±⟩ = b₊† b₋† |∅⟩.
pub mod fermion_basis {
    pub const EMPTY: usize = 0;
    pub const LOWER: usize = 1;
    pub const UPPER: usize = 2;
    pub const BOTH: usize = 3;
}

pub fn fermion_matrix(level: Level, kind: Ladder) -> CsrMatrix {
    use fermion_basis::*;
    // b₋|−⟩ = |∅⟩, b₋|±⟩ = b₋ b₊† b₋† |∅⟩ = −|+⟩
    // b₊|+⟩ = |∅⟩, b₊|±⟩ = |−⟩
    let annihilate = match level {
        Level::Lower => vec![(EMPTY, LOWER, c(1.0, 0.0)), (UPPER, BOTH, c(-1.0, 0.0))],
        Level::Upper => vec![(EMPTY, UPPER, c(1.0, 0.0)), (LOWER, BOTH, c(1.0, 0.0))],
    };
    let m = CsrMatrix::from_triplets(4, 4, annihilate);
    match kind {
        Ladder::Annihilate => m,
        Ladder::Create => m.adjoint(),
    }
}

/// `I ⊗ … ⊗ local ⊗ … ⊗ I` with `local` at `site`.
pub fn embed_matrix(local: &CsrMatrix, site: usize, space: &SpaceHandle) -> Result<CsrMatrix> {
    if site >= space.num_sites() {
        return Err(Error::SiteMismatch { site, reason: format!("space has {} sites", space.num_sites()) });
    }
    let sd = space.site_dim(site);
    if local.nrows() != sd || local.ncols() != sd {
        return Err(Error::SiteMismatch {
            site,
            reason: format!("local operator is {}x{}, site dimension is {sd}", local.nrows(), local.ncols()),
        });
    }
    let (left, right) = space.outer_inner(site);
    let mut t = Vec::with_capacity(left * right * local.nnz());
    for l in 0..left {
        for (r, cc, v) in local.iter() {
            for k in 0..right {
                t.push(((l * sd + r) * right + k, (l * sd + cc) * right + k, v));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(space.dim(), space.dim(), t))
}

/// Embeds an operator defined on a single-site space into `space`.
pub fn embed(local: &SparseOp, site: usize, space: &SpaceHandle) -> Result<SparseOp> {
    let lspace = local.space();
    let target = space.site_kind(site)?;
    if lspace.num_sites() != 1 || lspace.site_kind(0)? != target {
        return Err(Error::SiteMismatch {
            site,
            reason: format!("local operator lives on {}, site is {target}", lspace.spec()),
        });
    }
    let m = embed_matrix(local.matrix(), site, space)?;
    Ok(SparseOp::from_parts(space, m, local.hermitian_hint()))
}

fn require(space: &SpaceHandle, site: usize, ok: impl Fn(&SiteKind) -> bool, want: &str) -> Result<SiteKind> {
    let k = space.site_kind(site)?;
    if ok(&k) {
        Ok(k)
    } else {
        Err(Error::SiteMismatch { site, reason: format!("expected {want}, found {k}") })
    }
}

pub fn pauli(which: Pauli, site: usize, space: &SpaceHandle) -> Result<SparseOp> {
    require(space, site, |k| matches!(k, SiteKind::Spin), "Spin")?;
    let m = embed_matrix(&pauli_matrix(which), site, space)?;
    let herm = matches!(which, Pauli::X | Pauli::Y | Pauli::Z);
    Ok(SparseOp::from_parts(space, m, herm))
}

pub fn boson(op: BosonOp, site: usize, space: &SpaceHandle) -> Result<SparseOp> {
    let k = require(space, site, |k| matches!(k, SiteKind::BosonMode { .. }), "BosonMode")?;
    let SiteKind::BosonMode { cutoff } = k else { unreachable!() };
    let m = embed_matrix(&boson_matrix(op, cutoff), site, space)?;
    Ok(SparseOp::from_parts(space, m, op == BosonOp::Number))
}

pub fn fermion(level: Level, kind: Ladder, site: usize, space: &SpaceHandle) -> Result<SparseOp> {
    require(space, site, |k| matches!(k, SiteKind::FermionPair), "FermionPair")?;
    let m = embed_matrix(&fermion_matrix(level, kind), site, space)?;
    Ok(SparseOp::from_parts(space, m, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::{build_space, HilbertSpec};

    fn space(sites: Vec<SiteKind>) -> SpaceHandle {
        build_space(HilbertSpec::new(sites)).unwrap()
    }

    #[test]
    fn pauli_relations_hold_exactly() {
        let s = space(vec![SiteKind::Spin]);
        let x = pauli(Pauli::X, 0, &s).unwrap();
        let y = pauli(Pauli::Y, 0, &s).unwrap();
        let z = pauli(Pauli::Z, 0, &s).unwrap();
        let p = pauli(Pauli::Plus, 0, &s).unwrap();
        let m = pauli(Pauli::Minus, 0, &s).unwrap();
        let id = SparseOp::identity(&s);
        for a in [&x, &y, &z] {
            assert_eq!((a * a).max_abs_diff(&id).unwrap(), 0.0);
        }
        let i = C64::new(0.0, 1.0);
        assert_eq!((&x * &y).max_abs_diff(&(i * &z)).unwrap(), 0.0);
        assert_eq!((&y * &z).max_abs_diff(&(i * &x)).unwrap(), 0.0);
        assert_eq!((&z * &x).max_abs_diff(&(i * &y)).unwrap(), 0.0);
        assert_eq!(p.anticommutator(&m).unwrap().max_abs_diff(&id).unwrap(), 0.0);
        assert_eq!(p.commutator(&m).unwrap().max_abs_diff(&z).unwrap(), 0.0);
        let half = (&x + &(i * &y)).scale_re(0.5);
        assert_eq!(half.max_abs_diff(&p).unwrap(), 0.0);
    }

    #[test]
    fn truncated_ladder_commutator_defect_sits_on_top_level() {
        let cutoff = 4;
        let s = space(vec![SiteKind::BosonMode { cutoff }]);
        let a = boson(BosonOp::Annihilate, 0, &s).unwrap();
        let ad = boson(BosonOp::Create, 0, &s).unwrap();
        let comm = a.commutator(&ad).unwrap();
        for m in 0..=cutoff {
            let expect = if m < cutoff { 1.0 } else { -(cutoff as f64) };
            // sqrt(m)^2 is m only up to one rounding
            assert!((comm.get(m, m) - C64::new(expect, 0.0)).norm() < 1e-14);
        }
        assert_eq!(comm.matrix().nnz(), cutoff + 1);
        // a|0⟩ = 0
        assert_eq!(a.matrix().iter().filter(|&(_, c, _)| c == 0).count(), 0);
        let n = boson(BosonOp::Number, 0, &s).unwrap();
        assert!((&ad * &a).max_abs_diff(&n).unwrap() < 1e-14);
        for m in 0..=cutoff {
            assert_eq!(n.get(m, m).re, m as f64);
        }
    }

    #[test]
    fn fermion_anticommutators_on_one_site() {
        let s = space(vec![SiteKind::FermionPair]);
        let id = SparseOp::identity(&s);
        let bp = fermion(Level::Upper, Ladder::Annihilate, 0, &s).unwrap();
        let bm = fermion(Level::Lower, Ladder::Annihilate, 0, &s).unwrap();
        for b in [&bp, &bm] {
            assert_eq!(b.anticommutator(&b.adjoint()).unwrap().max_abs_diff(&id).unwrap(), 0.0);
            assert_eq!((b * b).frobenius_norm(), 0.0);
        }
        assert_eq!(bp.anticommutator(&bm).unwrap().frobenius_norm(), 0.0);
        assert_eq!(bp.anticommutator(&bm.adjoint()).unwrap().frobenius_norm(), 0.0);
        let n = &(&bp.adjoint() * &bp) + &(&bm.adjoint() * &bm);
        let diag: Vec<f64> = (0..4).map(|i| n.get(i, i).re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 1.0, 2.0]);
        assert_eq!(n.hermiticity_defect(), 0.0);
    }

    #[test]
    fn operators_at_different_sites_commute() {
        let s = space(vec![SiteKind::FermionPair, SiteKind::FermionPair]);
        let b0 = fermion(Level::Upper, Ladder::Annihilate, 0, &s).unwrap();
        let b1d = fermion(Level::Upper, Ladder::Create, 1, &s).unwrap();
        assert_eq!(b0.commutator(&b1d).unwrap().frobenius_norm(), 0.0);

        let s2 = space(vec![SiteKind::Spin, SiteKind::Spin]);
        let z0 = pauli(Pauli::Z, 0, &s2).unwrap();
        let x1 = pauli(Pauli::X, 1, &s2).unwrap();
        assert_eq!(z0.commutator(&x1).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn embed_rejects_wrong_site_kind() {
        let s = space(vec![SiteKind::Spin, SiteKind::BosonMode { cutoff: 2 }]);
        assert!(matches!(pauli(Pauli::Z, 1, &s), Err(Error::SiteMismatch { site: 1, .. })));
        assert!(matches!(boson(BosonOp::Number, 0, &s), Err(Error::SiteMismatch { .. })));
        assert!(matches!(fermion(Level::Upper, Ladder::Create, 0, &s), Err(Error::SiteMismatch { .. })));
        assert!(matches!(pauli(Pauli::Z, 7, &s), Err(Error::SiteMismatch { .. })));
    }

    #[test]
    fn embed_on_single_site_space_is_identity_map() {
        let s = space(vec![SiteKind::Spin]);
        let y = pauli(Pauli::Y, 0, &s).unwrap();
        let e = embed(&y, 0, &s).unwrap();
        assert_eq!(e.max_abs_diff(&y).unwrap(), 0.0);
        let big = space(vec![SiteKind::BosonMode { cutoff: 1 }, SiteKind::Spin]);
        let id0 = embed(&SparseOp::identity(&s), 1, &big).unwrap();
        assert_eq!(id0.max_abs_diff(&SparseOp::identity(&big)).unwrap(), 0.0);
    }

    #[test]
    fn hermitian_hints_are_honest() {
        let s = space(vec![SiteKind::Spin, SiteKind::BosonMode { cutoff: 3 }]);
        for w in [Pauli::X, Pauli::Y, Pauli::Z] {
            let p = pauli(w, 0, &s).unwrap();
            assert!(p.hermitian_hint());
            assert_eq!(p.hermiticity_defect(), 0.0);
        }
        let n = boson(BosonOp::Number, 1, &s).unwrap();
        assert!(n.hermitian_hint());
        assert_eq!(n.hermiticity_defect(), 0.0);
    }
}
