use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::superop::Superoperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KossakowskiReport {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub tolerance: f64,
    pub completely_positive: bool,
}

/// Smallest eigenvalue of the Kossakowski matrix: the Choi matrix of the
/// Schrödinger-picture generator expressed in an orthonormal traceless
/// operator basis (off-diagonal matrix units plus normalized diagonal
/// Helmert combinations).
pub fn kossakowski_check(l: &Superoperator, tolerance: f64) -> Result<KossakowskiReport> {
    let norm = l.frobenius_norm();
    let defect = l.hermiticity_defect();
    if defect > 1e-10 * norm.max(1.0) {
        return Err(Error::DecompositionFailure(defect));
    }
    let s = l.to_schrodinger();
    let d = s.dim();
    let n = d * d;
    // Ch[(i + d k), (j + d l)] = S*[(i + d j), (k + d l)]
    let mut ch = DMatrix::<C64>::zeros(n, n);
    for (p, q, v) in s.matrix().iter() {
        let (i, j) = (p % d, p / d);
        let (k, ll) = (q % d, q / d);
        ch[(i + d * k, j + d * ll)] += v;
    }
    // basis change on the diagonal-unit indices; column 0 is I/√d
    let mut helmert = DMatrix::<f64>::zeros(d, d);
    for m in 0..d {
        helmert[(m, 0)] = 1.0 / (d as f64).sqrt();
    }
    for k in 1..d {
        let c = 1.0 / ((k * (k + 1)) as f64).sqrt();
        for m in 0..k {
            helmert[(m, k)] = c;
        }
        helmert[(k, k)] = -(k as f64) * c;
    }
    let diag: Vec<usize> = (0..d).map(|m| m * (d + 1)).collect();
    // Ch ← Ch U, then Uᴴ Ch, with U the identity off the diagonal-unit indices
    let cols: Vec<_> = diag.iter().map(|&p| ch.column(p).clone_owned()).collect();
    for b in 0..d {
        let mut acc = cols[0].clone() * C64::new(helmert[(0, b)], 0.0);
        for a in 1..d {
            acc += &cols[a] * C64::new(helmert[(a, b)], 0.0);
        }
        ch.set_column(diag[b], &acc);
    }
    let rows: Vec<_> = diag.iter().map(|&p| ch.row(p).clone_owned()).collect();
    for b in 0..d {
        let mut acc = rows[0].clone() * C64::new(helmert[(0, b)], 0.0);
        for a in 1..d {
            acc += &rows[a] * C64::new(helmert[(a, b)], 0.0);
        }
        ch.set_row(diag[b], &acc);
    }
    let chi = ch;
    let keep: Vec<usize> = (0..n).filter(|&p| p != diag[0]).collect();
    let m = n - 1;
    let mut k = DMatrix::<C64>::zeros(m, m);
    for (a, &pa) in keep.iter().enumerate() {
        for (b, &pb) in keep.iter().enumerate() {
            k[(a, b)] = chi[(pa, pb)];
        }
    }
    let herm = (&k + k.adjoint()) * C64::new(0.5, 0.0);
    let (min, max) = if m == 0 {
        (0.0, 0.0)
    } else {
        let eig = herm.symmetric_eigenvalues();
        (eig.iter().copied().fold(f64::INFINITY, f64::min), eig.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    };
    Ok(KossakowskiReport {
        min_eigenvalue: min,
        max_eigenvalue: max,
        tolerance,
        completely_positive: min >= -tolerance,
    })
}
