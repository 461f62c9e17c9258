//! Superoperators as sparse `d² × d²` matrices on column-major vectorized
//! operators: `vec(X)[i + d·j] = X[i, j]`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::kossakowski::{kossakowski_check, KossakowskiReport};
use crate::error::{Error, Result};
use crate::operator_core::{CsrMatrix, SpaceHandle, SparseOp};

/// Largest Hilbert dimension for which dense analyses (kernel, CP check) run.
pub const DENSE_ANALYSIS_CAP: usize = 32;

pub const BINARY_MAGIC: [u8; 8] = *b"SLSUPOP1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Picture {
    /// Acts on observables.
    Heisenberg,
    /// Acts on density matrices.
    Schrodinger,
}

impl Picture {
    fn tag(self) -> u64 {
        match self {
            Picture::Heisenberg => 0,
            Picture::Schrodinger => 1,
        }
    }

    fn from_tag(t: u64) -> Result<Self> {
        match t {
            0 => Ok(Picture::Heisenberg),
            1 => Ok(Picture::Schrodinger),
            _ => Err(Error::Format(format!("unknown picture tag {t}"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Picture::Heisenberg => "Heisenberg",
            Picture::Schrodinger => "Schrodinger",
        }
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub model: String,
    pub block: Option<String>,
    pub parameters: String,
}

impl Provenance {
    pub fn new(model: &str, parameters: String) -> Self {
        Self { model: model.into(), block: None, parameters }
    }

    pub fn block(mut self, name: &str) -> Self {
        self.block = Some(name.into());
        self
    }
}

#[derive(Debug, Clone)]
pub struct Superoperator {
    space: SpaceHandle,
    picture: Picture,
    matrix: CsrMatrix,
    provenance: Provenance,
}

/// Accumulates `X ↦ Σ c A X B` terms as triplets.
pub(crate) struct TermAccumulator {
    d: usize,
    triplets: Vec<(usize, usize, C64)>,
}

impl TermAccumulator {
    pub(crate) fn new(d: usize) -> Self {
        Self { d, triplets: Vec::new() }
    }

    /// `X ↦ c A X B`.
    pub(crate) fn sandwich(&mut self, c: C64, a: &SparseOp, b: &SparseOp) {
        let d = self.d;
        for (rb, cb, vb) in b.matrix().iter() {
            for (ra, ca, va) in a.matrix().iter() {
                self.triplets.push((cb * d + ra, rb * d + ca, c * va * vb));
            }
        }
    }

    /// `X ↦ c A X`.
    pub(crate) fn left(&mut self, c: C64, a: &SparseOp) {
        let d = self.d;
        for (ra, ca, va) in a.matrix().iter() {
            for k in 0..d {
                self.triplets.push((k * d + ra, k * d + ca, c * va));
            }
        }
    }

    /// `X ↦ c X B`.
    pub(crate) fn right(&mut self, c: C64, b: &SparseOp) {
        let d = self.d;
        for (rb, cb, vb) in b.matrix().iter() {
            for k in 0..d {
                self.triplets.push((cb * d + k, rb * d + k, c * vb));
            }
        }
    }

    /// `X ↦ i [H, X]`.
    pub(crate) fn hamiltonian(&mut self, h: &SparseOp) {
        self.left(C64::new(0.0, 1.0), h);
        self.right(C64::new(0.0, -1.0), h);
    }

    /// `X ↦ c X`.
    pub(crate) fn scalar(&mut self, c: C64) {
        let n = self.d * self.d;
        self.triplets.extend((0..n).map(|k| (k, k, c)));
    }

    /// `X ↦ Γ [A†, X] A − Γ̄ A† [A, X]`.
    pub(crate) fn reservoir_term(&mut self, gamma: C64, a: &SparseOp) {
        let ad = a.adjoint();
        let n = &ad * a;
        self.sandwich(C64::new(2.0 * gamma.re, 0.0), &ad, a);
        self.right(-gamma, &n);
        self.left(-gamma.conj(), &n);
    }

    pub(crate) fn finish(self, space: &SpaceHandle, provenance: Provenance) -> Superoperator {
        let n = self.d * self.d;
        Superoperator {
            space: space.clone(),
            picture: Picture::Heisenberg,
            matrix: CsrMatrix::from_triplets(n, n, self.triplets),
            provenance,
        }
    }
}

fn transpose_index(p: usize, d: usize) -> usize {
    (p % d) * d + p / d
}

impl Superoperator {
    pub fn new(space: &SpaceHandle, picture: Picture, matrix: CsrMatrix, provenance: Provenance) -> Result<Self> {
        let n = space.dim() * space.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::ParamMismatch(format!(
                "superoperator matrix is {}x{}, expected {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space: space.clone(), picture, matrix, provenance })
    }

    pub fn zero(space: &SpaceHandle, picture: Picture) -> Self {
        let n = space.dim() * space.dim();
        Self { space: space.clone(), picture, matrix: CsrMatrix::zeros(n, n), provenance: Provenance::new("zero", String::new()) }
    }

    pub fn space(&self) -> &SpaceHandle {
        &self.space
    }

    /// Hilbert dimension `d`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    fn check(&self, x: &SparseOp) -> Result<()> {
        if !self.space.same_as(x.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// `L(X)` for a Heisenberg-picture generator.
    pub fn apply(&self, x: &SparseOp) -> Result<SparseOp> {
        if self.picture != Picture::Heisenberg {
            return Err(Error::PictureMismatch { expected: "Heisenberg" });
        }
        self.act(x)
    }

    /// `L*(ρ)` for a Schrödinger-picture generator.
    pub fn apply_state(&self, rho: &SparseOp) -> Result<SparseOp> {
        if self.picture != Picture::Schrodinger {
            return Err(Error::PictureMismatch { expected: "Schrodinger" });
        }
        self.act(rho)
    }

    fn act(&self, x: &SparseOp) -> Result<SparseOp> {
        self.check(x)?;
        SparseOp::from_vec(&self.space, &self.matrix.matvec(&x.to_vec()))
    }

    /// The dual map with respect to `(ρ, X) ↦ tr(ρ X)`; flips the picture.
    pub fn dual(&self) -> Self {
        let d = self.dim();
        // S*[T(q), T(p)] = S[p, q] with T the transpose permutation
        let t = self
            .matrix
            .iter()
            .map(|(p, q, v)| (transpose_index(q, d), transpose_index(p, d), v))
            .collect();
        let n = d * d;
        let picture = match self.picture {
            Picture::Heisenberg => Picture::Schrodinger,
            Picture::Schrodinger => Picture::Heisenberg,
        };
        Self {
            space: self.space.clone(),
            picture,
            matrix: CsrMatrix::from_triplets(n, n, t),
            provenance: self.provenance.clone(),
        }
    }

    pub fn to_schrodinger(&self) -> Self {
        match self.picture {
            Picture::Heisenberg => self.dual(),
            Picture::Schrodinger => self.clone(),
        }
    }

    pub fn to_heisenberg(&self) -> Self {
        match self.picture {
            Picture::Schrodinger => self.dual(),
            Picture::Heisenberg => self.clone(),
        }
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if !self.space.same_as(&other.space) {
            return Err(Error::SpaceMismatch);
        }
        if self.picture != other.picture {
            return Err(Error::PictureMismatch { expected: self.picture.name() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        Ok(Self { matrix: self.matrix.add(&other.matrix), ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        Ok(Self { matrix: self.matrix.sub(&other.matrix), ..self.clone() })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { matrix: self.matrix.scale(c), ..self.clone() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    /// `‖self − other‖_F / ‖other‖_F` (absolute when `other` vanishes).
    pub fn relative_distance(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?.frobenius_norm();
        let n = other.frobenius_norm();
        Ok(if n > 0.0 { diff / n } else { diff })
    }

    /// Heisenberg: `‖L(I)‖`. Schrödinger: `max_ρ |tr L*(E_kl)|` over matrix units.
    pub fn conservation_defect(&self) -> f64 {
        let d = self.dim();
        match self.picture {
            Picture::Heisenberg => {
                let id = SparseOp::identity(&self.space).to_vec();
                self.matrix.matvec(&id).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            }
            Picture::Schrodinger => {
                let mut col_trace = vec![C64::new(0.0, 0.0); d * d];
                for (p, q, v) in self.matrix.iter() {
                    if p % (d + 1) == 0 {
                        col_trace[q] += v;
                    }
                }
                col_trace.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// `max |L(X†) − L(X)†|` over matrix units `X`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        self.matrix
            .iter()
            .map(|(p, q, v)| (self.matrix.get(transpose_index(p, d), transpose_index(q, d)) - v.conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        self.require_small()?;
        Ok(self.matrix.to_dense())
    }

    fn require_small(&self) -> Result<()> {
        if self.dim() > DENSE_ANALYSIS_CAP {
            return Err(Error::DimensionCap { dim: self.dim(), cap: DENSE_ANALYSIS_CAP });
        }
        Ok(())
    }

    /// Number of singular values below `rel_tol · σ_max`.
    pub fn kernel_dimension(&self, rel_tol: f64) -> Result<usize> {
        let m = self.to_dense()?;
        let sv = m.singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        if smax == 0.0 {
            return Ok(sv.len());
        }
        Ok(sv.iter().filter(|s| **s <= rel_tol * smax).count())
    }

    pub fn kossakowski(&self, tolerance: f64) -> Result<KossakowskiReport> {
        self.require_small()?;
        kossakowski_check(self, tolerance)
    }

    /// Dense little-endian dump: 8-byte magic, `d` as u64, the picture tag as
    /// u64 (0 Heisenberg, 1 Schrödinger), then the `d⁴` entries as `(re, im)`
    /// f64 pairs in column-major order.
    pub fn write_binary<W: Write>(&self, w: W) -> Result<()> {
        let mut w = std::io::BufWriter::new(w);
        let d = self.dim() as u64;
        w.write_all(&BINARY_MAGIC)?;
        w.write_all(&d.to_le_bytes())?;
        w.write_all(&self.picture.tag().to_le_bytes())?;
        let cols = self.matrix.transpose();
        let n = self.dim() * self.dim();
        let mut column = vec![C64::new(0.0, 0.0); n];
        for c in 0..n {
            column.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for (r, v) in cols.row(c) {
                column[r] = v;
            }
            for z in &column {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn export_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_binary(std::fs::File::create(path)?)
    }

    /// Reads a dump written by [`write_binary`](Self::write_binary) for `space`.
    pub fn read_binary<R: Read>(r: R, space: &SpaceHandle) -> Result<Self> {
        let mut r = std::io::BufReader::new(r);
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        if word != BINARY_MAGIC {
            return Err(Error::Format("bad superoperator magic".into()));
        }
        r.read_exact(&mut word)?;
        let d = u64::from_le_bytes(word) as usize;
        if d != space.dim() {
            return Err(Error::Format(format!("file holds d = {d}, space has d = {}", space.dim())));
        }
        r.read_exact(&mut word)?;
        let picture = Picture::from_tag(u64::from_le_bytes(word))?;
        let n = d * d;
        let mut t = Vec::new();
        let mut pair = [0u8; 16];
        for c in 0..n {
            for row in 0..n {
                r.read_exact(&mut pair)?;
                let re = f64::from_le_bytes(pair[..8].try_into().unwrap());
                let im = f64::from_le_bytes(pair[8..].try_into().unwrap());
                if re != 0.0 || im != 0.0 {
                    t.push((row, c, C64::new(re, im)));
                }
            }
        }
        if r.read(&mut word)? != 0 {
            return Err(Error::Format("trailing bytes after superoperator data".into()));
        }
        Self::new(space, picture, CsrMatrix::from_triplets(n, n, t), Provenance::new("imported", String::new()))
    }

    pub fn import_binary(path: impl AsRef<Path>, space: &SpaceHandle) -> Result<Self> {
        Self::read_binary(std::fs::File::open(path)?, space)
    }

    /// Norms and structural checks; the dense analyses are skipped above
    /// [`DENSE_ANALYSIS_CAP`].
    pub fn summary(&self) -> SuperopSummary {
        let small = self.dim() <= DENSE_ANALYSIS_CAP;
        SuperopSummary {
            model: self.provenance.model.clone(),
            picture: self.picture,
            dim: self.dim(),
            nnz: self.matrix.nnz(),
            frobenius_norm: self.frobenius_norm(),
            conservation_defect: self.conservation_defect(),
            hermiticity_defect: self.hermiticity_defect(),
            kernel_dimension: if small { self.kernel_dimension(1e-10).ok() } else { None },
            cp: if small { self.kossakowski(1e-10).ok() } else { None },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperopSummary {
    pub model: String,
    pub picture: Picture,
    pub dim: usize,
    pub nnz: usize,
    pub frobenius_norm: f64,
    pub conservation_defect: f64,
    pub hermiticity_defect: f64,
    pub kernel_dimension: Option<usize>,
    pub cp: Option<KossakowskiReport>,
}

impl fmt::Display for SuperopSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}", self.model)?;
        writeln!(f, "picture: {}", self.picture)?;
        writeln!(f, "hilbert_dimension: {}", self.dim)?;
        writeln!(f, "nonzeros: {}", self.nnz)?;
        writeln!(f, "frobenius_norm: {:.12e}", self.frobenius_norm)?;
        writeln!(f, "conservation_defect: {:.3e}", self.conservation_defect)?;
        writeln!(f, "hermiticity_defect: {:.3e}", self.hermiticity_defect)?;
        match self.kernel_dimension {
            Some(k) => writeln!(f, "kernel_dimension: {k}")?,
            None => writeln!(f, "kernel_dimension: skipped")?,
        }
        match &self.cp {
            Some(r) => {
                writeln!(f, "kossakowski_min_eigenvalue: {:.6e}", r.min_eigenvalue)?;
                writeln!(f, "completely_positive: {}", r.completely_positive)
            }
            None => writeln!(f, "completely_positive: skipped"),
        }
    }
}
