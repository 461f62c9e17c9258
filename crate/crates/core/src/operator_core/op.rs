use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::sparse::CsrMatrix;
use super::space::SpaceHandle;
use crate::error::{Error, Result};

/// An operator on a [`Space`](super::Space).
///
/// The `std::ops` impls panic on operands from different spaces; the named
/// methods return [`Error::SpaceMismatch`] instead.
#[derive(Debug, Clone)]
pub struct SparseOp {
    space: SpaceHandle,
    mat: CsrMatrix,
    hermitian_hint: bool,
}

impl SparseOp {
    pub fn new(space: &SpaceHandle, mat: CsrMatrix) -> Result<Self> {
        let d = space.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::ParamMismatch(format!(
                "matrix is {}x{} but the space has dimension {d}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { space: space.clone(), mat, hermitian_hint: false })
    }

    pub(crate) fn from_parts(space: &SpaceHandle, mat: CsrMatrix, hermitian_hint: bool) -> Self {
        debug_assert_eq!(mat.nrows(), space.dim());
        Self { space: space.clone(), mat, hermitian_hint }
    }

    pub fn from_dense(space: &SpaceHandle, d: &DMatrix<C64>) -> Result<Self> {
        Self::new(space, CsrMatrix::from_dense(d))
    }

    pub fn identity(space: &SpaceHandle) -> Self {
        Self::from_parts(space, space.identity().clone(), true)
    }

    pub fn zero(space: &SpaceHandle) -> Self {
        let d = space.dim();
        Self::from_parts(space, CsrMatrix::zeros(d, d), true)
    }

    /// Column-major vectorization: entry `(i, j)` lands at `i + d * j`.
    pub fn from_vec(space: &SpaceHandle, v: &[C64]) -> Result<Self> {
        let d = space.dim();
        if v.len() != d * d {
            return Err(Error::ParamMismatch(format!("vector length {} is not {}", v.len(), d * d)));
        }
        let mut t = Vec::new();
        for j in 0..d {
            for i in 0..d {
                let z = v[i + d * j];
                if z.re != 0.0 || z.im != 0.0 {
                    t.push((i, j, z));
                }
            }
        }
        Ok(Self::from_parts(space, CsrMatrix::from_triplets(d, d, t), false))
    }

    pub fn to_vec(&self) -> Vec<C64> {
        let d = self.space.dim();
        let mut v = vec![C64::new(0.0, 0.0); d * d];
        for (i, j, z) in self.mat.iter() {
            v[i + d * j] = z;
        }
        v
    }

    pub fn space(&self) -> &SpaceHandle {
        &self.space
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CsrMatrix {
        self.mat
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.mat.to_dense()
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn with_hermitian_hint(mut self, hint: bool) -> Self {
        self.hermitian_hint = hint;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat.get(i, j)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_parts(&self.space, self.mat.matmul(&other.mat), false))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let h = self.hermitian_hint && other.hermitian_hint;
        Ok(Self::from_parts(&self.space, self.mat.add(&other.mat), h))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let h = self.hermitian_hint && other.hermitian_hint;
        Ok(Self::from_parts(&self.space, self.mat.sub(&other.mat), h))
    }

    pub fn scale(&self, s: C64) -> Self {
        let h = self.hermitian_hint && s.im == 0.0;
        Self::from_parts(&self.space, self.mat.scale(s), h)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(&self.space, self.mat.adjoint(), self.hermitian_hint)
    }

    /// `XY − YX`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let xy = self.mat.matmul(&other.mat);
        let yx = other.mat.matmul(&self.mat);
        Ok(Self::from_parts(&self.space, xy.sub(&yx), false))
    }

    /// `XY + YX`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let xy = self.mat.matmul(&other.mat);
        let yx = other.mat.matmul(&self.mat);
        Ok(Self::from_parts(&self.space, xy.add(&yx), false))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `max |X_ij − Y_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self.mat.max_abs_diff(&other.mat))
    }

    /// `max |X − X†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.mat.max_abs_diff(&self.mat.adjoint())
    }

    /// `P X P` for a projector `P` given as a predicate on basis states.
    pub fn compress(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self::from_parts(&self.space, self.mat.compress(keep), self.hermitian_hint)
    }
}

impl<'a> Mul for &'a SparseOp {
    type Output = SparseOp;
    fn mul(self, rhs: Self) -> SparseOp {
        SparseOp::mul(self, rhs).expect("operator product across different spaces")
    }
}

impl<'a> Add for &'a SparseOp {
    type Output = SparseOp;
    fn add(self, rhs: Self) -> SparseOp {
        SparseOp::add(self, rhs).expect("operator sum across different spaces")
    }
}

impl<'a> Sub for &'a SparseOp {
    type Output = SparseOp;
    fn sub(self, rhs: Self) -> SparseOp {
        SparseOp::sub(self, rhs).expect("operator difference across different spaces")
    }
}

impl<'a> Neg for &'a SparseOp {
    type Output = SparseOp;
    fn neg(self) -> SparseOp {
        self.scale_re(-1.0)
    }
}

impl<'a> Mul<&'a SparseOp> for C64 {
    type Output = SparseOp;
    fn mul(self, rhs: &'a SparseOp) -> SparseOp {
        rhs.scale(self)
    }
}

impl<'a> Mul<&'a SparseOp> for f64 {
    type Output = SparseOp;
    fn mul(self, rhs: &'a SparseOp) -> SparseOp {
        rhs.scale_re(self)
    }
}
