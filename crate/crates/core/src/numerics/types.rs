use std::ops::Deref;

use super::linalg::{
    eigh_matrix, hermitian_part, max_abs, outer, trace, ComplexMatrix, ComplexVector, C64,
    PSD_CLIP_TOL,
};
use crate::error::{Error, Result};

/// Hermitian operator. Construction symmetrizes `M ← (M + M†)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Rejects non-square, non-finite or visibly non-Hermitian input.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let asym = max_abs(&(&m - m.adjoint()));
        if asym > 1e-8 * max_abs(&m).max(1.0) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Takes the Hermitian part of `m` without checking how far from
    /// Hermitian it was.
    pub fn from_hermitian_part(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        Self(hermitian_part(&m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Positive semidefinite operator of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    /// Eigenvalues in `[-1e-10, 0)` are clipped to zero; anything more
    /// negative, or a trace more than `1e-10` away from one, is an error.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let tr = trace(&h).re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::BadTrace(tr));
        }
        Self::repair(h)
    }

    /// Normalizes a nonzero PSD operator to unit trace.
    pub fn from_unnormalized(m: ComplexMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let tr = trace(&h).re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::BadTrace(tr));
        }
        Self::repair(HermitianMatrix(h.0 / C64::new(tr, 0.0)))
    }

    fn repair(h: HermitianMatrix) -> Result<Self> {
        let e = eigh_matrix(&h)?;
        let min = e.min();
        if min < -PSD_CLIP_TOL {
            return Err(Error::NotPsd(min));
        }
        if min >= 0.0 {
            return Ok(Self(h));
        }
        let clipped = e.reconstruct_with(|l| l.max(0.0));
        let tr = trace(&clipped).re;
        Ok(Self(HermitianMatrix::from_hermitian_part(
            clipped / C64::new(tr, 0.0),
        )))
    }

    pub fn pure_state(v: &ComplexVector) -> Result<Self> {
        let u = UnitVector::normalized(v.clone())?;
        Ok(Self(HermitianMatrix::from_hermitian_part(u.projector())))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self(HermitianMatrix(
            ComplexMatrix::identity(n, n) / C64::new(n as f64, 0.0),
        ))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.0.as_matrix()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0.into_matrix()
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        self.0.as_matrix()
    }
}

/// Vector of Euclidean norm one (to 1e-12).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(ComplexVector);

impl UnitVector {
    pub fn new(v: ComplexVector) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(norm));
        }
        Ok(Self(v))
    }

    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm == 0.0 {
            return Err(Error::NotUnit(0.0));
        }
        Ok(Self(v / C64::new(norm, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &ComplexVector {
        &self.0
    }

    pub fn into_vector(self) -> ComplexVector {
        self.0
    }

    /// `u u†`
    pub fn projector(&self) -> ComplexMatrix {
        outer(&self.0, &self.0)
    }
}

impl Deref for UnitVector {
    type Target = ComplexVector;

    fn deref(&self) -> &ComplexVector {
        &self.0
    }
}

pub(crate) fn check_square_finite(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "expected a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}
