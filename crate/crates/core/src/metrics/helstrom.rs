use crate::error::{Error, Result};
use crate::numerics::{eigh_matrix, ComplexMatrix, DensityMatrix, HermitianMatrix, C64};

/// Optimal two-outcome measurement `{Π, 1 − Π}` for a pair of states.
#[derive(Clone, Debug)]
pub struct HelstromResult {
    /// Projector onto the nonnegative eigenspace of `ρ₀ − ρ₁`.
    pub projector: HermitianMatrix,
    pub success_probability: f64,
    /// `‖ρ₀ − ρ₁‖₁`
    pub trace_distance: f64,
}

pub fn helstrom(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<HelstromResult> {
    helstrom_matrices(rho0.as_matrix(), rho1.as_matrix())
}

/// Same as [`helstrom`] for operators already known to be states.
pub fn helstrom_matrices(rho0: &ComplexMatrix, rho1: &ComplexMatrix) -> Result<HelstromResult> {
    if rho0.shape() != rho1.shape() {
        return Err(Error::DimensionMismatch(format!(
            "cannot discriminate a {}x{} state from a {}x{} state",
            rho0.nrows(),
            rho0.ncols(),
            rho1.nrows(),
            rho1.ncols()
        )));
    }
    let delta = rho0 - rho1;
    let e = eigh_matrix(&delta)?;
    let n = delta.nrows();
    let mut projector = ComplexMatrix::zeros(n, n);
    let mut positive_part = 0.0;
    let mut trace_distance = 0.0;
    for (j, &l) in e.values.iter().enumerate() {
        trace_distance += l.abs();
        if l >= 0.0 {
            let col = e.vectors.column(j);
            projector += col * col.adjoint();
            positive_part += l;
        }
    }
    // Tr(Π(ρ₀ − ρ₁)) = ‖ρ₀ − ρ₁‖₁ / 2 for traceless differences.
    let success_probability = (0.5 + positive_part / 2.0).clamp(0.5, 1.0);
    Ok(HelstromResult {
        projector: HermitianMatrix::from_hermitian_part(projector * C64::new(1.0, 0.0)),
        success_probability,
        trace_distance,
    })
}
