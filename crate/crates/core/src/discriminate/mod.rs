//! Construction of an input on `X ⊗ W` that discriminates two channels
//! optimally, with `dim W = 2 rank J(Φ₀ − Φ₁)`.
//!
//! The pipeline solves the maximum output fidelity of the complementary
//! maps, reduces the optimal input states to rank at most `k = rank J`,
//! purifies them into `X ⊗ V` with `dim V = k`, and turns the resulting
//! operator `u v†` into a single vector on `X ⊗ V ⊗ Q`, `dim Q = 2`.

use crate::channel::{complementary_pair, SuperOp};
use crate::error::{Error, Result};
use crate::metrics::{check_admissible, fmax, helstrom_matrices, HelstromResult, SolverOptions};
use crate::numerics::{
    basis_vector, eigh_matrix, outer, purify, trace_norm, trace_norm_hermitian, ComplexMatrix,
    ComplexVector, DensityMatrix, UnitVector,
};
use crate::rankred::{density_rank, reduce_preimage, ReductionTrace};

/// Eigenvalues of the doubled operator below this are skipped.
const EIGEN_SKIP: f64 = 1e-12;
/// Largest accepted disagreement between the fidelity value and the
/// recomputed trace norm.
pub const ROUTE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct DiscriminationResult {
    /// Input on `X ⊗ W`, `W` the low-order factor.
    pub input_vector: UnitVector,
    pub ancilla_dim: usize,
    /// `‖((Φ₀ − Φ₁) ⊗ 1_W)(uu†)‖₁` recomputed from `input_vector`.
    pub achieved_value: f64,
    pub dnorm_value: f64,
    pub choi_rank_k: usize,
    /// Optimal measurement on the two output states.
    pub measurement: HelstromResult,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    /// Trace norm of `(Δ ⊗ 1_V)(u'v'†)` after rank reduction and purification.
    pub fidelity_route_value: f64,
    /// `|fidelity_route_value − dnorm_value|` exceeds [`ROUTE_TOL`].
    pub route_mismatch: bool,
    pub fmax_converged: bool,
    pub fmax_iterations: usize,
    pub reduction: Option<(ReductionTrace, ReductionTrace)>,
}

impl DiscriminationResult {
    pub fn success_probability(&self) -> f64 {
        self.measurement.success_probability
    }
}

/// For `‖X‖₁ = 1` on `X ⊗ W`, the best eigenvector `u ∈ X ⊗ W ⊗ Q` of
/// `½X ⊗ |0⟩⟨1| + ½X† ⊗ |1⟩⟨0|` as an input to `Δ ⊗ 1_{W ⊗ Q}`. Since
/// the eigenvalues of that operator have absolute sum one, some eigenvector
/// does at least as well as `X` itself.
///
/// Returns the vector and its value `‖(Δ ⊗ 1)(uu†)‖₁`.
pub fn hermitian_doubling(x: &ComplexMatrix, delta: &SuperOp, ancilla_dim: usize) -> Result<(UnitVector, f64)> {
    let d = delta.dim_in() * ancilla_dim;
    if x.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!("operator must be {d}x{d}")));
    }
    let norm = trace_norm(x);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "operator must have unit trace norm, got {norm}"
        )));
    }
    let mut y = ComplexMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            y[(2 * i, 2 * j + 1)] = x[(i, j)] * 0.5;
            y[(2 * i + 1, 2 * j)] = x[(j, i)].conj() * 0.5;
        }
    }
    let e = eigh_matrix(&y)?;
    let mut best: Option<(UnitVector, f64)> = None;
    for (j, &l) in e.values.iter().enumerate() {
        if l.abs() <= EIGEN_SKIP {
            continue;
        }
        let u = UnitVector::normalized(e.vectors.column(j).into_owned())?;
        let value = pure_value(delta, u.as_vector(), 2 * ancilla_dim)?;
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((u, value));
        }
    }
    best.ok_or(Error::InvalidArgument("operator is zero".into()))
}

fn pure_value(delta: &SuperOp, u: &ComplexVector, ancilla_dim: usize) -> Result<f64> {
    trace_norm_hermitian(&delta.apply_extended_outer(u, u, ancilla_dim)?)
}

fn outputs(
    phi0: &SuperOp,
    phi1: &SuperOp,
    u: &ComplexVector,
    ancilla_dim: usize,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    Ok((
        phi0.apply_extended_outer(u, u, ancilla_dim)?,
        phi1.apply_extended_outer(u, u, ancilla_dim)?,
    ))
}

/// An input `u ∈ X ⊗ W` with `dim W = 2k`, `k = rank J(Φ₀ − Φ₁)`, whose
/// outputs are as far apart in trace norm as the diamond norm allows.
pub fn optimal_input(phi0: &SuperOp, phi1: &SuperOp, opts: &SolverOptions) -> Result<DiscriminationResult> {
    check_admissible(phi0)?;
    check_admissible(phi1)?;
    let delta = phi0.difference_with_tol(phi1, opts.rank_tol)?;
    let n = delta.dim_in();
    let k = delta.choi_rank(opts.rank_tol);
    if k == 0 {
        let u = UnitVector::new(basis_vector(n, 0))?;
        let (o0, o1) = outputs(phi0, phi1, u.as_vector(), 1)?;
        return Ok(DiscriminationResult {
            input_vector: u,
            ancilla_dim: 0,
            achieved_value: 0.0,
            dnorm_value: 0.0,
            choi_rank_k: 0,
            measurement: helstrom_matrices(&o0, &o1)?,
            diagnostics: Diagnostics {
                fmax_converged: true,
                ..Diagnostics::default()
            },
        });
    }
    // `delta` is already in minimal Kraus form, so its Stinespring pair has
    // an environment of dimension k.
    debug_assert_eq!(delta.stinespring().dim_env(), k);
    let (psi_a, psi_b) = complementary_pair(delta.stinespring());
    let fm = fmax(&psi_a, &psi_b, opts)?;
    let reduce = |psi: &SuperOp, rho: &DensityMatrix| -> Result<(DensityMatrix, Option<ReductionTrace>)> {
        if density_rank(rho)? <= k {
            Ok((rho.clone(), None))
        } else {
            let (r, t) = reduce_preimage(psi, rho)?;
            Ok((r, Some(t)))
        }
    };
    let (rho_a, trace_a) = reduce(&psi_a, &fm.rho_a)?;
    let (rho_b, trace_b) = reduce(&psi_b, &fm.rho_b)?;
    let ua = purify(&rho_a, k)?;
    let ub = purify(&rho_b, k)?;
    let x = outer(ua.as_vector(), ub.as_vector());
    let route = trace_norm(&delta.apply_extended_outer(ua.as_vector(), ub.as_vector(), k)?);
    let (u, achieved_value) = hermitian_doubling(&x, &delta, k)?;
    let ancilla_dim = 2 * k;
    let (o0, o1) = outputs(phi0, phi1, u.as_vector(), ancilla_dim)?;
    let measurement = helstrom_matrices(&o0, &o1)?;
    let reduction = match (trace_a, trace_b) {
        (None, None) => None,
        (a, b) => Some((a.unwrap_or_default(), b.unwrap_or_default())),
    };
    Ok(DiscriminationResult {
        input_vector: u,
        ancilla_dim,
        achieved_value,
        dnorm_value: fm.value,
        choi_rank_k: k,
        measurement,
        diagnostics: Diagnostics {
            fidelity_route_value: route,
            route_mismatch: (route - fm.value).abs() > ROUTE_TOL,
            fmax_converged: fm.converged,
            fmax_iterations: fm.iterations,
            reduction,
        },
    })
}

/// Independent recomputation of a [`DiscriminationResult`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub trace_distance: f64,
    pub success_probability: f64,
    pub value_residual: f64,
    pub success_residual: f64,
    /// `achieved_value − dnorm_value`, which may not be positive beyond roundoff.
    pub excess_over_dnorm: f64,
    pub passed: bool,
}

pub const VERIFY_TOL: f64 = 1e-8;

pub fn verify(result: &DiscriminationResult, phi0: &SuperOp, phi1: &SuperOp) -> Result<VerificationReport> {
    let w = result.ancilla_dim.max(1);
    let (o0, o1) = outputs(phi0, phi1, result.input_vector.as_vector(), w)?;
    let trace_distance = trace_norm_hermitian(&(&o0 - &o1))?;
    let h = helstrom_matrices(&o0, &o1)?;
    let value_residual = (trace_distance - result.achieved_value).abs();
    let success_residual = (h.success_probability - result.measurement.success_probability).abs();
    let formula_residual = (h.success_probability - (0.5 + trace_distance / 4.0)).abs();
    let excess_over_dnorm = result.achieved_value - result.dnorm_value;
    let passed = value_residual <= VERIFY_TOL
        && success_residual <= VERIFY_TOL
        && formula_residual <= VERIFY_TOL
        && result.ancilla_dim == 2 * result.choi_rank_k;
    Ok(VerificationReport {
        trace_distance,
        success_probability: h.success_probability,
        value_residual,
        success_residual,
        excess_over_dnorm,
        passed,
    })
}

#[cfg(test)]
mod tests;
