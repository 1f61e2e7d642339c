//! Distinguishability functionals: Helstrom discrimination of states,
//! maximum output fidelity of completely positive maps, the ancilla-extended
//! induced trace norms and the diamond norm.
//!
//! The diamond norm of `Φ` is computed as the maximum output fidelity of
//! the complementary pair `(Ψ_A, Ψ_B)` of a Stinespring pair for `Φ` whose
//! environment has dimension `rank J(Φ)`. That maximization is jointly
//! concave, so projected gradient ascent reaches the global optimum and an
//! Alberti-type dual bound certifies it.

mod ascent;
mod fmax;
mod helstrom;
mod options;

pub use ascent::{ancilla_sweep, ancilla_value, ancilla_value_detailed, fmax_k, AncillaResult};
pub use fmax::{fmax, FMaxResult};
pub use helstrom::{helstrom, helstrom_matrices, HelstromResult};
pub use options::SolverOptions;

use crate::channel::{complementary_pair, SuperOp};
use crate::error::{Error, Result};

/// Diamond norm together with the quantities used to compute it.
#[derive(Clone, Debug)]
pub struct DiamondNorm {
    pub value: f64,
    pub choi_rank: usize,
    /// `None` for the zero map.
    pub fmax: Option<FMaxResult>,
}

impl DiamondNorm {
    pub fn converged(&self) -> bool {
        self.fmax.as_ref().is_none_or(|f| f.converged)
    }
}

/// `‖Φ‖◇` as the maximum output fidelity of the complementary pair of a
/// minimal Stinespring pair (environment dimension `rank J(Φ)`).
pub fn dnorm_detailed(phi: &SuperOp, opts: &SolverOptions) -> Result<DiamondNorm> {
    let k = phi.choi_rank(opts.rank_tol);
    if k == 0 {
        return Ok(DiamondNorm {
            value: 0.0,
            choi_rank: 0,
            fmax: None,
        });
    }
    let minimal = SuperOp::from_choi(phi.choi().clone(), opts.rank_tol)?;
    debug_assert_eq!(minimal.stinespring().dim_env(), k);
    let (psi_a, psi_b) = complementary_pair(minimal.stinespring());
    let res = fmax(&psi_a, &psi_b, opts)?;
    Ok(DiamondNorm {
        value: res.value,
        choi_rank: k,
        fmax: Some(res),
    })
}

pub fn dnorm(phi: &SuperOp, opts: &SolverOptions) -> Result<f64> {
    Ok(dnorm_detailed(phi, opts)?.value)
}

/// `‖Φ ⊗ 1_{W_k}‖₁`, computed as `F_max^(k)` of the complementary pair.
pub fn tnorm_ext(phi: &SuperOp, k: usize, opts: &SolverOptions) -> Result<f64> {
    Ok(tnorm_ext_detailed(phi, k, opts)?.value)
}

pub fn tnorm_ext_detailed(phi: &SuperOp, k: usize, opts: &SolverOptions) -> Result<FMaxResult> {
    let (psi_a, psi_b) = complementary_pair(phi.stinespring());
    fmax_k(&psi_a, &psi_b, k, opts)
}

/// Optimal probability `1/2 + ‖Φ₀ − Φ₁‖◇ / 4` of identifying which of two
/// channels was applied.
pub fn channel_success(phi0: &SuperOp, phi1: &SuperOp, opts: &SolverOptions) -> Result<f64> {
    check_admissible(phi0)?;
    check_admissible(phi1)?;
    let delta = phi0.difference_with_tol(phi1, opts.rank_tol)?;
    Ok(0.5 + dnorm(&delta, opts)? / 4.0)
}

pub(crate) fn check_admissible(phi: &SuperOp) -> Result<()> {
    if !phi.is_cp() {
        return Err(Error::NotCompletelyPositive(phi.min_choi_eigenvalue()?));
    }
    if !phi.is_trace_preserving() {
        return Err(Error::InvalidArgument(
            "channel is not trace preserving".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
