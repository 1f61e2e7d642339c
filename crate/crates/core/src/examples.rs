//! The Pauli pair and the Werner–Holevo family, with their reference values.
//!
//! Both families are pairs of channels that can be discriminated perfectly
//! once an auxiliary system is allowed, while doing poorly with inputs on
//! the channel space alone. The Werner–Holevo channels are related to the
//! approximate-randomization constructions of Hayden et al.

use crate::channel::{ChoiRep, SuperOp};
use crate::error::{Error, Result};
use crate::metrics::{ancilla_sweep, dnorm, SolverOptions};
use crate::numerics::{c64, swap_and_projectors, ComplexMatrix, DensityMatrix, ComplexVector, C64};
use serde::{Deserialize, Serialize};

/// `Φ₀(X) = ((Tr X)1 + Xᵀ)/(n+1)` and `Φ₁(X) = ((Tr X)1 − Xᵀ)/(n−1)`, built
/// from their Choi matrices `(2/(n+1))Π_sym` and `(2/(n−1))Π_anti`.
pub fn werner_holevo_pair(n: usize) -> Result<(SuperOp, SuperOp)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Werner–Holevo channels need n ≥ 2, got {n}"
        )));
    }
    let p = swap_and_projectors(n);
    let nf = n as f64;
    let j0 = p.symmetric * c64(2.0 / (nf + 1.0), 0.0);
    let j1 = p.antisymmetric * c64(2.0 / (nf - 1.0), 0.0);
    let tau = crate::numerics::DEFAULT_RANK_TOL;
    Ok((
        SuperOp::from_choi(ChoiRep::new(n, n, j0)?, tau)?,
        SuperOp::from_choi(ChoiRep::new(n, n, j1)?, tau)?,
    ))
}

/// `ξ = (1/n) Σ_{a,b} |a⟩⟨b| ⊗ |a⟩⟨b|`.
pub fn maximally_entangled(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut v = ComplexVector::zeros(n * n);
    for a in 0..n {
        v[a * n + a] = c64(1.0, 0.0);
    }
    DensityMatrix::pure_state(&v)
}

/// `4/(n+1) + 2n(k−1)/(n²−1)`, an upper bound on the Werner–Holevo
/// pure-input value with a `k`-dimensional ancilla.
pub fn wh_upper_bound(n: usize, k: usize) -> Result<f64> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "bound defined for n ≥ 2 and 1 ≤ k ≤ n, got n = {n}, k = {k}"
        )));
    }
    let (n, k) = (n as f64, k as f64);
    Ok(4.0 / (n + 1.0) + 2.0 * n * (k - 1.0) / (n * n - 1.0))
}

pub fn pauli_matrices() -> [ComplexMatrix; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ComplexMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        ComplexMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// The identity channel on a qubit and `Φ₁(ρ) = ⅓ Σ σ ρ σ` over the three
/// Pauli matrices.
pub fn pauli_pair() -> (SuperOp, SuperOp) {
    let s = 1.0 / 3f64.sqrt();
    let ops = pauli_matrices().into_iter().map(|p| p * c64(s, 0.0)).collect();
    (
        SuperOp::identity(2),
        SuperOp::from_cp_kraus(2, 2, ops).expect("Pauli operators are 2x2"),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Werner,
    Pauli,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner" | "werner-holevo" => Ok(Family::Werner),
            "pauli" => Ok(Family::Pauli),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        }
    }
}

/// One row of an example sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub family: Family,
    pub n: usize,
    /// Ancilla dimension.
    pub k: usize,
    pub dnorm_ref: f64,
    pub ancilla_value_computed: f64,
    /// Werner–Holevo bound, or the diamond norm for the Pauli pair.
    pub upper_bound: f64,
    pub success_probability: f64,
}

pub fn example_pair(family: Family, n: usize) -> Result<(SuperOp, SuperOp)> {
    match family {
        Family::Werner => werner_holevo_pair(n),
        Family::Pauli if n == 2 => Ok(pauli_pair()),
        Family::Pauli => Err(Error::InvalidArgument(format!(
            "the Pauli example is a qubit pair, got n = {n}"
        ))),
    }
}

/// Pure-input values for each ancilla dimension in `k_list`.
pub fn run_example_sweep(
    family: Family,
    n: usize,
    k_list: &[usize],
    opts: &SolverOptions,
) -> Result<Vec<ExampleReport>> {
    let (phi0, phi1) = example_pair(family, n)?;
    let Some(&k_max) = k_list.iter().max() else {
        return Ok(Vec::new());
    };
    if k_list.contains(&0) {
        return Err(Error::InvalidArgument("ancilla dimensions start at 1".into()));
    }
    let dnorm_ref = dnorm(&phi0.difference_with_tol(&phi1, opts.rank_tol)?, opts)?;
    let sweep = ancilla_sweep(&phi0, &phi1, k_max, opts)?;
    k_list
        .iter()
        .map(|&k| {
            let value = sweep[k - 1].value;
            let upper_bound = match family {
                Family::Werner if k <= n => wh_upper_bound(n, k)?,
                _ => dnorm_ref,
            };
            Ok(ExampleReport {
                family,
                n,
                k,
                dnorm_ref,
                ancilla_value_computed: value,
                upper_bound,
                success_probability: 0.5 + value / 4.0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_density, seeded_rng};
    use crate::numerics::{max_abs, partial_trace, rank_eps, trace, trace_norm_hermitian, Subsystem};

    #[test]
    fn werner_holevo_choi_and_formula() {
        for n in 2..=4 {
            let (p0, p1) = werner_holevo_pair(n).unwrap();
            assert!(p0.is_admissible() && p1.is_admissible());
            let pr = swap_and_projectors(n);
            let nf = n as f64;
            let j0 = &pr.symmetric * c64(2.0 / (nf + 1.0), 0.0);
            let j1 = &pr.antisymmetric * c64(2.0 / (nf - 1.0), 0.0);
            assert!(max_abs(&(p0.choi().matrix() - j0)) < 1e-10);
            assert!(max_abs(&(p1.choi().matrix() - j1)) < 1e-10);
            assert!(max_abs(&(p0.choi().matrix() * p1.choi().matrix())) < 1e-10);
            let mut rng = seeded_rng(n as u64);
            let x = random_density(n, n, &mut rng).into_matrix();
            let tr = trace(&x);
            let id = crate::numerics::identity(n);
            let e0 = (&id * tr + x.transpose()) / c64(nf + 1.0, 0.0);
            let e1 = (&id * tr - x.transpose()) / c64(nf - 1.0, 0.0);
            assert!(max_abs(&(p0.apply(&x).unwrap() - e0)) < 1e-10);
            assert!(max_abs(&(p1.apply(&x).unwrap() - e1)) < 1e-10);
        }
        assert!(werner_holevo_pair(1).is_err());
    }

    #[test]
    fn werner_holevo_n2_antisymmetric_rank_one() {
        let (_, p1) = werner_holevo_pair(2).unwrap();
        assert_eq!(rank_eps(p1.choi().matrix(), 1e-9), 1);
    }

    #[test]
    fn werner_holevo_n3_trace_preserving() {
        let (p0, p1) = werner_holevo_pair(3).unwrap();
        let mut rng = seeded_rng(5);
        for _ in 0..10 {
            let x = random_density(3, 2, &mut rng).into_matrix();
            assert!((trace(&p0.apply(&x).unwrap()).re - 1.0).abs() < 1e-12);
            assert!((trace(&p1.apply(&x).unwrap()).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_entangled_marginals() {
        let xi = maximally_entangled(2).unwrap();
        let h = 0.5;
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((xi.as_matrix()[(i, j)].re - h).abs() < 1e-15);
        }
        for n in 1..=4 {
            let xi = maximally_entangled(n).unwrap();
            let m = partial_trace(xi.as_matrix(), n, n, Subsystem::B).unwrap();
            let expect = crate::numerics::identity(n) / c64(n as f64, 0.0);
            assert!(max_abs(&(m - expect)) < 1e-12);
        }
    }

    #[test]
    fn werner_holevo_outputs_on_xi() {
        for n in 2..=4 {
            let (p0, p1) = werner_holevo_pair(n).unwrap();
            let xi = maximally_entangled(n).unwrap();
            let o0 = p0.apply_extended(xi.as_matrix(), n).unwrap();
            let o1 = p1.apply_extended(xi.as_matrix(), n).unwrap();
            let nf = n as f64;
            let pr = swap_and_projectors(n);
            let expect = pr.symmetric * c64(2.0 / (nf * (nf + 1.0)), 0.0);
            assert!(max_abs(&(&o0 - expect)) < 1e-12);
            assert!(max_abs(&(&o0 * &o1)) < 1e-12);
            assert!((trace_norm_hermitian(&(o0 - o1)).unwrap() - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bound_values() {
        assert!((wh_upper_bound(2, 1).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((wh_upper_bound(3, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((wh_upper_bound(3, 3).unwrap() - 2.5).abs() < 1e-15);
        assert!(wh_upper_bound(3, 4).is_err());
        assert!(wh_upper_bound(3, 0).is_err());
    }

    #[test]
    fn pauli_pair_structure() {
        let (p0, p1) = pauli_pair();
        assert!(p0.is_admissible() && p1.is_admissible());
        let d = p0.difference(&p1).unwrap();
        assert_eq!(d.choi_rank(1e-9), 4);
        // A Bell state comes out orthogonal to itself under Φ₁.
        let xi = maximally_entangled(2).unwrap();
        let o0 = p0.apply_extended(xi.as_matrix(), 2).unwrap();
        let o1 = p1.apply_extended(xi.as_matrix(), 2).unwrap();
        assert!(max_abs(&(&o0 * &o1)) < 1e-12);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("werner".parse::<Family>().unwrap(), Family::Werner);
        assert_eq!("pauli".parse::<Family>().unwrap(), Family::Pauli);
        assert!("other".parse::<Family>().is_err());
    }
}
