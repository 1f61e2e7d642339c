//! Random super-operators for tests and corpora.

use rand::Rng;

use super::{stinespring_from_kraus, SuperOp, StinespringRep, KrausRep};
use crate::numerics::random::{complex_gaussian, haar_unitary, random_isometry};
use crate::numerics::ComplexMatrix;

/// Completely positive map with `rank` Gaussian Kraus operators.
pub fn random_cp_map<R: Rng + ?Sized>(n: usize, m: usize, rank: usize, rng: &mut R) -> SuperOp {
    let ops = (0..rank).map(|_| complex_gaussian(m, n, rng)).collect();
    SuperOp::from_cp_kraus(n, m, ops).expect("Gaussian Kraus operators have the right shape")
}

/// General (not necessarily Hermiticity-preserving) map with `rank`
/// independent Gaussian Kraus pairs.
pub fn random_map<R: Rng + ?Sized>(n: usize, m: usize, rank: usize, rng: &mut R) -> SuperOp {
    let pairs = (0..rank)
        .map(|_| (complex_gaussian(m, n, rng), complex_gaussian(m, n, rng)))
        .collect();
    SuperOp::from_kraus(KrausRep::new(n, m, pairs).expect("matching shapes"))
}

/// Channel with `rank` Kraus operators cut from a Haar isometry
/// `Cⁿ → Cᵐ ⊗ C^rank`.
pub fn random_channel<R: Rng + ?Sized>(n: usize, m: usize, rank: usize, rng: &mut R) -> SuperOp {
    let v = random_isometry(m * rank, n, rng);
    let s = StinespringRep::new(n, m, rank, v.clone(), v).expect("isometry shape");
    let k = super::kraus_from_stinespring(&s);
    let ch = SuperOp::from_kraus(k);
    debug_assert_eq!(stinespring_from_kraus(ch.kraus()).dim_env(), rank);
    ch
}

pub fn random_unitary_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (ComplexMatrix, SuperOp) {
    let u = haar_unitary(n, rng);
    let ch = SuperOp::unitary(&u).expect("square unitary");
    (u, ch)
}

/// Channel pair whose difference has Choi rank `2·terms`:
/// `Φ_a = Σ_{i<terms} pᵢ Uᵢ·Uᵢ† + (1 − Σpᵢ) C` with a shared channel `C`
/// and per-side independent unitaries `Uᵢ`.
pub fn planted_rank_pair<R: Rng + ?Sized>(
    n: usize,
    terms: usize,
    rng: &mut R,
) -> (SuperOp, SuperOp) {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.2..0.45)).collect();
    let rest = 1.0 - weights.iter().sum::<f64>();
    let shared: Vec<ComplexMatrix> = random_channel(n, n, 2, rng)
        .kraus()
        .pairs()
        .iter()
        .map(|(a, _)| a * num_complex::Complex64::new(rest.sqrt(), 0.0))
        .collect();
    let mut side = || {
        let mut ops = shared.clone();
        for &w in &weights {
            ops.push(haar_unitary(n, rng) * num_complex::Complex64::new(w.sqrt(), 0.0));
        }
        SuperOp::from_cp_kraus(n, n, ops).expect("square Kraus operators")
    };
    let a = side();
    let b = side();
    (a, b)
}
