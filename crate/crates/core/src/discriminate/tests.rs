use super::*;
use crate::channel::random::{planted_rank_pair, random_channel, random_unitary_channel};
use crate::examples::{pauli_pair, werner_holevo_pair};
use crate::metrics::{ancilla_value, dnorm};
use crate::numerics::random::{random_unit_vector, seeded_rng};
use crate::numerics::{c64, tensor_vectors};

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn identical_channels() {
    let mut rng = seeded_rng(1);
    let c = random_channel(2, 2, 2, &mut rng);
    let r = optimal_input(&c, &c, &opts()).unwrap();
    assert_eq!(r.achieved_value, 0.0);
    assert_eq!(r.choi_rank_k, 0);
    let v = verify(&r, &c, &c).unwrap();
    assert!(v.passed, "{v:?}");
}

#[test]
fn pauli_pair_needs_eight_dimensional_ancilla() {
    let (p0, p1) = pauli_pair();
    let r = optimal_input(&p0, &p1, &opts()).unwrap();
    assert_eq!(r.choi_rank_k, 4);
    assert_eq!(r.ancilla_dim, 8);
    assert!((r.achieved_value - 2.0).abs() < 1e-3, "{}", r.achieved_value);
    assert!((r.success_probability() - 1.0).abs() < 1e-3);
    assert!(!r.diagnostics.route_mismatch);
    assert!(verify(&r, &p0, &p1).unwrap().passed);
}

#[test]
fn werner_holevo_perfect_discrimination() {
    for n in 2..=3 {
        let (p0, p1) = werner_holevo_pair(n).unwrap();
        let r = optimal_input(&p0, &p1, &opts()).unwrap();
        assert!((r.success_probability() - 1.0).abs() < 1e-6, "{}", r.success_probability());
        assert!(verify(&r, &p0, &p1).unwrap().passed);
    }
}

#[test]
fn unitary_pair_needs_no_ancilla_value() {
    let mut rng = seeded_rng(2);
    let (_, u) = random_unitary_channel(4, &mut rng);
    let (_, v) = random_unitary_channel(4, &mut rng);
    let r = optimal_input(&u, &v, &opts()).unwrap();
    assert!(r.choi_rank_k <= 2);
    assert!(r.ancilla_dim <= 4);
    let plain = ancilla_value(&u, &v, 1, &opts()).unwrap();
    assert!((r.achieved_value - plain).abs() < 1e-3, "{} {plain}", r.achieved_value);
}

#[test]
fn planted_pairs_reach_the_diamond_norm() {
    let mut rng = seeded_rng(3);
    for (n, terms) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
        let (p0, p1) = planted_rank_pair(n, terms, &mut rng);
        let r = optimal_input(&p0, &p1, &opts()).unwrap();
        assert_eq!(r.ancilla_dim, 2 * r.choi_rank_k);
        let d = dnorm(&p0.difference(&p1).unwrap(), &opts()).unwrap();
        assert!(r.achieved_value >= d - 1e-6, "{} {d}", r.achieved_value);
        assert!(r.achieved_value <= d + 1e-6);
        let v = verify(&r, &p0, &p1).unwrap();
        assert!(v.passed, "{v:?}");
        assert!((v.success_probability - (0.5 + r.achieved_value / 4.0)).abs() < 1e-8);
    }
}

#[test]
fn tampered_result_fails_verification() {
    let mut rng = seeded_rng(4);
    let (p0, p1) = planted_rank_pair(2, 1, &mut rng);
    let mut r = optimal_input(&p0, &p1, &opts()).unwrap();
    let mut u = r.input_vector.clone().into_vector();
    u[0] += c64(0.3, 0.0);
    r.input_vector = UnitVector::normalized(u).unwrap();
    assert!(!verify(&r, &p0, &p1).unwrap().passed);
}

#[test]
fn doubling_orthogonal_outer_product() {
    let mut rng = seeded_rng(5);
    let (p0, p1) = planted_rank_pair(2, 1, &mut rng);
    let delta = p0.difference(&p1).unwrap();
    let u = basis_vector(2, 0);
    let v = basis_vector(2, 1);
    let x = outer(&u, &v);
    let (w, value) = hermitian_doubling(&x, &delta, 1).unwrap();
    let plus = (tensor_vectors(&u, &basis_vector(2, 0)) + tensor_vectors(&v, &basis_vector(2, 1))) * c64(0.5f64.sqrt(), 0.0);
    let minus = (tensor_vectors(&u, &basis_vector(2, 0)) - tensor_vectors(&v, &basis_vector(2, 1))) * c64(0.5f64.sqrt(), 0.0);
    let overlap = |a: &ComplexVector| a.dotc(w.as_vector()).norm();
    assert!((overlap(&plus) - 1.0).abs() < 1e-9 || (overlap(&minus) - 1.0).abs() < 1e-9);
    assert!(value >= trace_norm(&delta.apply(&x).unwrap()) - 1e-8);
}

#[test]
fn doubling_beats_the_operator() {
    let mut rng = seeded_rng(6);
    for _ in 0..20 {
        let a = random_channel(2, 2, 2, &mut rng);
        let b = random_channel(2, 2, 2, &mut rng);
        let delta = a.difference(&b).unwrap();
        let u = random_unit_vector(2, &mut rng).into_vector();
        let v = random_unit_vector(2, &mut rng).into_vector();
        let x = outer(&u, &v);
        let (_, value) = hermitian_doubling(&x, &delta, 1).unwrap();
        assert!(value >= trace_norm(&delta.apply(&x).unwrap()) - 1e-8);
    }
}

#[test]
fn doubling_of_a_hermitian_operator() {
    let (p0, p1) = pauli_pair();
    let delta = p0.difference(&p1).unwrap();
    let x = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c64(0.5, 0.0), c64(-0.5, 0.0)]));
    let (_, value) = hermitian_doubling(&x, &delta, 1).unwrap();
    assert!(value >= trace_norm(&delta.apply(&x).unwrap()) - 1e-8);
}

#[test]
fn doubling_rejects_unnormalized_operator() {
    let (p0, p1) = pauli_pair();
    let delta = p0.difference(&p1).unwrap();
    let x = crate::numerics::identity(2);
    assert!(hermitian_doubling(&x, &delta, 1).is_err());
}
