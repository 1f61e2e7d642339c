use super::*;
use crate::channel::random::{planted_rank_pair, random_channel, random_cp_map};
use crate::examples::{pauli_pair, werner_holevo_pair};
use crate::numerics::random::{haar_unitary, random_unit_vector, seeded_rng};
use crate::numerics::{
    fidelity_matrices, partial_trace_outer, trace_norm, ComplexMatrix, Subsystem,
};

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn constant_map(n: usize, target: usize) -> SuperOp {
    let ops = (0..n).map(|a| outer_col(target, a, n)).collect();
    SuperOp::from_cp_kraus(n, 2, ops).unwrap()
}

fn outer_col(target: usize, a: usize, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, n);
    m[(target, a)] = crate::numerics::c64(1.0, 0.0);
    m
}

#[test]
fn fmax_identity_pair() {
    let id = SuperOp::identity(3);
    let r = fmax(&id, &id, &opts()).unwrap();
    assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    let r1 = fmax_k(&id, &id, 1, &opts()).unwrap();
    assert!((r1.value - 1.0).abs() < 1e-9);
}

#[test]
fn fmax_orthogonal_constant_maps() {
    let a = constant_map(2, 0);
    let b = constant_map(2, 1);
    let r = fmax(&a, &b, &opts()).unwrap();
    assert!(r.value.abs() < 1e-9);
}

#[test]
fn fmax_rejects_non_cp() {
    let (p0, p1) = pauli_pair();
    let d = p0.difference(&p1).unwrap();
    assert!(matches!(fmax(&d, &d, &opts()), Err(crate::Error::NotCompletelyPositive(_))));
}

#[test]
fn fmax_value_matches_recomputation() {
    let mut rng = seeded_rng(3);
    let a = random_cp_map(3, 3, 2, &mut rng);
    let b = random_cp_map(3, 3, 2, &mut rng);
    for r in [fmax(&a, &b, &opts()).unwrap(), fmax_k(&a, &b, 2, &opts()).unwrap()] {
        let f = fidelity_matrices(&a.apply(r.rho_a.as_matrix()).unwrap(), &b.apply(r.rho_b.as_matrix()).unwrap())
            .unwrap();
        assert!((f - r.value).abs() < 1e-9);
    }
}

#[test]
fn pauli_dnorm_and_success() {
    let (p0, p1) = pauli_pair();
    let d = p0.difference(&p1).unwrap();
    let r = dnorm_detailed(&d, &opts()).unwrap();
    assert_eq!(r.choi_rank, 4);
    assert!((r.value - 2.0).abs() < 1e-4, "{}", r.value);
    assert!(r.converged());
    assert!((channel_success(&p0, &p1, &opts()).unwrap() - 1.0).abs() < 1e-4);
    assert!((tnorm_ext(&d, 2, &opts()).unwrap() - 2.0).abs() < 1e-4);
}

#[test]
fn pauli_unassisted_value() {
    let (p0, p1) = pauli_pair();
    let r = ancilla_value_detailed(&p0, &p1, 1, &opts()).unwrap();
    assert!((r.value - 4.0 / 3.0).abs() < 1e-3, "{}", r.value);
    assert!((r.success_probability() - 5.0 / 6.0).abs() < 1e-3);
}

#[test]
fn werner_holevo_dnorm() {
    for n in 2..=4 {
        let (p0, p1) = werner_holevo_pair(n).unwrap();
        let d = p0.difference(&p1).unwrap();
        let v = dnorm(&d, &opts()).unwrap();
        assert!((v - 2.0).abs() < 1e-4, "n = {n}: {v}");
    }
    let (p0, p1) = werner_holevo_pair(2).unwrap();
    assert!((channel_success(&p0, &p1, &opts()).unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn werner_holevo_rank_one_fidelity() {
    let (p0, p1) = werner_holevo_pair(3).unwrap();
    let d = p0.difference(&p1).unwrap();
    let (a, b) = complementary_pair(d.stinespring());
    let r = fmax_k(&a, &b, 1, &opts()).unwrap();
    assert!(r.value <= 1.0 + 1e-6, "{}", r.value);
    let v = ancilla_value(&p0, &p1, 1, &opts()).unwrap();
    assert!(v <= 1.0 + 1e-6, "{v}");
}

#[test]
fn trivial_norms() {
    let mut rng = seeded_rng(8);
    let c = random_channel(3, 2, 2, &mut rng);
    assert!(dnorm(&c.difference(&c).unwrap(), &opts()).unwrap().abs() < 1e-12);
    assert!((channel_success(&c, &c, &opts()).unwrap() - 0.5).abs() < 1e-12);
    let zero = c.difference(&c).unwrap();
    assert_eq!(tnorm_ext(&zero, 1, &opts()).unwrap(), 0.0);
    for k in 1..=3 {
        assert!((tnorm_ext(&c, k, &opts()).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn fmax_k_full_rank_equals_fmax() {
    let mut rng = seeded_rng(21);
    for _ in 0..3 {
        let a = random_cp_map(3, 4, 2, &mut rng);
        let b = random_cp_map(3, 4, 2, &mut rng);
        let full = fmax(&a, &b, &opts()).unwrap();
        let k3 = fmax_k(&a, &b, 3, &opts()).unwrap();
        assert!((full.value - k3.value).abs() < 1e-4, "{} {}", full.value, k3.value);
        let k1 = fmax_k(&a, &b, 1, &opts()).unwrap();
        assert!(k1.value <= full.value + 1e-6);
    }
}

#[test]
fn planted_rank_tnorm_matches_dnorm() {
    let mut rng = seeded_rng(33);
    for (n, terms) in [(2, 1), (3, 1), (3, 2)] {
        let (p0, p1) = planted_rank_pair(n, terms, &mut rng);
        let d = p0.difference(&p1).unwrap();
        let k = d.choi_rank(1e-9);
        assert_eq!(k, 2 * terms);
        let full = dnorm(&d, &opts()).unwrap();
        let t = tnorm_ext(&d, k, &opts()).unwrap();
        assert!((full - t).abs() < 1e-4, "{full} {t}");
    }
}

#[test]
fn ancilla_monotone_and_doubling() {
    let mut rng = seeded_rng(44);
    let (p0, p1) = planted_rank_pair(2, 1, &mut rng);
    let d = p0.difference(&p1).unwrap();
    let full = dnorm(&d, &opts()).unwrap();
    let sweep = ancilla_sweep(&p0, &p1, 4, &opts()).unwrap();
    for w in sweep.windows(2) {
        assert!(w[0].value <= w[1].value + 1e-12);
    }
    for r in &sweep {
        assert!(r.value <= full + 1e-6);
    }
    assert!((sweep[3].value - full).abs() < 1e-4);
    for m in 1..=2 {
        assert!(sweep[2 * m - 1].value >= tnorm_ext(&d, m, &opts()).unwrap() - 1e-6);
    }
}

#[test]
fn fidelity_equals_trace_norm_of_partial_trace() {
    let mut rng = seeded_rng(55);
    for (nx, ny) in [(2, 2), (3, 2), (2, 4)] {
        let u = random_unit_vector(nx * ny, &mut rng).into_vector();
        let v = random_unit_vector(nx * ny, &mut rng).into_vector();
        let ru = partial_trace_outer(&u, &u, nx, ny, Subsystem::B);
        let rv = partial_trace_outer(&v, &v, nx, ny, Subsystem::B);
        let lhs = fidelity_matrices(&ru, &rv).unwrap();
        let rhs = trace_norm(&partial_trace_outer(&u, &v, nx, ny, Subsystem::A));
        assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn fmax_invariant_under_output_rotation() {
    let mut rng = seeded_rng(66);
    let rotate = |m: &SuperOp, u: &ComplexMatrix| {
        SuperOp::from_cp_kraus(2, 3, m.kraus().pairs().iter().map(|(k, _)| u * k).collect()).unwrap()
    };
    for _ in 0..10 {
        let a = random_cp_map(2, 3, 2, &mut rng);
        let b = random_cp_map(2, 3, 2, &mut rng);
        let u = haar_unitary(3, &mut rng);
        let v0 = fmax(&a, &b, &opts()).unwrap().value;
        let v1 = fmax(&rotate(&a, &u), &rotate(&b, &u), &opts()).unwrap().value;
        assert!((v0 - v1).abs() < 1e-6, "{v0} {v1}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let mut rng = seeded_rng(77);
    let (p0, p1) = planted_rank_pair(2, 1, &mut rng);
    let a = ancilla_value(&p0, &p1, 2, &opts()).unwrap();
    let b = ancilla_value(&p0, &p1, 2, &opts().with_threads(4)).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}
