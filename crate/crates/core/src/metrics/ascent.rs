use super::fmax::{check_pair, FMaxResult};
use super::SolverOptions;
use crate::channel::{ChoiRep, SuperOp};
use crate::error::{Error, Result};
use crate::numerics::random::{random_unit_vector, stream_rng};
use crate::numerics::{
    eigh_matrix, fidelity_matrices, hermitian_part, identity, partial_trace_outer, svd,
    ComplexMatrix, ComplexVector, DensityMatrix, Subsystem, UnitVector,
};

/// Improvement below which an ascent counts as stationary.
const STALL_TOL: f64 = 1e-13;

/// Kraus pairs extended by `1_W`.
fn extended_pairs(pairs: &[(ComplexMatrix, ComplexMatrix)], w: usize) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    let id = identity(w);
    pairs
        .iter()
        .map(|(a, b)| (a.kronecker(&id), b.kronecker(&id)))
        .collect()
}

fn image(pairs: &[(ComplexMatrix, ComplexMatrix)], u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    let d = pairs[0].0.nrows();
    let mut m = ComplexMatrix::zeros(d, d);
    for (a, b) in pairs {
        m += (a * u) * (b * v).adjoint();
    }
    m
}

struct Ascent {
    u: ComplexVector,
    v: ComplexVector,
    value: f64,
    iterations: usize,
    stalled: bool,
}

/// Alternating ascent on `‖Σⱼ Aⱼu (Bⱼv)†‖₁` over unit `u`, `v`. Each step
/// fixes the polar factor `Ω` of the current image and maximizes the linear
/// functional `Re v†Gu`, so the objective never decreases.
fn bilinear_ascent(
    pairs: &[(ComplexMatrix, ComplexMatrix)],
    mut u: ComplexVector,
    mut v: ComplexVector,
    max_iters: usize,
) -> Result<Ascent> {
    let mut value = 0.0;
    let mut iterations = 0;
    let mut stalled = false;
    while iterations < max_iters {
        iterations += 1;
        let s = svd(&image(pairs, &u, &v))?;
        let current: f64 = s.singular_values.iter().sum();
        if iterations > 1 && current - value <= STALL_TOL * current.max(1.0) {
            value = value.max(current);
            stalled = true;
            break;
        }
        value = current;
        let omega = &s.u * s.v.adjoint();
        let n = u.len();
        let mut g = ComplexMatrix::zeros(n, n);
        for (a, b) in pairs {
            g += b.adjoint() * omega.adjoint() * a;
        }
        let gs = svd(&g)?;
        u = gs.v.column(0).into_owned();
        v = gs.u.column(0).into_owned();
    }
    Ok(Ascent {
        u,
        v,
        value,
        iterations,
        stalled,
    })
}

/// Ascent on `‖Σⱼ Aⱼu (Bⱼu)†‖₁` over unit `u` for a Hermitian-preserving
/// map: with `Ω = sign(M)` fixed the objective is `u†Hu`, and `u` moves to
/// the top eigenvector of `H`.
fn hermitian_ascent(
    pairs: &[(ComplexMatrix, ComplexMatrix)],
    mut u: ComplexVector,
    max_iters: usize,
) -> Result<Ascent> {
    let mut value = 0.0;
    let mut iterations = 0;
    let mut stalled = false;
    while iterations < max_iters {
        iterations += 1;
        let e = eigh_matrix(&hermitian_part(&image(pairs, &u, &u)))?;
        let current: f64 = e.values.iter().map(|l| l.abs()).sum();
        if iterations > 1 && current - value <= STALL_TOL * current.max(1.0) {
            value = value.max(current);
            stalled = true;
            break;
        }
        value = current;
        let omega = e.reconstruct_with(|l| if l >= 0.0 { 1.0 } else { -1.0 });
        let n = u.len();
        let mut h = ComplexMatrix::zeros(n, n);
        for (a, b) in pairs {
            h += b.adjoint() * &omega * a;
        }
        let he = eigh_matrix(&h)?;
        u = he.vectors.column(0).into_owned();
    }
    Ok(Ascent {
        v: u.clone(),
        u,
        value,
        iterations,
        stalled,
    })
}

fn best_of(runs: Vec<Result<Ascent>>) -> Result<(Ascent, usize)> {
    let mut total = 0;
    let mut best: Option<Ascent> = None;
    for r in runs {
        let r = r?;
        total += r.iterations;
        // Strict comparison keeps the lowest index among ties.
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    best.map(|b| (b, total))
        .ok_or(Error::InvalidArgument("at least one restart is required".into()))
}

fn restart_stream(k: usize, i: usize) -> u64 {
    ((k as u64) << 32) | i as u64
}

/// `F_max^(k)`: the maximum output fidelity restricted to inputs of rank at
/// most `k`. Values of `k` above `dim_in` impose no restriction and are
/// treated as `dim_in`.
///
/// Writing `ρ₁ = Tr_W uu†`, `ρ₂ = Tr_W vv†` with `u, v ∈ X ⊗ W_k`, the
/// fidelity equals `‖(Λ ⊗ 1_W)(uv†)‖₁` for the map `Λ` whose Kraus pairs
/// are the output rows of the Kraus operators of `Ψ_A` and `Ψ_B`. That
/// trace norm is maximized by seeded multistart alternating ascent.
pub fn fmax_k(psi_a: &SuperOp, psi_b: &SuperOp, k: usize, opts: &SolverOptions) -> Result<FMaxResult> {
    check_pair(psi_a, psi_b)?;
    if k == 0 {
        return Err(Error::InvalidArgument("rank bound k must be at least 1".into()));
    }
    let n = psi_a.dim_in();
    let w = k.min(n);
    let ops_a = cp_operators(psi_a, opts)?;
    let ops_b = cp_operators(psi_b, opts)?;
    let count = ops_a.len().max(ops_b.len());
    let zero = ComplexMatrix::zeros(psi_a.dim_out(), n);
    let pick = |ops: &[ComplexMatrix], j: usize| ops.get(j).unwrap_or(&zero).clone();
    let (ca, cb): (Vec<_>, Vec<_>) = (0..count).map(|j| (pick(&ops_a, j), pick(&ops_b, j))).unzip();
    if count == 0 {
        let mixed = DensityMatrix::maximally_mixed(n);
        return Ok(FMaxResult {
            value: 0.0,
            rho_a: mixed.clone(),
            rho_b: mixed,
            iterations: 0,
            converged: true,
            gap: 0.0,
            upper_bound: Some(0.0),
        });
    }
    let dilated: Vec<(ComplexMatrix, ComplexMatrix)> = (0..psi_a.dim_out())
        .map(|z| {
            let kz = ComplexMatrix::from_fn(count, n, |j, a| ca[j][(z, a)]);
            let lz = ComplexMatrix::from_fn(count, n, |j, a| cb[j][(z, a)]);
            (kz, lz)
        })
        .collect();
    let ext = extended_pairs(&dilated, w);
    let runs = opts.multistart(opts.restarts.max(1), |i| {
        let mut rng = stream_rng(opts.seed, restart_stream(w, i));
        let u = random_unit_vector(n * w, &mut rng).into_vector();
        let v = random_unit_vector(n * w, &mut rng).into_vector();
        bilinear_ascent(&ext, u, v, opts.max_iters)
    });
    let (best, iterations) = best_of(runs)?;
    let rho_a = reduced_state(&best.u, n, w)?;
    let rho_b = reduced_state(&best.v, n, w)?;
    let value = fidelity_matrices(&psi_a.apply(rho_a.as_matrix())?, &psi_b.apply(rho_b.as_matrix())?)?;
    Ok(FMaxResult {
        value,
        rho_a,
        rho_b,
        iterations,
        converged: best.stalled,
        gap: 0.0,
        upper_bound: None,
    })
}

fn cp_operators(psi: &SuperOp, opts: &SolverOptions) -> Result<Vec<ComplexMatrix>> {
    if psi.kraus().cp_symmetric() {
        return Ok(psi.kraus().pairs().iter().map(|(a, _)| a.clone()).collect());
    }
    let rebuilt = SuperOp::from_choi(
        ChoiRep::new(psi.dim_in(), psi.dim_out(), psi.choi().matrix().clone())?,
        opts.rank_tol,
    )?;
    Ok(rebuilt.kraus().pairs().iter().map(|(a, _)| a.clone()).collect())
}

fn reduced_state(u: &ComplexVector, n: usize, w: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_unnormalized(partial_trace_outer(u, u, n, w, Subsystem::B))
}

/// Best pure-input value `max ‖((Φ₀ − Φ₁) ⊗ 1_{W_k})(uu†)‖₁` for one `k`.
#[derive(Clone, Debug)]
pub struct AncillaResult {
    pub k: usize,
    pub value: f64,
    /// Optimal input on `X ⊗ W_k`.
    pub input: UnitVector,
    pub iterations: usize,
    pub converged: bool,
}

impl AncillaResult {
    /// Helstrom success probability `1/2 + value/4` of the optimal input.
    pub fn success_probability(&self) -> f64 {
        0.5 + self.value / 4.0
    }
}

/// Pure-input values for every ancilla dimension `1..=k_max`.
///
/// Each dimension is started from the zero-padded optimum of the previous
/// one alongside `opts.restarts` random starts, so the values are
/// nondecreasing in `k`.
pub fn ancilla_sweep(phi0: &SuperOp, phi1: &SuperOp, k_max: usize, opts: &SolverOptions) -> Result<Vec<AncillaResult>> {
    super::check_admissible(phi0)?;
    super::check_admissible(phi1)?;
    if k_max == 0 {
        return Err(Error::InvalidArgument("ancilla dimension must be at least 1".into()));
    }
    let delta = phi0.difference_with_tol(phi1, opts.rank_tol)?;
    let n = delta.dim_in();
    let mut out: Vec<AncillaResult> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if delta.kraus().is_empty() {
            out.push(AncillaResult {
                k,
                value: 0.0,
                input: UnitVector::new(crate::numerics::basis_vector(n * k, 0))?,
                iterations: 0,
                converged: true,
            });
            continue;
        }
        let ext = extended_pairs(delta.kraus().pairs(), k);
        let warm = out.last().map(|prev| pad(prev.input.as_vector(), n, k - 1, k));
        let count = opts.restarts.max(1) + usize::from(warm.is_some());
        let runs = opts.multistart(count, |i| {
            let start = match (&warm, i) {
                (Some(w), 0) => w.clone(),
                _ => {
                    let mut rng = stream_rng(opts.seed, restart_stream(k, i));
                    random_unit_vector(n * k, &mut rng).into_vector()
                }
            };
            hermitian_ascent(&ext, start, opts.max_iters)
        });
        let (best, iterations) = best_of(runs)?;
        let input = UnitVector::normalized(best.u)?;
        let value = crate::numerics::trace_norm_hermitian(&delta.apply_extended_outer(
            input.as_vector(),
            input.as_vector(),
            k,
        )?)?;
        out.push(AncillaResult {
            k,
            value,
            input,
            iterations,
            converged: best.stalled,
        });
    }
    Ok(out)
}

fn pad(u: &ComplexVector, n: usize, from: usize, to: usize) -> ComplexVector {
    let mut out = ComplexVector::zeros(n * to);
    for x in 0..n {
        for i in 0..from {
            out[x * to + i] = u[x * from + i];
        }
    }
    out
}

pub fn ancilla_value_detailed(phi0: &SuperOp, phi1: &SuperOp, k: usize, opts: &SolverOptions) -> Result<AncillaResult> {
    let mut all = ancilla_sweep(phi0, phi1, k, opts)?;
    Ok(all.pop().expect("k ≥ 1"))
}

/// `max ‖((Φ₀ − Φ₁) ⊗ 1_{W_k})(uu†)‖₁` over unit `u ∈ X ⊗ W_k`.
pub fn ancilla_value(phi0: &SuperOp, phi1: &SuperOp, k: usize, opts: &SolverOptions) -> Result<f64> {
    Ok(ancilla_value_detailed(phi0, phi1, k, opts)?.value)
}

