use super::SolverOptions;
use crate::channel::SuperOp;
use crate::error::{Error, Result};
use crate::numerics::random::{random_density, stream_rng};
use crate::numerics::{
    eigh_matrix, fidelity_matrices, hermitian_part, hs_inner, identity, project_to_density,
    psd_eigh, ComplexMatrix, DensityMatrix, C64,
};

/// Maximizer of `F(Ψ_A(ρ_A), Ψ_B(ρ_B))` and solver diagnostics.
#[derive(Clone, Debug)]
pub struct FMaxResult {
    pub value: f64,
    pub rho_a: DensityMatrix,
    pub rho_b: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// Frank–Wolfe gap of the last smoothed stage. Zero for the
    /// nonconvex solvers, which do not produce one.
    pub gap: f64,
    /// Upper bound on the maximum from the dual of the fidelity, when
    /// available.
    pub upper_bound: Option<f64>,
}

pub(crate) fn check_pair(psi_a: &SuperOp, psi_b: &SuperOp) -> Result<()> {
    if psi_a.dim_in() != psi_b.dim_in() || psi_a.dim_out() != psi_b.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "maps {}→{} and {}→{} cannot be compared",
            psi_a.dim_in(),
            psi_a.dim_out(),
            psi_b.dim_in(),
            psi_b.dim_out()
        )));
    }
    for psi in [psi_a, psi_b] {
        if !psi.is_cp() {
            return Err(Error::NotCompletelyPositive(psi.min_choi_eigenvalue()?));
        }
    }
    Ok(())
}

/// Partial derivatives `∂F/∂P`, `∂F/∂Q` of the fidelity at positive
/// definite `P`, `Q`.
struct FidelityGrad {
    d_p: ComplexMatrix,
    d_q: ComplexMatrix,
}

fn inv_sqrt_sandwich(s: &ComplexMatrix, other: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
    let m = hermitian_part(&(s * other * s));
    let e = eigh_matrix(&m)?;
    let floor = f64::EPSILON * e.max().max(f64::MIN_POSITIVE);
    let value = e.values.iter().map(|l| l.max(0.0).sqrt()).sum();
    let inv = e.reconstruct_with(|l| 1.0 / l.max(floor).sqrt());
    Ok((value, hermitian_part(&(s * inv * s)) * C64::new(0.5, 0.0)))
}

fn sqrt_pd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(psd_eigh(m)?.reconstruct_with(f64::sqrt))
}

fn fidelity_grad(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<FidelityGrad> {
    let sp = sqrt_pd(p)?;
    let sq = sqrt_pd(q)?;
    let (_, d_q) = inv_sqrt_sandwich(&sp, q)?;
    let (_, d_p) = inv_sqrt_sandwich(&sq, p)?;
    Ok(FidelityGrad { d_p, d_q })
}

fn fidelity_value(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    let sp = sqrt_pd(p)?;
    let e = eigh_matrix(&hermitian_part(&(&sp * q * &sp)))?;
    Ok(e.values.iter().map(|l| l.max(0.0).sqrt()).sum())
}

struct Problem<'a> {
    psi_a: &'a SuperOp,
    psi_b: &'a SuperOp,
    adj_a: SuperOp,
    adj_b: SuperOp,
    dim_env: usize,
}

struct Run {
    rho1: ComplexMatrix,
    rho2: ComplexMatrix,
    value: f64,
    gap: f64,
    upper_bound: f64,
    iterations: usize,
}

impl Problem<'_> {
    fn outputs(&self, r1: &ComplexMatrix, r2: &ComplexMatrix, mu: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let shift = identity(self.dim_env) * C64::new(mu, 0.0);
        Ok((
            hermitian_part(&self.psi_a.apply(r1)?) + &shift,
            hermitian_part(&self.psi_b.apply(r2)?) + shift,
        ))
    }

    fn smoothed(&self, r1: &ComplexMatrix, r2: &ComplexMatrix, mu: f64) -> Result<f64> {
        let (p, q) = self.outputs(r1, r2, mu)?;
        fidelity_value(&p, &q)
    }

    /// Gradient pulled back to the inputs, Frank–Wolfe gap and the dual
    /// bound `½λmax(Ψ_A†(Y)) + ½λmax(Ψ_B†(Y⁻¹))` with `Y = 2∂F/∂P`.
    fn ascent_data(
        &self,
        r1: &ComplexMatrix,
        r2: &ComplexMatrix,
        mu: f64,
    ) -> Result<(ComplexMatrix, ComplexMatrix, f64, f64)> {
        let (p, q) = self.outputs(r1, r2, mu)?;
        let g = fidelity_grad(&p, &q)?;
        let g1 = hermitian_part(&self.adj_a.apply(&g.d_p)?);
        let g2 = hermitian_part(&self.adj_b.apply(&g.d_q)?);
        let l1 = eigh_matrix(&g1)?.max();
        let l2 = eigh_matrix(&g2)?.max();
        let gap = l1 - hs_inner(&g1, r1).re + l2 - hs_inner(&g2, r2).re;
        // Y⁻¹ = 2∂F/∂Q exactly; recompute it from Y to keep the bound honest.
        let y = &g.d_p * C64::new(2.0, 0.0);
        let ye = psd_eigh(&y)?;
        let upper_bound = match ye.values.iter().copied().fold(f64::INFINITY, f64::min) {
            m if m > 0.0 => {
                let yinv = ye.reconstruct_with(|l| 1.0 / l);
                let a = eigh_matrix(&self.adj_a.apply(&y)?)?.max();
                let b = eigh_matrix(&self.adj_b.apply(&yinv)?)?.max();
                0.5 * (a + b)
            }
            _ => f64::INFINITY,
        };
        Ok((g1, g2, gap, upper_bound))
    }

    fn solve(&self, mut r1: ComplexMatrix, mut r2: ComplexMatrix, opts: &SolverOptions) -> Result<Run> {
        let mut iterations = 0;
        let mut gap = f64::INFINITY;
        let mut upper_bound = f64::INFINITY;
        let schedule: &[f64] = if opts.smoothing_schedule.is_empty() {
            &[0.0]
        } else {
            &opts.smoothing_schedule
        };
        for &mu in schedule {
            let mut step = 1.0;
            let mut fv = self.smoothed(&r1, &r2, mu)?;
            for _ in 0..opts.max_iters {
                iterations += 1;
                let (g1, g2, g, ub) = self.ascent_data(&r1, &r2, mu)?;
                gap = g;
                upper_bound = upper_bound.min(ub);
                if gap < opts.tol {
                    break;
                }
                step *= 2.0;
                let mut accepted = None;
                while step > 1e-14 {
                    let n1 = project_to_density(&(&r1 + &g1 * C64::new(step, 0.0)))?;
                    let n2 = project_to_density(&(&r2 + &g2 * C64::new(step, 0.0)))?;
                    let d = hs_inner(&g1, &(&n1 - &r1)).re + hs_inner(&g2, &(&n2 - &r2)).re;
                    let nv = self.smoothed(&n1, &n2, mu)?;
                    if nv >= fv + 0.3 * d - 1e-15 {
                        accepted = Some((n1, n2, nv));
                        break;
                    }
                    step /= 2.0;
                }
                match accepted {
                    Some((n1, n2, nv)) => {
                        r1 = n1;
                        r2 = n2;
                        fv = nv;
                    }
                    None => break,
                }
            }
        }
        let (p, q) = self.outputs(&r1, &r2, 0.0)?;
        let value = fidelity_matrices(&p, &q)?;
        Ok(Run {
            rho1: r1,
            rho2: r2,
            value,
            gap,
            upper_bound,
            iterations,
        })
    }
}

/// Maximum output fidelity `max F(Ψ_A(ρ₁), Ψ_B(ρ₂))` over pairs of
/// density operators.
///
/// The objective is jointly concave, so projected gradient ascent on the
/// product of density sets reaches the global maximum. It runs from the
/// maximally mixed pair and again from a seeded random pair; the larger
/// value is returned. `converged` requires both Frank–Wolfe gaps below
/// `opts.tol` and the two runs to agree.
pub fn fmax(psi_a: &SuperOp, psi_b: &SuperOp, opts: &SolverOptions) -> Result<FMaxResult> {
    check_pair(psi_a, psi_b)?;
    let n = psi_a.dim_in();
    let problem = Problem {
        psi_a,
        psi_b,
        adj_a: psi_a.adjoint(),
        adj_b: psi_b.adjoint(),
        dim_env: psi_a.dim_out(),
    };
    let mixed = DensityMatrix::maximally_mixed(n).into_matrix();
    let mut rng = stream_rng(opts.seed, 0);
    let s1 = random_density(n, n, &mut rng).into_matrix();
    let s2 = random_density(n, n, &mut rng).into_matrix();
    let starts = [(mixed.clone(), mixed), (s1, s2)];
    let runs = opts.multistart(starts.len(), |i| {
        let (a, b) = starts[i].clone();
        problem.solve(a, b, opts)
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let agree = {
        let lo = runs.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
        let hi = runs.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
        hi - lo <= 100.0 * opts.tol * hi.max(1.0)
    };
    let converged = agree && runs.iter().all(|r| r.gap < opts.tol);
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let upper_bound = runs.iter().map(|r| r.upper_bound).fold(f64::INFINITY, f64::min);
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("two runs");
    Ok(FMaxResult {
        value: best.value,
        rho_a: DensityMatrix::from_unnormalized(best.rho1)?,
        rho_b: DensityMatrix::from_unnormalized(best.rho2)?,
        iterations,
        converged,
        gap: best.gap,
        upper_bound: upper_bound.is_finite().then_some(upper_bound),
    })
}
