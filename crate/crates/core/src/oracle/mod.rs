//! Brute-force reference values for small instances.
//!
//! These solvers share no optimization code with [`crate::metrics`]. They
//! run plain gradient ascent on products of unit spheres from many seeded
//! starts and are capped at small input dimensions.

use crate::channel::SuperOp;
use crate::error::{Error, Result};
use crate::numerics::random::{random_unit_vector, stream_rng};
use crate::numerics::{
    c64, eigh_matrix, fidelity_matrices, identity, max_abs, partial_trace_outer, svd, ComplexMatrix,
    ComplexVector, Subsystem,
};

pub const DNORM_DIM_CAP: usize = 4;
pub const FMAX_DIM_CAP: usize = 3;
pub const DEFAULT_RESTARTS: usize = 64;

const MAX_STEPS: usize = 4000;

/// Objective value with its ascent directions for `u` and `v`.
type Eval = (f64, ComplexVector, ComplexVector);

fn tangent(g: &ComplexVector, u: &ComplexVector) -> ComplexVector {
    g - u * u.dotc(g)
}

/// Gradient ascent on `S × S` with tangent steps, renormalization and a
/// step size that grows on success and halves on failure.
fn sphere_ascent(
    eval: &dyn Fn(&ComplexVector, &ComplexVector) -> Result<Eval>,
    mut u: ComplexVector,
    mut v: ComplexVector,
) -> Result<(f64, ComplexVector, ComplexVector)> {
    let (mut value, mut gu, mut gv) = eval(&u, &v)?;
    let mut eta = 0.5;
    for _ in 0..MAX_STEPS {
        let du = tangent(&gu, &u);
        let dv = tangent(&gv, &v);
        if du.norm() + dv.norm() < 1e-12 {
            break;
        }
        let nu = (&u + &du * c64(eta, 0.0)).normalize();
        let nv = (&v + &dv * c64(eta, 0.0)).normalize();
        let (nval, ngu, ngv) = eval(&nu, &nv)?;
        if nval >= value {
            let gain = nval - value;
            (u, v, value, gu, gv) = (nu, nv, nval, ngu, ngv);
            eta = (eta * 1.5).min(1e3);
            if gain < 1e-14 * value.max(1.0) && eta > 1e-3 {
                break;
            }
        } else {
            eta /= 2.0;
            if eta < 1e-12 {
                break;
            }
        }
    }
    Ok((value, u, v))
}

fn best_over_restarts(
    n: usize,
    restarts: usize,
    seed: u64,
    eval: &dyn Fn(&ComplexVector, &ComplexVector) -> Result<Eval>,
) -> Result<f64> {
    let mut best = 0.0f64;
    for i in 0..restarts.max(1) {
        let mut rng = stream_rng(seed, 0x0ac1e << 20 | i as u64);
        let u = random_unit_vector(n, &mut rng).into_vector();
        let v = random_unit_vector(n, &mut rng).into_vector();
        best = best.max(sphere_ascent(eval, u, v)?.0);
    }
    Ok(best)
}

/// `max ‖(Φ ⊗ 1_X)(uv†)‖₁` over unit `u, v ∈ X ⊗ X`.
pub fn brute_dnorm(phi: &SuperOp, restarts: usize, seed: u64) -> Result<f64> {
    let n = phi.dim_in();
    if n > DNORM_DIM_CAP {
        return Err(Error::DimensionCap { dim: n, cap: DNORM_DIM_CAP });
    }
    if phi.kraus().is_empty() {
        return Ok(0.0);
    }
    let id = identity(n);
    let pairs: Vec<(ComplexMatrix, ComplexMatrix)> = phi
        .kraus()
        .pairs()
        .iter()
        .map(|(a, b)| (a.kronecker(&id), b.kronecker(&id)))
        .collect();
    let eval = |u: &ComplexVector, v: &ComplexVector| -> Result<Eval> {
        let d = pairs[0].0.nrows();
        let mut m = ComplexMatrix::zeros(d, d);
        for (a, b) in &pairs {
            m += (a * u) * (b * v).adjoint();
        }
        let s = svd(&m)?;
        let omega = &s.u * s.v.adjoint();
        let mut gu = ComplexVector::zeros(u.len());
        let mut gv = ComplexVector::zeros(v.len());
        for (a, b) in &pairs {
            gu += a.adjoint() * (&omega * (b * v));
            gv += b.adjoint() * (omega.adjoint() * (a * u));
        }
        Ok((s.singular_values.sum(), gu, gv))
    };
    best_over_restarts(n * n, restarts, seed, &eval)
}

/// `max F(Ψ_A(ρ₁), Ψ_B(ρ₂))` over density operators, with `ρ₁ = Tr_W uu†`
/// and `ρ₂ = Tr_W vv†` for `u, v ∈ X ⊗ W`, `dim W = dim X`.
///
/// The fidelity is taken in Uhlmann form: with `a = Σⱼ (Cⱼ ⊗ 1)u ⊗ eⱼ`
/// and `b` built from the Kraus operators `Dⱼ` of `Ψ_B`, both
/// purifications of the outputs, `F = max_U |⟨a, (1 ⊗ U) b⟩|` over
/// unitaries `U` on everything but the output space.
pub fn brute_fmax(psi_a: &SuperOp, psi_b: &SuperOp, restarts: usize, seed: u64) -> Result<f64> {
    let n = psi_a.dim_in();
    if n > FMAX_DIM_CAP {
        return Err(Error::DimensionCap { dim: n, cap: FMAX_DIM_CAP });
    }
    if psi_b.dim_in() != n || psi_b.dim_out() != psi_a.dim_out() {
        return Err(Error::DimensionMismatch("maps must share input and output spaces".into()));
    }
    for psi in [psi_a, psi_b] {
        if !psi.is_cp() {
            return Err(Error::NotCompletelyPositive(psi.min_choi_eigenvalue()?));
        }
    }
    let purifier = |psi: &SuperOp, count: usize| -> ComplexMatrix {
        let m = psi.dim_out();
        let ops: Vec<ComplexMatrix> = psi.kraus().pairs().iter().map(|(a, _)| a.kronecker(&identity(n))).collect();
        // Rows ordered (z, w, j), z the output index.
        ComplexMatrix::from_fn(m * n * count, n * n, |row, col| {
            let j = row % count;
            let zw = row / count;
            ops.get(j).map_or(c64(0.0, 0.0), |op| op[(zw, col)])
        })
    };
    let count = psi_a.kraus().len().max(psi_b.kraus().len()).max(1);
    let ta = purifier(psi_a, count);
    let tb = purifier(psi_b, count);
    let m = psi_a.dim_out();
    let rest = n * count;
    let eval = |u: &ComplexVector, v: &ComplexVector| -> Result<Eval> {
        let am = ComplexMatrix::from_row_slice(m, rest, (&ta * u).as_slice());
        let bm = ComplexMatrix::from_row_slice(m, rest, (&tb * v).as_slice());
        // With A†B = U_G Σ V_G†, the best unitary moves b to B V_G U_G† and
        // the overlap becomes Tr Σ.
        let s = svd(&(am.adjoint() * &bm))?;
        let b_aligned = &bm * &s.v * s.u.adjoint();
        let a_aligned = &am * &s.u * s.v.adjoint();
        let gu = ta.adjoint() * row_major(&b_aligned);
        let gv = tb.adjoint() * row_major(&a_aligned);
        Ok((s.singular_values.sum(), gu, gv))
    };
    let mut best = 0.0f64;
    for i in 0..restarts.max(1) {
        let mut rng = stream_rng(seed, 0xf1de << 20 | i as u64);
        let u = random_unit_vector(n * n, &mut rng).into_vector();
        let v = random_unit_vector(n * n, &mut rng).into_vector();
        let (_, u, v) = sphere_ascent(&eval, u, v)?;
        // Report the fidelity itself at the maximizer.
        let rho1 = partial_trace_outer(&u, &u, n, n, Subsystem::B);
        let rho2 = partial_trace_outer(&v, &v, n, n, Subsystem::B);
        best = best.max(fidelity_matrices(&psi_a.apply(&rho1)?, &psi_b.apply(&rho2)?)?);
    }
    Ok(best)
}

fn row_major(m: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_iterator(m.len(), m.transpose().iter().copied())
}

/// `2√(1 − ν²)` with `ν` the distance from the origin to the convex hull of
/// the eigenvalues of `U†V`.
pub fn unitary_pair_reference(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    let n = u.nrows();
    for m in [u, v] {
        if !m.is_square() || m.nrows() != n {
            return Err(Error::DimensionMismatch("unitaries must be square and of equal size".into()));
        }
        if max_abs(&(m.adjoint() * m - identity(n))) > 1e-9 {
            return Err(Error::InvalidArgument("matrix is not unitary".into()));
        }
    }
    let w = u.adjoint() * v;
    let nu = hull_distance(&unitary_eigenvalues(&w)?);
    Ok(2.0 * (1.0 - nu * nu).max(0.0).sqrt())
}

/// Eigenvalues of a unitary, read off as Rayleigh quotients of the
/// eigenvectors of a generic Hermitian combination of its real and
/// imaginary parts (which commute).
fn unitary_eigenvalues(w: &ComplexMatrix) -> Result<Vec<(f64, f64)>> {
    let re = (w + w.adjoint()) * c64(0.5, 0.0);
    let im = (w - w.adjoint()) * c64(0.0, -0.5);
    let mix = re + im * c64(std::f64::consts::FRAC_1_SQRT_2 * 0.917, 0.0);
    let e = eigh_matrix(&mix)?;
    Ok((0..w.nrows())
        .map(|j| {
            let x = e.vectors.column(j);
            let z = x.dotc(&(w * x));
            (z.re, z.im)
        })
        .collect())
}

type Point = (f64, f64);

fn cross(a: Point, b: Point) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn segment_distance(a: Point, b: Point) -> f64 {
    let d = (b.0 - a.0, b.1 - a.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 > 0.0 { (-(a.0 * d.0 + a.1 * d.1) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let p = (a.0 + t * d.0, a.1 + t * d.1);
    p.0.hypot(p.1)
}

/// Distance from the origin to the convex hull of planar points: zero if
/// some triangle of them contains the origin, otherwise the nearest point on
/// any segment between two of them.
fn hull_distance(points: &[Point]) -> f64 {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let s = [cross(a, b), cross(b, c), cross(c, a)];
                let eps = 1e-14;
                if s.iter().all(|&x| x >= -eps) || s.iter().all(|&x| x <= eps) {
                    return 0.0;
                }
            }
        }
    }
    let mut best = points.iter().map(|p| p.0.hypot(p.1)).fold(f64::INFINITY, f64::min);
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(segment_distance(points[i], points[j]));
        }
    }
    best
}
