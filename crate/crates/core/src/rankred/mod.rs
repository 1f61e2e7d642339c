//! Rank reduction of channel preimages.
//!
//! Given a positive map `Φ` and an input `ρ₀` with output `P = Φ(ρ₀)`,
//! [`reduce_preimage`] finds a density operator `ρ` with `Φ(ρ) = P` and
//! `rank(ρ) ≤ rank(P)`. Each step moves `ρ` along a traceless Hermitian
//! direction supported on `im(ρ)` that `Φ` sends into nothing visible from
//! `im(P)`, until the boundary of the PSD cone is hit and the rank drops.

use crate::channel::SuperOp;
use crate::error::{Error, Result};
use crate::numerics::random::{random_psd, seeded_rng};
use crate::numerics::{
    c64, eigh_matrix, hermitian_part, identity, max_abs, psd_eigh, svd, trace, ComplexMatrix,
    DensityMatrix, HermitianMatrix, UnitVector, DEFAULT_RANK_TOL,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Relative singular-value threshold for kernel directions.
pub const KERNEL_TOL: f64 = 1e-8;
/// Eigenvalues of a density operator below this are treated as zero.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Orthonormal basis of the real space of `n × n` Hermitian matrices:
/// `E_aa`, then for each `a < b` the pair `(E_ab + E_ba)/√2`, `i(E_ab − E_ba)/√2`.
pub fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(a, a)] = c64(1.0, 0.0);
        out.push(m);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..n {
        for b in a + 1..n {
            let mut re = ComplexMatrix::zeros(n, n);
            re[(a, b)] = c64(s, 0.0);
            re[(b, a)] = c64(s, 0.0);
            let mut im = ComplexMatrix::zeros(n, n);
            im[(a, b)] = c64(0.0, s);
            im[(b, a)] = c64(0.0, -s);
            out.push(re);
            out.push(im);
        }
    }
    out
}

/// Coordinates of the Hermitian part of `h` in [`hermitian_basis`].
pub fn hermitian_coords(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        out.push(h[(a, a)].re);
    }
    let s = std::f64::consts::SQRT_2;
    for a in 0..n {
        for b in a + 1..n {
            let z = (h[(a, b)] + h[(b, a)].conj()) * 0.5;
            out.push(s * z.re);
            out.push(s * z.im);
        }
    }
    out
}

pub fn from_hermitian_coords(n: usize, x: &[f64]) -> ComplexMatrix {
    hermitian_basis(n)
        .iter()
        .zip(x)
        .fold(ComplexMatrix::zeros(n, n), |acc, (b, &c)| acc + b * c64(c, 0.0))
}

/// The map `X ↦ (U†Φ(X)U, Tr[(1 − Π_U)Φ(X)])` on `Herm(X)`, where `U` is an
/// isometry onto the range of `P`, written as a real matrix from
/// [`hermitian_basis`]`(n)` to coordinates of `Herm(C^k) ⊕ R`.
#[derive(Clone, Debug)]
pub struct RealLinearMap {
    pub dim_in: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub matrix: DMatrix<f64>,
    /// Columns span the range of `P`.
    pub range: ComplexMatrix,
}

impl RealLinearMap {
    pub fn apply(&self, x: &HermitianMatrix) -> Vec<f64> {
        let c = nalgebra::DVector::from_vec(hermitian_coords(x.as_matrix()));
        (&self.matrix * c).iter().copied().collect()
    }
}

fn range_of(p: &ComplexMatrix, tau: f64) -> Result<ComplexMatrix> {
    let e = psd_eigh(p)?;
    let cut = tau * e.max();
    let r = e.values.iter().filter(|&&l| l > cut).count();
    Ok(e.vectors.columns(0, r).into_owned())
}

pub fn build_psi(phi: &SuperOp, p: &HermitianMatrix) -> Result<RealLinearMap> {
    if p.dim() != phi.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "target output is {0}x{0}, map outputs are {1}x{1}",
            p.dim(),
            phi.dim_out()
        )));
    }
    if max_abs(p.as_matrix()) == 0.0 {
        return Err(Error::InvalidArgument("target output is zero".into()));
    }
    let u = range_of(p.as_matrix(), DEFAULT_RANK_TOL)?;
    let k = u.ncols();
    let n = phi.dim_in();
    let complement = identity(phi.dim_out()) - &u * u.adjoint();
    let basis = hermitian_basis(n);
    let rows = k * k + 1;
    let mut matrix = DMatrix::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        let out = phi.apply(b)?;
        let compressed = hermitian_coords(&(u.adjoint() * &out * &u));
        for (i, c) in compressed.into_iter().enumerate() {
            matrix[(i, j)] = c;
        }
        matrix[(k * k, j)] = trace(&(&complement * &out)).re;
    }
    Ok(RealLinearMap {
        dim_in: n,
        domain_dim: basis.len(),
        codomain_dim: rows,
        matrix,
        range: u,
    })
}

fn support_of(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = psd_eigh(rho)?;
    let r = e.values.iter().filter(|&&l| l > SUPPORT_TOL).count();
    Ok(e.vectors.columns(0, r).into_owned())
}

/// Traceless Hermitian directions `X` with `Ψ(X) = 0` and `im(X) ⊆ im(ρ)`,
/// unit Frobenius norm, smallest residual first.
pub fn kernel_directions(psi: &RealLinearMap, rho: &DensityMatrix) -> Result<Vec<HermitianMatrix>> {
    if rho.dim() != psi.dim_in {
        return Err(Error::DimensionMismatch(format!(
            "state is {0}x{0}, map inputs are {1}x{1}",
            rho.dim(),
            psi.dim_in
        )));
    }
    let v = support_of(rho.as_matrix())?;
    let r = v.ncols();
    if r <= 1 {
        return Ok(Vec::new());
    }
    let n = psi.dim_in;
    let sub_basis = hermitian_basis(r);
    let cols = sub_basis.len();
    // Embedding H ↦ V H V† in coordinates, then Ψ and the trace.
    let mut embed = DMatrix::zeros(n * n, cols);
    for (j, b) in sub_basis.iter().enumerate() {
        for (i, c) in hermitian_coords(&(&v * b * v.adjoint())).into_iter().enumerate() {
            embed[(i, j)] = c;
        }
    }
    let stacked_rows = psi.codomain_dim + 1;
    let mut m = DMatrix::<f64>::zeros(stacked_rows.max(cols), cols);
    m.view_mut((0, 0), (psi.codomain_dim, cols)).copy_from(&(&psi.matrix * &embed));
    for a in 0..r {
        m[(psi.codomain_dim, a)] = 1.0;
    }
    let s = svd(&m.map(|x| c64(x, 0.0)))?;
    let smax = s.singular_values[0];
    let mut out = Vec::new();
    for j in (0..cols).rev() {
        let sj = s.singular_values[j];
        if smax > 0.0 && sj > KERNEL_TOL * smax {
            break;
        }
        // A real matrix has a real kernel; take the dominant real component.
        let col = s.v.column(j);
        let re: Vec<f64> = col.iter().map(|z| z.re).collect();
        let im: Vec<f64> = col.iter().map(|z| z.im).collect();
        let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let (h, nh) = if norm(&re) >= norm(&im) { (re.clone(), norm(&re)) } else { (im.clone(), norm(&im)) };
        if nh == 0.0 {
            continue;
        }
        let h: Vec<f64> = h.iter().map(|x| x / nh).collect();
        let x = &v * from_hermitian_coords(r, &h) * v.adjoint();
        out.push(HermitianMatrix::from_hermitian_part(x));
    }
    Ok(out)
}

/// A direction from [`kernel_directions`], or `None` when the kernel meets
/// the traceless operators on `im(ρ)` only at zero.
pub fn kernel_intersection(psi: &RealLinearMap, rho: &DensityMatrix) -> Result<Option<HermitianMatrix>> {
    Ok(kernel_directions(psi, rho)?.into_iter().next())
}

/// Largest step `ρ + tX` that stays PSD, followed by truncation of
/// eigenvalues below [`SUPPORT_TOL`] and renormalization.
pub fn boundary_step(rho: &DensityMatrix, x: &HermitianMatrix) -> Result<(DensityMatrix, f64)> {
    let xm = x.as_matrix();
    if xm.shape() != rho.as_matrix().shape() {
        return Err(Error::DimensionMismatch("direction and state differ in size".into()));
    }
    let scale = max_abs(xm);
    if scale == 0.0 {
        return Err(Error::InvalidArgument("direction is zero".into()));
    }
    if trace(xm).re.abs() > 1e-8 * scale {
        return Err(Error::InvalidArgument("direction is not traceless".into()));
    }
    let v = support_of(rho.as_matrix())?;
    let outside = xm - &v * (v.adjoint() * xm * &v) * v.adjoint();
    if max_abs(&outside) > 1e-8 * scale {
        return Err(Error::InvalidArgument("direction leaves the support of the state".into()));
    }
    let rs = hermitian_part(&(v.adjoint() * rho.as_matrix() * &v));
    let inv_sqrt = eigh_matrix(&rs)?.reconstruct_with(|l| 1.0 / l.sqrt());
    let s = eigh_matrix(&(&inv_sqrt * (v.adjoint() * xm * &v) * &inv_sqrt))?;
    let (lo, hi) = (s.min(), s.max());
    let t = if lo < -SUPPORT_TOL {
        1.0 / lo.abs()
    } else if hi > SUPPORT_TOL {
        -1.0 / hi
    } else {
        return Err(Error::InvalidArgument("direction is numerically zero on the support".into()));
    };
    let moved = rho.as_matrix() + xm * c64(t, 0.0);
    let e = eigh_matrix(&moved)?;
    let cleaned = e.reconstruct_with(|l| if l > SUPPORT_TOL { l } else { 0.0 });
    Ok((DensityMatrix::from_unnormalized(cleaned)?, t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub rank_before: usize,
    pub step_size: f64,
    /// Frobenius distance of `Φ(ρ)` from the target after the step.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub rank_before: usize,
    pub rank_after: usize,
    pub output_rank: usize,
    pub residual: f64,
}

pub fn density_rank(rho: &DensityMatrix) -> Result<usize> {
    Ok(support_of(rho.as_matrix())?.ncols())
}

/// Rejects maps that send some sampled PSD input outside the PSD cone.
pub fn check_positive(phi: &SuperOp) -> Result<()> {
    let n = phi.dim_in();
    let mut rng = seeded_rng(0x5eed);
    let mut samples: Vec<ComplexMatrix> = (0..n)
        .map(|a| crate::numerics::ket_bra(n, a, a))
        .collect();
    for rank in 1..=n {
        for _ in 0..4 {
            samples.push(random_psd(n, rank, &mut rng).into_matrix());
        }
    }
    for x in samples {
        let y = phi.apply(&x)?;
        let scale = max_abs(&y).max(max_abs(&x));
        if max_abs(&(&y - y.adjoint())) > 1e-9 * scale || eigh_matrix(&y)?.min() < -1e-9 * scale {
            return Err(Error::NotPositive);
        }
    }
    Ok(())
}

/// A density operator `ρ` with `Φ(ρ) = Φ(ρ₀)` and `rank(ρ) ≤ rank(Φ(ρ₀))`.
pub fn reduce_preimage(phi: &SuperOp, rho0: &DensityMatrix) -> Result<(DensityMatrix, ReductionTrace)> {
    check_positive(phi)?;
    if rho0.dim() != phi.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "state is {0}x{0}, map inputs are {1}x{1}",
            rho0.dim(),
            phi.dim_in()
        )));
    }
    let target = hermitian_part(&phi.apply(rho0.as_matrix())?);
    let rank_before = density_rank(rho0)?;
    let residual_of = |rho: &DensityMatrix| -> Result<f64> {
        Ok((phi.apply(rho.as_matrix())? - &target).norm())
    };
    if max_abs(&target) <= 1e-12 {
        let e = eigh_matrix(rho0.as_matrix())?;
        let top = UnitVector::normalized(e.vectors.column(0).into_owned())?;
        let rho = DensityMatrix::pure_state(top.as_vector())?;
        let residual = residual_of(&rho)?;
        return Ok((
            rho,
            ReductionTrace {
                steps: Vec::new(),
                rank_before,
                rank_after: 1,
                output_rank: 0,
                residual,
            },
        ));
    }
    let psi = build_psi(phi, &HermitianMatrix::from_hermitian_part(target.clone()))?;
    let output_rank = psi.range.ncols();
    let mut rho = rho0.clone();
    let mut steps = Vec::new();
    for _ in 0..phi.dim_in() {
        let rank = density_rank(&rho)?;
        if rank <= 1 {
            break;
        }
        let mut moved = None;
        for x in kernel_directions(&psi, &rho)? {
            if let Ok((next, t)) = boundary_step(&rho, &x) {
                if density_rank(&next)? < rank {
                    moved = Some((next, t));
                    break;
                }
            }
        }
        let Some((next, t)) = moved else { break };
        rho = next;
        steps.push(ReductionStep {
            rank_before: rank,
            step_size: t,
            residual: residual_of(&rho)?,
        });
    }
    let rank_after = density_rank(&rho)?;
    let residual = residual_of(&rho)?;
    Ok((
        rho,
        ReductionTrace {
            steps,
            rank_before,
            rank_after,
            output_rank,
            residual,
        },
    ))
}
