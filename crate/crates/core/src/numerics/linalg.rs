use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::jacobi::jacobi_svd;
use super::types::{DensityMatrix, HermitianMatrix, UnitVector};
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative singular-value threshold used for every numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Eigenvalues in `[-PSD_CLIP_TOL, 0)` are treated as roundoff and clipped.
pub const PSD_CLIP_TOL: f64 = 1e-10;

/// `sqrtm_psd` and `fidelity` accept eigenvalues down to this (scaled) bound.
pub const PSD_REJECT_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100_000;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// `|a⟩⟨b|` on an `n`-dimensional space.
pub fn ket_bra(n: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(a, b)] = C64::new(1.0, 0.0);
    m
}

pub fn basis_vector(n: usize, a: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[a] = C64::new(1.0, 0.0);
    v
}

/// `u v†`
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

/// Hilbert–Schmidt inner product `Tr(A† B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `(M + M†)/2`
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Row-major flattening: `vec(A)[y·cols + a] = A[y, a]`, i.e. `Σ_a (A|a⟩) ⊗ |a⟩`.
pub fn vectorize(a: &ComplexMatrix) -> ComplexVector {
    let (r, c) = a.shape();
    ComplexVector::from_fn(r * c, |idx, _| a[(idx / c, idx % c)])
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &ComplexVector, rows: usize, cols: usize) -> ComplexMatrix {
    debug_assert_eq!(v.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_vectors(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// `A ⊗ 1_k`
pub fn extend_right(a: &ComplexMatrix, k: usize) -> ComplexMatrix {
    if k == 1 {
        return a.clone();
    }
    a.kronecker(&identity(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of an operator on `A ⊗ B` over the named subsystem.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    which: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {n}x{n} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(match which {
        Subsystem::B => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|i| m[(i * dim_b + k, i * dim_b + l)]).sum()
        }),
    })
}

/// `Tr_B(u v†)` for vectors on `A ⊗ B`, without forming the outer product.
pub fn partial_trace_outer(
    u: &ComplexVector,
    v: &ComplexVector,
    dim_a: usize,
    dim_b: usize,
    which: Subsystem,
) -> ComplexMatrix {
    // u as a dim_a × dim_b matrix U gives Tr_B(uv†) = U V† and Tr_A(uv†) = Uᵀ V̄.
    let um = unvectorize(u, dim_a, dim_b);
    let vm = unvectorize(v, dim_a, dim_b);
    match which {
        Subsystem::B => &um * vm.adjoint(),
        Subsystem::A => um.transpose() * vm.map(|z| z.conj()),
    }
}

/// Spectral decomposition with eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: DVector<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigh {
    /// `Σ f(λᵢ) vᵢvᵢ†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let scaled = ComplexMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * f(self.values[j])
        });
        scaled * self.vectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn eigh_matrix(m: &ComplexMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigh needs a square matrix".into()));
    }
    let h = hermitian_part(m);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence("Hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = ComplexMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok(Eigh { values, vectors })
}

pub fn eigh(h: &HermitianMatrix) -> Result<Eigh> {
    eigh_matrix(h.as_matrix())
}

pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<DVector<f64>> {
    Ok(eigh_matrix(m)?.values)
}

/// Thin singular value decomposition `A = U diag(s) V†`, `s` descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: DVector<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let dec = jacobi_svd(a, true).ok_or(Error::NoConvergence("singular value decomposition"))?;
    Ok(Svd {
        u: dec.u,
        singular_values: DVector::from_vec(dec.s),
        v: dec.v,
    })
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    match jacobi_svd(a, false) {
        Some(d) => d.s,
        // Sweep limit reached: fall back to the spectrum of A†A.
        None => {
            let g = if a.nrows() >= a.ncols() { a.adjoint() * a } else { a * a.adjoint() };
            let mut s: Vec<f64> = eigh_matrix(&g)
                .map(|e| e.values.iter().map(|l| l.max(0.0).sqrt()).collect())
                .unwrap_or_default();
            s.sort_by(|x, y| y.total_cmp(x));
            s
        }
    }
}

/// `‖A‖₁`, the sum of the singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().sum()
}

/// Trace norm of a matrix known to be Hermitian, via its spectrum.
pub fn trace_norm_hermitian(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues_hermitian(a)?.iter().map(|l| l.abs()).sum())
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `tau · s_max` (zero for the zero matrix).
pub fn rank_eps(a: &ComplexMatrix, tau: f64) -> usize {
    let s = singular_values(a);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > tau * smax).count(),
        _ => 0,
    }
}

/// Spectral decomposition of a PSD matrix with roundoff-level negative
/// eigenvalues clipped to zero.
pub(crate) fn psd_eigh(m: &ComplexMatrix) -> Result<Eigh> {
    let mut e = eigh_matrix(m)?;
    let scale = e.max().abs().max(1.0);
    let min = e.min();
    if min < -PSD_REJECT_TOL * scale {
        return Err(Error::NotPsd(min));
    }
    e.values.apply(|l| *l = l.max(0.0));
    Ok(e)
}

/// Principal square root of a PSD matrix.
pub fn sqrtm_psd(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian_part(sqrtm_psd_matrix(p.as_matrix())?))
}

pub(crate) fn sqrtm_psd_matrix(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = psd_eigh(p)?;
    // Eigenvalues at the roundoff floor would contribute O(√ε) after the root.
    let floor = 8.0 * f64::EPSILON * p.nrows() as f64 * e.max();
    Ok(e.reconstruct_with(|l| if l > floor { l.sqrt() } else { 0.0 }))
}

/// Fidelity `F(P, Q) = ‖√P √Q‖₁` of PSD operators.
pub fn fidelity(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    fidelity_matrices(p.as_matrix(), q.as_matrix())
}

pub(crate) fn fidelity_matrices(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    if p.shape() != q.shape() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {:?} and {:?} operators",
            p.shape(),
            q.shape()
        )));
    }
    let sp = sqrtm_psd_matrix(p)?;
    let sq = sqrtm_psd_matrix(q)?;
    Ok(trace_norm(&(sp * sq)))
}

/// Purification `u = Σᵢ √pᵢ xᵢ ⊗ eᵢ` of `rho` on `X ⊗ W`, built from the
/// eigendecomposition of `rho` (eigenvalues in descending order, standard
/// basis vectors `eᵢ` of `W`).
pub fn purify(rho: &DensityMatrix, ancilla_dim: usize) -> Result<UnitVector> {
    let n = rho.dim();
    let e = eigh(rho.hermitian())?;
    let pmax = e.max();
    let rank = e
        .values
        .iter()
        .filter(|&&p| p > DEFAULT_RANK_TOL * pmax)
        .count();
    if ancilla_dim < rank || ancilla_dim == 0 {
        return Err(Error::AncillaTooSmall {
            ancilla: ancilla_dim,
            rank,
        });
    }
    let mut u = ComplexVector::zeros(n * ancilla_dim);
    for i in 0..rank {
        let w = e.values[i].max(0.0).sqrt();
        for x in 0..n {
            u[x * ancilla_dim + i] += e.vectors[(x, i)] * w;
        }
    }
    UnitVector::normalized(u)
}

/// SWAP on `Cⁿ ⊗ Cⁿ` and the projectors onto the symmetric and antisymmetric
/// subspaces.
#[derive(Clone, Debug)]
pub struct SwapProjectors {
    pub swap: ComplexMatrix,
    pub symmetric: ComplexMatrix,
    pub antisymmetric: ComplexMatrix,
}

pub fn swap_and_projectors(n: usize) -> SwapProjectors {
    let d = n * n;
    let mut swap = ComplexMatrix::zeros(d, d);
    for a in 0..n {
        for b in 0..n {
            swap[(b * n + a, a * n + b)] = C64::new(1.0, 0.0);
        }
    }
    let id = identity(d);
    let half = C64::new(0.5, 0.0);
    SwapProjectors {
        symmetric: (&id + &swap) * half,
        antisymmetric: (&id - &swap) * half,
        swap,
    }
}

/// Projection of a real vector onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Frobenius-nearest density matrix to the Hermitian part of `m`.
pub(crate) fn project_to_density(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = eigh_matrix(m)?;
    let p = project_simplex(e.values.as_slice());
    let mut out = ComplexMatrix::zeros(m.nrows(), m.nrows());
    for (j, &pj) in p.iter().enumerate() {
        if pj > 0.0 {
            let col = e.vectors.column(j);
            out += col * col.adjoint() * C64::new(pj, 0.0);
        }
    }
    Ok(hermitian_part(&out))
}
