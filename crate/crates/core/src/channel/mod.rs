//! Super-operators in Kraus, Choi and Stinespring form.
//!
//! The Choi matrix puts the output factor first,
//! `J(Φ) = Σ_{a,b} Φ(|a⟩⟨b|) ⊗ |a⟩⟨b|`, which forces the row-major
//! vectorization `vec(A) = Σ_a (A|a⟩) ⊗ |a⟩`. For a 2×2 operator
//! `A = [[p, q], [r, s]]` that is `vec(A) = (p, q, r, s)`, and the Choi
//! matrix of `X ↦ A X A†` is `vec(A) vec(A)†`.

mod convert;
pub mod random;
mod reps;

pub use convert::{choi_from_kraus, kraus_from_choi, kraus_from_stinespring, stinespring_from_kraus};
pub use reps::{apply_extended_vec, ChoiRep, KrausRep, StinespringRep};

use crate::error::{Error, Result};
use crate::numerics::{
    eigh_matrix, identity, ket_bra, max_abs, rank_eps, ComplexMatrix, ComplexVector, C64,
    DEFAULT_RANK_TOL,
};

/// Representation a [`SuperOp`] was constructed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Kraus,
    Choi,
    Stinespring,
}

/// A linear map `L(X) → L(Y)` with all three representations computed at
/// construction.
#[derive(Clone, Debug)]
pub struct SuperOp {
    primary: Representation,
    kraus: KrausRep,
    choi: ChoiRep,
    stinespring: StinespringRep,
}

impl SuperOp {
    pub fn from_kraus(kraus: KrausRep) -> Self {
        let choi = choi_from_kraus(&kraus);
        let stinespring = stinespring_from_kraus(&kraus);
        Self {
            primary: Representation::Kraus,
            kraus,
            choi,
            stinespring,
        }
    }

    /// Kraus and Stinespring forms use `rank_eps(J, tau)` pairs.
    pub fn from_choi(choi: ChoiRep, tau: f64) -> Result<Self> {
        let kraus = kraus_from_choi(&choi, tau)?;
        let stinespring = stinespring_from_kraus(&kraus);
        Ok(Self {
            primary: Representation::Choi,
            kraus,
            choi,
            stinespring,
        })
    }

    pub fn from_stinespring(stinespring: StinespringRep) -> Self {
        let kraus = kraus_from_stinespring(&stinespring);
        let choi = choi_from_kraus(&kraus);
        Self {
            primary: Representation::Stinespring,
            kraus,
            choi,
            stinespring,
        }
    }

    /// `X ↦ Σⱼ Aⱼ X Aⱼ†`
    pub fn from_cp_kraus(dim_in: usize, dim_out: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        Ok(Self::from_kraus(KrausRep::completely_positive(dim_in, dim_out, ops)?))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_cp_kraus(n, n, vec![identity(n)]).expect("square identity")
    }

    /// `X ↦ U X U†`
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_cp_kraus(u.ncols(), u.nrows(), vec![u.clone()])
    }

    /// Transpose in the standard basis, `X ↦ Xᵀ`.
    pub fn transpose(n: usize) -> Self {
        let pairs = (0..n)
            .flat_map(|a| (0..n).map(move |b| (ket_bra(n, a, b), ket_bra(n, b, a))))
            .collect();
        Self::from_kraus(KrausRep::new(n, n, pairs).expect("square basis operators"))
    }

    /// `X ↦ Tr(X) · σ` for a fixed output operator `σ`.
    pub fn replacement(n: usize, sigma: &ComplexMatrix) -> Result<Self> {
        let m = sigma.nrows();
        let mut j = ComplexMatrix::zeros(m * n, m * n);
        for y in 0..m {
            for yp in 0..m {
                for a in 0..n {
                    j[(y * n + a, yp * n + a)] = sigma[(y, yp)];
                }
            }
        }
        Self::from_choi(ChoiRep::new(n, m, j)?, DEFAULT_RANK_TOL)
    }

    pub fn dim_in(&self) -> usize {
        self.kraus.dim_in()
    }

    pub fn dim_out(&self) -> usize {
        self.kraus.dim_out()
    }

    pub fn primary(&self) -> Representation {
        self.primary
    }

    pub fn kraus(&self) -> &KrausRep {
        &self.kraus
    }

    pub fn choi(&self) -> &ChoiRep {
        &self.choi
    }

    pub fn stinespring(&self) -> &StinespringRep {
        &self.stinespring
    }

    pub fn choi_rank(&self, tau: f64) -> usize {
        rank_eps(self.choi.matrix(), tau)
    }

    fn check_input(&self, x: &ComplexMatrix) -> Result<()> {
        let n = self.dim_in();
        if x.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "super-operator input is {}x{}, expected {n}x{n}",
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x)?;
        Ok(self.kraus.apply(x))
    }

    pub fn apply_choi(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x)?;
        Ok(self.choi.apply(x))
    }

    pub fn apply_stinespring(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x)?;
        Ok(self.stinespring.apply(x))
    }

    /// `(Φ ⊗ 1_W)(u v†) = Σⱼ ((Aⱼ⊗1)u)((Bⱼ⊗1)v)†` for `u, v ∈ X ⊗ W`.
    pub fn apply_extended_outer(
        &self,
        u: &ComplexVector,
        v: &ComplexVector,
        ancilla_dim: usize,
    ) -> Result<ComplexMatrix> {
        let expect = self.dim_in() * ancilla_dim;
        if u.len() != expect || v.len() != expect {
            return Err(Error::DimensionMismatch(format!(
                "extended input vectors must have length {expect}"
            )));
        }
        let d = self.dim_out() * ancilla_dim;
        let mut out = ComplexMatrix::zeros(d, d);
        for (a, b) in self.kraus.pairs() {
            let au = apply_extended_vec(a, u, ancilla_dim);
            let bv = apply_extended_vec(b, v, ancilla_dim);
            out += &au * bv.adjoint();
        }
        Ok(out)
    }

    /// `(Φ ⊗ 1_W)(M)` for an operator `M` on `X ⊗ W`.
    pub fn apply_extended(&self, m: &ComplexMatrix, ancilla_dim: usize) -> Result<ComplexMatrix> {
        let expect = self.dim_in() * ancilla_dim;
        if m.shape() != (expect, expect) {
            return Err(Error::DimensionMismatch(format!(
                "extended input must be {expect}x{expect}"
            )));
        }
        let d = self.dim_out() * ancilla_dim;
        let id = identity(ancilla_dim);
        let mut out = ComplexMatrix::zeros(d, d);
        for (a, b) in self.kraus.pairs() {
            let ae = a.kronecker(&id);
            let be = b.kronecker(&id);
            out += ae * m * be.adjoint();
        }
        Ok(out)
    }

    /// Adjoint map with respect to the Hilbert–Schmidt inner product:
    /// Kraus pairs `(Aⱼ, Bⱼ) ↦ (Aⱼ†, Bⱼ†)`.
    pub fn adjoint(&self) -> SuperOp {
        let pairs = self
            .kraus
            .pairs()
            .iter()
            .map(|(a, b)| (a.adjoint(), b.adjoint()))
            .collect();
        SuperOp::from_kraus(
            KrausRep::new(self.dim_out(), self.dim_in(), pairs).expect("adjoint shapes agree"),
        )
    }

    /// `Φ₀ − Φ₁` via its Choi matrix, in signed minimal Kraus form.
    pub fn difference(&self, other: &SuperOp) -> Result<SuperOp> {
        self.difference_with_tol(other, DEFAULT_RANK_TOL)
    }

    pub fn difference_with_tol(&self, other: &SuperOp, tau: f64) -> Result<SuperOp> {
        if self.dim_in() != other.dim_in() || self.dim_out() != other.dim_out() {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract a {}→{} map from a {}→{} map",
                other.dim_in(),
                other.dim_out(),
                self.dim_in(),
                self.dim_out()
            )));
        }
        let j = self.choi.matrix() - other.choi.matrix();
        SuperOp::from_choi(ChoiRep::new(self.dim_in(), self.dim_out(), j)?, tau)
    }

    pub fn scaled(&self, c: f64) -> SuperOp {
        let j = self.choi.matrix() * C64::new(c, 0.0);
        SuperOp::from_choi(
            ChoiRep::new(self.dim_in(), self.dim_out(), j).expect("same shape"),
            DEFAULT_RANK_TOL,
        )
        .expect("Choi conversion of a scaled map")
    }

    /// Smallest eigenvalue of the Hermitian part of `J(Φ)`.
    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        Ok(eigh_matrix(self.choi.matrix())?.min())
    }

    /// Completely positive iff `J(Φ)` is Hermitian with no eigenvalue below
    /// `-1e-9` (scaled by `max(1, ‖J‖)`).
    pub fn is_cp(&self) -> bool {
        let j = self.choi.matrix();
        let scale = max_abs(j).max(1.0);
        if max_abs(&(j - j.adjoint())) > 1e-9 * scale {
            return false;
        }
        match eigh_matrix(j) {
            Ok(e) => e.min() >= -1e-9 * scale,
            Err(_) => false,
        }
    }

    /// `Σⱼ Aⱼ†Bⱼ = 1` to 1e-9.
    pub fn is_trace_preserving(&self) -> bool {
        let n = self.dim_in();
        let mut s = ComplexMatrix::zeros(n, n);
        for (a, b) in self.kraus.pairs() {
            s += a.adjoint() * b;
        }
        max_abs(&(s - identity(n))) <= 1e-9
    }

    /// `Tr ∘ Φ = 0`, i.e. `Σⱼ Aⱼ†Bⱼ = 0` to 1e-9.
    pub fn annihilates_trace(&self) -> bool {
        let n = self.dim_in();
        let mut s = ComplexMatrix::zeros(n, n);
        for (a, b) in self.kraus.pairs() {
            s += a.adjoint() * b;
        }
        max_abs(&s) <= 1e-9
    }

    /// Completely positive and trace preserving.
    pub fn is_admissible(&self) -> bool {
        self.is_cp() && self.is_trace_preserving()
    }
}

/// Complementary maps `Ψ_A(X) = Tr_Y(A X A†)`, `Ψ_B(X) = Tr_Y(B X B†)` of a
/// Stinespring pair, both from `X` into the environment `Z`.
pub fn complementary_pair(s: &StinespringRep) -> (SuperOp, SuperOp) {
    let (n, m, e) = (s.dim_in(), s.dim_out(), s.dim_env());
    let build = |op: &ComplexMatrix| {
        let ops = (0..m)
            .map(|y| StinespringRep::out_slice(op, e, y))
            .collect();
        SuperOp::from_cp_kraus(n, e, ops).expect("slices have environment shape")
    };
    (build(s.a()), build(s.b()))
}
