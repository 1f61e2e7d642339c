use crate::error::{Error, Result};
use crate::numerics::{
    partial_trace, ComplexMatrix, ComplexVector, Subsystem, C64,
};

/// `Φ(X) = Σⱼ Aⱼ X Bⱼ†` with every operator of shape `dim_out × dim_in`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausRep {
    dim_in: usize,
    dim_out: usize,
    pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl KrausRep {
    pub fn new(
        dim_in: usize,
        dim_out: usize,
        pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
    ) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidArgument("channel dimensions must be positive".into()));
        }
        for (j, (a, b)) in pairs.iter().enumerate() {
            for m in [a, b] {
                if m.shape() != (dim_out, dim_in) {
                    return Err(Error::DimensionMismatch(format!(
                        "Kraus operator {j} is {}x{}, expected {dim_out}x{dim_in}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            pairs,
        })
    }

    /// Completely positive form `Φ(X) = Σⱼ Aⱼ X Aⱼ†`.
    pub fn completely_positive(
        dim_in: usize,
        dim_out: usize,
        ops: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        Self::new(dim_in, dim_out, ops.into_iter().map(|a| (a.clone(), a)).collect())
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn pairs(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True when every pair has `Aⱼ = Bⱼ`.
    pub fn cp_symmetric(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for (a, b) in &self.pairs {
            out += a * x * b.adjoint();
        }
        out
    }
}

/// Choi matrix `J(Φ) = Σ_{a,b} Φ(|a⟩⟨b|) ⊗ |a⟩⟨b|`, output factor first.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiRep {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix,
}

impl ChoiRep {
    pub fn new(dim_in: usize, dim_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidArgument("channel dimensions must be positive".into()));
        }
        let d = dim_in * dim_out;
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix is {}x{}, expected {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Φ(X)[y,y'] = Σ_{a,b} J[(y,a),(y',b)] X[a,b]`
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim_in, self.dim_out);
        ComplexMatrix::from_fn(m, m, |y, yp| {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    acc += self.matrix[(y * n + a, yp * n + b)] * x[(a, b)];
                }
            }
            acc
        })
    }

    /// `Tr_Y J(Φ)`, equal to the identity exactly when `Φ` preserves trace.
    pub fn trace_out_output(&self) -> ComplexMatrix {
        partial_trace(&self.matrix, self.dim_out, self.dim_in, Subsystem::A)
            .expect("Choi matrix has composite dimension")
    }
}

/// `Φ(X) = Tr_Z(A X B†)` with `A, B : X → Y ⊗ Z` (`Y` the high-order factor).
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringRep {
    dim_in: usize,
    dim_out: usize,
    dim_env: usize,
    a: ComplexMatrix,
    b: ComplexMatrix,
}

impl StinespringRep {
    pub fn new(
        dim_in: usize,
        dim_out: usize,
        dim_env: usize,
        a: ComplexMatrix,
        b: ComplexMatrix,
    ) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || dim_env == 0 {
            return Err(Error::InvalidArgument(
                "Stinespring dimensions must be positive".into(),
            ));
        }
        let shape = (dim_out * dim_env, dim_in);
        if a.shape() != shape || b.shape() != shape {
            return Err(Error::DimensionMismatch(format!(
                "Stinespring operators must be {}x{}",
                shape.0, shape.1
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            dim_env,
            a,
            b,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_env(&self) -> usize {
        self.dim_env
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let full = &self.a * x * self.b.adjoint();
        partial_trace(&full, self.dim_out, self.dim_env, Subsystem::B)
            .expect("Stinespring output has composite dimension")
    }

    /// Slice `(1_Y ⊗ ⟨j|) A`.
    pub(crate) fn env_slice(m: &ComplexMatrix, dim_out: usize, dim_env: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim_out, m.ncols(), |y, a| m[(y * dim_env + j, a)])
    }

    /// Slice `(⟨y| ⊗ 1_Z) A`.
    pub(crate) fn out_slice(m: &ComplexMatrix, dim_env: usize, y: usize) -> ComplexMatrix {
        m.rows(y * dim_env, dim_env).into_owned()
    }
}

/// `(A ⊗ 1_W) u` for `u ∈ X ⊗ W`.
pub fn apply_extended_vec(a: &ComplexMatrix, u: &ComplexVector, w: usize) -> ComplexVector {
    let n = a.ncols();
    debug_assert_eq!(u.len(), n * w);
    let um = ComplexMatrix::from_fn(n, w, |x, i| u[x * w + i]);
    let prod = a * um;
    let m = a.nrows();
    ComplexVector::from_fn(m * w, |idx, _| prod[(idx / w, idx % w)])
}
