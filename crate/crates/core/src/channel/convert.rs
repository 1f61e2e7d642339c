use super::reps::{ChoiRep, KrausRep, StinespringRep};
use crate::error::Result;
use crate::numerics::{
    eigh_matrix, hermitian_part, max_abs, svd, unvectorize, vectorize, ComplexMatrix, C64,
};

/// `J = Σⱼ vec(Aⱼ) vec(Bⱼ)†` with the row-major `vec`.
pub fn choi_from_kraus(k: &KrausRep) -> ChoiRep {
    let d = k.dim_in() * k.dim_out();
    let mut j = ComplexMatrix::zeros(d, d);
    for (a, b) in k.pairs() {
        j += vectorize(a) * vectorize(b).adjoint();
    }
    ChoiRep::new(k.dim_in(), k.dim_out(), j).expect("dimensions agree by construction")
}

fn is_hermitian(j: &ComplexMatrix) -> bool {
    max_abs(&(j - j.adjoint())) <= 1e-10 * max_abs(j).max(1.0)
}

/// Minimal Kraus form; the pair count equals the numerical rank of `J`.
///
/// * `J` Hermitian: signed eigendecomposition `Bⱼ = sign(λⱼ) Aⱼ`,
///   `Aⱼ = √|λⱼ| unvec(vⱼ)`, so a PSD Choi matrix gives `Aⱼ = Bⱼ`.
/// * otherwise: `J = Σ sⱼ uⱼvⱼ†` gives `Aⱼ = √sⱼ unvec(uⱼ)`, `Bⱼ = √sⱼ unvec(vⱼ)`.
pub fn kraus_from_choi(c: &ChoiRep, tau: f64) -> Result<KrausRep> {
    let (n, m) = (c.dim_in(), c.dim_out());
    let j = c.matrix();
    let mut pairs = Vec::new();
    if is_hermitian(j) {
        let e = eigh_matrix(&hermitian_part(j))?;
        let scale = e.values.iter().fold(0.0f64, |s, l| s.max(l.abs()));
        if scale > 0.0 {
            for (i, &l) in e.values.iter().enumerate() {
                if l.abs() > tau * scale {
                    let a = unvectorize(&e.vectors.column(i).into_owned(), m, n)
                        * C64::new(l.abs().sqrt(), 0.0);
                    let b = if l > 0.0 { a.clone() } else { -a.clone() };
                    pairs.push((a, b));
                }
            }
        }
    } else {
        let d = svd(j)?;
        let smax = d.singular_values.iter().copied().fold(0.0, f64::max);
        for (i, &s) in d.singular_values.iter().enumerate() {
            if smax > 0.0 && s > tau * smax {
                let w = C64::new(s.sqrt(), 0.0);
                let a = unvectorize(&d.u.column(i).into_owned(), m, n) * w;
                let b = unvectorize(&d.v.column(i).into_owned(), m, n) * w;
                pairs.push((a, b));
            }
        }
    }
    KrausRep::new(n, m, pairs)
}

/// `A = Σⱼ Aⱼ ⊗ |j⟩`, `B = Σⱼ Bⱼ ⊗ |j⟩`; the environment has one level per
/// pair (one zero level for the zero map).
pub fn stinespring_from_kraus(k: &KrausRep) -> StinespringRep {
    let (n, m) = (k.dim_in(), k.dim_out());
    let e = k.len().max(1);
    let mut a = ComplexMatrix::zeros(m * e, n);
    let mut b = ComplexMatrix::zeros(m * e, n);
    for (j, (aj, bj)) in k.pairs().iter().enumerate() {
        for y in 0..m {
            for x in 0..n {
                a[(y * e + j, x)] = aj[(y, x)];
                b[(y * e + j, x)] = bj[(y, x)];
            }
        }
    }
    StinespringRep::new(n, m, e, a, b).expect("dimensions agree by construction")
}

/// Kraus pairs `((1_Y ⊗ ⟨j|)A, (1_Y ⊗ ⟨j|)B)` of a Stinespring pair.
pub fn kraus_from_stinespring(s: &StinespringRep) -> KrausRep {
    let (m, e) = (s.dim_out(), s.dim_env());
    let pairs = (0..e)
        .map(|j| {
            (
                StinespringRep::env_slice(s.a(), m, e, j),
                StinespringRep::env_slice(s.b(), m, e, j),
            )
        })
        .collect();
    KrausRep::new(s.dim_in(), m, pairs).expect("dimensions agree by construction")
}
