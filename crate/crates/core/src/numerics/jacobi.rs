//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Column pairs of a working copy are rotated until mutually orthogonal;
//! the column norms are then the singular values. Relative accuracy holds
//! for rank-deficient input, which the dense bidiagonal routine in
//! `nalgebra` does not reliably deliver for complex matrices.

use super::linalg::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 80;

pub(crate) struct JacobiSvd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Thin SVD with `min(rows, cols)` singular triplets, sorted descending.
/// Returns `None` if the sweeps fail to converge.
pub(crate) fn jacobi_svd(a: &ComplexMatrix, want_vectors: bool) -> Option<JacobiSvd> {
    let (m, n) = a.shape();
    if m < n {
        let t = jacobi_svd(&a.adjoint(), want_vectors)?;
        return Some(JacobiSvd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    let mut g = a.clone();
    let mut v = if want_vectors {
        ComplexMatrix::identity(n, n)
    } else {
        ComplexMatrix::zeros(0, 0)
    };
    // Columns below this squared norm are roundoff; rotating them only cycles.
    let negligible = (f64::EPSILON * (m + n) as f64 * a.norm()).powi(2);
    // Rounding keeps |γ| near ε√(αβ); a strict ε threshold can cycle.
    let orth_tol = m as f64 * f64::EPSILON;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let cp = g.column(p);
                    let cq = g.column(q);
                    (cp.norm_squared(), cq.norm_squared(), cp.dotc(&cq))
                };
                let gabs = gamma.norm();
                if gabs == 0.0
                    || alpha <= negligible
                    || beta <= negligible
                    || gabs <= orth_tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let phase = gamma / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut g, p, q, phase, c, s);
                if want_vectors {
                    rotate(&mut v, p, q, phase, c, s);
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return None;
    }
    let norms: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    if !want_vectors {
        return Some(JacobiSvd {
            u: ComplexMatrix::zeros(0, 0),
            s,
            v: ComplexMatrix::zeros(0, 0),
        });
    }
    let smax = s.first().copied().unwrap_or(0.0);
    let mut u = ComplexMatrix::zeros(m, n);
    let mut vs = ComplexMatrix::zeros(n, n);
    let mut missing = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        vs.set_column(k, &v.column(j));
        if norms[j] > 0.0 && norms[j] * norms[j] > negligible && norms[j] > smax * f64::EPSILON {
            let col = g.column(j) / C64::new(norms[j], 0.0);
            u.set_column(k, &col);
        } else {
            missing.push(k);
        }
    }
    complete_orthonormal(&mut u, &missing);
    Some(JacobiSvd { u, s, v: vs })
}

/// `q ← q·conj(phase)`, then the real rotation
/// `(p, q) ← (c·p − s·q, s·p + c·q)` on columns.
fn rotate(m: &mut ComplexMatrix, p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let ph = phase.conj();
    for i in 0..m.nrows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)] * ph;
        m[(i, p)] = xp * c - xq * s;
        m[(i, q)] = xp * s + xq * c;
    }
}

/// Fills the listed columns with unit vectors orthogonal to all others.
fn complete_orthonormal(u: &mut ComplexMatrix, missing: &[usize]) {
    let m = u.nrows();
    let mut basis_idx = 0;
    for &k in missing {
        loop {
            let mut cand = nalgebra::DVector::<C64>::zeros(m);
            cand[basis_idx % m] = C64::new(1.0, 0.0);
            basis_idx += 1;
            for j in 0..u.ncols() {
                if j == k || (missing.contains(&j) && j > k) {
                    continue;
                }
                let col = u.column(j).into_owned();
                let proj = col.dotc(&cand);
                cand -= col * proj;
            }
            let norm = cand.norm();
            if norm > 1e-6 {
                u.set_column(k, &(cand / C64::new(norm, 0.0)));
                break;
            }
            if basis_idx > 4 * m {
                break;
            }
        }
    }
}
