//! Small dense complex eigenproblems: shifted QR on Hessenberg matrices,
//! polynomial roots through the companion matrix, and eigenvectors by inverse
//! iteration.

use num_complex::Complex64;

use crate::cmatrix::{vec_norm, ComplexMatrix};
use crate::error::{QqwError, Result};

const MAX_SWEEPS_PER_ROOT: usize = 200;

/// Eigenvalues of an upper Hessenberg matrix by explicitly shifted QR with
/// Givens rotations, Wilkinson shifts and deflation on small subdiagonals.
pub fn hessenberg_eigenvalues(h: &ComplexMatrix) -> Result<Vec<Complex64>> {
    assert!(h.is_square());
    let mut h = h.clone();
    let n = h.rows();
    let mut out = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        // locate the start of the active unreduced block
        let mut l = hi - 1;
        while l > 0 {
            let scale = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if h[(l, l - 1)].norm() <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            out.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_ROOT {
            return Err(QqwError::Numeric("QR iteration did not converge".into()));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi - 1, hi - 1)] + h[(hi - 1, hi - 2)].norm() * Complex64::new(0.75, 0.4)
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };
        qr_step(&mut h, l, hi, mu);
    }
    Ok(out)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// One step `H − μI = QR`, `H ← RQ + μI` on rows and columns `l..hi`.
fn qr_step(h: &mut ComplexMatrix, l: usize, hi: usize, mu: Complex64) {
    for i in l..hi {
        h[(i, i)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi - 1 {
        let (x, y) = (h[(k, k)], h[(k + 1, k)]);
        let r = x.norm().hypot(y.norm());
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        for j in k..hi {
            let (u, v) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = c.conj() * u + s.conj() * v;
            h[(k + 1, j)] = -s * u + c * v;
        }
        rots.push((k, c, s));
    }
    for (k, c, s) in rots {
        let top = (k + 2).min(hi);
        for i in l..top {
            let (u, v) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = u * c + v * s;
            h[(i, k + 1)] = -u * s.conj() + v * c.conj();
        }
    }
    for i in l..hi {
        h[(i, i)] += mu;
    }
}

/// Companion matrix (upper Hessenberg) of the polynomial with coefficients
/// `coeffs`, highest power first.
pub fn companion(coeffs: &[Complex64]) -> ComplexMatrix {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// `(p(z), p'(z))` by Horner's rule.
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a polynomial (highest power first): companion-matrix QR followed
/// by one Newton step per root, kept only when it reduces `|p|`.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.len() < 2 || coeffs[0].norm() == 0.0 {
        return Err(QqwError::Numeric("degenerate polynomial".into()));
    }
    let mut roots = hessenberg_eigenvalues(&companion(coeffs))?;
    for z in roots.iter_mut() {
        let (p, dp) = poly_eval(coeffs, *z);
        if dp.norm() > 0.0 {
            let cand = *z - p / dp;
            if poly_eval(coeffs, cand).0.norm() < p.norm() {
                *z = cand;
            }
        }
    }
    Ok(roots)
}

/// Unit vector spanning (approximately) the null space of `m − λI`, by two
/// steps of inverse iteration. The phase is fixed so the largest component
/// is real and positive.
pub fn inverse_iteration(m: &ComplexMatrix, lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = m.rows();
    let shift = lambda + Complex64::new(1e-13, 1e-13) * (1.0 + lambda.norm());
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.31 * i as f64, 0.17 * (i as f64 + 1.0).sqrt()))
        .collect();
    for _ in 0..3 {
        let w = shifted
            .solve(&v)
            .ok_or_else(|| QqwError::Numeric("singular inverse-iteration system".into()))?;
        let norm = vec_norm(&w);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QqwError::Numeric("inverse iteration diverged".into()));
        }
        v = w.into_iter().map(|z| z / norm).collect();
    }
    Ok(fix_phase(v))
}

/// Rotates `v` so its largest component is real and positive.
pub fn fix_phase(v: Vec<Complex64>) -> Vec<Complex64> {
    let big = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    if big.norm() == 0.0 {
        return v;
    }
    let ph = big.conj() / big.norm();
    v.into_iter().map(|z| z * ph).collect()
}

/// `‖M v − λ v‖`.
pub fn eigen_residual(m: &ComplexMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let mv = m.mul_vec(v);
    let diff: Vec<Complex64> = mv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
    vec_norm(&diff)
}
