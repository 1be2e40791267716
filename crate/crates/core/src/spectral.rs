//! Spectral analysis of the Fourier symbol `U(θ)`.
//!
//! The eigenvalues of `U(θ)` are `e^{iλ_m(θ)}`, `m = 1..4`; the slopes
//! `dλ_m/dθ` are the group velocities whose range is the support of the
//! weak limit of `X_n / n`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cmatrix::{inner, vec_norm, ComplexMatrix};
use crate::coin::{u_theta, Coin};
use crate::eigen::{eigen_residual, fix_phase, inverse_iteration, poly_roots};
use crate::error::{QqwError, Result};
use crate::quaternion::Quaternion;

/// Eigenvalues closer than this on the unit circle mark a degenerate node.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// `|A||B|` below this makes the closed-form eigenvector construction degenerate.
pub const AB_TOL: f64 = 1e-10;
/// Step of the central difference for `dλ/dθ`.
pub const FD_STEP: f64 = 1e-6;

/// Coefficients of `det(λI − U(θ))`, highest power first:
///
/// `λ⁴ − 2(a0 e^{iθ} + d0 e^{−iθ})λ³ + 2(2 a0 d0 − Re(bc) + |a|² cos 2θ)λ²
///  − 2(d0 e^{iθ} + a0 e^{−iθ})λ + 1`.
pub fn char_poly_coeffs(coin: &Coin, theta: f64) -> [Complex64; 5] {
    let (a0, d0) = (coin.a().re(), coin.d().re());
    let e = Complex64::from_polar(1.0, theta);
    let ei = e.conj();
    let one = Complex64::new(1.0, 0.0);
    let mid = 2.0 * (2.0 * a0 * d0 - coin.re_bc() + coin.a().norm_sqr() * (2.0 * theta).cos());
    [
        one,
        -2.0 * (a0 * e + d0 * ei),
        Complex64::new(mid, 0.0),
        -2.0 * (d0 * e + a0 * ei),
        one,
    ]
}

/// The same coefficients extracted numerically from the matrix `U(θ)`.
pub fn char_poly_numeric(coin: &Coin, theta: f64) -> Vec<Complex64> {
    u_theta(coin, theta).matrix.characteristic_polynomial()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub theta: f64,
    /// Eigen-angle in `[−π, π)`.
    pub lambda: f64,
    pub eigenvalue: Complex64,
    /// Unit eigenvector, largest component real and positive.
    pub vector: Vec<Complex64>,
}

impl EigenPair {
    pub fn residual(&self, u: &ComplexMatrix) -> f64 {
        eigen_residual(u, self.eigenvalue, &self.vector)
    }
}

/// Wraps an angle into `[−π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Eigenvalues of `U(θ)` as roots of [`char_poly_coeffs`], projected onto the
/// unit circle and sorted by angle.
pub fn eigenvalues(coin: &Coin, theta: f64) -> Result<Vec<Complex64>> {
    let mut roots = poly_roots(&char_poly_coeffs(coin, theta))?;
    for z in roots.iter_mut() {
        *z /= z.norm();
    }
    roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    Ok(roots)
}

fn check_separated(theta: f64, eig: &[Complex64]) -> Result<()> {
    for i in 0..eig.len() {
        for j in i + 1..eig.len() {
            if (eig[i] - eig[j]).norm() < DEGENERACY_TOL {
                return Err(QqwError::Degenerate { theta });
            }
        }
    }
    Ok(())
}

/// The four eigenpairs of `U(θ)`, sorted by eigen-angle.
pub fn eigen_system(coin: &Coin, theta: f64) -> Result<Vec<EigenPair>> {
    let eig = eigenvalues(coin, theta)?;
    check_separated(theta, &eig)?;
    let u = u_theta(coin, theta).matrix;
    eig.into_iter()
        .map(|mu| {
            let vector = inverse_iteration(&u, mu)?;
            Ok(EigenPair {
                theta,
                lambda: wrap_angle(mu.arg()),
                eigenvalue: mu,
                vector,
            })
        })
        .collect()
}

/// The quaternions `A`, `B` of the eigen-equation `A s = B s i`:
///
/// `A = c + d b̄ cos(λ−θ) + b̄ a cos(λ+θ) − b̄ cos 2λ`,
/// `B = −d b̄ sin(λ−θ) − b̄ a sin(λ+θ) + b̄ sin 2λ`.
pub fn eigen_ab(coin: &Coin, theta: f64, lambda: f64) -> (Quaternion, Quaternion) {
    let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
    let bc = b.conj();
    let (sm, cm) = (lambda - theta).sin_cos();
    let (sp, cp) = (lambda + theta).sin_cos();
    let (s2, c2) = (2.0 * lambda).sin_cos();
    let aq = c + d * bc * cm + bc * a * cp - bc * c2;
    let bq = -(d * bc) * sm - bc * a * sp + bc * s2;
    (aq, bq)
}

/// Which printed expression for `C` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CFormula {
    /// Valid for every coin with `b ≠ 0`.
    General,
    /// The restatement for `a0 = d0 = 0`.
    Case5,
}

/// `C = B⁻¹ A` (a unit pure quaternion) together with the normalizer `|B|²`
/// and `T = b d b̄ + c̄ d c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenvectorParams {
    pub c: Quaternion,
    pub b_sq: f64,
    pub t: Quaternion,
}

/// Evaluates the closed-form `C` and `|B|²`.
pub fn eigenvector_params(
    coin: &Coin,
    theta: f64,
    lambda: f64,
    formula: CFormula,
) -> EigenvectorParams {
    let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
    let bb = b.norm_sqr();
    let aa = a.norm_sqr();
    let bc = b * c;
    let t = b * d * b.conj() + c.conj() * d * c;
    let sm = (lambda - theta).sin();
    let sp = (lambda + theta).sin();
    let s2l = (2.0 * lambda).sin();
    let s2t = (2.0 * theta).sin();
    let (raw, b_sq) = match formula {
        CFormula::General => {
            let d2 = (d * d).conj();
            let raw = 2.0 * bb * sm * a + sp * t + bc * s2l - b * d2 * c * s2t;
            let re_a2bc = ((a * a).conj() * bc).re();
            let b_sq = aa * bb * (sm * sm + sp * sp)
                - 2.0 * bb * (a.re() * sp + d.re() * sm) * s2l
                - 2.0 * re_a2bc * sm * sp
                + bb * s2l * s2l;
            (raw, b_sq)
        }
        CFormula::Case5 => {
            let rebc = bc.re();
            let g = 1.0 + aa * aa - rebc * rebc;
            let raw = 2.0 * bb * sm * a + sp * t + bc * (s2l + aa * s2t);
            let b_sq = 2.0 * aa * rebc * (2.0 * theta).cos() + g - 2.0 * aa * aa;
            (raw, b_sq)
        }
    };
    EigenvectorParams {
        c: raw.im() / b_sq,
        b_sq,
        t,
    }
}

/// `C` computed directly as `B⁻¹ A`.
pub fn c_direct(coin: &Coin, theta: f64, lambda: f64) -> Result<Quaternion> {
    let (aq, bq) = eigen_ab(coin, theta, lambda);
    let ab = aq.norm() * bq.norm();
    if ab <= AB_TOL {
        return Err(QqwError::DegenerateAB { theta, lambda, ab });
    }
    Ok(bq.inv() * aq)
}

/// Eigenvector of `U(θ)` for the eigenvalue `e^{iλ}` from the closed-form
/// construction with `p' = |b|²`, `p'' = 0`, unnormalized.
pub fn eigenvector_closed_form_with(
    coin: &Coin,
    theta: f64,
    lambda: f64,
    formula: CFormula,
) -> Result<Vec<Complex64>> {
    let b = coin.b();
    let bb = b.norm_sqr();
    if bb <= crate::coin::ZERO_TOL {
        return Err(QqwError::Domain(
            "eigenvector construction requires b != 0".into(),
        ));
    }
    let (aq, bq) = eigen_ab(coin, theta, lambda);
    let ab = aq.norm() * bq.norm();
    if ab <= AB_TOL {
        return Err(QqwError::DegenerateAB { theta, lambda, ab });
    }
    let params = eigenvector_params(coin, theta, lambda, formula);
    let (c1, c2, c3) = (params.c.x1, params.c.x2, params.c.x3);
    let u = Complex64::new(1.0 + c1, 0.0);
    let w = Complex64::new(c3, c2);
    let e = Complex64::from_polar(1.0, lambda - theta);
    let l = |x: Complex64, y: Complex64| x + y * e;
    let ba = b.conj() * coin.a();
    let (bap, bapp) = (ba.simplex(), ba.perplex());
    let (bp, bpp) = (b.simplex(), b.perplex());
    let v = vec![
        bb * u,
        -bb * w,
        -l(bap, -bp.conj()) * u - l(bapp, bpp) * w,
        -l(bapp.conj(), bpp.conj()) * u + l(bap.conj(), -bp) * w,
    ];
    if vec_norm(&v) <= 1e-8 * bb {
        // C = −i annihilates s = p − C p i for real p
        return Err(QqwError::Numeric(format!(
            "closed-form eigenvector vanishes at theta = {theta}, lambda = {lambda}"
        )));
    }
    Ok(v)
}

/// Eigenvector from an arbitrary seed quaternion `p`: `s = p − C p i`,
/// `t = (b̄/|b|²)(s e^{i(λ−θ)} − a s)`, returned as `[χ-column(s), χ-column(t)]`.
pub fn eigenvector_from_seed(
    coin: &Coin,
    theta: f64,
    lambda: f64,
    c: Quaternion,
    p: Quaternion,
) -> Vec<Complex64> {
    let b = coin.b();
    let s = p - c * p * Quaternion::I;
    let t = b.conj() / b.norm_sqr() * (s * Quaternion::exp_i(lambda - theta) - coin.a() * s);
    let [s0, s1] = s.chi_column();
    let [t0, t1] = t.chi_column();
    vec![s0, s1, t0, t1]
}

/// [`eigenvector_closed_form_with`] using the general expression for `C`,
/// normalized with the phase convention of [`eigen_system`].
///
/// Where the printed vector vanishes (`C = −i`, which annihilates every real
/// seed) the seed `p = |b|² j` is used instead.
pub fn eigenvector_closed_form(coin: &Coin, theta: f64, lambda: f64) -> Result<Vec<Complex64>> {
    let v = match eigenvector_closed_form_with(coin, theta, lambda, CFormula::General) {
        Err(QqwError::Numeric(_)) => {
            let c = eigenvector_params(coin, theta, lambda, CFormula::General).c;
            eigenvector_from_seed(coin, theta, lambda, c, Quaternion::J * coin.b().norm_sqr())
        }
        other => other?,
    };
    let n = vec_norm(&v);
    Ok(fix_phase(v.into_iter().map(|z| z / n).collect()))
}

/// `min_φ ‖u − e^{iφ} v‖` for unit vectors.
pub fn phase_distance(u: &[Complex64], v: &[Complex64]) -> f64 {
    let ip = inner(v, u);
    let ph = if ip.norm() > 0.0 {
        ip / ip.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let diff: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| a - ph * b).collect();
    vec_norm(&diff)
}

fn nearest(target: Complex64, set: &[Complex64]) -> Complex64 {
    *set.iter()
        .min_by(|a, b| (*a - target).norm().total_cmp(&(*b - target).norm()))
        .expect("four eigenvalues")
}

/// `dλ/dθ` for the `branch`-th eigenvalue (in the angle order of
/// [`eigenvalues`]) by a central difference with step [`FD_STEP`]. The branch
/// is continued to `θ ± h` by nearest-on-circle pairing.
pub fn group_velocity(coin: &Coin, theta: f64, branch: usize) -> Result<f64> {
    let eig = eigenvalues(coin, theta)?;
    check_separated(theta, &eig)?;
    let mu = *eig
        .get(branch)
        .ok_or_else(|| QqwError::Domain(format!("branch {branch} out of range 0..4")))?;
    let plus = nearest(mu, &eigenvalues(coin, theta + FD_STEP)?);
    let minus = nearest(mu, &eigenvalues(coin, theta - FD_STEP)?);
    Ok((plus / minus).arg() / (2.0 * FD_STEP))
}

/// `(X, Y) = (1 − Re(bc) + |a|² cos 2θ, 1 + Re(bc) − |a|² cos 2θ)` for a
/// Case-5 coin, in a form free of cancellation at small `θ`.
fn case5_xy(coin: &Coin, theta: f64) -> (f64, f64) {
    let aa = coin.a().norm_sqr();
    let bb = coin.b().norm_sqr();
    let rebc = coin.re_bc();
    let s2 = theta.sin().powi(2);
    let x = (1.0 - rebc + aa) - 2.0 * aa * s2;
    let y = (bb + rebc) + 2.0 * aa * s2;
    (x.max(0.0), y.max(0.0))
}

fn require_case5(coin: &Coin) -> Result<()> {
    if !coin.is_case5() || !coin.all_nonzero() {
        return Err(QqwError::Domain(
            "requires a0 = d0 = 0 and abcd != 0".into(),
        ));
    }
    Ok(())
}

/// `λ ∈ [0, π/2]` with the spectrum `{±e^{iλ}, ±e^{−iλ}}`.
///
/// For `a0 = d0 = 0` the characteristic polynomial is biquadratic with
/// `cos 2λ = Re(bc) − |a|² cos 2θ`, so `cos λ = √(Y/2)` and `sin λ = √(X/2)`.
pub fn case5_lambda(coin: &Coin, theta: f64) -> Result<f64> {
    require_case5(coin)?;
    let (x, y) = case5_xy(coin, theta);
    Ok((x / 2.0).sqrt().atan2((y / 2.0).sqrt()))
}

/// The closed-form Case-5 spectrum `[e^{iλ}, −e^{iλ}, e^{−iλ}, −e^{−iλ}]`.
pub fn case5_spectrum(coin: &Coin, theta: f64) -> Result<[Complex64; 4]> {
    let lam = case5_lambda(coin, theta)?;
    let e = Complex64::from_polar(1.0, lam);
    Ok([e, -e, e.conj(), -e.conj()])
}

/// `y = |a|² sin 2θ / (√(1 − Re(bc) + |a|² cos 2θ) √(1 + Re(bc) − |a|² cos 2θ))`.
///
/// `|y|` is the speed of every branch; see [`case5_branch_velocity`] for signs.
pub fn case5_velocity(coin: &Coin, theta: f64) -> Result<f64> {
    require_case5(coin)?;
    let (x, y) = case5_xy(coin, theta);
    let den = x.sqrt() * y.sqrt();
    if den == 0.0 {
        return Err(QqwError::Degenerate { theta });
    }
    Ok(coin.a().norm_sqr() * (2.0 * theta).sin() / den)
}

/// `dλ/dθ` of the Case-5 branch through the eigenvalue `mu`. Differentiating
/// `cos 2λ = Re(bc) − |a|² cos 2θ` gives `−y` on the branches `±e^{iλ}`
/// (first and third quadrants) and `+y` on `±e^{−iλ}`.
pub fn case5_branch_velocity(coin: &Coin, theta: f64, mu: Complex64) -> Result<f64> {
    let y = case5_velocity(coin, theta)?;
    Ok(if mu.re * mu.im >= 0.0 { -y } else { y })
}

/// `sup_θ |dλ/dθ|` for a Case-5 coin: grid scan of the closed-form slope on
/// `[0, π/2]` followed by golden-section refinement.
pub fn sup_velocity(coin: &Coin) -> Result<f64> {
    require_case5(coin)?;
    let f = |t: f64| case5_velocity(coin, t).map(f64::abs).unwrap_or(0.0);
    let n = 2048;
    let h = PI / 2.0 / n as f64;
    let best = (1..n)
        .max_by(|&i, &j| f(i as f64 * h).total_cmp(&f(j as f64 * h)))
        .unwrap();
    let (mut lo, mut hi) = ((best - 1) as f64 * h, (best + 1) as f64 * h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    Ok(f1.max(f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{random_coin, validate_coin, CoinFamily};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2 as S;
    use Quaternion as Q;

    fn case5_example() -> Coin {
        validate_coin(Q::J * S, Q::J * S, Q::K * S, -Q::K * S).unwrap()
    }

    fn ij_coin() -> Coin {
        validate_coin(Q::I * S, Q::J * S, Q::J * S, Q::I * S).unwrap()
    }

    #[test]
    fn char_poly_matches_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = validate_coin(Q::real(S), Q::real(S), Q::real(S), Q::real(-S)).unwrap();
        for coin in [
            h,
            case5_example(),
            random_coin(CoinFamily::General, &mut rng),
        ] {
            for theta in [0.0, 0.4, -2.1] {
                let f = char_poly_coeffs(&coin, theta);
                let n = char_poly_numeric(&coin, theta);
                for (x, y) in f.iter().zip(&n) {
                    assert!((x - y).norm() < 1e-12);
                }
                assert_eq!(f[4], Complex64::new(1.0, 0.0));
            }
        }
        let f = char_poly_coeffs(&case5_example(), 0.7);
        assert_eq!(f[1].norm(), 0.0);
        assert_eq!(f[3].norm(), 0.0);
    }

    #[test]
    fn eigen_system_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let coin = random_coin(CoinFamily::General, &mut rng);
        let theta = 0.9;
        let u = u_theta(&coin, theta).matrix;
        let pairs = eigen_system(&coin, theta).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        for p in &pairs {
            assert!(p.residual(&u) < 1e-12);
            assert!((p.eigenvalue.norm() - 1.0).abs() < 1e-12);
            prod *= p.eigenvalue;
        }
        assert!((prod - u.determinant()).norm() < 1e-12);
    }

    #[test]
    fn case5_spectrum_closed_form() {
        for (coin, theta) in [
            (case5_example(), 0.0),
            (case5_example(), 0.3),
            (ij_coin(), 0.1),
            (ij_coin(), 1.2),
        ] {
            let mut closed = case5_spectrum(&coin, theta).unwrap().to_vec();
            closed.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
            let num = eigenvalues(&coin, theta).unwrap();
            for (x, y) in closed.iter().zip(&num) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_eigenvector_matches_numeric() {
        let coin = case5_example();
        let theta = 0.3;
        let pairs = eigen_system(&coin, theta).unwrap();
        for p in &pairs {
            let v = eigenvector_closed_form(&coin, theta, p.lambda).unwrap();
            assert!(phase_distance(&v, &p.vector) < 1e-8);
            let printed =
                eigenvector_closed_form_with(&coin, theta, p.lambda, CFormula::General).unwrap();
            let c = eigenvector_params(&coin, theta, p.lambda, CFormula::General).c;
            let seeded =
                eigenvector_from_seed(&coin, theta, p.lambda, c, Q::real(coin.b().norm_sqr()));
            for (x, y) in printed.iter().zip(&seeded) {
                assert!((x - y).norm() < 1e-12);
            }
            let direct = c_direct(&coin, theta, p.lambda).unwrap();
            for f in [CFormula::General, CFormula::Case5] {
                let params = eigenvector_params(&coin, theta, p.lambda, f);
                assert!((params.c - direct).norm() < 1e-10);
                assert!((params.c.norm() - 1.0).abs() < 1e-9);
                assert_eq!(params.c.re(), 0.0);
            }
        }
    }

    #[test]
    fn closed_form_s_and_t_solve_the_eigen_equation() {
        // s = p − C p i solves A s = B s i; t follows from the first row.
        let coin = case5_example();
        let theta = 0.3;
        let lam = eigen_system(&coin, theta).unwrap()[0].lambda;
        let (aq, bq) = eigen_ab(&coin, theta, lam);
        let cq = c_direct(&coin, theta, lam).unwrap();
        let p = Q::real(coin.b().norm_sqr());
        let s = p - cq * p * Q::I;
        assert!((aq * s - bq * s * Q::I).norm() < 1e-12);
        let t = coin.b().conj() / coin.b().norm_sqr() * (s * Q::exp_i(lam - theta) - coin.a() * s);
        assert!(t.is_finite());
    }

    #[test]
    fn seed_fallback_where_printed_vector_vanishes() {
        // every C is ±i for this coin; the −i branches need the j seed
        let coin = ij_coin();
        let theta = 0.3;
        let u = u_theta(&coin, theta).matrix;
        let mut vanished = 0;
        for p in eigen_system(&coin, theta).unwrap() {
            if eigenvector_closed_form_with(&coin, theta, p.lambda, CFormula::General).is_err() {
                vanished += 1;
            }
            let v = eigenvector_closed_form(&coin, theta, p.lambda).unwrap();
            assert!(eigen_residual(&u, p.eigenvalue, &v) < 1e-12);
            assert!(phase_distance(&v, &p.vector) < 1e-8);
        }
        assert_eq!(vanished, 2);
    }

    #[test]
    fn velocities() {
        let coin = case5_example();
        assert_eq!(case5_velocity(&coin, 0.0).unwrap(), 0.0);
        for theta in [0.2, 0.7, 1.3] {
            let eig = eigenvalues(&coin, theta).unwrap();
            for (k, mu) in eig.iter().enumerate() {
                let num = group_velocity(&coin, theta, k).unwrap();
                let ana = case5_branch_velocity(&coin, theta, *mu).unwrap();
                assert!((num - ana).abs() < 1e-6, "{num} vs {ana}");
            }
        }
        assert!((sup_velocity(&coin).unwrap() - 0.5).abs() < 1e-9);
        // the supremum is approached as θ → 0, where the spectrum degenerates
        assert!((sup_velocity(&ij_coin()).unwrap() - S).abs() < 1e-9);
    }

    #[test]
    fn non_case5_rejected() {
        let h = validate_coin(Q::real(S), Q::real(S), Q::real(S), Q::real(-S)).unwrap();
        assert!(matches!(case5_velocity(&h, 0.3), Err(QqwError::Domain(_))));
        // Hadamard embeds twice: every eigenvalue is doubled
        assert!(matches!(
            eigen_system(&h, 0.3),
            Err(QqwError::Degenerate { .. })
        ));
    }
}
