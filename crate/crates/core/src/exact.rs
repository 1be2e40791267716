//! Closed-form path sums `Ξ_n(l, m)` and position distributions.
//!
//! `Ξ_n(l, m)` is the sum over all time-ordered products of `l` copies of `P`
//! and `m` copies of `Q`, latest step leftmost, so that
//! `Ψ_n(m − l) = Ξ_n(l, m) Ψ_0(0)`.

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::coin::{split_pq, Coin, CoinClass, MoveOperators};
use crate::error::{QqwError, Result};
use crate::quaternion::{QMat2, Quaternion};
use crate::walk::{Distribution, InitialState};
use crate::ComplexMatrix;

/// Largest `l + m` accepted by [`xi_bruteforce`]; `C(14, 7) = 3432` products.
pub const BRUTE_FORCE_LIMIT: usize = 14;

/// `Ξ_n(l, m)` together with the number of path products it summarizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSum {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub matrix: QMat2,
    /// Number of products summed by the enumeration, `None` for closed forms.
    pub terms: Option<u64>,
}

impl PathSum {
    /// Walker position `x = m − l`.
    pub fn position(&self) -> i64 {
        self.m as i64 - self.l as i64
    }

    pub fn apply(&self, init: &InitialState) -> [Quaternion; 2] {
        self.matrix.apply([init.alpha(), init.beta()])
    }
}

/// `P(X_n = x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactProb {
    pub n: usize,
    pub x: i64,
    pub value: f64,
}

/// Sums every interleaving of `l` factors `P` and `m` factors `Q`.
pub fn xi_bruteforce(ops: &MoveOperators, l: usize, m: usize) -> Result<PathSum> {
    let n = l + m;
    if n > BRUTE_FORCE_LIMIT {
        return Err(QqwError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut total = QMat2::ZERO;
    let mut terms = 0u64;
    // bit k of `mask` set means step k applies P
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != l {
            continue;
        }
        let mut prod = QMat2::IDENTITY;
        for k in 0..n {
            let f = if mask >> k & 1 == 1 { ops.p } else { ops.q };
            prod = f * prod;
        }
        total = total + prod;
        terms += 1;
    }
    Ok(PathSum {
        n,
        l,
        m,
        matrix: total,
        terms: Some(terms),
    })
}

fn closed_form_domain(coin: &Coin, l: usize, m: usize) -> Result<()> {
    if !coin.all_nonzero() {
        return Err(QqwError::Domain("closed form requires abcd != 0".into()));
    }
    if l.min(m) == 0 {
        return Err(QqwError::Domain(
            "closed form requires min(l, m) >= 1; use the boundary formulas".into(),
        ));
    }
    Ok(())
}

/// `(−|b|²/|a|²)^γ C(l−1, γ−1) C(m−1, γ−1) / γ` for `γ = 1..=min(l, m)`.
fn gamma_weights(ratio: f64, l: usize, m: usize) -> impl Iterator<Item = (f64, f64)> {
    (1..=l.min(m)).map(move |g| {
        let w =
            (-ratio).powi(g as i32) * binomial(l - 1, g - 1) * binomial(m - 1, g - 1) / g as f64;
        (g as f64, w)
    })
}

/// Closed form of `Ξ_n(l, m)` for a coin in `U(2, ℂ)`.
pub fn xi_closed_complex(coin: &Coin, l: usize, m: usize) -> Result<PathSum> {
    if !coin.is_complex() {
        return Err(QqwError::Domain("coin entries are not complex".into()));
    }
    closed_form_domain(coin, l, m)?;
    let [a, b, c, d] = coin.entries().map(Quaternion::simplex);
    let ratio = b.norm_sqr() / a.norm_sqr();
    let det = a * d - b * c;
    let (lf, mf) = (l as f64, m as f64);
    let mut s = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (g, w) in gamma_weights(ratio, l, m) {
        s[0][0] += w * lf;
        s[0][1] += w * (b * c * lf + det * g) / (a * c);
        s[1][0] += w * (b * c * mf + det * g) / (b * d);
        s[1][1] += w * mf;
    }
    let pre = a.powu(l as u32) * d.powu(m as u32);
    let q = |z: Complex64| Quaternion::from(pre * z);
    Ok(PathSum {
        n: l + m,
        l,
        m,
        matrix: QMat2::new(q(s[0][0]), q(s[0][1]), q(s[1][0]), q(s[1][1])),
        terms: None,
    })
}

/// Closed form of `Ξ_n(l, m)` for real `a` and `d = ±a`, `c = ∓conj(b)`.
pub fn xi_closed_case3(coin: &Coin, l: usize, m: usize) -> Result<PathSum> {
    if !coin.is_case3() {
        return Err(QqwError::Domain("coin does not have real a and d".into()));
    }
    closed_form_domain(coin, l, m)?;
    let a = coin.a().re();
    let b = coin.b();
    let sign = (coin.d().re() / a).signum();
    let bb = b.norm_sqr();
    let (lf, mf) = (l as f64, m as f64);
    let (mut s00, mut s01, mut s10, mut s11) = (0.0, 0.0, 0.0, 0.0);
    for (g, w) in gamma_weights(bb / (a * a), l, m) {
        s00 += w * lf;
        s01 += w * (bb * lf - g) / (a * bb);
        s10 += w * (g - bb * mf) / (a * bb);
        s11 += w * mf;
    }
    let pre = sign.powi(m as i32) * a.powi((l + m) as i32);
    Ok(PathSum {
        n: l + m,
        l,
        m,
        matrix: QMat2::new(
            Quaternion::real(pre * s00),
            b * (pre * s01),
            b.conj() * (pre * s10),
            Quaternion::real(pre * s11),
        ),
        terms: None,
    })
}

/// `χ(Ξ_n(l, m))` for a coin with simplex `a, d` and perplex `b, c`.
///
/// In this case `χ(P)` and `χ(Q)` split into two blocks acting on the
/// coordinate pairs `(1, 4)` and `(2, 3)`, each of which is a complex walk.
pub fn xi_case4_chi(coin: &Coin, l: usize, m: usize) -> Result<ComplexMatrix> {
    if !coin.is_case4() {
        return Err(QqwError::Domain(
            "coin is not of the simplex-diagonal / perplex-off-diagonal form".into(),
        ));
    }
    closed_form_domain(coin, l, m)?;
    let ap = coin.a().simplex();
    let dp = coin.d().simplex();
    let bpp = coin.b().perplex();
    let aa = coin.a().norm_sqr();
    let bb = coin.b().norm_sqr();
    let d1 = ap.powu(l as u32) * dp.conj().powu(m as u32);
    let d2 = d1.conj();
    let diag = [d1, d2, d2, d1];
    let (lf, mf) = (l as f64, m as f64);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = ComplexMatrix::zeros(4, 4);
    for (g, w) in gamma_weights(bb / aa, l, m) {
        let w = w / (aa * bb);
        let ul = (bb * lf - g) * ap.conj() * bpp;
        let ur = (bb * lf - g) * ap * bpp.conj();
        let ll = (bb * mf - g) * ap.conj() * bpp;
        let lr = (bb * mf - g) * ap * bpp.conj();
        let dl = Complex64::from(aa * bb * lf);
        let dm = Complex64::from(aa * bb * mf);
        let k = [
            [dl, zero, zero, -ul],
            [zero, dl, ur, zero],
            [zero, -ll, dm, zero],
            [lr, zero, zero, dm],
        ];
        for (r, row) in k.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out[(r, c)] += w * diag[r] * v;
            }
        }
    }
    Ok(out)
}

/// Quaternion form of [`xi_case4_chi`].
pub fn xi_closed_case4(coin: &Coin, l: usize, m: usize) -> Result<PathSum> {
    let chi = xi_case4_chi(coin, l, m)?;
    Ok(PathSum {
        n: l + m,
        l,
        m,
        matrix: QMat2::from_chi(&chi),
        terms: None,
    })
}

/// The two complex sub-coins of a Case-4 coin, acting on the `χ`
/// coordinates `(1, 4)` and `(2, 3)` respectively.
pub fn case4_subcoins(coin: &Coin) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !coin.is_case4() {
        return Err(QqwError::Domain("coin is not Case 4".into()));
    }
    let chi = coin.matrix().chi();
    let pick = |i: usize, j: usize| {
        ComplexMatrix::from_rows(&[&[chi[(i, i)], chi[(i, j)]], &[chi[(j, i)], chi[(j, j)]]])
    };
    Ok((pick(0, 3), pick(1, 2)))
}

/// The single-path sums `P^l = a^{l−1} P` and `Q^m = d^{m−1} Q`, valid for
/// every coin; `Ξ_0(0, 0)` is the identity.
pub fn xi_pure(coin: &Coin, l: usize, m: usize) -> Result<PathSum> {
    let pow = |q: Quaternion, k: usize| (0..k).fold(Quaternion::ONE, |acc, _| q * acc);
    let z = Quaternion::ZERO;
    let matrix = match (l, m) {
        (0, 0) => QMat2::IDENTITY,
        (l, 0) => {
            let lead = pow(coin.a(), l - 1);
            QMat2::new(lead * coin.a(), lead * coin.b(), z, z)
        }
        (0, m) => {
            let lead = pow(coin.d(), m - 1);
            QMat2::new(z, z, lead * coin.c(), lead * coin.d())
        }
        _ => return Err(QqwError::Domain("both l and m are positive".into())),
    };
    Ok(PathSum {
        n: l + m,
        l,
        m,
        matrix,
        terms: None,
    })
}

/// Dispatches to the closed form matching the coin's shape; single-path
/// sums go to [`xi_pure`].
pub fn xi_closed(coin: &Coin, l: usize, m: usize) -> Result<PathSum> {
    if l.min(m) == 0 {
        xi_pure(coin, l, m)
    } else if coin.is_case4() {
        xi_closed_case4(coin, l, m)
    } else if coin.is_case3() {
        xi_closed_case3(coin, l, m)
    } else if coin.is_complex() {
        xi_closed_complex(coin, l, m)
    } else {
        Err(QqwError::Domain(format!(
            "no closed form for a {} coin",
            coin.class()
        )))
    }
}

/// `C(n, k)` as an exact integer, `None` on overflow.
pub fn binomial_exact(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n − i) is divisible by (i + 1)
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c)
}

/// `C(n, k)` in floating point: exact integer arithmetic while it fits, the
/// log-gamma route beyond.
pub fn binomial(n: usize, k: usize) -> f64 {
    match binomial_exact(n, k) {
        Some(c) => c as f64,
        None => statrs::function::factorial::binomial(n as u64, k as u64),
    }
}

fn binomial_dd(n: usize, k: usize) -> TwoFloat {
    match binomial_exact(n, k) {
        Some(c) => {
            let hi = c as f64;
            let lo = (c as i128 - hi as i128) as f64;
            TwoFloat::new_add(hi, lo)
        }
        None => TwoFloat::from(statrs::function::factorial::binomial(n as u64, k as u64)),
    }
}

/// `Re(conj(aα) b β)`, the interference term of the distribution.
pub fn interference(coin: &Coin, init: &InitialState) -> f64 {
    ((coin.a() * init.alpha()).conj() * coin.b() * init.beta()).re()
}

/// `P(X_n = x)` from the closed forms.
///
/// Case-1 and Case-2 coins use their two-point and localized laws. Otherwise
/// the coin must be complex, have real diagonal (`d = ±a`), or be of the
/// simplex-diagonal / perplex-off-diagonal form. Interior sites evaluate the
/// double `(γ, δ)` sum in double-double arithmetic: its terms alternate in sign
/// and cancel by many orders of magnitude already at `n = 50`.
pub fn prob_closed_form(coin: &Coin, init: &InitialState, n: usize, x: i64) -> Result<ExactProb> {
    let value = prob_value(coin, init, n, x)?;
    Ok(ExactProb { n, x, value })
}

fn prob_value(coin: &Coin, init: &InitialState, n: usize, x: i64) -> Result<f64> {
    let ni = n as i64;
    if x.abs() > ni || (x + ni) % 2 != 0 {
        return Ok(0.0);
    }
    let al2 = init.alpha().norm_sqr();
    let be2 = init.beta().norm_sqr();
    if n == 0 {
        return Ok(al2 + be2);
    }
    match coin.class() {
        CoinClass::Case1 => {
            return Ok(if x == -ni {
                al2
            } else if x == ni {
                be2
            } else {
                0.0
            })
        }
        CoinClass::Case2 => {
            return Ok(match (n % 2, x) {
                (0, 0) => 1.0,
                (1, 1) => al2,
                (1, -1) => be2,
                _ => 0.0,
            })
        }
        _ => {}
    }
    if !(coin.is_complex() || coin.is_case3() || coin.is_case4()) {
        return Err(QqwError::Domain(format!(
            "no closed-form distribution for a {} coin",
            coin.class()
        )));
    }
    let aa = coin.a().norm_sqr();
    let bb = coin.b().norm_sqr();
    let re = interference(coin, init);
    let pre = aa.powi(n as i32 - 1);
    if x == -ni {
        return Ok(pre * (aa * al2 + bb * be2 + 2.0 * re));
    }
    if x == ni {
        return Ok(pre * (bb * al2 + aa * be2 - 2.0 * re));
    }

    let t = (n - x.unsigned_abs() as usize) / 2;
    let sg = x.signum() as f64;
    let nf = n as f64;
    let tf = t as f64;
    let wf = (n - 2 * t) as f64;
    let ratio = -(TwoFloat::from(bb) / aa);
    let aa_bb = TwoFloat::new_sub(aa, bb);
    let be_al = TwoFloat::new_sub(be2, al2);
    let b_t: Vec<TwoFloat> = (0..t).map(|k| binomial_dd(t - 1, k)).collect();
    let b_nt: Vec<TwoFloat> = (0..t).map(|k| binomial_dd(n - t - 1, k)).collect();
    let pows: Vec<TwoFloat> = (0..=2 * t).map(|k| ratio.powi(k as i32)).collect();
    let mut sum = TwoFloat::from(0.0);
    for g in 1..=t {
        for d in 1..=t {
            let gd = (g + d) as f64;
            let gdp = (g * d) as f64;
            // integer-valued, exact in f64
            let base = (nf * nf - (gd + 2.0 * tf) * nf + 2.0 * tf * tf) / 2.0;
            let bracket = TwoFloat::from(base)
                + TwoFloat::from(gdp) / bb
                + (aa_bb * nf + gd) * be_al * (sg * wf / 2.0)
                + (TwoFloat::from(gd) - TwoFloat::new_mul(2.0 * nf, bb)) * re * (sg * wf) / bb;
            let coeff = pows[g + d] * b_t[g - 1] * b_t[d - 1] * b_nt[g - 1] * b_nt[d - 1] / gdp;
            sum += coeff * bracket;
        }
    }
    Ok(pre * f64::from(sum))
}

/// Full distribution at time `n` from [`prob_closed_form`].
pub fn exact_distribution(coin: &Coin, init: &InitialState, n: usize) -> Result<Distribution> {
    let probs = (0..=n)
        .map(|k| prob_value(coin, init, n, 2 * k as i64 - n as i64))
        .collect::<Result<Vec<_>>>()?;
    Distribution::from_sites(n, probs)
}

/// Brute-force `Ξ_n(l, m)` for the coin.
pub fn xi_bruteforce_coin(coin: &Coin, l: usize, m: usize) -> Result<PathSum> {
    xi_bruteforce(&split_pq(coin), l, m)
}
