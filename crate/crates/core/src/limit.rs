//! Weak-limit densities of `X_n / n` and comparison with finite-time data.
//!
//! Both densities have inverse-square-root edges at `±r`. Every integral is
//! taken after the substitution `y = r sin φ`, which turns `f(y) dy` into
//! `h(r sin φ) dφ` with the bounded regular part `h(y) = f(y) √(r² − y²)`.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::coin::Coin;
use crate::error::{QqwError, Result};
use crate::quadrature::integrate;
use crate::walk::{distribution, evolve, Distribution, InitialState};

/// Absolute tolerance of each quadrature.
pub const QUAD_TOL: f64 = 1e-12;

/// `f_K(y; r) = √(1 − r²) / (π (1 − y²) √(r² − y²))` on `(−r, r)`.
///
/// Returns `+∞` at `|y| = r` and `0` outside.
pub fn density_complex_walk(y: f64, r: f64) -> f64 {
    let ay = y.abs();
    if ay > r {
        0.0
    } else if ay == r {
        f64::INFINITY
    } else {
        complex_walk_regular(y, r) / (r * r - y * y).sqrt()
    }
}

fn complex_walk_regular(y: f64, r: f64) -> f64 {
    (1.0 - r * r).sqrt() / (PI * (1.0 - y * y))
}

/// Constants of the Case-5 density: `G = 1 + |a|⁴ − Re(bc)²`,
/// `S = √(G² − 4|a|⁴)` and the support radius `r = √((G − S)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Case5Constants {
    pub a_sq: f64,
    pub rebc: f64,
    pub g: f64,
    pub s: f64,
    pub r: f64,
}

impl Case5Constants {
    pub fn new(a_sq: f64, rebc: f64) -> Result<Self> {
        let g = 1.0 + a_sq * a_sq - rebc * rebc;
        let disc = g * g - 4.0 * a_sq * a_sq;
        if !(a_sq > 0.0 && a_sq < 1.0) || disc < -1e-12 {
            return Err(QqwError::Domain(format!(
                "no Case-5 density for |a|^2 = {a_sq}, Re(bc) = {rebc}"
            )));
        }
        let s = disc.max(0.0).sqrt();
        Ok(Case5Constants {
            a_sq,
            rebc,
            g,
            s,
            r: ((g - s) / 2.0).sqrt(),
        })
    }

    pub fn from_coin(coin: &Coin) -> Result<Self> {
        if !coin.is_case5() || !coin.all_nonzero() {
            return Err(QqwError::Domain(
                "the Case-5 density requires a0 = d0 = 0 and abcd != 0".into(),
            ));
        }
        Case5Constants::new(coin.a().norm_sqr(), coin.re_bc())
    }

    /// The alternative expression
    /// `r = (√((1 + |a|²)² − Re(bc)²) − √((1 − |a|²)² − Re(bc)²)) / 2`.
    pub fn r_alternative(&self) -> f64 {
        let r2 = self.rebc * self.rebc;
        let p = ((1.0 + self.a_sq).powi(2) - r2).max(0.0).sqrt();
        let m = ((1.0 - self.a_sq).powi(2) - r2).max(0.0).sqrt();
        (p - m) / 2.0
    }

    /// `f_QQW(y) √(r² − y²)`.
    fn regular(&self, y: f64) -> f64 {
        let y2 = y * y;
        let num = (self.g - 2.0) * y2 + self.g - 2.0 * self.a_sq * self.a_sq + (1.0 - y2) * self.s;
        let den = (self.g + self.s) / 2.0 - y2;
        if num <= 0.0 || den <= 0.0 {
            return 0.0;
        }
        SQRT_2 / (2.0 * PI * (1.0 - y2)) * (num / den).sqrt()
    }

    /// `f_QQW(y; r)`, zero for `|y| ≥ r`.
    pub fn density(&self, y: f64) -> f64 {
        if y.abs() >= self.r {
            return 0.0;
        }
        self.regular(y) / (self.r * self.r - y * y).sqrt()
    }
}

/// `f_QQW(y; r)` for a coin with `a0 = d0 = 0`, `abcd ≠ 0`.
pub fn density_qqw_case5(coin: &Coin, y: f64) -> Result<f64> {
    Ok(Case5Constants::from_coin(coin)?.density(y))
}

/// `C(a, b; α, β) = |α|² − |β|² − 2 Re(aα conj(bβ)) / |a|²`.
pub fn weight_constant(coin: &Coin, init: &InitialState) -> Result<f64> {
    let aa = coin.a().norm_sqr();
    if aa <= crate::coin::ZERO_TOL {
        return Err(QqwError::Domain("weight constant requires a != 0".into()));
    }
    let (al, be) = (init.alpha(), init.beta());
    let cross = ((coin.a() * al) * (coin.b() * be).conj()).re();
    Ok(al.norm_sqr() - be.norm_sqr() - 2.0 * cross / aa)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DensityKind {
    ComplexWalk,
    QqwCase5,
}

/// The limit law `(1 − C y) f(y) dy` of `X_n / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitDensity {
    pub r: f64,
    pub g: f64,
    pub a_sq: f64,
    pub rebc: f64,
    pub weight: f64,
    pub kind: DensityKind,
    s: f64,
}

impl LimitDensity {
    /// Case-5 law of a quaternionic coin.
    pub fn qqw_case5(coin: &Coin, init: &InitialState) -> Result<Self> {
        let k = Case5Constants::from_coin(coin)?;
        Ok(LimitDensity {
            r: k.r,
            g: k.g,
            a_sq: k.a_sq,
            rebc: k.rebc,
            weight: weight_constant(coin, init)?,
            kind: DensityKind::QqwCase5,
            s: k.s,
        })
    }

    /// The complex-walk law with support `|a|`, for coins whose distribution coincides
    /// with a complex walk (complex entries, real diagonal, or the
    /// simplex-diagonal / perplex-off-diagonal form) and `abcd ≠ 0`.
    pub fn complex_walk(coin: &Coin, init: &InitialState) -> Result<Self> {
        if !coin.all_nonzero() || !(coin.is_complex() || coin.is_case3() || coin.is_case4()) {
            return Err(QqwError::Domain(format!(
                "the complex-walk limit law does not apply to a {} coin",
                coin.class()
            )));
        }
        let a_sq = coin.a().norm_sqr();
        let rebc = coin.re_bc();
        Ok(LimitDensity {
            r: a_sq.sqrt(),
            g: 1.0 + a_sq * a_sq - rebc * rebc,
            a_sq,
            rebc,
            weight: weight_constant(coin, init)?,
            kind: DensityKind::ComplexWalk,
            s: 0.0,
        })
    }

    fn constants(&self) -> Case5Constants {
        Case5Constants {
            a_sq: self.a_sq,
            rebc: self.rebc,
            g: self.g,
            s: self.s,
            r: self.r,
        }
    }

    fn regular(&self, y: f64) -> f64 {
        match self.kind {
            DensityKind::ComplexWalk => complex_walk_regular(y, self.r),
            DensityKind::QqwCase5 => self.constants().regular(y),
        }
    }

    /// `f(y)` without the weight factor.
    pub fn density(&self, y: f64) -> f64 {
        match self.kind {
            DensityKind::ComplexWalk => density_complex_walk(y, self.r),
            DensityKind::QqwCase5 => self.constants().density(y),
        }
    }

    /// `(1 − C y) f(y)`.
    pub fn weighted(&self, y: f64) -> f64 {
        (1.0 - self.weight * y) * self.density(y)
    }

    fn angle(&self, y: f64) -> f64 {
        (y / self.r).clamp(-1.0, 1.0).asin()
    }

    /// `∫ g(y) f(y) dy` over `y = r sin φ`, `φ ∈ [φ0, φ1]`.
    fn integrate_angle<G: Fn(f64) -> f64>(&self, g: G, phi0: f64, phi1: f64) -> Result<f64> {
        let r = self.r;
        integrate(
            |phi: f64| {
                let y = r * phi.sin();
                g(y) * self.regular(y)
            },
            phi0,
            phi1,
            QUAD_TOL,
        )
    }

    /// `∫ f`.
    pub fn mass(&self) -> Result<f64> {
        self.integrate_angle(|_| 1.0, -FRAC_PI_2, FRAC_PI_2)
    }

    /// `∫ (1 − C y) f`.
    pub fn weighted_mass(&self) -> Result<f64> {
        let c = self.weight;
        self.integrate_angle(|y| 1.0 - c * y, -FRAC_PI_2, FRAC_PI_2)
    }

    /// `∫ y^k (1 − C y) f(y) dy`.
    pub fn moment(&self, k: i32) -> Result<f64> {
        let c = self.weight;
        self.integrate_angle(|y| y.powi(k) * (1.0 - c * y), -FRAC_PI_2, FRAC_PI_2)
    }

    /// `F(y) = ∫_{−r}^{y} (1 − C t) f(t) dt`.
    pub fn cdf(&self, y: f64) -> Result<f64> {
        let c = self.weight;
        self.integrate_angle(|t| 1.0 - c * t, -FRAC_PI_2, self.angle(y))
    }

    /// `F` at ascending points, integrating only between neighbours.
    pub fn cdf_sorted(&self, ys: &[f64]) -> Result<Vec<f64>> {
        let c = self.weight;
        let mut out = Vec::with_capacity(ys.len());
        let mut acc = 0.0;
        let mut phi = -FRAC_PI_2;
        for &y in ys {
            let next = self.angle(y);
            if next < phi {
                return Err(QqwError::Domain("cdf_sorted needs ascending points".into()));
            }
            acc += self.integrate_angle(|t| 1.0 - c * t, phi, next)?;
            phi = next;
            out.push(acc);
        }
        Ok(out)
    }
}

/// `sup_y |F_n(y) − F(y)|` between the distribution of `X_n / n` and the
/// limit law, checked on both sides of every jump of `F_n`.
pub fn kolmogorov_distance(dist: &Distribution, law: &LimitDensity) -> Result<f64> {
    let n = dist.time() as f64;
    let (ys, ps): (Vec<f64>, Vec<f64>) = dist.iter().map(|(x, p)| (x as f64 / n, p)).unzip();
    let f = law.cdf_sorted(&ys)?;
    let mut emp = 0.0;
    let mut d: f64 = 0.0;
    for (p, fy) in ps.iter().zip(&f) {
        d = d.max((emp - fy).abs());
        emp += p;
        d = d.max((emp - fy).abs());
    }
    Ok(d)
}

/// Result of [`limit_compare`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub kolmogorov: f64,
    pub r: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "weightC")]
    pub weight_c: f64,
}

/// Kolmogorov distance between the exact distribution of `X_n / n` and the
/// Case-5 limit law.
pub fn limit_compare(coin: &Coin, init: &InitialState, n: usize) -> Result<Comparison> {
    if n < 100 || !n.is_multiple_of(2) {
        return Err(QqwError::Domain(format!("need an even n >= 100, got {n}")));
    }
    let law = LimitDensity::qqw_case5(coin, init)?;
    let dist = distribution(&evolve(coin, init, n));
    Ok(Comparison {
        kolmogorov: kolmogorov_distance(&dist, &law)?,
        r: law.r,
        g: law.g,
        weight_c: law.weight,
    })
}
