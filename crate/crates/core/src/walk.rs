//! Time evolution of a walker started at the origin, in both the quaternion
//! representation and the equivalent four-component complex representation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::ComplexMatrix;
use crate::coin::{split_pq, Coin, MoveOperators};
use crate::error::{QqwError, Result};
use crate::quaternion::Quaternion;

/// Tolerance on `|α|² + |β|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Chirality pair `(Ψ^L, Ψ^R)` at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    alpha: Quaternion,
    beta: Quaternion,
}

impl InitialState {
    pub fn new(alpha: Quaternion, beta: Quaternion) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if norm_sqr.is_nan() || (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(QqwError::NotNormalized {
                what: "initial state".into(),
                norm_sqr,
            });
        }
        Ok(InitialState { alpha, beta })
    }

    pub fn alpha(&self) -> Quaternion {
        self.alpha
    }

    pub fn beta(&self) -> Quaternion {
        self.beta
    }

    /// Pure left chirality `(1, 0)`.
    pub fn left() -> Self {
        InitialState {
            alpha: Quaternion::ONE,
            beta: Quaternion::ZERO,
        }
    }

    /// Pure right chirality `(0, 1)`.
    pub fn right() -> Self {
        InitialState {
            alpha: Quaternion::ZERO,
            beta: Quaternion::ONE,
        }
    }
}

/// Amplitudes `Ψ_n(x)` on the sites `x = −n, −n+2, …, n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    n: usize,
    amps: Vec<[Quaternion; 2]>,
}

/// Index of site `x` in the parity-compressed layout at time `n`.
fn site_index(n: usize, x: i64) -> Option<usize> {
    let n = n as i64;
    if x < -n || x > n || (x + n) % 2 != 0 {
        return None;
    }
    Some(((x + n) / 2) as usize)
}

fn site_position(n: usize, k: usize) -> i64 {
    2 * k as i64 - n as i64
}

pub fn init_state(alpha: Quaternion, beta: Quaternion) -> Result<WalkState> {
    let init = InitialState::new(alpha, beta)?;
    Ok(WalkState::from_initial(&init))
}

impl WalkState {
    pub fn from_initial(init: &InitialState) -> Self {
        WalkState {
            n: 0,
            amps: vec![[init.alpha, init.beta]],
        }
    }

    pub fn time(&self) -> usize {
        self.n
    }

    /// `Ψ_n(x)`; zero off the support.
    pub fn amplitude(&self, x: i64) -> [Quaternion; 2] {
        site_index(self.n, x)
            .map(|k| self.amps[k])
            .unwrap_or([Quaternion::ZERO; 2])
    }

    /// Sites `x` with the parity of `n` together with their amplitudes.
    pub fn sites(&self) -> impl Iterator<Item = (i64, [Quaternion; 2])> + '_ {
        let n = self.n;
        self.amps
            .iter()
            .enumerate()
            .map(move |(k, a)| (site_position(n, k), *a))
    }

    pub fn total_probability(&self) -> f64 {
        self.amps
            .iter()
            .map(|[l, r]| l.norm_sqr() + r.norm_sqr())
            .sum()
    }
}

/// One step `Ψ_{n+1}(x) = P Ψ_n(x+1) + Q Ψ_n(x−1)`. Coin entries multiply the
/// amplitudes from the left.
pub fn step(state: &WalkState, ops: &MoveOperators) -> WalkState {
    let (a, b) = (ops.p.get(0, 0), ops.p.get(0, 1));
    let (c, d) = (ops.q.get(1, 0), ops.q.get(1, 1));
    let n = state.n;
    let old = &state.amps;
    let amps = (0..=n + 1)
        .map(|k| {
            // site x = 2k − (n+1): x+1 is old index k, x−1 is old index k−1
            let left = match old.get(k) {
                Some([l, r]) => a * *l + b * *r,
                None => Quaternion::ZERO,
            };
            let right = match k.checked_sub(1).and_then(|j| old.get(j)) {
                Some([l, r]) => c * *l + d * *r,
                None => Quaternion::ZERO,
            };
            [left, right]
        })
        .collect();
    WalkState { n: n + 1, amps }
}

pub fn evolve(coin: &Coin, init: &InitialState, steps: usize) -> WalkState {
    let ops = split_pq(coin);
    let mut state = WalkState::from_initial(init);
    for _ in 0..steps {
        state = step(&state, &ops);
    }
    state
}

/// `P(X_n = x)` on the parity sites of time `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    n: usize,
    probs: Vec<f64>,
}

impl Distribution {
    /// Builds from per-site probabilities on `x = −n, −n+2, …, n`. Round-off
    /// negatives down to `−1e−14` are clamped to zero.
    pub fn from_sites(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n + 1 {
            return Err(QqwError::Numeric(format!(
                "expected {} sites at time {n}, got {}",
                n + 1,
                probs.len()
            )));
        }
        let mut out = Vec::with_capacity(probs.len());
        for p in probs {
            if p.is_nan() || p < -1e-14 {
                return Err(QqwError::Numeric(format!("invalid probability {p}")));
            }
            out.push(p.max(0.0));
        }
        Ok(Distribution { n, probs: out })
    }

    pub fn time(&self) -> usize {
        self.n
    }

    pub fn prob(&self, x: i64) -> f64 {
        site_index(self.n, x).map(|k| self.probs[k]).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n;
        self.probs
            .iter()
            .enumerate()
            .map(move |(k, p)| (site_position(n, k), *p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Largest pointwise difference to `other` over the union of supports.
    pub fn max_diff(&self, other: &Distribution) -> f64 {
        let m = self.n.max(other.n) as i64;
        (-m..=m)
            .map(|x| (self.prob(x) - other.prob(x)).abs())
            .fold(0.0, f64::max)
    }
}

pub fn distribution(state: &WalkState) -> Distribution {
    Distribution {
        n: state.n,
        probs: state
            .amps
            .iter()
            .map(|[l, r]| l.norm_sqr() + r.norm_sqr())
            .collect(),
    }
}

/// `Σ_x x^r P(X_n = x)`.
pub fn moment(dist: &Distribution, r: u32) -> f64 {
    dist.iter()
        .map(|(x, p)| (x as f64).powi(r as i32) * p)
        .sum()
}

/// `Φ_n(x) = χ(Ψ_n(x)) [1, 0]ᵀ` on the parity sites.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierState {
    n: usize,
    comps: Vec<[Complex64; 4]>,
}

fn phi_of(pair: [Quaternion; 2]) -> [Complex64; 4] {
    let [l0, l1] = pair[0].chi_column();
    let [r0, r1] = pair[1].chi_column();
    [l0, l1, r0, r1]
}

pub fn to_fourier_rep(state: &WalkState) -> FourierState {
    FourierState {
        n: state.n,
        comps: state.amps.iter().map(|p| phi_of(*p)).collect(),
    }
}

impl FourierState {
    pub fn from_initial(init: &InitialState) -> Self {
        FourierState {
            n: 0,
            comps: vec![phi_of([init.alpha, init.beta])],
        }
    }

    pub fn time(&self) -> usize {
        self.n
    }

    pub fn component(&self, x: i64) -> [Complex64; 4] {
        site_index(self.n, x)
            .map(|k| self.comps[k])
            .unwrap_or([Complex64::new(0.0, 0.0); 4])
    }

    /// Reads the quaternion amplitudes back.
    pub fn to_walk_state(&self) -> WalkState {
        WalkState {
            n: self.n,
            amps: self
                .comps
                .iter()
                .map(|v| {
                    [
                        Quaternion::from_chi_column([v[0], v[1]]),
                        Quaternion::from_chi_column([v[2], v[3]]),
                    ]
                })
                .collect(),
        }
    }

    pub fn distribution(&self) -> Distribution {
        Distribution {
            n: self.n,
            probs: self
                .comps
                .iter()
                .map(|v| v.iter().map(|z| z.norm_sqr()).sum())
                .collect(),
        }
    }
}

/// `χ(P)` and `χ(Q)` for the complex four-state evolution.
#[derive(Clone, Debug)]
pub struct ComplexMoveOperators {
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
}

impl From<&MoveOperators> for ComplexMoveOperators {
    fn from(ops: &MoveOperators) -> Self {
        ComplexMoveOperators {
            p: ops.p.chi(),
            q: ops.q.chi(),
        }
    }
}

/// `Φ_{n+1}(x) = χ(P) Φ_n(x+1) + χ(Q) Φ_n(x−1)`.
pub fn step_fourier(state: &FourierState, ops: &ComplexMoveOperators) -> FourierState {
    let n = state.n;
    let old = &state.comps;
    let zero = [Complex64::new(0.0, 0.0); 4];
    let comps = (0..=n + 1)
        .map(|k| {
            let from_right = old.get(k).map(|v| ops.p.mul_vec(v));
            let from_left = k
                .checked_sub(1)
                .and_then(|j| old.get(j))
                .map(|v| ops.q.mul_vec(v));
            let mut out = zero;
            for part in [from_right, from_left].into_iter().flatten() {
                for (o, z) in out.iter_mut().zip(part) {
                    *o += z;
                }
            }
            out
        })
        .collect();
    FourierState { n: n + 1, comps }
}

pub fn evolve_fourier(coin: &Coin, init: &InitialState, steps: usize) -> FourierState {
    let ops = ComplexMoveOperators::from(&split_pq(coin));
    let mut state = FourierState::from_initial(init);
    for _ in 0..steps {
        state = step_fourier(&state, &ops);
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::validate_coin;
    use std::f64::consts::FRAC_1_SQRT_2 as S;
    use Quaternion as Q;

    fn hadamard() -> Coin {
        validate_coin(Q::real(S), Q::real(S), Q::real(S), Q::real(-S)).unwrap()
    }

    fn close(a: Quaternion, b: Quaternion) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn init_examples() {
        let s = init_state(Q::ONE, Q::ZERO).unwrap();
        assert_eq!(s.time(), 0);
        assert_eq!(s.amplitude(0), [Q::ONE, Q::ZERO]);
        let s = init_state(Q::real(S), Q::J * S).unwrap();
        assert!((s.total_probability() - 1.0).abs() < 1e-15);
        assert!(matches!(
            init_state(Q::ONE, Q::ONE),
            Err(QqwError::NotNormalized { .. })
        ));
    }

    #[test]
    fn hadamard_one_step() {
        let s = step(
            &init_state(Q::ONE, Q::ZERO).unwrap(),
            &split_pq(&hadamard()),
        );
        let [l, r] = s.amplitude(-1);
        assert!(close(l, Q::real(S)) && close(r, Q::ZERO));
        let [l, r] = s.amplitude(1);
        assert!(close(l, Q::ZERO) && close(r, Q::real(S)));
        assert_eq!(s.amplitude(0), [Q::ZERO; 2]);
        assert_eq!(s.amplitude(3), [Q::ZERO; 2]);
    }

    #[test]
    fn hadamard_two_steps() {
        let s = evolve(&hadamard(), &InitialState::left(), 2);
        let expect = [
            (-2, [Q::real(0.5), Q::ZERO]),
            (0, [Q::real(0.5), Q::real(0.5)]),
            (2, [Q::ZERO, Q::real(-0.5)]),
        ];
        for (x, [l, r]) in expect {
            let [gl, gr] = s.amplitude(x);
            assert!(close(gl, l) && close(gr, r), "x = {x}");
        }
        let d = distribution(&s);
        assert!((d.prob(-2) - 0.25).abs() < 1e-15);
        assert!((d.prob(0) - 0.5).abs() < 1e-15);
        assert!((d.prob(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_steps_is_initial_state() {
        let init = InitialState::new(Q::real(0.6), Q::K * 0.8).unwrap();
        let s = evolve(&hadamard(), &init, 0);
        assert_eq!(s, WalkState::from_initial(&init));
        let d = distribution(&s);
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(0, 1.0)]);
    }

    #[test]
    fn left_multiplication_order_is_observable() {
        // With a quaternionic coin and quaternionic amplitudes, a·Ψ and Ψ·a differ.
        let coin = validate_coin(Q::I * S, Q::J * S, Q::J * S, Q::I * S).unwrap();
        let init = InitialState::new(Q::K, Q::ZERO).unwrap();
        let s = evolve(&coin, &init, 1);
        let [l, _] = s.amplitude(-1);
        assert!(close(l, Q::I * S * Q::K));
        assert!(!close(l, Q::K * Q::I * S));
    }

    #[test]
    fn case1_closed_form_amplitudes() {
        let a = Q::new(0.0, 0.6, 0.0, 0.8);
        let d = Q::new(0.0, 0.0, 1.0, 0.0);
        let coin = validate_coin(a, Q::ZERO, Q::ZERO, d).unwrap();
        let alpha = Q::new(0.5, 0.5, 0.0, 0.0);
        let beta = Q::new(0.0, 0.0, 0.5, 0.5);
        let init = InitialState::new(alpha, beta).unwrap();
        let n = 7;
        let s = evolve(&coin, &init, n);
        let mut an = Q::ONE;
        let mut dn = Q::ONE;
        for _ in 0..n {
            an = an * a;
            dn = dn * d;
        }
        let [l, r] = s.amplitude(-(n as i64));
        assert!(close(l, an * alpha) && close(r, Q::ZERO));
        let [l, r] = s.amplitude(n as i64);
        assert!(close(l, Q::ZERO) && close(r, dn * beta));
        let dist = distribution(&s);
        assert!((dist.prob(-(n as i64)) - 0.5).abs() < 1e-14);
        assert!((dist.prob(n as i64) - 0.5).abs() < 1e-14);
        assert!((moment(&dist, 2) - (n * n) as f64).abs() < 1e-12);
    }

    #[test]
    fn case2_localizes_at_even_times() {
        let coin = validate_coin(Q::ZERO, Q::J, Q::K, Q::ZERO).unwrap();
        let init = InitialState::new(Q::real(0.6), Q::I * 0.8).unwrap();
        let d = distribution(&evolve(&coin, &init, 2));
        assert!((d.prob(0) - 1.0).abs() < 1e-15);
        let d = distribution(&evolve(&coin, &init, 3));
        assert!((d.prob(1) - 0.36).abs() < 1e-15);
        assert!((d.prob(-1) - 0.64).abs() < 1e-15);
    }

    #[test]
    fn symmetric_hadamard_has_zero_mean() {
        let init = InitialState::new(Q::real(S), Q::I * S).unwrap();
        for n in [1, 5, 20, 63] {
            let d = distribution(&evolve(&hadamard(), &init, n));
            assert!(moment(&d, 1).abs() < 1e-10);
            assert!((moment(&d, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_initial_vector() {
        let alpha = Q::new(0.1, 0.2, 0.3, 0.4);
        let beta = Q::new(0.5, -0.4, 0.3, -0.1);
        let nrm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        let init = InitialState::new(alpha / nrm, beta / nrm).unwrap();
        let phi = FourierState::from_initial(&init).component(0);
        let (a, b) = (init.alpha(), init.beta());
        assert_eq!(
            phi,
            [
                a.simplex(),
                a.perplex().conj(),
                b.simplex(),
                b.perplex().conj()
            ]
        );
    }

    #[test]
    fn fourier_matches_quaternion_evolution() {
        let coin = validate_coin(Q::J * S, Q::J * S, Q::K * S, Q::K * -S).unwrap();
        let init = InitialState::new(Q::new(0.5, 0.5, 0.5, 0.0), Q::K * 0.5).unwrap();
        let q = evolve(&coin, &init, 30);
        let f = evolve_fourier(&coin, &init, 30);
        let back = f.to_walk_state();
        for (x, [l, r]) in q.sites() {
            let [bl, br] = back.amplitude(x);
            assert!((l - bl).norm() < 1e-12 && (r - br).norm() < 1e-12);
        }
        assert!(distribution(&q).max_diff(&f.distribution()) < 1e-12);
        assert_eq!(to_fourier_rep(&q).time(), 30);
    }

    #[test]
    fn distribution_rejects_bad_input() {
        assert!(Distribution::from_sites(2, vec![0.5, 0.5]).is_err());
        assert!(Distribution::from_sites(1, vec![0.5, -0.1]).is_err());
        let d = Distribution::from_sites(1, vec![1.0, -1e-16]).unwrap();
        assert_eq!(d.prob(1), 0.0);
    }
}
