//! Shape statistics of simulated distributions: binned densities of
//! `X_n / n`, interior peak counts, and a seeded search for general coins
//! whose profile looks like a superposition of several walks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coin::{random_coin, Coin, CoinClass, CoinFamily};
use crate::error::{QqwError, Result};
use crate::walk::{distribution, evolve, Distribution, InitialState};

/// Bins over `[−1, 1]` used for peak counting.
pub const DEFAULT_BINS: usize = 50;
/// A peak must exceed every bin within this many positions.
pub const DEFAULT_WINDOW: usize = 2;
/// Bins below this density are outside the numerical support.
pub const SUPPORT_FLOOR: f64 = 1e-6;
/// Minimum prominence of a peak as a fraction of the profile maximum.
pub const MIN_PROMINENCE: f64 = 0.05;

/// Histogram density of `X_n / n` on `bins` equal cells of `[−1, 1]`.
pub fn binned_density(dist: &Distribution, bins: usize) -> Vec<f64> {
    let n = dist.time().max(1) as f64;
    let width = 2.0 / bins as f64;
    let mut h = vec![0.0; bins];
    for (x, p) in dist.iter() {
        let k = (((x as f64 / n + 1.0) / width) as usize).min(bins - 1);
        h[k] += p;
    }
    h.iter_mut().for_each(|v| *v /= width);
    h
}

/// Height of `h[k]` above the higher of its two bases, each base being the
/// minimum between `k` and the nearest strictly higher bin on that side (or
/// the end of the profile).
pub fn prominence(h: &[f64], k: usize) -> f64 {
    let mut left = h[k];
    for j in (0..k).rev() {
        if h[j] > h[k] {
            break;
        }
        left = left.min(h[j]);
    }
    let mut right = h[k];
    for &v in &h[k + 1..] {
        if v > h[k] {
            break;
        }
        right = right.min(v);
    }
    h[k] - left.max(right)
}

/// Indices of bins strictly inside the support (first to last bin above
/// `floor`) that exceed every other bin within `window` positions and whose
/// [`prominence`] is at least [`MIN_PROMINENCE`] of the profile maximum.
pub fn interior_peaks(h: &[f64], window: usize, floor: f64) -> Vec<usize> {
    let top = h.iter().copied().fold(0.0, f64::max);
    let inside: Vec<usize> = (0..h.len()).filter(|&k| h[k] > floor).collect();
    let (Some(&lo), Some(&hi)) = (inside.first(), inside.last()) else {
        return Vec::new();
    };
    (lo + 1..hi)
        .filter(|&k| {
            let from = k.saturating_sub(window);
            let to = (k + window).min(h.len() - 1);
            (from..=to).all(|j| j == k || h[k] > h[j]) && prominence(h, k) >= MIN_PROMINENCE * top
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakReport {
    pub n: usize,
    pub bins: usize,
    pub window: usize,
    /// Bin centres of the interior peaks, in `y = x / n`.
    pub peaks: Vec<f64>,
}

impl PeakReport {
    pub fn count(&self) -> usize {
        self.peaks.len()
    }
}

/// Simulates `n` steps from `init` and reports the interior peaks.
pub fn peak_report(coin: &Coin, init: &InitialState, n: usize) -> PeakReport {
    let dist = distribution(&evolve(coin, init, n));
    let h = binned_density(&dist, DEFAULT_BINS);
    let width = 2.0 / DEFAULT_BINS as f64;
    PeakReport {
        n,
        bins: DEFAULT_BINS,
        window: DEFAULT_WINDOW,
        peaks: interior_peaks(&h, DEFAULT_WINDOW, SUPPORT_FLOOR)
            .into_iter()
            .map(|k| -1.0 + (k as f64 + 0.5) * width)
            .collect(),
    }
}

/// Outcome of [`superposition_search`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchHit {
    pub seed: u64,
    /// 1-based index of the accepted draw.
    pub draw: usize,
    pub coin: Coin,
    pub report: PeakReport,
}

/// Draws general coins from `ChaCha8Rng::seed_from_u64(seed)` until one
/// outside Cases 1–5 shows at least `min_peaks` interior peaks at time `n`
/// from the initial state `(1, 0)`.
pub fn superposition_search(
    seed: u64,
    n: usize,
    min_peaks: usize,
    max_draws: usize,
) -> Result<SearchHit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = InitialState::left();
    for draw in 1..=max_draws {
        let coin = random_coin(CoinFamily::General, &mut rng);
        if coin.class() != CoinClass::General {
            continue;
        }
        let report = peak_report(&coin, &init, n);
        if report.count() >= min_peaks {
            return Ok(SearchHit {
                seed,
                draw,
                coin,
                report,
            });
        }
    }
    Err(QqwError::Numeric(format!(
        "no coin with {min_peaks} interior peaks in {max_draws} draws"
    )))
}
