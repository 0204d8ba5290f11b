//! Regression and spread statistics over sweep results.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub n: usize,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares `y = a + b x`; `None` with fewer than 3 points or
/// no spread in `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = (rss / (nf - 2.0) / sxx).sqrt();
    Some(LinearFit {
        slope,
        intercept,
        slope_stderr,
        n,
    })
}

/// Fit `log10 y = a + b log10 x` over points with both coordinates positive.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.log10(), y.log10()))
        .unzip();
    linear_fit(&lx, &ly)
}

/// Points of one matched-infidelity bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl Bin {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `max / min`, infinite when the minimum is zero.
    pub fn spread(&self) -> f64 {
        let lo = self.min();
        if lo > 0.0 {
            self.max() / lo
        } else if self.max() > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }
}

/// Equal-width bins in `log10(x)` over `[lo, hi]` (positive `x` only).
pub fn log_bins(xs: &[f64], ys: &[f64], lo: f64, hi: f64, n_bins: usize) -> Vec<Bin> {
    let (a, b) = (lo.log10(), hi.log10());
    let width = (b - a) / n_bins as f64;
    let mut bins: Vec<Bin> = (0..n_bins)
        .map(|i| Bin {
            lo: 10f64.powf(a + i as f64 * width),
            hi: 10f64.powf(a + (i + 1) as f64 * width),
            values: Vec::new(),
        })
        .collect();
    for (&x, &y) in xs.iter().zip(ys) {
        if x <= 0.0 || x < lo || x > hi {
            continue;
        }
        let idx = if width > 0.0 {
            (((x.log10() - a) / width) as usize).min(n_bins - 1)
        } else {
            0
        };
        bins[idx].values.push(y);
    }
    bins
}

/// Bins over the positive range of `xs` that hold at least `min_points`.
pub fn matched_bins(xs: &[f64], ys: &[f64], n_bins: usize, min_points: usize) -> Vec<Bin> {
    let pos: Vec<f64> = xs.iter().copied().filter(|&x| x > 0.0).collect();
    if pos.is_empty() {
        return Vec::new();
    }
    let lo = pos.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = pos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    log_bins(xs, ys, lo, hi, n_bins)
        .into_iter()
        .filter(|b| b.values.len() >= min_points)
        .collect()
}

pub const SPREAD_BINS: usize = 20;
pub const SPREAD_MIN_POINTS: usize = 3;

/// Largest `max/min` ratio over matched-infidelity bins.
pub fn max_spread(xs: &[f64], ys: &[f64]) -> Option<f64> {
    matched_bins(xs, ys, SPREAD_BINS, SPREAD_MIN_POINTS)
        .iter()
        .map(Bin::spread)
        .fold(None, |acc, s| Some(acc.map_or(s, |a: f64| a.max(s))))
}

/// Compare two series on shared bins over their overlapping infidelity range.
/// Returns `(bins where a's mean exceeds b's mean, bins compared)`.
pub fn compare_matched(
    xa: &[f64],
    ya: &[f64],
    xb: &[f64],
    yb: &[f64],
    n_bins: usize,
) -> (usize, usize) {
    let range = |xs: &[f64]| {
        xs.iter().copied().filter(|&x| x > 0.0).fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), x| (lo.min(x), hi.max(x)),
        )
    };
    let (la, ha) = range(xa);
    let (lb, hb) = range(xb);
    let (lo, hi) = (la.max(lb), ha.min(hb));
    if !(lo < hi) {
        return (0, 0);
    }
    let ba = log_bins(xa, ya, lo, hi, n_bins);
    let bb = log_bins(xb, yb, lo, hi, n_bins);
    let mut wins = 0;
    let mut total = 0;
    for (a, b) in ba.iter().zip(&bb) {
        if a.values.is_empty() || b.values.is_empty() {
            continue;
        }
        total += 1;
        if a.mean() > b.mean() {
            wins += 1;
        }
    }
    (wins, total)
}
