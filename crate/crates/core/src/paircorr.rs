//! Pair-correlation statistics of the zero ordinates: the close-pair count
//! behind the weak Montgomery bound, the pair-correlation histogram with
//! its conjectured density 1 - (sin pi u / pi u)^2, and equidistribution
//! probes for the shifted phases gamma_k log p / 2 pi.

use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quad;
use crate::stats;
use crate::zeros::ZeroTable;

#[derive(Debug, Clone, PartialEq)]
pub enum PaircorrError {
    /// Table does not cover [0, T].
    TableCoverage { t: f64, covered: f64 },
    InvalidRange(&'static str),
}

impl fmt::Display for PaircorrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaircorrError::TableCoverage { t, covered } => {
                write!(f, "zero table reaches {covered:.2}, below requested T = {t:.2}")
            }
            PaircorrError::InvalidRange(m) => write!(f, "invalid range: {m}"),
        }
    }
}

impl core::error::Error for PaircorrError {}

/// Count of ordered pairs with |gamma - gamma'| < c / log T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCountReport {
    pub t: f64,
    pub c: f64,
    /// Ordered pairs, diagonal included unless excluded by the flag.
    pub count: u64,
    /// count / (T log T).
    pub normalized: f64,
    pub includes_diagonal: bool,
    /// Number of zeros up to T.
    pub zeros_up_to_t: usize,
    pub window: f64,
}

/// The close-pair sum: ordered pairs (gamma, gamma') with both ordinates
/// in (0, T] and |gamma - gamma'| < c/log T, diagonal included (the
/// displayed double sum does not exclude gamma = gamma').
pub fn weak_sum(table: &ZeroTable, t: f64, c: f64) -> Result<PairCountReport, PaircorrError> {
    weak_sum_with(table, t, c, true)
}

pub fn weak_sum_with(
    table: &ZeroTable,
    t: f64,
    c: f64,
    include_diagonal: bool,
) -> Result<PairCountReport, PaircorrError> {
    if !(c > 0.0) {
        return Err(PaircorrError::InvalidRange("c must be positive"));
    }
    if t <= core::f64::consts::E {
        return Err(PaircorrError::InvalidRange("T must exceed e so log T > 1"));
    }
    if table.last() < t {
        return Err(PaircorrError::TableCoverage {
            t,
            covered: table.last(),
        });
    }
    let gammas: &[f64] = table.gammas();
    let m = gammas.partition_point(|&g| g <= t);
    let w = c / t.ln();
    // Sorted two-pointer sweep over the window (g - w, g + w).
    let mut count: u64 = 0;
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 0..m {
        let g = gammas[i];
        while lo < m && gammas[lo] <= g - w {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < m && gammas[hi] < g + w {
            hi += 1;
        }
        count += (hi - lo) as u64;
    }
    if !include_diagonal {
        count -= m as u64;
    }
    Ok(PairCountReport {
        t,
        c,
        count,
        normalized: count as f64 / (t * t.ln()),
        includes_diagonal: include_diagonal,
        zeros_up_to_t: m,
        window: w,
    })
}

/// One histogram bin over the scaled difference alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Ordered pairs with gamma - gamma' in the bin window (diagonal
    /// included where 0 is in the window).
    pub count: u64,
    /// Montgomery prediction for the bin (integral of the conjectured
    /// density plus the diagonal term, times (T/2pi) log T).
    pub prediction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelationHistogram {
    pub t: f64,
    pub bins: Vec<HistogramBin>,
    pub total_count: u64,
}

/// The conjectured pair-correlation density 1 - (sin pi u / pi u)^2.
pub fn montgomery_density(u: f64) -> f64 {
    let x = core::f64::consts::PI * u;
    if x.abs() < 1e-6 {
        // series: 1 - (1 - x^2/6 + ...)^2 = x^2/3 + O(x^4)
        return x * x / 3.0;
    }
    let s = x.sin() / x;
    1.0 - s * s
}

/// Empirical counts of pairs with gamma - gamma' in the scaled windows
/// [2 pi alpha / log T], each bin carrying the conjectured prediction.
pub fn pair_correlation_histogram(
    table: &ZeroTable,
    t: f64,
    alpha1: f64,
    alpha2: f64,
    bins: usize,
) -> Result<PairCorrelationHistogram, PaircorrError> {
    if !(alpha1 < alpha2) {
        return Err(PaircorrError::InvalidRange("need alpha1 < alpha2"));
    }
    if bins == 0 {
        return Err(PaircorrError::InvalidRange("need at least one bin"));
    }
    if t <= core::f64::consts::E {
        return Err(PaircorrError::InvalidRange("T must exceed e so log T > 1"));
    }
    if table.last() < t {
        return Err(PaircorrError::TableCoverage {
            t,
            covered: table.last(),
        });
    }
    let gammas: &[f64] = table.gammas();
    let m = gammas.partition_point(|&g| g <= t);
    let in_range = &gammas[..m];
    let log_t = t.ln();
    let scale = 2.0 * core::f64::consts::PI / log_t;
    let width = (alpha2 - alpha1) / bins as f64;
    let norm = t / (2.0 * core::f64::consts::PI) * log_t;
    let mut out = Vec::with_capacity(bins);
    let mut total: u64 = 0;
    for b in 0..bins {
        let a_lo = alpha1 + width * b as f64;
        let a_hi = alpha1 + width * (b + 1) as f64;
        // Window of raw differences, half-open except at the global top.
        let d_lo = scale * a_lo;
        let d_hi = scale * a_hi;
        let last_bin = b == bins - 1;
        let mut count: u64 = 0;
        for &g in in_range {
            // gamma' with g - gamma' in [d_lo, d_hi)  <=>
            // gamma' in (g - d_hi, g - d_lo].
            let lo_idx = if last_bin {
                in_range.partition_point(|&x| x < g - d_hi)
            } else {
                in_range.partition_point(|&x| x <= g - d_hi)
            };
            let hi_idx = in_range.partition_point(|&x| x <= g - d_lo);
            count += (hi_idx - lo_idx) as u64;
        }
        let zero_in_bin = (a_lo <= 0.0 && 0.0 < a_hi) || (last_bin && a_hi == 0.0);
        let (integral, _) = quad::integrate_real(montgomery_density, a_lo, a_hi, 1e-10);
        let delta = if zero_in_bin { 1.0 } else { 0.0 };
        out.push(HistogramBin {
            alpha_lo: a_lo,
            alpha_hi: a_hi,
            count,
            prediction: (integral + delta) * norm,
        });
        total += count;
    }
    Ok(PairCorrelationHistogram {
        t,
        bins: out,
        total_count: total,
    })
}

/// Per-prime KS distance of {frac(h gamma_k log p / 2 pi) : N <= k <= 2N}
/// to the uniform distribution.
pub fn phase_equidistribution(
    table: &ZeroTable,
    h: f64,
    prime_list: &[u32],
    n: usize,
) -> Result<Vec<(u32, f64)>, PaircorrError> {
    if table.k_max() < 2 * n {
        return Err(PaircorrError::TableCoverage {
            t: 2.0 * n as f64,
            covered: table.k_max() as f64,
        });
    }
    let mut out = Vec::with_capacity(prime_list.len());
    for &p in prime_list {
        let sample = phase_sample(table, h, p, n);
        out.push((p, stats::ks_uniform(&sample)));
    }
    Ok(out)
}

/// The fractional parts h gamma_k log p / 2 pi for k in [N, 2N] (empty
/// when the index window contains no valid k >= 1).
pub fn phase_sample(table: &ZeroTable, h: f64, p: u32, n: usize) -> Vec<f64> {
    let lo = n.max(1);
    let hi = 2 * n;
    let mut sample = Vec::new();
    let factor = h * (p as f64).ln() / (2.0 * core::f64::consts::PI);
    for k in lo..=hi.min(table.k_max()) {
        let v = table.gamma(k) * factor;
        sample.push(v - v.floor());
    }
    sample
}

/// Joint two-prime probe: product-box discrepancy of the pairs
/// (frac(h gamma_k log p / 2pi), frac(h gamma_k log q / 2pi)).
pub fn phase_joint_discrepancy(
    table: &ZeroTable,
    h: f64,
    p: u32,
    q: u32,
    n: usize,
) -> Result<f64, PaircorrError> {
    if table.k_max() < 2 * n {
        return Err(PaircorrError::TableCoverage {
            t: 2.0 * n as f64,
            covered: table.k_max() as f64,
        });
    }
    let xs = phase_sample(table, h, p, n);
    let ys = phase_sample(table, h, q, n);
    let pts: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
    Ok(stats::box_discrepancy_2d(&pts))
}

/// Shifted unit-circle points p^{i h gamma_k}; the empirical content of the
/// phase measure studied over the finite prime set.
pub fn shifted_phase_point(gamma: f64, h: f64, p: u32) -> Complex64 {
    let theta = h * gamma * (p as f64).ln();
    let (sin, cos) = theta.sin_cos();
    Complex64::new(cos, sin)
}
