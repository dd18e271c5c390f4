//! Ordinates of nontrivial zeta zeros: sign-change scanning of the Hardy
//! Z-function, bisection refinement, and Riemann–von Mangoldt validation.
//!
//! All zeros in the supported range (t <= 1e4) are simple and on the
//! critical line, so a sign-change scan with a density-aware step plus a
//! count check against the zero-counting formula certifies completeness;
//! no Turing-method rigor is attempted.

use alloc::vec::Vec;
use core::fmt;

// Float supplies ln/exp/etc on f64 in no_std builds; test builds link std
// and resolve them inherently, so the import looks unused there.
#[allow(unused_imports)]
use num_traits::Float;

use crate::zeta::{HardyZEvaluator, ZetaParams};

/// Ordered ordinates gamma_1 <= gamma_2 <= ... with their bisection
/// resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    gammas: Vec<f64>,
    bracket_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZerosError {
    InvalidParams(&'static str),
    /// Scan count disagrees with the Riemann–von Mangoldt count after
    /// recovery passes; the scan step was too coarse.
    MissedZeros {
        prefix: usize,
        expected: f64,
    },
    /// Construction from unordered or non-positive data; `index` is the
    /// 0-based offending entry.
    NotMonotone {
        index: usize,
    },
    Empty,
}

impl fmt::Display for ZerosError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZerosError::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            ZerosError::MissedZeros { prefix, expected } => write!(
                f,
                "zero count {prefix} disagrees with counting formula {expected:.2}; scan step too coarse"
            ),
            ZerosError::NotMonotone { index } => {
                write!(f, "ordinates not positive and nondecreasing at entry {index}")
            }
            ZerosError::Empty => write!(f, "empty zero table"),
        }
    }
}

impl core::error::Error for ZerosError {}

/// Smooth Riemann–von Mangoldt estimate
/// (T/2pi) log(T/2pi) - T/2pi + 7/8 for the number of zeros up to T.
pub fn riemann_von_mangoldt(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let x = t / (2.0 * core::f64::consts::PI);
    if x <= f64::MIN_POSITIVE {
        return 0.875;
    }
    x * x.ln() - x + 0.875
}

/// Height at which the counting formula reaches `k` zeros.
pub fn rvm_inverse(k: f64) -> f64 {
    let mut t = (2.0 * core::f64::consts::PI * k / (k.max(3.0)).ln().max(1.0)).max(15.0);
    for _ in 0..60 {
        let f = riemann_von_mangoldt(t) - k;
        let df = (t / (2.0 * core::f64::consts::PI)).ln() / (2.0 * core::f64::consts::PI);
        let next = t - f / df.max(1e-12);
        if (next - t).abs() < 1e-9 * t {
            return next;
        }
        t = next.max(1.0);
    }
    t
}

/// Scan step at height t: a quarter of 1/log(expected index), capped at
/// 0.05 (average zero gap is 2pi/log(t/2pi)).
fn scan_step(t: f64) -> f64 {
    let k_hat = riemann_von_mangoldt(t).max(3.0);
    (0.25 / k_hat.ln()).min(0.05)
}

/// Sign-change brackets of Z on (t_lo, t_hi], scanned with `step_scale`
/// times the density-aware step.
pub fn scan_brackets(
    ev: &mut HardyZEvaluator,
    t_lo: f64,
    t_hi: f64,
    step_scale: f64,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut t_prev = t_lo;
    let mut z_prev = ev.z(t_prev);
    while t_prev < t_hi {
        let t = (t_prev + step_scale * scan_step(t_prev)).min(t_hi);
        let z = ev.z(t);
        if z_prev * z < 0.0 {
            out.push((t_prev, t));
        } else if z == 0.0 && z_prev != 0.0 && t < t_hi {
            // Grid point is (numerically) a zero; bracket it with a nudge.
            out.push((t_prev, t + 1e-9));
        }
        t_prev = t;
        z_prev = z;
    }
    out
}

/// Bisects a sign-change bracket down to `width` and returns the midpoint.
pub fn refine_bracket(ev: &mut HardyZEvaluator, bracket: (f64, f64), width: f64) -> f64 {
    let (mut lo, mut hi) = bracket;
    let mut z_lo = ev.z(lo);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let z_mid = ev.z(mid);
        if z_lo * z_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            z_lo = z_mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros in (t_lo, t_hi]: scan, recover local misses against the counting
/// formula difference, refine. Used directly by parallel table builders.
pub fn zeros_in_interval(
    params: &ZetaParams,
    t_lo: f64,
    t_hi: f64,
    bracket_width: f64,
) -> Vec<f64> {
    let mut ev = HardyZEvaluator::new(*params);
    let mut brackets = scan_brackets(&mut ev, t_lo, t_hi, 1.0);
    // Local density check: the interval should hold about
    // rvm(t_hi) - rvm(t_lo) zeros; rescan finer while clearly short.
    let expected = riemann_von_mangoldt(t_hi) - riemann_von_mangoldt(t_lo);
    let mut scale = 1.0;
    while (brackets.len() as f64) < expected - 1.75 && scale > 0.01 {
        scale *= 0.2;
        brackets = scan_brackets(&mut ev, t_lo, t_hi, scale);
    }
    brackets
        .into_iter()
        .map(|b| refine_bracket(&mut ev, b, bracket_width))
        .collect()
}

/// Prefix-count deviations rvm(midpoint_k) - k for k = 1..len (the last
/// midpoint extrapolates half an average gap past the final zero).
pub fn prefix_deviations(gammas: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(gammas.len());
    for k in 1..=gammas.len() {
        let mid = if k < gammas.len() {
            0.5 * (gammas[k - 1] + gammas[k])
        } else {
            let g = gammas[k - 1];
            g + core::f64::consts::PI / (g / (2.0 * core::f64::consts::PI)).ln().max(1.0)
        };
        out.push(riemann_von_mangoldt(mid) - k as f64);
    }
    out
}

/// Checks every prefix count against the counting formula (within ±1) and
/// fills gaps where the scan provably skipped zeros. Returns the repaired,
/// sorted list.
pub fn validate_and_repair(
    params: &ZetaParams,
    mut gammas: Vec<f64>,
    bracket_width: f64,
) -> Result<Vec<f64>, ZerosError> {
    for _pass in 0..3 {
        gammas.sort_by(|a, b| a.partial_cmp(b).expect("finite ordinates"));
        let devs = prefix_deviations(&gammas);
        // A positive deviation >= ~2 at the midpoint after gamma_k means at
        // least one zero is missing at or below that gap.
        let mut missing: Vec<usize> = Vec::new();
        for (i, &d) in devs.iter().enumerate() {
            if d >= 1.75 {
                missing.push(i);
            }
        }
        if missing.is_empty() {
            break;
        }
        let mut found = Vec::new();
        for &i in &missing {
            let lo = if i == 0 { 0.0 } else { gammas[i - 1] };
            let hi = if i + 1 < gammas.len() {
                gammas[i + 1]
            } else {
                gammas[i] + 2.0
            };
            let mut ev = HardyZEvaluator::new(*params);
            for b in scan_brackets(&mut ev, lo + 1e-9, hi - 1e-9, 0.02) {
                let g = refine_bracket(&mut ev, b, bracket_width);
                if gammas
                    .iter()
                    .all(|&x| (x - g).abs() > bracket_width.max(1e-12))
                {
                    found.push(g);
                }
            }
        }
        if found.is_empty() {
            break;
        }
        gammas.extend(found);
    }
    gammas.sort_by(|a, b| a.partial_cmp(b).expect("finite ordinates"));
    let devs = prefix_deviations(&gammas);
    for (i, &d) in devs.iter().enumerate() {
        if d.abs() > 1.0 {
            return Err(ZerosError::MissedZeros {
                prefix: i + 1,
                expected: i as f64 + 1.0 + d,
            });
        }
    }
    Ok(gammas)
}

/// First `k_max` ordinates, each bisected to `bracket_width`.
pub fn compute_zeros(k_max: usize, bracket_width: f64) -> Result<ZeroTable, ZerosError> {
    compute_zeros_with(&ZetaParams::default(), k_max, bracket_width)
}

pub fn compute_zeros_with(
    params: &ZetaParams,
    k_max: usize,
    bracket_width: f64,
) -> Result<ZeroTable, ZerosError> {
    if k_max == 0 {
        return Err(ZerosError::InvalidParams("k_max must be >= 1"));
    }
    if !(bracket_width > 0.0) {
        return Err(ZerosError::InvalidParams("bracket_width must be > 0"));
    }
    let t_hi = rvm_inverse(k_max as f64 + 4.0) + 2.0;
    let raw = zeros_in_interval(params, 0.0, t_hi, bracket_width);
    let repaired = validate_and_repair(params, raw, bracket_width)?;
    if repaired.len() < k_max {
        return Err(ZerosError::MissedZeros {
            prefix: repaired.len(),
            expected: k_max as f64,
        });
    }
    ZeroTable::from_parts(repaired[..k_max].to_vec(), bracket_width)
}

/// Report of the lower-bound check gamma_k log(k)/k over k >= 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundReport {
    pub min_ratio: f64,
    /// 1-based index attaining the minimum; 0 when the range is empty.
    pub argmin_k: usize,
    pub passes: bool,
}

impl ZeroTable {
    /// Builds a table from raw data, enforcing positivity and ordering.
    pub fn from_parts(gammas: Vec<f64>, bracket_width: f64) -> Result<Self, ZerosError> {
        if gammas.is_empty() {
            return Err(ZerosError::Empty);
        }
        if !(bracket_width > 0.0) {
            return Err(ZerosError::InvalidParams("bracket_width must be > 0"));
        }
        let mut prev = 0.0f64;
        for (i, &g) in gammas.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 || g < prev {
                return Err(ZerosError::NotMonotone { index: i });
            }
            prev = g;
        }
        Ok(ZeroTable {
            gammas,
            bracket_width,
        })
    }

    pub fn k_max(&self) -> usize {
        self.gammas.len()
    }

    /// gamma_k, 1-based as in the ordering gamma_1 <= gamma_2 <= ...
    pub fn gamma(&self, k: usize) -> f64 {
        self.gammas[k - 1]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn bracket_width(&self) -> f64 {
        self.bracket_width
    }

    pub fn last(&self) -> f64 {
        *self.gammas.last().expect("table is nonempty")
    }

    /// min over k >= 2 of gamma_k log(k)/k; vacuous pass on a 1-entry table.
    pub fn lower_bound_check(&self) -> LowerBoundReport {
        let mut min_ratio = f64::INFINITY;
        let mut argmin_k = 0usize;
        for (i, &g) in self.gammas.iter().enumerate().skip(1) {
            let k = (i + 1) as f64;
            let r = g * k.ln() / k;
            if r < min_ratio {
                min_ratio = r;
                argmin_k = i + 1;
            }
        }
        if argmin_k == 0 {
            LowerBoundReport {
                min_ratio: f64::INFINITY,
                argmin_k: 0,
                passes: true,
            }
        } else {
            LowerBoundReport {
                min_ratio,
                argmin_k,
                passes: min_ratio > 0.0,
            }
        }
    }
}
