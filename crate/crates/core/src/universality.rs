//! The density statistic of discrete universality: rectangle grids in the
//! strip, target functions, least-squares log-polynomial targets standing
//! in for the Mergelyan step, per-shift sup-norm discrepancies
//! D_k = sup_K |phi(s + i h gamma_k) - f(s)|, and densities
//! d_N(eps) = #{N <= k <= 2N : D_k <= eps} / (N + 1).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::fitting::{self, ComplexPolynomial};
use crate::matsumoto::{analytic_eval, dirichlet_coeffs, CoefficientTable, MatsumotoSpec, MatsumotoError};
use crate::smoothing::{Corrector, CutoffSpec, SmoothingError};
use crate::zeros::ZeroTable;

#[derive(Debug, Clone, PartialEq)]
pub enum UniversalityError {
    InvalidParams(&'static str),
    /// Grid rectangle leaves the open strip (rho, alpha+beta+1).
    StripViolation { sigma: f64, rho: f64, sigma_abs: f64 },
    /// A pole obstructs the region base line and rho leaves no room.
    PolePlacement { pole_re: f64 },
    VanishingTarget { at: Complex64 },
    /// Adjacent grid phases differ by more than pi/2: grid too coarse for
    /// branch continuation.
    BranchJump { at: Complex64 },
    /// Degree escalation exhausted without reaching the deviation goal.
    FitFailed { best_deviation: f64 },
    InsufficientZeroTable { needed: usize, have: usize },
    Eval(MatsumotoError),
    Smoothing(SmoothingError),
}

impl fmt::Display for UniversalityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniversalityError::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            UniversalityError::StripViolation { sigma, rho, sigma_abs } => write!(
                f,
                "rectangle must satisfy {rho} < sigma < {sigma_abs}; got sigma = {sigma}"
            ),
            UniversalityError::PolePlacement { pole_re } => {
                write!(f, "pole with Re = {pole_re} leaves no room for the region base line")
            }
            UniversalityError::VanishingTarget { at } => {
                write!(f, "target vanishes on the grid at {at}")
            }
            UniversalityError::BranchJump { at } => {
                write!(f, "log-branch continuation jump at {at}; refine the grid")
            }
            UniversalityError::FitFailed { best_deviation } => {
                write!(f, "degree escalation stalled at deviation {best_deviation:.3e}")
            }
            UniversalityError::InsufficientZeroTable { needed, have } => {
                write!(f, "zero table covers {have} ordinates, need {needed}")
            }
            UniversalityError::Eval(e) => write!(f, "evaluation: {e}"),
            UniversalityError::Smoothing(e) => write!(f, "smoothing: {e}"),
        }
    }
}

impl core::error::Error for UniversalityError {}

impl From<MatsumotoError> for UniversalityError {
    fn from(e: MatsumotoError) -> Self {
        UniversalityError::Eval(e)
    }
}

impl From<SmoothingError> for UniversalityError {
    fn from(e: SmoothingError) -> Self {
        UniversalityError::Smoothing(e)
    }
}

/// A closed rectangle with an induced lattice of evaluation points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactGrid {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub step: f64,
}

impl CompactGrid {
    pub fn new(
        sigma_lo: f64,
        sigma_hi: f64,
        t_lo: f64,
        t_hi: f64,
        step: f64,
    ) -> Result<Self, UniversalityError> {
        if !(sigma_lo <= sigma_hi && t_lo <= t_hi) {
            return Err(UniversalityError::InvalidParams("rectangle bounds out of order"));
        }
        if !(step > 0.0) {
            return Err(UniversalityError::InvalidParams("grid step must be positive"));
        }
        Ok(CompactGrid {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
            step,
        })
    }

    fn axis_count(lo: f64, hi: f64, step: f64) -> usize {
        ((hi - lo) / step + 1e-9).floor() as usize + 1
    }

    pub fn n_sigma(&self) -> usize {
        Self::axis_count(self.sigma_lo, self.sigma_hi, self.step)
    }

    pub fn n_t(&self) -> usize {
        Self::axis_count(self.t_lo, self.t_hi, self.step)
    }

    /// Lattice points in row-major order (rows of constant t, ascending).
    pub fn points(&self) -> Vec<Complex64> {
        let (ns, nt) = (self.n_sigma(), self.n_t());
        let mut out = Vec::with_capacity(ns * nt);
        for i in 0..nt {
            let t = self.t_lo + self.step * i as f64;
            for j in 0..ns {
                out.push(Complex64::new(self.sigma_lo + self.step * j as f64, t));
            }
        }
        out
    }

    /// The same rectangle at half the step; its lattice contains this one.
    pub fn refined(&self) -> CompactGrid {
        CompactGrid {
            step: self.step / 2.0,
            ..*self
        }
    }
}

/// The rectangle region enclosing the grid: base lines sigma0 < sigma1
/// below the grid, sigma2 above it, and a half-unit vertical margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionR {
    pub sigma0: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

/// Places sigma0, sigma1 at thirds of [rho, min Re K], sigma2 midway
/// between max Re K and the convergence abscissa, with every pole of the
/// meromorphy half-plane kept right of sigma0.
pub fn build_region(grid: &CompactGrid, spec: &MatsumotoSpec) -> Result<RegionR, UniversalityError> {
    let (rho, sigma_abs) = spec.strip();
    if grid.sigma_lo <= rho || grid.sigma_hi >= sigma_abs {
        let sigma = if grid.sigma_lo <= rho {
            grid.sigma_lo
        } else {
            grid.sigma_hi
        };
        return Err(UniversalityError::StripViolation {
            sigma,
            rho,
            sigma_abs,
        });
    }
    let gap = grid.sigma_lo - rho;
    let mut sigma0 = rho + gap / 3.0;
    let sigma1 = rho + 2.0 * gap / 3.0;
    // Poles in the meromorphy half-plane sigma > rho must lie right of
    // sigma0; lower sigma0 when possible.
    for pole in spec.poles() {
        let re = pole.location.re;
        if re > rho && re <= sigma0 {
            let lowered = 0.5 * (rho + re);
            if lowered > rho && lowered < sigma1 {
                sigma0 = lowered;
            } else {
                return Err(UniversalityError::PolePlacement { pole_re: re });
            }
        }
    }
    Ok(RegionR {
        sigma0,
        sigma1,
        sigma2: 0.5 * (grid.sigma_hi + sigma_abs),
        t_lo: grid.t_lo - 0.5,
        t_hi: grid.t_hi + 0.5,
    })
}

/// Target functions for the scan; all are non-vanishing by construction
/// or checked on the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetFunction {
    /// exp(G(s)) for a polynomial G.
    ExpPolynomial(ComplexPolynomial),
    Constant(Complex64),
    /// phi_other(s + offset) through its evaluation route.
    SpecShift {
        spec: MatsumotoSpec,
        offset: Complex64,
    },
    /// phi(s + i h gamma_j) of the spec under scan: a guaranteed-hit target.
    SelfShift { j: usize },
}

impl TargetFunction {
    pub fn describe(&self) -> String {
        match self {
            TargetFunction::ExpPolynomial(p) => format!(
                "exp_poly(deg={},center={:?},scale={:?},coeffs={:?})",
                p.degree(),
                p.center,
                p.scale,
                p.coeffs
            ),
            TargetFunction::Constant(c) => format!("const({:?})", c),
            TargetFunction::SpecShift { spec, offset } => {
                format!("spec_shift({},{:?})", spec.name(), offset)
            }
            TargetFunction::SelfShift { j } => format!("self_shift({j})"),
        }
    }
}

/// Least-squares log-polynomial fit standing in for the Mergelyan step.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFit {
    pub poly: ComplexPolynomial,
    /// sup over the grid of |f - exp(G)|.
    pub sup_deviation: f64,
}

/// Continuous branch of log f over the row-major grid: first point takes
/// the principal value, later points continue from the row/previous-row
/// reference. Jumps above pi/2 between neighbours are rejected.
fn continued_log(
    grid: &CompactGrid,
    points: &[Complex64],
    values: &[Complex64],
) -> Result<Vec<Complex64>, UniversalityError> {
    let ns = grid.n_sigma();
    let mut logs = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(UniversalityError::VanishingTarget { at: points[i] });
        }
        if i == 0 {
            logs.push(v.ln());
            continue;
        }
        let ref_idx = if i % ns == 0 { i - ns } else { i - 1 };
        let ratio = v / values[ref_idx];
        let delta = ratio.ln(); // principal branch of the local ratio
        if delta.im.abs() > core::f64::consts::FRAC_PI_2 {
            return Err(UniversalityError::BranchJump { at: points[i] });
        }
        logs.push(logs[ref_idx] + delta);
    }
    Ok(logs)
}

/// Fits a polynomial G to a continuous branch of log f on the grid and
/// reports the achieved sup deviation of exp(G) from f.
pub fn fit_log_polynomial(
    grid: &CompactGrid,
    points: &[Complex64],
    values: &[Complex64],
    degree: usize,
) -> Result<LogFit, UniversalityError> {
    let logs = continued_log(grid, points, values)?;
    let poly = fitting::fit_polynomial(points, &logs, degree)
        .ok_or(UniversalityError::InvalidParams("not enough grid points for the degree"))?;
    let mut sup = 0.0f64;
    for (&s, &v) in points.iter().zip(values.iter()) {
        let dev = (poly.eval(s).exp() - v).norm();
        if dev > sup {
            sup = dev;
        }
    }
    Ok(LogFit {
        poly,
        sup_deviation: sup,
    })
}

/// Escalates the fit degree until sup |f - exp(G)| < epsilon / 2,
/// mirroring the approximation split of the density argument.
pub fn approximate_target(
    grid: &CompactGrid,
    points: &[Complex64],
    values: &[Complex64],
    epsilon: f64,
    max_degree: usize,
) -> Result<LogFit, UniversalityError> {
    let mut best = f64::INFINITY;
    for degree in 0..=max_degree {
        if points.len() < degree + 1 {
            break;
        }
        let fit = fit_log_polynomial(grid, points, values, degree)?;
        if fit.sup_deviation < epsilon / 2.0 {
            return Ok(fit);
        }
        best = best.min(fit.sup_deviation);
    }
    Err(UniversalityError::FitFailed { best_deviation: best })
}

/// Scan configuration knobs beyond the theorem parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Truncation height for generic (no-closed-form) specs.
    pub x: f64,
    pub cutoff: CutoffSpec,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            x: 1.0e4,
            cutoff: CutoffSpec::default(),
        }
    }
}

/// Shift evaluator shared by a whole scan: closed forms go through
/// `analytic_eval`, generic specs through one corrector and coefficient
/// table sized for X.
pub struct Scanner<'a> {
    spec: &'a MatsumotoSpec,
    zeros: &'a ZeroTable,
    opts: ScanOptions,
    generic: Option<(CoefficientTable, Corrector)>,
}

impl<'a> Scanner<'a> {
    pub fn new(
        spec: &'a MatsumotoSpec,
        zeros: &'a ZeroTable,
        opts: ScanOptions,
    ) -> Result<Self, UniversalityError> {
        let generic = if spec.has_closed_form() {
            None
        } else {
            let needed = (opts.cutoff.support_end() * opts.x).ceil() as usize;
            let table = dirichlet_coeffs(spec, needed)?;
            Some((table, Corrector::new(opts.cutoff)))
        };
        Ok(Scanner {
            spec,
            zeros,
            opts,
            generic,
        })
    }

    /// phi at an arbitrary strip point through the scan's evaluation route.
    pub fn phi(&self, s: Complex64) -> Result<Complex64, UniversalityError> {
        match &self.generic {
            None => Ok(analytic_eval(self.spec, s)?),
            Some((table, corrector)) => {
                Ok(corrector.continued_eval(self.spec, table, s, self.opts.x)?.value)
            }
        }
    }

    /// Samples the target on the grid points and checks non-vanishing.
    pub fn sample_target(
        &self,
        target: &TargetFunction,
        h: f64,
        points: &[Complex64],
    ) -> Result<Vec<Complex64>, UniversalityError> {
        let mut out = Vec::with_capacity(points.len());
        for &s in points {
            let v = match target {
                TargetFunction::ExpPolynomial(p) => p.eval(s).exp(),
                TargetFunction::Constant(c) => *c,
                TargetFunction::SpecShift { spec, offset } => analytic_eval(spec, s + offset)?,
                TargetFunction::SelfShift { j } => {
                    if self.zeros.k_max() < *j || *j == 0 {
                        return Err(UniversalityError::InsufficientZeroTable {
                            needed: *j,
                            have: self.zeros.k_max(),
                        });
                    }
                    self.phi(s + Complex64::new(0.0, h * self.zeros.gamma(*j)))?
                }
            };
            if v.norm() == 0.0 {
                return Err(UniversalityError::VanishingTarget { at: s });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// D_k: max over the grid of |phi(s + i h gamma_k) - f(s)|. The grid
    /// max is a lower bound for the true sup over the rectangle.
    pub fn discrepancy(
        &self,
        target_samples: &[Complex64],
        points: &[Complex64],
        h: f64,
        k: usize,
    ) -> Result<f64, UniversalityError> {
        if self.zeros.k_max() < k || k == 0 {
            return Err(UniversalityError::InsufficientZeroTable {
                needed: k,
                have: self.zeros.k_max(),
            });
        }
        let shift = Complex64::new(0.0, h * self.zeros.gamma(k));
        let mut sup = 0.0f64;
        for (&s, &f) in points.iter().zip(target_samples.iter()) {
            let v = self.phi(s + shift)?;
            let d = (v - f).norm();
            if d > sup {
                sup = d;
            }
        }
        Ok(sup)
    }
}

/// Full scan output: per-shift discrepancies and the density ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub spec_name: String,
    pub target: String,
    pub h: f64,
    pub n: usize,
    pub grid: CompactGrid,
    pub epsilons: Vec<f64>,
    /// (k, gamma_k, D_k); failed evaluations carry D_k = +inf.
    pub discrepancies: Vec<(usize, f64, f64)>,
    /// (epsilon, d_N(epsilon)) in the given epsilon order.
    pub densities: Vec<(f64, f64)>,
    pub failures: usize,
    pub config_hash: u64,
}

/// FNV-1a over the canonical config line; identical configs hash equal.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn config_line(
    spec: &MatsumotoSpec,
    target: &TargetFunction,
    grid: &CompactGrid,
    h: f64,
    n: usize,
    epsilons: &[f64],
    zeros: &ZeroTable,
    opts: &ScanOptions,
) -> String {
    format!(
        "scan spec={} target={} grid=({:?},{:?},{:?},{:?},{:?}) h={:?} N={} eps={:?} zeros=({},{:?}) x={:?} cutoff=({:?},{:?})",
        spec.name(),
        target.describe(),
        grid.sigma_lo,
        grid.sigma_hi,
        grid.t_lo,
        grid.t_hi,
        grid.step,
        h,
        n,
        epsilons,
        zeros.k_max(),
        zeros.bracket_width(),
        opts.x,
        opts.cutoff.plateau_end(),
        opts.cutoff.support_end(),
    )
}

/// The density statistic over shifts k in [N, 2N]: D_k per shift and
/// d_N(eps) = #{k : D_k <= eps}/(N + 1) per epsilon. Failed shift
/// evaluations are recorded and count as "not within eps".
pub fn universality_scan(
    spec: &MatsumotoSpec,
    zeros: &ZeroTable,
    target: &TargetFunction,
    grid: &CompactGrid,
    h: f64,
    n: usize,
    epsilons: &[f64],
    opts: &ScanOptions,
) -> Result<ScanReport, UniversalityError> {
    if !(h > 0.0) {
        return Err(UniversalityError::InvalidParams("h must be positive"));
    }
    if n == 0 {
        return Err(UniversalityError::InvalidParams("N must be >= 1"));
    }
    if zeros.k_max() < 2 * n {
        return Err(UniversalityError::InsufficientZeroTable {
            needed: 2 * n,
            have: zeros.k_max(),
        });
    }
    let (rho, sigma_abs) = spec.strip();
    if grid.sigma_lo <= rho || grid.sigma_hi >= sigma_abs {
        return Err(UniversalityError::StripViolation {
            sigma: grid.sigma_lo.min(grid.sigma_hi),
            rho,
            sigma_abs,
        });
    }
    let scanner = Scanner::new(spec, zeros, *opts)?;
    let points = grid.points();
    let samples = scanner.sample_target(target, h, &points)?;
    let mut discrepancies = Vec::with_capacity(n + 1);
    let mut failures = 0usize;
    for k in n..=2 * n {
        match scanner.discrepancy(&samples, &points, h, k) {
            Ok(d) => discrepancies.push((k, zeros.gamma(k), d)),
            Err(_) => {
                failures += 1;
                discrepancies.push((k, zeros.gamma(k), f64::INFINITY));
            }
        }
    }
    let denom = (n + 1) as f64;
    let densities = epsilons
        .iter()
        .map(|&eps| {
            let hits = discrepancies.iter().filter(|(_, _, d)| *d <= eps).count();
            (eps, hits as f64 / denom)
        })
        .collect();
    let hash = fnv1a(config_line(spec, target, grid, h, n, epsilons, zeros, opts).as_bytes());
    Ok(ScanReport {
        spec_name: String::from(spec.name()),
        target: target.describe(),
        h,
        n,
        grid: *grid,
        epsilons: epsilons.to_vec(),
        discrepancies,
        densities,
        failures,
        config_hash: hash,
    })
}

/// d_N(eps) per h over a list of shift scalings.
#[allow(clippy::too_many_arguments)]
pub fn h_sweep(
    spec: &MatsumotoSpec,
    zeros: &ZeroTable,
    target: &TargetFunction,
    grid: &CompactGrid,
    n: usize,
    h_list: &[f64],
    epsilon: f64,
    opts: &ScanOptions,
) -> Result<Vec<(f64, f64)>, UniversalityError> {
    let mut rows = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let report = universality_scan(spec, zeros, target, grid, h, n, &[epsilon], opts)?;
        rows.push((h, report.densities[0].1));
    }
    Ok(rows)
}
