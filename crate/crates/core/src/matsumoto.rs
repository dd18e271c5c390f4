//! Euler-product zeta-functions built from per-prime local factors
//! prod_j (1 - a_j p^{-f_j s})^{-1}, their Dirichlet coefficients, and the
//! numerical diagnostics for the defining growth/mean-square conditions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::fitting;
use crate::primes;
use crate::quad;
use crate::smoothing::{self, CutoffSpec, SmoothingError};
use crate::zeta::{self, ZetaError};

/// Euler–Mascheroni constant (Laurent coefficient of zeta at the pole).
pub const EULER_GAMMA: f64 = 0.5772156649015329;
/// zeta(2), residue of zeta(s) zeta(2s) at s = 1.
pub const ZETA_2: f64 = 1.6449340668482264;
/// zeta(1/2); residue of zeta(s) zeta(2s) at s = 1/2 is zeta(1/2)/2.
pub const ZETA_HALF: f64 = -1.4603545088095868;

/// One Euler-factor term: contributes (1 - a p^{-f s})^{-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorTerm {
    pub a: Complex64,
    pub f: u32,
}

impl FactorTerm {
    pub fn new(a: Complex64, f: u32) -> Self {
        FactorTerm { a, f }
    }

    pub fn real(a: f64, f: u32) -> Self {
        FactorTerm {
            a: Complex64::new(a, 0.0),
            f,
        }
    }
}

/// The validated local factor at the n-th prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactor {
    pub prime_index: usize,
    pub prime: u32,
    pub terms: Vec<FactorTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatsumotoError {
    UnknownName(String),
    InvalidSpec(&'static str),
    /// Growth-condition violation g(n) <= C1 p^alpha, |a| <= p^beta.
    ConditionViolation { prime: u32, detail: &'static str },
    CoefficientOverflow { n: usize, magnitude: f64 },
    /// sigma outside the half-plane required by the operation.
    Domain { sigma: f64, needed: f64 },
    SingularFactor { prime: u32 },
    PoleProximity { distance: f64 },
    /// Pole-corrected truncation rejected by its validity heuristic.
    NoContinuation { estimate: f64 },
    DeskScale(&'static str),
    DegenerateRegression,
    NoStripEvaluation,
    Zeta(ZetaError),
    Smoothing(SmoothingError),
}

impl fmt::Display for MatsumotoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatsumotoError::UnknownName(n) => write!(f, "unknown builtin spec `{n}`"),
            MatsumotoError::InvalidSpec(m) => write!(f, "invalid spec: {m}"),
            MatsumotoError::ConditionViolation { prime, detail } => {
                write!(f, "growth condition violated at p = {prime}: {detail}")
            }
            MatsumotoError::CoefficientOverflow { n, magnitude } => {
                write!(f, "coefficient b_{n} exceeds cap (|b| = {magnitude:.3e})")
            }
            MatsumotoError::Domain { sigma, needed } => {
                write!(f, "sigma = {sigma} outside required half-plane sigma > {needed}")
            }
            MatsumotoError::SingularFactor { prime } => {
                write!(f, "Euler factor at p = {prime} is singular at this point")
            }
            MatsumotoError::PoleProximity { distance } => {
                write!(f, "point within {distance:.3e} of a pole")
            }
            MatsumotoError::NoContinuation { estimate } => {
                write!(f, "truncation validity heuristic failed (estimate {estimate:.3e})")
            }
            MatsumotoError::DeskScale(m) => write!(f, "desk-scale limit: {m}"),
            MatsumotoError::DegenerateRegression => write!(f, "degenerate regression input"),
            MatsumotoError::NoStripEvaluation => {
                write!(f, "spec has no strip evaluation route")
            }
            MatsumotoError::Zeta(e) => write!(f, "zeta evaluation: {e}"),
            MatsumotoError::Smoothing(e) => write!(f, "smoothing: {e}"),
        }
    }
}

impl core::error::Error for MatsumotoError {}

impl From<ZetaError> for MatsumotoError {
    fn from(e: ZetaError) -> Self {
        MatsumotoError::Zeta(e)
    }
}

impl From<SmoothingError> for MatsumotoError {
    fn from(e: SmoothingError) -> Self {
        MatsumotoError::Smoothing(e)
    }
}

/// The five built-in instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Riemann,
    ZetaSquared,
    ZetaOf2s,
    DirichletChi4,
    ZetaTimesZeta2s,
}

pub const BUILTIN_NAMES: [&str; 5] = [
    "riemann",
    "zeta_squared",
    "zeta_of_2s",
    "dirichlet_chi4",
    "zeta_times_zeta2s",
];

fn chi4(p: u32) -> f64 {
    match p % 4 {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0, // p = 2
    }
}

impl Builtin {
    fn terms(&self, prime: u32) -> Vec<FactorTerm> {
        match self {
            Builtin::Riemann => vec![FactorTerm::real(1.0, 1)],
            Builtin::ZetaSquared => vec![FactorTerm::real(1.0, 1), FactorTerm::real(1.0, 1)],
            Builtin::ZetaOf2s => vec![FactorTerm::real(1.0, 2)],
            // chi_4(2) = 0 is encoded as the term (0, 1) so g(n) >= 1
            // everywhere; it is equivalent to omitting the factor.
            Builtin::DirichletChi4 => vec![FactorTerm::real(chi4(prime), 1)],
            Builtin::ZetaTimesZeta2s => vec![FactorTerm::real(1.0, 1), FactorTerm::real(1.0, 2)],
        }
    }
}

/// How local factors are produced: a builtin rule for every prime, or an
/// explicit finite table (identity factors beyond the table).
#[derive(Debug, Clone, PartialEq)]
pub enum FactorRule {
    Builtin(Builtin),
    Table(Vec<Vec<FactorTerm>>),
}

/// A pole with its Laurent data. `coeffs[0]` is the residue c_{-1};
/// `coeffs[1]` is c_{-2}, nonzero only for order 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: Complex64,
    pub order: u8,
    pub coeffs: [Complex64; 2],
}

impl Pole {
    pub fn simple(location: Complex64, residue: Complex64) -> Self {
        Pole {
            location,
            order: 1,
            coeffs: [residue, Complex64::new(0.0, 0.0)],
        }
    }

    pub fn double(location: Complex64, c_minus_1: Complex64, c_minus_2: Complex64) -> Self {
        Pole {
            location,
            order: 2,
            coeffs: [c_minus_1, c_minus_2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClosedForm {
    Zeta,
    ZetaSquared,
    ZetaOf2s,
    DirichletChi4,
    ZetaTimesZeta2s,
}

/// A zeta-function of the class: growth constants, abscissa rho, poles,
/// the factor rule, and an optional closed-form strip evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct MatsumotoSpec {
    name: String,
    alpha: f64,
    beta: f64,
    c1: f64,
    rho: f64,
    poles: Vec<Pole>,
    growth_exponent: f64,
    rule: FactorRule,
    closed_form: Option<ClosedForm>,
}

impl MatsumotoSpec {
    /// Validates the condition-(ii) shape: rho in [a+b+1/2, a+b+1) and no
    /// pole on the line sigma = rho.
    pub fn new(
        name: String,
        alpha: f64,
        beta: f64,
        c1: f64,
        rho: f64,
        poles: Vec<Pole>,
        growth_exponent: f64,
        rule: FactorRule,
    ) -> Result<Self, MatsumotoError> {
        if !(alpha >= 0.0 && beta >= 0.0) {
            return Err(MatsumotoError::InvalidSpec("alpha, beta must be nonnegative"));
        }
        if !(c1 > 0.0) {
            return Err(MatsumotoError::InvalidSpec("C1 must be positive"));
        }
        let lo = alpha + beta + 0.5;
        let hi = alpha + beta + 1.0;
        if !(rho >= lo && rho < hi) {
            return Err(MatsumotoError::InvalidSpec(
                "rho must lie in [alpha+beta+1/2, alpha+beta+1)",
            ));
        }
        if poles.iter().any(|p| p.location.re == rho) {
            return Err(MatsumotoError::InvalidSpec("no pole may lie on the line sigma = rho"));
        }
        if poles.iter().any(|p| p.order == 0 || p.order > 2) {
            return Err(MatsumotoError::InvalidSpec("pole order must be 1 or 2"));
        }
        Ok(MatsumotoSpec {
            name,
            alpha,
            beta,
            c1,
            rho,
            poles,
            growth_exponent,
            rule,
            closed_form: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn growth_exponent(&self) -> f64 {
        self.growth_exponent
    }

    pub fn rule(&self) -> &FactorRule {
        &self.rule
    }

    /// Abscissa of absolute convergence of the Dirichlet series.
    pub fn sigma_abs(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    /// The open strip (rho, alpha + beta + 1) where shifts are studied.
    pub fn strip(&self) -> (f64, f64) {
        (self.rho, self.sigma_abs())
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_form.is_some()
    }

    /// Drops the closed form, forcing strip evaluation through the
    /// pole-corrected truncation; used to exercise the generic route.
    pub fn without_closed_form(mut self) -> Self {
        self.closed_form = None;
        self.name.push_str("_generic");
        self
    }

    /// Smallest real part among poles, or +inf when there are none.
    pub fn min_pole_re(&self) -> f64 {
        self.poles
            .iter()
            .map(|p| p.location.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// The validated local factor at the n-th prime (1-based index).
    pub fn local_factor(&self, prime_index: usize, prime: u32) -> Result<LocalFactor, MatsumotoError> {
        let terms = match &self.rule {
            FactorRule::Builtin(b) => b.terms(prime),
            FactorRule::Table(t) => t.get(prime_index - 1).cloned().unwrap_or_default(),
        };
        let p = prime as f64;
        if terms.len() as f64 > self.c1 * p.powf(self.alpha) {
            return Err(MatsumotoError::ConditionViolation {
                prime,
                detail: "g(n) exceeds C1 p^alpha",
            });
        }
        if terms.iter().any(|t| t.a.norm() > p.powf(self.beta) * (1.0 + 1e-12)) {
            return Err(MatsumotoError::ConditionViolation {
                prime,
                detail: "|a| exceeds p^beta",
            });
        }
        if terms.iter().any(|t| t.f == 0) {
            return Err(MatsumotoError::ConditionViolation {
                prime,
                detail: "f(j, n) must be a positive integer",
            });
        }
        Ok(LocalFactor {
            prime_index,
            prime,
            terms,
        })
    }
}

/// Returns one of the named built-in specs.
pub fn builtin_spec(name: &str) -> Result<MatsumotoSpec, MatsumotoError> {
    let (builtin, c1, rho, poles, c2, closed): (Builtin, f64, f64, Vec<Pole>, f64, ClosedForm) =
        match name {
            "riemann" => (
                Builtin::Riemann,
                1.0,
                0.5,
                vec![Pole::simple(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))],
                0.5,
                ClosedForm::Zeta,
            ),
            "zeta_squared" => (
                Builtin::ZetaSquared,
                2.0,
                0.5,
                // zeta(s)^2 = (s-1)^{-2} + 2 gamma (s-1)^{-1} + ...
                vec![Pole::double(
                    Complex64::new(1.0, 0.0),
                    Complex64::new(2.0 * EULER_GAMMA, 0.0),
                    Complex64::new(1.0, 0.0),
                )],
                1.0,
                ClosedForm::ZetaSquared,
            ),
            "zeta_of_2s" => (
                Builtin::ZetaOf2s,
                1.0,
                // rho must avoid the pole line sigma = 1/2.
                0.55,
                vec![Pole::simple(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0))],
                0.5,
                ClosedForm::ZetaOf2s,
            ),
            "dirichlet_chi4" => (
                Builtin::DirichletChi4,
                1.0,
                0.5,
                vec![],
                0.5,
                ClosedForm::DirichletChi4,
            ),
            "zeta_times_zeta2s" => (
                Builtin::ZetaTimesZeta2s,
                2.0,
                0.55,
                vec![
                    Pole::simple(Complex64::new(1.0, 0.0), Complex64::new(ZETA_2, 0.0)),
                    Pole::simple(Complex64::new(0.5, 0.0), Complex64::new(0.5 * ZETA_HALF, 0.0)),
                ],
                1.0,
                ClosedForm::ZetaTimesZeta2s,
            ),
            other => return Err(MatsumotoError::UnknownName(String::from(other))),
        };
    let mut spec = MatsumotoSpec::new(
        String::from(name),
        0.0,
        0.0,
        c1,
        rho,
        poles,
        c2,
        FactorRule::Builtin(builtin),
    )?;
    spec.closed_form = Some(closed);
    Ok(spec)
}

/// Dirichlet coefficients b_1..b_N of a spec.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    spec_name: String,
    values: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn spec_name(&self) -> &str {
        &self.spec_name
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// b_n, 1-based.
    pub fn b(&self, n: usize) -> Complex64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise sum of two tables (same length), for linearity checks.
    pub fn add(&self, other: &CoefficientTable) -> CoefficientTable {
        assert_eq!(self.n_max(), other.n_max());
        let mut name = self.spec_name.clone();
        name.push('+');
        name.push_str(&other.spec_name);
        CoefficientTable {
            spec_name: name,
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Local coefficients c_{p,0..deg} by power-series inversion of
/// prod_j (1 - a_j x^{f_j}).
fn local_series(terms: &[FactorTerm], deg: usize) -> Vec<Complex64> {
    // Multiply out the factor polynomial, truncated at degree `deg`.
    let mut q = vec![Complex64::new(0.0, 0.0); deg + 1];
    q[0] = Complex64::new(1.0, 0.0);
    for t in terms {
        if (t.f as usize) > deg {
            continue;
        }
        let f = t.f as usize;
        // q *= (1 - a x^f), in place from high to low degree.
        for m in (f..=deg).rev() {
            let lower = q[m - f];
            q[m] -= t.a * lower;
        }
    }
    // Invert: c_0 = 1, c_m = -sum_{i=1..m} q_i c_{m-i}.
    let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for m in 1..=deg {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=m {
            acc += q[i] * c[m - i];
        }
        c[m] = -acc;
    }
    c
}

/// Generates b_1..b_N multiplicatively from the local factors.
pub fn dirichlet_coeffs(spec: &MatsumotoSpec, n_max: usize) -> Result<CoefficientTable, MatsumotoError> {
    if n_max == 0 {
        return Err(MatsumotoError::InvalidSpec("coefficient count must be >= 1"));
    }
    // Cap |b_n| at 10^{alpha+beta+2} N to catch malformed specs early.
    let cap = 10f64.powf(spec.alpha + spec.beta + 2.0) * n_max as f64;
    let spf = primes::smallest_prime_factors(n_max);
    let mut values = vec![Complex64::new(0.0, 0.0); n_max];
    values[0] = Complex64::new(1.0, 0.0);
    // Local coefficient lookup per prime, built in prime order.
    let prime_list = primes::primes_up_to(n_max);
    let mut local: Vec<Vec<Complex64>> = Vec::with_capacity(prime_list.len());
    let mut prime_index_of = vec![0usize; n_max + 1];
    for (i, &p) in prime_list.iter().enumerate() {
        let mut deg = 0usize;
        let mut pw = p as usize;
        while pw <= n_max {
            deg += 1;
            match pw.checked_mul(p as usize) {
                Some(next) => pw = next,
                None => break,
            }
        }
        let factor = spec.local_factor(i + 1, p)?;
        local.push(local_series(&factor.terms, deg));
        prime_index_of[p as usize] = i;
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n;
        let mut e = 0usize;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let b = values[m - 1] * local[prime_index_of[p]][e];
        if b.norm() > cap {
            return Err(MatsumotoError::CoefficientOverflow {
                n,
                magnitude: b.norm(),
            });
        }
        values[n - 1] = b;
    }
    Ok(CoefficientTable {
        spec_name: spec.name.clone(),
        values,
    })
}

/// Partial Euler product over primes p <= p_max, in the half-plane of
/// absolute convergence.
pub fn euler_product_eval(
    spec: &MatsumotoSpec,
    s: Complex64,
    p_max: usize,
) -> Result<Complex64, MatsumotoError> {
    if s.re <= spec.sigma_abs() {
        return Err(MatsumotoError::Domain {
            sigma: s.re,
            needed: spec.sigma_abs(),
        });
    }
    let mut value = Complex64::new(1.0, 0.0);
    for (i, &p) in primes::primes_up_to(p_max).iter().enumerate() {
        let factor = spec.local_factor(i + 1, p)?;
        for t in &factor.terms {
            let denom = Complex64::new(1.0, 0.0)
                - t.a * zeta::real_pow_neg(p as f64, s * t.f as f64);
            if denom.norm() < 1e-12 {
                return Err(MatsumotoError::SingularFactor { prime: p });
            }
            value /= denom;
        }
    }
    Ok(value)
}

/// Truncated Dirichlet series sum_{n<=N} b_n n^{-s}, in the half-plane of
/// absolute convergence.
pub fn series_eval(spec: &MatsumotoSpec, s: Complex64, n_max: usize) -> Result<Complex64, MatsumotoError> {
    if s.re <= spec.sigma_abs() {
        return Err(MatsumotoError::Domain {
            sigma: s.re,
            needed: spec.sigma_abs(),
        });
    }
    let table = dirichlet_coeffs(spec, n_max)?;
    Ok(series_eval_with_table(&table, s))
}

/// Same sum over a precomputed coefficient table.
pub fn series_eval_with_table(table: &CoefficientTable, s: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, &b) in table.values().iter().enumerate() {
        sum += b * zeta::real_pow_neg((i + 1) as f64, s);
    }
    sum
}

/// Empirical tail bound for the truncated series at sigma, from the
/// coefficient growth |b_n| <= C(eps) n^{alpha+beta+eps} with eps = 0.1
/// measured on the generated table.
pub fn series_tail_bound(spec: &MatsumotoSpec, table: &CoefficientTable, sigma: f64) -> f64 {
    let eps = 0.1;
    let exp = spec.alpha + spec.beta + eps;
    let mut c = 1.0f64;
    for (i, b) in table.values().iter().enumerate() {
        c = c.max(b.norm() / ((i + 1) as f64).powf(exp));
    }
    let n = table.n_max() as f64;
    let decay = sigma - exp - 1.0;
    if decay <= 0.0 {
        return f64::INFINITY;
    }
    c * n.powf(-decay) / decay
}

/// Crude tail bound for the partial Euler product truncated at p_max.
pub fn euler_tail_bound(spec: &MatsumotoSpec, value: Complex64, sigma: f64, p_max: usize) -> f64 {
    let decay = sigma - spec.alpha - spec.beta - 1.0;
    if decay <= 0.0 {
        return f64::INFINITY;
    }
    let log_tail = 2.0 * spec.c1 * (p_max as f64).powf(-decay) / decay;
    value.norm() * (log_tail.exp() - 1.0)
}

fn closed_form_eval(form: ClosedForm, s: Complex64) -> Result<Complex64, MatsumotoError> {
    let v = match form {
        ClosedForm::Zeta => zeta::zeta(s)?,
        ClosedForm::ZetaSquared => {
            let z = zeta::zeta(s)?;
            z * z
        }
        ClosedForm::ZetaOf2s => zeta::zeta(2.0 * s)?,
        ClosedForm::DirichletChi4 => dirichlet_chi4_l(s)?,
        ClosedForm::ZetaTimesZeta2s => zeta::zeta(s)? * zeta::zeta(2.0 * s)?,
    };
    Ok(v)
}

/// L(s, chi_4) = 4^{-s} (zeta(s, 1/4) - zeta(s, 3/4)); entire.
pub fn dirichlet_chi4_l(s: Complex64) -> Result<Complex64, MatsumotoError> {
    let a = zeta::hurwitz_zeta(s, 0.25)?;
    let b = zeta::hurwitz_zeta(s, 0.75)?;
    Ok(zeta::real_pow_neg(4.0, s) * (a - b))
}

/// Options for the generic strip evaluation route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationOptions {
    pub x: f64,
    pub target_tol: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            x: 1.0e4,
            target_tol: 1e-3,
        }
    }
}

/// Value of phi(s): closed form when available, otherwise the
/// pole-corrected truncation with its validity heuristic.
pub fn analytic_eval(spec: &MatsumotoSpec, s: Complex64) -> Result<Complex64, MatsumotoError> {
    analytic_eval_with(spec, s, &ContinuationOptions::default())
}

pub fn analytic_eval_with(
    spec: &MatsumotoSpec,
    s: Complex64,
    opts: &ContinuationOptions,
) -> Result<Complex64, MatsumotoError> {
    for p in &spec.poles {
        let d = (s - p.location).norm();
        if d < 1e-8 {
            return Err(MatsumotoError::PoleProximity { distance: d });
        }
    }
    if let Some(form) = spec.closed_form {
        return closed_form_eval(form, s);
    }
    if s.re > spec.sigma_abs() {
        // Absolutely convergent region: direct series with a tail small
        // enough for the target tolerance.
        let decay = s.re - spec.sigma_abs();
        let n = ((10.0 / opts.target_tol).powf(1.0 / (decay + 0.1)).ceil() as usize)
            .clamp(1000, 2_000_000);
        return series_eval(spec, s, n);
    }
    let cutoff = CutoffSpec::default();
    let needed = (cutoff.support_end() * opts.x).ceil() as usize;
    let table = dirichlet_coeffs(spec, needed)?;
    let out = smoothing::continued_eval(spec, &table, s, opts.x, &cutoff)?;
    // Validity heuristic: correction-term estimate must stay below ten
    // times the target tolerance.
    if out.error_estimate > 10.0 * opts.target_tol {
        return Err(MatsumotoError::NoContinuation {
            estimate: out.error_estimate,
        });
    }
    Ok(out.value)
}

/// Condition (v) statistic at x:
/// (1/pi(x)) sum_{p<=x} |sum_{j: f=1} a_j|^2 p^{-2(alpha+beta)}.
pub fn kappa_statistic(spec: &MatsumotoSpec, x: f64) -> Result<f64, MatsumotoError> {
    if x < 2.0 {
        return Err(MatsumotoError::Domain {
            sigma: x,
            needed: 2.0,
        });
    }
    if x > 1.0e7 {
        return Err(MatsumotoError::DeskScale("kappa_statistic caps x at 1e7"));
    }
    let plist = primes::primes_up_to(x as usize);
    let mut sum = 0.0f64;
    for (i, &p) in plist.iter().enumerate() {
        let factor = spec.local_factor(i + 1, p)?;
        let mut inner = Complex64::new(0.0, 0.0);
        for t in &factor.terms {
            if t.f == 1 {
                inner += t.a;
            }
        }
        sum += inner.norm_sqr() * (p as f64).powf(-2.0 * (spec.alpha + spec.beta));
    }
    Ok(sum / plist.len() as f64)
}

/// Mean-square report: (1/T) int_{-T}^{T} |phi(sigma+it)|^2 dt at T, T/2, T/4.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSquareReport {
    pub sigma: f64,
    /// (T, mean-square value) rows, ascending in T.
    pub rows: Vec<(f64, f64)>,
    /// max/min ratio across the rows; slow variation indicates condition (iv).
    pub spread: f64,
}

pub fn mean_square_diagnostic(
    spec: &MatsumotoSpec,
    sigma: f64,
    t_cap: f64,
) -> Result<MeanSquareReport, MatsumotoError> {
    if !(t_cap > 0.0) {
        return Err(MatsumotoError::Domain {
            sigma: t_cap,
            needed: 0.0,
        });
    }
    let min_pole = spec.min_pole_re();
    if !(sigma >= spec.rho && sigma < min_pole) {
        return Err(MatsumotoError::Domain {
            sigma,
            needed: spec.rho,
        });
    }
    if spec.closed_form.is_none() {
        return Err(MatsumotoError::NoStripEvaluation);
    }
    let mut rows = Vec::new();
    for t in [t_cap / 4.0, t_cap / 2.0, t_cap] {
        let q = quad::integrate(
            |tau| {
                let v = analytic_eval(spec, Complex64::new(sigma, tau))
                    .unwrap_or(Complex64::new(f64::NAN, 0.0));
                Complex64::new(v.norm_sqr(), 0.0)
            },
            -t,
            t,
            1e-4 * t,
        );
        if !q.value.re.is_finite() {
            return Err(MatsumotoError::PoleProximity { distance: 0.0 });
        }
        rows.push((t, q.value.re / t));
    }
    let hi = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Ok(MeanSquareReport {
        sigma,
        rows,
        spread: hi / lo,
    })
}

/// Growth report: least-squares slope of log|phi| against log t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    pub slope: f64,
    pub intercept: f64,
    pub passes: bool,
}

pub fn growth_diagnostic(
    spec: &MatsumotoSpec,
    sigma: f64,
    t_samples: &[f64],
) -> Result<GrowthReport, MatsumotoError> {
    if sigma <= spec.rho {
        return Err(MatsumotoError::Domain {
            sigma,
            needed: spec.rho,
        });
    }
    let mut xs = Vec::with_capacity(t_samples.len());
    let mut ys = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        if t <= 0.0 {
            return Err(MatsumotoError::InvalidSpec("t samples must be positive"));
        }
        let v = analytic_eval(spec, Complex64::new(sigma, t))?;
        if v.norm() > 0.0 {
            xs.push(t.ln());
            ys.push(v.norm().ln());
        }
    }
    let (slope, intercept) =
        fitting::linear_fit(&xs, &ys).ok_or(MatsumotoError::DegenerateRegression)?;
    Ok(GrowthReport {
        slope,
        intercept,
        passes: slope <= spec.growth_exponent + 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn builtin_names_resolve() {
        for name in BUILTIN_NAMES {
            let spec = builtin_spec(name).unwrap();
            assert_eq!(spec.name(), name);
            assert!(spec.has_closed_form());
        }
        assert!(matches!(
            builtin_spec("nope"),
            Err(MatsumotoError::UnknownName(_))
        ));
    }

    #[test]
    fn riemann_local_factors_and_coeffs() {
        let spec = builtin_spec("riemann").unwrap();
        let f = spec.local_factor(1, 2).unwrap();
        assert_eq!(f.terms, vec![FactorTerm::real(1.0, 1)]);
        let table = dirichlet_coeffs(&spec, 100).unwrap();
        for n in 1..=100 {
            assert_eq!(table.b(n), c(1.0, 0.0), "b_{n}");
        }
    }

    #[test]
    fn chi4_character_values() {
        let spec = builtin_spec("dirichlet_chi4").unwrap();
        assert_eq!(spec.local_factor(3, 5).unwrap().terms[0].a, c(1.0, 0.0));
        assert_eq!(spec.local_factor(2, 3).unwrap().terms[0].a, c(-1.0, 0.0));
        // chi(2) = 0 encoded as the (0, 1) term.
        let two = spec.local_factor(1, 2).unwrap();
        assert_eq!(two.terms, vec![FactorTerm::real(0.0, 1)]);
    }

    #[test]
    fn zeta_of_2s_coeffs_are_square_indicator() {
        let spec = builtin_spec("zeta_of_2s").unwrap();
        let table = dirichlet_coeffs(&spec, 1000).unwrap();
        for n in 1..=1000usize {
            let root = (n as f64).sqrt().round() as usize;
            let expect = if root * root == n { 1.0 } else { 0.0 };
            assert_eq!(table.b(n), c(expect, 0.0), "b_{n}");
        }
    }

    #[test]
    fn zeta_squared_coeffs_are_divisor_counts() {
        let spec = builtin_spec("zeta_squared").unwrap();
        let table = dirichlet_coeffs(&spec, 10_000).unwrap();
        // Brute-force divisor-count oracle, exact integer comparison.
        for n in 1..=10_000usize {
            let mut d = 0usize;
            let mut i = 1usize;
            while i * i <= n {
                if n % i == 0 {
                    d += if i * i == n { 1 } else { 2 };
                }
                i += 1;
            }
            assert_eq!(table.b(n), c(d as f64, 0.0), "b_{n} vs d(n)");
        }
        assert_eq!(table.b(12), c(6.0, 0.0));
    }

    #[test]
    fn zeta_times_zeta2s_coeffs_count_uv_squared() {
        let spec = builtin_spec("zeta_times_zeta2s").unwrap();
        let table = dirichlet_coeffs(&spec, 50).unwrap();
        for n in 1..=50usize {
            let mut count = 0usize;
            for v in 1..=n {
                if v * v > n {
                    break;
                }
                if n % (v * v) == 0 {
                    count += 1;
                }
            }
            assert_eq!(table.b(n), c(count as f64, 0.0), "b_{n}");
        }
    }

    #[test]
    fn multiplicativity_exhaustive() {
        for name in ["zeta_squared", "dirichlet_chi4", "zeta_times_zeta2s"] {
            let spec = builtin_spec(name).unwrap();
            let table = dirichlet_coeffs(&spec, 1000).unwrap();
            for m in 2..=1000usize {
                for n in 2..=1000 / m {
                    if gcd(m, n) == 1 {
                        let lhs = table.b(m * n);
                        let rhs = table.b(m) * table.b(n);
                        assert!(
                            (lhs - rhs).norm() == 0.0,
                            "{name}: b_{m}*b_{n} != b_{}",
                            m * n
                        );
                    }
                }
            }
        }
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn euler_product_riemann_at_two() {
        let spec = builtin_spec("riemann").unwrap();
        let v = euler_product_eval(&spec, c(2.0, 0.0), 100_000).unwrap();
        let pi2_6 = core::f64::consts::PI * core::f64::consts::PI / 6.0;
        assert!((v - c(pi2_6, 0.0)).norm() < 1e-4);
    }

    #[test]
    fn euler_product_zeta_squared_at_three() {
        let spec = builtin_spec("zeta_squared").unwrap();
        let v = euler_product_eval(&spec, c(3.0, 0.0), 100_000).unwrap();
        let z3 = zeta::zeta(c(3.0, 0.0)).unwrap();
        assert!((v - z3 * z3).norm() < 1e-6);
    }

    #[test]
    fn empty_product_is_one() {
        for name in BUILTIN_NAMES {
            let spec = builtin_spec(name).unwrap();
            assert_eq!(euler_product_eval(&spec, c(4.0, 1.0), 0).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn series_riemann_matches_zeta() {
        let spec = builtin_spec("riemann").unwrap();
        let v = series_eval(&spec, c(2.0, 0.0), 1_000_000).unwrap();
        let z = zeta::zeta(c(2.0, 0.0)).unwrap();
        assert!((v - z).norm() < 1e-6);
    }

    #[test]
    fn series_single_term() {
        let spec = builtin_spec("zeta_times_zeta2s").unwrap();
        assert_eq!(series_eval(&spec, c(5.0, 3.0), 1).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn chi4_series_matches_alternating_oracle() {
        // sum (-1)^k (2k+1)^{-2}; alternating, so the truncation error is
        // below the first omitted term.
        let spec = builtin_spec("dirichlet_chi4").unwrap();
        let v = series_eval(&spec, c(2.0, 0.0), 1_000_000).unwrap();
        let mut oracle = 0.0f64;
        let mut sign = 1.0;
        for k in 0..500_000u64 {
            oracle += sign / ((2 * k + 1) as f64).powi(2);
            sign = -sign;
        }
        assert!((v - c(oracle, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        let spec = builtin_spec("riemann").unwrap();
        assert!(matches!(
            euler_product_eval(&spec, c(0.9, 0.0), 100),
            Err(MatsumotoError::Domain { .. })
        ));
        assert!(matches!(
            series_eval(&spec, c(1.0, 5.0), 100),
            Err(MatsumotoError::Domain { .. })
        ));
    }

    #[test]
    fn euler_and_series_agree_within_tail_bounds() {
        // Deterministic pseudo-random sample of points in (abs+0.4, abs+3].
        for name in BUILTIN_NAMES {
            let spec = builtin_spec(name).unwrap();
            let table = dirichlet_coeffs(&spec, 20_000).unwrap();
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..20 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u1 = (state >> 11) as f64 / (1u64 << 53) as f64;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u2 = (state >> 11) as f64 / (1u64 << 53) as f64;
                let sigma = spec.sigma_abs() + 0.4 + 2.6 * u1;
                let t = -30.0 + 60.0 * u2;
                let s = c(sigma, t);
                let series = series_eval_with_table(&table, s);
                let euler = euler_product_eval(&spec, s, 20_000).unwrap();
                let bound = series_tail_bound(&spec, &table, sigma)
                    + euler_tail_bound(&spec, euler, sigma, 20_000)
                    + 1e-10;
                assert!(
                    (series - euler).norm() <= bound,
                    "{name} at {s}: |diff| = {} > bound {bound}",
                    (series - euler).norm()
                );
            }
        }
    }

    #[test]
    fn kappa_riemann_exactly_one() {
        let spec = builtin_spec("riemann").unwrap();
        for x in [10.0, 100.0, 1e4, 1e6] {
            assert_eq!(kappa_statistic(&spec, x).unwrap(), 1.0);
        }
    }

    #[test]
    fn kappa_zeta_squared_exactly_four() {
        let spec = builtin_spec("zeta_squared").unwrap();
        for x in [10.0, 1000.0] {
            assert_eq!(kappa_statistic(&spec, x).unwrap(), 4.0);
        }
    }

    #[test]
    fn kappa_chi4_small_x() {
        // Primes 2, 3, 5, 7: |chi|^2 = 0, 1, 1, 1 -> 3/4.
        let spec = builtin_spec("dirichlet_chi4").unwrap();
        assert_eq!(kappa_statistic(&spec, 10.0).unwrap(), 0.75);
    }

    #[test]
    fn kappa_desk_scale_cap() {
        let spec = builtin_spec("riemann").unwrap();
        assert!(matches!(
            kappa_statistic(&spec, 2e7),
            Err(MatsumotoError::DeskScale(_))
        ));
    }

    #[test]
    fn analytic_eval_builtin_closed_forms() {
        let riemann = builtin_spec("riemann").unwrap();
        let s = c(0.75, 100.0);
        let a = analytic_eval(&riemann, s).unwrap();
        let z = zeta::zeta(s).unwrap();
        assert_eq!(a, z);

        let sq = builtin_spec("zeta_squared").unwrap();
        let s = c(0.8, 0.0);
        let a = analytic_eval(&sq, s).unwrap();
        let z = zeta::zeta(s).unwrap();
        assert!((a - z * z).norm() < 1e-14);
    }

    #[test]
    fn analytic_eval_pole_proximity() {
        let spec = builtin_spec("riemann").unwrap();
        assert!(matches!(
            analytic_eval(&spec, c(1.0, 1e-9)),
            Err(MatsumotoError::PoleProximity { .. })
        ));
    }

    #[test]
    fn chi4_l_function_at_two_is_catalan_series() {
        let v = dirichlet_chi4_l(c(2.0, 0.0)).unwrap();
        let mut oracle = 0.0f64;
        let mut sign = 1.0;
        for k in 0..2_000_000u64 {
            oracle += sign / ((2 * k + 1) as f64).powi(2);
            sign = -sign;
        }
        assert!((v.re - oracle).abs() < 1e-9, "L(2) = {} vs {oracle}", v.re);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn growth_diagnostic_bounded_region() {
        let spec = builtin_spec("riemann").unwrap();
        let samples: Vec<f64> = (1..=20).map(|i| 10.0 * i as f64).collect();
        let rep = growth_diagnostic(&spec, 2.0, &samples).unwrap();
        assert!(rep.slope.abs() < 0.05, "slope {}", rep.slope);
        assert!(rep.passes);
    }

    #[test]
    fn growth_diagnostic_strip() {
        let spec = builtin_spec("riemann").unwrap();
        let samples: Vec<f64> = (1..=25).map(|i| 40.0 * i as f64).collect();
        let rep = growth_diagnostic(&spec, 0.75, &samples).unwrap();
        assert!(rep.slope < 0.5, "slope {}", rep.slope);
    }

    #[test]
    fn growth_diagnostic_degenerate() {
        let spec = builtin_spec("riemann").unwrap();
        let samples = [50.0, 50.0, 50.0];
        assert!(matches!(
            growth_diagnostic(&spec, 2.0, &samples),
            Err(MatsumotoError::DegenerateRegression)
        ));
    }

    #[test]
    fn mean_square_riemann_strip() {
        let spec = builtin_spec("riemann").unwrap();
        let rep = mean_square_diagnostic(&spec, 0.75, 200.0).unwrap();
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.spread < 2.0, "spread {}", rep.spread);
        assert!(matches!(
            mean_square_diagnostic(&spec, 0.75, 0.0),
            Err(MatsumotoError::Domain { .. })
        ));
    }

    #[test]
    fn spec_invariants_enforced() {
        // rho below alpha+beta+1/2 rejected.
        assert!(MatsumotoSpec::new(
            "bad".to_string(),
            0.0,
            0.0,
            1.0,
            0.3,
            vec![],
            1.0,
            FactorRule::Builtin(Builtin::Riemann),
        )
        .is_err());
        // Pole on the line sigma = rho rejected.
        assert!(MatsumotoSpec::new(
            "bad2".to_string(),
            0.0,
            0.0,
            1.0,
            0.5,
            vec![Pole::simple(c(0.5, 3.0), c(1.0, 0.0))],
            1.0,
            FactorRule::Builtin(Builtin::Riemann),
        )
        .is_err());
    }

    #[test]
    fn condition_bounds_enforced_on_table_specs() {
        // A table spec whose coefficient violates |a| <= p^beta.
        let spec = MatsumotoSpec::new(
            "viol".to_string(),
            0.0,
            0.0,
            1.0,
            0.5,
            vec![],
            1.0,
            FactorRule::Table(vec![vec![FactorTerm::real(3.0, 1)]]),
        )
        .unwrap();
        assert!(matches!(
            spec.local_factor(1, 2),
            Err(MatsumotoError::ConditionViolation { prime: 2, .. })
        ));
        assert!(matches!(
            dirichlet_coeffs(&spec, 10),
            Err(MatsumotoError::ConditionViolation { .. })
        ));
    }
}
