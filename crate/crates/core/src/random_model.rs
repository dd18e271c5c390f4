//! Random multiplicative phases: independent uniform unit-circle values
//! omega(p) per prime, extended multiplicatively to omega(n), and the
//! random truncated model phi_X(s, omega) compared against the zero-shift
//! ensemble.
//!
//! Randomness comes from ChaCha8 (a counter-based stream cipher generator)
//! seeded with 64-bit seeds, so every report is reproducible across
//! platforms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};

#[allow(unused_imports)]
use num_traits::Float;

use crate::matsumoto::{CoefficientTable, MatsumotoSpec};
use crate::primes;
use crate::smoothing::{self, Corrector, CutoffSpec, SmoothingError};
use crate::stats;
use crate::zeros::ZeroTable;

#[derive(Debug, Clone, PartialEq)]
pub enum RandomModelError {
    EmptyPrimeList,
    DuplicatePrime { prime: u32 },
    /// omega(n) requested for an n with a prime factor outside the
    /// assignment.
    MissingPrime { prime: u32 },
    EmptySample,
    InsufficientZeroTable { needed: usize, have: usize },
    Smoothing(SmoothingError),
}

impl fmt::Display for RandomModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RandomModelError::EmptyPrimeList => write!(f, "empty prime list"),
            RandomModelError::DuplicatePrime { prime } => {
                write!(f, "duplicate prime {prime} in phase assignment")
            }
            RandomModelError::MissingPrime { prime } => {
                write!(f, "prime factor {prime} not covered by the phase assignment")
            }
            RandomModelError::EmptySample => write!(f, "sample count must be >= 1"),
            RandomModelError::InsufficientZeroTable { needed, have } => {
                write!(f, "zero table covers {have} ordinates, need {needed}")
            }
            RandomModelError::Smoothing(e) => write!(f, "smoothing: {e}"),
        }
    }
}

impl core::error::Error for RandomModelError {}

impl From<SmoothingError> for RandomModelError {
    fn from(e: SmoothingError) -> Self {
        RandomModelError::Smoothing(e)
    }
}

/// Phases omega(p) = e^{i theta_p}, stored as angles so the unit modulus
/// is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment {
    seed: u64,
    primes: Vec<u32>,
    angles: Vec<f64>,
}

/// Uniform [0, 1) from the top 53 bits of a u64.
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent uniform phases for the given primes, reproducible from the
/// seed. The angle for each prime is drawn in list order.
pub fn sample_phases(seed: u64, prime_list: &[u32]) -> Result<PhaseAssignment, RandomModelError> {
    if prime_list.is_empty() {
        return Err(RandomModelError::EmptyPrimeList);
    }
    let mut seen = prime_list.to_vec();
    seen.sort_unstable();
    for w in seen.windows(2) {
        if w[0] == w[1] {
            return Err(RandomModelError::DuplicatePrime { prime: w[0] });
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let angles = prime_list
        .iter()
        .map(|_| 2.0 * core::f64::consts::PI * unit_f64(rng.next_u64()))
        .collect();
    Ok(PhaseAssignment {
        seed,
        primes: prime_list.to_vec(),
        angles,
    })
}

impl PhaseAssignment {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    fn angle_of(&self, p: u32) -> Option<f64> {
        self.primes
            .iter()
            .position(|&q| q == p)
            .map(|i| self.angles[i])
    }

    /// omega(p) for an assigned prime.
    pub fn omega_p(&self, p: u32) -> Result<Complex64, RandomModelError> {
        let theta = self
            .angle_of(p)
            .ok_or(RandomModelError::MissingPrime { prime: p })?;
        let (sin, cos) = theta.sin_cos();
        Ok(Complex64::new(cos, sin))
    }

    /// Multiplicative extension omega(n) = prod_p omega(p)^{nu(n;p)},
    /// with omega(1) = 1; computed through the accumulated angle so the
    /// modulus stays 1.
    pub fn omega_n(&self, n: u64) -> Result<Complex64, RandomModelError> {
        if n == 0 {
            return Err(RandomModelError::MissingPrime { prime: 0 });
        }
        let mut m = n;
        let mut theta = 0.0f64;
        for (&p, &ang) in self.primes.iter().zip(self.angles.iter()) {
            let p64 = p as u64;
            while m % p64 == 0 {
                theta += ang;
                m /= p64;
            }
            if m == 1 {
                break;
            }
        }
        if m != 1 {
            // Remaining cofactor has a prime factor outside the assignment;
            // report its smallest prime divisor.
            let mut d = 2u64;
            while d * d <= m && m % d != 0 {
                d += 1;
            }
            let p = if d * d > m { m } else { d };
            return Err(RandomModelError::MissingPrime { prime: p as u32 });
        }
        let (sin, cos) = theta.sin_cos();
        Ok(Complex64::new(cos, sin))
    }

    /// omega(n) for all n = 1..=n_max via the smallest-prime-factor sieve.
    pub fn omega_table(&self, n_max: usize) -> Result<Vec<Complex64>, RandomModelError> {
        let spf = primes::smallest_prime_factors(n_max);
        let mut angle = vec![0.0f64; n_max + 1];
        for n in 2..=n_max {
            let p = spf[n] as u32;
            let ang = self
                .angle_of(p)
                .ok_or(RandomModelError::MissingPrime { prime: p })?;
            angle[n] = angle[n / p as usize] + ang;
        }
        Ok((1..=n_max)
            .map(|n| {
                let (sin, cos) = angle[n].sin_cos();
                Complex64::new(cos, sin)
            })
            .collect())
    }
}

/// The random truncated model phi_X(s, omega) = sum b_n omega(n) psi(n/X) n^{-s}.
pub fn phi_x_random(
    table: &CoefficientTable,
    s: Complex64,
    x: f64,
    c: &CutoffSpec,
    phases: &PhaseAssignment,
) -> Result<Complex64, RandomModelError> {
    let needed = (c.support_end() * x).floor() as usize;
    let omega = phases.omega_table(needed)?;
    Ok(smoothing::phi_x_weighted(table, s, x, c, Some(&omega))?)
}

/// Two-sample comparison of the zero-shift ensemble against the random
/// model at a fixed strip point.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub s0: Complex64,
    pub h: f64,
    pub n: usize,
    pub x: f64,
    pub seed: u64,
    /// phi(s0 + i h gamma_k) for k = N..2N via the pole-corrected truncation.
    pub sample_a: Vec<Complex64>,
    /// phi_X(s0, omega_j) over `sample_count` seeded draws.
    pub sample_b: Vec<Complex64>,
    pub ks_re: f64,
    pub ks_im: f64,
    pub ks_mod: f64,
    pub mean_a: Complex64,
    pub mean_b: Complex64,
    /// Scatter E|z - mean|^2 (sample variance of the complex values).
    pub var_a: f64,
    pub var_b: f64,
    /// Orthogonality prediction sum_{n>=2} |b_n psi(n/X)|^2 n^{-2 sigma0}.
    pub predicted_variance: f64,
    /// Truncation budget: mean error estimate of the sample-A evaluations.
    pub mean_error_estimate: f64,
}

fn complex_mean(zs: &[Complex64]) -> Complex64 {
    if zs.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    zs.iter().sum::<Complex64>() / zs.len() as f64
}

fn complex_scatter(zs: &[Complex64]) -> f64 {
    if zs.len() < 2 {
        return 0.0;
    }
    let m = complex_mean(zs);
    zs.iter().map(|z| (z - m).norm_sqr()).sum::<f64>() / (zs.len() as f64 - 1.0)
}

/// Orthogonality second moment of the random model around its mean.
pub fn predicted_variance(table: &CoefficientTable, sigma: f64, x: f64, c: &CutoffSpec) -> f64 {
    let needed = ((c.support_end() * x).floor() as usize).min(table.n_max());
    let mut sum = 0.0f64;
    for n in 2..=needed {
        let w = c.psi(n as f64 / x);
        if w == 0.0 {
            continue;
        }
        let term = table.b(n).norm() * w;
        sum += term * term * (n as f64).powf(-2.0 * sigma);
    }
    sum
}

#[allow(clippy::too_many_arguments)]
pub fn ensemble_compare(
    spec: &MatsumotoSpec,
    table: &CoefficientTable,
    zeros: &ZeroTable,
    s0: Complex64,
    h: f64,
    n: usize,
    x: f64,
    c: &CutoffSpec,
    sample_count: usize,
    seed: u64,
) -> Result<EnsembleReport, RandomModelError> {
    if sample_count == 0 {
        return Err(RandomModelError::EmptySample);
    }
    if zeros.k_max() < 2 * n || n == 0 {
        return Err(RandomModelError::InsufficientZeroTable {
            needed: 2 * n.max(1),
            have: zeros.k_max(),
        });
    }
    let corrector = Corrector::new(*c);
    let mut sample_a = Vec::with_capacity(n + 1);
    let mut err_sum = 0.0f64;
    for k in n..=2 * n {
        let s = s0 + Complex64::new(0.0, h * zeros.gamma(k));
        let out = corrector.continued_eval(spec, table, s, x)?;
        sample_a.push(out.value);
        err_sum += out.error_estimate;
    }
    let needed = (c.support_end() * x).floor() as usize;
    let prime_list = primes::primes_up_to(needed);
    let mut sample_b = Vec::with_capacity(sample_count);
    for j in 0..sample_count {
        let phases = sample_phases(seed.wrapping_add(j as u64), &prime_list)?;
        sample_b.push(phi_x_random(table, s0, x, c, &phases)?);
    }
    let re_a: Vec<f64> = sample_a.iter().map(|z| z.re).collect();
    let re_b: Vec<f64> = sample_b.iter().map(|z| z.re).collect();
    let im_a: Vec<f64> = sample_a.iter().map(|z| z.im).collect();
    let im_b: Vec<f64> = sample_b.iter().map(|z| z.im).collect();
    let mod_a: Vec<f64> = sample_a.iter().map(|z| z.norm()).collect();
    let mod_b: Vec<f64> = sample_b.iter().map(|z| z.norm()).collect();
    Ok(EnsembleReport {
        s0,
        h,
        n,
        x,
        seed,
        ks_re: stats::ks_two_sample(&re_a, &re_b),
        ks_im: stats::ks_two_sample(&im_a, &im_b),
        ks_mod: stats::ks_two_sample(&mod_a, &mod_b),
        mean_a: complex_mean(&sample_a),
        mean_b: complex_mean(&sample_b),
        var_a: complex_scatter(&sample_a),
        var_b: complex_scatter(&sample_b),
        predicted_variance: predicted_variance(table, s0.re, x, c),
        mean_error_estimate: err_sum / (n + 1) as f64,
        sample_a,
        sample_b,
    })
}
