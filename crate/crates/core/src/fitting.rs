//! Least-squares fitting: simple linear regression and complex polynomial
//! fits on scaled coordinates via Householder QR.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

/// Ordinary least squares y = slope x + intercept. None when fewer than
/// two points or the x-variance vanishes.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 1e-300 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Polynomial in the scaled variable (s - center)/scale; scaling keeps the
/// Vandermonde system well conditioned on small rectangles.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    pub center: Complex64,
    pub scale: f64,
    /// coeffs[d] multiplies the scaled variable to the d-th power.
    pub coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let u = (s - self.center) / self.scale;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }
}

/// Least-squares fit of a degree-`degree` polynomial through
/// (points[i], values[i]). Points are centered and scaled internally.
pub fn fit_polynomial(
    points: &[Complex64],
    values: &[Complex64],
    degree: usize,
) -> Option<ComplexPolynomial> {
    let m = points.len();
    let n = degree + 1;
    if m < n || m != values.len() {
        return None;
    }
    let center = points.iter().sum::<Complex64>() / m as f64;
    let scale = points
        .iter()
        .map(|p| (p - center).norm())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    // Column-major Vandermonde in the scaled variable.
    let mut a = vec![Complex64::new(0.0, 0.0); m * n];
    for (i, &p) in points.iter().enumerate() {
        let u = (p - center) / scale;
        let mut pw = Complex64::new(1.0, 0.0);
        for j in 0..n {
            a[j * m + i] = pw;
            pw *= u;
        }
    }
    let mut b = values.to_vec();
    householder_lstsq(&mut a, &mut b, m, n)?;
    Some(ComplexPolynomial {
        center,
        scale,
        coeffs: b[..n].to_vec(),
    })
}

/// In-place complex Householder QR least squares; `a` is column-major
/// m x n, `b` length m. On success b[..n] holds the solution.
fn householder_lstsq(a: &mut [Complex64], b: &mut [Complex64], m: usize, n: usize) -> Option<()> {
    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let col = k * m;
        let mut norm_sq = 0.0f64;
        for i in k..m {
            norm_sq += a[col + i].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm < 1e-300 {
            return None; // rank deficient
        }
        let x0 = a[col + k];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * norm
        } else {
            Complex64::new(-norm, 0.0)
        };
        // v = x - alpha e1, stored in place of the column tail.
        a[col + k] = x0 - alpha;
        let mut v_norm_sq = 0.0f64;
        for i in k..m {
            v_norm_sq += a[col + i].norm_sqr();
        }
        if v_norm_sq < 1e-300 {
            a[col + k] = alpha;
            continue;
        }
        // Apply H = I - 2 v v^H / |v|^2 to remaining columns and to b.
        for j in (k + 1)..n {
            let cj = j * m;
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..m {
                dot += a[col + i].conj() * a[cj + i];
            }
            let coef = 2.0 * dot / v_norm_sq;
            for i in k..m {
                let vi = a[col + i];
                a[cj + i] -= coef * vi;
            }
        }
        let mut dot = Complex64::new(0.0, 0.0);
        for i in k..m {
            dot += a[col + i].conj() * b[i];
        }
        let coef = 2.0 * dot / v_norm_sq;
        for i in k..m {
            let vi = a[col + i];
            b[i] -= coef * vi;
        }
        a[col + k] = alpha; // R diagonal
    }
    // Back substitution on the upper-triangular R.
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in (k + 1)..n {
            acc -= a[j * m + k] * b[j];
        }
        let diag = a[k * m + k];
        if diag.norm() < 1e-300 {
            return None;
        }
        b[k] = acc / diag;
    }
    Some(())
}
