//! Sample statistics: Kolmogorov–Smirnov distances and a product-box
//! discrepancy for two-dimensional equidistribution probes.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    v
}

/// KS distance of a sample in [0, 1) to the uniform distribution.
/// An empty sample is maximally far by convention (distance 1).
pub fn ks_uniform(sample: &[f64]) -> f64 {
    if sample.is_empty() {
        return 1.0;
    }
    let xs = sorted(sample);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let hi = ((i + 1) as f64 / n - x).abs();
        let lo = (x - i as f64 / n).abs();
        d = d.max(hi).max(lo);
    }
    d
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 1.0;
    }
    let xs = sorted(a);
    let ys = sorted(b);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        // Advance past ties together so equal values never contribute.
        if xs[i] < ys[j] {
            i += 1;
        } else if ys[j] < xs[i] {
            j += 1;
        } else {
            let v = xs[i];
            while i < xs.len() && xs[i] == v {
                i += 1;
            }
            while j < ys.len() && ys[j] == v {
                j += 1;
            }
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Product-box discrepancy of points in [0,1)^2: sup over boxes
/// [0,a) x [0,b) of |count/n - a b|. The sup is attained in the limit at
/// sample-induced corners, so both one-sided counts are evaluated at each.
pub fn box_discrepancy_2d(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    if n == 0 {
        return 1.0;
    }
    let mut ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let rank_of = |y: f64| -> usize { ys.partition_point(|&v| v < y) };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| points[i].0.partial_cmp(&points[j].0).expect("finite"));

    let mut a_candidates: Vec<f64> = order.iter().map(|&i| points[i].0).collect();
    a_candidates.push(1.0);
    a_candidates.dedup();

    // counts[r] = inserted points with y-rank r.
    let mut counts = vec![0u32; n];
    let nf = n as f64;
    let mut disc = 0.0f64;
    let mut idx = 0usize;
    let sweep = |counts: &[u32], a: f64, disc: &mut f64| {
        let mut cum = 0u32;
        for (r, &cnt) in counts.iter().enumerate() {
            let below = f64::from(cum) / nf; // count with y < ys[r]
            cum += cnt;
            let upto = f64::from(cum) / nf; // limit b -> ys[r]+
            let area = a * ys[r];
            *disc = disc.max((below - area).abs()).max((upto - area).abs());
        }
        // Full b-range corner (b -> 1).
        *disc = disc.max((f64::from(cum) / nf - a).abs());
    };
    for &a in &a_candidates {
        // Boxes [0, a): strict in x.
        while idx < n && points[order[idx]].0 < a {
            counts[rank_of(points[order[idx]].1)] += 1;
            idx += 1;
        }
        sweep(&counts, a, &mut disc);
        // Limit a' -> a+ : include the points with x == a.
        let before = idx;
        while idx < n && points[order[idx]].0 == a {
            counts[rank_of(points[order[idx]].1)] += 1;
            idx += 1;
        }
        if idx != before {
            sweep(&counts, a, &mut disc);
        }
    }
    disc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_uniform_extremes() {
        assert_eq!(ks_uniform(&[]), 1.0);
        // A single point near the middle has distance >= 1/2.
        let d = ks_uniform(&[0.5]);
        assert!((d - 0.5).abs() < 1e-12);
        // Perfectly stratified sample has distance 1/(2n) at midpoints.
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!(ks_uniform(&xs) <= 0.5 / 100.0 + 1e-12);
    }

    #[test]
    fn ks_uniform_shifted_mass() {
        // All mass in [0, 1/2]: distance ~ 1/2.
        let xs: Vec<f64> = (0..1000).map(|i| 0.5 * (i as f64 + 0.5) / 1000.0).collect();
        assert!((ks_uniform(&xs) - 0.5).abs() < 2e-3);
    }

    #[test]
    fn ks_two_sample_identical_and_disjoint() {
        let a = [0.1, 0.4, 0.7];
        let b = [0.7, 0.1, 0.4];
        assert!(ks_two_sample(&a, &b).abs() < 1e-12);
        let c = [0.8, 0.9, 0.95];
        let d = ks_two_sample(&a, &c);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_two_sample_matches_brute_force() {
        // Brute-force oracle: sup over all thresholds of |F_a - F_b|.
        let a = [0.12, 0.33, 0.44, 0.72, 0.9, 0.18];
        let b = [0.2, 0.3, 0.5, 0.55, 0.61];
        let fast = ks_two_sample(&a, &b);
        let mut slow = 0.0f64;
        let mut all: alloc::vec::Vec<f64> = a.iter().chain(b.iter()).copied().collect();
        all.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for &t in &all {
            let fa = a.iter().filter(|&&x| x <= t).count() as f64 / a.len() as f64;
            let fb = b.iter().filter(|&&x| x <= t).count() as f64 / b.len() as f64;
            slow = slow.max((fa - fb).abs());
        }
        assert!((fast - slow).abs() < 1e-12);
    }

    #[test]
    fn discrepancy_of_regular_grid_is_small() {
        let mut pts = Vec::new();
        let m = 32;
        for i in 0..m {
            for j in 0..m {
                pts.push((
                    (i as f64 + 0.5) / m as f64,
                    (j as f64 + 0.5) / m as f64,
                ));
            }
        }
        let d = box_discrepancy_2d(&pts);
        assert!(d < 0.04, "grid discrepancy {d}");
    }

    #[test]
    fn discrepancy_of_clustered_points_is_large() {
        let pts: Vec<(f64, f64)> = (0..100).map(|i| (0.01, 0.01 + 1e-6 * i as f64)).collect();
        let d = box_discrepancy_2d(&pts);
        assert!(d > 0.9, "clustered discrepancy {d}");
    }

    #[test]
    fn discrepancy_matches_direct_oracle() {
        // Direct O(n^2 m) oracle over the same corner candidates.
        let pts = [
            (0.11, 0.62),
            (0.43, 0.17),
            (0.58, 0.91),
            (0.77, 0.35),
            (0.29, 0.83),
            (0.94, 0.08),
            (0.5, 0.5),
        ];
        let fast = box_discrepancy_2d(&pts);
        let mut corners_a: Vec<f64> = pts.iter().map(|p| p.0).collect();
        corners_a.push(1.0);
        let mut corners_b: Vec<f64> = pts.iter().map(|p| p.1).collect();
        corners_b.push(1.0);
        let n = pts.len() as f64;
        let mut slow = 0.0f64;
        for &a in &corners_a {
            for &b in &corners_b {
                for (da, db) in [(0.0, 0.0), (1e-9, 1e-9), (0.0, 1e-9), (1e-9, 0.0)] {
                    let (aa, bb) = (a - da, b - db);
                    let cnt = pts.iter().filter(|p| p.0 < aa && p.1 < bb).count() as f64;
                    slow = slow.max((cnt / n - aa * bb).abs());
                }
            }
        }
        assert!((fast - slow).abs() < 1e-6, "fast {fast} slow {slow}");
    }

    #[test]
    fn mean_and_variance() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert!((mean(&xs) - 2.5).abs() < 1e-12);
        assert!((variance(&xs) - 5.0 / 3.0).abs() < 1e-12);
    }
}
