//! Prime sieves shared by coefficient generation, the condition-(v)
//! statistic, and the random phase model.

use alloc::vec;
use alloc::vec::Vec;

/// Primes up to and including `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: usize) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            out.push(n as u32);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for 0..=limit; entries 0 and 1 are 0.
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for n in 2..=limit {
        if spf[n] == 0 {
            let mut m = n;
            while m <= limit {
                if spf[m] == 0 {
                    spf[m] = n as u32;
                }
                m += n;
            }
        }
    }
    spf
}

/// pi(x): number of primes <= x.
pub fn prime_count(x: usize) -> usize {
    if x < 2 {
        return 0;
    }
    let mut composite = vec![false; x + 1];
    let mut count = 0usize;
    for n in 2..=x {
        if !composite[n] {
            count += 1;
            let mut m = n * n;
            while m <= x {
                composite[m] = true;
                m += n;
            }
        }
    }
    count
}
