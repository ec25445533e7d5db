//! Deterministic reductions, rational approximation and time grids.

use crate::error::{Error, Result};
use crate::qcore::C64;

/// Pairwise (cascade) summation in a fixed tree order, so the result depends
/// only on the input sequence and never on how it was produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        n if n <= 8 => values.iter().sum(),
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

pub fn pairwise_sum_complex(values: &[C64]) -> C64 {
    match values.len() {
        0 => C64::new(0.0, 0.0),
        n if n <= 8 => values.iter().sum(),
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum_complex(l) + pairwise_sum_complex(r)
        }
    }
}

/// Best rational approximation `p/q` of `x ≥ 0` by continued-fraction
/// convergents: the first convergent with `|x − p/q| ≤ tol · max(1, |x|)` and
/// `q ≤ max_den`, or `None`.
pub fn rational_fit(x: f64, tol: f64, max_den: u64) -> Option<(u64, u64)> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let scale = x.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        if a > u64::MAX as f64 / 2.0 {
            return None;
        }
        let a = a as u64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol * scale {
            return Some((p2, q2));
        }
        let frac = rem - a as f64;
        if frac <= 0.0 {
            return None;
        }
        rem = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Evenly spaced grid `start, start + step, …` up to and including `stop`
/// (with a relative slack of 1e-9 steps for the last point).
pub fn step_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::validation(format!(
            "invalid grid start={start} stop={stop} step={step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// `count` points from `start` to `stop` inclusive; the last point is exactly
/// `stop`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::validation(format!(
            "invalid grid start={start} stop={stop} count={count}"
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let span = stop - start;
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + span * (i as f64 / last)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_exact_data() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499500.0);
    }

    #[test]
    fn rational_fit_finds_simple_ratios() {
        assert_eq!(rational_fit(2.0, 1e-9, 1_000_000), Some((2, 1)));
        assert_eq!(rational_fit(0.3 / 0.1, 1e-9, 1_000_000), Some((3, 1)));
        assert_eq!(rational_fit(0.75, 1e-9, 1_000_000), Some((3, 4)));
        assert_eq!(rational_fit(355.0 / 113.0, 1e-12, 1_000_000), Some((355, 113)));
        // π is not within 1e-9 of anything with a small denominator
        assert!(rational_fit(std::f64::consts::PI, 1e-9, 1_000).is_none());
    }

    #[test]
    fn grids() {
        let g = step_grid(0.0, 200.0, 0.05).unwrap();
        assert_eq!(g.len(), 4001);
        assert!((g[4000] - 200.0).abs() < 1e-9);
        let l = linspace(0.0, std::f64::consts::FRAC_PI_4, 11).unwrap();
        assert_eq!(l[10], std::f64::consts::FRAC_PI_4);
        assert!(step_grid(1.0, 0.0, 0.1).is_err());
        assert!(linspace(0.0, 1.0, 0).is_err());
    }
}
