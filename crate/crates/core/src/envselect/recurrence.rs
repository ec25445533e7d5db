use std::f64::consts::PI;

use super::{z_of_t, EnvironmentSpec};
use crate::numerics::{gcd, lcm, rational_fit};
use crate::qcore::{C64, ORACLE_TOL};

/// Relative tolerance of the coupling-ratio fit.
const RATIO_TOL: f64 = 1e-9;
const MAX_DENOMINATOR: u64 = 1_000_000;

/// Exact recurrence time of `z(t)` for commensurable couplings.
///
/// When every `g_k` is an integer multiple of a common `g₀` (found by fitting
/// each ratio `g_k / g_1` with continued fractions), each factor of `z` has
/// period `π/g_k` and `z(π/g₀) = 1`. The candidate is returned only if
/// `|z(π/g₀) − 1| ≤ 1e-10` holds numerically; otherwise `None`.
pub fn recurrence_time(spec: &EnvironmentSpec) -> Option<f64> {
    let g = spec.couplings();
    let reference = g[0];
    let mut fits = Vec::with_capacity(g.len());
    for &gk in &g {
        fits.push(rational_fit(gk / reference, RATIO_TOL, MAX_DENOMINATOR)?);
    }
    let common_den = fits.iter().try_fold(1u64, |acc, &(_, q)| lcm(acc, q))?;
    if common_den > MAX_DENOMINATOR {
        return None;
    }
    let multiples: Vec<u64> = fits
        .iter()
        .map(|&(p, q)| p * (common_den / q))
        .collect();
    let common = multiples.iter().fold(0, |acc, &m| gcd(acc, m));
    if common == 0 {
        return None;
    }
    let g0 = reference * common as f64 / common_den as f64;
    let period = PI / g0;
    ((z_of_t(spec, period) - C64::new(1.0, 0.0)).norm() <= ORACLE_TOL).then_some(period)
}

#[cfg(test)]
mod tests {
    use super::super::EnvAtom;
    use super::*;

    fn spec(g: &[f64], p: f64) -> EnvironmentSpec {
        EnvironmentSpec::new(g.iter().map(|&g| EnvAtom::with_polarization(g, p).unwrap()).collect()).unwrap()
    }

    #[test]
    fn harmonic_couplings_recur() {
        let s = spec(&[0.1, 0.2, 0.3], 0.3);
        let t = recurrence_time(&s).unwrap();
        assert!((t - PI / 0.1).abs() < 1e-9);
        assert!((z_of_t(&s, t) - C64::new(1.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn single_atom() {
        let s = spec(&[1.0], 0.0);
        let t = recurrence_time(&s).unwrap();
        assert!((t - PI).abs() < 1e-12);
    }

    #[test]
    fn fractional_ratio_uses_common_divisor() {
        // 0.4 and 0.6 share g0 = 0.2
        let s = spec(&[0.4, 0.6], -0.5);
        let t = recurrence_time(&s).unwrap();
        assert!((t - PI / 0.2).abs() < 1e-9);
    }

    #[test]
    fn incommensurable_pair_is_absent() {
        assert_eq!(recurrence_time(&spec(&[1.0, 2f64.sqrt()], 0.0)), None);
        assert_eq!(recurrence_time(&spec(&[1.0, std::f64::consts::E], 0.2)), None);
    }
}
