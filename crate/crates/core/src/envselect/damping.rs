use std::io::Write;

use rand::distributions::Open01;
use rand::Rng;
use rayon::prelude::*;

use super::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sum, pairwise_sum_complex};
use crate::qcore::C64;
use crate::seed;

fn factor(g: f64, polarization: f64, t: f64) -> C64 {
    let (s, c) = (2.0 * g * t).sin_cos();
    C64::new(c, polarization * s)
}

/// `z(t) = Π_k [cos 2g_k t + i(|α_k|² − |β_k|²) sin 2g_k t]`.
pub fn z_of_t(spec: &EnvironmentSpec, t: f64) -> C64 {
    spec.atoms()
        .iter()
        .map(|a| factor(a.coupling(), a.polarization(), t))
        .product()
}

/// Long-time value of `⟨|z|²⟩`: `Π_k (1 + γ_k²)/2`.
pub fn predicted_mean_abs_sq(spec: &EnvironmentSpec) -> f64 {
    spec.atoms()
        .iter()
        .map(|a| (1.0 + a.gamma() * a.gamma()) / 2.0)
        .product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZSummary {
    pub mean_z: C64,
    pub mean_abs_sq: f64,
    /// `1 / min g_k`, the longest single-atom decoherence time.
    pub burn_in: f64,
    /// Largest `|z|` over grid points with `t ≥ burn_in`; `None` when the grid
    /// ends before the burn-in.
    pub max_abs_after_burn_in: Option<f64>,
}

/// Samples of `z(t)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ZTrace {
    pub times: Vec<f64>,
    pub values: Vec<C64>,
    pub summary: ZSummary,
}

impl ZTrace {
    pub const CSV_HEADER: &'static str = "t,re_z,im_z,abs_z";

    /// Rows `t,re_z,im_z,abs_z` with 17 significant digits, LF line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for (t, z) in self.times.iter().zip(&self.values) {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", t, z.re, z.im, z.norm())?;
        }
        Ok(())
    }

    /// Largest `|z|` over samples with `t` in `[from, to]`.
    pub fn max_abs_between(&self, from: f64, to: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.values)
            .filter(|(&t, _)| t >= from && t <= to)
            .map(|(_, z)| z.norm())
            .reduce(f64::max)
    }

    /// Mean of `|z|²` over samples with `t` in `[from, to]`.
    pub fn mean_abs_sq_between(&self, from: f64, to: f64) -> Option<f64> {
        let v: Vec<f64> = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(&t, _)| t >= from && t <= to)
            .map(|(_, z)| z.norm_sqr())
            .collect();
        (!v.is_empty()).then(|| pairwise_sum(&v) / v.len() as f64)
    }
}

/// Samples `z` on an ascending grid and summarizes the trace.
pub fn ztrace(spec: &EnvironmentSpec, t_grid: &[f64]) -> Result<ZTrace> {
    if t_grid.is_empty() {
        return Err(Error::validation("time grid is empty"));
    }
    if t_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::validation("time grid must be sorted ascending"));
    }
    let values: Vec<C64> = t_grid.par_iter().map(|&t| z_of_t(spec, t)).collect();
    let abs_sq: Vec<f64> = values.iter().map(|z| z.norm_sqr()).collect();
    let n = values.len() as f64;
    let burn_in = 1.0 / spec.min_coupling();
    let max_abs_after_burn_in = t_grid
        .iter()
        .zip(&values)
        .filter(|(&t, _)| t >= burn_in)
        .map(|(_, z)| z.norm())
        .reduce(f64::max);
    let summary = ZSummary {
        mean_z: pairwise_sum_complex(&values) / n,
        mean_abs_sq: pairwise_sum(&abs_sq) / n,
        burn_in,
        max_abs_after_burn_in,
    };
    Ok(ZTrace {
        times: t_grid.to_vec(),
        values,
        summary,
    })
}

/// Sample averages of `z` and `|z|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZStats {
    pub mean_z: C64,
    pub mean_abs_sq: f64,
    /// Standard error of `mean_z`, `√((⟨|z|²⟩ − |⟨z⟩|²)/n)`.
    pub std_error: f64,
    pub samples: usize,
}

fn summarize(values: &[C64]) -> ZStats {
    let n = values.len() as f64;
    let mean_z = pairwise_sum_complex(values) / n;
    let abs_sq: Vec<f64> = values.iter().map(|z| z.norm_sqr()).collect();
    let mean_abs_sq = pairwise_sum(&abs_sq) / n;
    let variance = (mean_abs_sq - mean_z.norm_sqr()).max(0.0);
    ZStats {
        mean_z,
        mean_abs_sq,
        std_error: (variance / n).sqrt(),
        samples: values.len(),
    }
}

/// Long-time averages of `z(t)` over the uniform grid `t_i = i·T/n`,
/// `i = 1..=n`. For incommensurable couplings and large `T`, `mean_z → 0` and
/// `mean_abs_sq → Π (1 + γ_k²)/2`.
pub fn z_stats(spec: &EnvironmentSpec, horizon: f64, sample_count: usize) -> Result<ZStats> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::validation(format!("horizon {horizon} must be positive")));
    }
    if sample_count == 0 {
        return Err(Error::validation("sample_count must be at least 1"));
    }
    let step = horizon / sample_count as f64;
    let values: Vec<C64> = (1..=sample_count)
        .into_par_iter()
        .map(|i| z_of_t(spec, i as f64 * step))
        .collect();
    Ok(summarize(&values))
}

/// Ensemble averages of `z(t)` at a fixed time over couplings redrawn from
/// U(0, 1) for every sample, with fixed per-atom polarizations. Draw `i` uses
/// its own substream of `seed`.
pub fn z_ensemble_stats(polarizations: &[f64], t: f64, draws: usize, root_seed: u64) -> Result<ZStats> {
    if polarizations.is_empty() {
        return Err(Error::validation("environment needs at least one atom"));
    }
    if draws == 0 {
        return Err(Error::validation("draws must be at least 1"));
    }
    if let Some(p) = polarizations.iter().find(|p| !(-1.0..=1.0).contains(*p)) {
        return Err(Error::validation(format!("polarization {p} outside [-1, 1]")));
    }
    let values: Vec<C64> = (0..draws as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::substream(root_seed, "z_ensemble", i);
            polarizations
                .iter()
                .map(|&p| factor(rng.sample(Open01), p, t))
                .product()
        })
        .collect();
    Ok(summarize(&values))
}
