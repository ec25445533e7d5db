//! Information bookkeeping for density matrices, in nats.
//!
//! The information of a state on a `d`-dimensional space is
//! `I = ln d − S(ρ)` with `S(ρ) = −Tr ρ ln ρ`: a pure state carries the full
//! `ln d`, a maximally mixed one carries nothing. For a partition into blocks
//! `k`, `I_k` is the information of each reduced state, their sum is the
//! aggregate `𝓘`, and `I_c = I − 𝓘` is the information held only in
//! correlations between blocks.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{
    evolve_exact, DensityMatrix, HermitianOperator, Partition, PureState, Reducible, Register, C64,
    STRUCTURAL_TOL,
};

/// Eigenvalues below this contribute nothing to the entropy (`0 ln 0 = 0`).
const ZERO_EIGENVALUE: f64 = 1e-14;

/// Von Neumann entropy `−Σ λ ln λ` from a spectrum.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|&&l| l > ZERO_EIGENVALUE)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

pub fn entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// `I = ln d − S(ρ)`.
pub fn info_total(rho: &DensityMatrix) -> f64 {
    (rho.dim() as f64).ln() - entropy(rho)
}

/// Anything whose information content and reductions can be computed.
pub trait InfoSource: Reducible {
    /// `I` of the whole state.
    fn total_information(&self) -> f64;
}

impl InfoSource for PureState {
    fn total_information(&self) -> f64 {
        (self.dim() as f64).ln()
    }
}

impl InfoSource for DensityMatrix {
    fn total_information(&self) -> f64 {
        info_total(self)
    }
}

/// Information ledger of one state across one partition.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoReport {
    pub total: f64,
    pub per_block: Vec<f64>,
    pub aggregate: f64,
    pub correlation: f64,
    pub partition: Partition,
}

impl InfoReport {
    /// CSV header for a time series over a partition with `blocks` blocks:
    /// `t,I_total,I_block_1,…,I_block_n,I_aggregate,I_corr`.
    pub fn csv_header(blocks: usize) -> String {
        let mut h = String::from("t,I_total");
        for k in 1..=blocks {
            h.push_str(&format!(",I_block_{k}"));
        }
        h.push_str(",I_aggregate,I_corr");
        h
    }

    pub fn write_csv_row<W: Write>(&self, t: f64, mut out: W) -> std::io::Result<()> {
        write!(out, "{:.16e},{:.16e}", t, self.total)?;
        for i in &self.per_block {
            write!(out, ",{:.16e}", i)?;
        }
        writeln!(out, ",{:.16e},{:.16e}", self.aggregate, self.correlation)
    }
}

pub fn info_report<S: InfoSource>(source: &S, partition: &Partition) -> Result<InfoReport> {
    partition.check(source.register())?;
    let total = source.total_information();
    let per_block = partition
        .blocks()
        .iter()
        .map(|block| source.partial_trace(block).map(|rho| info_total(&rho)))
        .collect::<Result<Vec<_>>>()?;
    let aggregate: f64 = per_block.iter().sum();
    Ok(InfoReport {
        total,
        per_block,
        aggregate,
        correlation: total - aggregate,
        partition: partition.clone(),
    })
}

/// Largest change of `I` along unitary evolution under `h`, sampled at
/// `t_samples`. Unitary evolution preserves the spectrum, so this should stay
/// at rounding level.
pub fn info_conservation_check(h: &HermitianOperator, psi0: &PureState, t_samples: &[f64]) -> Result<f64> {
    let initial = info_total(&psi0.density());
    let mut worst: f64 = 0.0;
    for &t in t_samples {
        let psi = evolve_exact(h, t, psi0)?;
        worst = worst.max((info_total(&psi.density()) - initial).abs());
    }
    Ok(worst)
}

/// A classical mixture of pure states on one register.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    components: Vec<(f64, PureState)>,
}

impl Preparation {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::validation("preparation needs at least one component"))?;
        let register = first.register().clone();
        let mut total = 0.0;
        for (w, psi) in &components {
            if !(*w >= 0.0) {
                return Err(Error::validation(format!("weight {w} is negative")));
            }
            if psi.register() != &register {
                return Err(Error::validation(format!(
                    "component on {} does not share register {register}",
                    psi.register()
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::validation(format!("weights sum to {total}, expected 1")));
        }
        Ok(Preparation { components })
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn register(&self) -> &Register {
        self.components[0].1.register()
    }
}

/// `Σ_i w_i |ψ_i⟩⟨ψ_i|`.
pub fn ensemble_density(prep: &Preparation) -> DensityMatrix {
    let d = prep.register().dim();
    let m = prep
        .components()
        .iter()
        .fold(DMatrix::<C64>::zeros(d, d), |acc, (w, psi)| {
            acc + psi.density().matrix() * C64::new(*w, 0.0)
        });
    DensityMatrix::new(prep.register().clone(), m).expect("convex mixture of projectors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmodel::{self, BitModelConfig, ATOM, SPIN};
    use crate::states;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn cut() -> Partition {
        Partition::cut(&[ATOM], &[SPIN]).unwrap()
    }

    #[test]
    fn convention_pins() {
        let psi = PureState::normalized(
            Register::qubits(&["a", "b"]).unwrap(),
            vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.0, 0.7), C64::new(0.4, 0.0)],
        )
        .unwrap();
        assert!((info_total(&psi.density()) - 4f64.ln()).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(Register::qubits(&["a"]).unwrap());
        assert!(info_total(&mixed).abs() < 1e-12);
        let skew = DensityMatrix::diagonal(Register::qubits(&["a"]).unwrap(), &[0.75, 0.25]).unwrap();
        let s = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!((info_total(&skew) - (LN_2 - s)).abs() < 1e-14);
        assert!((info_total(&skew) - 0.130812035941137).abs() < 1e-12);
    }

    #[test]
    fn product_state_ledger() {
        let cfg = BitModelConfig::with_real_a(0.6, 1.0).unwrap();
        let r = info_report(&bitmodel::initial_state(&cfg), &cut()).unwrap();
        assert!((r.total - 4f64.ln()).abs() < 1e-12);
        for i in &r.per_block {
            assert!((i - LN_2).abs() < 1e-12);
        }
        assert!(r.correlation.abs() < 1e-12);
    }

    #[test]
    fn correlated_state_ledger() {
        let h = FRAC_1_SQRT_2;
        let psi = bitmodel::correlated_state(C64::new(h, 0.0), C64::new(h, 0.0)).unwrap();
        let r = info_report(&psi, &cut()).unwrap();
        assert!(r.per_block.iter().all(|i| i.abs() < 1e-12));
        assert!((r.correlation - 4f64.ln()).abs() < 1e-12);

        let (a2, b2) = (0.36f64, 0.64f64);
        let psi = bitmodel::correlated_state(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let r = info_report(&psi, &cut()).unwrap();
        let expected = LN_2 + a2 * a2.ln() + b2 * b2.ln();
        assert!(r.per_block.iter().all(|i| (i - expected).abs() < 1e-12));
        assert!(expected < LN_2);
    }

    #[test]
    fn density_source_agrees_with_state_source() {
        let psi = bitmodel::evolve_bitbit(&BitModelConfig::with_real_a(0.8, 1.0).unwrap(), 0.3);
        let a = info_report(&psi, &cut()).unwrap();
        let b = info_report(&psi.density(), &cut()).unwrap();
        assert!((a.total - b.total).abs() < 1e-12);
        assert!((a.correlation - b.correlation).abs() < 1e-12);
    }

    #[test]
    fn correlations_grow_while_total_is_conserved() {
        let cfg = BitModelConfig::with_real_a(FRAC_1_SQRT_2, 1.0).unwrap();
        let h = bitmodel::h_as(cfg.g()).unwrap();
        let psi0 = bitmodel::initial_state(&cfg);
        let ts: Vec<f64> = (0..=20).map(|i| cfg.tau() * i as f64 / 20.0).collect();
        assert!(info_conservation_check(&h, &psi0, &ts).unwrap() <= 1e-10);
        let mut last = -1.0;
        for &t in &ts {
            let r = info_report(&bitmodel::evolve_bitbit(&cfg, t), &cut()).unwrap();
            assert!(r.correlation >= last - 1e-12);
            last = r.correlation;
        }
        assert!((last - 4f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn ensemble_nonuniqueness() {
        let q = |v| PureState::qubit(SPIN, v).unwrap();
        let first = Preparation::new(vec![(0.75, q(states::UP)), (0.25, q(states::DOWN))]).unwrap();
        let second = Preparation::new(vec![
            (0.5, q(states::UP)),
            (0.25, q(states::ODOT)),
            (0.25, q(states::OTIMES)),
        ])
        .unwrap();
        let (r1, r2) = (ensemble_density(&first), ensemble_density(&second));
        assert!(r1.max_abs_diff(&r2).unwrap() <= 1e-12);
        assert!((r1.get(0, 0).re - 0.75).abs() < 1e-15);
        let single = Preparation::new(vec![(1.0, q(states::RIGHT))]).unwrap();
        assert!(ensemble_density(&single).is_projector(1e-12));
    }

    #[test]
    fn preparation_validation() {
        let q = |v| PureState::qubit(SPIN, v).unwrap();
        assert!(Preparation::new(vec![]).is_err());
        assert!(Preparation::new(vec![(0.6, q(states::UP)), (0.6, q(states::DOWN))]).is_err());
        assert!(Preparation::new(vec![(1.2, q(states::UP)), (-0.2, q(states::DOWN))]).is_err());
        let other = PureState::qubit("x", states::UP).unwrap();
        assert!(Preparation::new(vec![(0.5, q(states::UP)), (0.5, other)]).is_err());
    }

    #[test]
    fn csv_header_shape() {
        assert_eq!(
            InfoReport::csv_header(2),
            "t,I_total,I_block_1,I_block_2,I_aggregate,I_corr"
        );
    }
}
