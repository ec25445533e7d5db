//! Fast invariant suite: closed forms against the exact-diagonalization
//! oracle, information conventions and the worked values they pin.
//!
//! Every check draws from fixed substreams, so the report is identical
//! from run to run.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};
use std::fmt;

use rand::Rng;

use crate::bitmodel::{self, BitModelConfig, ATOM, SPIN};
use crate::envselect::{self, recurrence_time, z_of_t, EnvAtom, EnvironmentSpec};
use crate::infotheory::{self, ensemble_density, entropy, info_report, Preparation};
use crate::qcore::{evolve_exact, DensityMatrix, Partition, PureState, Reducible, Register, C64};
use crate::redundancy::{parity_decode, record_state, ReadBasis, RecordSampler, SpinLabel, ParityVerdict};
use crate::seed;
use crate::states;
use crate::Result;

const SEED: u64 = 0x5e1f_c4ec;

/// Sign convention of the information measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InfoConvention {
    /// `I = ln d − S`.
    #[default]
    Standard,
    /// `I = S − ln d`; only useful to see the convention pin fail.
    Inverted,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SelfCheckOptions {
    pub info_convention: InfoConvention,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheckReport {
    pub checks: Vec<CheckResult>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn bound(name: &'static str, observed: f64, tol: f64, what: &str) -> CheckResult {
    let passed = observed <= tol;
    let rel = if passed { "<" } else { ">" };
    CheckResult {
        name,
        passed,
        detail: format!("{what} {rel} {tol:.0e} (observed {observed:.2e})"),
    }
}

fn failed(name: &'static str, err: crate::Error) -> CheckResult {
    CheckResult {
        name,
        passed: false,
        detail: format!("error: {err}"),
    }
}

fn random_amplitudes<R: Rng>(rng: &mut R) -> (C64, C64) {
    let theta = rng.gen::<f64>() * PI / 2.0;
    let phase = rng.gen::<f64>() * 2.0 * PI;
    (C64::new(theta.cos(), 0.0), C64::from_polar(theta.sin(), phase))
}

/// Closed-form reduced spin–apparatus matrix against the traced oracle
/// evolution, one instance per `N = 1..=max_n`.
pub fn rho_as_oracle_error(max_n: usize, rng_seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in 1..=max_n {
        let mut rng = seed::substream(rng_seed, "selfcheck/rho_as", n as u64);
        let pol: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let spec = EnvironmentSpec::random_couplings(&pol, &mut rng)?;
        let (a, b) = random_amplitudes(&mut rng);
        let t = rng.gen::<f64>() * 50.0;
        let psi0 = envselect::evolve_env(&spec, a, b, 0.0)?;
        let exact = evolve_exact(&envselect::h_env_total(&spec)?, t, &psi0)?;
        let traced = exact.partial_trace(&[SPIN, ATOM])?;
        let analytic = envselect::rho_as_analytic(&spec, a, b, t)?;
        worst = worst.max(analytic.max_abs_diff(&traced)?);
    }
    Ok(worst)
}

fn check_rho_as() -> CheckResult {
    const NAME: &str = "rho_as oracle";
    match rho_as_oracle_error(8, SEED) {
        Ok(e) => bound(NAME, e, 1e-10, "max|Δ|"),
        Err(e) => failed(NAME, e),
    }
}

fn check_bitmodel() -> CheckResult {
    const NAME: &str = "bit model oracle";
    let run = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let mut rng = seed::substream(SEED, "selfcheck/bitmodel", i);
            let (a, b) = random_amplitudes(&mut rng);
            let cfg = BitModelConfig::new(a, b, rng.gen_range(0.1..2.0))?;
            let t = rng.gen::<f64>() * 10.0;
            let exact = evolve_exact(&bitmodel::h_as(cfg.g())?, t, &bitmodel::initial_state(&cfg))?;
            let closed = bitmodel::evolve_bitbit(&cfg, t);
            worst = worst.max(closed.phase_gauged().max_abs_diff(&exact.phase_gauged())?);
        }
        Ok(worst)
    };
    match run() {
        Ok(e) => bound(NAME, e, 1e-10, "max|Δψ|"),
        Err(e) => failed(NAME, e),
    }
}

fn information(rho: &DensityMatrix, convention: InfoConvention) -> f64 {
    let i = infotheory::info_total(rho);
    match convention {
        InfoConvention::Standard => i,
        InfoConvention::Inverted => -i,
    }
}

fn check_info_convention(convention: InfoConvention) -> CheckResult {
    const NAME: &str = "info convention pin";
    let run = || -> Result<f64> {
        let pure = PureState::basis(Register::qubits(&["a", "b"])?, 2)?.density();
        let mixed = DensityMatrix::maximally_mixed(Register::qubits(&["a"])?);
        let skew = DensityMatrix::diagonal(Register::qubits(&["a"])?, &[0.75, 0.25])?;
        let h = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        Ok([
            (information(&pure, convention) - 4f64.ln()).abs(),
            information(&mixed, convention).abs(),
            (information(&skew, convention) - (LN_2 - h)).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    };
    match run() {
        Ok(e) => bound(NAME, e, 1e-12, "I(pure d=4) = ln 4, I(1/2) = 0, |Δ|"),
        Err(e) => failed(NAME, e),
    }
}

fn check_worked_values() -> CheckResult {
    const NAME: &str = "info worked values";
    let run = || -> Result<f64> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let r = info_report(&bitmodel::correlated_state(h, h)?, &Partition::cut(&[ATOM], &[SPIN])?)?;
        let ln4 = 4f64.ln();
        Ok([
            (r.total - ln4).abs(),
            r.per_block[0].abs(),
            r.per_block[1].abs(),
            (r.correlation - ln4).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    };
    match run() {
        Ok(e) => bound(NAME, e, 1e-12, "(I, I_A, I_S, I_c) = (ln 4, 0, 0, ln 4), |Δ|"),
        Err(e) => failed(NAME, e),
    }
}

fn check_ensemble() -> CheckResult {
    const NAME: &str = "ensemble nonuniqueness";
    let run = || -> Result<f64> {
        let q = |v| PureState::qubit(SPIN, v);
        let first = Preparation::new(vec![(0.75, q(states::UP)?), (0.25, q(states::DOWN)?)])?;
        let second = Preparation::new(vec![
            (0.5, q(states::UP)?),
            (0.25, q(states::ODOT)?),
            (0.25, q(states::OTIMES)?),
        ])?;
        ensemble_density(&first).max_abs_diff(&ensemble_density(&second))
    };
    match run() {
        Ok(e) => bound(NAME, e, 1e-12, "max|Δρ|"),
        Err(e) => failed(NAME, e),
    }
}

fn check_no_decoherence() -> CheckResult {
    const NAME: &str = "no-decoherence pin";
    let run = || -> Result<f64> {
        let atoms = [0.13, 0.58, 0.91]
            .iter()
            .map(|&g| EnvAtom::with_polarization(g, 1.0))
            .collect::<Result<Vec<_>>>()?;
        let spec = EnvironmentSpec::new(atoms)?;
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mut worst: f64 = 0.0;
        for i in 0..200 {
            let t = i as f64 * 0.37;
            worst = worst.max((z_of_t(&spec, t).norm() - 1.0).abs());
            let rho = envselect::rho_as_analytic(&spec, h, h, t)?;
            worst = worst.max((rho.purity() - 1.0).abs()).max(entropy(&rho).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(e) => bound(NAME, e, 1e-10, "γ = 1: ||z| − 1|, |purity − 1|"),
        Err(e) => failed(NAME, e),
    }
}

fn check_recurrence() -> CheckResult {
    const NAME: &str = "recurrence";
    let run = || -> Result<(Option<f64>, Option<f64>)> {
        let spec = |g: &[f64]| {
            EnvironmentSpec::new(
                g.iter()
                    .map(|&g| EnvAtom::with_polarization(g, 0.0))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        Ok((
            recurrence_time(&spec(&[0.1, 0.2, 0.3])?),
            recurrence_time(&spec(&[1.0, 2f64.sqrt()])?),
        ))
    };
    match run() {
        Ok((Some(t), None)) => bound(NAME, (t - PI / 0.1).abs(), 1e-9, "|T − π/0.1|, incommensurable pair absent,"),
        Ok((t, other)) => CheckResult {
            name: NAME,
            passed: false,
            detail: format!("harmonic: {t:?}, incommensurable: {other:?}"),
        },
        Err(e) => failed(NAME, e),
    }
}

fn check_parity_expansion() -> CheckResult {
    const NAME: &str = "parity expansion";
    let run = || -> Result<(usize, f64, bool)> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let sampler = RecordSampler::new(&record_state(h, h, 3)?, ReadBasis::Conjugate)?;
        let (mut terms, mut worst, mut paired) = (0, 0.0f64, true);
        for i in 0..16 {
            let p = sampler.probability(i);
            if p > 1e-12 {
                terms += 1;
                worst = worst.max((p - 0.125).abs());
                let (spin, outcome) = sampler.decode_index(i);
                let verdict = parity_decode(&outcome)?;
                paired &= matches!(
                    (spin, verdict),
                    (SpinLabel::Odot, ParityVerdict::Odot) | (SpinLabel::Otimes, ParityVerdict::Otimes)
                );
            }
        }
        Ok((terms, worst, paired))
    };
    match run() {
        Ok((8, e, true)) => bound(NAME, e, 1e-12, "8 terms of weight 1/8, even |−⟩ with ⊙, |Δp|"),
        Ok((terms, _, paired)) => CheckResult {
            name: NAME,
            passed: false,
            detail: format!("{terms} nonzero terms, parity pairing holds: {paired}"),
        },
        Err(e) => failed(NAME, e),
    }
}

fn check_relative_states() -> CheckResult {
    const NAME: &str = "relative states";
    let run = || -> Result<f64> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let psi = bitmodel::correlated_state(h, h)?;
        let cut = Partition::cut(&[ATOM], &[SPIN])?;
        let basis = [PureState::qubit(ATOM, states::PLUS)?, PureState::qubit(ATOM, states::MINUS)?];
        let d = crate::qcore::relative_states(&psi, &cut, &basis)?;
        let cross = d.overlap(0, 1).map_or(1.0, |z| z.norm());
        let recon = d.reconstruct()?.max_abs_diff(&psi)?;
        Ok(cross.max(recon))
    };
    match run() {
        Ok(e) => bound(NAME, e, 1e-12, "|⟨p|q⟩|, reconstruction |Δ|"),
        Err(e) => failed(NAME, e),
    }
}

/// Runs every check in a fixed order.
pub fn run(options: SelfCheckOptions) -> SelfCheckReport {
    SelfCheckReport {
        checks: vec![
            check_rho_as(),
            check_bitmodel(),
            check_info_convention(options.info_convention),
            check_worked_values(),
            check_ensemble(),
            check_no_decoherence(),
            check_recurrence(),
            check_parity_expansion(),
            check_relative_states(),
        ],
    }
}
