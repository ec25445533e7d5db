use nalgebra::DMatrix;

use super::register::{IndexSplit, Register};
use super::{PureState, C64, STRUCTURAL_TOL};
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive-semidefinite matrix over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: Register,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each to 1e-12.
    pub fn new(register: Register, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = register.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::validation(format!(
                "register {register} needs a {dim}x{dim} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = hermiticity_defect(&matrix);
        if asym > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "density matrix is not Hermitian (max |ρ - ρ†| = {asym:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        let rho = DensityMatrix { register, matrix };
        let min = rho.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    /// Diagonal density matrix with the given populations.
    pub fn diagonal(register: Register, populations: &[f64]) -> Result<Self> {
        let d = nalgebra::DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| C64::new(p, 0.0)),
        );
        Self::new(register, DMatrix::from_diagonal(&d))
    }

    /// Maximally mixed state `1/d`.
    pub fn maximally_mixed(register: Register) -> Self {
        let d = register.dim();
        let matrix = DMatrix::identity(d, d).map(|x: C64| x / d as f64);
        DensityMatrix { register, matrix }
    }

    /// Trusted construction for matrices that are density matrices by
    /// construction (outer products, partial traces, convex mixtures).
    pub(crate) fn from_parts(register: Register, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(register.dim(), matrix.nrows());
        DensityMatrix { register, matrix }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Whether `ρ² = ρ` elementwise within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        let sq = &self.matrix * &self.matrix;
        max_abs(&(sq - &self.matrix)) <= tol
    }

    /// Largest elementwise modulus outside the diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.register != other.register {
            return Err(Error::domain(format!(
                "comparing density matrices on {} and {}",
                self.register, other.register
            )));
        }
        Ok(max_abs(&(&self.matrix - &other.matrix)))
    }
}

/// Sources that can be reduced to a subset of their subsystems.
pub trait Reducible {
    fn register(&self) -> &Register;

    /// Reduced density matrix on `keep`; the result's register lists the kept
    /// subsystems in their original order.
    fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix>;
}

/// Free-function form of [`Reducible::partial_trace`].
pub fn partial_trace<R: Reducible, S: AsRef<str>>(source: &R, keep: &[S]) -> Result<DensityMatrix> {
    source.partial_trace(keep)
}

fn kept_positions<S: AsRef<str>>(register: &Register, keep: &[S]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::domain("partial trace must keep at least one subsystem"));
    }
    let mut positions = register.positions(keep)?;
    positions.sort_unstable();
    Ok(positions)
}

impl Reducible for PureState {
    fn register(&self) -> &Register {
        PureState::register(self)
    }

    fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let register = PureState::register(self);
        let positions = kept_positions(register, keep)?;
        let split = IndexSplit::new(register, &positions);
        // ψ reshaped to (kept × rest); ρ = M M†
        let mut m = DMatrix::<C64>::zeros(split.kept_dim, split.rest_dim);
        for (i, &(k, r)) in split.map.iter().enumerate() {
            m[(k, r)] = self.amplitude(i);
        }
        let rho = &m * m.adjoint();
        Ok(DensityMatrix::from_parts(register.select(&positions), rho))
    }
}

impl Reducible for DensityMatrix {
    fn register(&self) -> &Register {
        &self.register
    }

    fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let positions = kept_positions(&self.register, keep)?;
        let split = IndexSplit::new(&self.register, &positions);
        let full = split.inverse();
        let (kd, rd) = (split.kept_dim, split.rest_dim);
        let rho = DMatrix::from_fn(kd, kd, |i, j| {
            (0..rd)
                .map(|r| self.matrix[(full[i * rd + r], full[j * rd + r])])
                .sum()
        });
        Ok(DensityMatrix::from_parts(self.register.select(&positions), rho))
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}
