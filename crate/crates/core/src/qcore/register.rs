use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A labeled finite-dimensional subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subsystem {
    label: String,
    dim: usize,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, dim: usize) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::validation("subsystem label must be non-empty"));
        }
        if dim < 2 {
            return Err(Error::validation(format!(
                "subsystem `{label}` has dimension {dim}, expected at least 2"
            )));
        }
        Ok(Subsystem { label, dim })
    }

    pub fn qubit(label: impl Into<String>) -> Result<Self> {
        Self::new(label, 2)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Ordered list of subsystems. The total Hilbert space is the tensor product
/// of the subsystem spaces, indexed big-endian: the first subsystem is the
/// most significant digit of a basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    subsystems: Vec<Subsystem>,
}

impl Register {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(Error::validation("register must hold at least one subsystem"));
        }
        let mut seen = HashSet::new();
        for s in &subsystems {
            if !seen.insert(s.label.as_str()) {
                return Err(Error::LabelCollision(s.label.clone()));
            }
        }
        Ok(Register { subsystems })
    }

    /// Register of two-level systems with the given labels, in order.
    pub fn qubits<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let subsystems = labels
            .iter()
            .map(|l| Subsystem::qubit(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(subsystems)
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.subsystems.iter().map(|s| s.label.as_str())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.label == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    /// Positions of `labels`, failing on unknown or repeated labels.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let p = self
                .position(l)
                .ok_or_else(|| Error::domain(format!("unknown subsystem label `{l}`")))?;
            if out.contains(&p) {
                return Err(Error::domain(format!("label `{l}` listed twice")));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &Register) -> Result<Register> {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        Register::new(subsystems)
    }

    /// Sub-register made of the subsystems at `positions`, kept in the
    /// canonical (ascending) order of this register.
    pub(crate) fn select(&self, positions: &[usize]) -> Register {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        Register {
            subsystems: sorted.iter().map(|&p| self.subsystems[p].clone()).collect(),
        }
    }

    /// Same label set, regardless of order.
    pub fn same_labels(&self, other: &Register) -> bool {
        self.len() == other.len() && other.labels().all(|l| self.contains(l))
    }

    pub(crate) fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.subsystems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", s.label)?;
        }
        write!(f, ")")
    }
}

/// Splits basis indices of a register into the index over a selected set of
/// subsystems and the index over the rest, both big-endian in canonical order.
pub(crate) struct IndexSplit {
    pub kept_dim: usize,
    pub rest_dim: usize,
    /// For every full basis index: (kept index, rest index).
    pub map: Vec<(usize, usize)>,
}

impl IndexSplit {
    /// `kept` lists subsystem positions; the kept index uses them as digits in
    /// the given order (most significant first).
    pub fn new(register: &Register, kept: &[usize]) -> Self {
        let dims = register.dims();
        let n = dims.len();
        let mut is_kept = vec![false; n];
        for &p in kept {
            is_kept[p] = true;
        }
        let kept_dim: usize = kept.iter().map(|&k| dims[k]).product();
        let rest_dim: usize = (0..n).filter(|&k| !is_kept[k]).map(|k| dims[k]).product();
        let total = register.dim();
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            let ki = kept.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            let ri = (0..n)
                .filter(|&k| !is_kept[k])
                .fold(0, |acc, k| acc * dims[k] + digits[k]);
            map.push((ki, ri));
            // odometer increment, last digit fastest
            for k in (0..n).rev() {
                digits[k] += 1;
                if digits[k] < dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        IndexSplit {
            kept_dim,
            rest_dim,
            map,
        }
    }

    /// Inverse table: `full[kept * rest_dim + rest]` is the full basis index.
    pub fn inverse(&self) -> Vec<usize> {
        let mut full = vec![0; self.kept_dim * self.rest_dim];
        for (i, &(k, r)) in self.map.iter().enumerate() {
            full[k * self.rest_dim + r] = i;
        }
        full
    }
}
