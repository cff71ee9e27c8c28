use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::MAX_DIM;

/// Subsystem dimensions plus the number of measurement directions per subsystem.
///
/// Outcome tuples and direction combinations are both flattened in mixed
/// radix with subsystem 1 as the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    dims: Vec<usize>,
    n_dirs: Vec<usize>,
}

impl Layout {
    pub fn new(dims: Vec<usize>, n_dirs: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("no subsystems given".into()));
        }
        if dims.len() != n_dirs.len() {
            return Err(Error::Shape(format!(
                "{} dimensions but {} direction counts",
                dims.len(),
                n_dirs.len()
            )));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimension {d} is below 2"
            )));
        }
        if n_dirs.contains(&0) {
            return Err(Error::InvalidArgument(
                "every subsystem needs at least one direction".into(),
            ));
        }
        for (what, factors) in [("outcome", &dims), ("direction", &n_dirs)] {
            let total = factors
                .iter()
                .try_fold(1usize, |acc, &f| acc.checked_mul(f))
                .filter(|&t| t <= MAX_DIM);
            if total.is_none() {
                return Err(Error::TooLarge(format!(
                    "{what} space of {factors:?} exceeds {MAX_DIM}"
                )));
            }
        }
        Ok(Self { dims, n_dirs })
    }

    /// As many directions as outcomes on every subsystem.
    pub fn square(dims: &[usize]) -> Result<Self> {
        Self::new(dims.to_vec(), dims.to_vec())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_dirs(&self) -> &[usize] {
        &self.n_dirs
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn n_combos(&self) -> usize {
        self.n_dirs.iter().product()
    }

    /// Total number of (subsystem, direction) slots.
    pub fn n_directions_total(&self) -> usize {
        self.n_dirs.iter().sum()
    }

    pub fn outcome_digits(&self, index: usize) -> Vec<usize> {
        split_mixed_radix(index, &self.dims)
    }

    pub fn combo_digits(&self, index: usize) -> Vec<usize> {
        split_mixed_radix(index, &self.n_dirs)
    }

    pub fn outcome_index(&self, digits: &[usize]) -> usize {
        join_mixed_radix(digits, &self.dims)
    }

    pub fn combo_index(&self, digits: &[usize]) -> usize {
        join_mixed_radix(digits, &self.n_dirs)
    }
}

pub(crate) fn split_mixed_radix(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    digits
}

pub(crate) fn join_mixed_radix(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}
