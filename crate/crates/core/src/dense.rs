// SPDX-License-Identifier: Apache-2.0

//! Dense complex operators on `m` qubits, used as the correctness oracle.

use ndarray::{Array2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest qubit count any dense construction will accept by default.
pub const DEFAULT_QUBIT_CAP: usize = 14;

const TAYLOR_DEGREE: u32 = 20;
const SQUARING_THRESHOLD: f64 = 0.5;

pub(crate) fn check_cap(what: &'static str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::ResourceCap {
            what,
            requested,
            cap,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    num_qubits: usize,
    matrix: Array2<Complex64>,
}

impl DenseOperator {
    pub fn zeros(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            matrix: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            matrix: Array2::eye(1usize << num_qubits),
        }
    }

    pub fn from_matrix(matrix: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                actual: cols,
            });
        }
        if !rows.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: rows.next_power_of_two(),
                actual: rows,
            });
        }
        Ok(Self {
            num_qubits: rows.trailing_zeros() as usize,
            matrix,
        })
    }

    /// Builds an operator column by column.
    pub(crate) fn from_columns(num_qubits: usize, columns: Vec<Vec<Complex64>>) -> Self {
        let mut op = Self::zeros(num_qubits);
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                op.matrix[[i, j]] = v;
            }
        }
        op
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.t().mapv(|c| c.conj()),
        }
    }

    /// Matrix product `self · other`. Panics on a dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.dot(&other.matrix),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.mapv(|c| c * factor),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm; an upper bound on the spectral norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (largest column sum of magnitudes).
    pub fn one_norm(&self) -> f64 {
        self.matrix
            .axis_iter(Axis(1))
            .map(|col| col.iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diag().sum()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.num_qubits))
            .frobenius_norm()
    }

    /// Matrix exponential by scaling and squaring of a degree-20 Taylor series.
    pub fn expm(&self) -> Self {
        let norm = self.one_norm();
        let mut squarings = 0u32;
        while norm / 2f64.powi(squarings as i32) > SQUARING_THRESHOLD {
            squarings += 1;
        }
        let a = self.scale(Complex64::new(2f64.powi(-(squarings as i32)), 0.0));
        let id = Self::identity(self.num_qubits);
        let mut acc = id.clone();
        for k in (1..=TAYLOR_DEGREE).rev() {
            acc = id.add(&a.matmul(&acc).scale(Complex64::new(1.0 / k as f64, 0.0)));
        }
        for _ in 0..squarings {
            acc = acc.matmul(&acc);
        }
        acc
    }

    /// Phase that best aligns `self` onto `target`, and the remaining distance
    /// `min_φ ‖e^{iφ}·self − target‖_F`.
    pub fn phase_aligned_distance(&self, target: &Self) -> (f64, f64) {
        assert_eq!(self.dim(), target.dim(), "operator dimension mismatch");
        let overlap: Complex64 = self
            .matrix
            .iter()
            .zip(target.matrix.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phi = if overlap.norm() > 0.0 {
            overlap.arg()
        } else {
            0.0
        };
        let aligned = self.scale(Complex64::from_polar(1.0, phi));
        (aligned.sub(target).frobenius_norm(), phi)
    }
}
