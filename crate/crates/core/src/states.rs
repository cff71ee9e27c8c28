//! Density matrices and the canonical states used throughout the crate.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, RealMatrix};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue a density matrix may have.
pub const PSD_TOL: f64 = -1e-9;

/// A validated multi-qudit density matrix.
///
/// The composite basis index encodes outcome tuples lexicographically with
/// subsystem 1 varying slowest, the same ordering `kron` produces.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
    label: String,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let report = validate_density(&dims, &matrix)?;
        if let Some(failure) = report.first_failure() {
            return Err(Error::InvalidState(failure));
        }
        Ok(Self {
            dims,
            matrix,
            label: label.into(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> DensityReport {
        validate_density(&self.dims, &self.matrix).expect("shape checked on construction")
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        let matrix = self.matrix.kron(&other.matrix)?;
        DensityMatrix::new(dims, matrix, format!("{}*{}", self.label, other.label))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: DensityFile = serde_json::from_str(s)?;
        file.into_density()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_json_str(&text)?.with_label(format!("file:{}", path.display())))
    }

    pub fn to_json(&self) -> String {
        let file = DensityFile {
            dims: self.dims.clone(),
            re: self.matrix.real_part().to_rows(),
            im: Some(self.matrix.imag_part().to_rows()),
        };
        serde_json::to_string_pretty(&file).expect("plain numeric data serializes")
    }
}

/// On-disk layout: `{"dims": [...], "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Serialize, Deserialize)]
struct DensityFile {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

impl DensityFile {
    fn into_density(self) -> Result<DensityMatrix> {
        let re = RealMatrix::from_rows(&self.re)?;
        let im = match self.im {
            Some(rows) => RealMatrix::from_rows(&rows)?,
            None => RealMatrix::zeros(re.rows(), re.cols()),
        };
        let matrix = ComplexMatrix::from_parts(&re, &im)?;
        DensityMatrix::new(self.dims, matrix, "file")
    }
}

/// Per-invariant residuals of a candidate density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub hermitian_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive: bool,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive
    }

    fn first_failure(&self) -> Option<String> {
        if !self.hermitian {
            Some(format!(
                "not Hermitian (residual {:.3e})",
                self.hermitian_residual
            ))
        } else if !self.unit_trace {
            Some(format!("trace off by {:.3e}", self.trace_residual))
        } else if !self.positive {
            Some(format!("negative eigenvalue {:.3e}", self.min_eigenvalue))
        } else {
            None
        }
    }
}

/// Checks a raw matrix against the density-matrix invariants.
///
/// Only shape problems are errors; invariant violations are reported.
pub fn validate_density(dims: &[usize], m: &ComplexMatrix) -> Result<DensityReport> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidArgument(format!(
            "subsystem dimensions must all be at least 2, got {dims:?}"
        )));
    }
    let n: usize = dims.iter().product();
    if m.rows() != n || m.cols() != n {
        return Err(Error::Shape(format!(
            "dims {dims:?} need a {n}x{n} matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let hermitian_residual = m.hermitian_residual();
    let trace_residual = (m.trace()? - Complex64::new(1.0, 0.0)).norm();
    // Eigenvalues are only meaningful for the Hermitian part.
    let herm = m.add(&m.dagger())?.scale(Complex64::new(0.5, 0.0));
    let min_eigenvalue = hermitian_eigenvalues(&herm)?
        .first()
        .copied()
        .unwrap_or(f64::NAN);
    Ok(DensityReport {
        hermitian_residual,
        trace_residual,
        min_eigenvalue,
        hermitian: hermitian_residual <= HERMITIAN_TOL,
        unit_trace: trace_residual <= TRACE_TOL,
        positive: min_eigenvalue >= PSD_TOL,
    })
}

/// Projector onto `(|0…0⟩ + |last⟩)/√2`: one half at the four corners.
fn corner_state(dims: Vec<usize>, label: &str) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(n, n);
    for &(i, j) in &[(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)] {
        m[(i, j)] = Complex64::new(0.5, 0.0);
    }
    DensityMatrix::new(dims, m, label).expect("corner states are valid")
}

/// Maximally entangled two-qubit state.
pub fn max_entangled_2x2() -> DensityMatrix {
    corner_state(vec![2, 2], "bell22")
}

/// Qubit–qutrit state with one half at the corners of the 6×6 matrix.
pub fn max_entangled_2x3() -> DensityMatrix {
    corner_state(vec![2, 3], "bell23")
}

/// Two-qutrit analogue of the corner state (`|+1,+1⟩ + |−1,−1⟩`).
pub fn max_entangled_3x3() -> DensityMatrix {
    corner_state(vec![3, 3], "bell33")
}

/// Three-qubit GHZ state.
pub fn ghz_2x2x2() -> DensityMatrix {
    corner_state(vec![2, 2, 2], "ghz222")
}

/// Mixing parameter of the two-qubit Werner family.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct WernerParameter(f64);

impl WernerParameter {
    pub const MIN: f64 = -1.0 / 3.0;
    pub const MAX: f64 = 1.0;

    pub fn new(p: f64) -> Result<Self> {
        // A little slack so that -1/3 written in decimal is accepted.
        if p.is_finite() && (Self::MIN - 1e-12..=Self::MAX + 1e-12).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::InvalidState(format!(
                "Werner parameter {p} outside [-1/3, 1]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Werner matrix for any `p`, without the physicality check.
pub fn werner_matrix(p: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    let r = |v: f64| Complex64::new(v, 0.0);
    m[(0, 0)] = r((1.0 + p) / 4.0);
    m[(1, 1)] = r((1.0 - p) / 4.0);
    m[(2, 2)] = r((1.0 - p) / 4.0);
    m[(3, 3)] = r((1.0 + p) / 4.0);
    m[(0, 3)] = r(p / 2.0);
    m[(3, 0)] = r(p / 2.0);
    m
}

pub fn werner(p: WernerParameter) -> DensityMatrix {
    DensityMatrix::new(
        vec![2, 2],
        werner_matrix(p.value()),
        format!("werner:{}", p.value()),
    )
    .expect("Werner states are physical on [-1/3, 1]")
}

/// `Tr(ρ·O)` for a Hermitian observable.
pub fn quantum_average(rho: &DensityMatrix, obs: &ComplexMatrix) -> Result<f64> {
    if obs.rows() != rho.dim() || obs.cols() != rho.dim() {
        return Err(Error::Shape(format!(
            "observable is {}x{}, state is {}x{}",
            obs.rows(),
            obs.cols(),
            rho.dim(),
            rho.dim()
        )));
    }
    if !obs.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::InvalidObservable(format!(
            "not Hermitian (residual {:.3e})",
            obs.hermitian_residual()
        )));
    }
    let tr = rho.matrix().matmul(obs)?.trace()?;
    if tr.im.abs() >= 1e-10 {
        return Err(Error::InvalidObservable(format!(
            "average has imaginary part {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn diag(vals: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(vals.len(), vals.len());
        for (i, &v) in vals.iter().enumerate() {
            m[(i, i)] = r(v);
        }
        m
    }

    fn is_projector(rho: &DensityMatrix) -> bool {
        let sq = rho.matrix().matmul(rho.matrix()).unwrap();
        sq.approx_eq(rho.matrix(), 1e-12)
    }

    #[test]
    fn two_qubit_bell_state_layout() {
        let rho = max_entangled_2x2();
        assert_eq!(rho.matrix()[(0, 3)], r(0.5));
        assert_eq!(rho.matrix().trace().unwrap(), r(1.0));
        assert!(is_projector(&rho));
        let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
        let expected = [0.0, 0.0, 0.0, 1.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_qutrit_and_ghz_corners() {
        let rho = max_entangled_2x3();
        assert_eq!(rho.dims(), &[2, 3]);
        assert_eq!(rho.matrix()[(5, 5)], r(0.5));
        assert!(is_projector(&rho));
        let ghz = ghz_2x2x2();
        assert_eq!(ghz.matrix()[(0, 7)], r(0.5));
        assert_eq!(ghz.matrix().trace().unwrap(), r(1.0));
        assert!(is_projector(&ghz));
    }

    #[test]
    fn ghz_reduces_to_classical_mixture() {
        // Brute-force partial trace over the third qubit.
        let ghz = ghz_2x2x2();
        let m = ghz.matrix();
        let reduced = ComplexMatrix::from_fn(4, 4, |i, j| {
            (0..2).fold(r(0.0), |acc, k| acc + m[(2 * i + k, 2 * j + k)])
        });
        assert!(reduced.approx_eq(&diag(&[0.5, 0.0, 0.0, 0.5]), 1e-15));
    }

    #[test]
    fn werner_special_points() {
        let one = werner(WernerParameter::new(1.0).unwrap());
        assert!(one.matrix().approx_eq(max_entangled_2x2().matrix(), 1e-15));
        let zero = werner(WernerParameter::new(0.0).unwrap());
        assert!(zero.matrix().approx_eq(&diag(&[0.25; 4]), 1e-15));
        let third = werner(WernerParameter::new(1.0 / 3.0).unwrap());
        let d = third.matrix().diag().unwrap();
        let expected = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0];
        for (a, b) in d.iter().zip(expected) {
            assert!((a.re - b).abs() < 1e-15);
        }
    }

    #[test]
    fn werner_rejects_unphysical_parameters() {
        assert!(WernerParameter::new(-0.5).is_err());
        assert!(WernerParameter::new(1.01).is_err());
        assert!(WernerParameter::new(f64::NAN).is_err());
        assert!(WernerParameter::new(-1.0 / 3.0).is_ok());
    }

    #[test]
    fn werner_is_affine_in_p() {
        for &(p1, p2) in &[(-1.0 / 3.0, 1.0), (0.0, 0.5), (0.2, 0.9)] {
            let mid = werner_matrix(0.5 * (p1 + p2));
            let avg = werner_matrix(p1)
                .add(&werner_matrix(p2))
                .unwrap()
                .scale(r(0.5));
            assert!(mid.approx_eq(&avg, 1e-12));
        }
    }

    #[test]
    fn averages() {
        let bell = max_entangled_2x2();
        assert!((quantum_average(&bell, &ComplexMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-15);
        let zz = diag(&[1.0, -1.0, -1.0, 1.0]);
        assert!((quantum_average(&bell, &zz).unwrap() - 1.0).abs() < 1e-15);
        let mixed = werner(WernerParameter::new(0.0).unwrap());
        let traceless = ComplexMatrix::from_rows(&[
            vec![r(1.0), r(0.0), r(0.0), Complex64::new(0.3, 0.2)],
            vec![r(0.0), r(-2.0), r(0.0), r(0.0)],
            vec![r(0.0), r(0.0), r(0.5), r(0.0)],
            vec![Complex64::new(0.3, -0.2), r(0.0), r(0.0), r(0.5)],
        ])
        .unwrap();
        assert!(quantum_average(&mixed, &traceless).unwrap().abs() < 1e-15);
    }

    #[test]
    fn average_rejects_bad_observables() {
        let bell = max_entangled_2x2();
        let mut skew = ComplexMatrix::zeros(4, 4);
        skew[(0, 1)] = r(1.0);
        assert!(matches!(
            quantum_average(&bell, &skew),
            Err(Error::InvalidObservable(_))
        ));
        assert!(matches!(
            quantum_average(&bell, &ComplexMatrix::identity(2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn validation_reports() {
        assert!(max_entangled_2x2().validate().passed());
        for rho in [max_entangled_2x3(), max_entangled_3x3(), ghz_2x2x2()] {
            assert!(rho.validate().passed());
        }
        let bad = validate_density(&[2, 2], &werner_matrix(-0.5)).unwrap();
        assert!(bad.hermitian && bad.unit_trace && !bad.positive);
        // The smallest eigenvalue of the Werner matrix is (1 - 3|p|)/4 for p < 0.
        assert!((bad.min_eigenvalue - (1.0 - 1.5) / 4.0).abs() < 1e-12);
        let short = diag(&[0.3, 0.2, 0.2, 0.2]);
        let report = validate_density(&[2, 2], &short).unwrap();
        assert!(!report.unit_trace && report.hermitian && report.positive);
        assert!(DensityMatrix::new(vec![2, 2], short, "x").is_err());
    }

    #[test]
    fn json_load_validates() {
        let good = r#"{"dims":[2,2],"re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]]}"#;
        let rho = DensityMatrix::from_json_str(good).unwrap();
        assert_eq!(rho.matrix(), max_entangled_2x2().matrix());
        let bad = r#"{"dims":[2,2],"re":[[0.5,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0.4]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        assert!(DensityMatrix::from_json_str(bad).is_err());
        let wrong_dims = r#"{"dims":[2,3],"re":[[1,0],[0,0]]}"#;
        assert!(DensityMatrix::from_json_str(wrong_dims).is_err());
        let back = DensityMatrix::from_json_str(&rho.to_json()).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }
}
