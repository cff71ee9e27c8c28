//! Measurement rotations, tomograms and quantum stochastic matrices.
//!
//! A qubit direction uses the SU(2) rotation `su2_unitary`; a qutrit direction
//! uses the spin-1 representation `exp(−iφJz)·exp(−iθJy)` in the basis
//! `m = +1, 0, −1`. Only two Euler angles enter: a third rotation about the
//! measurement axis multiplies basis states by phases and drops out of every
//! tomogram.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlators::{StochasticMatrix, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::states::DensityMatrix;

/// Unitarity tolerance for user-supplied rotations.
pub const UNITARY_TOL: f64 = 1e-8;
/// Negative probabilities above this are roundoff and clamp to zero.
pub const CLAMP_TOL: f64 = 1e-10;

/// Polar angle `theta ∈ [0, π]` and azimuth `phi ∈ [0, 2π)`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDirection")]
pub struct EulerDirection {
    theta: f64,
    phi: f64,
}

#[derive(Deserialize)]
struct RawDirection {
    theta: f64,
    phi: f64,
}

impl TryFrom<RawDirection> for EulerDirection {
    type Error = Error;

    fn try_from(raw: RawDirection) -> Result<Self> {
        Self::new(raw.theta, raw.phi)
    }
}

impl EulerDirection {
    /// Normalizes into range: a polar angle past π is reflected and the
    /// azimuth turned by π, which leaves every tomogram unchanged.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite(format!("direction ({theta}, {phi})")));
        }
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        Ok(Self {
            theta,
            phi: wrap_phi(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

pub(crate) fn wrap_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if p >= TAU {
        0.0
    } else {
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsystemDirections {
    pub dim: usize,
    pub dirs: Vec<EulerDirection>,
}

/// Measurement directions for every subsystem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet {
    pub subsystems: Vec<SubsystemDirections>,
}

impl DirectionSet {
    pub fn new(subsystems: Vec<SubsystemDirections>) -> Result<Self> {
        let set = Self { subsystems };
        set.layout()?;
        Ok(set)
    }

    /// Builds from `(theta, phi)` pairs grouped per subsystem.
    pub fn from_angles(dims: &[usize], angles: &[Vec<(f64, f64)>]) -> Result<Self> {
        if dims.len() != angles.len() {
            return Err(Error::Shape(format!(
                "{} subsystems but {} angle groups",
                dims.len(),
                angles.len()
            )));
        }
        let subsystems = dims
            .iter()
            .zip(angles)
            .map(|(&dim, pairs)| {
                let dirs = pairs
                    .iter()
                    .map(|&(t, p)| EulerDirection::new(t, p))
                    .collect::<Result<_>>()?;
                Ok(SubsystemDirections { dim, dirs })
            })
            .collect::<Result<_>>()?;
        Self::new(subsystems)
    }

    /// Inverse of [`DirectionSet::to_flat`].
    pub fn from_flat(layout: &Layout, flat: &[f64]) -> Result<Self> {
        if flat.len() != 2 * layout.n_directions_total() {
            return Err(Error::Shape(format!(
                "{} angles for {} directions",
                flat.len(),
                layout.n_directions_total()
            )));
        }
        let mut pairs = flat.chunks_exact(2).map(|p| (p[0], p[1]));
        let angles: Vec<Vec<(f64, f64)>> = layout
            .n_dirs()
            .iter()
            .map(|&n| pairs.by_ref().take(n).collect())
            .collect();
        Self::from_angles(layout.dims(), &angles)
    }

    pub fn layout(&self) -> Result<Layout> {
        Layout::new(
            self.subsystems.iter().map(|s| s.dim).collect(),
            self.subsystems.iter().map(|s| s.dirs.len()).collect(),
        )
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    /// `theta, phi` of every direction, subsystem 1 first.
    pub fn to_flat(&self) -> Vec<f64> {
        self.subsystems
            .iter()
            .flat_map(|s| s.dirs.iter().flat_map(|d| [d.theta, d.phi]))
            .collect()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let set: DirectionSet = serde_json::from_str(s)?;
        Self::new(set.subsystems)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain numeric data serializes")
    }
}

pub fn su2_unitary(dir: EulerDirection) -> ComplexMatrix {
    let (s, c) = (dir.theta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, dir.phi);
    let mut u = ComplexMatrix::zeros(2, 2);
    u[(0, 0)] = Complex64::new(c, 0.0);
    u[(0, 1)] = e * s;
    u[(1, 0)] = -e.conj() * s;
    u[(1, 1)] = Complex64::new(c, 0.0);
    u
}

pub fn spin1_unitary(dir: EulerDirection) -> ComplexMatrix {
    let (s, c) = dir.theta.sin_cos();
    let r = s / std::f64::consts::SQRT_2;
    // Wigner small-d matrix for j = 1.
    let small_d = [
        [(1.0 + c) / 2.0, -r, (1.0 - c) / 2.0],
        [r, c, -r],
        [(1.0 - c) / 2.0, r, (1.0 + c) / 2.0],
    ];
    let phases = [
        Complex64::from_polar(1.0, -dir.phi),
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, dir.phi),
    ];
    ComplexMatrix::from_fn(3, 3, |i, j| phases[i] * small_d[i][j])
}

/// Rotation family registered for a subsystem dimension.
pub fn rotation_for(dim: usize, dir: EulerDirection) -> Result<ComplexMatrix> {
    match dim {
        2 => Ok(su2_unitary(dir)),
        3 => Ok(spin1_unitary(dir)),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Outcome distribution `diag(U†ρU)` after rotating by `u`.
pub fn tomogram(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = rho.dim();
    if u.rows() != n || u.cols() != n {
        return Err(Error::Shape(format!(
            "rotation is {}x{}, state is {n}x{n}",
            u.rows(),
            u.cols()
        )));
    }
    let residual = u.unitarity_residual();
    if residual.is_nan() || residual > UNITARY_TOL {
        return Err(Error::NotUnitary(residual));
    }
    let rotated = u.dagger().matmul(rho.matrix())?.matmul(u)?;
    let raw: Vec<f64> = rotated.diag()?.into_iter().map(|z| z.re).collect();
    finalize_probabilities(raw)
}

fn finalize_probabilities(mut w: Vec<f64>) -> Result<Vec<f64>> {
    for (index, value) in w.iter_mut().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("tomogram entry {index}")));
        }
        if *value < -CLAMP_TOL {
            return Err(Error::NegativeProbability {
                index,
                value: *value,
            });
        }
        if *value < 0.0 {
            *value = 0.0;
        }
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidProbability(format!("tomogram sums to {sum}")));
    }
    Ok(w)
}

/// A fixed state prepared for repeated tomography under changing directions.
///
/// Uses the non-zero entries of `ρ` and the per-subsystem rotations directly,
/// without forming the full product unitary.
#[derive(Debug, Clone)]
pub struct TomographyModel {
    layout_dims: Vec<usize>,
    n_outcomes: usize,
    /// `(row digits, column digits, value)` for each non-zero entry of ρ.
    entries: Vec<(Vec<usize>, Vec<usize>, Complex64)>,
    /// Outcome digits for every outcome index.
    outcome_digits: Vec<Vec<usize>>,
}

impl TomographyModel {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let dims = rho.dims().to_vec();
        for &d in &dims {
            if d != 2 && d != 3 {
                return Err(Error::UnsupportedDimension(d));
            }
        }
        let outcome_layout = Layout::square(&dims)?;
        let n = rho.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = rho.matrix()[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((
                        outcome_layout.outcome_digits(i),
                        outcome_layout.outcome_digits(j),
                        v,
                    ));
                }
            }
        }
        Ok(Self {
            layout_dims: dims,
            n_outcomes: n,
            entries,
            outcome_digits: (0..n).map(|r| outcome_layout.outcome_digits(r)).collect(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.layout_dims
    }

    /// Rotations for every direction, grouped per subsystem.
    pub fn rotations(&self, dirs: &DirectionSet) -> Result<Vec<Vec<ComplexMatrix>>> {
        if dirs.dims() != self.layout_dims {
            return Err(Error::Shape(format!(
                "directions for dims {:?}, state has dims {:?}",
                dirs.dims(),
                self.layout_dims
            )));
        }
        dirs.subsystems
            .iter()
            .map(|s| s.dirs.iter().map(|&d| rotation_for(s.dim, d)).collect())
            .collect()
    }

    /// Tomogram for one direction per subsystem.
    pub fn column(&self, rotations: &[&ComplexMatrix]) -> Result<Vec<f64>> {
        let mut w = vec![0.0; self.n_outcomes];
        for (r, digits) in self.outcome_digits.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (row, col, value) in &self.entries {
                let mut term = *value;
                for (k, u) in rotations.iter().enumerate() {
                    term *= u[(row[k], digits[k])].conj() * u[(col[k], digits[k])];
                }
                acc += term;
            }
            w[r] = acc.re;
        }
        finalize_probabilities(w)
    }

    pub fn stochastic(&self, dirs: &DirectionSet) -> Result<StochasticMatrix> {
        let layout = dirs.layout()?;
        let rotations = self.rotations(dirs)?;
        let mut entries = RealMatrix::zeros(layout.n_outcomes(), layout.n_combos());
        for combo in 0..layout.n_combos() {
            let picked: Vec<&ComplexMatrix> = layout
                .combo_digits(combo)
                .iter()
                .enumerate()
                .map(|(k, &i)| &rotations[k][i])
                .collect();
            for (r, p) in self.column(&picked)?.into_iter().enumerate() {
                entries[(r, combo)] = p;
            }
        }
        StochasticMatrix::new(layout, entries)
    }
}

/// Quantum stochastic matrix: one tomogram per direction combination.
pub fn stochastic_from_directions(
    rho: &DensityMatrix,
    dirs: &DirectionSet,
) -> Result<StochasticMatrix> {
    TomographyModel::new(rho)?.stochastic(dirs)
}
