//! Quantum B-forms over measurement angles and their extrema.
//!
//! The optimizer is a seeded multi-start coordinate search. Each coordinate
//! update scans a coarse grid over the whole angle range and refines the
//! best grid cell with golden-section search; an update is kept only if it
//! does not worsen the objective. Starts run in parallel but are reduced in
//! a fixed order, so results do not depend on the thread count.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::{bform, build_ihat, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::states::{max_entangled_3x3, werner, DensityMatrix, WernerParameter};
use crate::tomography::{wrap_phi, DirectionSet, TomographyModel};

/// Finite-difference step for stationarity checks.
pub const GRADIENT_STEP: f64 = 1e-5;

const GRID_POINTS: usize = 24;
const GOLDEN: f64 = 0.618_033_988_749_894_9;
const POLISH_STEP: f64 = 1e-10;
const POLISH_VALUE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_starts: usize,
    pub seed: u64,
    /// Sweeps stop once no coordinate moves by more than this (radians).
    pub step_tolerance: f64,
    /// Sweeps stop once a full sweep improves the value by less than this.
    pub value_tolerance: f64,
    /// Sweep limit per start.
    pub max_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_starts: 64,
            seed: 0,
            step_tolerance: 1e-5,
            value_tolerance: 1e-7,
            max_iters: 2000,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.n_starts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument(
                "n_starts and max_iters must be positive".into(),
            ));
        }
        if !positive(self.step_tolerance) || !positive(self.value_tolerance) {
            return Err(Error::InvalidArgument(
                "tolerances must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }
}

/// An optimized (or evaluated) B-form together with its angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellEvaluation {
    pub value: f64,
    pub angles: DirectionSet,
    pub c_label: String,
    pub rho_label: String,
    /// False if some start hit the sweep limit before its tolerances.
    pub converged: bool,
    pub sense: Sense,
}

/// `Tr(C·M)` with `M` the quantum stochastic matrix of `rho` at `dirs`.
pub fn quantum_bform(
    c: &CorrelationMatrix,
    rho: &DensityMatrix,
    dirs: &DirectionSet,
) -> Result<f64> {
    BFormObjective::new(c, rho)?.value(dirs)
}

/// The B-form of a fixed `(C, ρ)` pair as a function of the angles.
#[derive(Debug, Clone)]
pub struct BFormObjective {
    c: CorrelationMatrix,
    model: TomographyModel,
}

impl BFormObjective {
    pub fn new(c: &CorrelationMatrix, rho: &DensityMatrix) -> Result<Self> {
        if c.dims() != rho.dims() {
            return Err(Error::Shape(format!(
                "correlator dims {:?} do not match state dims {:?}",
                c.dims(),
                rho.dims()
            )));
        }
        Ok(Self {
            c: c.clone(),
            model: TomographyModel::new(rho)?,
        })
    }

    pub fn layout(&self) -> &Layout {
        self.c.layout()
    }

    pub fn value(&self, dirs: &DirectionSet) -> Result<f64> {
        bform(&self.c, &self.model.stochastic(dirs)?)
    }

    /// Value at a flat `theta, phi, …` vector (see [`DirectionSet::to_flat`]).
    pub fn value_flat(&self, flat: &[f64]) -> Result<f64> {
        self.value(&DirectionSet::from_flat(self.layout(), flat)?)
    }

    /// Central differences; entries are `None` for polar angles within one step of a bound.
    pub fn gradient(&self, flat: &[f64], step: f64) -> Result<Vec<Option<f64>>> {
        let mut x = flat.to_vec();
        (0..flat.len())
            .map(|i| {
                let base = flat[i];
                if i % 2 == 0 && (base < step || base > PI - step) {
                    return Ok(None);
                }
                x[i] = base + step;
                let up = self.value_flat(&x)?;
                x[i] = base - step;
                let down = self.value_flat(&x)?;
                x[i] = base;
                Ok(Some((up - down) / (2.0 * step)))
            })
            .collect()
    }
}

/// Largest finite-difference gradient component at an interior coordinate.
pub fn stationarity_residual(
    c: &CorrelationMatrix,
    rho: &DensityMatrix,
    dirs: &DirectionSet,
) -> Result<f64> {
    let objective = BFormObjective::new(c, rho)?;
    let g = objective.gradient(&dirs.to_flat(), GRADIENT_STEP)?;
    Ok(g.into_iter().flatten().fold(0.0, |m, x| m.max(x.abs())))
}

pub fn maximize(
    c: &CorrelationMatrix,
    rho: &DensityMatrix,
    config: &SearchConfig,
) -> Result<BellEvaluation> {
    optimize(c, rho, config, Sense::Maximize)
}

pub fn minimize(
    c: &CorrelationMatrix,
    rho: &DensityMatrix,
    config: &SearchConfig,
) -> Result<BellEvaluation> {
    optimize(c, rho, config, Sense::Minimize)
}

pub fn optimize(
    c: &CorrelationMatrix,
    rho: &DensityMatrix,
    config: &SearchConfig,
    sense: Sense,
) -> Result<BellEvaluation> {
    config.validate()?;
    let objective = BFormObjective::new(c, rho)?;
    let layout = objective.layout().clone();
    let sign = sense.sign();
    let f = |x: &[f64]| objective.value_flat(x).map(|v| sign * v);

    let mut starts = warm_starts(&layout);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n_angles = 2 * layout.n_directions_total();
    for _ in 0..config.n_starts {
        starts.push(
            (0..n_angles)
                .map(|i| {
                    if i % 2 == 0 {
                        rng.gen_range(0.0..PI)
                    } else {
                        rng.gen_range(0.0..TAU)
                    }
                })
                .collect(),
        );
    }

    let local: Vec<LocalOptimum> = starts
        .par_iter()
        .map(|x0| {
            coordinate_search(
                &f,
                x0,
                config.step_tolerance,
                config.value_tolerance,
                config.max_iters,
            )
        })
        .collect::<Result<_>>()?;

    let converged = local.iter().all(|r| r.converged);
    let best = local
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one start");
    let polished = coordinate_search(&f, &best.x, POLISH_STEP, POLISH_VALUE, config.max_iters)?;
    let angles = DirectionSet::from_flat(&layout, &polished.x)?;
    let value = objective.value(&angles)?;
    Ok(BellEvaluation {
        value,
        angles,
        c_label: c.kind().to_string(),
        rho_label: rho.label().to_string(),
        converged,
        sense,
    })
}

#[derive(Debug, Clone)]
struct LocalOptimum {
    x: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Higher value wins; exact ties go to the lexicographically smaller angles.
fn better(a: &LocalOptimum, b: &LocalOptimum) -> bool {
    match a.value.partial_cmp(&b.value) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => lexicographic(&a.x, &b.x) == Ordering::Less,
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn coordinate_search<F>(
    f: &F,
    x0: &[f64],
    step_tol: f64,
    value_tol: f64,
    max_iters: usize,
) -> Result<LocalOptimum>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x)?;
    for _ in 0..max_iters {
        let before = fx;
        let mut max_step: f64 = 0.0;
        for i in 0..x.len() {
            let old = x[i];
            let (xi, fi) = line_search(f, &mut x, i, fx, step_tol)?;
            x[i] = xi;
            fx = fi;
            let moved = if i % 2 == 0 {
                (xi - old).abs()
            } else {
                let d = (xi - old).rem_euclid(TAU);
                d.min(TAU - d)
            };
            max_step = max_step.max(moved);
        }
        if max_step < step_tol || fx - before < value_tol {
            return Ok(LocalOptimum {
                x,
                value: fx,
                converged: true,
            });
        }
    }
    Ok(LocalOptimum {
        x,
        value: fx,
        converged: false,
    })
}

/// Best value of coordinate `i` given the others; never worse than the current one.
fn line_search<F>(f: &F, x: &mut [f64], i: usize, current: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let is_theta = i.is_multiple_of(2);
    let original = x[i];
    let eval = |t: f64, x: &mut [f64]| -> Result<f64> {
        x[i] = t;
        f(x)
    };

    let (lo, hi, n) = if is_theta {
        (0.0, PI, GRID_POINTS + 1)
    } else {
        (0.0, TAU, GRID_POINTS)
    };
    let spacing = if is_theta {
        PI / GRID_POINTS as f64
    } else {
        TAU / GRID_POINTS as f64
    };
    let mut best = (original, current);
    for k in 0..n {
        let t = lo + spacing * k as f64;
        let v = eval(t, x)?;
        if v > best.1 {
            best = (t, v);
        }
    }

    // Golden-section refinement around the best candidate.
    let (mut a, mut b) = (best.0 - spacing, best.0 + spacing);
    if is_theta {
        a = a.max(lo);
        b = b.min(hi);
    }
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = eval(c, x)?;
    let mut fd = eval(d, x)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = eval(c, x)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = eval(d, x)?;
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    if best.0 == original {
        x[i] = original;
        return Ok((original, current));
    }
    let t = if is_theta {
        best.0.clamp(lo, hi)
    } else {
        wrap_phi(best.0)
    };
    Ok((t, best.1))
}

/// Known good angle sets for the standard layouts, tried before random starts.
#[allow(clippy::approx_constant)]
fn warm_starts(layout: &Layout) -> Vec<Vec<f64>> {
    // (theta, phi) per flattened direction.
    const TWO_QUBIT: &[[(f64, f64); 4]] = &[
        [
            (1.5834, 6.2639),
            (3.1410, 1.8010),
            (2.3620, 0.0190),
            (0.7910, 0.0200),
        ],
        [
            (1.5834, 6.2800),
            (2.3705, 6.2800),
            (2.3705, 6.2800),
            (0.7962, 0.0416),
        ],
        [(PI / 2.0, 0.0), (0.0, PI / 3.0), (0.0, PI), (PI / 4.0, 0.0)],
        [
            (PI / 6.0, PI / 4.0),
            (PI / 4.0, PI / 4.0),
            (PI / 4.0, 0.0),
            (PI / 4.0, PI / 4.0),
        ],
        [
            (1.9244, 1.7351),
            (0.5657, 0.7780),
            (1.9244, 1.7351),
            (0.5657, 0.7780),
        ],
    ];
    const QUBIT_QUTRIT: &[[(f64, f64); 5]] = &[
        [
            (0.2368, 0.0004),
            (0.2538, 3.1450),
            (3.1471, 0.0),
            (3.1292, 0.0),
            (1.6024, 0.0),
        ],
        [(0.0, 0.0), (0.0, 0.0), (PI, 0.0), (PI, 0.0), (PI, 0.0)],
        [
            (0.03, 0.03),
            (0.22, 3.19),
            (3.08, 0.0),
            (3.09, 0.0),
            (1.65, 0.0),
        ],
    ];
    let flatten = |dirs: &[(f64, f64)]| -> Vec<f64> {
        dirs.iter()
            .flat_map(|&(t, p)| {
                // Reflect polar angles past π the same way directions are normalized.
                if t > PI {
                    [TAU - t, wrap_phi(p + PI)]
                } else {
                    [t, p]
                }
            })
            .collect()
    };
    match (layout.dims(), layout.n_dirs()) {
        ([2, 2], [2, 2]) => TWO_QUBIT.iter().map(|s| flatten(s)).collect(),
        ([2, 3], [2, 3]) => QUBIT_QUTRIT.iter().map(|s| flatten(s)).collect(),
        _ => Vec::new(),
    }
}

/// Default Werner grid `0, 0.05, …, 1`.
pub fn default_werner_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WernerPoint {
    pub p: f64,
    pub max: BellEvaluation,
}

/// Maximal two-qubit CHSH value of the Werner state at every grid point.
pub fn werner_sweep(p_grid: &[f64], config: &SearchConfig) -> Result<Vec<WernerPoint>> {
    let c = build_ihat(&[2, 2])?;
    p_grid
        .iter()
        .map(|&p| {
            let rho = werner(WernerParameter::new(p)?);
            Ok(WernerPoint {
                p,
                max: maximize(&c, &rho, config)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleKind {
    Theta,
    Phi,
}

/// One angle of a direction set, addressed by its flattened 1-based direction number.
///
/// Written `theta<k>` or `phi<k>`; direction `k` counts across subsystems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleId {
    pub direction: usize,
    pub kind: AngleKind,
}

impl AngleId {
    fn flat_index(&self, layout: &Layout) -> Result<usize> {
        if self.direction == 0 || self.direction > layout.n_directions_total() {
            return Err(Error::InvalidArgument(format!(
                "direction {} out of range 1..={}",
                self.direction,
                layout.n_directions_total()
            )));
        }
        let offset = match self.kind {
            AngleKind::Theta => 0,
            AngleKind::Phi => 1,
        };
        Ok(2 * (self.direction - 1) + offset)
    }
}

impl fmt::Display for AngleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AngleKind::Theta => write!(f, "theta{}", self.direction),
            AngleKind::Phi => write!(f, "phi{}", self.direction),
        }
    }
}

impl FromStr for AngleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = if let Some(rest) = s.strip_prefix("theta") {
            (AngleKind::Theta, rest)
        } else if let Some(rest) = s.strip_prefix("phi") {
            (AngleKind::Phi, rest)
        } else {
            return Err(Error::Parse(format!(
                "angle id {s:?} must start with theta or phi"
            )));
        };
        let direction = rest
            .parse()
            .map_err(|_| Error::Parse(format!("angle id {s:?} needs a direction number")))?;
        Ok(Self { direction, kind })
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGrid {
    pub angles: Vec<AngleId>,
    /// Varied angle values followed by `B`, first axis slowest.
    pub rows: Vec<Vec<f64>>,
}

impl ScanGrid {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows
            .iter()
            .map(|r| *r.last().expect("rows end with B"))
    }
}

/// Evaluates `B` over the Cartesian grid of one or two varied angles.
pub fn grid_scan(
    c: &CorrelationMatrix,
    rho: &DensityMatrix,
    base: &DirectionSet,
    vary: &[(AngleId, Vec<f64>)],
) -> Result<ScanGrid> {
    if vary.is_empty() || vary.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "scans vary one or two angles, got {}",
            vary.len()
        )));
    }
    let objective = BFormObjective::new(c, rho)?;
    let layout = base.layout()?;
    if &layout != objective.layout() {
        return Err(Error::Shape(
            "base directions do not match the correlator layout".into(),
        ));
    }
    let slots = vary
        .iter()
        .map(|(id, _)| id.flat_index(&layout))
        .collect::<Result<Vec<_>>>()?;
    let base_flat = base.to_flat();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for (_, grid) in vary {
        points = points
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let rows = points
        .into_par_iter()
        .map(|values| {
            let mut x = base_flat.clone();
            for (&slot, &v) in slots.iter().zip(&values) {
                x[slot] = v;
            }
            let b = objective.value_flat(&x)?;
            let mut row = values;
            row.push(b);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(ScanGrid {
        angles: vary.iter().map(|(id, _)| *id).collect(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQutritBound {
    pub evaluation: BellEvaluation,
    /// Largest change of `B` when any single azimuth at the optimum is moved.
    pub phi_sensitivity: f64,
}

/// Maximum of the two-qutrit `Î` form on the corner-entangled state.
pub fn quantum_bound_3x3(config: &SearchConfig) -> Result<TwoQutritBound> {
    let c = build_ihat(&[3, 3])?;
    let rho = max_entangled_3x3();
    let evaluation = maximize(&c, &rho, config)?;
    let objective = BFormObjective::new(&c, &rho)?;
    let base = evaluation.angles.to_flat();
    let mut sensitivity: f64 = 0.0;
    for i in (1..base.len()).step_by(2) {
        for delta in [0.37, 1.9, -2.6] {
            let mut x = base.clone();
            x[i] += delta;
            sensitivity = sensitivity.max((objective.value_flat(&x)? - evaluation.value).abs());
        }
    }
    Ok(TwoQutritBound {
        evaluation,
        phi_sensitivity: sensitivity,
    })
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::states::{ghz_2x2x2, max_entangled_2x2};
    use std::f64::consts::SQRT_2;

    fn quick() -> SearchConfig {
        SearchConfig {
            n_starts: 8,
            ..SearchConfig::default()
        }
    }

    fn dirs22(pairs: [(f64, f64); 4]) -> DirectionSet {
        DirectionSet::from_angles(&[2, 2], &[pairs[..2].to_vec(), pairs[2..].to_vec()]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let bad = SearchConfig {
            n_starts: 0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            step_tolerance: -1.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn tsirelson_point() {
        let c = build_ihat(&[2, 2]).unwrap();
        let rho = max_entangled_2x2();
        let d = dirs22([
            (1.5834, 6.2639),
            (3.1410, 1.8010),
            (2.3620, 0.0190),
            (0.7910, 0.0200),
        ]);
        assert!((quantum_bform(&c, &rho, &d).unwrap() - 2.8284).abs() < 1e-3);
    }

    #[test]
    fn chsh_maximum_and_minimum() {
        let c = build_ihat(&[2, 2]).unwrap();
        let rho = max_entangled_2x2();
        let max = maximize(&c, &rho, &quick()).unwrap();
        assert!((max.value - 2.0 * SQRT_2).abs() < 1e-6, "{}", max.value);
        let min = minimize(&c, &rho, &quick()).unwrap();
        assert!((min.value + 2.0 * SQRT_2).abs() < 1e-6, "{}", min.value);
        assert_eq!(min.sense, Sense::Minimize);
        let again = quantum_bform(&c, &rho, &max.angles).unwrap();
        assert_eq!(again, max.value);
        assert!(stationarity_residual(&c, &rho, &max.angles).unwrap() < 1e-4);
    }

    #[test]
    fn werner_scaling() {
        let cfg = quick();
        let sweep = werner_sweep(&[0.0, 0.5, 1.0], &cfg).unwrap();
        assert!(sweep[0].max.value.abs() < 1e-9);
        assert!((sweep[1].max.value - SQRT_2).abs() < 1e-6);
        assert!((sweep[2].max.value - 2.0 * SQRT_2).abs() < 1e-6);
        assert!(werner_sweep(&[-0.5], &cfg).is_err());
        assert_eq!(default_werner_grid().len(), 21);
    }

    #[test]
    fn angle_ids() {
        let id: AngleId = "theta2".parse().unwrap();
        assert_eq!(
            id,
            AngleId {
                direction: 2,
                kind: AngleKind::Theta
            }
        );
        assert_eq!(id.to_string(), "theta2");
        let l = Layout::square(&[2, 2]).unwrap();
        assert_eq!(
            "phi3".parse::<AngleId>().unwrap().flat_index(&l).unwrap(),
            5
        );
        assert!("theta5".parse::<AngleId>().unwrap().flat_index(&l).is_err());
        assert!("psi1".parse::<AngleId>().is_err());
        assert!("theta".parse::<AngleId>().is_err());
    }

    #[test]
    fn scans() {
        let c = build_ihat(&[2, 2]).unwrap();
        let rho = max_entangled_2x2();
        let base = dirs22([
            (1.5834, 6.2639),
            (3.1410, 1.8010),
            (2.3620, 0.0190),
            (0.7910, 0.0200),
        ]);
        let grid = vec![("theta1".parse().unwrap(), vec![1.0, 1.5834, 2.0])];
        let scan = grid_scan(&c, &rho, &base, &grid).unwrap();
        assert_eq!(scan.rows.len(), 3);
        assert!((scan.rows[1][1] - 2.8284).abs() < 1e-3);

        let two = vec![
            ("theta2".parse().unwrap(), linspace(0.0, PI, 5)),
            ("theta4".parse().unwrap(), linspace(0.0, PI, 4)),
        ];
        let scan = grid_scan(&c, &rho, &base, &two).unwrap();
        assert_eq!(scan.rows.len(), 20);
        assert_eq!(scan.rows[4][..2], [PI / 4.0, 0.0]);

        let mixed = werner(WernerParameter::new(0.0).unwrap());
        let scan = grid_scan(&c, &mixed, &base, &two).unwrap();
        assert!(scan.values().all(|b| b.abs() < 1e-12));
        assert!(grid_scan(&c, &rho, &base, &[]).is_err());
    }

    #[test]
    fn determinism_and_scaling() {
        let c = build_ihat(&[2, 2]).unwrap();
        let rho = werner(WernerParameter::new(0.8).unwrap());
        let cfg = SearchConfig::with_seed(3);
        let a = maximize(&c, &rho, &cfg).unwrap();
        let b = maximize(&c, &rho, &cfg).unwrap();
        assert_eq!(a, b);
        let doubled = maximize(&c.scaled(2.0), &rho, &cfg).unwrap();
        assert_eq!(doubled.value, 2.0 * a.value);
    }

    #[test]
    fn ghz_form_is_evaluable() {
        let c = build_ihat(&[2, 2, 2]).unwrap();
        let dirs = DirectionSet::from_angles(
            &[2, 2, 2],
            &[
                vec![(0.0, 0.0); 2],
                vec![(0.0, 0.0); 2],
                vec![(0.0, 0.0); 2],
            ],
        )
        .unwrap();
        // The three-fold z parity averages to zero on GHZ.
        let b = quantum_bform(&c, &ghz_2x2x2(), &dirs).unwrap();
        assert!(b.abs() < 1e-12);
    }

    #[test]
    fn mismatched_inputs() {
        let c = build_ihat(&[2, 3]).unwrap();
        assert!(maximize(&c, &max_entangled_2x2(), &quick()).is_err());
    }
}
