//! Sign and correlation matrices, stochastic matrices, and the B-form pairing.
//!
//! A correlation matrix `C` is canonically stored direction-combination by
//! outcome; a stochastic matrix `M` is outcome by direction-combination, so
//! `B = Tr(C·M)` is a plain sum over matching positions.

use std::borrow::Cow;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::linalg::RealMatrix;

/// Tolerance on individual stochastic entries falling outside `[0, 1]`.
pub const ENTRY_TOL: f64 = 1e-10;
/// Tolerance on column sums of stochastic matrices and probability vectors.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Measured values attached to each outcome of one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeValues(Vec<f64>);

impl OutcomeValues {
    pub fn for_dim(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Self(vec![1.0, -1.0])),
            3 => Ok(Self(vec![1.0, 0.0, -1.0])),
            _ => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, outcome: usize) -> f64 {
        self.0[outcome]
    }
}

/// Product of outcome values over every subsystem, one entry per outcome tuple.
pub fn outcome_products(dims: &[usize]) -> Result<Vec<f64>> {
    let values = dims
        .iter()
        .map(|&d| OutcomeValues::for_dim(d))
        .collect::<Result<Vec<_>>>()?;
    let mut products = vec![1.0];
    for v in &values {
        products = products
            .iter()
            .flat_map(|&p| v.values().iter().map(move |&x| p * x))
            .collect();
    }
    Ok(products)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Rows are direction combinations, columns are outcome tuples.
    ComboByOutcome,
    /// Rows are outcome tuples, columns are direction combinations.
    OutcomeByCombo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelatorKind {
    Sigma,
    Ihat,
    Phat,
    Custom,
}

impl fmt::Display for CorrelatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelatorKind::Sigma => "sigma",
            CorrelatorKind::Ihat => "ihat",
            CorrelatorKind::Phat => "phat",
            CorrelatorKind::Custom => "custom",
        })
    }
}

impl FromStr for CorrelatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(Self::Sigma),
            "ihat" => Ok(Self::Ihat),
            "phat" => Ok(Self::Phat),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Parse(format!("unknown correlator kind {other:?}"))),
        }
    }
}

/// A matrix `C` defining the B-form `Tr(C·M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    layout: Layout,
    orientation: Orientation,
    entries: RealMatrix,
    kind: CorrelatorKind,
}

impl CorrelationMatrix {
    pub fn new(
        layout: Layout,
        orientation: Orientation,
        entries: RealMatrix,
        kind: CorrelatorKind,
    ) -> Result<Self> {
        let (rows, cols) = match orientation {
            Orientation::ComboByOutcome => (layout.n_combos(), layout.n_outcomes()),
            Orientation::OutcomeByCombo => (layout.n_outcomes(), layout.n_combos()),
        };
        if entries.rows() != rows || entries.cols() != cols {
            return Err(Error::Shape(format!(
                "layout {:?}/{:?} in {orientation:?} orientation needs {rows}x{cols}, got {}x{}",
                layout.dims(),
                layout.n_dirs(),
                entries.rows(),
                entries.cols()
            )));
        }
        Ok(Self {
            layout,
            orientation,
            entries,
            kind,
        })
    }

    pub fn from_canonical(layout: Layout, entries: RealMatrix) -> Result<Self> {
        Self::new(
            layout,
            Orientation::ComboByOutcome,
            entries,
            CorrelatorKind::Custom,
        )
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dims(&self) -> &[usize] {
        self.layout.dims()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn kind(&self) -> CorrelatorKind {
        self.kind
    }

    /// Entries in the orientation they were built or loaded in.
    pub fn stored(&self) -> &RealMatrix {
        &self.entries
    }

    /// Entries as combo × outcome.
    pub fn canonical(&self) -> Cow<'_, RealMatrix> {
        match self.orientation {
            Orientation::ComboByOutcome => Cow::Borrowed(&self.entries),
            Orientation::OutcomeByCombo => Cow::Owned(self.entries.transpose()),
        }
    }

    /// Canonical entry at (combination, outcome).
    pub fn coefficient(&self, combo: usize, outcome: usize) -> f64 {
        match self.orientation {
            Orientation::ComboByOutcome => self.entries[(combo, outcome)],
            Orientation::OutcomeByCombo => self.entries[(outcome, combo)],
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            layout: self.layout.clone(),
            orientation: self.orientation,
            entries: self.entries.scale(factor),
            kind: CorrelatorKind::Custom,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: CorrelationFile = serde_json::from_str(s)?;
        let layout = Layout::new(file.dims, file.n_dirs)?;
        let entries = RealMatrix::from_rows(&file.entries)?;
        Self::new(
            layout,
            file.orientation,
            entries,
            file.label.unwrap_or(CorrelatorKind::Custom),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let file = CorrelationFile {
            dims: self.layout.dims().to_vec(),
            n_dirs: self.layout.n_dirs().to_vec(),
            orientation: self.orientation,
            entries: self.entries.to_rows(),
            label: Some(self.kind),
        };
        serde_json::to_string_pretty(&file).expect("plain numeric data serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CorrelationFile {
    dims: Vec<usize>,
    n_dirs: Vec<usize>,
    orientation: Orientation,
    entries: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<CorrelatorKind>,
}

/// Sign matrix: every column holds the outcome-value products.
///
/// It enters the B-form as the literal product `Tr(σ·M)`, so its row index
/// pairs with the columns of `M`. With constant rows, `B` reduces to the sum
/// of the products, which vanishes.
pub fn build_sigma(dims: &[usize]) -> Result<CorrelationMatrix> {
    let layout = Layout::square(dims)?;
    let products = outcome_products(dims)?;
    let n = products.len();
    let entries = RealMatrix::from_fn(n, n, |r, _| products[r]);
    CorrelationMatrix::new(
        layout,
        Orientation::ComboByOutcome,
        entries,
        CorrelatorKind::Sigma,
    )
}

/// Transposed sign matrix with the last row negated.
pub fn build_ihat(dims: &[usize]) -> Result<CorrelationMatrix> {
    let sigma = build_sigma(dims)?;
    let mut entries = sigma.stored().transpose();
    let last = entries.rows() - 1;
    for j in 0..entries.cols() {
        entries[(last, j)] = -entries[(last, j)];
    }
    CorrelationMatrix::new(
        sigma.layout().clone(),
        Orientation::ComboByOutcome,
        entries,
        CorrelatorKind::Ihat,
    )
}

/// The two-qubit matrix whose B-form depends on one outcome per column.
pub fn build_phat() -> CorrelationMatrix {
    let rows = [
        [1.0, -1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, -1.0],
        [-1.0, 1.0, 1.0, 1.0],
    ];
    let entries = RealMatrix::from_fn(4, 4, |i, j| rows[i][j]);
    CorrelationMatrix::new(
        Layout::square(&[2, 2]).expect("valid layout"),
        Orientation::ComboByOutcome,
        entries,
        CorrelatorKind::Phat,
    )
    .expect("shape fixed")
}

/// Builtin correlator by kind; `phat` exists only for two qubits.
pub fn builtin(kind: CorrelatorKind, dims: &[usize]) -> Result<CorrelationMatrix> {
    match kind {
        CorrelatorKind::Sigma => build_sigma(dims),
        CorrelatorKind::Ihat => build_ihat(dims),
        CorrelatorKind::Phat if dims == [2, 2] => Ok(build_phat()),
        CorrelatorKind::Phat => Err(Error::InvalidArgument(format!(
            "phat is defined only for dims [2, 2], got {dims:?}"
        ))),
        CorrelatorKind::Custom => Err(Error::InvalidArgument(
            "custom correlators must be loaded from a file".into(),
        )),
    }
}

/// Column-stochastic matrix: rows are outcome tuples, columns direction combinations.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    layout: Layout,
    entries: RealMatrix,
}

impl StochasticMatrix {
    pub fn new(layout: Layout, entries: RealMatrix) -> Result<Self> {
        if entries.rows() != layout.n_outcomes() || entries.cols() != layout.n_combos() {
            return Err(Error::Shape(format!(
                "stochastic matrix for {:?}/{:?} must be {}x{}, got {}x{}",
                layout.dims(),
                layout.n_dirs(),
                layout.n_outcomes(),
                layout.n_combos(),
                entries.rows(),
                entries.cols()
            )));
        }
        for c in 0..entries.cols() {
            let mut sum = 0.0;
            for r in 0..entries.rows() {
                let v = entries[(r, c)];
                if !(-ENTRY_TOL..=1.0 + ENTRY_TOL).contains(&v) {
                    return Err(Error::InvalidStochastic(format!(
                        "entry ({r}, {c}) = {v} outside [0, 1]"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidStochastic(format!(
                    "column {c} sums to {sum}"
                )));
            }
        }
        Ok(Self { layout, entries })
    }

    /// Builds from one probability vector per direction combination.
    pub fn from_columns(layout: Layout, columns: &[Vec<f64>]) -> Result<Self> {
        if columns.len() != layout.n_combos() {
            return Err(Error::Shape(format!(
                "expected {} columns, got {}",
                layout.n_combos(),
                columns.len()
            )));
        }
        let n = layout.n_outcomes();
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::Shape(format!(
                "column of length {} where {n} outcomes expected",
                bad.len()
            )));
        }
        let entries = RealMatrix::from_fn(n, columns.len(), |r, c| columns[c][r]);
        Self::new(layout, entries)
    }

    /// Independent uniformly distributed columns on the probability simplex.
    pub fn random<R: Rng + ?Sized>(layout: Layout, rng: &mut R) -> Self {
        let n = layout.n_outcomes();
        let columns: Vec<Vec<f64>> = (0..layout.n_combos())
            .map(|_| random_simplex_point(n, rng))
            .collect();
        Self::from_columns(layout, &columns).expect("sampled columns are normalized")
    }

    /// Product matrix: outcome and combination indices of `self` vary slowest.
    pub fn tensor(&self, other: &StochasticMatrix) -> Result<Self> {
        let layout = Layout::new(
            [self.layout.dims(), other.layout.dims()].concat(),
            [self.layout.n_dirs(), other.layout.n_dirs()].concat(),
        )?;
        let entries = self.entries.kron(&other.entries)?;
        Ok(Self { layout, entries })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }

    pub fn column(&self, combo: usize) -> Vec<f64> {
        self.entries.column(combo)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: StochasticFile = serde_json::from_str(s)?;
        Self::new(
            Layout::new(file.dims, file.n_dirs)?,
            RealMatrix::from_rows(&file.entries)?,
        )
    }

    pub fn to_json(&self) -> String {
        let file = StochasticFile {
            dims: self.layout.dims().to_vec(),
            n_dirs: self.layout.n_dirs().to_vec(),
            entries: self.entries.to_rows(),
        };
        serde_json::to_string_pretty(&file).expect("plain numeric data serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StochasticFile {
    dims: Vec<usize>,
    n_dirs: Vec<usize>,
    entries: Vec<Vec<f64>>,
}

pub fn random_simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    // Normalized exponentials are uniform on the simplex.
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `B = Tr(C·M)` with `C` taken in canonical orientation.
pub fn bform(c: &CorrelationMatrix, m: &StochasticMatrix) -> Result<f64> {
    if c.layout() != m.layout() {
        return Err(Error::Shape(format!(
            "correlator layout {:?}/{:?} does not match stochastic layout {:?}/{:?}",
            c.layout().dims(),
            c.layout().n_dirs(),
            m.layout().dims(),
            m.layout().n_dirs()
        )));
    }
    let n_outcomes = m.layout().n_outcomes();
    let total = (0..m.layout().n_combos())
        .map(|combo| {
            (0..n_outcomes)
                .map(|r| c.coefficient(combo, r) * m.entries()[(r, combo)])
                .sum::<f64>()
        })
        .sum();
    Ok(total)
}

/// Expected product of outcome values under the joint distribution `p`.
pub fn correlation(p: &[f64], dims: &[usize]) -> Result<f64> {
    let products = outcome_products(dims)?;
    if p.len() != products.len() {
        return Err(Error::Shape(format!(
            "probability vector of length {} for dims {dims:?}",
            p.len()
        )));
    }
    check_probability(p)?;
    Ok(p.iter().zip(&products).map(|(a, b)| a * b).sum())
}

pub(crate) fn check_probability(p: &[f64]) -> Result<()> {
    if let Some((i, &v)) = p
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < -ENTRY_TOL)
    {
        return Err(Error::InvalidProbability(format!("entry {i} is {v}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidProbability(format!("sums to {sum}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qubit_matrix(a1: f64, a2: f64) -> StochasticMatrix {
        StochasticMatrix::from_columns(
            Layout::square(&[2]).unwrap(),
            &[vec![a1, 1.0 - a1], vec![a2, 1.0 - a2]],
        )
        .unwrap()
    }

    #[test]
    fn outcome_values_are_fixed_ladders() {
        assert_eq!(OutcomeValues::for_dim(2).unwrap().values(), &[1.0, -1.0]);
        assert_eq!(
            OutcomeValues::for_dim(3).unwrap().values(),
            &[1.0, 0.0, -1.0]
        );
        assert!(matches!(
            OutcomeValues::for_dim(4),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn sigma_columns() {
        let cases: [(&[usize], Vec<f64>); 3] = [
            (&[2, 2], vec![1., -1., -1., 1.]),
            (&[2, 3], vec![1., 0., -1., -1., 0., 1.]),
            (&[3, 3], vec![1., 0., -1., 0., 0., 0., -1., 0., 1.]),
        ];
        for (dims, col) in cases {
            let s = build_sigma(dims).unwrap();
            for j in 0..s.stored().cols() {
                assert_eq!(s.stored().column(j), col);
            }
        }
    }

    #[test]
    fn ihat_rows() {
        let i23 = build_ihat(&[2, 3]).unwrap();
        let row = [1., 0., -1., -1., 0., 1.];
        for c in 0..5 {
            assert_eq!(i23.stored().row(c), &row);
        }
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        assert_eq!(i23.stored().row(5), neg.as_slice());

        let i222 = build_ihat(&[2, 2, 2]).unwrap();
        let row = [1., -1., -1., 1., -1., 1., 1., -1.];
        for c in 0..7 {
            assert_eq!(i222.stored().row(c), &row);
        }
        assert_eq!(i222.stored()[(7, 0)], -1.0);
    }

    #[test]
    fn phat_relates_to_ihat_by_last_column() {
        let p = build_phat();
        assert_eq!(p.stored()[(0, 0)], 1.0);
        assert_eq!(p.stored()[(3, 0)], -1.0);
        let mut flipped = p.stored().clone();
        for r in 0..4 {
            flipped[(r, 3)] = -flipped[(r, 3)];
        }
        assert_eq!(&flipped, build_ihat(&[2, 2]).unwrap().stored());
        assert!(builtin(CorrelatorKind::Phat, &[2, 3]).is_err());
    }

    #[test]
    fn ihat_rule_inverts_to_sigma() {
        for dims in [&[2, 2][..], &[2, 3], &[3, 3], &[2, 2, 2]] {
            let mut m = build_ihat(dims).unwrap().stored().clone();
            let last = m.rows() - 1;
            for j in 0..m.cols() {
                m[(last, j)] = -m[(last, j)];
            }
            assert_eq!(&m.transpose(), build_sigma(dims).unwrap().stored());
        }
    }

    #[test]
    fn ihat_at_the_all_zero_vertex() {
        let m = qubit_matrix(0.0, 0.0)
            .tensor(&qubit_matrix(0.0, 0.0))
            .unwrap();
        assert_eq!(bform(&build_ihat(&[2, 2]).unwrap(), &m).unwrap(), 2.0);
    }

    #[test]
    fn correlations() {
        assert_eq!(correlation(&[1., 0., 0., 0.], &[2, 2]).unwrap(), 1.0);
        assert_eq!(correlation(&[0.25; 4], &[2, 2]).unwrap(), 0.0);
        let p = [0., 0.25, 0.25, 0.25, 0.25, 0.];
        assert!((correlation(&p, &[2, 3]).unwrap() + 0.5).abs() < 1e-15);
        assert!(correlation(&[0.5, 0.4, 0., 0.], &[2, 2]).is_err());
        assert!(correlation(&[1.5, -0.5, 0., 0.], &[2, 2]).is_err());
        assert!(correlation(&[1.0, 0.0], &[2, 2]).is_err());
    }

    #[test]
    fn stochastic_validation() {
        let l = Layout::square(&[2]).unwrap();
        assert!(
            StochasticMatrix::from_columns(l.clone(), &[vec![0.5, 0.6], vec![1., 0.]]).is_err()
        );
        assert!(
            StochasticMatrix::from_columns(l.clone(), &[vec![1.2, -0.2], vec![1., 0.]]).is_err()
        );
        assert!(StochasticMatrix::from_columns(l, &[vec![1., 0.]]).is_err());
    }

    #[test]
    fn bform_rejects_mismatched_layouts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = StochasticMatrix::random(Layout::square(&[2, 3]).unwrap(), &mut rng);
        assert!(bform(&build_ihat(&[2, 2]).unwrap(), &m).is_err());
    }

    #[test]
    fn json_round_trips() {
        for c in [
            build_sigma(&[2, 3]).unwrap(),
            build_ihat(&[3, 3]).unwrap(),
            build_phat(),
        ] {
            assert_eq!(CorrelationMatrix::from_json_str(&c.to_json()).unwrap(), c);
        }
        let raw = r#"{"dims":[2,2],"n_dirs":[2,2],"orientation":"combo_by_outcome",
            "entries":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        let c = CorrelationMatrix::from_json_str(raw).unwrap();
        assert_eq!(c.kind(), CorrelatorKind::Custom);
        let bad = r#"{"dims":[2,2],"n_dirs":[2,2],"orientation":"sideways","entries":[[1]]}"#;
        assert!(CorrelationMatrix::from_json_str(bad).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = StochasticMatrix::random(Layout::square(&[2, 3]).unwrap(), &mut rng);
        assert_eq!(StochasticMatrix::from_json_str(&m.to_json()).unwrap(), m);
    }

    fn any_dims() -> impl Strategy<Value = Vec<usize>> {
        prop_oneof![
            Just(vec![2, 2]),
            Just(vec![2, 3]),
            Just(vec![3, 3]),
            Just(vec![2, 2, 2])
        ]
    }

    proptest! {
        #[test]
        fn sigma_bform_vanishes(dims in any_dims(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = StochasticMatrix::random(Layout::square(&dims).unwrap(), &mut rng);
            let b = bform(&build_sigma(&dims).unwrap(), &m).unwrap();
            prop_assert!(b.abs() < 1e-10);
        }

        #[test]
        fn correlation_is_bounded(dims in any_dims(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = dims.iter().product();
            let p = random_simplex_point(n, &mut rng);
            prop_assert!(correlation(&p, &dims).unwrap().abs() <= 1.0 + 1e-12);
        }

        #[test]
        fn bform_is_bilinear(seed in any::<u64>(), alpha in -3.0..3.0f64, beta in -3.0..3.0f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layout = Layout::square(&[2, 3]).unwrap();
            let rand_c = |rng: &mut ChaCha8Rng| {
                let e = RealMatrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
                CorrelationMatrix::from_canonical(layout.clone(), e).unwrap()
            };
            let c1 = rand_c(&mut rng);
            let c2 = rand_c(&mut rng);
            let m1 = StochasticMatrix::random(layout.clone(), &mut rng);
            let m2 = StochasticMatrix::random(layout.clone(), &mut rng);
            let mix = c1.canonical().scale(alpha).add(&c2.canonical().scale(beta)).unwrap();
            let cmix = CorrelationMatrix::from_canonical(layout.clone(), mix).unwrap();
            let lhs = bform(&cmix, &m1).unwrap();
            let rhs = alpha * bform(&c1, &m1).unwrap() + beta * bform(&c2, &m1).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
            // Convex mixtures stay stochastic.
            let t = (alpha.abs() / 3.0).min(1.0);
            let mm = m1.entries().scale(t).add(&m2.entries().scale(1.0 - t)).unwrap();
            let mmix = StochasticMatrix::new(layout.clone(), mm).unwrap();
            let lhs = bform(&c1, &mmix).unwrap();
            let rhs = t * bform(&c1, &m1).unwrap() + (1.0 - t) * bform(&c1, &m2).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn two_qubit_polynomial(x1 in 0.0..=1.0f64, x2 in 0.0..=1.0f64, y1 in 0.0..=1.0f64, y2 in 0.0..=1.0f64) {
            let m = qubit_matrix(x1, x2).tensor(&qubit_matrix(y1, y2)).unwrap();
            let b = bform(&build_ihat(&[2, 2]).unwrap(), &m).unwrap();
            let poly = 2.0 + 4.0 * x1 * y1 + 4.0 * x1 * y2 - 4.0 * x1 - 4.0 * y1
                - 4.0 * x2 * y2 + 4.0 * x2 * y1;
            prop_assert!((b - poly).abs() < 1e-10);
        }
    }
}
