//! Vertices of the separable stochastic polytope and the Bell-type numbers at them.
//!
//! Each direction of subsystem `k` is described by `d_k − 1` free simplex
//! coordinates; the last outcome takes the remainder. A vertex fixes every
//! free coordinate to 0 or 1. Corners with more than one coordinate set on the
//! same direction are non-physical (the remainder goes negative).

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::correlators::{bform, CorrelationMatrix, StochasticMatrix};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::linalg::RealMatrix;

/// Upper limit on corner enumeration (free coordinates in total).
pub const MAX_FREE_BITS: usize = 24;

/// Tolerance on free coordinates leaving the simplex.
const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    layout: Layout,
    bits: Vec<bool>,
}

impl Vertex {
    pub fn free_bits(layout: &Layout) -> usize {
        layout
            .dims()
            .iter()
            .zip(layout.n_dirs())
            .map(|(d, n)| (d - 1) * n)
            .sum()
    }

    /// Corner number `index` in label order (most significant bit first).
    pub fn from_index(layout: &Layout, index: u64) -> Result<Self> {
        let n = Self::free_bits(layout);
        if n > MAX_FREE_BITS {
            return Err(Error::TooLarge(format!(
                "{n} free coordinates exceed the enumeration limit {MAX_FREE_BITS}"
            )));
        }
        if index >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "corner index {index} out of range for {n} bits"
            )));
        }
        let bits = (0..n).rev().map(|b| (index >> b) & 1 == 1).collect();
        Ok(Self {
            layout: layout.clone(),
            bits,
        })
    }

    pub fn from_label(layout: &Layout, label: &str) -> Result<Self> {
        let bits = label
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "invalid vertex label character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() != Self::free_bits(layout) {
            return Err(Error::Parse(format!(
                "vertex label {label:?} has {} bits, layout needs {}",
                bits.len(),
                Self::free_bits(layout)
            )));
        }
        Ok(Self {
            layout: layout.clone(),
            bits,
        })
    }

    /// Builds the physical vertex selecting `assignments[k][i]` on direction `i` of subsystem `k`.
    pub fn from_assignments(layout: &Layout, assignments: &[Vec<usize>]) -> Result<Self> {
        if assignments.len() != layout.n_subsystems() {
            return Err(Error::Shape(format!(
                "{} subsystem assignments for {} subsystems",
                assignments.len(),
                layout.n_subsystems()
            )));
        }
        let mut bits = Vec::with_capacity(Self::free_bits(layout));
        for ((&d, &n), outcomes) in layout.dims().iter().zip(layout.n_dirs()).zip(assignments) {
            if outcomes.len() != n {
                return Err(Error::Shape(format!(
                    "{} outcomes for {n} directions",
                    outcomes.len()
                )));
            }
            for &a in outcomes {
                if a >= d {
                    return Err(Error::InvalidArgument(format!(
                        "outcome {a} out of range for dimension {d}"
                    )));
                }
                bits.extend((0..d - 1).map(|j| j == a));
            }
        }
        Ok(Self {
            layout: layout.clone(),
            bits,
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn label(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Free coordinates grouped by subsystem, then direction.
    fn coordinate_groups(&self) -> Vec<Vec<&[bool]>> {
        let mut offset = 0;
        self.layout
            .dims()
            .iter()
            .zip(self.layout.n_dirs())
            .map(|(&d, &n)| {
                (0..n)
                    .map(|_| {
                        let group = &self.bits[offset..offset + d - 1];
                        offset += d - 1;
                        group
                    })
                    .collect()
            })
            .collect()
    }

    /// Selected outcome per subsystem and direction, or `None` for a non-physical corner.
    pub fn assignments(&self) -> Option<Vec<Vec<usize>>> {
        self.coordinate_groups()
            .into_iter()
            .map(|dirs| dirs.into_iter().map(outcome_of).collect())
            .collect()
    }

    pub fn is_physical(&self) -> bool {
        self.assignments().is_some()
    }

    /// Column vectors of every direction, remainder included (may be negative).
    pub fn columns(&self) -> Vec<Vec<Vec<i32>>> {
        self.coordinate_groups()
            .into_iter()
            .map(|dirs| {
                dirs.into_iter()
                    .map(|free| {
                        let mut col: Vec<i32> = free.iter().map(|&b| i32::from(b)).collect();
                        col.push(1 - col.iter().sum::<i32>());
                        col
                    })
                    .collect()
            })
            .collect()
    }

    /// The product stochastic matrix at a physical vertex.
    pub fn stochastic_matrix(&self) -> Result<StochasticMatrix> {
        let assignments = self.assignments().ok_or_else(|| {
            Error::InvalidStochastic(format!("vertex {} is non-physical", self.label()))
        })?;
        let mut product: Option<StochasticMatrix> = None;
        for ((&d, &n), outcomes) in self
            .layout
            .dims()
            .iter()
            .zip(self.layout.n_dirs())
            .zip(&assignments)
        {
            let factor = subsystem_vertex_matrix(d, n, outcomes)?;
            product = Some(match product {
                None => factor,
                Some(p) => p.tensor(&factor)?,
            });
        }
        Ok(product.expect("layouts have at least one subsystem"))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn outcome_of(free: &[bool]) -> Option<usize> {
    let mut set = free.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j);
    match (set.next(), set.next()) {
        (None, _) => Some(free.len()),
        (Some(j), None) => Some(j),
        _ => None,
    }
}

/// One subsystem's deterministic stochastic matrix: column `i` is `e_{assignment[i]}`.
pub fn subsystem_vertex_matrix(
    d: usize,
    n_dirs: usize,
    assignment: &[usize],
) -> Result<StochasticMatrix> {
    if assignment.len() != n_dirs {
        return Err(Error::Shape(format!(
            "{} outcomes for {n_dirs} directions",
            assignment.len()
        )));
    }
    if let Some(&a) = assignment.iter().find(|&&a| a >= d) {
        return Err(Error::InvalidArgument(format!(
            "outcome {a} out of range for dimension {d}"
        )));
    }
    let entries = RealMatrix::from_fn(d, n_dirs, |r, c| f64::from(u8::from(assignment[c] == r)));
    StochasticMatrix::new(Layout::new(vec![d], vec![n_dirs])?, entries)
}

/// Lists the corners in label order; non-physical ones only on request.
pub fn enumerate_vertices(layout: &Layout, include_nonphysical: bool) -> Result<Vec<Vertex>> {
    let n = Vertex::free_bits(layout);
    if n > MAX_FREE_BITS {
        return Err(Error::TooLarge(format!(
            "{n} free coordinates exceed the enumeration limit {MAX_FREE_BITS}"
        )));
    }
    let mut out = Vec::new();
    for index in 0..1u64 << n {
        let v = Vertex::from_index(layout, index)?;
        if include_nonphysical || v.is_physical() {
            out.push(v);
        }
    }
    Ok(out)
}

/// Number of physical corners, `Π d_k^{n_k}`.
pub fn physical_vertex_count(layout: &Layout) -> usize {
    layout
        .dims()
        .iter()
        .zip(layout.n_dirs())
        .map(|(&d, &n)| d.pow(n as u32))
        .product()
}

/// One entry of `C` contributing to a Bell-type number, with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexTerm {
    /// Direction combination (row of `C`, zero-based).
    pub combo: usize,
    /// Outcome tuple (column of `C`, zero-based).
    pub outcome: usize,
    /// `+1` at physical vertices; any integer at non-physical corners.
    pub coeff: i32,
}

impl fmt::Display for IndexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = format!("c{}_{}", self.combo + 1, self.outcome + 1);
        match self.coeff {
            1 => write!(f, "{name}"),
            -1 => write!(f, "-{name}"),
            k => write!(f, "{k}*{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellNumber {
    pub value: f64,
    pub vertex: Vertex,
    pub index_set: Vec<IndexTerm>,
}

impl BellNumber {
    pub fn is_physical(&self) -> bool {
        self.vertex.is_physical()
    }

    /// Symbolic sum such as `c1_6 + c2_6 + ...`.
    pub fn formula(&self) -> String {
        let mut s = String::new();
        for (i, t) in self.index_set.iter().enumerate() {
            let term = t.to_string();
            if i == 0 {
                s.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&term);
            }
        }
        s
    }
}

/// Integer coefficients of `M(v)` at every (combo, outcome) with a non-zero entry.
fn vertex_terms(v: &Vertex) -> Vec<IndexTerm> {
    let layout = v.layout();
    let columns = v.columns();
    let mut terms = Vec::new();
    for combo in 0..layout.n_combos() {
        let dirs = layout.combo_digits(combo);
        // Expand the product of per-subsystem columns, keeping non-zero entries.
        let mut partial: Vec<(usize, i32)> = vec![(0, 1)];
        for (k, &dir) in dirs.iter().enumerate() {
            let col = &columns[k][dir];
            let d = col.len();
            partial = partial
                .into_iter()
                .flat_map(|(idx, c)| {
                    col.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(move |(r, &x)| (idx * d + r, c * x))
                })
                .collect();
        }
        terms.extend(partial.into_iter().map(|(outcome, coeff)| IndexTerm {
            combo,
            outcome,
            coeff,
        }));
    }
    terms
}

fn check_layout(c: &CorrelationMatrix, layout: &Layout) -> Result<()> {
    if c.layout() != layout {
        return Err(Error::Shape(format!(
            "correlator layout {:?}/{:?} does not match vertex layout {:?}/{:?}",
            c.layout().dims(),
            c.layout().n_dirs(),
            layout.dims(),
            layout.n_dirs()
        )));
    }
    Ok(())
}

/// Bell-type number of `c` at vertex `v`, with its symbolic index set.
pub fn bell_number_at(c: &CorrelationMatrix, v: &Vertex) -> Result<BellNumber> {
    check_layout(c, v.layout())?;
    let index_set = vertex_terms(v);
    let value = index_set
        .iter()
        .map(|t| f64::from(t.coeff) * c.coefficient(t.combo, t.outcome))
        .sum();
    Ok(BellNumber {
        value,
        vertex: v.clone(),
        index_set,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexValue {
    pub label: String,
    pub value: f64,
    pub physical: bool,
}

#[derive(Debug, Clone)]
pub struct ClassicalBounds {
    /// Largest value over physical vertices (first in label order on ties).
    pub max: BellNumber,
    pub min: BellNumber,
    /// Every enumerated corner in label order.
    pub values: Vec<VertexValue>,
}

impl ClassicalBounds {
    pub fn physical_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().filter(|v| v.physical).map(|v| v.value)
    }
}

/// Exhaustive classical bounds of `c` over its layout's physical vertices.
pub fn classical_bounds(
    c: &CorrelationMatrix,
    include_nonphysical: bool,
) -> Result<ClassicalBounds> {
    let vertices = enumerate_vertices(c.layout(), include_nonphysical)?;
    let values: Vec<VertexValue> = vertices
        .par_iter()
        .map(|v| {
            bell_number_at(c, v).map(|b| VertexValue {
                label: v.label(),
                value: b.value,
                physical: v.is_physical(),
            })
        })
        .collect::<Result<_>>()?;

    let mut best_max: Option<usize> = None;
    let mut best_min: Option<usize> = None;
    for (i, v) in values.iter().enumerate().filter(|(_, v)| v.physical) {
        if best_max.is_none_or(|j| v.value > values[j].value) {
            best_max = Some(i);
        }
        if best_min.is_none_or(|j| v.value < values[j].value) {
            best_min = Some(i);
        }
    }
    let (max_i, min_i) = best_max
        .zip(best_min)
        .expect("every layout has physical vertices");
    Ok(ClassicalBounds {
        max: bell_number_at(c, &vertices[max_i])?,
        min: bell_number_at(c, &vertices[min_i])?,
        values,
    })
}

/// Separable B-form at interior parameters.
///
/// `params[k][i]` holds the `d_k − 1` free coordinates of direction `i` on subsystem `k`.
pub fn evaluate_classical_bform(c: &CorrelationMatrix, params: &[Vec<Vec<f64>>]) -> Result<f64> {
    let layout = c.layout();
    if params.len() != layout.n_subsystems() {
        return Err(Error::Shape(format!(
            "parameters for {} subsystems, layout has {}",
            params.len(),
            layout.n_subsystems()
        )));
    }
    let mut product: Option<StochasticMatrix> = None;
    for ((&d, &n), dirs) in layout.dims().iter().zip(layout.n_dirs()).zip(params) {
        if dirs.len() != n {
            return Err(Error::Shape(format!(
                "{} parameter groups for {n} directions",
                dirs.len()
            )));
        }
        let mut columns = Vec::with_capacity(n);
        for free in dirs {
            if free.len() != d - 1 {
                return Err(Error::Shape(format!(
                    "{} free coordinates for dimension {d}",
                    free.len()
                )));
            }
            let rest = 1.0 - free.iter().sum::<f64>();
            if free.iter().any(|&x| !x.is_finite() || x < -SIMPLEX_TOL) || rest < -SIMPLEX_TOL {
                return Err(Error::InvalidProbability(format!(
                    "coordinates {free:?} leave the simplex"
                )));
            }
            let mut col = free.clone();
            col.push(rest.max(0.0));
            columns.push(col);
        }
        let factor = StochasticMatrix::from_columns(Layout::new(vec![d], vec![n])?, &columns)?;
        product = Some(match product {
            None => factor,
            Some(p) => p.tensor(&factor)?,
        });
    }
    bform(c, &product.expect("layouts have at least one subsystem"))
}

/// B-form on an arbitrary (possibly correlated) stochastic matrix.
pub fn generic_bform(c: &CorrelationMatrix, m: &StochasticMatrix) -> Result<f64> {
    bform(c, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::{build_ihat, build_phat, build_sigma, random_simplex_point};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn layout(dims: &[usize]) -> Layout {
        Layout::square(dims).unwrap()
    }

    #[test]
    fn subsystem_matrices() {
        let m = subsystem_vertex_matrix(2, 2, &[1, 1]).unwrap();
        assert_eq!(m.entries().to_rows(), vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let m = subsystem_vertex_matrix(3, 3, &[0, 2, 1]).unwrap();
        assert_eq!(m.column(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(m.column(1), vec![0.0, 0.0, 1.0]);
        assert_eq!(m.column(2), vec![0.0, 1.0, 0.0]);
        assert!(subsystem_vertex_matrix(3, 2, &[0, 3]).is_err());
    }

    #[test]
    fn qutrit_bit_patterns() {
        let l = Layout::new(vec![3], vec![1]).unwrap();
        let outcome = |label: &str| Vertex::from_label(&l, label).unwrap().assignments();
        assert_eq!(outcome("10"), Some(vec![vec![0]]));
        assert_eq!(outcome("01"), Some(vec![vec![1]]));
        assert_eq!(outcome("00"), Some(vec![vec![2]]));
        assert_eq!(outcome("11"), None);
        let v = Vertex::from_label(&l, "11").unwrap();
        assert_eq!(v.columns(), vec![vec![vec![1, 1, -1]]]);
    }

    #[test]
    fn counts() {
        for (dims, physical, total) in [
            (&[2, 2][..], 16, 16),
            (&[2, 3], 108, 256),
            (&[2, 2, 2], 64, 64),
            (&[3, 3], 729, 4096),
        ] {
            let l = layout(dims);
            assert_eq!(enumerate_vertices(&l, false).unwrap().len(), physical);
            assert_eq!(enumerate_vertices(&l, true).unwrap().len(), total);
            assert_eq!(physical_vertex_count(&l), physical);
        }
    }

    #[test]
    fn labels_round_trip() {
        let l = layout(&[2, 3]);
        for v in enumerate_vertices(&l, true).unwrap() {
            let back = Vertex::from_label(&l, &v.label()).unwrap();
            assert_eq!(back, v);
            if let Some(a) = v.assignments() {
                assert_eq!(Vertex::from_assignments(&l, &a).unwrap(), v);
            }
        }
        assert!(Vertex::from_label(&l, "0101").is_err());
        assert!(Vertex::from_label(&l, "0000000x").is_err());
    }

    #[test]
    fn two_qubit_vertex_value() {
        let c = build_ihat(&[2, 2]).unwrap();
        let v = Vertex::from_label(&layout(&[2, 2]), "0010").unwrap();
        assert_eq!(bell_number_at(&c, &v).unwrap().value, -2.0);
    }

    #[test]
    fn index_sets() {
        let c = build_ihat(&[2, 2, 2]).unwrap();
        let v = Vertex::from_label(c.layout(), "000000").unwrap();
        let b = bell_number_at(&c, &v).unwrap();
        let cells: Vec<(usize, usize)> = b.index_set.iter().map(|t| (t.combo, t.outcome)).collect();
        assert_eq!(cells, (0..8).map(|i| (i, 7)).collect::<Vec<_>>());

        let c = build_ihat(&[2, 3]).unwrap();
        let v = Vertex::from_label(c.layout(), "00000000").unwrap();
        let b = bell_number_at(&c, &v).unwrap();
        let mut cells: Vec<(usize, usize)> =
            b.index_set.iter().map(|t| (t.combo, t.outcome)).collect();
        cells.sort();
        assert_eq!(cells, (0..6).map(|i| (i, 5)).collect::<Vec<_>>());
        assert_eq!(b.formula(), "c1_6 + c2_6 + c3_6 + c4_6 + c5_6 + c6_6");
    }

    #[test]
    fn index_set_sums_reproduce_value_and_direct_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let l = layout(&[2, 3]);
        let entries = RealMatrix::from_fn(6, 6, |_, _| rand::Rng::gen_range(&mut rng, -2.0..2.0));
        let c = CorrelationMatrix::from_canonical(l.clone(), entries).unwrap();
        for v in enumerate_vertices(&l, true).unwrap() {
            let b = bell_number_at(&c, &v).unwrap();
            let sum: f64 = b
                .index_set
                .iter()
                .map(|t| f64::from(t.coeff) * c.coefficient(t.combo, t.outcome))
                .sum();
            assert_eq!(sum, b.value);
            if v.is_physical() {
                assert!(b.index_set.iter().all(|t| t.coeff == 1));
                assert_eq!(b.index_set.len(), l.n_combos());
                let direct = bform(&c, &v.stochastic_matrix().unwrap()).unwrap();
                assert!((direct - b.value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bounds() {
        let b22 = classical_bounds(&build_ihat(&[2, 2]).unwrap(), false).unwrap();
        assert_eq!(b22.max.value, 2.0);
        assert_eq!(b22.min.value, -2.0);
        assert!(b22.values.iter().all(|v| v.value.abs() == 2.0));

        let b23 = classical_bounds(&build_ihat(&[2, 3]).unwrap(), false).unwrap();
        assert_eq!(b23.max.value, 4.0);

        let b222 = classical_bounds(&build_ihat(&[2, 2, 2]).unwrap(), false).unwrap();
        assert_eq!(b222.max.value, 6.0);
        assert!(b222
            .physical_values()
            .all(|x| [0., 2., 4., 6.].contains(&x.abs())));
    }

    #[test]
    fn ties_resolve_to_first_vertex() {
        let b = classical_bounds(&build_ihat(&[2, 2]).unwrap(), false).unwrap();
        let first_max = b.values.iter().find(|v| v.value == 2.0).unwrap();
        assert_eq!(b.max.vertex.label(), first_max.label);
    }

    #[test]
    fn classical_bform_checks() {
        let c = build_ihat(&[2, 2]).unwrap();
        let p = |x1: f64, x2: f64, y1: f64, y2: f64| {
            vec![vec![vec![x1], vec![x2]], vec![vec![y1], vec![y2]]]
        };
        assert_eq!(
            evaluate_classical_bform(&c, &p(1., 1., 1., 0.)).unwrap(),
            2.0
        );
        let s = build_sigma(&[2, 2]).unwrap();
        assert!(
            evaluate_classical_bform(&s, &p(0.5, 0.5, 0.5, 0.5))
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(evaluate_classical_bform(&c, &p(1.2, 0., 0., 0.)).is_err());
        let c3 = build_ihat(&[2, 3]).unwrap();
        let bad = vec![
            vec![vec![0.5], vec![0.5]],
            vec![vec![0.7, 0.7], vec![0.1, 0.1], vec![0., 0.]],
        ];
        assert!(evaluate_classical_bform(&c3, &bad).is_err());
    }

    #[test]
    fn vertex_parameters_agree_with_vertex_numbers() {
        let c = build_ihat(&[2, 3]).unwrap();
        for v in enumerate_vertices(c.layout(), false).unwrap() {
            let params: Vec<Vec<Vec<f64>>> = v
                .columns()
                .into_iter()
                .map(|dirs| {
                    dirs.into_iter()
                        .map(|col| col[..col.len() - 1].iter().map(|&x| f64::from(x)).collect())
                        .collect()
                })
                .collect();
            let direct = evaluate_classical_bform(&c, &params).unwrap();
            assert_eq!(direct, bell_number_at(&c, &v).unwrap().value);
        }
    }

    #[test]
    fn phat_generic_identity_at_unit_columns() {
        let l = layout(&[2, 2]);
        let cols = vec![vec![1.0, 0.0, 0.0, 0.0]; 4];
        let m = StochasticMatrix::from_columns(l, &cols).unwrap();
        assert_eq!(generic_bform(&build_phat(), &m).unwrap(), 2.0);
    }

    proptest! {
        #[test]
        fn interior_points_stay_within_vertex_bounds(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for dims in [vec![2, 2], vec![2, 3], vec![2, 2, 2]] {
                let c = build_ihat(&dims).unwrap();
                let bounds = classical_bounds(&c, false).unwrap();
                let params: Vec<Vec<Vec<f64>>> = dims
                    .iter()
                    .map(|&d| (0..d).map(|_| {
                        let p = random_simplex_point(d, &mut rng);
                        p[..d - 1].to_vec()
                    }).collect())
                    .collect();
                let b = evaluate_classical_bform(&c, &params).unwrap();
                prop_assert!(b <= bounds.max.value + 1e-9);
                prop_assert!(b >= bounds.min.value - 1e-9);
            }
        }
    }
}
