//! Fractional (relaxed) labelings: per-node probability vectors over labels.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::rational::{frac, is_zero_or_one, Rational};

/// One exact probability vector per node. Every entry is nonnegative and
/// each vector sums to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    values: Vec<Vec<Rational>>,
}

impl FractionalSolution {
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        let k = values.first().map(Vec::len).unwrap_or(0);
        if k == 0 {
            return Err(Error::validation("fractional solution needs at least one node and label"));
        }
        for (u, row) in values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::validation(format!("node {u} has {} entries, expected {k}", row.len())));
            }
            if row.iter().any(|x| x.is_negative()) {
                return Err(Error::validation(format!("node {u} has a negative entry")));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::validation(format!("node {u} sums to {sum}, not 1")));
            }
        }
        Ok(FractionalSolution { values })
    }

    pub fn num_nodes(&self) -> usize {
        self.values.len()
    }

    pub fn num_labels(&self) -> usize {
        self.values[0].len()
    }

    pub fn node(&self, u: usize) -> &[Rational] {
        &self.values[u]
    }

    pub fn value(&self, u: usize, label: usize) -> &Rational {
        &self.values[u][label]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// Whether every coordinate is 0 or 1.
    pub fn is_integral(&self) -> bool {
        self.values.iter().flatten().all(is_zero_or_one)
    }

    /// The labeling this solution encodes, if integral.
    pub fn to_labeling(&self) -> Option<Labeling> {
        if !self.is_integral() {
            return None;
        }
        Some(Labeling::new(
            self.values
                .iter()
                .map(|row| row.iter().position(|x| x.is_one()).expect("integral row has a one"))
                .collect(),
        ))
    }

    /// `d(u,v) = ½‖ū − v̄‖₁`.
    pub fn distance(&self, u: usize, v: usize) -> Rational {
        half_l1(&self.values[u], &self.values[v])
    }

    pub(crate) fn check_shape(&self, inst: &Instance) -> Result<()> {
        if self.num_nodes() != inst.num_nodes() || self.num_labels() != inst.num_labels() {
            return Err(Error::validation(format!(
                "fractional solution is {}x{}, instance is {}x{}",
                self.num_nodes(),
                self.num_labels(),
                inst.num_nodes(),
                inst.num_labels()
            )));
        }
        Ok(())
    }
}

pub(crate) fn half_l1(a: &[Rational], b: &[Rational]) -> Rational {
    let total: Rational = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    total / Rational::from_integer(2.into())
}

/// Relaxed objective `Σ c(u,i)ū_i + Σ w(u,v)d(u,v)`.
pub fn fractional_energy(inst: &Instance, s: &FractionalSolution) -> Result<Rational> {
    fractional_energy_with_weights(inst, &inst.weights(), s)
}

/// Relaxed objective with replacement edge weights.
pub fn fractional_energy_with_weights(
    inst: &Instance,
    weights: &[Rational],
    s: &FractionalSolution,
) -> Result<Rational> {
    s.check_shape(inst)?;
    if weights.len() != inst.edges().len() {
        return Err(Error::validation("one weight per edge is required"));
    }
    let mut total = Rational::zero();
    for (u, row) in s.rows().iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            if !x.is_zero() {
                total += inst.cost(u, i) * x;
            }
        }
    }
    for (e, w) in inst.edges().iter().zip(weights) {
        total += w * s.distance(e.u, e.v);
    }
    Ok(total)
}

/// One-hot encoding of a labeling.
pub fn embed(g: &Labeling, num_labels: usize) -> FractionalSolution {
    let values = g
        .as_slice()
        .iter()
        .map(|&l| {
            (0..num_labels)
                .map(|i| if i == l { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    FractionalSolution { values }
}

/// Convex combination `(1 − ε)a + εb`, with `0 < ε < 1/2`.
pub fn blend(a: &FractionalSolution, b: &FractionalSolution, eps: &Rational) -> Result<FractionalSolution> {
    if !eps.is_positive() || *eps >= frac(1, 2) {
        return Err(Error::validation(format!("blend weight {eps} must lie in (0, 1/2)")));
    }
    if a.num_nodes() != b.num_nodes() || a.num_labels() != b.num_labels() {
        return Err(Error::validation("blended solutions must have the same shape"));
    }
    let keep = Rational::one() - eps;
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| &keep * x + eps * y).collect())
        .collect();
    Ok(FractionalSolution { values })
}

/// An ε-closeness witness: every node puts mass at least `1 − ε` on its anchor label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosenessAnchor {
    pub epsilon: Rational,
    pub labeling: Labeling,
}

impl ClosenessAnchor {
    /// Checks the anchor against a solution.
    pub fn validate(&self, s: &FractionalSolution) -> Result<()> {
        if !self.epsilon.is_positive() || self.epsilon >= frac(1, 2) {
            return Err(Error::validation(format!(
                "closeness epsilon {} must lie in (0, 1/2)",
                self.epsilon
            )));
        }
        self.labeling.validate(s.num_nodes(), s.num_labels())?;
        let floor = Rational::one() - &self.epsilon;
        for u in 0..s.num_nodes() {
            let mass = s.value(u, self.labeling.get(u));
            if *mass < floor {
                return Err(Error::validation(format!(
                    "node {u} puts {mass} < 1 - {} on its anchor label {}",
                    self.epsilon,
                    self.labeling.get(u) + 1
                )));
            }
        }
        Ok(())
    }
}

/// The unique anchor labeling of an ε-close solution, or `None` if some node
/// has no coordinate `≥ 1 − ε`. Requires `0 < ε < 1/2`.
pub fn closeness_anchor(s: &FractionalSolution, eps: &Rational) -> Result<Option<ClosenessAnchor>> {
    if !eps.is_positive() || *eps >= frac(1, 2) {
        return Err(Error::validation(format!("closeness epsilon {eps} must lie in (0, 1/2)")));
    }
    let floor = Rational::one() - eps;
    let mut labels = Vec::with_capacity(s.num_nodes());
    for row in s.rows() {
        match row.iter().position(|x| *x >= floor) {
            Some(j) => labels.push(j),
            None => return Ok(None),
        }
    }
    Ok(Some(ClosenessAnchor {
        epsilon: eps.clone(),
        labeling: Labeling::new(labels),
    }))
}
