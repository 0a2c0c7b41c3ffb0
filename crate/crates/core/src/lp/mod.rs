//! The LP relaxation of uniform metric labeling, solved exactly.
//!
//! Two formulations are built:
//!
//! - the half-L1 form, with node variables `ū_i` and, per edge and label, a
//!   gap variable `t ≥ |ū_i − v̄_i|` so that `d(u,v) = ½ Σ_i t_i`;
//! - the local-polytope form, with node marginals `μ_u(i)` and pairwise
//!   marginals `μ_e(ij)` tied together by marginalization constraints.
//!
//! Both optimize to the same value; the node marginals of either optimum
//! form a [`FractionalSolution`].

pub mod simplex;

use num_traits::{One, Zero};

use crate::enumerate;
use crate::error::Result;
use crate::fractional::{fractional_energy, FractionalSolution};
use crate::instance::Instance;
use crate::rational::{frac, Rational};
use simplex::{Constraint, Outcome, Relation};

/// What an LP column stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// `ū_i` (or `μ_u(i)`).
    NodeLabel { node: usize, label: usize },
    /// Linearization of `|ū_i − v̄_i|` on an edge.
    EdgeGap { edge: usize, label: usize },
    /// Pairwise marginal `μ_e(ij)`.
    EdgePair { edge: usize, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct LpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Minimized.
    pub objective: Vec<Rational>,
    num_nodes: usize,
    num_labels: usize,
}

impl LpModel {
    fn with_node_variables(inst: &Instance) -> Self {
        let (n, k) = (inst.num_nodes(), inst.num_labels());
        let mut model = LpModel {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            num_nodes: n,
            num_labels: k,
        };
        for u in 0..n {
            for i in 0..k {
                model.push(Variable::NodeLabel { node: u, label: i }, inst.cost(u, i).clone());
            }
            model.constraints.push(Constraint {
                coeffs: (0..k).map(|i| (model.node_var(u, i), Rational::one())).collect(),
                relation: Relation::Eq,
                rhs: Rational::one(),
            });
        }
        model
    }

    fn push(&mut self, var: Variable, cost: Rational) -> usize {
        self.variables.push(var);
        self.objective.push(cost);
        self.variables.len() - 1
    }

    /// Column of `ū_i` at node `u`.
    pub fn node_var(&self, u: usize, i: usize) -> usize {
        u * self.num_labels + i
    }

    pub fn num_node_variables(&self) -> usize {
        self.num_nodes * self.num_labels
    }

    fn node_marginals(&self, x: &[Rational]) -> Result<FractionalSolution> {
        FractionalSolution::new(
            (0..self.num_nodes)
                .map(|u| (0..self.num_labels).map(|i| x[self.node_var(u, i)].clone()).collect())
                .collect(),
        )
    }
}

/// Half-L1 model: `k·n` node variables plus `k` gap variables per edge.
pub fn build_lp(inst: &Instance) -> LpModel {
    let k = inst.num_labels();
    let mut model = LpModel::with_node_variables(inst);
    let half = frac(1, 2);
    for (idx, e) in inst.edges().iter().enumerate() {
        for i in 0..k {
            let t = model.push(Variable::EdgeGap { edge: idx, label: i }, &e.weight * &half);
            let (a, b) = (model.node_var(e.u, i), model.node_var(e.v, i));
            let one = Rational::one;
            // ū_i − v̄_i − t ≤ 0 and v̄_i − ū_i − t ≤ 0
            model.constraints.push(Constraint {
                coeffs: vec![(a, one()), (b, -one()), (t, -one())],
                relation: Relation::Le,
                rhs: Rational::zero(),
            });
            model.constraints.push(Constraint {
                coeffs: vec![(b, one()), (a, -one()), (t, -one())],
                relation: Relation::Le,
                rhs: Rational::zero(),
            });
        }
    }
    model
}

/// Local-polytope model: node marginals plus `k²` pairwise marginals per edge.
pub fn build_local_polytope(inst: &Instance) -> LpModel {
    let k = inst.num_labels();
    let mut model = LpModel::with_node_variables(inst);
    for (idx, e) in inst.edges().iter().enumerate() {
        let mut pair = vec![vec![0usize; k]; k];
        for (i, row) in pair.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let cost = if i == j { Rational::zero() } else { e.weight.clone() };
                *slot = model.push(Variable::EdgePair { edge: idx, left: i, right: j }, cost);
            }
        }
        for i in 0..k {
            // Σ_j μ_e(ij) = μ_u(i)
            let mut coeffs: Vec<_> = (0..k).map(|j| (pair[i][j], Rational::one())).collect();
            coeffs.push((model.node_var(e.u, i), -Rational::one()));
            model.constraints.push(Constraint {
                coeffs,
                relation: Relation::Eq,
                rhs: Rational::zero(),
            });
        }
        for j in 0..k {
            // Σ_i μ_e(ij) = μ_v(j)
            let mut coeffs: Vec<_> = (0..k).map(|i| (pair[i][j], Rational::one())).collect();
            coeffs.push((model.node_var(e.v, j), -Rational::one()));
            model.constraints.push(Constraint {
                coeffs,
                relation: Relation::Eq,
                rhs: Rational::zero(),
            });
        }
    }
    model
}

/// An optimal vertex of the relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub solution: FractionalSolution,
    /// Equals `fractional_energy(solution)`.
    pub objective: Rational,
    /// Whether the returned vertex is integral.
    pub tight: bool,
}

/// Solves the half-L1 relaxation.
pub fn solve_lp(inst: &Instance) -> Result<LpSolution> {
    solve_with(inst, build_lp)
}

/// Solves the local-polytope relaxation.
pub fn solve_local_polytope(inst: &Instance) -> Result<LpSolution> {
    solve_with(inst, build_local_polytope)
}

fn solve_with(inst: &Instance, build: fn(&Instance) -> LpModel) -> Result<LpSolution> {
    if inst.edges().is_empty() {
        return solve_separable(inst);
    }
    let model = build(inst);
    let (x, value) = match simplex::minimize(model.variables.len(), &model.objective, &model.constraints) {
        Outcome::Optimal { x, value } => (x, value),
        // The uniform labeling is feasible and the objective is nonnegative.
        other => unreachable!("relaxation is feasible and bounded, got {other:?}"),
    };
    let solution = model.node_marginals(&x)?;
    let objective = fractional_energy(inst, &solution)?;
    assert_eq!(objective, value, "edge variables must be tight at an optimum");
    let tight = solution.is_integral();
    Ok(LpSolution {
        solution,
        objective,
        tight,
    })
}

/// Without edges every node independently takes its cheapest label.
fn solve_separable(inst: &Instance) -> Result<LpSolution> {
    let k = inst.num_labels();
    let rows: Vec<Vec<Rational>> = inst
        .costs()
        .iter()
        .map(|row| {
            let best = (0..k).min_by(|&a, &b| row[a].cmp(&row[b])).expect("k ≥ 1");
            (0..k)
                .map(|i| if i == best { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let solution = FractionalSolution::new(rows)?;
    let objective = fractional_energy(inst, &solution)?;
    Ok(LpSolution {
        solution,
        objective,
        tight: true,
    })
}

/// Exact 0/1 test on every coordinate of the returned vertex.
pub fn is_tight(sol: &LpSolution) -> bool {
    sol.solution.is_integral()
}

/// Instance-level tightness: the relaxation's optimal value equals the
/// integral optimum, i.e. some optimal solution of the relaxation is integral.
/// Requires exhaustive enumeration.
pub fn instance_is_tight(inst: &Instance) -> Result<bool> {
    let lp = solve_lp(inst)?;
    let map = enumerate::minimize(inst, &inst.weights())?;
    Ok(lp.objective == map.value)
}
