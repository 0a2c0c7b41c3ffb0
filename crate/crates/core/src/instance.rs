//! The Potts instance `(G, c, w, L)` and its exact energy.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::labeling::Labeling;
use crate::rational::{int, Rational};

/// An undirected weighted edge. Endpoints are stored with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// A node cost before normalization; `Infinite` forbids a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawCost {
    Finite(Rational),
    Infinite,
}

/// A uniform metric labeling instance with exact nonnegative costs and weights.
///
/// Instances are immutable once built. Infinite costs are replaced at
/// construction by a finite big-M that no optimal labeling (integral or
/// fractional) can afford.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    num_labels: usize,
    names: Vec<String>,
    costs: Vec<Vec<Rational>>,
    edges: Vec<Edge>,
}

impl Instance {
    /// Builds an instance from finite costs. Node names default to `n0, n1, ...`.
    pub fn new(
        num_labels: usize,
        costs: Vec<Vec<Rational>>,
        edges: Vec<(usize, usize, Rational)>,
    ) -> Result<Self> {
        let raw = costs
            .into_iter()
            .map(|row| row.into_iter().map(RawCost::Finite).collect())
            .collect();
        Self::from_raw(num_labels, None, raw, edges, None)
    }

    /// Builds an instance allowing infinite costs and explicit node names.
    ///
    /// `big_m` overrides the finite stand-in for infinite costs; it must be
    /// at least the default `1 + sum(finite costs) + sum(weights)`.
    pub fn from_raw(
        num_labels: usize,
        names: Option<Vec<String>>,
        costs: Vec<Vec<RawCost>>,
        edges: Vec<(usize, usize, Rational)>,
        big_m: Option<Rational>,
    ) -> Result<Self> {
        let n = costs.len();
        if n == 0 {
            return Err(Error::validation("instance must have at least one node"));
        }
        if num_labels == 0 {
            return Err(Error::validation("instance must have at least one label"));
        }
        let names = match names {
            Some(names) => {
                if names.len() != n {
                    return Err(Error::validation("one name per node is required"));
                }
                let unique: HashSet<&String> = names.iter().collect();
                if unique.len() != n {
                    return Err(Error::validation("node names must be unique"));
                }
                names
            }
            None => (0..n).map(|i| format!("n{i}")).collect(),
        };

        let mut finite_total = Rational::zero();
        for (u, row) in costs.iter().enumerate() {
            if row.len() != num_labels {
                return Err(Error::validation(format!(
                    "node {} has {} costs, expected {num_labels}",
                    names[u],
                    row.len()
                )));
            }
            for c in row {
                if let RawCost::Finite(c) = c {
                    if c.is_negative() {
                        return Err(Error::validation(format!(
                            "node {} has a negative cost",
                            names[u]
                        )));
                    }
                    finite_total += c;
                }
            }
        }

        let mut seen = HashSet::new();
        let mut normalized_edges = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::validation(format!("edge ({a},{b}) has an endpoint out of range")));
            }
            if a == b {
                return Err(Error::validation(format!("self-loop on node {}", names[a])));
            }
            if w.is_negative() {
                return Err(Error::validation(format!(
                    "edge ({},{}) has a negative weight",
                    names[a], names[b]
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::validation(format!(
                    "duplicate edge ({},{})",
                    names[u], names[v]
                )));
            }
            finite_total += &w;
            normalized_edges.push(Edge { u, v, weight: w });
        }

        let default_m = finite_total + int(1);
        let big_m = match big_m {
            Some(m) if m < default_m => {
                return Err(Error::validation(format!(
                    "big-M {m} is below the safe threshold {default_m}"
                )))
            }
            Some(m) => m,
            None => default_m,
        };
        let costs = costs
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| match c {
                        RawCost::Finite(c) => c,
                        RawCost::Infinite => big_m.clone(),
                    })
                    .collect()
            })
            .collect();

        Ok(Instance {
            num_labels,
            names,
            costs,
            edges: normalized_edges,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.costs.len()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn costs(&self) -> &[Vec<Rational>] {
        &self.costs
    }

    pub fn cost(&self, node: usize, label: usize) -> &Rational {
        &self.costs[node][label]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.weight.clone()).collect()
    }

    /// Neighbour lists `(neighbour, edge index)` per node.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for (idx, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, idx));
            adj[e.v].push((e.u, idx));
        }
        adj
    }

    /// Whether the graph is a forest (no cycles).
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.num_nodes()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Energy `Q(g)`: node costs plus the weight of every cut edge.
    pub fn energy(&self, g: &Labeling) -> Result<Rational> {
        g.validate(self.num_nodes(), self.num_labels)?;
        Ok(self.energy_unchecked(g.as_slice(), self.edges.iter().map(|e| &e.weight)))
    }

    /// Energy with replacement edge weights (aligned with [`Instance::edges`]).
    pub fn energy_with_weights(&self, weights: &[Rational], g: &Labeling) -> Result<Rational> {
        g.validate(self.num_nodes(), self.num_labels)?;
        if weights.len() != self.edges.len() {
            return Err(Error::validation("one weight per edge is required"));
        }
        Ok(self.energy_unchecked(g.as_slice(), weights.iter()))
    }

    pub(crate) fn energy_unchecked<'a>(
        &self,
        labels: &[usize],
        weights: impl Iterator<Item = &'a Rational>,
    ) -> Rational {
        let mut total: Rational = labels
            .iter()
            .enumerate()
            .map(|(u, &l)| &self.costs[u][l])
            .sum();
        for (e, w) in self.edges.iter().zip(weights) {
            if labels[e.u] != labels[e.v] {
                total += w;
            }
        }
        total
    }

    /// Indices of edges cut by `g`, i.e. `E_g`.
    pub fn cut_edges(&self, g: &Labeling) -> Result<Vec<usize>> {
        g.validate(self.num_nodes(), self.num_labels)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| g.get(e.u) != g.get(e.v))
            .map(|(i, _)| i)
            .collect())
    }

    /// Number of labelings, `k^n`, or `None` on overflow.
    pub fn labeling_count(&self) -> Option<u64> {
        (self.num_labels as u64).checked_pow(u32::try_from(self.num_nodes()).ok()?)
    }

    /// Same graph and costs with every weight replaced.
    pub fn with_weights(&self, weights: &[Rational]) -> Result<Instance> {
        if weights.len() != self.edges.len() {
            return Err(Error::validation("one weight per edge is required"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::validation("weights must be nonnegative"));
        }
        let mut out = self.clone();
        for (e, w) in out.edges.iter_mut().zip(weights) {
            e.weight = w.clone();
        }
        Ok(out)
    }
}
