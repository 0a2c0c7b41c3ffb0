//! Alpha-expansion local search.
//!
//! An alpha-expansion of `f` lets every node either keep `f(u)` or switch to
//! `alpha`, and never moves a node away from `alpha`. The optimal expansion
//! is a binary submodular problem solved as a minimum s-t cut; see
//! [`expansion_graph`].
//!
//! Ties between equally good expansions are broken towards the fewest
//! switched nodes, then the lexicographically smallest labeling. The
//! min-cut route realizes this by taking the cut with the smallest
//! `alpha` side, which is unique.

pub mod maxflow;

use num_traits::Zero;

use crate::enumerate;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::rational::Rational;
use maxflow::{min_cut, AuxiliaryCutGraph, MinCut};

/// Largest number of switchable nodes [`brute_force_expansion`] will enumerate.
pub const BRUTE_FORCE_EXPANSION_LIMIT: usize = 20;

/// Whether `h` is an `alpha`-expansion of `f`.
pub fn is_expansion_of(f: &Labeling, h: &Labeling, alpha: usize) -> bool {
    f.len() == h.len()
        && f
            .as_slice()
            .iter()
            .zip(h.as_slice())
            .all(|(&a, &b)| b == a || (b == alpha && a != alpha) || (a == alpha && b == alpha))
}

fn check_move_args(inst: &Instance, f: &Labeling, alpha: usize) -> Result<()> {
    f.validate(inst.num_nodes(), inst.num_labels())?;
    if alpha >= inst.num_labels() {
        return Err(Error::validation(format!(
            "expansion label {} outside 1..{}",
            alpha + 1,
            inst.num_labels()
        )));
    }
    Ok(())
}

/// The cut graph for expanding `alpha` from `f`, with its decoding data.
#[derive(Debug, Clone)]
pub struct ExpansionGraph {
    pub graph: AuxiliaryCutGraph,
    /// Graph node per instance node; `None` for nodes already labeled `alpha`.
    pub node_of: Vec<Option<usize>>,
    /// Energy of the expansion = cut capacity + `offset`.
    pub offset: Rational,
}

/// Builds the auxiliary graph for one expansion move.
///
/// Terminal 0 is the source ("keep `f(u)`"), terminal 1 the sink ("take
/// `alpha`"). Nodes already labeled `alpha` are pinned, so they are folded
/// into the sink instead of getting their own vertex:
///
/// - node `p`: arc source→p of `c(p, alpha)`, arc p→sink of `c(p, f(p))`;
/// - edge to a pinned node: arc p→sink of `w`;
/// - edge with `f(p) = f(q)`: arcs p↔q of `w`;
/// - edge with `f(p) ≠ f(q)`: an auxiliary node `a` with arcs p↔a and
///   a↔q of `w`, and a→sink of `w`.
pub fn expansion_graph(inst: &Instance, f: &Labeling, alpha: usize) -> Result<ExpansionGraph> {
    check_move_args(inst, f, alpha)?;
    let mut graph = AuxiliaryCutGraph::new(2, 0, 1);
    let (source, sink) = (0, 1);
    let mut offset = Rational::zero();
    let node_of: Vec<Option<usize>> = (0..inst.num_nodes())
        .map(|u| {
            if f.get(u) == alpha {
                offset += inst.cost(u, alpha);
                None
            } else {
                Some(graph.add_node())
            }
        })
        .collect();
    for (u, slot) in node_of.iter().enumerate() {
        if let Some(p) = *slot {
            graph.add_arc(source, p, inst.cost(u, alpha).clone());
            graph.add_arc(p, sink, inst.cost(u, f.get(u)).clone());
        }
    }
    for e in inst.edges() {
        match (node_of[e.u], node_of[e.v]) {
            (None, None) => {}
            (Some(p), None) | (None, Some(p)) => graph.add_arc(p, sink, e.weight.clone()),
            (Some(p), Some(q)) if f.get(e.u) == f.get(e.v) => graph.add_undirected(p, q, e.weight.clone()),
            (Some(p), Some(q)) => {
                let a = graph.add_node();
                graph.add_undirected(p, a, e.weight.clone());
                graph.add_undirected(a, q, e.weight.clone());
                graph.add_arc(a, sink, e.weight.clone());
            }
        }
    }
    Ok(ExpansionGraph { graph, node_of, offset })
}

impl ExpansionGraph {
    /// Reads the expansion off a cut: sink-side nodes take `alpha`.
    pub fn decode(&self, f: &Labeling, alpha: usize, cut: &MinCut) -> Labeling {
        Labeling::new(
            self.node_of
                .iter()
                .enumerate()
                .map(|(u, slot)| match slot {
                    Some(p) if !cut.source_side[*p] => alpha,
                    _ => f.get(u),
                })
                .collect(),
        )
    }
}

/// The optimal `alpha`-expansion of `f`, via minimum cut.
pub fn optimal_expansion_move(inst: &Instance, f: &Labeling, alpha: usize) -> Result<Labeling> {
    let eg = expansion_graph(inst, f, alpha)?;
    let cut = min_cut(&eg.graph);
    let h = eg.decode(f, alpha, &cut);
    debug_assert_eq!(inst.energy(&h).ok(), Some(&cut.value + &eg.offset));
    Ok(h)
}

/// The optimal `alpha`-expansion of `f` by enumerating every subset of
/// switchable nodes, with the same tie-break as [`optimal_expansion_move`].
pub fn brute_force_expansion(inst: &Instance, f: &Labeling, alpha: usize) -> Result<Labeling> {
    check_move_args(inst, f, alpha)?;
    let free: Vec<usize> = (0..inst.num_nodes()).filter(|&u| f.get(u) != alpha).collect();
    if free.len() > BRUTE_FORCE_EXPANSION_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force expansion",
            size: format!("{} switchable nodes", free.len()),
            limit: BRUTE_FORCE_EXPANSION_LIMIT as u64,
        });
    }
    let mut best: Option<(Rational, u32, Labeling)> = None;
    for mask in 0u32..(1u32 << free.len()) {
        let mut labels = f.as_slice().to_vec();
        for (bit, &u) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                labels[u] = alpha;
            }
        }
        let h = Labeling::new(labels);
        let energy = inst.energy(&h)?;
        let key = (energy, mask.count_ones(), h);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    Ok(best.expect("the empty move exists").2)
}

/// One accepted move of the local search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptedMove {
    pub alpha: usize,
    pub labeling: Labeling,
    pub energy: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTrace {
    pub initial: Labeling,
    pub initial_energy: Rational,
    pub moves: Vec<AcceptedMove>,
    pub final_labeling: Labeling,
    pub final_energy: Rational,
    /// Full passes over the label set, including the last pass that accepted nothing.
    pub sweeps: usize,
}

/// Alpha-expansion from `init`.
///
/// Each sweep tries every label in ascending order and accepts an optimal
/// expansion only when it strictly lowers the energy. The search stops
/// after a sweep with no accepted move.
pub fn alpha_expansion(inst: &Instance, init: &Labeling) -> Result<ExpansionTrace> {
    let initial_energy = inst.energy(init)?;
    let mut f = init.clone();
    let mut energy = initial_energy.clone();
    let mut moves = Vec::new();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut changed = false;
        for alpha in 0..inst.num_labels() {
            let h = optimal_expansion_move(inst, &f, alpha)?;
            let h_energy = inst.energy(&h)?;
            if h_energy < energy {
                f = h;
                energy = h_energy;
                moves.push(AcceptedMove {
                    alpha,
                    labeling: f.clone(),
                    energy: energy.clone(),
                });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(ExpansionTrace {
        initial: init.clone(),
        initial_energy,
        moves,
        final_labeling: f,
        final_energy: energy,
        sweeps,
    })
}

/// Whether some expansion move strictly lowers the energy of `f`.
pub fn has_improving_move(inst: &Instance, f: &Labeling) -> Result<bool> {
    let base = inst.energy(f)?;
    for alpha in 0..inst.num_labels() {
        if inst.energy(&optimal_expansion_move(inst, f, alpha)?)? < base {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact MAP labeling by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSolution {
    /// Lexicographically first optimum.
    pub labeling: Labeling,
    pub energy: Rational,
    pub unique: bool,
}

/// Exhaustive minimum over all `k^n` labelings (at most 10^7).
pub fn brute_force_map(inst: &Instance) -> Result<MapSolution> {
    let m = enumerate::minimize(inst, &inst.weights())?;
    Ok(MapSolution {
        unique: m.is_unique(),
        labeling: m.labeling,
        energy: m.value,
    })
}
