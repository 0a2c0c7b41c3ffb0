//! Exact max-flow / min-cut by shortest augmenting paths.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// A capacitated directed graph with distinguished source and sink.
#[derive(Debug, Clone)]
pub struct AuxiliaryCutGraph {
    num_nodes: usize,
    pub source: usize,
    pub sink: usize,
    arcs: Vec<(usize, usize, Rational)>,
}

impl AuxiliaryCutGraph {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < num_nodes && sink < num_nodes && source != sink);
        AuxiliaryCutGraph {
            num_nodes,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Adds a node and returns its index.
    pub fn add_node(&mut self) -> usize {
        self.num_nodes += 1;
        self.num_nodes - 1
    }

    /// Adds a directed arc. Zero capacities are dropped; negative ones panic.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Rational) {
        assert!(!capacity.is_negative(), "capacities must be nonnegative");
        assert!(from < self.num_nodes && to < self.num_nodes);
        if !capacity.is_zero() {
            self.arcs.push((from, to, capacity));
        }
    }

    /// Adds arcs in both directions, each with `capacity`.
    pub fn add_undirected(&mut self, a: usize, b: usize, capacity: Rational) {
        self.add_arc(a, b, capacity.clone());
        self.add_arc(b, a, capacity);
    }

    pub fn arcs(&self) -> &[(usize, usize, Rational)] {
        &self.arcs
    }

    /// Total capacity of arcs leaving `source_side`.
    pub fn cut_capacity(&self, source_side: &[bool]) -> Rational {
        self.arcs
            .iter()
            .filter(|(a, b, _)| source_side[*a] && !source_side[*b])
            .map(|(_, _, c)| c)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: Rational,
    /// Membership in the source side. Among all minimum cuts this is the one
    /// with the largest source side (the smallest sink side).
    pub source_side: Vec<bool>,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<Rational>,
    out: Vec<Vec<usize>>,
}

/// Computes a maximum flow and returns the minimum cut with maximal source side.
pub fn min_cut(graph: &AuxiliaryCutGraph) -> MinCut {
    let n = graph.num_nodes;
    let mut res = Residual {
        head: Vec::with_capacity(graph.arcs.len() * 2),
        cap: Vec::with_capacity(graph.arcs.len() * 2),
        out: vec![Vec::new(); n],
    };
    for (a, b, c) in &graph.arcs {
        res.out[*a].push(res.head.len());
        res.head.push(*b);
        res.cap.push(c.clone());
        res.out[*b].push(res.head.len());
        res.head.push(*a);
        res.cap.push(Rational::zero());
    }

    let (s, t) = (graph.source, graph.sink);
    let mut flow = Rational::zero();
    loop {
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &e in &res.out[x] {
                let y = res.head[e];
                if !seen[y] && res.cap[e].is_positive() {
                    seen[y] = true;
                    via[y] = Some(e);
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut path = Vec::new();
        let mut x = t;
        while let Some(e) = via[x] {
            path.push(e);
            x = res.head[e ^ 1];
        }
        let bottleneck = path
            .iter()
            .map(|&e| res.cap[e].clone())
            .min()
            .expect("augmenting path is nonempty");
        for &e in &path {
            res.cap[e] -= &bottleneck;
            res.cap[e ^ 1] += &bottleneck;
        }
        flow += bottleneck;
    }

    // Nodes that can still reach the sink form the smallest sink side.
    let mut reaches_sink = vec![false; n];
    reaches_sink[t] = true;
    let mut queue = VecDeque::from([t]);
    while let Some(y) = queue.pop_front() {
        for &e in &res.out[y] {
            let x = res.head[e];
            if !reaches_sink[x] && res.cap[e ^ 1].is_positive() {
                reaches_sink[x] = true;
                queue.push_back(x);
            }
        }
    }
    let source_side: Vec<bool> = reaches_sink.iter().map(|r| !r).collect();
    debug_assert_eq!(graph.cut_capacity(&source_side), flow);
    MinCut {
        value: flow,
        source_side,
    }
}
