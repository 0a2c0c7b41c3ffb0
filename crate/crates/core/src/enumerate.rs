//! Exhaustive lexicographic enumeration of labelings.
//!
//! Energies are evaluated on an integer-scaled copy of the objective when
//! every cost and weight fits after multiplying by the common denominator;
//! otherwise the exact rational objective is used directly. Both routes are
//! exact and order-preserving, so comparisons are unaffected by the choice.
//!
//! The labeling space is split into contiguous lexicographic blocks that are
//! scanned in parallel; block results are merged in order, so every reported
//! witness is the lexicographic minimum regardless of scheduling.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::rational::Rational;

/// Largest labeling count any exhaustive routine will enumerate.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

const SCALED_BOUND_BITS: u64 = 96;

/// `k^n`, refusing anything above [`ENUMERATION_LIMIT`].
pub fn check_enumerable(inst: &Instance, what: &'static str) -> Result<u64> {
    match inst.labeling_count() {
        Some(count) if count <= ENUMERATION_LIMIT => Ok(count),
        _ => Err(Error::TooLarge {
            what,
            size: format!("{}^{}", inst.num_labels(), inst.num_nodes()),
            limit: ENUMERATION_LIMIT,
        }),
    }
}

trait Value: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Send + Sync {}
impl Value for i128 {}
impl Value for Rational {}

struct Objective<T> {
    n: usize,
    k: usize,
    costs: Vec<Vec<T>>,
    edges: Vec<(usize, usize, T)>,
}

impl<T: Value> Objective<T> {
    fn eval(&self, labels: &[usize]) -> T {
        let mut total = T::zero();
        for (u, &l) in labels.iter().enumerate() {
            total = total + self.costs[u][l].clone();
        }
        for (u, v, w) in &self.edges {
            if labels[*u] != labels[*v] {
                total = total + w.clone();
            }
        }
        total
    }

    /// Runs `visit` over every labeling, block by block, and returns the
    /// per-block accumulators in lexicographic block order.
    fn visit_blocks<A: Send>(
        &self,
        make: impl Fn() -> A + Sync,
        visit: impl Fn(&mut A, &[usize], T) + Sync,
    ) -> Vec<A> {
        let (n, k) = (self.n, self.k);
        let mut prefix = 0;
        let mut blocks = 1usize;
        while prefix < n && blocks < 256 {
            prefix += 1;
            blocks *= k;
        }
        (0..blocks)
            .into_par_iter()
            .map(|block| {
                let mut acc = make();
                let mut labels = vec![0usize; n];
                let mut rest = block;
                for pos in (0..prefix).rev() {
                    labels[pos] = rest % k;
                    rest /= k;
                }
                loop {
                    let value = self.eval(&labels);
                    visit(&mut acc, &labels, value);
                    // Odometer over the suffix, last node fastest.
                    let mut pos = n;
                    loop {
                        if pos == prefix {
                            return acc;
                        }
                        pos -= 1;
                        labels[pos] += 1;
                        if labels[pos] < k {
                            break;
                        }
                        labels[pos] = 0;
                    }
                }
            })
            .collect()
    }
}

enum Scaled {
    Int(Objective<i128>, BigInt),
    Exact(Objective<Rational>),
}

impl Scaled {
    fn new(inst: &Instance, weights: &[Rational]) -> Scaled {
        let all = || inst.costs().iter().flatten().chain(weights.iter());
        let mut scale = BigInt::one();
        for r in all() {
            scale = scale.lcm(r.denom());
        }
        let to_int = |r: &Rational| -> Option<i128> {
            let x = r.numer() * (&scale / r.denom());
            if x.bits() > SCALED_BOUND_BITS {
                None
            } else {
                x.to_i128()
            }
        };
        let costs: Option<Vec<Vec<i128>>> = inst
            .costs()
            .iter()
            .map(|row| row.iter().map(to_int).collect())
            .collect();
        let edges: Option<Vec<(usize, usize, i128)>> = inst
            .edges()
            .iter()
            .zip(weights)
            .map(|(e, w)| to_int(w).map(|w| (e.u, e.v, w)))
            .collect();
        match (costs, edges) {
            (Some(costs), Some(edges)) => Scaled::Int(
                Objective {
                    n: inst.num_nodes(),
                    k: inst.num_labels(),
                    costs,
                    edges,
                },
                scale,
            ),
            _ => Scaled::Exact(Objective {
                n: inst.num_nodes(),
                k: inst.num_labels(),
                costs: inst.costs().to_vec(),
                edges: inst
                    .edges()
                    .iter()
                    .zip(weights)
                    .map(|(e, w)| (e.u, e.v, w.clone()))
                    .collect(),
            }),
        }
    }
}

fn unscale(v: i128, scale: &BigInt) -> Rational {
    Rational::new(BigInt::from(v), scale.clone())
}

/// The exhaustive minimum of an objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimum {
    /// Lexicographically first minimizer.
    pub labeling: Labeling,
    pub value: Rational,
    /// Number of labelings attaining the minimum.
    pub ties: u64,
}

impl Minimum {
    pub fn is_unique(&self) -> bool {
        self.ties == 1
    }
}

/// Exact minimum of the energy with the given edge weights over all `k^n` labelings.
pub fn minimize(inst: &Instance, weights: &[Rational]) -> Result<Minimum> {
    check_enumerable(inst, "exhaustive minimization")?;
    if weights.len() != inst.edges().len() {
        return Err(Error::validation("one weight per edge is required"));
    }
    Ok(match Scaled::new(inst, weights) {
        Scaled::Int(obj, scale) => {
            let (labels, value, ties) = minimize_generic(&obj);
            Minimum {
                labeling: Labeling::new(labels),
                value: unscale(value, &scale),
                ties,
            }
        }
        Scaled::Exact(obj) => {
            let (labels, value, ties) = minimize_generic(&obj);
            Minimum {
                labeling: Labeling::new(labels),
                value,
                ties,
            }
        }
    })
}

fn minimize_generic<T: Value>(obj: &Objective<T>) -> (Vec<usize>, T, u64) {
    let blocks = obj.visit_blocks(
        || None::<(Vec<usize>, T, u64)>,
        |acc, labels, value| match acc {
            Some((_, best, ties)) if value == *best => *ties += 1,
            Some((_, best, _)) if value > *best => {}
            _ => *acc = Some((labels.to_vec(), value, 1)),
        },
    );
    let mut best: Option<(Vec<usize>, T, u64)> = None;
    for block in blocks.into_iter().flatten() {
        best = match best {
            None => Some(block),
            Some(cur) if block.1 < cur.1 => Some(block),
            Some(mut cur) if block.1 == cur.1 => {
                cur.2 += block.2;
                Some(cur)
            }
            keep => keep,
        };
    }
    best.expect("at least one labeling")
}

/// Comparison of every labeling `h` against a reference `g` under one objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    /// `min Q′(h) − Q′(g)` over the compared labelings; `None` if none were compared.
    pub margin: Option<Rational>,
    /// Lexicographically first compared `h` with `Q′(h) ≤ Q′(g)`.
    pub first_violator: Option<Labeling>,
    /// Nodes on which at least one violator disagrees with `g`.
    pub violated_nodes: Vec<bool>,
    /// Number of labelings compared.
    pub compared: u64,
}

/// Compares every `h ≠ g` against `g`. With `region`, only labelings that
/// disagree with `g` somewhere in the region are compared.
pub fn compare_against(
    inst: &Instance,
    weights: &[Rational],
    g: &Labeling,
    region: Option<&[usize]>,
) -> Result<Comparison> {
    check_enumerable(inst, "exhaustive comparison")?;
    g.validate(inst.num_nodes(), inst.num_labels())?;
    if weights.len() != inst.edges().len() {
        return Err(Error::validation("one weight per edge is required"));
    }
    let region: Vec<usize> = match region {
        Some(r) => {
            if let Some(&bad) = r.iter().find(|&&v| v >= inst.num_nodes()) {
                return Err(Error::validation(format!("region node {bad} out of range")));
            }
            r.to_vec()
        }
        None => (0..inst.num_nodes()).collect(),
    };
    Ok(match Scaled::new(inst, weights) {
        Scaled::Int(obj, scale) => {
            let raw = compare_generic(&obj, g.as_slice(), &region);
            raw.finish(|v| unscale(v, &scale))
        }
        Scaled::Exact(obj) => compare_generic(&obj, g.as_slice(), &region).finish(|v| v),
    })
}

struct RawComparison<T> {
    margin: Option<T>,
    first_violator: Option<Vec<usize>>,
    violated: Vec<bool>,
    compared: u64,
}

impl<T> RawComparison<T> {
    fn finish(self, convert: impl Fn(T) -> Rational) -> Comparison {
        Comparison {
            margin: self.margin.map(convert),
            first_violator: self.first_violator.map(Labeling::new),
            violated_nodes: self.violated,
            compared: self.compared,
        }
    }
}

fn compare_generic<T: Value>(obj: &Objective<T>, g: &[usize], region: &[usize]) -> RawComparison<T> {
    let reference = obj.eval(g);
    let n = obj.n;
    let blocks = obj.visit_blocks(
        || RawComparison::<T> {
            margin: None,
            first_violator: None,
            violated: vec![false; n],
            compared: 0,
        },
        |acc, labels, value| {
            if region.iter().all(|&v| labels[v] == g[v]) {
                return;
            }
            acc.compared += 1;
            let diff = value - reference.clone();
            if diff <= T::zero() {
                if acc.first_violator.is_none() {
                    acc.first_violator = Some(labels.to_vec());
                }
                for (u, seen) in acc.violated.iter_mut().enumerate() {
                    if labels[u] != g[u] {
                        *seen = true;
                    }
                }
            }
            if acc.margin.as_ref().is_none_or(|m| diff < *m) {
                acc.margin = Some(diff);
            }
        },
    );
    let mut out = RawComparison::<T> {
        margin: None,
        first_violator: None,
        violated: vec![false; n],
        compared: 0,
    };
    for block in blocks {
        out.compared += block.compared;
        if out.first_violator.is_none() {
            out.first_violator = block.first_violator;
        }
        for (a, b) in out.violated.iter_mut().zip(&block.violated) {
            *a |= *b;
        }
        out.margin = match (out.margin, block.margin) {
            (Some(a), Some(b)) => Some(if b < a { b } else { a }),
            (a, b) => a.or(b),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    /// Independent sequential oracle over the plain rational energy.
    fn naive_minimum(inst: &Instance, weights: &[Rational]) -> (Labeling, Rational, u64) {
        let (n, k) = (inst.num_nodes(), inst.num_labels());
        let total = k.pow(n as u32);
        let mut best: Option<(Labeling, Rational, u64)> = None;
        for code in 0..total {
            let mut labels = vec![0; n];
            let mut rest = code;
            for pos in (0..n).rev() {
                labels[pos] = rest % k;
                rest /= k;
            }
            let g = Labeling::new(labels);
            let e = inst.energy_with_weights(weights, &g).unwrap();
            best = match best {
                Some((l, b, t)) if e == b => Some((l, b, t + 1)),
                Some(cur) if e > cur.1 => Some(cur),
                _ => Some((g, e, 1)),
            };
        }
        best.unwrap()
    }

    #[test]
    fn fixture_minima() {
        let fig1 = fixtures::figure1();
        let m = minimize(&fig1, &fig1.weights()).unwrap();
        assert_eq!(m.labeling.to_string(), "(3,3,3)");
        assert_eq!(m.value, int(8));
        assert!(m.is_unique());
        let fig2 = fixtures::figure2();
        let m = minimize(&fig2, &fig2.weights()).unwrap();
        assert_eq!(m.labeling.to_string(), "(2,2,3,3)");
        assert_eq!(m.value, int(3));
        assert!(m.is_unique());
    }

    #[test]
    fn scaled_and_naive_agree_with_fractional_weights() {
        let fig2 = fixtures::figure2();
        let weights = vec![frac(7, 3), frac(5, 2), frac(11, 7)];
        let m = minimize(&fig2, &weights).unwrap();
        let (l, v, t) = naive_minimum(&fig2, &weights);
        assert_eq!((m.labeling, m.value, m.ties), (l, v, t));
    }

    #[test]
    fn huge_denominators_fall_back_to_exact_route() {
        let fig2 = fixtures::figure2();
        let big = Rational::new(BigInt::one(), BigInt::from(3).pow(90u32));
        let weights = vec![int(4) + &big, int(3), int(3) - &big];
        assert!(matches!(Scaled::new(&fig2, &weights), Scaled::Exact(_)));
        let m = minimize(&fig2, &weights).unwrap();
        let (l, v, t) = naive_minimum(&fig2, &weights);
        assert_eq!((m.labeling, m.value, m.ties), (l, v, t));
    }

    #[test]
    fn ties_are_counted() {
        let inst = Instance::new(2, vec![vec![int(0), int(0)], vec![int(0), int(0)]], vec![]).unwrap();
        let m = minimize(&inst, &[]).unwrap();
        assert_eq!(m.ties, 4);
        assert_eq!(m.labeling.as_slice(), &[0, 0]);
    }

    #[test]
    fn comparison_on_figure2_adversarial() {
        let fig2 = fixtures::figure2();
        let g = Labeling::from_one_based(&[2, 2, 3, 3]).unwrap();
        let weights = vec![int(2), int(3), frac(3, 2)];
        let c = compare_against(&fig2, &weights, &g, None).unwrap();
        assert_eq!(c.compared, 80);
        assert!(c.first_violator.is_none());
        // (1,1,1,2) scores 7/2 against 3.
        assert!(c.margin.unwrap() > int(0));
        let empty = compare_against(&fig2, &weights, &g, Some(&[])).unwrap();
        assert_eq!(empty.compared, 0);
        assert_eq!(empty.margin, None);
    }

    #[test]
    fn refuses_oversized_spaces() {
        let costs = vec![vec![int(0); 4]; 12];
        let inst = Instance::new(4, costs, vec![]).unwrap();
        assert!(matches!(minimize(&inst, &[]), Err(Error::TooLarge { .. })));
    }
}
