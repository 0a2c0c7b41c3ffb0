//! Randomized rounding of ε-close fractional solutions.
//!
//! The scheme draws a label `i` uniformly and a threshold `r` uniformly in
//! `(0, θ)`. Every node with `ū_i ≥ r` takes `i`; every other node falls
//! back to its anchor label `j(u)`. The output is therefore always an
//! `i`-expansion of the anchor.
//!
//! For a fixed `i` the output only changes when `r` crosses one of the
//! values `ū_i(u)`, so the full outcome distribution is a finite list of
//! at most `k·(n + 1)` atoms with exact rational probabilities. That list,
//! not the sampler, is what the guarantees are checked against.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expansion::is_expansion_of;
use crate::fractional::{blend, embed, fractional_energy, ClosenessAnchor, FractionalSolution};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::lp::solve_lp;
use crate::perturbation::Perturbation;
use crate::rational::{frac, int, Rational};
use crate::rng::SeededRng;
use crate::stability::adversarial_perturbation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingParams {
    pub num_labels: usize,
    /// `1/(10k)`.
    pub epsilon: Rational,
    /// `6/(5k)`.
    pub theta: Rational,
}

impl RoundingParams {
    pub fn new(num_labels: usize) -> Result<Self> {
        if num_labels == 0 {
            return Err(Error::validation("rounding needs at least one label"));
        }
        let k = num_labels as i64;
        Ok(RoundingParams {
            num_labels,
            epsilon: frac(1, 10 * k),
            theta: frac(6, 5 * k),
        })
    }

    /// `2/(kθ) = 5/3`, the factor on the cut-probability bound.
    pub fn cut_factor(&self) -> Rational {
        int(2) / (int(self.num_labels as i64) * &self.theta)
    }

    /// `kθ = 6/5`.
    pub fn mass_factor(&self) -> Rational {
        int(self.num_labels as i64) * &self.theta
    }

    /// `1/(kθ) = 5/6`, the factor on the per-node bounds.
    pub fn node_factor(&self) -> Rational {
        self.mass_factor().recip()
    }
}

/// One sampled `(i, r)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Draw {
    pub label: usize,
    pub threshold: Rational,
}

fn check_input(s: &FractionalSolution, anchor: &ClosenessAnchor) -> Result<RoundingParams> {
    anchor.validate(s)?;
    RoundingParams::new(s.num_labels())
}

/// Applies the rounding rule for a fixed label and threshold.
pub fn apply(s: &FractionalSolution, anchor: &ClosenessAnchor, draw: &Draw) -> Labeling {
    Labeling::new(
        (0..s.num_nodes())
            .map(|u| {
                if *s.value(u, draw.label) < draw.threshold {
                    anchor.labeling.get(u)
                } else {
                    draw.label
                }
            })
            .collect(),
    )
}

/// The `(i, r)` pair used by [`round`] for `seed`.
pub fn draw(params: &RoundingParams, seed: u64) -> Draw {
    let mut rng = SeededRng::new(seed);
    let label = rng.below(params.num_labels as u64) as usize;
    let threshold = &params.theta * rng.open_unit();
    Draw { label, threshold }
}

/// One seeded sample of the rounding scheme.
pub fn round(s: &FractionalSolution, anchor: &ClosenessAnchor, seed: u64) -> Result<Labeling> {
    let params = check_input(s, anchor)?;
    Ok(apply(s, anchor, &draw(&params, seed)))
}

/// An outcome for one `(i, r-interval)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub label: usize,
    /// Threshold interval `(lo, hi)` producing this outcome.
    pub lo: Rational,
    pub hi: Rational,
    pub labeling: Labeling,
    pub probability: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    pub atoms: Vec<Atom>,
    /// Distinct outcomes in lexicographic order with their total probability.
    pub support: Vec<(Labeling, Rational)>,
    /// `marginals[u][i] = P[h(u) = i]`.
    pub marginals: Vec<Vec<Rational>>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> Rational {
        self.support.iter().map(|(_, p)| p).sum()
    }

    /// `P[h(u) ≠ h(v)]`.
    pub fn cut_probability(&self, u: usize, v: usize) -> Rational {
        self.support
            .iter()
            .filter(|(h, _)| h.get(u) != h.get(v))
            .map(|(_, p)| p)
            .sum()
    }

    /// `E[f(h)]`.
    pub fn expectation(&self, mut f: impl FnMut(&Labeling) -> Result<Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (h, p) in &self.support {
            total += p * f(h)?;
        }
        Ok(total)
    }
}

/// The exact outcome distribution of [`round`].
pub fn exact_distribution(s: &FractionalSolution, anchor: &ClosenessAnchor) -> Result<OutcomeDistribution> {
    let params = check_input(s, anchor)?;
    let (n, k) = (s.num_nodes(), s.num_labels());
    let weight = (int(k as i64) * &params.theta).recip();
    let mut atoms = Vec::new();
    for i in 0..k {
        let mut cuts: Vec<Rational> = (0..n)
            .map(|u| s.value(u, i).clone())
            .filter(|x| x.is_positive() && *x < params.theta)
            .collect();
        cuts.push(Rational::zero());
        cuts.push(params.theta.clone());
        cuts.sort();
        cuts.dedup();
        for pair in cuts.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            // Any r inside (lo, hi) gives the same outcome; use the upper end.
            let labeling = apply(
                s,
                anchor,
                &Draw {
                    label: i,
                    threshold: hi.clone(),
                },
            );
            atoms.push(Atom {
                label: i,
                lo: lo.clone(),
                hi: hi.clone(),
                labeling,
                probability: (hi - lo) * &weight,
            });
        }
    }
    let mut merged: BTreeMap<Labeling, Rational> = BTreeMap::new();
    let mut marginals = vec![vec![Rational::zero(); k]; n];
    for atom in &atoms {
        *merged.entry(atom.labeling.clone()).or_insert_with(Rational::zero) += &atom.probability;
        for (u, row) in marginals.iter_mut().enumerate() {
            row[atom.labeling.get(u)] += &atom.probability;
        }
    }
    Ok(OutcomeDistribution {
        atoms,
        support: merged.into_iter().collect(),
        marginals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `P[h(u) ≠ j(u)] ≥ (5/6)(1 − ū_{j(u)})`.
    Moves,
    /// `P[h(u) = i] ≤ (5/6)ū_i` for `i ≠ j(u)`.
    Takes,
    /// `P[h(u) = h(v)] ≥ (5/6)(1 − d(u,v))`.
    Joins,
    /// `P[h(u) ≠ h(v)] ≤ (5/3)d(u,v)`.
    Cuts,
}

/// A bound that failed, as `lhs` against `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundViolation {
    pub bound: Bound,
    /// Node, or node pair for the pairwise bounds.
    pub nodes: (usize, usize),
    pub label: Option<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingReport {
    pub violations: Vec<BoundViolation>,
    /// `P[h(u) = i] = (1/k)·min(ū_i, θ)/θ` for all `u`, `i ≠ j(u)`.
    pub marginal_formula: bool,
    /// `ū_i < θ` for all `u`, `i ≠ j(u)`, so the formula reads `(5/6)ū_i`.
    pub clip_inactive: bool,
    pub support_is_expansions: bool,
    pub support_size: usize,
}

impl RoundingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.marginal_formula && self.support_is_expansions
    }
}

/// Checks the four rounding bounds exactly, over every node and every
/// node pair. Refuses `k < 3`.
pub fn verify_rounding_guarantees(s: &FractionalSolution, anchor: &ClosenessAnchor) -> Result<RoundingReport> {
    if s.num_labels() < 3 {
        return Err(Error::Unsupported(format!(
            "rounding guarantees are only established for k >= 3 (got k = {})",
            s.num_labels()
        )));
    }
    let params = check_input(s, anchor)?;
    let dist = exact_distribution(s, anchor)?;
    let (n, k) = (s.num_nodes(), s.num_labels());
    let five_sixths = params.node_factor();
    let cut_factor = params.cut_factor();
    let inv_k = frac(1, k as i64);
    let mut violations = Vec::new();
    let mut marginal_formula = true;
    let mut clip_inactive = true;
    for u in 0..n {
        let j = anchor.labeling.get(u);
        let moved = Rational::one() - &dist.marginals[u][j];
        let floor = &five_sixths * (Rational::one() - s.value(u, j));
        if moved < floor {
            violations.push(BoundViolation {
                bound: Bound::Moves,
                nodes: (u, u),
                label: None,
                lhs: moved,
                rhs: floor,
            });
        }
        for i in (0..k).filter(|&i| i != j) {
            let p = &dist.marginals[u][i];
            let x = s.value(u, i);
            let ceiling = &five_sixths * x;
            if *p > ceiling {
                violations.push(BoundViolation {
                    bound: Bound::Takes,
                    nodes: (u, u),
                    label: Some(i),
                    lhs: p.clone(),
                    rhs: ceiling,
                });
            }
            let clipped = if *x < params.theta { x.clone() } else { params.theta.clone() };
            marginal_formula &= *p == &inv_k * clipped / &params.theta;
            clip_inactive &= *x < params.theta;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let d = s.distance(u, v);
            let cut = dist.cut_probability(u, v);
            let kept = Rational::one() - &cut;
            let floor = &five_sixths * (Rational::one() - &d);
            if kept < floor {
                violations.push(BoundViolation {
                    bound: Bound::Joins,
                    nodes: (u, v),
                    label: None,
                    lhs: kept,
                    rhs: floor,
                });
            }
            let ceiling = &cut_factor * &d;
            if cut > ceiling {
                violations.push(BoundViolation {
                    bound: Bound::Cuts,
                    nodes: (u, v),
                    label: None,
                    lhs: cut,
                    rhs: ceiling,
                });
            }
        }
    }
    Ok(RoundingReport {
        violations,
        marginal_formula,
        clip_inactive,
        support_is_expansions: atoms_are_expansions(&dist, anchor),
        support_size: dist.support.len(),
    })
}

fn atoms_are_expansions(dist: &OutcomeDistribution, anchor: &ClosenessAnchor) -> bool {
    dist.atoms
        .iter()
        .all(|a| is_expansion_of(&anchor.labeling, &a.labeling, a.label))
}

/// Whether every outcome is an expansion of the anchor for the label that generated it.
pub fn support_is_expansions(s: &FractionalSolution, anchor: &ClosenessAnchor) -> Result<bool> {
    Ok(atoms_are_expansions(&exact_distribution(s, anchor)?, anchor))
}

/// Both sides of an expectation inequality `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationCheck {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl ExpectationCheck {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

/// Rounds `(1 − ε)·g + ε·lp` with `ε = 1/(10k)` and compares
/// `E[Q′(g) − Q′(h)]` under the (2,1) adversarial weights for `g` against
/// `(5/6)(Q(g) − Q(ū))`.
pub fn tightness_expectation(inst: &Instance, g: &Labeling, lp: &FractionalSolution) -> Result<ExpectationCheck> {
    let params = RoundingParams::new(inst.num_labels())?;
    let blended = blend(&embed(g, inst.num_labels()), lp, &params.epsilon)?;
    let anchor = ClosenessAnchor {
        epsilon: params.epsilon.clone(),
        labeling: g.clone(),
    };
    let dist = exact_distribution(&blended, &anchor)?;
    let adv = adversarial_perturbation(inst, g, &int(2), &int(1))?;
    let base = inst.energy_with_weights(adv.weights(), g)?;
    let lhs = dist.expectation(|h| Ok(&base - inst.energy_with_weights(adv.weights(), h)?))?;
    let rhs = params.node_factor() * (inst.energy(g)? - fractional_energy(inst, &blended)?);
    Ok(ExpectationCheck { lhs, rhs })
}

/// The (1,2)-perturbation keeping `w` on edges cut by `f` and doubling the rest.
pub fn doubling_perturbation(inst: &Instance, f: &Labeling) -> Result<Perturbation> {
    let cut = inst.cut_edges(f)?;
    let mut weights = inst.weights();
    let mut is_cut = vec![false; weights.len()];
    for e in cut {
        is_cut[e] = true;
    }
    for (w, c) in weights.iter_mut().zip(is_cut) {
        if !c {
            *w *= int(2);
        }
    }
    Perturbation::new(inst, int(1), int(2), weights)
}

/// Rounds `(1 − ε)·f + ε·lp′`, where `lp′` is the LP optimum under
/// [`doubling_perturbation`] for `f`, and compares `E[Q(f) − Q(h)]` against
/// `(5/6)·ε·(Q′(f) − Q′(g))`.
pub fn expansion_expectation(inst: &Instance, f: &Labeling, g: &Labeling) -> Result<ExpectationCheck> {
    let params = RoundingParams::new(inst.num_labels())?;
    let pert = doubling_perturbation(inst, f)?;
    let modified = inst.with_weights(pert.weights())?;
    let lp = solve_lp(&modified)?.solution;
    let blended = blend(&embed(f, inst.num_labels()), &lp, &params.epsilon)?;
    let anchor = ClosenessAnchor {
        epsilon: params.epsilon.clone(),
        labeling: f.clone(),
    };
    let dist = exact_distribution(&blended, &anchor)?;
    let base = inst.energy(f)?;
    let lhs = dist.expectation(|h| Ok(&base - inst.energy(h)?))?;
    let rhs = params.node_factor()
        * &params.epsilon
        * (modified.energy(f)? - modified.energy(g)?);
    Ok(ExpectationCheck { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::brute_force_map;
    use crate::fixtures;
    use crate::fractional::closeness_anchor;
    use proptest::prelude::*;

    fn lab(one_based: &[usize]) -> Labeling {
        Labeling::from_one_based(one_based).unwrap()
    }

    fn figure1_blend() -> (FractionalSolution, ClosenessAnchor) {
        let g = lab(&[3, 3, 3]);
        let s = blend(&embed(&g, 3), &fixtures::figure1_table1b(), &frac(1, 30)).unwrap();
        let anchor = closeness_anchor(&s, &frac(1, 30)).unwrap().unwrap();
        assert_eq!(anchor.labeling, g);
        (s, anchor)
    }

    fn single_node() -> (FractionalSolution, ClosenessAnchor) {
        let s = FractionalSolution::new(vec![vec![frac(28, 30), frac(1, 30), frac(1, 30)]]).unwrap();
        let anchor = ClosenessAnchor {
            epsilon: frac(1, 15),
            labeling: lab(&[1]),
        };
        (s, anchor)
    }

    #[test]
    fn params() {
        let p = RoundingParams::new(3).unwrap();
        assert_eq!(p.epsilon, frac(1, 30));
        assert_eq!(p.theta, frac(2, 5));
        assert!(p.theta > p.epsilon);
        assert_eq!(p.cut_factor(), frac(5, 3));
        assert_eq!(p.mass_factor(), frac(6, 5));
        assert_eq!(p.node_factor(), frac(5, 6));
        let p4 = RoundingParams::new(4).unwrap();
        assert_eq!((p4.epsilon, p4.theta), (frac(1, 40), frac(3, 10)));
    }

    #[test]
    fn integral_input_is_fixed() {
        let g = lab(&[2, 1, 3, 3]);
        let s = embed(&g, 3);
        let anchor = closeness_anchor(&s, &frac(1, 30)).unwrap().unwrap();
        for seed in 0..50 {
            assert_eq!(round(&s, &anchor, seed).unwrap(), g);
        }
        let dist = exact_distribution(&s, &anchor).unwrap();
        assert_eq!(dist.support, vec![(g, int(1))]);
        let report = verify_rounding_guarantees(&s, &anchor).unwrap();
        assert!(report.passed() && report.clip_inactive);
    }

    #[test]
    fn figure1_blend_thresholds() {
        let (s, anchor) = figure1_blend();
        let at = |r: Rational| {
            apply(
                &s,
                &anchor,
                &Draw {
                    label: 1,
                    threshold: r,
                },
            )
        };
        assert_eq!(at(frac(1, 50)), lab(&[3, 3, 3]));
        assert_eq!(at(frac(1, 61)), lab(&[2, 2, 3]));
    }

    #[test]
    fn figure1_blend_distribution() {
        let (s, anchor) = figure1_blend();
        let dist = exact_distribution(&s, &anchor).unwrap();
        assert_eq!(dist.total(), int(1));
        assert!(support_is_expansions(&s, &anchor).unwrap());
        // Each of u, v, w has some label at 1/60: P = (1/3)(1/60)/(2/5) = 1/72.
        assert_eq!(dist.marginals[0][1], frac(1, 72));
        assert_eq!(dist.marginals[1][0], frac(1, 72));
        assert_eq!(dist.marginals[2][0], frac(1, 72));
        assert_eq!(dist.marginals[2][1], int(0));
        let report = verify_rounding_guarantees(&s, &anchor).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.clip_inactive);
    }

    #[test]
    fn single_node_closed_form() {
        let (s, anchor) = single_node();
        let dist = exact_distribution(&s, &anchor).unwrap();
        assert_eq!(dist.marginals[0][1], frac(1, 36));
        assert_eq!(dist.marginals[0][2], frac(1, 36));
        assert_eq!(int(1) - &dist.marginals[0][0], frac(1, 18));
        let report = verify_rounding_guarantees(&s, &anchor).unwrap();
        assert!(report.passed() && report.marginal_formula);
        // Both node bounds are tight here.
        assert_eq!(frac(5, 6) * (int(1) - frac(28, 30)), frac(1, 18));
        assert_eq!(frac(5, 6) * frac(1, 30), frac(1, 36));
    }

    #[test]
    fn clip_applies_above_theta() {
        let s = FractionalSolution::new(vec![vec![frac(6, 10), frac(4, 10), int(0)]]).unwrap();
        let anchor = ClosenessAnchor {
            epsilon: frac(49, 100),
            labeling: lab(&[1]),
        };
        let dist = exact_distribution(&s, &anchor).unwrap();
        // ū_2 = 2/5 = θ, so label 2 is taken for every threshold.
        assert_eq!(dist.marginals[0][1], frac(1, 3));
        let report = verify_rounding_guarantees(&s, &anchor).unwrap();
        assert!(report.marginal_formula);
        assert!(!report.clip_inactive);
    }

    #[test]
    fn refusals() {
        let (s, _) = single_node();
        let loose = ClosenessAnchor {
            epsilon: frac(1, 30),
            labeling: lab(&[1]),
        };
        assert!(round(&s, &loose, 0).is_err());
        assert!(exact_distribution(&s, &loose).is_err());
        let two = FractionalSolution::new(vec![vec![int(1), int(0)]]).unwrap();
        let anchor = closeness_anchor(&two, &frac(1, 20)).unwrap().unwrap();
        assert!(matches!(
            verify_rounding_guarantees(&two, &anchor),
            Err(Error::Unsupported(_))
        ));
        assert!(exact_distribution(&two, &anchor).is_ok());
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let (s, anchor) = figure1_blend();
        let a: Vec<_> = (0..20).map(|seed| round(&s, &anchor, seed).unwrap()).collect();
        let b: Vec<_> = (0..20).map(|seed| round(&s, &anchor, seed).unwrap()).collect();
        assert_eq!(a, b);
        let p = RoundingParams::new(3).unwrap();
        for seed in 0..200 {
            let d = draw(&p, seed);
            assert!(d.label < 3);
            assert!(d.threshold > int(0) && d.threshold < p.theta);
        }
    }

    #[test]
    fn monte_carlo_matches_marginals() {
        let s = FractionalSolution::new(vec![
            vec![frac(29, 30), frac(1, 60), frac(1, 60)],
            vec![frac(1, 40), frac(39, 40), int(0)],
            vec![frac(1, 100), frac(1, 50), frac(97, 100)],
        ])
        .unwrap();
        let anchor = closeness_anchor(&s, &frac(1, 30)).unwrap().unwrap();
        let dist = exact_distribution(&s, &anchor).unwrap();
        let draws = 100_000u64;
        let mut counts = vec![vec![0u64; 3]; 3];
        let params = RoundingParams::new(3).unwrap();
        for seed in 0..draws {
            let h = apply(&s, &anchor, &draw(&params, seed));
            for (u, row) in counts.iter_mut().enumerate() {
                row[h.get(u)] += 1;
            }
        }
        for u in 0..3 {
            for i in 0..3 {
                let p = crate::rational::to_f64(&dist.marginals[u][i]);
                let observed = counts[u][i] as f64 / draws as f64;
                let se = (p * (1.0 - p) / draws as f64).sqrt();
                assert!((observed - p).abs() <= 3.0 * se + 1e-12, "node {u} label {i}: {observed} vs {p}");
            }
        }
    }

    #[test]
    fn figure1_tightness_expectation() {
        let fig1 = fixtures::figure1();
        let check = tightness_expectation(&fig1, &lab(&[3, 3, 3]), &fixtures::figure1_table1b()).unwrap();
        assert!(check.holds(), "{check:?}");
        // Q(g) − Q(ū) = ε(8 − 15/2) > 0 on this instance.
        assert_eq!(check.rhs, frac(5, 6) * frac(1, 30) * frac(1, 2));
    }

    #[test]
    fn figure2_tightness_expectation() {
        let fig2 = fixtures::figure2();
        let g = lab(&[2, 2, 3, 3]);
        let lp = solve_lp(&fig2).unwrap().solution;
        let check = tightness_expectation(&fig2, &g, &lp).unwrap();
        assert!(check.holds(), "{check:?}");
    }

    #[test]
    fn figure1_expansion_expectation_from_every_start() {
        let fig1 = fixtures::figure1();
        let g = brute_force_map(&fig1).unwrap().labeling;
        for code in 0..27 {
            let f = Labeling::new(vec![code / 9, code / 3 % 3, code % 3]);
            let check = expansion_expectation(&fig1, &f, &g).unwrap();
            assert!(check.holds(), "from {f}: {check:?}");
        }
    }

    #[test]
    fn doubling_keeps_cut_edges() {
        let fig2 = fixtures::figure2();
        let p = doubling_perturbation(&fig2, &lab(&[1, 1, 1, 2])).unwrap();
        assert_eq!(p.weights(), &[int(8), int(6), int(3)]);
    }

    fn close_solution(seed: u64, n: usize, k: usize) -> (FractionalSolution, ClosenessAnchor) {
        let mut rng = SeededRng::new(seed);
        let params = RoundingParams::new(k).unwrap();
        let g = Labeling::new((0..n).map(|_| rng.below(k as u64) as usize).collect());
        let noise = FractionalSolution::new(
            (0..n)
                .map(|_| {
                    let raw: Vec<u64> = (0..k).map(|_| rng.up_to(5)).collect();
                    let total: u64 = raw.iter().sum::<u64>().max(1);
                    if raw.iter().all(|&x| x == 0) {
                        (0..k).map(|i| if i == 0 { int(1) } else { int(0) }).collect()
                    } else {
                        raw.iter().map(|&x| frac(x as i64, total as i64)).collect()
                    }
                })
                .collect(),
        )
        .unwrap();
        let eps = &params.epsilon * frac(1 + rng.below(4) as i64, 4);
        let s = blend(&embed(&g, k), &noise, &eps).unwrap();
        let anchor = ClosenessAnchor {
            epsilon: params.epsilon,
            labeling: g,
        };
        (s, anchor)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn guarantees_hold_on_close_inputs(seed in any::<u64>(), n in 1usize..7, k in 3usize..5) {
            let (s, anchor) = close_solution(seed, n, k);
            let dist = exact_distribution(&s, &anchor).unwrap();
            prop_assert_eq!(dist.total(), int(1));
            prop_assert!(dist.atoms.len() <= k * (n + 1));
            prop_assert!(dist.support.iter().all(|(_, p)| *p > int(0)));
            let report = verify_rounding_guarantees(&s, &anchor).unwrap();
            prop_assert!(report.passed(), "{:?}", report);
            prop_assert!(report.clip_inactive);
        }
    }
}
