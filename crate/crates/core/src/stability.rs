//! Perturbation stability.
//!
//! An instance with optimum `g` is (β, γ)-stable when `g` stays the unique
//! optimum for every reweighting `w/β ≤ w′ ≤ γw`. Only the adversarial
//! reweighting needs checking: it shrinks every edge `g` leaves uncut and
//! grows every edge `g` cuts, which helps each competitor `h` at least as
//! much as any other admissible reweighting does. All verdicts come from an
//! exhaustive comparison under that single reweighting.
//!
//! A tying optimum `h` also violates the adversarial comparison, since the
//! reweighting can only lower `Q′(h) − Q′(g)`. A non-unique optimum is
//! therefore unstable, except under weak stability when the tie agrees with
//! `g` on the stable set. A second pass only runs to report that tie as
//! the witness.

use num_traits::Zero;

use crate::enumerate::{self, Comparison};
use crate::error::{Error, Result};
use crate::expansion::{alpha_expansion, brute_force_map};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::lp::{solve_lp, LpSolution};
use crate::perturbation::{check_params, Perturbation};
use crate::rational::{int, Rational};
use crate::rng::SeededRng;

/// `w/β` on edges `g` leaves uncut, `γw` on edges it cuts.
pub fn adversarial_perturbation(inst: &Instance, g: &Labeling, beta: &Rational, gamma: &Rational) -> Result<Perturbation> {
    check_params(beta, gamma)?;
    let mut weights: Vec<Rational> = inst.weights().into_iter().map(|w| w / beta).collect();
    for e in inst.cut_edges(g)? {
        weights[e] = &inst.edges()[e].weight * gamma;
    }
    Perturbation::new(inst, beta.clone(), gamma.clone(), weights)
}

/// Parameters of a stability question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityQuery {
    pub beta: Rational,
    pub gamma: Rational,
    /// Candidate stable set; `None` asks for full stability.
    pub stable_set: Option<Vec<usize>>,
}

impl StabilityQuery {
    pub fn run(&self, inst: &Instance) -> Result<StabilityReport> {
        match &self.stable_set {
            Some(s) => check_weak_stability(inst, &self.beta, &self.gamma, s),
            None => check_stability(inst, &self.beta, &self.gamma),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdict: bool,
    /// Lexicographically first optimum of the unperturbed instance.
    pub optimal: Labeling,
    pub optimal_energy: Rational,
    pub unique_optimum: bool,
    /// First labeling with `Q′(h) ≤ Q′(g)`, or the tying optimum that caused instability.
    pub witness: Option<Labeling>,
    /// `min Q′(h) − Q′(g)` over the candidates; `None` when there are none.
    pub margin: Option<Rational>,
    pub labelings_checked: u64,
    pub perturbation: Perturbation,
}

fn report(inst: &Instance, beta: &Rational, gamma: &Rational, region: Option<&[usize]>) -> Result<StabilityReport> {
    check_params(beta, gamma)?;
    enumerate::check_enumerable(inst, "stability check")?;
    if let Some(bad) = region.and_then(|r| r.iter().find(|&&v| v >= inst.num_nodes())) {
        return Err(Error::validation(format!("stable-set node {bad} out of range")));
    }
    let map = brute_force_map(inst)?;
    let g = map.labeling;
    let adv = adversarial_perturbation(inst, &g, beta, gamma)?;
    let cmp = enumerate::compare_against(inst, adv.weights(), &g, region)?;
    let mut witness = cmp.first_violator.clone();
    if !map.unique {
        let ties = enumerate::compare_against(inst, &inst.weights(), &g, region)?;
        if ties.first_violator.is_some() {
            witness = ties.first_violator;
        }
    }
    Ok(StabilityReport {
        verdict: witness.is_none(),
        optimal: g,
        optimal_energy: map.energy,
        unique_optimum: map.unique,
        witness,
        margin: cmp.margin,
        labelings_checked: cmp.compared,
        perturbation: adv,
    })
}

/// Exact (β, γ)-stability by exhaustive adversarial comparison.
pub fn check_stability(inst: &Instance, beta: &Rational, gamma: &Rational) -> Result<StabilityReport> {
    report(inst, beta, gamma, None)
}

/// Exact (β, γ, S)-weak stability: only labelings that differ from `g` on `S` must lose.
pub fn check_weak_stability(inst: &Instance, beta: &Rational, gamma: &Rational, stable_set: &[usize]) -> Result<StabilityReport> {
    report(inst, beta, gamma, Some(stable_set))
}

/// The largest weakly stable set: nodes on which no adversarial violator disagrees with `g`.
pub fn maximal_stable_set(inst: &Instance, beta: &Rational, gamma: &Rational) -> Result<Vec<usize>> {
    check_params(beta, gamma)?;
    let g = brute_force_map(inst)?.labeling;
    let adv = adversarial_perturbation(inst, &g, beta, gamma)?;
    let Comparison { violated_nodes, .. } = enumerate::compare_against(inst, adv.weights(), &g, None)?;
    Ok((0..inst.num_nodes()).filter(|&v| !violated_nodes[v]).collect())
}

/// A uniformly random (β, γ)-perturbation, one weight per edge in `[w/β, γw]`.
pub fn random_perturbation(inst: &Instance, beta: &Rational, gamma: &Rational, rng: &mut SeededRng) -> Result<Perturbation> {
    check_params(beta, gamma)?;
    let weights = inst
        .edges()
        .iter()
        .map(|e| rng.between(&(&e.weight / beta), &(&e.weight * gamma)))
        .collect();
    Perturbation::new(inst, beta.clone(), gamma.clone(), weights)
}

/// Samples `trials` random perturbations (trial `t` uses stream `t` of
/// `seed`) and returns the first one under which some `h ≠ g` is at least
/// as good as `g`, with that labeling.
pub fn random_perturbation_search(
    inst: &Instance,
    g: &Labeling,
    beta: &Rational,
    gamma: &Rational,
    trials: u64,
    seed: u64,
) -> Result<Option<(Perturbation, Labeling)>> {
    check_params(beta, gamma)?;
    enumerate::check_enumerable(inst, "perturbation search")?;
    for t in 0..trials {
        let mut rng = SeededRng::with_stream(seed, t);
        let p = random_perturbation(inst, beta, gamma, &mut rng)?;
        if let Some(h) = enumerate::compare_against(inst, p.weights(), g, None)?.first_violator {
            return Ok(Some((p, h)));
        }
    }
    Ok(None)
}

/// Smallest value of `(Q′(g) − Q′(h)) − (Q*(g) − Q*(h))` over all `h ≠ g`, with
/// `Q′` under the adversarial weights for `g` and `Q*` under `sampled`.
/// Nonnegative whenever `sampled` respects the same (β, γ).
pub fn adversarial_dominance_gap(inst: &Instance, g: &Labeling, adversarial: &Perturbation, sampled: &Perturbation) -> Result<Rational> {
    let delta: Vec<Rational> = sampled
        .weights()
        .iter()
        .zip(adversarial.weights())
        .map(|(s, a)| s - a)
        .collect();
    // Costs cancel in the difference, so compare on a cost-free copy.
    let zeros = vec![vec![Rational::zero(); inst.num_labels()]; inst.num_nodes()];
    let bare = Instance::new(
        inst.num_labels(),
        zeros,
        inst.edges().iter().map(|e| (e.u, e.v, e.weight.clone())).collect(),
    )?;
    let cmp = enumerate::compare_against(&bare, &delta, g, None)?;
    Ok(cmp.margin.unwrap_or_else(Rational::zero))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarnessOutcome {
    Pass,
    Fail,
    NotApplicable,
}

impl HarnessOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            HarnessOutcome::Pass => "pass",
            HarnessOutcome::Fail => "fail",
            HarnessOutcome::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessReport {
    pub outcome: HarnessOutcome,
    pub stability: StabilityReport,
    pub lp: Option<LpSolution>,
}

/// On a (2,1)-stable instance the LP must be tight and match the optimum.
pub fn theorem1_harness(inst: &Instance) -> Result<TightnessReport> {
    let stability = check_stability(inst, &int(2), &int(1))?;
    if !stability.verdict {
        return Ok(TightnessReport {
            outcome: HarnessOutcome::NotApplicable,
            stability,
            lp: None,
        });
    }
    let lp = solve_lp(inst)?;
    let ok = lp.tight && lp.objective == stability.optimal_energy && lp.solution.to_labeling().as_ref() == Some(&stability.optimal);
    Ok(TightnessReport {
        outcome: if ok { HarnessOutcome::Pass } else { HarnessOutcome::Fail },
        stability,
        lp: Some(lp),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitRun {
    pub init: Labeling,
    pub final_labeling: Labeling,
    pub final_energy: Rational,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryReport {
    pub outcome: HarnessOutcome,
    pub stability: StabilityReport,
    pub runs: Vec<InitRun>,
}

/// On a (1,2,S)-weakly-stable instance, alpha-expansion from every init must agree with `g` on `S`.
pub fn theorem2_harness(inst: &Instance, stable_set: &[usize], inits: &[Labeling]) -> Result<RecoveryReport> {
    let stability = check_weak_stability(inst, &int(1), &int(2), stable_set)?;
    if !stability.verdict {
        return Ok(RecoveryReport {
            outcome: HarnessOutcome::NotApplicable,
            stability,
            runs: Vec::new(),
        });
    }
    let mut runs = Vec::with_capacity(inits.len());
    for init in inits {
        let trace = alpha_expansion(inst, init)?;
        runs.push(InitRun {
            init: init.clone(),
            agrees: trace.final_labeling.agrees_on(&stability.optimal, stable_set),
            final_labeling: trace.final_labeling,
            final_energy: trace.final_energy,
        });
    }
    let outcome = if runs.iter().all(|r| r.agrees) {
        HarnessOutcome::Pass
    } else {
        HarnessOutcome::Fail
    };
    Ok(RecoveryReport { outcome, stability, runs })
}

/// Every labeling of `inst`, in lexicographic order.
pub fn all_labelings(inst: &Instance) -> Result<Vec<Labeling>> {
    let count = enumerate::check_enumerable(inst, "labeling list")?;
    let (n, k) = (inst.num_nodes(), inst.num_labels() as u64);
    Ok((0..count)
        .map(|mut code| {
            let mut labels = vec![0; n];
            for slot in labels.iter_mut().rev() {
                *slot = (code % k) as usize;
                code /= k;
            }
            Labeling::new(labels)
        })
        .collect())
}
