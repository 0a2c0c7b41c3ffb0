//! Random search for stable instances.
//!
//! Each trial draws a random graph and sparse node costs, computes the
//! optimum, and keeps the instance only if it passes the exhaustive
//! stability check and the requested extra predicate. Trials are
//! independent: trial `t` reads stream `t` of the seed, so any trial can
//! be regenerated alone and the search may run them in parallel.

use std::str::FromStr;

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::enumerate;
use crate::error::{Error, Result};
use crate::expansion::{alpha_expansion, brute_force_map};
use crate::instance::Instance;
use crate::lp::{instance_is_tight, solve_lp};
use crate::perturbation::check_params;
use crate::rational::{int, Rational};
use crate::rng::SeededRng;
use crate::stability::{all_labelings, check_stability, StabilityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    None,
    /// LP optimum strictly below the integral optimum.
    LpFractional,
    /// Some initial labeling leads alpha-expansion to a worse local optimum.
    ExpansionSuboptimal,
}

impl Predicate {
    pub fn as_str(self) -> &'static str {
        match self {
            Predicate::None => "none",
            Predicate::LpFractional => "lp-fractional",
            Predicate::ExpansionSuboptimal => "expansion-suboptimal",
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "none" => Ok(Predicate::None),
            "lp-fractional" => Ok(Predicate::LpFractional),
            "expansion-suboptimal" => Ok(Predicate::ExpansionSuboptimal),
            other => Err(Error::parse(format!("unknown predicate {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub num_nodes: usize,
    pub num_labels: usize,
    pub connect_prob: Rational,
    pub weight_max: u64,
    pub cost_max: u64,
    pub beta: Rational,
    pub gamma: Rational,
    pub predicate: Predicate,
    pub trial_budget: u64,
    pub seed: u64,
}

impl GenParams {
    /// Defaults matching the search that produced the bundled fixtures.
    pub fn new(num_nodes: usize, num_labels: usize, beta: Rational, gamma: Rational) -> Self {
        GenParams {
            num_nodes,
            num_labels,
            connect_prob: Rational::new(1.into(), 2.into()),
            weight_max: 4,
            cost_max: 20,
            beta,
            gamma,
            predicate: Predicate::None,
            trial_budget: 10_000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_nodes == 0 || self.num_labels == 0 {
            return Err(Error::validation("need at least one node and one label"));
        }
        if self.connect_prob.is_negative() || self.connect_prob > Rational::one() {
            return Err(Error::validation(format!(
                "connect probability {} outside [0, 1]",
                self.connect_prob
            )));
        }
        if self.weight_max == 0 || self.cost_max == 0 {
            return Err(Error::validation("weight and cost maxima must be positive"));
        }
        check_params(&self.beta, &self.gamma)?;
        let count = (self.num_labels as u64).checked_pow(self.num_nodes as u32);
        if count.is_none_or(|c| c > enumerate::ENUMERATION_LIMIT) {
            return Err(Error::TooLarge {
                what: "instance generation",
                size: format!("{}^{}", self.num_labels, self.num_nodes),
                limit: enumerate::ENUMERATION_LIMIT,
            });
        }
        Ok(())
    }
}

/// Trial `trial` of the generator: edges `(u, v)` for `u < v` in order, each
/// present with probability `connect_prob` and weighted uniformly in
/// `0..=weight_max`; then per node one uniform label with a cost uniform in
/// `0..=cost_max`, every other cost 0.
pub fn generate_random_instance(p: &GenParams, trial: u64) -> Result<Instance> {
    p.validate()?;
    let mut rng = SeededRng::with_stream(p.seed, trial);
    let mut edges = Vec::new();
    for u in 0..p.num_nodes {
        for v in u + 1..p.num_nodes {
            if rng.bernoulli(&p.connect_prob) {
                edges.push((u, v, int(rng.up_to(p.weight_max) as i64)));
            }
        }
    }
    let costs = (0..p.num_nodes)
        .map(|_| {
            let mut row = vec![int(0); p.num_labels];
            let i = rng.below(p.num_labels as u64) as usize;
            row[i] = int(rng.up_to(p.cost_max) as i64);
            row
        })
        .collect();
    Instance::new(p.num_labels, costs, edges)
}

pub fn predicate_eval(inst: &Instance, predicate: Predicate) -> Result<bool> {
    match predicate {
        Predicate::None => Ok(true),
        Predicate::LpFractional => Ok(!instance_is_tight(inst)?),
        Predicate::ExpansionSuboptimal => {
            let best = brute_force_map(inst)?.energy;
            for init in all_labelings(inst)? {
                if alpha_expansion(inst, &init)?.final_energy > best {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub trial: u64,
    pub instance: Instance,
    pub report: StabilityReport,
}

fn run_trial(p: &GenParams, trial: u64) -> Result<Option<Found>> {
    let instance = generate_random_instance(p, trial)?;
    let report = check_stability(&instance, &p.beta, &p.gamma)?;
    if !report.verdict || !predicate_eval(&instance, p.predicate)? {
        return Ok(None);
    }
    Ok(Some(Found { trial, instance, report }))
}

/// The lowest-indexed trial below the budget that is stable and satisfies
/// the predicate, or `None` if there is none.
pub fn find_stable_instance(p: &GenParams) -> Result<Option<Found>> {
    p.validate()?;
    (0..p.trial_budget)
        .into_par_iter()
        .map(|t| run_trial(p, t))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}

/// Whether the LP objective equals the optimum (used as a post-check).
pub fn lp_matches_optimum(inst: &Instance) -> Result<bool> {
    Ok(solve_lp(inst)?.objective == brute_force_map(inst)?.energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io::instance_to_json;
    use crate::rational::frac;
    use crate::stability::check_stability;

    fn params(beta: i64, gamma: i64) -> GenParams {
        GenParams::new(3, 3, int(beta), int(gamma))
    }

    #[test]
    fn predicates_on_fixtures() {
        let fig1 = fixtures::figure1();
        let fig2 = fixtures::figure2();
        assert!(predicate_eval(&fig1, Predicate::LpFractional).unwrap());
        assert!(!predicate_eval(&fig1, Predicate::ExpansionSuboptimal).unwrap());
        assert!(predicate_eval(&fig2, Predicate::ExpansionSuboptimal).unwrap());
        assert!(!predicate_eval(&fig2, Predicate::LpFractional).unwrap());
        let flat = Instance::new(3, vec![vec![int(3), int(0), int(1)]; 4], vec![]).unwrap();
        assert!(!predicate_eval(&flat, Predicate::LpFractional).unwrap());
        assert!(!predicate_eval(&flat, Predicate::ExpansionSuboptimal).unwrap());
    }

    #[test]
    fn predicate_names_round_trip() {
        for p in [Predicate::None, Predicate::LpFractional, Predicate::ExpansionSuboptimal] {
            assert_eq!(p.as_str().parse::<Predicate>().unwrap(), p);
        }
        assert_eq!("lp_fractional".parse::<Predicate>().unwrap(), Predicate::LpFractional);
        assert!("tight".parse::<Predicate>().is_err());
    }

    #[test]
    fn connect_probability_extremes() {
        let mut p = params(1, 1);
        p.connect_prob = int(0);
        for t in 0..10 {
            assert!(generate_random_instance(&p, t).unwrap().edges().is_empty());
        }
        p.connect_prob = int(1);
        for t in 0..10 {
            let inst = generate_random_instance(&p, t).unwrap();
            let pairs: Vec<_> = inst.edges().iter().map(|e| (e.u, e.v)).collect();
            assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
        }
    }

    #[test]
    fn costs_are_sparse_and_bounded() {
        let mut p = GenParams::new(6, 4, int(1), int(1));
        p.seed = 99;
        for t in 0..20 {
            let inst = generate_random_instance(&p, t).unwrap();
            for row in inst.costs() {
                assert!(row.iter().filter(|c| **c != int(0)).count() <= 1);
                assert!(row.iter().all(|c| *c >= int(0) && *c <= int(20)));
            }
            assert!(inst.edges().iter().all(|e| e.weight <= int(4)));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = params(1, 2);
        let a = instance_to_json(&generate_random_instance(&p, 5).unwrap());
        let b = instance_to_json(&generate_random_instance(&p, 5).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, instance_to_json(&generate_random_instance(&p, 6).unwrap()));
    }

    #[test]
    fn golden_trial() {
        let mut p = GenParams::new(4, 3, int(1), int(2));
        p.seed = 2024;
        let text = instance_to_json(&generate_random_instance(&p, 0).unwrap());
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/golden_seed2024_trial0.json");
        if std::env::var_os("POTTS_BLESS").is_some() {
            std::fs::write(path, &text).unwrap();
        }
        assert_eq!(text, std::fs::read_to_string(path).unwrap());
    }

    #[test]
    fn invalid_params() {
        let mut p = params(1, 1);
        p.connect_prob = frac(3, 2);
        assert!(p.validate().is_err());
        let p = GenParams::new(3, 3, frac(1, 2), int(1));
        assert!(p.validate().is_err());
        let p = GenParams::new(15, 4, int(1), int(1));
        assert!(matches!(p.validate(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn empty_budget_finds_nothing() {
        let mut p = params(1, 2);
        p.trial_budget = 0;
        assert!(find_stable_instance(&p).unwrap().is_none());
    }

    #[test]
    fn finds_a_fractional_stable_instance() {
        let mut p = params(1, 2);
        p.predicate = Predicate::LpFractional;
        p.trial_budget = 20_000;
        let found = find_stable_instance(&p).unwrap().expect("search succeeds");
        assert!(check_stability(&found.instance, &int(1), &int(2)).unwrap().verdict);
        assert!(predicate_eval(&found.instance, Predicate::LpFractional).unwrap());
        assert_eq!(generate_random_instance(&p, found.trial).unwrap(), found.instance);
        for t in 0..found.trial {
            assert!(run_trial(&p, t).unwrap().is_none());
        }
    }

    #[test]
    fn finds_a_stable_instance_that_traps_expansion() {
        let mut p = GenParams::new(4, 3, int(2), int(1));
        p.predicate = Predicate::ExpansionSuboptimal;
        p.trial_budget = 2_000;
        let found = find_stable_instance(&p).unwrap().expect("search succeeds");
        assert_eq!(found.trial, 1083);
        assert!(found.report.verdict);
        assert!(predicate_eval(&found.instance, Predicate::ExpansionSuboptimal).unwrap());
        assert!(lp_matches_optimum(&found.instance).unwrap());
    }

    #[test]
    fn stable_two_one_instances_are_tight() {
        let mut p = GenParams::new(5, 3, int(2), int(1));
        p.trial_budget = 500;
        for seed in 0..5 {
            p.seed = seed;
            if let Some(found) = find_stable_instance(&p).unwrap() {
                assert!(lp_matches_optimum(&found.instance).unwrap());
            }
        }
    }
}
