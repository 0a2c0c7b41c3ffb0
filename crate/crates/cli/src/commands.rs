use std::path::Path;

use potts::expansion::{alpha_expansion, brute_force_map};
use potts::genx::{find_stable_instance, GenParams, Predicate};
use potts::io::{instance_to_json, parse_fractional, read_instance};
use potts::lp::{solve_local_polytope, solve_lp};
use potts::rational::{self, to_fraction_string};
use potts::rng::SeededRng;
use potts::rounding::{self, RoundingParams};
use potts::stability::{self, all_labelings, HarnessOutcome, StabilityReport};
use potts::{closeness_anchor, Error, Instance, Labeling, Rational, Result};
use serde_json::{json, Value};

use crate::output::{digest, labeling, node_text, nodes, number, number_text, Outcome};
use crate::{
    GenerateArgs, Method, ParamArgs, RoundArgs, SolveArgs, StabilityArgs, VerifyArgs, EXIT_NOT_FOUND, EXIT_VERDICT,
};

pub fn load(path: &Path) -> Result<Instance> {
    read_instance(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn flag_rational(flag: &str, text: &str) -> Result<Rational> {
    rational::parse(text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("--{flag}: {m}")),
        other => other,
    })
}

pub fn parse_node_set(inst: &Instance, text: &str) -> Result<Vec<usize>> {
    let mut set = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = inst
            .node_index(name)
            .ok_or_else(|| Error::Validation(format!("unknown node {name:?} in stable set")))?;
        if !set.contains(&v) {
            set.push(v);
        }
    }
    set.sort_unstable();
    Ok(set)
}

fn random_labeling(inst: &Instance, rng: &mut SeededRng) -> Labeling {
    Labeling::new(
        (0..inst.num_nodes())
            .map(|_| rng.below(inst.num_labels() as u64) as usize)
            .collect(),
    )
}

pub fn parse_init(inst: &Instance, text: &str) -> Result<Labeling> {
    let g = if let Some(label) = text.strip_prefix("uniform:") {
        let l: usize = label
            .parse()
            .map_err(|_| Error::Parse(format!("--init: bad label {label:?}")))?;
        if l == 0 {
            return Err(Error::Validation("--init: labels start at 1".into()));
        }
        Labeling::uniform(inst.num_nodes(), l - 1)
    } else if let Some(seed) = text.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::Parse(format!("--init: bad seed {seed:?}")))?;
        random_labeling(inst, &mut SeededRng::new(seed))
    } else {
        Labeling::parse_one_based(text)?
    };
    g.validate(inst.num_nodes(), inst.num_labels())?;
    Ok(g)
}

fn parse_inits(inst: &Instance, text: &str) -> Result<Vec<Labeling>> {
    if text == "all" {
        return all_labelings(inst);
    }
    let bad = || Error::Parse(format!("--inits: expected `all` or `random:COUNT:SEED`, got {text:?}"));
    let rest = text.strip_prefix("random:").ok_or_else(bad)?;
    let (count, seed) = rest.split_once(':').ok_or_else(bad)?;
    let count: u64 = count.parse().map_err(|_| bad())?;
    let seed: u64 = seed.parse().map_err(|_| bad())?;
    let mut rng = SeededRng::new(seed);
    Ok((0..count).map(|_| random_labeling(inst, &mut rng)).collect())
}

fn rows_value(rows: &[Vec<Rational>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::from(to_fraction_string(x))).collect()))
            .collect(),
    )
}

pub fn solve(a: &SolveArgs) -> Result<Outcome> {
    let inst = load(&a.instance)?;
    let mut out = Outcome::new();
    out.set("instance", digest(&inst));
    match a.method {
        Method::Brute => {
            let m = brute_force_map(&inst)?;
            out.field("method", json!("brute"), "brute");
            out.field("labeling", labeling(&m.labeling), &m.labeling);
            out.field("energy", number(&m.energy), number_text(&m.energy));
            out.field("unique", json!(m.unique), m.unique);
        }
        Method::Expansion => {
            let init = parse_init(&inst, &a.init)?;
            let trace = alpha_expansion(&inst, &init)?;
            out.field("method", json!("expansion"), "expansion");
            out.field("init", labeling(&trace.initial), &trace.initial);
            out.field("init_energy", number(&trace.initial_energy), number_text(&trace.initial_energy));
            let moves: Vec<Value> = trace
                .moves
                .iter()
                .map(|m| json!({ "alpha": m.alpha + 1, "labeling": labeling(&m.labeling), "energy": number(&m.energy) }))
                .collect();
            out.set("moves", Value::Array(moves));
            for m in &trace.moves {
                out.line(format!("  {}-expansion -> {} energy {}", m.alpha + 1, m.labeling, number_text(&m.energy)));
            }
            out.field("labeling", labeling(&trace.final_labeling), &trace.final_labeling);
            out.field("energy", number(&trace.final_energy), number_text(&trace.final_energy));
            out.field("sweeps", json!(trace.sweeps), trace.sweeps);
        }
        Method::Lp | Method::LocalPolytope => {
            let (name, sol) = match a.method {
                Method::Lp => ("lp", solve_lp(&inst)?),
                _ => ("local-polytope", solve_local_polytope(&inst)?),
            };
            out.field("method", json!(name), name);
            out.field("objective", number(&sol.objective), number_text(&sol.objective));
            out.field("tight", json!(sol.tight), sol.tight);
            match sol.solution.to_labeling() {
                Some(g) => out.field("labeling", labeling(&g), &g),
                None => out.set("labeling", Value::Null),
            }
            out.set("solution", rows_value(sol.solution.rows()));
            for (u, row) in sol.solution.rows().iter().enumerate() {
                let cells: Vec<String> = row.iter().map(to_fraction_string).collect();
                out.line(format!("  {:<8} ({})", inst.names()[u], cells.join(", ")));
            }
        }
    }
    Ok(out)
}

fn stability_fields(out: &mut Outcome, r: &StabilityReport) {
    out.field("verdict", json!(r.verdict), if r.verdict { "stable" } else { "not stable" });
    out.field("optimal", labeling(&r.optimal), &r.optimal);
    out.field("optimal_energy", number(&r.optimal_energy), number_text(&r.optimal_energy));
    out.field("unique_optimum", json!(r.unique_optimum), r.unique_optimum);
    match &r.witness {
        Some(h) => out.field("witness", labeling(h), h),
        None => out.set("witness", Value::Null),
    }
    match &r.margin {
        Some(m) => out.field("margin", number(m), number_text(m)),
        None => out.set("margin", Value::Null),
    }
    out.field("labelings_checked", json!(r.labelings_checked), r.labelings_checked);
    let weights: Vec<Value> = r.perturbation.weights().iter().map(number).collect();
    let text: Vec<String> = r.perturbation.weights().iter().map(to_fraction_string).collect();
    out.set("adversarial_weights", Value::Array(weights));
    out.line(format!("{:<18} {}", "adversarial:", text.join(", ")));
}

fn params(p: &ParamArgs) -> Result<(Rational, Rational)> {
    Ok((flag_rational("beta", &p.beta)?, flag_rational("gamma", &p.gamma)?))
}

pub fn check_stability(a: &StabilityArgs) -> Result<Outcome> {
    let inst = load(&a.params.instance)?;
    let (beta, gamma) = params(&a.params)?;
    let set = a.stable_set.as_deref().map(|s| parse_node_set(&inst, s)).transpose()?;
    let query = stability::StabilityQuery { beta: beta.clone(), gamma: gamma.clone(), stable_set: set.clone() };
    let r = query.run(&inst)?;
    let mut out = Outcome::new();
    out.set("instance", digest(&inst));
    out.field("beta", number(&beta), number_text(&beta));
    out.field("gamma", number(&gamma), number_text(&gamma));
    match &set {
        Some(s) => out.field("stable_set", nodes(&inst, s), node_text(&inst, s)),
        None => out.set("stable_set", Value::Null),
    }
    stability_fields(&mut out, &r);
    Ok(out)
}

pub fn stable_set(a: &ParamArgs) -> Result<Outcome> {
    let inst = load(&a.instance)?;
    let (beta, gamma) = params(a)?;
    let set = stability::maximal_stable_set(&inst, &beta, &gamma)?;
    let mut out = Outcome::new();
    out.set("instance", digest(&inst));
    out.field("beta", number(&beta), number_text(&beta));
    out.field("gamma", number(&gamma), number_text(&gamma));
    out.field("stable_set", nodes(&inst, &set), node_text(&inst, &set));
    Ok(out)
}

fn outcome_exit(outcome: HarnessOutcome) -> u8 {
    if outcome == HarnessOutcome::Fail {
        EXIT_VERDICT
    } else {
        0
    }
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let inst = load(&a.instance)?;
    let mut out = Outcome::new();
    out.set("instance", digest(&inst));
    out.field("theorem", json!(a.theorem.parse::<u8>().unwrap_or(0)), &a.theorem);
    if a.theorem == "1" {
        let r = stability::theorem1_harness(&inst)?;
        out.field("outcome", json!(r.outcome.as_str()), r.outcome.as_str());
        out.field("stable", json!(r.stability.verdict), r.stability.verdict);
        out.field("map_energy", number(&r.stability.optimal_energy), number_text(&r.stability.optimal_energy));
        match &r.lp {
            Some(lp) => {
                out.field("lp_objective", number(&lp.objective), number_text(&lp.objective));
                out.field("lp_tight", json!(lp.tight), lp.tight);
            }
            None => {
                out.set("lp_objective", Value::Null);
                out.set("lp_tight", Value::Null);
            }
        }
        out.exit = outcome_exit(r.outcome);
    } else {
        let set = match &a.stable_set {
            Some(s) => parse_node_set(&inst, s)?,
            None => (0..inst.num_nodes()).collect(),
        };
        let inits = parse_inits(&inst, &a.inits)?;
        let r = stability::theorem2_harness(&inst, &set, &inits)?;
        out.field("outcome", json!(r.outcome.as_str()), r.outcome.as_str());
        out.field("stable_set", nodes(&inst, &set), node_text(&inst, &set));
        out.field("weakly_stable", json!(r.stability.verdict), r.stability.verdict);
        out.field("optimal", labeling(&r.stability.optimal), &r.stability.optimal);
        out.field("inits", json!(r.runs.len()), r.runs.len());
        let failures: Vec<Value> = r
            .runs
            .iter()
            .filter(|run| !run.agrees)
            .map(|run| json!({ "init": labeling(&run.init), "final": labeling(&run.final_labeling) }))
            .collect();
        for run in r.runs.iter().filter(|run| !run.agrees) {
            out.line(format!("  from {} ended at {}", run.init, run.final_labeling));
        }
        out.field("failures", json!(failures.len()), failures.len());
        out.set("failed_runs", Value::Array(failures));
        out.exit = outcome_exit(r.outcome);
    }
    Ok(out)
}

pub fn generate(a: &GenerateArgs) -> Result<Outcome> {
    let p = GenParams {
        num_nodes: a.nodes,
        num_labels: a.labels,
        connect_prob: flag_rational("connect-prob", &a.connect_prob)?,
        weight_max: a.weight_max,
        cost_max: a.cost_max,
        beta: flag_rational("beta", &a.beta)?,
        gamma: flag_rational("gamma", &a.gamma)?,
        predicate: a.predicate.parse::<Predicate>()?,
        trial_budget: a.budget,
        seed: a.seed,
    };
    let mut out = Outcome::new();
    out.field("predicate", json!(p.predicate.as_str()), p.predicate.as_str());
    out.field("seed", json!(p.seed), p.seed);
    out.field("budget", json!(p.trial_budget), p.trial_budget);
    match find_stable_instance(&p)? {
        None => {
            out.field("found", json!(false), format!("no instance within {} trials", p.trial_budget));
            out.exit = EXIT_NOT_FOUND;
        }
        Some(found) => {
            let text = instance_to_json(&found.instance);
            out.field("found", json!(true), true);
            out.field("trial", json!(found.trial), found.trial);
            out.field("optimal", labeling(&found.report.optimal), &found.report.optimal);
            out.field("optimal_energy", number(&found.report.optimal_energy), number_text(&found.report.optimal_energy));
            if let Some(m) = &found.report.margin {
                out.field("margin", number(m), number_text(m));
            }
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    out.field("out", json!(path.display().to_string()), path.display());
                }
                None => {
                    out.line(text.trim_end());
                }
            }
            out.set("instance", serde_json::from_str(&text).expect("instance json re-parses"));
        }
    }
    Ok(out)
}

pub fn round(a: &RoundArgs) -> Result<Outcome> {
    let inst = load(&a.instance)?;
    let s = parse_fractional(&inst, &std::fs::read_to_string(&a.fractional)?)?;
    let params = RoundingParams::new(inst.num_labels())?;
    let eps = match &a.epsilon {
        Some(e) => flag_rational("epsilon", e)?,
        None => params.epsilon.clone(),
    };
    let anchor = closeness_anchor(&s, &eps)?
        .ok_or_else(|| Error::Validation(format!("fractional solution is not {}-close to any labeling", to_fraction_string(&eps))))?;
    let mut out = Outcome::new();
    out.set("instance", digest(&inst));
    out.field("epsilon", number(&eps), number_text(&eps));
    out.field("anchor", labeling(&anchor.labeling), &anchor.labeling);
    if a.exact {
        let dist = rounding::exact_distribution(&s, &anchor)?;
        let rows: Vec<Value> = dist
            .support
            .iter()
            .map(|(h, p)| json!({ "labeling": labeling(h), "probability": number(p) }))
            .collect();
        out.field("support_size", json!(dist.support.len()), dist.support.len());
        for (h, p) in &dist.support {
            out.line(format!("  {h}  {}", number_text(p)));
        }
        out.set("distribution", Value::Array(rows));
        if inst.num_labels() >= 3 {
            let report = rounding::verify_rounding_guarantees(&s, &anchor)?;
            out.field("guarantees", json!(report.passed()), if report.passed() { "hold" } else { "violated" });
        }
    } else {
        let draw = rounding::draw(&params, a.seed);
        let h = rounding::round(&s, &anchor, a.seed)?;
        out.field("seed", json!(a.seed), a.seed);
        out.field("label", json!(draw.label + 1), draw.label + 1);
        out.field("threshold", number(&draw.threshold), number_text(&draw.threshold));
        out.field("labeling", labeling(&h), &h);
    }
    Ok(out)
}
