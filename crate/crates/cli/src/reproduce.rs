//! The fixture battery behind `potts reproduce`.

use potts::expansion::{alpha_expansion, brute_force_map};
use potts::fixtures;
use potts::fractional::{blend, closeness_anchor, embed};
use potts::lp::solve_lp;
use potts::rational::{frac, int};
use potts::rounding::verify_rounding_guarantees;
use potts::stability::{
    adversarial_perturbation, all_labelings, check_stability, theorem1_harness, theorem2_harness, HarnessOutcome,
};
use potts::{Instance, Labeling, Result};
use serde_json::{json, Value};

use crate::commands::load;
use crate::output::Outcome;
use crate::{ReproduceArgs, EXIT_VERDICT};

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn lab(one_based: &[usize]) -> Labeling {
    Labeling::from_one_based(one_based).expect("literal labeling")
}

fn first(fig1: &Instance) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let map = brute_force_map(fig1)?;
    checks.push(Check {
        name: "fig1.map",
        pass: map.labeling == lab(&[3, 3, 3]) && map.energy == int(8),
        detail: format!("{} energy {}", map.labeling, map.energy),
    });
    let lp = solve_lp(fig1)?;
    checks.push(Check {
        name: "fig1.lp",
        pass: lp.objective == frac(15, 2) && !lp.tight,
        detail: format!("objective {} integral {}", lp.objective, lp.tight),
    });
    let mut stuck = Vec::new();
    let mut sweeps = 0;
    for init in all_labelings(fig1)? {
        let trace = alpha_expansion(fig1, &init)?;
        sweeps = sweeps.max(trace.sweeps);
        if trace.final_labeling != lab(&[3, 3, 3]) {
            stuck.push(init.to_string());
        }
    }
    checks.push(Check {
        name: "fig1.expansion",
        pass: stuck.is_empty() && sweeps <= 5,
        detail: format!("27 starts, {} away from optimum, at most {sweeps} sweeps", stuck.len()),
    });
    let s12 = check_stability(fig1, &int(1), &int(2))?;
    let s21 = check_stability(fig1, &int(2), &int(1))?;
    checks.push(Check {
        name: "fig1.stability",
        pass: s12.verdict && !s21.verdict,
        detail: format!("(1,2) {} / (2,1) {}", s12.verdict, s21.verdict),
    });
    let t2 = theorem2_harness(fig1, &(0..fig1.num_nodes()).collect::<Vec<_>>(), &all_labelings(fig1)?)?;
    checks.push(Check {
        name: "fig1.recovery",
        pass: t2.outcome == HarnessOutcome::Pass,
        detail: t2.outcome.as_str().to_string(),
    });
    let t1 = theorem1_harness(fig1)?;
    checks.push(Check {
        name: "fig1.tightness",
        pass: t1.outcome == HarnessOutcome::NotApplicable,
        detail: t1.outcome.as_str().to_string(),
    });
    let blended = blend(&embed(&map.labeling, 3), &lp.solution, &frac(1, 30))?;
    let rounding = match closeness_anchor(&blended, &frac(1, 30))? {
        Some(anchor) => verify_rounding_guarantees(&blended, &anchor)?.passed(),
        None => false,
    };
    checks.push(Check {
        name: "fig1.rounding",
        pass: rounding,
        detail: format!("guarantees {}", if rounding { "hold" } else { "violated" }),
    });
    Ok(checks)
}

fn second(fig2: &Instance) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let map = brute_force_map(fig2)?;
    checks.push(Check {
        name: "fig2.map",
        pass: map.labeling == lab(&[2, 2, 3, 3]) && map.energy == int(3),
        detail: format!("{} energy {}", map.labeling, map.energy),
    });
    let lp = solve_lp(fig2)?;
    checks.push(Check {
        name: "fig2.lp",
        pass: lp.objective == int(3) && lp.tight,
        detail: format!("objective {} integral {}", lp.objective, lp.tight),
    });
    let trace = alpha_expansion(fig2, &lab(&[2, 2, 2, 2]))?;
    let one_move = trace.moves.len() == 1 && trace.moves[0].alpha == 0;
    checks.push(Check {
        name: "fig2.expansion",
        pass: trace.final_labeling == lab(&[1, 1, 1, 2]) && trace.final_energy == int(5) && one_move && trace.sweeps <= 5,
        detail: format!(
            "{} energy {}, {} moves, {} sweeps",
            trace.final_labeling,
            trace.final_energy,
            trace.moves.len(),
            trace.sweeps
        ),
    });
    let s21 = check_stability(fig2, &int(2), &int(1))?;
    let s12 = check_stability(fig2, &int(1), &int(2))?;
    checks.push(Check {
        name: "fig2.stability",
        pass: s21.verdict && !s12.verdict,
        detail: format!("(2,1) {} / (1,2) {}", s21.verdict, s12.verdict),
    });
    let adv = adversarial_perturbation(fig2, &map.labeling, &int(2), &int(1))?;
    let weights: Vec<String> = adv.weights().iter().map(|w| w.to_string()).collect();
    checks.push(Check {
        name: "fig2.adversarial",
        pass: adv.weights() == [int(2), int(3), frac(3, 2)],
        detail: weights.join(", "),
    });
    let t1 = theorem1_harness(fig2)?;
    checks.push(Check {
        name: "fig2.tightness",
        pass: t1.outcome == HarnessOutcome::Pass,
        detail: t1.outcome.as_str().to_string(),
    });
    Ok(checks)
}

pub fn run(a: &ReproduceArgs) -> Result<Outcome> {
    let fig1 = match &a.fig1 {
        Some(path) => load(path)?,
        None => fixtures::figure1(),
    };
    let fig2 = match &a.fig2 {
        Some(path) => load(path)?,
        None => fixtures::figure2(),
    };
    let mut checks = first(&fig1)?;
    checks.extend(second(&fig2)?);
    let mut out = Outcome::new();
    let passed = checks.iter().all(|c| c.pass);
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
        .collect();
    for c in &checks {
        out.line(format!("{} {:<18} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    out.set("checks", Value::Array(rows));
    out.field("passed", json!(passed), format!("{}/{}", checks.iter().filter(|c| c.pass).count(), checks.len()));
    if !passed {
        out.exit = EXIT_VERDICT;
    }
    Ok(out)
}
