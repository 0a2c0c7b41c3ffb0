//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use potts::enumerate::compare_against;
use potts::expansion::{alpha_expansion, brute_force_expansion, brute_force_map, optimal_expansion_move};
use potts::fixtures;
use potts::fractional::{blend, embed, ClosenessAnchor, FractionalSolution};
use potts::genx::{find_stable_instance, generate_random_instance, GenParams};
use potts::lp::{solve_local_polytope, solve_lp};
use potts::rational::{frac, int};
use potts::rng::SeededRng;
use potts::rounding::{support_is_expansions, verify_rounding_guarantees, RoundingParams};
use potts::stability::{
    adversarial_perturbation, adversarial_dominance_gap, all_labelings, check_stability, maximal_stable_set,
    random_perturbation,
};
use potts::{Instance, Labeling, Rational};

type Verdict = Result<String, String>;

fn lab(one_based: &[usize]) -> Labeling {
    Labeling::from_one_based(one_based).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_labeling(inst: &Instance, rng: &mut SeededRng) -> Labeling {
    Labeling::new(
        (0..inst.num_nodes())
            .map(|_| rng.below(inst.num_labels() as u64) as usize)
            .collect(),
    )
}

/// Dense random instance: every cost and weight drawn independently.
fn dense_instance(rng: &mut SeededRng, n: usize, k: usize) -> Instance {
    let costs = (0..n)
        .map(|_| (0..k).map(|_| int(rng.up_to(10) as i64)).collect())
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.below(2) == 0 {
                edges.push((u, v, frac(rng.up_to(12) as i64, 1 + rng.below(3) as i64)));
            }
        }
    }
    Instance::new(k, costs, edges).unwrap()
}

fn sparse_instance(seed: u64, trial: u64, n: usize, k: usize) -> Instance {
    let mut p = GenParams::new(n, k, int(1), int(1));
    p.seed = seed;
    generate_random_instance(&p, trial).unwrap()
}

fn figure1() -> Verdict {
    let fig1 = fixtures::figure1();
    let map = brute_force_map(&fig1).map_err(|e| e.to_string())?;
    ensure(map.labeling == lab(&[3, 3, 3]) && map.energy == int(8), || {
        format!("MAP {} energy {}", map.labeling, map.energy)
    })?;
    let lp = solve_lp(&fig1).map_err(|e| e.to_string())?;
    ensure(lp.objective == frac(15, 2) && !lp.tight, || {
        format!("LP objective {} integral {}", lp.objective, lp.tight)
    })?;
    for init in all_labelings(&fig1).unwrap() {
        let t = alpha_expansion(&fig1, &init).unwrap();
        ensure(t.final_labeling == lab(&[3, 3, 3]), || format!("from {init} ended at {}", t.final_labeling))?;
    }
    Ok("MAP (3,3,3)=8, LP 15/2 fractional, 27/27 starts reach (3,3,3)".into())
}

fn figure2() -> Verdict {
    let fig2 = fixtures::figure2();
    let map = brute_force_map(&fig2).unwrap();
    ensure(map.labeling == lab(&[2, 2, 3, 3]) && map.energy == int(3), || {
        format!("MAP {} energy {}", map.labeling, map.energy)
    })?;
    let lp = solve_lp(&fig2).unwrap();
    ensure(lp.tight && lp.objective == int(3), || {
        format!("LP objective {} integral {}", lp.objective, lp.tight)
    })?;
    let t = alpha_expansion(&fig2, &lab(&[2, 2, 2, 2])).unwrap();
    ensure(
        t.final_labeling == lab(&[1, 1, 1, 2])
            && t.final_energy == int(5)
            && t.moves.len() == 1
            && t.moves[0].alpha == 0,
        || format!("ended at {} energy {} after {} moves", t.final_labeling, t.final_energy, t.moves.len()),
    )?;
    Ok("MAP (2,2,3,3)=3, LP tight at 3, expansion stuck at (1,1,1,2)=5 after one 1-move".into())
}

fn stability_matrix() -> Verdict {
    let fig1 = fixtures::figure1();
    let fig2 = fixtures::figure2();
    let verdict = |inst: &Instance, b: i64, g: i64| check_stability(inst, &int(b), &int(g)).unwrap().verdict;
    let cells = [
        (verdict(&fig1, 1, 2), true, "fig1 (1,2)"),
        (verdict(&fig1, 2, 1), false, "fig1 (2,1)"),
        (verdict(&fig2, 2, 1), true, "fig2 (2,1)"),
        (verdict(&fig2, 1, 2), false, "fig2 (1,2)"),
    ];
    for (got, want, name) in cells {
        ensure(got == want, || format!("{name}: stable={got}"))?;
    }
    let adv = adversarial_perturbation(&fig2, &lab(&[2, 2, 3, 3]), &int(2), &int(1)).unwrap();
    ensure(adv.weights() == [int(2), int(3), frac(3, 2)], || format!("weights {:?}", adv.weights()))?;
    Ok("fig1 (1,2) yes (2,1) no; fig2 (2,1) yes (1,2) no; weights 2, 3, 3/2".into())
}

fn found_instances(beta: i64, gamma: i64, count: u64) -> Result<Vec<Instance>, String> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count as usize {
        let n = 3 + (seed % 4) as usize;
        let mut p = GenParams::new(n, 3, int(beta), int(gamma));
        p.seed = seed;
        p.trial_budget = 50_000;
        if let Some(found) = find_stable_instance(&p).map_err(|e| e.to_string())? {
            out.push(found.instance);
        }
        seed += 1;
        if seed > 4 * count {
            return Err(format!("only {} stable instances found", out.len()));
        }
    }
    Ok(out)
}

fn tightness_suite() -> Verdict {
    let instances = found_instances(2, 1, 100)?;
    for (i, inst) in instances.iter().enumerate() {
        let lp = solve_lp(inst).unwrap();
        let map = brute_force_map(inst).unwrap();
        ensure(lp.objective == map.energy, || {
            format!("instance {i}: LP {} vs MAP {}", lp.objective, map.energy)
        })?;
    }
    Ok("100/100 (2,1)-stable instances have LP value = MAP energy".into())
}

fn recovery_suite() -> Verdict {
    let instances = found_instances(1, 2, 100)?;
    for (i, inst) in instances.iter().enumerate() {
        let g = brute_force_map(inst).unwrap().labeling;
        let mut rng = SeededRng::new(1000 + i as u64);
        for _ in 0..20 {
            let init = random_labeling(inst, &mut rng);
            let t = alpha_expansion(inst, &init).unwrap();
            ensure(t.final_labeling == g, || format!("instance {i} from {init} ended at {}", t.final_labeling))?;
        }
    }
    let mut rng = SeededRng::new(77);
    let mut nonempty = 0;
    for i in 0..50u64 {
        let inst = sparse_instance(5, i, 3 + (i % 4) as usize, 3);
        let g = brute_force_map(&inst).unwrap().labeling;
        let set = maximal_stable_set(&inst, &int(1), &int(2)).unwrap();
        if !set.is_empty() {
            nonempty += 1;
        }
        for _ in 0..20 {
            let init = random_labeling(&inst, &mut rng);
            let t = alpha_expansion(&inst, &init).unwrap();
            ensure(t.final_labeling.agrees_on(&g, &set), || {
                format!("random instance {i} from {init} disagrees on the stable set")
            })?;
        }
    }
    Ok(format!(
        "100x20 recoveries on (1,2)-stable instances; 50x20 agree on the stable set ({nonempty} nonempty)"
    ))
}

fn close_inputs() -> Vec<(FractionalSolution, ClosenessAnchor)> {
    let mut rng = SeededRng::new(6);
    (0..200)
        .map(|i| {
            let k = 3 + i % 2;
            let n = 1 + rng.below(8) as usize;
            let params = RoundingParams::new(k).unwrap();
            let g = Labeling::new((0..n).map(|_| rng.below(k as u64) as usize).collect());
            let noise: Vec<Vec<Rational>> = (0..n)
                .map(|_| {
                    let raw: Vec<i64> = (0..k).map(|_| rng.up_to(7) as i64).collect();
                    let total: i64 = raw.iter().sum();
                    if total == 0 {
                        (0..k).map(|j| if j == 0 { int(1) } else { int(0) }).collect()
                    } else {
                        raw.iter().map(|&x| frac(x, total)).collect()
                    }
                })
                .collect();
            let noise = FractionalSolution::new(noise).unwrap();
            let eps = &params.epsilon * frac(1 + rng.below(8) as i64, 8);
            let s = blend(&embed(&g, k), &noise, &eps).unwrap();
            (s, ClosenessAnchor { epsilon: params.epsilon, labeling: g })
        })
        .collect()
}

fn rounding_bounds() -> Verdict {
    let inputs = close_inputs();
    for (i, (s, anchor)) in inputs.iter().enumerate() {
        let r = verify_rounding_guarantees(s, anchor).map_err(|e| e.to_string())?;
        ensure(r.violations.is_empty(), || format!("input {i}: {:?}", r.violations[0]))?;
        ensure(r.marginal_formula && r.clip_inactive, || format!("input {i}: marginal formula off"))?;
    }
    Ok("200/200 inputs satisfy all four bounds and P[h(u)=i] = (5/6)u_i exactly".into())
}

fn rounding_support() -> Verdict {
    let inputs = close_inputs();
    for (i, (s, anchor)) in inputs.iter().enumerate() {
        ensure(support_is_expansions(s, anchor).unwrap(), || format!("input {i}: non-expansion in support"))?;
    }
    Ok("200/200 supports consist of expansions of the anchor".into())
}

fn adversarial_dominance() -> Verdict {
    let params = [(int(1), int(2)), (int(2), int(1)), (int(2), int(2)), (frac(3, 2), frac(3, 2))];
    let mut stable = 0;
    for i in 0..20u64 {
        let (beta, gamma) = &params[(i % 4) as usize];
        let n = 3 + (i % 3) as usize;
        let inst = if i % 2 == 0 {
            let mut p = GenParams::new(n, 3, beta.clone(), gamma.clone());
            p.seed = 300 + i;
            p.trial_budget = 50_000;
            match find_stable_instance(&p).unwrap() {
                Some(found) => found.instance,
                None => sparse_instance(8, i, n, 3),
            }
        } else {
            sparse_instance(8, i, n, 3)
        };
        let g = brute_force_map(&inst).unwrap().labeling;
        let adv = adversarial_perturbation(&inst, &g, beta, gamma).unwrap();
        let is_stable = check_stability(&inst, beta, gamma).unwrap().verdict;
        stable += is_stable as usize;
        let mut rng = SeededRng::with_stream(42, i);
        for t in 0..200 {
            let p = random_perturbation(&inst, beta, gamma, &mut rng).unwrap();
            let gap = adversarial_dominance_gap(&inst, &g, &adv, &p).unwrap();
            ensure(gap >= int(0), || format!("instance {i} sample {t}: gap {gap}"))?;
            if is_stable {
                let v = compare_against(&inst, p.weights(), &g, None).unwrap().first_violator;
                ensure(v.is_none(), || format!("instance {i} sample {t}: violator under a sample"))?;
            }
        }
    }
    Ok(format!("20x200 samples dominated by the adversarial weights ({stable} stable instances, no violators)"))
}

fn lp_equivalence() -> Verdict {
    let mut rng = SeededRng::new(9);
    for i in 0..50 {
        let n = 2 + rng.below(4) as usize;
        let k = 2 + rng.below(2) as usize;
        let inst = dense_instance(&mut rng, n, k);
        let a = solve_lp(&inst).unwrap().objective;
        let b = solve_local_polytope(&inst).unwrap().objective;
        ensure(a == b, || format!("instance {i}: {a} vs {b}"))?;
    }
    Ok("50/50 instances: both relaxations have the same optimum".into())
}

fn oracle_equivalence() -> Verdict {
    let mut rng = SeededRng::new(10);
    for i in 0..500 {
        let n = 1 + rng.below(10) as usize;
        let k = 2 + rng.below(3) as usize;
        let inst = dense_instance(&mut rng, n, k);
        let f = random_labeling(&inst, &mut rng);
        let alpha = rng.below(k as u64) as usize;
        let fast = optimal_expansion_move(&inst, &f, alpha).unwrap();
        let slow = brute_force_expansion(&inst, &f, alpha).unwrap();
        let (ef, es) = (inst.energy(&fast).unwrap(), inst.energy(&slow).unwrap());
        ensure(ef == es && fast == slow, || format!("triple {i}: {fast}={ef} vs {slow}={es}"))?;
    }
    Ok("500/500 triples: min-cut move equals the brute-force move".into())
}

fn approximation() -> Verdict {
    let mut rng = SeededRng::new(11);
    for i in 0..200 {
        let n = 2 + rng.below(7) as usize;
        let k = 2 + rng.below(3) as usize;
        let inst = dense_instance(&mut rng, n, k);
        let init = random_labeling(&inst, &mut rng);
        let map = brute_force_map(&inst).unwrap().energy;
        let t = alpha_expansion(&inst, &init).unwrap();
        ensure(t.final_energy <= &map * int(2), || format!("instance {i}: {} > 2 x {map}", t.final_energy))?;
    }
    let mut max_sweeps = 0;
    for inst in [fixtures::figure1(), fixtures::figure2()] {
        for init in all_labelings(&inst).unwrap() {
            max_sweeps = max_sweeps.max(alpha_expansion(&inst, &init).unwrap().sweeps);
        }
    }
    ensure(max_sweeps <= 5, || format!("{max_sweeps} sweeps on a fixture"))?;
    Ok(format!("200/200 within factor 2; at most {max_sweeps} sweeps from any fixture start"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Verdict); 11] = [
        ("figure 1 reproduction", 1, figure1),
        ("figure 2 reproduction", 1, figure2),
        ("stability matrix", 1, stability_matrix),
        ("(2,1)-stable instances have tight LPs", 600, tightness_suite),
        ("(1,2)-stable instances are recovered", 600, recovery_suite),
        ("rounding bounds", 120, rounding_bounds),
        ("rounding outputs are expansions", 120, rounding_support),
        ("adversarial perturbation dominates", 300, adversarial_dominance),
        ("relaxation equivalence", 120, lp_equivalence),
        ("expansion move oracle", 120, oracle_equivalence),
        ("approximation and sweeps", 120, approximation),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > Duration::from_secs(*limit) => Err(format!("{msg}; took longer than {limit}s")),
            other => other,
        };
        let (tag, msg) = match &result {
            Ok(msg) => ("PASS", msg),
            Err(msg) => ("FAIL", msg),
        };
        failed += result.is_err() as usize;
        println!("{tag} criterion {:>2} {name} [{:.2?}]: {msg}", i + 1, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
