use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use invmaxian::l1::to_lp_format;
use invmaxian::oracle::{oracle_chebyshev, oracle_hamming, oracle_l1_integer, oracle_maxian};
use invmaxian::random::{random_instance, InstanceParams};
use invmaxian::rational::{parse_rational, to_exact_string, to_f64};
use invmaxian::{
    is_feasible, normalize, saturated_plan, solve_inverse_pmaxian, solve_pair, verify_plan, EdgeSign, Error,
    InverseInstance, ModificationPlan, Objective, Rational,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::{parse_instance, InstanceFile};
use crate::report::{infeasible_doc, optimal_doc, render_text, ReportDoc, INFEASIBLE, OPTIMAL};
use crate::{Command, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK};

pub fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Solve { instance, objective, pair, dump_lp, json } => {
            solve(&instance, objective.map(Into::into), pair.as_deref(), dump_lp.as_deref(), json)
        }
        Command::Maxian { instance, json } => maxian(&instance, json),
        Command::Check { instance, report } => check(&instance, &report),
        Command::Oracle { instance, objective, maxian } => oracle(&instance, objective.map(Into::into), maxian),
        Command::Gen { n, seed, max_len, max_cost, max_bound, max_denominator, targets, shape, objective, output } => {
            let params = InstanceParams::new(n)
                .max_len(max_len)
                .max_cost(max_cost)
                .max_bound(max_bound)
                .max_denominator(max_denominator)
                .targets(targets)
                .shape(shape.into());
            let objective: Option<Objective> = objective.map(Into::into);
            let text = generate(&params, seed, objective);
            match output {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(EXIT_OK)
        }
        Command::Bench { sizes, repeats, seed } => bench(&sizes, repeats.max(1), seed),
    }
}

/// Instance text for `gen`; a pure function of its arguments.
pub fn generate(params: &InstanceParams, seed: u64, objective: Option<Objective>) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = random_instance(&mut rng, params);
    if let Some(o) = objective {
        inst = inst.with_objective(o);
    }
    InstanceFile::with_default_ids(inst, objective).to_json_string()
}

fn load(path: &Path) -> Result<InstanceFile> {
    Ok(parse_instance(path)?)
}

fn vertex(file: &InstanceFile, text: &str) -> Result<usize> {
    file.vertex_index(text).ok_or_else(|| anyhow!("unknown vertex {text}"))
}

fn emit(doc: &ReportDoc, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(doc).expect("report serializes"));
    } else {
        print!("{}", render_text(doc));
    }
}

fn solve(
    path: &Path,
    objective: Option<Objective>,
    pair: Option<&[String]>,
    dump_lp: Option<&Path>,
    json: bool,
) -> Result<u8> {
    let file = load(path)?;
    let objective = objective.or(file.objective).unwrap_or(Objective::L1);
    let inst = file.instance.with_objective(objective);
    let forced = match pair {
        Some([a, b]) => {
            let (a, b) = (vertex(&file, a)?, vertex(&file, b)?);
            for v in [a, b] {
                if !inst.targets.contains(&v) {
                    bail!("--pair: {} is not a target", file.vertex_ids[v]);
                }
            }
            if a == b {
                bail!("--pair needs two different targets");
            }
            Some((a, b))
        }
        Some(_) => bail!("--pair takes exactly two vertex ids"),
        None => None,
    };
    let outcome = match forced {
        Some((a, b)) => solve_pair(&inst, a, b),
        None => solve_inverse_pmaxian(&inst),
    };
    let (doc, code, lp_pair) = match outcome {
        Ok(report) => {
            let norm = normalize(&inst, report.pair.0, report.pair.1)?;
            (optimal_doc(&file, &norm, &report), EXIT_OK, report.pair)
        }
        Err(Error::Infeasible { violations }) => {
            let first = inst.target_pairs()[0];
            (infeasible_doc(&file, objective, forced, &violations), EXIT_INFEASIBLE, forced.unwrap_or(first))
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(out) = dump_lp {
        let norm = normalize(&inst, lp_pair.0, lp_pair.1)?;
        let edges: Vec<String> = file.edge_ids.iter().map(ToString::to_string).collect();
        let vertices: Vec<String> = file.vertex_ids.iter().map(ToString::to_string).collect();
        std::fs::write(out, to_lp_format(&norm, &edges, &vertices))
            .with_context(|| format!("writing {}", out.display()))?;
    }
    emit(&doc, json);
    Ok(code)
}

fn maxian(path: &Path, json: bool) -> Result<u8> {
    let file = load(path)?;
    let tree = &file.instance.tree;
    let targets = &file.instance.targets;
    let id = |v: usize| file.vertex_ids[v].to_string();
    let longest = tree.longest_path();
    let value = tree.maxian_value(targets)?;
    let mut spanning = None;
    for (a, b) in file.instance.target_pairs() {
        if tree.is_weakly_longest(a, b)?.holds {
            spanning = Some((a, b));
            break;
        }
    }
    if json {
        let doc = json!({
            "longest_path": {
                "endpoints": [file.vertex_ids[longest.endpoints.0].to_json(), file.vertex_ids[longest.endpoints.1].to_json()],
                "length": to_exact_string(&longest.length),
            },
            "maxian_value": { "exact": to_exact_string(&value), "approx": to_f64(&value) },
            "is_maxian": spanning.is_some(),
            "pair": spanning.map(|(a, b)| [file.vertex_ids[a].to_json(), file.vertex_ids[b].to_json()]),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        let (s, t) = longest.endpoints;
        println!("longest path: {} {} (length {})", id(s), id(t), longest.length);
        println!("maxian value of targets: {} (~ {})", value, to_f64(&value));
        match spanning {
            Some((a, b)) => println!("p-maxian: true (pair {} {})", id(a), id(b)),
            None => println!("p-maxian: false"),
        }
    }
    Ok(if spanning.is_some() { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn id_value_index(file: &InstanceFile, value: &Value, what: &str) -> Result<usize> {
    let text = match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let found = match what {
        "edge" => file.edge_ids.iter().position(|id| id.matches(&text)),
        _ => file.vertex_index(&text),
    };
    found.ok_or_else(|| anyhow!("report names unknown {what} {text}"))
}

fn check(instance: &Path, report: &Path) -> Result<u8> {
    let file = load(instance)?;
    let text = std::fs::read_to_string(report).with_context(|| format!("reading {}", report.display()))?;
    let doc: ReportDoc = serde_json::from_str(&text)
        .map_err(|e| anyhow!("PARSE_ERROR at line {} column {}: {e}", e.line(), e.column()))?;
    let objective = Objective::from_name(&doc.objective).ok_or_else(|| anyhow!("unknown objective {:?}", doc.objective))?;
    let inst = file.instance.with_objective(objective);
    let pair = doc
        .pair
        .as_ref()
        .map(|[a, b]| -> Result<(usize, usize)> { Ok((id_value_index(&file, a, "vertex")?, id_value_index(&file, b, "vertex")?)) })
        .transpose()?;

    match doc.status.as_str() {
        OPTIMAL => {
            let (a, b) = pair.ok_or_else(|| anyhow!("optimal report without a pair"))?;
            let cost = doc.cost.as_ref().ok_or_else(|| anyhow!("optimal report without a cost"))?;
            let stated = parse_rational(&cost.exact)?;
            let norm = normalize(&inst, a, b)?;
            let mut amounts: Vec<Option<Rational>> = vec![None; norm.edge_count()];
            let mut reasons = Vec::new();
            for entry in &doc.plan {
                let e = id_value_index(&file, &entry.edge, "edge")?;
                if amounts[e].is_some() {
                    bail!("edge {} listed twice in the plan", file.edge_ids[e]);
                }
                let x = parse_rational(&entry.amount)?;
                let sign = match norm.signs[e] {
                    EdgeSign::Increase => "+",
                    EdgeSign::Decrease => "-",
                };
                if entry.sign != sign {
                    reasons.push(format!("edge {} has sign {} but must move {}", file.edge_ids[e], entry.sign, sign));
                }
                let length = &norm.lengths[e] + Rational::from_integer(norm.signs[e].as_i8().into()) * &x;
                if parse_rational(&entry.new_length)? != length {
                    reasons.push(format!("edge {} new length {} != {}", file.edge_ids[e], entry.new_length, length));
                }
                amounts[e] = Some(x);
            }
            let amounts: Vec<Rational> = amounts
                .into_iter()
                .enumerate()
                .map(|(e, x)| x.ok_or_else(|| anyhow!("plan misses edge {}", file.edge_ids[e])))
                .collect::<Result<_>>()?;
            let v = verify_plan(&inst, (a, b), objective, &ModificationPlan { amounts }, &stated);
            reasons.extend(v.reasons);
            if reasons.is_empty() {
                println!("valid: plan meets bounds, pair spans a longest path, cost {stated} matches");
                Ok(EXIT_OK)
            } else {
                for r in &reasons {
                    println!("invalid: {r}");
                }
                Ok(EXIT_ERROR)
            }
        }
        INFEASIBLE => {
            let pairs = match pair {
                Some(p) => vec![p],
                None => inst.target_pairs(),
            };
            for (a, b) in pairs {
                let norm = normalize(&inst, a, b)?;
                if is_feasible(&norm, &saturated_plan(&norm)) {
                    println!(
                        "invalid: pair {} {} is feasible at saturation",
                        file.vertex_ids[a], file.vertex_ids[b]
                    );
                    return Ok(EXIT_ERROR);
                }
            }
            println!("valid: saturating every bound fails for each pair");
            Ok(EXIT_OK)
        }
        other => bail!("unknown status {other:?}"),
    }
}

fn oracle(path: &Path, objective: Option<Objective>, maxian: Option<usize>) -> Result<u8> {
    let file = load(path)?;
    if let Some(p) = maxian {
        let (set, value) = oracle_maxian(&file.instance.tree, p)?;
        let ids: Vec<String> = set.iter().map(|&v| file.vertex_ids[v].to_string()).collect();
        println!("best {p}-set: {} with value {} (~ {})", ids.join(" "), value, to_f64(&value));
        return Ok(EXIT_OK);
    }
    let objective = objective.or(file.objective).unwrap_or(Objective::L1);
    let inst: InverseInstance = file.instance.with_objective(objective);
    let mut best: Option<Rational> = None;
    for (a, b) in inst.target_pairs() {
        let norm = normalize(&inst, a, b)?;
        let value = match objective {
            Objective::Chebyshev => oracle_chebyshev(&norm).map(Some),
            Objective::L1 => oracle_l1_integer(&norm),
            other => oracle_hamming(&norm, other).map(Some),
        };
        let label = format!("{} {}", file.vertex_ids[a], file.vertex_ids[b]);
        match value {
            Ok(Some(c)) => {
                println!("pair {label}: {c} (~ {})", to_f64(&c));
                best = Some(best.map_or(c.clone(), |b| b.min(c)));
            }
            Ok(None) => println!("pair {label}: no integer plan"),
            Err(e) if e.is_infeasible() => println!("pair {label}: infeasible"),
            Err(e) => return Err(e.into()),
        }
    }
    if objective == Objective::L1 {
        println!("note: the l1 oracle searches integer amounts only, so it bounds the optimum from above");
    }
    match best {
        Some(c) => {
            println!("oracle cost: {c} (~ {})", to_f64(&c));
            Ok(EXIT_OK)
        }
        None => {
            println!("status: {INFEASIBLE}");
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn bench(sizes: &[usize], repeats: usize, seed: u64) -> Result<u8> {
    println!("{:<20} {:>8} {:>10} {:>12} {:>10}", "solver", "n", "median ms", "status", "ms/nlogn*1e6");
    for objective in [Objective::Chebyshev, Objective::HammingBottleneck] {
        for &n in sizes {
            let params = InstanceParams::new(n).max_len(100).max_cost(10).max_bound(60).objective(objective);
            let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed ^ n as u64), &params);
            let (a, b) = (inst.targets[0], inst.targets[1]);
            let mut times = Vec::with_capacity(repeats);
            let mut status = OPTIMAL;
            for _ in 0..repeats {
                let start = Instant::now();
                match solve_pair(&inst, a, b) {
                    Ok(_) => {}
                    Err(e) if e.is_infeasible() => status = INFEASIBLE,
                    Err(e) => return Err(e.into()),
                }
                times.push(start.elapsed().as_secs_f64() * 1e3);
            }
            times.sort_by(f64::total_cmp);
            let median = times[times.len() / 2];
            let scaled = median / (n as f64 * (n as f64).ln()) * 1e6;
            println!("{:<20} {:>8} {:>10.1} {:>12} {:>10.3}", objective.name(), n, median, status, scaled);
        }
    }
    Ok(EXIT_OK)
}
