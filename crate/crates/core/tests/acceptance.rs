//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the report is always printed.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;
use stablecount::attribute_models::{count_1attribute, instance_from_dot, OneAttributeSpec};
use stablecount::cli::run_with_stdin;
use stablecount::counting::{
    brute_force_stable_matchings, count_stable_matchings, enumerate_stable_matchings,
};
use stablecount::gale_shapley::{lattice_meet_join, propose_optimal};
use stablecount::reductions::{
    edge_cycles, gen_partial_lists, verify_reduction, Model, Permutation,
};
use stablecount::rotations::{
    apply_rotation, eliminated_pairs, find_all_rotations, rotation_poset,
};
use stablecount::{BipartiteGraph, Error, GeometricSpec, Instance, Side};

struct Outcome {
    ok: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            summary: String::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.ok = false;
            if self.failures.len() < 5 {
                self.failures.push(what());
            }
        }
    }
}

/// Structural invariants gathered from every instance the other criteria
/// touch.
struct Invariants {
    instances: usize,
    rotations: usize,
    outcome: Outcome,
}

impl Invariants {
    // `oracle` is the full stable set when it is small enough to know
    fn check(&mut self, label: &str, inst: &Instance, oracle: Option<&BTreeSet<Pairs>>) {
        self.instances += 1;
        let out = &mut self.outcome;
        let (rotations, path) = find_all_rotations(inst);
        self.rotations += rotations.len();

        // path property
        out.check(path.len() == rotations.len() + 1, || {
            format!("{}: path length", label)
        });
        out.check(path[0] == propose_optimal(inst, Side::MenPropose), || {
            format!("{}: path does not start at the man-optimal matching", label)
        });
        out.check(
            path.last() == Some(&propose_optimal(inst, Side::WomenPropose)),
            || format!("{}: path does not end at the woman-optimal matching", label),
        );
        for (k, r) in rotations.iter().enumerate() {
            let stepped = apply_rotation(&path[k], r).ok();
            out.check(stepped.as_ref() == Some(&path[k + 1]), || {
                format!("{}: step {} is not rotation {}", label, k + 1, r)
            });
            out.check(oracle_is_stable(inst, &path[k + 1]), || {
                format!("{}: path matching {} unstable", label, k + 1)
            });
        }
        let distinct: BTreeSet<_> = rotations.iter().map(|r| r.pair_set()).collect();
        out.check(distinct.len() == rotations.len(), || {
            format!("{}: repeated rotation", label)
        });
        if let Some(all) = oracle {
            // every stable pair outside the man-optimal matching is reached by
            // exactly one rotation
            let stable_pairs: BTreeSet<(usize, usize)> = all.iter().flatten().copied().collect();
            let moved: usize = rotations.iter().map(|r| r.len()).sum();
            out.check(stable_pairs.len() == inst.n() + moved, || {
                format!(
                    "{}: {} stable pairs but {} rotation moves",
                    label,
                    stable_pairs.len(),
                    moved
                )
            });
        }

        // no pair eliminated twice, no pair produced twice
        let mut eliminated = BTreeSet::new();
        let mut produced = BTreeSet::new();
        for r in &rotations {
            for p in eliminated_pairs(inst, r) {
                out.check(eliminated.insert(p), || {
                    format!("{}: pair {:?} eliminated twice", label, p)
                });
            }
            for &(m, _) in r.pairs() {
                let p = (m, r.new_partner_of(m).unwrap());
                out.check(produced.insert(p), || {
                    format!("{}: pair {:?} produced twice", label, p)
                });
            }
        }

        // poset axioms
        match rotation_poset(inst) {
            Ok(p) => out.check(p.order.check_axioms().is_ok(), || {
                format!("{}: poset axioms", label)
            }),
            Err(e) => out.check(false, || format!("{}: rotation poset: {}", label, e)),
        }

        // meet and join of stable matchings along the path and beyond
        let sample: Vec<_> = match enumerate_stable_matchings(inst) {
            Ok(it) => it.take(12).collect(),
            Err(_) => path.clone(),
        };
        for a in &sample {
            for b in &sample {
                match lattice_meet_join(inst, a, b) {
                    Ok((hi, lo)) => {
                        out.check(
                            oracle_is_stable(inst, &hi) && oracle_is_stable(inst, &lo),
                            || format!("{}: meet/join unstable", label),
                        );
                        if let Some(all) = oracle {
                            out.check(
                                all.contains(&pairs_of(&hi)) && all.contains(&pairs_of(&lo)),
                                || format!("{}: meet/join outside the stable set", label),
                            );
                        }
                    }
                    Err(e) => out.check(false, || format!("{}: meet/join: {}", label, e)),
                }
            }
        }
    }
}

fn criterion1(inv: &mut Invariants) -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(1);
    let mut total = 0usize;
    for case in 0..500 {
        let n = rng.gen_range(1..=7);
        let inst = mixed_instance(&mut rng, n);
        let oracle = oracle_stable_matchings(&inst);
        total += oracle.len();
        let count = count_stable_matchings(&inst).map(|c| c.to_string());
        out.check(
            count.as_deref() == Ok(oracle.len().to_string().as_str()),
            || {
                format!(
                    "case {}: count {:?} vs oracle {}",
                    case,
                    count,
                    oracle.len()
                )
            },
        );
        let listed: BTreeSet<Pairs> = enumerate_stable_matchings(&inst)
            .map(|it| it.map(|m| pairs_of(&m)).collect())
            .unwrap_or_default();
        out.check(listed == oracle, || {
            format!("case {}: enumerated set differs", case)
        });
        let brute: BTreeSet<Pairs> = brute_force_stable_matchings(&inst)
            .map(|v| v.iter().map(pairs_of).collect())
            .unwrap_or_default();
        out.check(brute == oracle, || {
            format!("case {}: brute-force set differs", case)
        });
        inv.check(&format!("c1 case {}", case), &inst, Some(&oracle));
    }
    out.summary = format!("500 instances, {} stable matchings in total", total);
    out
}

// Every edge set on n1 x n2 vertices with at most `max` edges and no
// isolated vertex.
fn all_small_graphs(max: usize) -> Vec<BipartiteGraph> {
    let mut out = Vec::new();
    for n1 in 1..=max {
        for n2 in 1..=max {
            let cells: Vec<(usize, usize)> = (1..=n1)
                .flat_map(|u| (1..=n2).map(move |v| (u, v)))
                .collect();
            let mut chosen = Vec::new();
            fn rec(
                cells: &[(usize, usize)],
                start: usize,
                max: usize,
                n1: usize,
                n2: usize,
                chosen: &mut Vec<(usize, usize)>,
                out: &mut Vec<BipartiteGraph>,
            ) {
                if let Ok(g) = BipartiteGraph::new(n1, n2, chosen.clone()) {
                    out.push(g);
                }
                if chosen.len() == max {
                    return;
                }
                for i in start..cells.len() {
                    chosen.push(cells[i]);
                    rec(cells, i + 1, max, n1, n2, chosen, out);
                    chosen.pop();
                }
            }
            if n1.max(n2) <= max {
                rec(&cells, 0, max, n1, n2, &mut chosen, &mut out);
            }
        }
    }
    out
}

fn lists_count_matches(g: &BipartiteGraph, out: &mut Outcome, inv: &mut Invariants, label: &str) {
    let expected = oracle_independent_sets(g.n1(), g.n2(), g.edges());
    let inst = gen_partial_lists(g, &Permutation::identity(g.edges().len()));
    match inst {
        Ok(inst) => {
            let count = count_stable_matchings(&inst).map(|c| c.to_string());
            out.check(
                count.as_deref() == Ok(expected.to_string().as_str()),
                || {
                    format!(
                        "{} {:?}: #SM {:?} vs #IS {}",
                        label,
                        g.edges(),
                        count,
                        expected
                    )
                },
            );
            inv.check(label, &inst, None);
        }
        Err(e) => out.check(false, || format!("{} {:?}: {}", label, g.edges(), e)),
    }
}

fn criterion2(inv: &mut Invariants) -> Outcome {
    let mut out = Outcome::new();
    let graphs = all_small_graphs(5);
    for g in &graphs {
        lists_count_matches(g, &mut out, inv, "exhaustive");
    }
    let mut rng = rng(2);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 1, 12);
        lists_count_matches(&g, &mut out, inv, "random");
    }
    out.summary = format!(
        "{} exhaustive graphs (<= 5 edges) + 100 random (<= 12 edges)",
        graphs.len()
    );
    out
}

fn criterion3(inv: &mut Invariants) -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(3);
    for case in 0..50 {
        let g = random_graph(&mut rng, 2, 8);
        let expected = oracle_independent_sets(g.n1(), g.n2(), g.edges());
        for model in [Model::Attr3, Model::Euclid2] {
            match verify_reduction(&g, model) {
                Ok(r) => {
                    out.check(r.all_ok(), || {
                        format!("case {} {} {:?}:\n{}", case, model, g.edges(), r)
                    });
                    out.check(r.sm_count.to_string() == expected.to_string(), || {
                        format!(
                            "case {} {}: #SM {} vs #IS {}",
                            case, model, r.sm_count, expected
                        )
                    });
                }
                Err(e) => out.check(false, || {
                    format!("case {} {} {:?}: {}", case, model, g.edges(), e)
                }),
            }
        }
        if let Ok(inst) = stablecount::reductions::build_instance(&g, Model::Euclid2) {
            inv.check(&format!("c3 case {}", case), &inst, None);
        }
    }
    out.summary = "50 graphs with 2-8 edges, 3-attribute and 2-Euclidean".into();
    out
}

fn criterion4(inv: &mut Invariants) -> Outcome {
    let mut out = Outcome::new();
    let cp = edge_cycles(&three_by_four_graph());
    let as_set = |c: Vec<Vec<usize>>| c.into_iter().collect::<BTreeSet<_>>();
    match cp {
        Ok(cp) => {
            let rho = as_set(cp.rho.cycles());
            let sigma = as_set(cp.sigma.cycles());
            out.check(
                rho == as_set(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8]]),
                || format!("rho cycles {:?}", rho),
            );
            out.check(
                sigma == as_set(vec![vec![1, 7], vec![2, 4], vec![5], vec![3, 6, 8]]),
                || format!("sigma cycles {:?}", sigma),
            );
        }
        Err(e) => out.check(false, || format!("edge_cycles: {}", e)),
    }
    match verify_reduction(&four_by_five_graph(), Model::Lists) {
        Ok(r) => out.check(r.all_ok(), || format!("4x5 graph:\n{}", r)),
        Err(e) => out.check(false, || format!("4x5 graph: {}", e)),
    }
    let mut rng = rng(4);
    for case in 0..20 {
        let g = random_graph(&mut rng, 1, 10);
        let (male, female) = expected_extremes(&oracle_cycles(&g));
        let inst = gen_partial_lists(&g, &Permutation::identity(g.edges().len())).unwrap();
        out.check(
            pairs_of(&propose_optimal(&inst, Side::MenPropose)) == male,
            || format!("case {}: man-optimal matching {:?}", case, g.edges()),
        );
        out.check(
            pairs_of(&propose_optimal(&inst, Side::WomenPropose)) == female,
            || format!("case {}: woman-optimal matching {:?}", case, g.edges()),
        );
        inv.check(&format!("c4 case {}", case), &inst, None);
    }
    out.summary = "cycle fixture, 4x5 graph report, 20 closed-form checks".into();
    out
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn random_distinct(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        seen.insert(rat(rng.gen_range(-1000..1000), rng.gen_range(1..50)));
    }
    let mut v: Vec<_> = seen.into_iter().collect();
    use rand::seq::SliceRandom;
    v.shuffle(rng);
    v
}

fn random_prefs(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            let x = rat(rng.gen_range(1..100), rng.gen_range(1..10));
            if rng.gen_bool(0.5) {
                -x
            } else {
                x
            }
        })
        .collect()
}

// Lists induced by products `pref * attr`, larger first.
fn one_attribute_lists(pref: &[BigRational], attr: &[BigRational]) -> Vec<Vec<usize>> {
    pref.iter()
        .map(|p| {
            let mut idx: Vec<usize> = (1..=attr.len()).collect();
            idx.sort_by(|&a, &b| (p * &attr[b - 1]).cmp(&(p * &attr[a - 1])));
            idx
        })
        .collect()
}

fn criterion5(inv: &mut Invariants) -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(5);
    for case in 0..500 {
        let n = rng.gen_range(1..=7);
        let (ma, mp) = (random_distinct(&mut rng, n), random_prefs(&mut rng, n));
        let (wa, wp) = (random_distinct(&mut rng, n), random_prefs(&mut rng, n));
        let lists =
            Instance::new(one_attribute_lists(&mp, &wa), one_attribute_lists(&wp, &ma)).unwrap();
        let spec = OneAttributeSpec::new(ma, mp, wa, wp).unwrap();
        let inst = spec.to_instance().unwrap();
        out.check(inst == lists, || {
            format!("case {}: induced lists differ", case)
        });
        let oracle = oracle_stable_matchings(&lists);
        let count = count_1attribute(&spec).map(|c| c.to_string());
        out.check(
            count.as_deref() == Ok(oracle.len().to_string().as_str()),
            || {
                format!(
                    "case {}: count {:?} vs oracle {}",
                    case,
                    count,
                    oracle.len()
                )
            },
        );
        let poset = rotation_poset(&inst).unwrap();
        out.check(poset.rotations.iter().all(|r| r.len() == 2), || {
            format!("case {}: rotation size", case)
        });
        let mut people = BTreeSet::new();
        for r in &poset.rotations {
            for &(m, w) in r.pairs() {
                out.check(people.insert((0, m)) && people.insert((1, w)), || {
                    format!("case {}: person in two rotations", case)
                });
            }
        }
        out.check(poset.order.is_chain(), || {
            format!("case {}: poset is not a chain", case)
        });
        inv.check(&format!("c5 case {}", case), &inst, Some(&oracle));
    }
    let mut slowest = Duration::ZERO;
    for case in 0..20 {
        let n = 1000;
        let attr = |rng: &mut ChaCha8Rng| {
            shuffled(rng, n)
                .into_iter()
                .map(|x| x as f64)
                .collect::<Vec<_>>()
        };
        let sign = |rng: &mut ChaCha8Rng| {
            (0..n)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect::<Vec<f64>>()
        };
        let (ma, mp, wa, wp) = (
            attr(&mut rng),
            sign(&mut rng),
            attr(&mut rng),
            sign(&mut rng),
        );
        let spec = OneAttributeSpec::new(ma, mp, wa, wp).unwrap();
        let start = Instant::now();
        let count = count_1attribute(&spec);
        let took = start.elapsed();
        slowest = slowest.max(took);
        out.check(count.is_ok() && took < Duration::from_secs(5), || {
            format!(
                "large case {}: {:?} in {:.2?}",
                case,
                count.map(|c| c.to_string()),
                took
            )
        });
    }
    out.summary = format!(
        "500 small specs; 20 specs with n = 1000, slowest {:.2?}",
        slowest
    );
    out
}

fn criterion6(inv: &Invariants) -> Outcome {
    let mut out = Outcome::new();
    out.ok = inv.outcome.ok && inv.instances > 0;
    out.failures = inv.outcome.failures.clone();
    out.summary = format!(
        "{} instances, {} rotations checked",
        inv.instances, inv.rotations
    );
    out
}

fn criterion7() -> Outcome {
    let mut out = Outcome::new();
    let spec = "\
model dot 2 2
mpos 1: 1 0
mpos 2: 0 1
mpref 1: 1 2
mpref 2: 2 1
wpos 1: 3/4 1/4
wpos 2: 3/4 1/4
wpref 1: 1 0
wpref 2: 0 1
";
    match GeometricSpec::parse(spec) {
        Ok(GeometricSpec::Dot(s)) => {
            let r = instance_from_dot(&s);
            out.check(matches!(r, Err(Error::TieDetected(_))), || {
                format!("library result {:?}", r)
            });
        }
        other => out.check(false, || {
            format!("spec did not parse as a dot spec: {:?}", other)
        }),
    }
    for sub in ["count", "solve", "rotations"] {
        let o = run_with_stdin(["stablecount", sub, "-"], spec);
        out.check(
            o.code == 1 && o.stdout.is_empty() && o.stderr.contains("tie"),
            || {
                format!(
                    "cli {}: exit {} stdout {:?} stderr {:?}",
                    sub, o.code, o.stdout, o.stderr
                )
            },
        );
    }
    out.summary = "identical women positions rejected with exit code 1".into();
    out
}

fn main() {
    let mut inv = Invariants {
        instances: 0,
        rotations: 0,
        outcome: Outcome::new(),
    };
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut timed = |k: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        results.push((k, o, start.elapsed()));
    };
    timed(1, &mut || criterion1(&mut inv));
    timed(2, &mut || criterion2(&mut inv));
    timed(3, &mut || criterion3(&mut inv));
    timed(4, &mut || criterion4(&mut inv));
    timed(5, &mut || criterion5(&mut inv));
    timed(6, &mut || criterion6(&inv));
    timed(7, &mut criterion7);

    let limits = [60, 300, 600, 60, 600, 600, 60];
    let mut all_ok = true;
    for (k, o, took) in &results {
        let in_time = took.as_secs() < limits[k - 1];
        let ok = o.ok && in_time;
        all_ok &= ok;
        println!(
            "criterion {}: {} ({}; {:.2?})",
            k,
            if ok { "PASS" } else { "FAIL" },
            o.summary,
            took
        );
        if !in_time {
            println!("    over the {} s budget", limits[k - 1]);
        }
        for f in &o.failures {
            for line in f.lines() {
                println!("    {}", line);
            }
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}
