//! Verification suites behind `anet verify`.

use std::path::PathBuf;

use anet_core::graphs::{
    tchuente_condition, transposition_program, variable_permutation, verify_graph_universality,
    GraphLimits, IncompleteReason, Universality,
};
use anet_core::instructions::{
    all_assignments, all_instructions, assignment_parity_obstruction, decompose_into_assignments,
    in_s, replay_assignments, Instruction, ParityVerdict,
};
use anet_core::puzzle::{hamming_graph, puzzle_group, wilson_predict, DEFAULT_STATE_CAP};
use anet_core::semigroup::{
    close_incremental, greedy_cover, sequentially_simulatable, verify_no_async_singular,
    verify_t_obstruction, Closure, CoverConfig, Packing, SimLimits, Simulatability, Strategy,
    UpdateMode, DEFAULT_MEMBER_LIMIT,
};
use anet_core::text::emit_word;
use anet_core::universal::{
    assemble_init, compile_factor, gadget_words, sync_word, factor_simulator, init_gadgets,
    init_simulator, verify_factor, verify_init, CkdGenerators, CkdSymbol, ControlState,
    FactorCoding, InitCoding,
};
use anet_core::{Configuration, InteractionDigraph, Network, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{Failure, Outcome, Report};

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub n: Option<usize>,
    pub q: Option<usize>,
    pub long: bool,
    pub seed: u64,
    pub count: usize,
    pub checkpoint: Option<PathBuf>,
}

pub const SUITES: [&str; 11] = [
    "thm2", "propT", "thm4", "thm5", "prop1", "thm6", "wilson", "thm7", "lemma1", "seqsim22",
    "seqsim32",
];

/// Descriptive names accepted in place of the short suite ids.
pub const ALIASES: [(&str, &str); 11] = [
    ("no-async-singular", "thm2"),
    ("rank-obstruction", "propT"),
    ("factor-universality", "thm4"),
    ("init-universality", "thm5"),
    ("singular-generation", "prop1"),
    ("assignment-generation", "thm6"),
    ("puzzle-orders", "wilson"),
    ("graph-universality", "thm7"),
    ("transposition-programs", "lemma1"),
    ("sequential-22", "seqsim22"),
    ("sequential-32", "seqsim32"),
];

pub fn run(suite: &str, opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let suite = ALIASES.iter().find(|(alias, _)| *alias == suite).map_or(suite, |(_, id)| id);
    report.param("suite", suite).param("tier", if opts.long { "long" } else { "default" });
    match suite {
        "thm2" => no_async_singular(opts, report),
        "propT" => rank_obstruction(opts, report),
        "thm4" => factor_universality(opts, report),
        "thm5" => init_universality(opts, report),
        "prop1" => singular_generation(opts, report),
        "thm6" => assignment_generation(opts, report),
        "wilson" => puzzle_orders(report),
        "thm7" => graph_universality(opts, report),
        "lemma1" => transposition_programs(report),
        "seqsim22" => sequential_22(report),
        "seqsim32" => sequential_32(opts, report),
        other => Err(Failure::Usage(format!(
            "unknown suite {other:?}; expected one of {} or {}",
            SUITES.join(", "),
            ALIASES.map(|(a, _)| a).join(", ")
        ))),
    }
}

fn params(opts: &SuiteOptions, n: usize, q: usize, report: &mut Report) -> Outcome<Params> {
    let (n, q) = (opts.n.unwrap_or(n), opts.q.unwrap_or(q));
    report.param("n", n).param("q", q);
    Ok(Params::new(n, q)?)
}

fn no_async_singular(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let p = params(opts, 2, 2, report)?;
    let r = verify_no_async_singular(p)?;
    report.counter("singular_maps", r.singular_maps);
    report.counter("simulators", r.entries.len() as u64);
    let offenders = r.entries.iter().filter(|e| e.missing.is_none()).count();
    report.verdict(
        "no_asynchronous_closure_contains_all_singular_maps",
        r.holds(),
        json!({ "offenders": offenders }),
    );
    Ok(())
}

fn rank_obstruction(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let p = params(opts, 2, 2, report)?;
    let r = verify_t_obstruction(p)?;
    report.counter("simulators", r.entries.len() as u64);
    let mut reasons = serde_json::Map::new();
    for e in &r.entries {
        let key = format!("{:?}", e.reason);
        let slot = reasons.entry(key).or_insert(json!(0));
        *slot = json!(slot.as_u64().unwrap_or(0) + 1);
    }
    report.counter("reasons", reasons);
    report.verdict("obstruction_holds_for_every_simulator", r.holds(), json!(null));
    Ok(())
}

fn ckd_targets(p: Params) -> Outcome<Vec<(&'static str, Network)>> {
    let g = CkdGenerators::factor(p)?;
    let (c, k, d) = (
        g.network(CkdSymbol::C).clone(),
        g.network(CkdSymbol::K).clone(),
        g.network(CkdSymbol::D).clone(),
    );
    Ok(vec![
        ("id", Network::identity(p)),
        ("c", c.clone()),
        ("k", k.clone()),
        ("d", d.clone()),
        ("d.k", d.compose(&k)?),
        ("k.c", k.compose(&c)?),
    ])
}

fn factor_universality(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let sizes = match (opts.n, opts.q) {
        (None, None) => vec![(3, 2), (3, 3)],
        (n, q) => vec![(n.unwrap_or(3), q.unwrap_or(2))],
    };
    report.param("sizes", json!(sizes));
    for (n, q) in sizes {
        factor_universality_at(Params::new(n, q)?, report)?;
    }
    Ok(())
}

fn factor_universality_at(small: Params, report: &mut Report) -> Outcome {
    let (n, q) = (small.n(), small.q());
    let tag = format!("{n}_{q}");
    let coding = FactorCoding::new(n, q)?;
    let f = factor_simulator(n, q)?;

    // Synchronization from every digit vector and control state.
    let sync = sync_word(q);
    let mut starts = 0u64;
    let mut bad = 0u64;
    let mut bits = vec![0u8; n];
    for x in 0..small.size() {
        let digits = small.decode(Configuration(x as u32));
        for y in ControlState::ALL {
            for (i, b) in bits.iter_mut().take(3).enumerate() {
                *b = y.bit(i);
            }
            let end = f.trace(&sync, coding.join(&digits, &bits))?;
            let (digits2, bits2) = coding.split(end);
            starts += 1;
            if digits2 != digits || bits2[..3] != [1, 0, 1] {
                bad += 1;
            }
        }
    }
    report.counter(&format!("sync_starts_{tag}"), starts);
    report.verdict(
        &format!("sync_word_fixes_digits_and_lands_on_101_{tag}"),
        bad == 0,
        json!({ "failures": bad }),
    );

    let gens = CkdGenerators::factor(small)?;
    let gadgets = gadget_words(n);
    for s in [CkdSymbol::C, CkdSymbol::K, CkdSymbol::D] {
        let w = sync.concat(gadgets.get(s));
        let ok = verify_factor(&f, gens.network(s), &w)?;
        report.verdict(&format!("gadget_{s}_{tag}"), ok, json!(emit_word(gadgets.get(s))));
    }
    for (name, h) in ckd_targets(small)? {
        let w = compile_factor(&h)?;
        let ok = verify_factor(&f, &h, &w)?;
        report.verdict(&format!("factor_equivariance_{name}_{tag}"), ok, json!({ "word_length": w.len() }));
    }
    report.counter(&format!("simulator_configurations_{tag}"), coding.large().size() as u64);
    Ok(())
}

fn init_universality(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let small = params(opts, 6, 2, report)?;
    let coding = InitCoding::new(small.n(), small.q())?;
    let f = init_simulator(small.n(), small.q())?;
    let gens = CkdGenerators::init(small)?;
    let g = init_gadgets(&coding);
    for s in [CkdSymbol::C, CkdSymbol::K, CkdSymbol::D] {
        let ok = verify_init(&f, gens.network(s), g.get(s))?;
        report.verdict(&format!("gadget_{s}"), ok, json!({ "word_length": g.get(s).len() }));
    }
    use CkdSymbol::*;
    for word in [vec![C, K, D], vec![K, K], vec![D, C, C, K], vec![C, D, K, C]] {
        let w = assemble_init(&coding, &word);
        let h = gens.replay(&word);
        let name: String = word.iter().rev().map(|s| s.to_string()).collect::<Vec<_>>().join(".");
        report.verdict(&format!("chain_{name}"), verify_init(&f, &h, &w)?, json!({ "word_length": w.len() }));
    }
    report.counter("initial_configurations", small.size() as u64);
    Ok(())
}

fn singular_generation(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let default = if opts.long { (3, 2) } else { (2, 2) };
    let p = params(opts, default.0, default.1, report)?;
    let gens = all_instructions(p, true)?;
    let members = close_incremental(p, gens.iter().map(|g| g.network().clone()), DEFAULT_MEMBER_LIMIT)?;
    let pk = Packing::for_params(p)?;
    let mut predicate = 0u64;
    let mut mismatches = 0u64;
    let mut first = None;
    for code in pk.all_codes() {
        let f = pk.network(p, code);
        let s = in_s(&f).is_some();
        predicate += s as u64;
        if s != members.contains_code(code) {
            mismatches += 1;
            first.get_or_insert(code);
        }
    }
    report.counter("singular_instructions", gens.len() as u64);
    report.counter("closure_members", members.len() as u64);
    report.counter("predicate_members", predicate);
    report.verdict(
        "closure_equals_distance_one_collision_set",
        mismatches == 0,
        json!({ "mismatches": mismatches, "first": first }),
    );
    Ok(())
}

fn random_singular_instruction(p: Params, rng: &mut ChaCha8Rng) -> Instruction {
    let q = p.q();
    let v = rng.gen_range(0..p.n());
    let mut table: Vec<u32> = (0..p.size())
        .map(|x| p.with_digit(x, v, rng.gen_range(0..q)) as u32)
        .collect();
    let x = rng.gen_range(0..p.size());
    let y = p.with_digit(x, v, (p.digit(x, v) + rng.gen_range(1..q)) % q);
    table[y] = table[x];
    Instruction::new(v, Network::from_table(p, table).expect("valid table")).expect("updates v only")
}

fn assignment_generation(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    report.param("seed", opts.seed).param("count", opts.count as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (n, q) in [(2, 3), (3, 3)] {
        let p = Params::new(n, q)?;
        let mut failures = 0u64;
        let mut factors = 0u64;
        for _ in 0..opts.count {
            let ins = random_singular_instruction(p, &mut rng);
            let prog = decompose_into_assignments(&ins)?;
            factors += prog.len() as u64;
            let adjacent = prog.iter().all(|a| p.hamming(a.a().index(), a.b().index()) == 1);
            if !adjacent || &replay_assignments(p, &prog) != ins.network() {
                failures += 1;
            }
        }
        report.counter(&format!("factors_{n}_{q}"), factors);
        report.verdict(
            &format!("assignment_factorization_replays_{n}_{q}"),
            failures == 0,
            json!({ "failures": failures }),
        );
    }

    // Binary alphabet: the swap after an assignment is out of reach.
    let p = Params::new(3, 2)?;
    let e = |d: [usize; 3]| p.encode(&d).expect("digits below 2");
    let f = Network::transposition(p, e([0, 1, 0]), e([1, 1, 0]))
        .compose(&Network::assignment(p, e([0, 0, 0]), e([1, 0, 0])))?;
    let verdict = assignment_parity_obstruction(&f);
    report.verdict(
        "binary_counterexample_parity_blocked",
        verdict == ParityVerdict::ParityBlocked,
        json!(format!("{verdict:?}")),
    );
    if opts.long {
        let closure = close_incremental(p, all_assignments(p), DEFAULT_MEMBER_LIMIT)?;
        report.counter("assignment_closure_members", closure.len() as u64);
        report.verdict(
            "binary_counterexample_outside_assignment_closure",
            !closure.contains(&f),
            json!({ "members": closure.len() }),
        );
    }
    Ok(())
}

fn puzzle_orders(report: &mut Report) -> Outcome {
    // The claimed orders, and what the graph structure predicts.
    for (n, q, claimed) in [(2usize, 2usize, 1u64), (3, 2, 2520), (2, 3, 40320)] {
        let d = hamming_graph(n, q)?;
        let prediction = wilson_predict(&d);
        let g = puzzle_group(&d, 0, DEFAULT_STATE_CAP)?;
        let other = puzzle_group(&d, d.vertex_count() - 1, DEFAULT_STATE_CAP)?;
        report.counter(&format!("order_h{n}{q}"), g.order());
        report.verdict(
            &format!("h{n}{q}_matches_prediction"),
            prediction.order(d.vertex_count()) == Some(g.order()),
            json!({ "prediction": format!("{prediction:?}"), "order": g.order() }),
        );
        report.verdict(
            &format!("h{n}{q}_hole_independent"),
            other.order() == g.order(),
            json!({ "other_hole_order": other.order() }),
        );
        report.verdict(
            &format!("h{n}{q}_order_is_{claimed}"),
            g.order() == claimed,
            json!({ "order": g.order() }),
        );
    }
    Ok(())
}

fn graph_universality(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let q = opts.q.unwrap_or(2);
    report.param("q", q);
    let limits = GraphLimits::default();
    let mut graphs: Vec<(String, InteractionDigraph, Option<bool>)> = Vec::new();
    for arcs in [vec![], vec![(0, 1)], vec![(1, 0)], vec![(0, 1), (1, 0)]] {
        let name = format!("n2_{arcs:?}").replace(' ', "");
        graphs.push((name, InteractionDigraph::new(2, arcs)?.with_loops(), None));
    }
    if opts.long {
        graphs.push(("n3_reflexive_cycle".into(), InteractionDigraph::reflexive_cycle(3), Some(false)));
        graphs.push(("n3_complete".into(), InteractionDigraph::complete_reflexive(3), Some(true)));
    }
    for (name, d, expected) in graphs {
        let condition = tchuente_condition(&d).holds();
        for mode in UpdateMode::ALL {
            let u = verify_graph_universality(&d, q, mode, &limits)?;
            let detail = match &u {
                Universality::Complete { members, generators_used } => {
                    json!({ "complete": true, "members": members, "generators_used": generators_used })
                }
                Universality::Incomplete { reason, .. } => json!({
                    "complete": false,
                    "reason": match reason {
                        IncompleteReason::NoRankDropGenerator => "no_rank_drop_generator".to_string(),
                        IncompleteReason::ClosureMisses { members } => format!("closure_misses ({members} members)"),
                    },
                }),
            };
            let ok = u.is_complete() == condition && expected.is_none_or(|e| e == u.is_complete());
            report.verdict(&format!("{name}_{}", mode.name()), ok, detail);
        }
    }
    Ok(())
}

/// Reflexive strongly connected digraphs on `n` vertices, by arc subset.
fn strong_reflexive(n: usize) -> Vec<InteractionDigraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let arcs = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a);
            InteractionDigraph::new(n, arcs).expect("arcs in range").with_loops()
        })
        .filter(|d| d.is_strongly_connected())
        .collect()
}

fn transposition_programs(report: &mut Report) -> Outcome {
    let mut programs = 0u64;
    let mut failures = 0u64;
    let mut digraphs = 0u64;
    for n in 1..=3 {
        for d in strong_reflexive(n) {
            digraphs += 1;
            for q in [2, 3] {
                let p = Params::new(n, q)?;
                for (u, v) in d.arcs().filter(|(u, v)| u != v) {
                    programs += 1;
                    let prog = transposition_program(&d, q, u, v)?;
                    let mut phi: Vec<usize> = (0..n).collect();
                    phi.swap(u, v);
                    if prog.replay() != variable_permutation(p, &phi)? || !prog.respects(&d) {
                        failures += 1;
                    }
                }
            }
        }
    }
    report.counter("digraphs", digraphs).counter("programs", programs);
    report.verdict("transposition_programs_replay", failures == 0, json!({ "failures": failures }));
    Ok(())
}

fn sequential_22(report: &mut Report) -> Outcome {
    let p = Params::new(2, 2)?;
    // 00 -> 01 -> 11 -> 10 -> 00, written x1 x2.
    let e = |d: [usize; 2]| p.encode(&d).expect("binary digits").index();
    let mut table = vec![0u32; 4];
    for (from, to) in [([0, 0], [0, 1]), ([0, 1], [1, 1]), ([1, 1], [1, 0]), ([1, 0], [0, 0])] {
        table[e(from)] = e(to) as u32;
    }
    let circular = Network::from_table(p, table)?;
    let verdict = sequentially_simulatable(&circular, Strategy::Exhaustive, SimLimits::default())?;
    report.verdict(
        "circular permutation not simulatable: confirmed",
        verdict == Simulatability::No,
        json!(match verdict {
            Simulatability::Yes { .. } => "simulatable",
            Simulatability::No => "not simulatable",
            Simulatability::Unknown(_) => "unknown",
        }),
    );
    let cover = greedy_cover(p, &CoverConfig::default())?;
    report.counter("simulatable_maps", cover.covered).counter("maps", cover.targets);
    let closure = Closure::from_networks(p, std::slice::from_ref(&circular), Vec::new(), 256)?;
    report.counter("own_closure_size", closure.len() as u64);
    Ok(())
}

fn sequential_32(opts: &SuiteOptions, report: &mut Report) -> Outcome {
    let p = Params::new(3, 2)?;
    report.param("n", 3).param("q", 2);
    if !opts.long {
        return Err(Failure::Usage("seqsim32 is a long-tier suite; rerun with --tier long".into()));
    }
    let config = CoverConfig {
        checkpoint: opts.checkpoint.clone(),
        ..CoverConfig::default()
    };
    let r = greedy_cover(p, &config)?;
    report
        .counter("covered", r.covered)
        .counter("targets", r.targets)
        .counter("closures", r.closures)
        .counter("contributors", r.contributors.len() as u64)
        .counter("resumed", r.resumed);
    report.verdict("every_map_sequentially_simulatable", r.complete(), json!(null));
    Ok(())
}

