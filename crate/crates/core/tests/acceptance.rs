//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Everything runs by default, including the slow parts (about five minutes
//! on one core). `ANET_TIER=quick` skips the slow parts; criteria that are
//! entirely slow then report SKIP.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use anet_core::graphs::{
    tchuente_condition, transposition_program, variable_permutation, verify_graph_universality,
    GraphLimits,
};
use anet_core::instructions::{
    all_assignments, all_instructions, assignment_parity_obstruction, decompose_into_assignments,
    in_s, replay_assignments, Instruction, ParityVerdict,
};
use anet_core::puzzle::{hamming_graph, puzzle_group, wilson_predict, WilsonPrediction, DEFAULT_STATE_CAP};
use anet_core::semigroup::{
    close_incremental, greedy_cover, sequentially_simulatable, verify_no_async_singular, CoverConfig,
    Packing, SimLimits, Simulatability, Strategy, UpdateMode, DEFAULT_MEMBER_LIMIT,
};
use anet_core::universal::{
    assemble_init, compile_factor, factor_simulator, gadget_words, init_gadgets, init_simulator,
    sync_word, verify_factor, verify_init, CkdGenerators, CkdSymbol, ControlState, FactorCoding,
    InitCoding,
};
use anet_core::{Configuration, InteractionDigraph, Network, Params};
use common::Tally;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    detail: String,
    /// Failures we expect: the claim is wrong and the test checks the truth
    /// instead.
    known: bool,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail: detail.into(),
        known: false,
    }
}

type Criterion = Box<dyn Fn() -> Outcome>;

fn within(t: Instant, limit: Duration) -> bool {
    t.elapsed() <= limit
}

fn circular_permutation() -> Outcome {
    let t = Instant::now();
    let p = Params::new(2, 2).unwrap();
    let e = |d: [usize; 2]| p.encode(&d).unwrap().index();
    let mut table = vec![0u32; 4];
    for (from, to) in [([0, 0], [0, 1]), ([0, 1], [1, 1]), ([1, 1], [1, 0]), ([1, 0], [0, 0])] {
        table[e(from)] = e(to) as u32;
    }
    let f = Network::from_table(p, table).unwrap();
    let v = sequentially_simulatable(&f, Strategy::Exhaustive, SimLimits::default()).unwrap();
    outcome(
        v == Simulatability::No && within(t, Duration::from_secs(5)),
        format!("verdict {v:?} in {:?}", t.elapsed()),
    )
}

fn full_cover(long: bool) -> Outcome {
    if !long {
        return Outcome { status: Status::Skip, detail: "slow; unset ANET_TIER".into(), known: false };
    }
    let t = Instant::now();
    let r = greedy_cover(Params::new(3, 2).unwrap(), &CoverConfig::default()).unwrap();
    outcome(
        r.complete() && r.covered == 16_777_216,
        format!(
            "{} / {} covered, {} closures, {} contributors, {:?}",
            r.covered,
            r.targets,
            r.closures,
            r.contributors.len(),
            t.elapsed()
        ),
    )
}

fn no_async_singular() -> Outcome {
    let t = Instant::now();
    let r = verify_no_async_singular(Params::new(2, 2).unwrap()).unwrap();
    outcome(
        r.holds() && r.singular_maps == 232 && r.entries.len() == 256 && within(t, Duration::from_secs(60)),
        format!("{} singular maps, {} simulators, {:?}", r.singular_maps, r.entries.len(), t.elapsed()),
    )
}

fn ckd_products(p: Params) -> Vec<Network> {
    use CkdSymbol::*;
    let g = CkdGenerators::factor(p).unwrap();
    vec![
        Network::identity(p),
        g.replay(&[C]),
        g.replay(&[K]),
        g.replay(&[D]),
        g.replay(&[K, D]),
        g.replay(&[C, K]),
    ]
}

fn factor_construction() -> Outcome {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (n, q) in [(3, 2), (3, 3)] {
        let small = Params::new(n, q).unwrap();
        let coding = FactorCoding::new(n, q).unwrap();
        let f = factor_simulator(n, q).unwrap();
        let sync = sync_word(q);
        for x in 0..small.size() {
            let digits = small.decode(Configuration(x as u32));
            for y in ControlState::ALL {
                let bits: Vec<u8> = (0..n).map(|i| if i < 3 { y.bit(i) } else { 0 }).collect();
                let (d2, b2) = coding.split(f.trace(&sync, coding.join(&digits, &bits)).unwrap());
                if d2 != digits || b2[..3] != [1, 0, 1] {
                    failures.push(format!("sync ({n},{q}) x={x} y={y}"));
                }
            }
        }
        let gens = CkdGenerators::factor(small).unwrap();
        let gadgets = gadget_words(n);
        for s in [CkdSymbol::C, CkdSymbol::K, CkdSymbol::D] {
            if !verify_factor(&f, gens.network(s), &sync.concat(gadgets.get(s))).unwrap() {
                failures.push(format!("gadget {s} ({n},{q})"));
            }
        }
        for h in ckd_products(small) {
            if !verify_factor(&f, &h, &compile_factor(&h).unwrap()).unwrap() {
                failures.push(format!("equivariance ({n},{q})"));
            }
        }
    }
    outcome(
        failures.is_empty() && within(t, Duration::from_secs(10)),
        format!("{} failures {:?}, {:?}", failures.len(), failures.first(), t.elapsed()),
    )
}

fn init_construction() -> Outcome {
    use CkdSymbol::*;
    let t = Instant::now();
    let (n, q) = (6, 2);
    let small = Params::new(n, q).unwrap();
    let coding = InitCoding::new(n, q).unwrap();
    let f = init_simulator(n, q).unwrap();
    let gens = CkdGenerators::init(small).unwrap();
    let g = init_gadgets(&coding);
    let mut ok = [C, K, D].iter().all(|&s| verify_init(&f, gens.network(s), g.get(s)).unwrap());
    for word in [vec![C, K, D], vec![D, D, C, K], vec![K, C, D, C]] {
        ok &= verify_init(&f, &gens.replay(&word), &assemble_init(&coding, &word)).unwrap();
    }
    outcome(ok && within(t, Duration::from_secs(10)), format!("{:?}", t.elapsed()))
}

fn singular_closure(p: Params) -> (bool, String) {
    let gens = all_instructions(p, true).unwrap();
    let members = close_incremental(p, gens.iter().map(|g| g.network().clone()), DEFAULT_MEMBER_LIMIT).unwrap();
    let pk = Packing::for_params(p).unwrap();
    let mismatches = pk
        .all_codes()
        .filter(|&c| in_s(&pk.network(p, c)).is_some() != members.contains_code(c))
        .count();
    (mismatches == 0, format!("{p}: {} members, {mismatches} mismatches", members.len()))
}

fn singular_generation(long: bool) -> Outcome {
    let t = Instant::now();
    let (mut ok, mut detail) = singular_closure(Params::new(2, 2).unwrap());
    ok &= within(t, Duration::from_secs(5));
    if long {
        let (ok3, d3) = singular_closure(Params::new(3, 2).unwrap());
        ok &= ok3;
        detail = format!("{detail}; {d3}");
    }
    outcome(ok, format!("{detail}, {:?}", t.elapsed()))
}

fn random_singular_instruction(p: Params, rng: &mut ChaCha8Rng) -> Instruction {
    let v = rng.gen_range(0..p.n());
    let mut table: Vec<u32> = (0..p.size())
        .map(|x| p.with_digit(x, v, rng.gen_range(0..p.q())) as u32)
        .collect();
    let x = rng.gen_range(0..p.size());
    let y = p.with_digit(x, v, (p.digit(x, v) + rng.gen_range(1..p.q())) % p.q());
    table[y] = table[x];
    Instruction::new(v, Network::from_table(p, table).unwrap()).unwrap()
}

fn assignment_generation() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = 0;
    let mut factors = 0;
    for (n, q) in [(2, 3), (3, 3)] {
        let p = Params::new(n, q).unwrap();
        for _ in 0..1000 {
            let ins = random_singular_instruction(p, &mut rng);
            let prog = decompose_into_assignments(&ins).unwrap();
            factors += prog.len();
            if &replay_assignments(p, &prog) != ins.network()
                || prog.iter().any(|a| p.hamming(a.a().index(), a.b().index()) != 1)
            {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && within(t, Duration::from_secs(30)),
        format!("2000 instructions, {factors} assignments, {failures} failures, {:?}", t.elapsed()),
    )
}

fn puzzle_orders() -> Outcome {
    let t = Instant::now();
    let mut orders = Vec::new();
    let mut predicted = true;
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let g = hamming_graph(n, q).unwrap();
        let order = puzzle_group(&g, 0, DEFAULT_STATE_CAP).unwrap().order();
        predicted &= wilson_predict(&g).order(g.vertex_count()) == Some(order);
        orders.push(order);
    }
    // The square is a 4-cycle: sliding tokens around it rotates them, so the
    // group is cyclic of order 3 rather than trivial.
    assert_eq!(orders, [3, 2520, 40320]);
    assert!(predicted);
    assert_eq!(wilson_predict(&hamming_graph(2, 2).unwrap()), WilsonPrediction::Cyclic);
    let claimed = orders == [1, 2520, 40320];
    Outcome {
        known: !claimed,
        ..outcome(
            claimed && predicted && within(t, Duration::from_secs(120)),
            format!("orders {orders:?} (claimed [1, 2520, 40320]), predictions agree: {predicted}, {:?}", t.elapsed()),
        )
    }
}

fn binary_obstruction(long: bool) -> Outcome {
    let t = Instant::now();
    let p = Params::new(3, 2).unwrap();
    let e = |d: [usize; 3]| p.encode(&d).unwrap();
    let f = Network::transposition(p, e([0, 1, 0]), e([1, 1, 0]))
        .compose(&Network::assignment(p, e([0, 0, 0]), e([1, 0, 0])))
        .unwrap();
    let verdict = assignment_parity_obstruction(&f);
    let mut ok = verdict == ParityVerdict::ParityBlocked;
    let mut detail = format!("parity {verdict:?}");
    if long {
        let gens = all_assignments(p);
        let closure = close_incremental(p, gens.iter().cloned(), DEFAULT_MEMBER_LIMIT).unwrap();
        ok &= gens.len() == 24 && !closure.contains(&f);
        detail = format!("{detail}; closure of {} assignments has {} members, contains f: {}", gens.len(), closure.len(), closure.contains(&f));
    }
    outcome(ok, format!("{detail}, {:?}", t.elapsed()))
}

fn graph_universality(long: bool) -> Outcome {
    let t = Instant::now();
    let limits = GraphLimits::default();
    let mut cases = Vec::new();
    for arcs in [vec![], vec![(0, 1)], vec![(1, 0)], vec![(0, 1), (1, 0)]] {
        cases.push((InteractionDigraph::new(2, arcs).unwrap().with_loops(), None));
    }
    let mut ok = true;
    let mut checked = 0;
    let mut run = |cases: Vec<(InteractionDigraph, Option<bool>)>, ok: &mut bool| {
        for (d, expected) in cases {
            let condition = tchuente_condition(&d).holds();
            for mode in UpdateMode::ALL {
                let complete = verify_graph_universality(&d, 2, mode, &limits).unwrap().is_complete();
                *ok &= complete == condition && expected.is_none_or(|e| e == complete);
                checked += 1;
            }
        }
    };
    run(cases, &mut ok);
    ok &= within(t, Duration::from_secs(60));
    if long {
        run(
            vec![
                (InteractionDigraph::reflexive_cycle(3), Some(false)),
                (InteractionDigraph::complete_reflexive(3), Some(true)),
            ],
            &mut ok,
        );
    }
    outcome(ok, format!("{checked} digraph/mode pairs, {:?}", t.elapsed()))
}

fn transposition_programs() -> Outcome {
    let t = Instant::now();
    let mut programs = 0;
    let mut failures = 0;
    for n in 1..=3usize {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let arcs = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a);
            let d = InteractionDigraph::new(n, arcs).unwrap().with_loops();
            if !d.is_strongly_connected() {
                continue;
            }
            for q in [2, 3] {
                let p = Params::new(n, q).unwrap();
                for (u, v) in d.arcs().filter(|(u, v)| u != v) {
                    programs += 1;
                    let prog = transposition_program(&d, q, u, v).unwrap();
                    let mut phi: Vec<usize> = (0..n).collect();
                    phi.swap(u, v);
                    if prog.replay() != variable_permutation(p, &phi).unwrap() || !prog.respects(&d) {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(
        failures == 0 && programs > 0 && within(t, Duration::from_secs(60)),
        format!("{programs} programs, {failures} failures, {:?}", t.elapsed()),
    )
}

fn property_suites() -> Outcome {
    let t = Instant::now();
    let mut networks = Tally::default();
    let mut closures = Tally::default();
    for q in 2..=8 {
        networks.add(common::exhaustive_networks(Params::new(1, q).unwrap()));
    }
    for n in [2, 3] {
        networks.add(common::exhaustive_networks(Params::new(n, 2).unwrap()));
    }
    for (n, q) in [(1, 2), (1, 3), (1, 4), (2, 2)] {
        closures.add(common::exhaustive_closures(Params::new(n, q).unwrap(), 1 << 16));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut random = Tally::default();
    for i in 0..10_000 {
        let p = if i % 2 == 0 { Params::new(3, 2) } else { Params::new(2, 3) }.unwrap();
        let f = if i % 4 < 2 {
            common::random_network(p, &mut rng)
        } else {
            common::near_bijective_network(p, &mut rng)
        };
        random.cases += 1;
        let closure = common::closure_properties(&f, 1 << 16);
        random.skipped += closure.is_none() as u64;
        random.failures += (!common::network_properties(&f) || closure == Some(false)) as u64;
    }
    let failures = networks.failures + closures.failures + random.failures;
    outcome(
        failures == 0,
        format!(
            "exhaustive networks {:?}; exhaustive closures {:?}; seeded {:?}; {:?}",
            networks,
            closures,
            random,
            t.elapsed()
        ),
    )
}

fn main() -> ExitCode {
    let long = std::env::var("ANET_TIER").map_or(true, |t| t != "quick");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("circular permutation of F(2,2) is not sequentially simulatable", Box::new(circular_permutation)),
        ("every map of F(3,2) is sequentially simulatable", Box::new(move || full_cover(long))),
        ("no asynchronous closure in F(2,2) contains every singular map", Box::new(no_async_singular)),
        ("factor-universal simulator at (3,2) and (3,3)", Box::new(factor_construction)),
        ("initialization-universal simulator at (2,6)", Box::new(init_construction)),
        ("singular instructions generate exactly the distance-1 collision maps", Box::new(move || singular_generation(long))),
        ("random singular instructions factor into assignments", Box::new(assignment_generation)),
        ("puzzle group orders on H(2,2), H(3,2), H(2,3)", Box::new(puzzle_orders)),
        ("binary swap-after-assignment is not generated by assignments", Box::new(move || binary_obstruction(long))),
        ("interaction-graph universality matches the structural condition", Box::new(move || graph_universality(long))),
        ("transposition programs on strong reflexive digraphs", Box::new(transposition_programs)),
        ("property suites", Box::new(property_suites)),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let note = if o.known { " [known: claim contradicted, truth asserted]" } else { "" };
        println!("criterion {:>2} [PRIMARY] {tag}: {name} ({}){note}", i + 1, o.detail);
        if matches!(o.status, Status::Fail) && !o.known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
