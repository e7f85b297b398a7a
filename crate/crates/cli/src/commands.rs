//! The non-suite subcommands: compilers, closure exploration, puzzles and
//! interaction-graph checks.

use std::fs;
use std::path::{Path, PathBuf};

use anet_core::graphs::{
    tchuente_condition, verify_graph_universality, GraphLimits, IncompleteReason, Universality,
};
use anet_core::instructions::{
    decompose_into_assignments, decompose_singular, emit_program, Instruction, Program,
};
use anet_core::puzzle::{hamming_graph, puzzle_group, wilson_predict, DEFAULT_STATE_CAP};
use anet_core::semigroup::{close, GeneratorSet, UpdateMode};
use anet_core::text::{emit_word, parse_digraph, parse_network};
use anet_core::universal::{
    compile_factor, compile_init, factor_simulator, init_simulator, verify_factor, verify_init,
};
use anet_core::Network;
use serde_json::json;

use crate::report::{Failure, Outcome, Report};

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn load_network(path: &Path) -> Outcome<Network> {
    parse_network(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn parse_mode(s: &str) -> Outcome<UpdateMode> {
    UpdateMode::ALL
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| Failure::Usage(format!("unknown mode {s:?}; expected seq, async or sync")))
}

fn check_dims(f: &Network, n: Option<usize>, q: Option<usize>) -> Outcome {
    let p = f.params();
    if n.is_some_and(|n| n != p.n()) || q.is_some_and(|q| q != p.q()) {
        return Err(Failure::Usage(format!(
            "target has n = {}, q = {}, which disagrees with --n/--q",
            p.n(),
            p.q()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Factor,
    Init,
}

/// Compile `h` into a word for the universal simulator, verified by replay.
pub fn universal(
    kind: Construction,
    target: &Path,
    n: Option<usize>,
    q: Option<usize>,
    emit: bool,
    out: Option<&Path>,
    report: &mut Report,
) -> Outcome {
    let h = load_network(target)?;
    check_dims(&h, n, q)?;
    let (n, q) = (h.params().n(), h.params().q());
    report.param("n", n).param("q", q).param("target", target.display().to_string());
    let (word, ok, alphabet) = match kind {
        Construction::Factor => {
            let w = compile_factor(&h)?;
            let f = factor_simulator(n, q)?;
            let ok = verify_factor(&f, &h, &w)?;
            (w, ok, 2 * q)
        }
        Construction::Init => {
            let w = compile_init(&h)?;
            let f = init_simulator(n, q)?;
            let ok = verify_init(&f, &h, &w)?;
            (w, ok, q + 1)
        }
    };
    let text = emit_word(&word);
    report.counter("word_length", word.len() as u64).counter("simulator_alphabet", alphabet as u64);
    if emit {
        report.artifact("word", text.clone());
    }
    if let Some(path) = out {
        write(path, &format!("{text}\n"))?;
        report.artifact("word_file", path.display().to_string());
    }
    report.verdict("word_replays_to_target", ok, json!(null));
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstrMode {
    Singular,
    Assignment,
}

/// Factor a network into instructions and write the program file.
pub fn decompose(mode: InstrMode, input: &Path, out: Option<&Path>, report: &mut Report) -> Outcome {
    let f = load_network(input)?;
    let p = f.params();
    report.param("n", p.n()).param("q", p.q()).param("in", input.display().to_string());
    let program = match mode {
        InstrMode::Singular => Program::from_instructions(p, &decompose_singular(&f)?),
        InstrMode::Assignment => {
            let ins = Instruction::from_network(f.clone())?;
            Program::from_assignments(p, &decompose_into_assignments(&ins)?)
        }
    };
    let text = emit_program(&program);
    report.counter("steps", program.steps.len() as u64);
    match out {
        Some(path) => {
            write(path, &text)?;
            report.artifact("program_file", path.display().to_string());
        }
        None => {
            report.artifact("program", text);
        }
    }
    report.verdict("program_replays_to_target", program.replay() == f, json!(null));
    Ok(())
}

/// `--graph hamming:N,Q`.
fn parse_graph_spec(spec: &str) -> Outcome<(usize, usize)> {
    let bad = || Failure::Usage(format!("expected hamming:N,Q, got {spec:?}"));
    let rest = spec.strip_prefix("hamming:").ok_or_else(bad)?;
    let (n, q) = rest.split_once(',').ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

pub fn puzzle(graph: &str, hole: usize, full: bool, report: &mut Report) -> Outcome {
    let (n, q) = parse_graph_spec(graph)?;
    report.param("graph", graph).param("hole", hole as u64);
    let g = hamming_graph(n, q)?;
    let group = puzzle_group(&g, hole, DEFAULT_STATE_CAP)?;
    let prediction = wilson_predict(&g);
    let predicted = prediction.order(g.vertex_count());
    report.counter("order", group.order()).counter("states", group.states());
    if full {
        report
            .counter("vertices", g.vertex_count() as u64)
            .counter("edges", g.edge_count() as u64)
            .counter("bipartite", g.is_bipartite())
            .counter("two_connected", g.is_two_connected());
    }
    report.verdict(
        "order_matches_prediction",
        predicted.is_none_or(|o| o == group.order()),
        json!({ "prediction": format!("{prediction:?}"), "predicted_order": predicted }),
    );
    Ok(())
}

pub fn graph_check(input: &Path, q: usize, mode: UpdateMode, report: &mut Report) -> Outcome {
    let d = parse_digraph(&read(input)?).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    report
        .param("in", input.display().to_string())
        .param("q", q as u64)
        .param("mode", mode.name());
    let cert = tchuente_condition(&d);
    report
        .counter("vertices", d.n() as u64)
        .counter("strongly_connected", cert.strongly_connected)
        .counter("components", json!(cert.components))
        .counter("full_in_degree", json!(cert.full_in_degree));
    let u = verify_graph_universality(&d, q, mode, &GraphLimits::default())?;
    match &u {
        Universality::Complete { members, generators_used } => {
            report.counter("members", *members).counter("generators_used", *generators_used as u64);
        }
        Universality::Incomplete { missing, reason } => {
            report.counter("missing", json!(missing.table()));
            report.counter(
                "reason",
                match reason {
                    IncompleteReason::NoRankDropGenerator => "no_rank_drop_generator".to_string(),
                    IncompleteReason::ClosureMisses { members } => format!("closure_misses ({members} members)"),
                },
            );
        }
    }
    report.counter("universal", u.is_complete());
    if d.is_reflexive() {
        report.verdict("characterization_agrees", u.is_complete() == cert.holds(), json!(null));
    }
    Ok(())
}

pub struct ClosureArgs<'a> {
    pub gens: &'a [PathBuf],
    pub mode: UpdateMode,
    pub limit: usize,
    pub dump: Option<&'a Path>,
    pub query: &'a [PathBuf],
}

pub fn closure(args: &ClosureArgs, report: &mut Report) -> Outcome {
    let nets = args.gens.iter().map(|p| load_network(p)).collect::<Outcome<Vec<_>>>()?;
    let first = nets.first().ok_or_else(|| Failure::Usage("at least one --gen is required".into()))?;
    let p = first.params();
    report
        .param("n", p.n())
        .param("q", p.q())
        .param("mode", args.mode.name())
        .param("limit", args.limit as u64);
    let set = GeneratorSet::new(p, args.mode, nets)?;
    let c = close(&set, args.limit)?;
    report
        .counter("members", c.len() as u64)
        .counter("generators", c.generator_codes().len() as u64)
        .counter("depth_histogram", json!(c.depth_histogram()));
    report.verdict("witnesses_replay", c.verify_witnesses(), json!(null));
    if let Some(path) = args.dump {
        // One member per line: the 0-based image index of each configuration.
        let mut text = format!("# {} {}\n", p.q(), p.n());
        for m in c.members() {
            let row: Vec<String> = m.table().iter().map(u32::to_string).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        write(path, &text)?;
        report.artifact("dump", path.display().to_string());
    }
    let mut answers = Vec::new();
    for path in args.query {
        let g = load_network(path)?;
        let labels = c.witness_labels(&g);
        answers.push(json!({
            "file": path.display().to_string(),
            "member": labels.is_some(),
            "witness": labels.map(|ls| ls
                .iter()
                .map(|l| format!("{}:{}", l.base + 1, l.subset.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()),
        }));
    }
    if !answers.is_empty() {
        report.artifact("queries", answers);
    }
    Ok(())
}
