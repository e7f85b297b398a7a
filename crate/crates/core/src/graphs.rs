//! Networks constrained by an interaction digraph.
//!
//! `F(D, q)` is the set of networks whose interaction graph is a subgraph of
//! `D`. A reflexive `D` generates all of `F(n, q)` (in any update mode)
//! exactly when it is strongly connected and some vertex has in-degree `n`.

use std::ops::ControlFlow;

use crate::digraph::InteractionDigraph;
use crate::error::{Error, Result};
use crate::instructions::Instruction;
use crate::network::{Configuration, CoordSet, Network, Params};
use crate::semigroup::{Closure, Packing, Scratch, UpdateMode, DEFAULT_MEMBER_LIMIT};

pub fn in_family(f: &Network, d: &InteractionDigraph) -> bool {
    f.params().n() == d.n() && f.interaction_graph().is_subgraph_of(d)
}

/// `f_i(x) = x_(phi(i))`, 0-based.
pub fn variable_permutation(params: Params, phi: &[usize]) -> Result<Network> {
    let n = params.n();
    let mut seen = vec![false; n];
    if phi.len() != n || phi.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
        return Err(Error::InvalidParams(format!("{phi:?} is not a permutation of 0..{n}")));
    }
    Network::from_tuple_fn(params, |x| phi.iter().map(|&j| x[j]).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TchuenteCertificate {
    pub strongly_connected: bool,
    /// Strong components, each sorted, ordered by smallest vertex.
    pub components: Vec<Vec<usize>>,
    /// The first vertex whose in-degree, loop included, is `n`.
    pub full_in_degree: Option<usize>,
}

impl TchuenteCertificate {
    pub fn holds(&self) -> bool {
        self.strongly_connected && self.full_in_degree.is_some()
    }
}

pub fn tchuente_condition(d: &InteractionDigraph) -> TchuenteCertificate {
    TchuenteCertificate {
        strongly_connected: d.is_strongly_connected(),
        components: d.strong_components(),
        full_in_degree: (0..d.n()).find(|&v| d.in_degree(v) == d.n()),
    }
}

/// One line of a variable-transposition program, in `Z_q` arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinearRule {
    /// `y_target <- y_target + y_source`
    Add { target: usize, source: usize },
    /// `y_target <- y_target - y_source`
    Sub { target: usize, source: usize },
    /// `y_target <- y_source - y_target`
    Reverse { target: usize, source: usize },
}

impl LinearRule {
    pub fn target(self) -> usize {
        match self {
            LinearRule::Add { target, .. }
            | LinearRule::Sub { target, .. }
            | LinearRule::Reverse { target, .. } => target,
        }
    }

    fn eval(self, x: &[usize], q: usize) -> usize {
        match self {
            LinearRule::Add { target, source } => (x[target] + x[source]) % q,
            LinearRule::Sub { target, source } => (x[target] + q - x[source]) % q,
            LinearRule::Reverse { target, source } => (x[source] + q - x[target]) % q,
        }
    }

    pub fn instruction(self, params: Params) -> Instruction {
        let t = self.target();
        let net = Network::from_tuple_fn(params, |x| {
            let mut y = x.to_vec();
            y[t] = self.eval(x, params.q());
            y
        })
        .expect("digits reduced mod q");
        Instruction::new(t, net).expect("updates only the target")
    }
}

impl std::fmt::Display for LinearRule {
    /// 1-based, e.g. `y2 <- y1 + y2`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            LinearRule::Add { target, source } => {
                write!(f, "y{} <- y{} + y{}", target + 1, target + 1, source + 1)
            }
            LinearRule::Sub { target, source } => {
                write!(f, "y{} <- y{} - y{}", target + 1, target + 1, source + 1)
            }
            LinearRule::Reverse { target, source } => {
                write!(f, "y{} <- y{} - y{}", target + 1, source + 1, target + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearStep {
    pub rule: LinearRule,
    pub instruction: Instruction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstructionProgram {
    pub params: Params,
    pub steps: Vec<LinearStep>,
}

impl InstructionProgram {
    pub fn replay(&self) -> Network {
        let mut acc = Network::identity(self.params);
        for s in &self.steps {
            acc = s.instruction.network().after(&acc);
        }
        acc
    }

    pub fn respects(&self, d: &InteractionDigraph) -> bool {
        self.steps.iter().all(|s| in_family(s.instruction.network(), d))
    }
}

/// Instructions in `F(D, q)` exchanging `x_u` and `x_v`, for an arc `(u, v)`
/// of a reflexive `D`. The return path `v -> w_1 -> ... -> w_l -> u` is a
/// shortest one.
pub fn transposition_program(
    d: &InteractionDigraph,
    q: usize,
    u: usize,
    v: usize,
) -> Result<InstructionProgram> {
    let params = Params::new(d.n(), q)?;
    params.check_coordinate(u)?;
    params.check_coordinate(v)?;
    if !d.is_reflexive() {
        return Err(Error::InvalidParams("the digraph must be reflexive".into()));
    }
    let mut rules = Vec::new();
    if u != v {
        if !d.has_arc(u, v) {
            return Err(Error::NotAnArc { u, v });
        }
        let path = d.shortest_path(v, u).ok_or(Error::NoReturnPath { from: v, to: u })?;
        let w = &path[1..path.len() - 1];
        let l = w.len();
        use LinearRule::*;
        rules.push(Add { target: v, source: u });
        if l > 0 {
            for i in 1..l {
                rules.push(Add { target: w[i], source: w[i - 1] });
            }
            rules.push(Add { target: u, source: w[l - 1] });
            for i in (1..l).rev() {
                rules.push(Sub { target: w[i], source: w[i - 1] });
            }
            rules.push(Add { target: w[0], source: v });
            for i in 1..l {
                rules.push(Add { target: w[i], source: w[i - 1] });
            }
        }
        let last = w.last().copied().unwrap_or(v);
        rules.push(Reverse { target: u, source: last });
        if l > 0 {
            for i in (1..l).rev() {
                rules.push(Sub { target: w[i], source: w[i - 1] });
            }
            rules.push(Sub { target: w[0], source: v });
        }
        rules.push(Sub { target: v, source: u });
    }
    let program = InstructionProgram {
        params,
        steps: rules
            .into_iter()
            .map(|rule| LinearStep {
                rule,
                instruction: rule.instruction(params),
            })
            .collect(),
    };
    let mut phi: Vec<usize> = (0..d.n()).collect();
    phi.swap(u, v);
    if program.replay() != variable_permutation(params, &phi)? || !program.respects(d) {
        return Err(Error::DecompositionUnavailable(
            "internal error: transposition program failed to replay".into(),
        ));
    }
    Ok(program)
}

/// Violations of the fiber-size constraint: for `d_v < n`, every
/// `|f_v^{-1}(y)|` is a multiple of `q^(n - d_v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSumReport {
    /// `(v, y, |f_v^{-1}(y)|)`
    pub violations: Vec<(usize, usize, usize)>,
    pub checked: Vec<usize>,
}

impl ColumnSumReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn column_sum_check(f: &Network, d: &InteractionDigraph) -> Result<ColumnSumReport> {
    let p = f.params();
    if p.n() != d.n() {
        return Err(Error::Mismatch("digraph and network sizes differ".into()));
    }
    let mut report = ColumnSumReport {
        violations: Vec::new(),
        checked: Vec::new(),
    };
    for v in 0..p.n() {
        let dv = d.in_degree(v);
        if dv >= p.n() {
            continue;
        }
        report.checked.push(v);
        let modulus = p.q().pow((p.n() - dv) as u32);
        for (y, &count) in f.coordinate_histogram(v)?.iter().enumerate() {
            if count % modulus != 0 {
                report.violations.push((v, y, count));
            }
        }
    }
    Ok(report)
}

/// Generators of `F(D, q)` under a mode: `f^(S)` for `f` in the family and
/// `S` among the mode's masks. Local functions are indexed by their value
/// table over the in-neighbours.
#[derive(Debug, Clone)]
pub struct Family {
    params: Params,
    inputs: Vec<Vec<usize>>,
    masks: Vec<CoordSet>,
}

impl Family {
    pub fn new(d: &InteractionDigraph, q: usize, mode: UpdateMode) -> Result<Self> {
        let params = Params::new(d.n(), q)?;
        Ok(Family {
            params,
            inputs: (0..d.n()).map(|v| d.in_neighbors(v)).collect(),
            masks: mode.subsets(d.n()),
        })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    fn local_count(&self, v: usize) -> Option<u64> {
        let q = self.params.q() as u64;
        let patterns = q.checked_pow(self.inputs[v].len() as u32)?;
        q.checked_pow(u32::try_from(patterns).ok()?)
    }

    /// Number of generators, counted with repetition across masks.
    pub fn count(&self) -> Option<u64> {
        self.masks.iter().try_fold(0u64, |acc, s| {
            let per = s
                .iter()
                .try_fold(1u64, |a, v| a.checked_mul(self.local_count(v)?))?;
            acc.checked_add(per)
        })
    }

    /// Visit every generator table; stop early on `Break`.
    pub fn for_each(&self, mut visit: impl FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        let p = self.params;
        let q = p.q();
        let pattern: Vec<Vec<usize>> = self
            .inputs
            .iter()
            .map(|ins| {
                (0..p.size())
                    .map(|x| ins.iter().rev().fold(0, |acc, &u| acc * q + p.digit(x, u)))
                    .collect()
            })
            .collect();
        let mut table = vec![0u32; p.size()];
        for mask in &self.masks {
            let coords: Vec<usize> = mask.iter().collect();
            // One base-q value table per masked coordinate, run as an odometer.
            let mut locals: Vec<Vec<usize>> = coords
                .iter()
                .map(|&v| vec![0; q.pow(self.inputs[v].len() as u32)])
                .collect();
            loop {
                for (x, t) in table.iter_mut().enumerate() {
                    let mut y = x;
                    for (k, &v) in coords.iter().enumerate() {
                        y = p.with_digit(y, v, locals[k][pattern[v][x]]);
                    }
                    *t = y as u32;
                }
                visit(&table)?;
                let mut carried = true;
                'odometer: for local in locals.iter_mut() {
                    for digit in local.iter_mut() {
                        *digit += 1;
                        if *digit < q {
                            carried = false;
                            break 'odometer;
                        }
                        *digit = 0;
                    }
                }
                if carried {
                    break;
                }
            }
        }
        ControlFlow::Continue(())
    }

    pub fn networks(&self, cap: u64) -> Result<Vec<Network>> {
        match self.count() {
            Some(c) if c <= cap => {}
            _ => {
                return Err(Error::LimitExceeded {
                    what: "generators in the family",
                    limit: cap,
                })
            }
        }
        let mut out = Vec::new();
        let _ = self.for_each(|t| {
            out.push(Network::from_table_unchecked(self.params, t.to_vec()));
            ControlFlow::Continue(())
        });
        Ok(out)
    }
}

/// The closure of a family with witnesses; only for small families.
pub fn family_closure(
    d: &InteractionDigraph,
    q: usize,
    mode: UpdateMode,
    generator_cap: u64,
    member_limit: usize,
) -> Result<Closure> {
    let fam = Family::new(d, q, mode)?;
    let nets = fam.networks(generator_cap)?;
    Closure::from_networks(fam.params(), &nets, Vec::new(), member_limit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphLimits {
    /// Families larger than this are not materialized.
    pub generator_cap: u64,
    /// Families larger than this are not even streamed.
    pub stream_cap: u64,
    pub member_limit: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            generator_cap: 1 << 20,
            stream_cap: 1 << 26,
            member_limit: DEFAULT_MEMBER_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncompleteReason {
    /// No generator has rank `q^n - 1`, and no product of them can.
    NoRankDropGenerator,
    /// The closure was computed and misses the witness.
    ClosureMisses { members: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Universality {
    Complete { members: u64, generators_used: usize },
    Incomplete { missing: Network, reason: IncompleteReason },
}

impl Universality {
    pub fn is_complete(&self) -> bool {
        matches!(self, Universality::Complete { .. })
    }
}

/// Whether the family generates all of `F(n, q)` under `mode`.
///
/// Generators are streamed; one is kept only if it is not already in the
/// closure of those kept before, and the closure is then extended in place.
pub fn verify_graph_universality(
    d: &InteractionDigraph,
    q: usize,
    mode: UpdateMode,
    limits: &GraphLimits,
) -> Result<Universality> {
    let fam = Family::new(d, q, mode)?;
    let p = fam.params();
    match fam.count() {
        Some(c) if c <= limits.stream_cap => {}
        _ => {
            return Err(Error::LimitExceeded {
                what: "generators in the family",
                limit: limits.stream_cap,
            })
        }
    }
    let pk = Packing::for_params(p)?;
    let rank = |t: &[u32]| {
        let mut hit = vec![false; t.len()];
        t.iter().filter(|&&y| !std::mem::replace(&mut hit[y as usize], true)).count()
    };
    let drop = |t: &[u32]| rank(t) == t.len() - 1;
    let any_drop = fam.for_each(|t| if drop(t) { ControlFlow::Break(()) } else { ControlFlow::Continue(()) });
    if any_drop.is_continue() && p.size() > 1 {
        return Ok(Universality::Incomplete {
            missing: Network::assignment(p, Configuration(0), Configuration(1)),
            reason: IncompleteReason::NoRankDropGenerator,
        });
    }

    let (members, kept, missing) = if pk.code_bits() <= 24 {
        let mut scratch = Scratch::new(pk)?;
        let mut kept: Vec<u64> = Vec::new();
        let mut overflow = false;
        let total = pk.total();
        // Permutations and rank-drop maps first: they usually generate
        // everything, and keeping low-rank maps early makes every later
        // extension expensive.
        for high_rank_only in [true, false] {
            let flow = fam.for_each(|t| {
                if high_rank_only && rank(t) + 1 < t.len() {
                    return ControlFlow::Continue(());
                }
                let code = pk.encode(t);
                if !scratch.contains(code) {
                    kept.push(code);
                    if !scratch.extend(&kept, limits.member_limit) {
                        overflow = true;
                        return ControlFlow::Break(());
                    }
                    if total == Some(scratch.members().len() as u64) {
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            });
            if flow.is_break() {
                break;
            }
        }
        if overflow {
            return Err(Error::LimitExceeded {
                what: "closure members",
                limit: limits.member_limit as u64,
            });
        }
        let missing = pk.all_codes().find(|&c| !scratch.contains(c));
        (scratch.members().len() as u64, kept.len(), missing)
    } else {
        let nets = fam.networks(limits.generator_cap)?;
        let closure = Closure::from_networks(p, &nets, Vec::new(), limits.member_limit)?;
        let missing = if closure.is_full() {
            None
        } else {
            pk.all_codes().find(|&c| !closure.contains_code(c))
        };
        (closure.len() as u64, closure.generator_codes().len(), missing)
    };
    Ok(match missing {
        None => Universality::Complete {
            members,
            generators_used: kept,
        },
        Some(code) => Universality::Incomplete {
            missing: pk.network(p, code),
            reason: IncompleteReason::ClosureMisses { members },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex(arcs: &[(usize, usize)]) -> InteractionDigraph {
        InteractionDigraph::new(2, arcs.iter().copied()).unwrap().with_loops()
    }

    #[test]
    fn family_membership() {
        let p = Params::new(2, 2).unwrap();
        let d = two_vertex(&[]);
        assert!(in_family(&Network::identity(p), &d));
        assert!(in_family(&Network::constant(p, Configuration(3)), &InteractionDigraph::empty(2)));
        let swap = variable_permutation(p, &[1, 0]).unwrap();
        assert!(!in_family(&swap, &two_vertex(&[(0, 1)])));
        assert!(in_family(&swap, &two_vertex(&[(0, 1), (1, 0)])));
    }

    #[test]
    fn family_sizes() {
        let d = two_vertex(&[(0, 1)]);
        let fam = Family::new(&d, 2, UpdateMode::Synchronous).unwrap();
        // f_1 depends on x_1 only, f_2 on both.
        assert_eq!(fam.count(), Some(4 * 16));
        let nets = fam.networks(1 << 10).unwrap();
        assert_eq!(nets.len(), 64);
        assert!(nets.iter().all(|f| in_family(f, &d)));
        let seq = Family::new(&d, 2, UpdateMode::Sequential).unwrap();
        assert_eq!(seq.count(), Some(4 + 16));
    }

    #[test]
    fn tchuente_examples() {
        assert!(tchuente_condition(&InteractionDigraph::complete_reflexive(3)).holds());
        let loops = tchuente_condition(&InteractionDigraph::empty(3).with_loops());
        assert!(!loops.strongly_connected);
        let two = tchuente_condition(&two_vertex(&[(0, 1), (1, 0)]));
        assert_eq!(two.full_in_degree, Some(0));
        assert!(!tchuente_condition(&InteractionDigraph::reflexive_cycle(3)).holds());
    }

    #[test]
    fn short_program_is_three_steps() {
        let d = two_vertex(&[(0, 1), (1, 0)]);
        let prog = transposition_program(&d, 2, 0, 1).unwrap();
        let text: Vec<String> = prog.steps.iter().map(|s| s.rule.to_string()).collect();
        assert_eq!(text, ["y2 <- y2 + y1", "y1 <- y2 - y1", "y2 <- y2 - y1"]);
        assert!(transposition_program(&d, 2, 1, 1).unwrap().steps.is_empty());
    }

    #[test]
    fn triangle_program() {
        let d = InteractionDigraph::reflexive_cycle(3);
        let prog = transposition_program(&d, 3, 0, 1).unwrap();
        assert!(prog.respects(&d));
        assert_eq!(prog.replay(), variable_permutation(prog.params, &[1, 0, 2]).unwrap());
        assert_eq!(transposition_program(&d, 3, 1, 0), Err(Error::NotAnArc { u: 1, v: 0 }));
    }

    #[test]
    fn two_vertex_universality() {
        for arcs in [vec![], vec![(0, 1)], vec![(1, 0)], vec![(0, 1), (1, 0)]] {
            let d = two_vertex(&arcs);
            let expect = tchuente_condition(&d).holds();
            for mode in UpdateMode::ALL {
                let u = verify_graph_universality(&d, 2, mode, &GraphLimits::default()).unwrap();
                assert_eq!(u.is_complete(), expect, "{arcs:?} {mode:?}");
            }
        }
    }

    #[test]
    fn column_sums_for_family_members() {
        let d = two_vertex(&[(0, 1)]);
        for f in Family::new(&d, 3, UpdateMode::Synchronous).unwrap().networks(1 << 20).unwrap() {
            assert!(column_sum_check(&f, &d).unwrap().holds());
        }
    }
}
