//! Simulatability experiments: is a target inside the closure of some
//! single network, and which maps can never be reached asynchronously.

use rayon::prelude::*;

use super::closure::{close, Closure, GeneratorSet, Scratch, UpdateMode, DEFAULT_MEMBER_LIMIT};
use super::packing::Packing;
use crate::error::{Error, Result};
use crate::network::{CoordSet, Network, Params, RankClass, UpdateWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Try every network of `F(n,q)`; the only strategy that can answer No.
    Exhaustive,
    /// Try the target itself, then candidates in ascending code order.
    GreedyCover,
}

#[derive(Debug, Clone, Copy)]
pub struct SimLimits {
    pub member_limit: usize,
    /// Maximum number of candidate simulators to close.
    pub candidate_limit: Option<u64>,
}

impl Default for SimLimits {
    fn default() -> Self {
        SimLimits {
            member_limit: DEFAULT_MEMBER_LIMIT,
            candidate_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simulatability {
    Yes { simulator: Network, word: UpdateWord },
    No,
    Unknown(String),
}

impl Simulatability {
    pub fn is_yes(&self) -> bool {
        matches!(self, Simulatability::Yes { .. })
    }
}

fn sequential_codes(pk: &Packing, f: &Network) -> Vec<u64> {
    (0..f.params().n())
        .map(|v| pk.code_of(&f.masked_unchecked(CoordSet::singleton(v))))
        .collect()
}

fn sequential_codes_of(pk: &Packing, params: Params, code: u64) -> Vec<u64> {
    sequential_codes(pk, &pk.network(params, code))
}

/// Whether `g` lies in the sequential closure of some single network.
pub fn sequentially_simulatable(
    g: &Network,
    strategy: Strategy,
    limits: SimLimits,
) -> Result<Simulatability> {
    let params = g.params();
    if g.is_identity() {
        return Ok(Simulatability::Yes {
            simulator: g.clone(),
            word: UpdateWord::empty(),
        });
    }
    let pk = Packing::for_params(params)?;
    let total = pk
        .total()
        .ok_or(Error::LimitExceeded { what: "transformation space", limit: u64::MAX })?;
    let target = pk.code_of(g);
    let budget = limits.candidate_limit.unwrap_or(u64::MAX);

    let found = match strategy {
        Strategy::Exhaustive => {
            let span = total.min(budget);
            let hit = (0..span).into_par_iter().map_init(
                || Scratch::new(pk).expect("dense scratch"),
                |scratch, ord| {
                    let f = pk.from_ordinal(ord);
                    let gens = sequential_codes_of(&pk, params, f);
                    let complete = scratch.close(&gens, limits.member_limit);
                    if scratch.contains(target) {
                        Some(Ok(f))
                    } else if !complete {
                        Some(Err(f))
                    } else {
                        None
                    }
                },
            );
            match hit.find_first(|r| r.is_some()).flatten() {
                Some(Ok(f)) => Some(f),
                Some(Err(f)) => {
                    return Ok(Simulatability::Unknown(format!(
                        "closure of candidate {f:#x} exceeded {} members",
                        limits.member_limit
                    )))
                }
                None if span < total => {
                    return Ok(Simulatability::Unknown(format!(
                        "stopped after {span} of {total} candidates"
                    )))
                }
                None => return Ok(Simulatability::No),
            }
        }
        Strategy::GreedyCover => {
            let mut scratch = Scratch::new(pk)?;
            let order = std::iter::once(target).chain(
                (0..total).map(|o| pk.from_ordinal(o)).filter(|&c| c != target),
            );
            let mut found = None;
            let mut truncated = false;
            for f in order.take(budget.min(total) as usize) {
                let gens = sequential_codes_of(&pk, params, f);
                truncated |= !scratch.close(&gens, limits.member_limit);
                if scratch.contains(target) {
                    found = Some(f);
                    break;
                }
            }
            match found {
                Some(f) => Some(f),
                None => {
                    let why = if truncated {
                        "some candidate closures exceeded the member limit"
                    } else {
                        "greedy candidates exhausted"
                    };
                    return Ok(Simulatability::Unknown(why.into()));
                }
            }
        }
    };

    let f = pk.network(params, found.expect("handled above"));
    let cl = close(&GeneratorSet::single(&f, UpdateMode::Sequential), limits.member_limit)?;
    let word = cl
        .witness_word(g)
        .ok_or_else(|| Error::Mismatch("closure lost a member it reported".into()))?;
    if f.word_apply(&word)? != *g {
        return Err(Error::Mismatch("witness word does not replay to the target".into()));
    }
    Ok(Simulatability::Yes { simulator: f, word })
}

/// Networks of `F(n,q)` that are not bijective.
pub fn is_singular_code(pk: &Packing, code: u64) -> bool {
    !pk.is_bijective(code)
}

/// Outcome of one network in an exhaustive obstruction sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub simulator: u64,
    pub closure_size: usize,
    /// A map of the target class absent from the closure, if any.
    pub missing: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct SingularReport {
    pub params: Params,
    pub singular_maps: u64,
    pub entries: Vec<SweepEntry>,
}

impl SingularReport {
    /// Every network misses at least one singular map.
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.missing.is_some())
    }
}

fn async_closure(pk: &Packing, params: Params, f: u64, limit: usize) -> Result<Closure> {
    let net = pk.network(params, f);
    close(&GeneratorSet::single(&net, UpdateMode::Asynchronous), limit)
}

fn sweep<F>(params: Params, member_limit: usize, want: F) -> Result<Vec<SweepEntry>>
where
    F: Fn(&Packing, u64) -> bool + Sync,
{
    let pk = Packing::for_params(params)?;
    let total = pk
        .total()
        .filter(|&t| t <= 1 << 24)
        .ok_or(Error::LimitExceeded { what: "exhaustive sweep size", limit: 1 << 24 })?;
    (0..total)
        .into_par_iter()
        .map(|o| {
            let f = pk.from_ordinal(o);
            let cl = async_closure(&pk, params, f, member_limit)?;
            let missing = pk.all_codes().find(|&c| want(&pk, c) && !cl.contains_code(c));
            Ok(SweepEntry {
                simulator: f,
                closure_size: cl.len(),
                missing,
            })
        })
        .collect()
}

/// For every `f`, find a singular map outside the asynchronous closure of `f`.
pub fn verify_no_async_singular(params: Params) -> Result<SingularReport> {
    let pk = Packing::for_params(params)?;
    let singular_maps = pk.all_codes().filter(|&c| is_singular_code(&pk, c)).count() as u64;
    let entries = sweep(params, DEFAULT_MEMBER_LIMIT, is_singular_code)?;
    Ok(SingularReport {
        params,
        singular_maps,
        entries,
    })
}

/// Which step of the rank argument rules out `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TReason {
    /// `f_v` is not balanced, so `x + (1,...,1)` is unreachable.
    Unbalanced { coordinate: usize },
    /// Some `f^(S)` has rank `q^n - 1`.
    RankDropStep { subset: CoordSet },
    /// No `f^(S)` is of type I, so type I maps are unreachable.
    NoTypeIStep,
}

#[derive(Debug, Clone)]
pub struct TEntry {
    pub sweep: SweepEntry,
    pub reason: TReason,
}

#[derive(Debug, Clone)]
pub struct TReport {
    pub params: Params,
    pub entries: Vec<TEntry>,
}

impl TReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.sweep.missing.is_some())
    }
}

/// Classify why the rank argument excludes `f`.
pub fn t_reason(f: &Network) -> TReason {
    let n = f.params().n();
    if let Some(v) = (0..n).find(|&v| !f.is_balanced(v).expect("coordinate in range")) {
        return TReason::Unbalanced { coordinate: v };
    }
    for s in CoordSet::nonempty_subsets(n) {
        if f.masked_unchecked(s).classify_rank_deficiency() == RankClass::RankDrop1 {
            return TReason::RankDropStep { subset: s };
        }
    }
    TReason::NoTypeIStep
}

/// For every `f`, find a map whose rank is not `q^n - 1` outside the
/// asynchronous closure of `f`.
pub fn verify_t_obstruction(params: Params) -> Result<TReport> {
    let pk = Packing::for_params(params)?;
    let size = pk.points();
    let entries = sweep(params, DEFAULT_MEMBER_LIMIT, |pk, c| pk.rank(c) != size - 1)?;
    Ok(TReport {
        params,
        entries: entries
            .into_iter()
            .map(|e| {
                let reason = t_reason(&pk.network(params, e.simulator));
                TEntry { sweep: e, reason }
            })
            .collect(),
    })
}
