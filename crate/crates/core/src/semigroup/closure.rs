use std::collections::HashMap;

use rayon::prelude::*;

use super::packing::Packing;
use crate::error::{Error, Result};
use crate::network::{CoordSet, Network, Params, UpdateWord};

/// Default cap on closure size.
pub const DEFAULT_MEMBER_LIMIT: usize = 1 << 25;

/// Codes up to this width use a dense bit index instead of a hash map.
const DENSE_CODE_BITS: u32 = 32;

/// Frontier slices smaller than this are expanded on the calling thread.
const PARALLEL_THRESHOLD: usize = 4096;

/// How base networks are expanded into generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateMode {
    /// `f^(v)` for every coordinate `v`.
    Sequential,
    /// `f^(V)` for every nonempty coordinate set `V`.
    Asynchronous,
    /// `f` itself.
    Synchronous,
}

impl UpdateMode {
    pub const ALL: [UpdateMode; 3] = [
        UpdateMode::Sequential,
        UpdateMode::Asynchronous,
        UpdateMode::Synchronous,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Sequential => "seq",
            UpdateMode::Asynchronous => "async",
            UpdateMode::Synchronous => "sync",
        }
    }

    pub fn subsets(self, n: usize) -> Vec<CoordSet> {
        match self {
            UpdateMode::Sequential => (0..n).map(CoordSet::singleton).collect(),
            UpdateMode::Asynchronous => CoordSet::nonempty_subsets(n).collect(),
            UpdateMode::Synchronous => vec![CoordSet::full(n)],
        }
    }
}

/// Where an expanded generator came from: base network and update mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorLabel {
    pub base: usize,
    pub subset: CoordSet,
}

/// Base networks together with the update mode that expands them.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    params: Params,
    mode: UpdateMode,
    base: Vec<Network>,
}

impl GeneratorSet {
    pub fn new(params: Params, mode: UpdateMode, base: Vec<Network>) -> Result<Self> {
        if base.iter().any(|f| f.params() != params) {
            return Err(Error::Mismatch("generator parameters differ".into()));
        }
        Ok(GeneratorSet { params, mode, base })
    }

    pub fn single(f: &Network, mode: UpdateMode) -> Self {
        GeneratorSet {
            params: f.params(),
            mode,
            base: vec![f.clone()],
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn mode(&self) -> UpdateMode {
        self.mode
    }

    pub fn base(&self) -> &[Network] {
        &self.base
    }

    /// Expanded generators in (base, subset) order.
    pub fn expand(&self) -> Vec<(Network, GeneratorLabel)> {
        let subsets = self.mode.subsets(self.params.n());
        let mut out = Vec::with_capacity(self.base.len() * subsets.len());
        for (i, f) in self.base.iter().enumerate() {
            for &s in &subsets {
                out.push((f.masked_unchecked(s), GeneratorLabel { base: i, subset: s }));
            }
        }
        out
    }
}

enum MemberIndex {
    Dense { seen: Vec<u64>, ids: Vec<u32> },
    Hashed(HashMap<u64, u32>),
}

impl MemberIndex {
    fn new(pk: &Packing) -> Self {
        if pk.code_bits() <= DENSE_CODE_BITS {
            let len = 1usize << pk.code_bits();
            MemberIndex::Dense {
                seen: vec![0; len.div_ceil(64)],
                ids: vec![0; len],
            }
        } else {
            MemberIndex::Hashed(HashMap::new())
        }
    }

    #[inline]
    fn contains(&self, code: u64) -> bool {
        match self {
            MemberIndex::Dense { seen, .. } => seen[(code >> 6) as usize] & (1 << (code & 63)) != 0,
            MemberIndex::Hashed(map) => map.contains_key(&code),
        }
    }

    fn id(&self, code: u64) -> Option<u32> {
        match self {
            MemberIndex::Dense { ids, .. } => self.contains(code).then(|| ids[code as usize]),
            MemberIndex::Hashed(map) => map.get(&code).copied(),
        }
    }

    /// Returns false if already present.
    #[inline]
    fn insert(&mut self, code: u64, id: u32) -> bool {
        match self {
            MemberIndex::Dense { seen, ids } => {
                let w = &mut seen[(code >> 6) as usize];
                let bit = 1 << (code & 63);
                if *w & bit != 0 {
                    return false;
                }
                *w |= bit;
                ids[code as usize] = id;
                true
            }
            MemberIndex::Hashed(map) => {
                if map.contains_key(&code) {
                    return false;
                }
                map.insert(code, id);
                true
            }
        }
    }
}

const ROOT: u32 = u32::MAX;

/// The semigroup generated by a finite set of transformations, with a
/// back-pointer witness for every member.
pub struct Closure {
    params: Params,
    packing: Packing,
    generators: Vec<u64>,
    labels: Vec<GeneratorLabel>,
    members: Vec<u64>,
    parent: Vec<u32>,
    via: Vec<u32>,
    depth_histogram: Vec<u64>,
    index: MemberIndex,
}

impl std::fmt::Debug for Closure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Closure")
            .field("params", &self.params)
            .field("generators", &self.generators.len())
            .field("members", &self.members.len())
            .finish()
    }
}

/// Close a generator set under composition.
pub fn close(gens: &GeneratorSet, member_limit: usize) -> Result<Closure> {
    let expanded = gens.expand();
    let (nets, labels): (Vec<_>, Vec<_>) = expanded.into_iter().unzip();
    Closure::from_networks(gens.params(), &nets, labels, member_limit)
}

impl Closure {
    pub fn from_networks(
        params: Params,
        generators: &[Network],
        labels: Vec<GeneratorLabel>,
        member_limit: usize,
    ) -> Result<Self> {
        let packing = Packing::for_params(params)?;
        let codes = generators.iter().map(|g| packing.code_of(g)).collect();
        Self::from_codes(params, codes, labels, member_limit)
    }

    /// Generators are deduplicated (first occurrence kept) and the semigroup
    /// is explored breadth first: every member is composed with every
    /// generator applied after it.
    pub fn from_codes(
        params: Params,
        codes: Vec<u64>,
        labels: Vec<GeneratorLabel>,
        member_limit: usize,
    ) -> Result<Self> {
        if member_limit == 0 {
            return Err(Error::InvalidParams("member limit must be positive".into()));
        }
        let packing = Packing::for_params(params)?;
        let labels = if labels.is_empty() {
            (0..codes.len())
                .map(|i| GeneratorLabel {
                    base: i,
                    subset: CoordSet::full(params.n()),
                })
                .collect()
        } else {
            labels
        };
        assert_eq!(labels.len(), codes.len(), "one label per generator");

        let mut seen_gen = HashMap::new();
        let mut generators = Vec::new();
        let mut kept_labels = Vec::new();
        for (c, l) in codes.into_iter().zip(labels) {
            if seen_gen.insert(c, ()).is_none() {
                generators.push(c);
                kept_labels.push(l);
            }
        }

        let mut cl = Closure {
            params,
            packing,
            generators,
            labels: kept_labels,
            members: Vec::new(),
            parent: Vec::new(),
            via: Vec::new(),
            depth_histogram: Vec::new(),
            index: MemberIndex::new(&packing),
        };
        cl.explore(member_limit)?;
        Ok(cl)
    }

    fn push(&mut self, code: u64, parent: u32, via: u32, limit: usize) -> Result<()> {
        let id = self.members.len() as u32;
        if self.index.insert(code, id) {
            if self.members.len() >= limit {
                return Err(Error::LimitExceeded {
                    what: "closure members",
                    limit: limit as u64,
                });
            }
            self.members.push(code);
            self.parent.push(parent);
            self.via.push(via);
        }
        Ok(())
    }

    fn explore(&mut self, limit: usize) -> Result<()> {
        let total = self.packing.total();
        for gi in 0..self.generators.len() {
            let g = self.generators[gi];
            self.push(g, ROOT, gi as u32, limit)?;
        }
        if self.members.is_empty() {
            return Ok(());
        }
        self.depth_histogram.push(self.members.len() as u64);

        let pk = self.packing;
        let per_chunk = ((1usize << 18) / self.generators.len().max(1)).max(1);
        let mut start = 0usize;
        while start < self.members.len() {
            if total == Some(self.members.len() as u64) {
                break;
            }
            let end = self.members.len();
            let mut lo = start;
            while lo < end {
                let hi = (lo + per_chunk).min(end);
                let candidates: Vec<(u64, u32, u32)> = {
                    let members = &self.members[lo..hi];
                    let gens = &self.generators;
                    let index = &self.index;
                    let step = move |(k, &m): (usize, &u64)| {
                        gens.iter().enumerate().filter_map(move |(gi, &g)| {
                            let c = pk.compose(g, m);
                            (!index.contains(c)).then_some((c, (lo + k) as u32, gi as u32))
                        })
                    };
                    if members.len() < PARALLEL_THRESHOLD {
                        members.iter().enumerate().flat_map(step).collect()
                    } else {
                        members.par_iter().enumerate().flat_map_iter(step).collect()
                    }
                };
                for (c, p, gi) in candidates {
                    self.push(c, p, gi, limit)?;
                }
                lo = hi;
            }
            if self.members.len() > end {
                self.depth_histogram.push((self.members.len() - end) as u64);
            }
            start = end;
        }
        Ok(())
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn packing(&self) -> Packing {
        self.packing
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn generator_codes(&self) -> &[u64] {
        &self.generators
    }

    pub fn generator_labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }

    /// Member codes in discovery order.
    pub fn member_codes(&self) -> &[u64] {
        &self.members
    }

    pub fn members(&self) -> impl Iterator<Item = Network> + '_ {
        self.members
            .iter()
            .map(|&c| self.packing.network(self.params, c))
    }

    /// `depth_histogram[d]` counts members whose shortest witness has length `d + 1`.
    pub fn depth_histogram(&self) -> &[u64] {
        &self.depth_histogram
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.index.contains(code)
    }

    pub fn contains(&self, g: &Network) -> bool {
        g.params() == self.params && self.contains_code(self.packing.code_of(g))
    }

    /// Whether the closure is all of `F(n,q)`.
    pub fn is_full(&self) -> bool {
        self.packing.total() == Some(self.members.len() as u64)
    }

    /// Generator ids, first applied first, composing to `code`.
    pub fn witness_code(&self, code: u64) -> Option<Vec<u32>> {
        let mut id = self.index.id(code)?;
        let mut word = Vec::new();
        loop {
            word.push(self.via[id as usize]);
            let p = self.parent[id as usize];
            if p == ROOT {
                break;
            }
            id = p;
        }
        word.reverse();
        Some(word)
    }

    pub fn member_witness(&self, g: &Network) -> Option<Vec<u32>> {
        if g.params() != self.params {
            return None;
        }
        self.witness_code(self.packing.code_of(g))
    }

    /// Witness expressed as generator labels.
    pub fn witness_labels(&self, g: &Network) -> Option<Vec<GeneratorLabel>> {
        self.member_witness(g)
            .map(|w| w.iter().map(|&i| self.labels[i as usize]).collect())
    }

    /// Witness as an update word; meaningful when the closure has one base network.
    pub fn witness_word(&self, g: &Network) -> Option<UpdateWord> {
        self.witness_labels(g)
            .map(|ls| UpdateWord::new(ls.iter().map(|l| l.subset).collect()))
    }

    pub fn replay_code(&self, word: &[u32]) -> Option<u64> {
        let (&first, rest) = word.split_first()?;
        Some(rest.iter().fold(self.generators[first as usize], |acc, &g| {
            self.packing.compose(self.generators[g as usize], acc)
        }))
    }

    pub fn replay(&self, word: &[u32]) -> Option<Network> {
        self.replay_code(word)
            .map(|c| self.packing.network(self.params, c))
    }

    /// Check that every member's witness replays to it.
    pub fn verify_witnesses(&self) -> bool {
        self.members
            .par_iter()
            .all(|&m| self.witness_code(m).and_then(|w| self.replay_code(&w)) == Some(m))
    }
}

/// Reusable membership-only closure over a dense code space. Clearing
/// touches only the bits that were set, so many small closures stay cheap.
pub(crate) struct Scratch {
    packing: Packing,
    seen: Vec<u64>,
    members: Vec<u64>,
}

impl std::fmt::Debug for Scratch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scratch").field("members", &self.members.len()).finish()
    }
}

impl Scratch {
    pub(crate) fn new(packing: Packing) -> Result<Self> {
        if packing.code_bits() > 24 {
            return Err(Error::LimitExceeded {
                what: "code bits for a dense scratch index",
                limit: 24,
            });
        }
        Ok(Scratch {
            packing,
            seen: vec![0; (1usize << packing.code_bits()).div_ceil(64)],
            members: Vec::new(),
        })
    }

    #[inline]
    fn insert(&mut self, code: u64) -> bool {
        let w = &mut self.seen[(code >> 6) as usize];
        let bit = 1 << (code & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub(crate) fn contains(&self, code: u64) -> bool {
        self.seen[(code >> 6) as usize] & (1 << (code & 63)) != 0
    }

    /// Close `gens`; returns false if `limit` members were exceeded (the
    /// partial member list is kept until the next call).
    pub(crate) fn close(&mut self, gens: &[u64], limit: usize) -> bool {
        self.clear();
        let pk = self.packing;
        for &g in gens {
            if self.insert(g) {
                self.members.push(g);
            }
        }
        let total = pk.total();
        let mut i = 0;
        while i < self.members.len() {
            if total == Some(self.members.len() as u64) {
                break;
            }
            let m = self.members[i];
            for &g in gens {
                let c = pk.compose(g, m);
                if self.insert(c) {
                    self.members.push(c);
                    if self.members.len() > limit {
                        return false;
                    }
                }
            }
            i += 1;
        }
        true
    }

    /// Add the last entry of `gens` to a set already closed under the others.
    /// Old members only need the new generator; new ones need all of them.
    pub(crate) fn extend(&mut self, gens: &[u64], limit: usize) -> bool {
        let pk = self.packing;
        let (&g, _) = gens.split_last().expect("at least one generator");
        let old = self.members.len();
        if self.insert(g) {
            self.members.push(g);
        }
        for i in 0..old {
            let c = pk.compose(g, self.members[i]);
            if self.insert(c) {
                self.members.push(c);
            }
        }
        let total = pk.total();
        let mut i = old;
        while i < self.members.len() {
            if self.members.len() > limit {
                return false;
            }
            if total == Some(self.members.len() as u64) {
                break;
            }
            let m = self.members[i];
            for &h in gens {
                let c = pk.compose(h, m);
                if self.insert(c) {
                    self.members.push(c);
                }
            }
            i += 1;
        }
        self.members.len() <= limit
    }

    pub(crate) fn members(&self) -> &[u64] {
        &self.members
    }

    fn clear(&mut self) {
        for &m in &self.members {
            self.seen[(m >> 6) as usize] &= !(1 << (m & 63));
        }
        self.members.clear();
    }
}

/// Membership-only closure of a large generator stream.
#[derive(Debug)]
pub struct MemberSet {
    inner: MemberSetInner,
    kept: usize,
}

#[derive(Debug)]
enum MemberSetInner {
    Dense(Scratch),
    Full(Closure),
}

impl MemberSet {
    pub fn len(&self) -> usize {
        match &self.inner {
            MemberSetInner::Dense(s) => s.members().len(),
            MemberSetInner::Full(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_code(&self, code: u64) -> bool {
        match &self.inner {
            MemberSetInner::Dense(s) => s.contains(code),
            MemberSetInner::Full(c) => c.contains_code(code),
        }
    }

    pub fn contains(&self, g: &Network) -> bool {
        let pk = match &self.inner {
            MemberSetInner::Dense(s) => s.packing,
            MemberSetInner::Full(c) => c.packing(),
        };
        self.contains_code(pk.code_of(g))
    }

    /// Generators that were not already generated by earlier ones.
    pub fn generators_kept(&self) -> usize {
        self.kept
    }
}

/// Close a generator stream, keeping a generator only when it is new and
/// extending the member set in place. Without a dense index (more than 24
/// code bits) this falls back to a full closure of all generators.
pub fn close_incremental(
    params: Params,
    generators: impl IntoIterator<Item = Network>,
    member_limit: usize,
) -> Result<MemberSet> {
    let pk = Packing::for_params(params)?;
    let overflow = Error::LimitExceeded {
        what: "closure members",
        limit: member_limit as u64,
    };
    if pk.code_bits() > 24 {
        let nets: Vec<Network> = generators.into_iter().collect();
        let closure = Closure::from_networks(params, &nets, Vec::new(), member_limit)?;
        let kept = closure.generator_codes().len();
        return Ok(MemberSet {
            inner: MemberSetInner::Full(closure),
            kept,
        });
    }
    let mut scratch = Scratch::new(pk)?;
    let mut kept = Vec::new();
    for g in generators {
        if scratch.members().len() as u64 == pk.total().unwrap_or(u64::MAX) {
            break;
        }
        let code = pk.code_of(&g);
        if !scratch.contains(code) {
            kept.push(code);
            if !scratch.extend(&kept, member_limit) {
                return Err(overflow);
            }
        }
    }
    Ok(MemberSet {
        inner: MemberSetInner::Dense(scratch),
        kept: kept.len(),
    })
}
