//! Dense automata networks `f : [q]^n -> [q]^n` and their update words.
//!
//! Configurations are indexed little-endian in base `q`: coordinate 0 is the
//! least significant digit. Coordinates are 0-based throughout the library;
//! the text formats in [`crate::text`] translate to and from 1-based form.

use std::fmt;

use crate::digraph::InteractionDigraph;
use crate::error::{Error, Result};

/// Default cap on `q^n`, the number of table entries of a network.
pub const DEFAULT_SIZE_CAP: usize = 1 << 24;

/// Node count `n` and alphabet size `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    q: usize,
    size: usize,
}

impl Params {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        Self::with_cap(n, q, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(n: usize, q: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if q < 2 {
            return Err(Error::InvalidParams("q must be at least 2".into()));
        }
        let cap = cap.min(u32::MAX as usize);
        let mut size: usize = 1;
        for _ in 0..n {
            size = size
                .checked_mul(q)
                .filter(|&s| s <= cap)
                .ok_or(Error::LimitExceeded {
                    what: "q^n",
                    limit: cap as u64,
                })?;
        }
        Ok(Params { n, q, size })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    /// `q^n`, the number of configurations.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// `q^i`, the index stride of coordinate `i`.
    #[inline]
    pub fn stride(&self, i: usize) -> usize {
        self.q.pow(i as u32)
    }

    #[inline]
    pub fn digit(&self, x: usize, i: usize) -> usize {
        (x / self.stride(i)) % self.q
    }

    /// Replace coordinate `i` of configuration `x` by `value`.
    #[inline]
    pub fn with_digit(&self, x: usize, i: usize, value: usize) -> usize {
        let s = self.stride(i);
        x - ((x / s) % self.q) * s + value * s
    }

    pub fn check_coordinate(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidCoordinate {
                coordinate: v,
                n: self.n,
            })
        }
    }

    pub fn encode(&self, digits: &[usize]) -> Result<Configuration> {
        if digits.len() != self.n {
            return Err(Error::Mismatch(format!(
                "expected {} digits, got {}",
                self.n,
                digits.len()
            )));
        }
        let mut index = 0usize;
        for (i, &d) in digits.iter().enumerate().rev() {
            if d >= self.q {
                return Err(Error::InvalidDigit {
                    coordinate: i,
                    digit: d,
                    q: self.q,
                });
            }
            index = index * self.q + d;
        }
        Ok(Configuration(index as u32))
    }

    pub fn decode(&self, c: Configuration) -> Vec<usize> {
        let mut x = c.index();
        (0..self.n)
            .map(|_| {
                let d = x % self.q;
                x /= self.q;
                d
            })
            .collect()
    }

    /// Iterator over all configurations in index order.
    pub fn configurations(&self) -> impl Iterator<Item = Configuration> {
        (0..self.size as u32).map(Configuration)
    }

    /// Hamming distance between two configurations.
    pub fn hamming(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut d = 0;
        for _ in 0..self.n {
            if a % self.q != b % self.q {
                d += 1;
            }
            a /= self.q;
            b /= self.q;
        }
        d
    }

    /// The single coordinate where `a` and `b` differ, if they are at distance 1.
    pub fn differing_coordinate(&self, a: usize, b: usize) -> Option<usize> {
        let mut found = None;
        for i in 0..self.n {
            if self.digit(a, i) != self.digit(b, i) {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, q={})", self.n, self.q)
    }
}

/// A configuration of `[q]^n`, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(pub u32);

impl Configuration {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of coordinates stored as a bitmask (bit `i` = coordinate `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CoordSet(u32);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn singleton(v: usize) -> Self {
        CoordSet(1 << v)
    }

    pub fn full(n: usize) -> Self {
        CoordSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_bits(bits: u32) -> Self {
        CoordSet(bits)
    }

    pub fn from_coords(coords: impl IntoIterator<Item = usize>) -> Self {
        CoordSet(coords.into_iter().fold(0, |m, v| m | (1 << v)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 32 && self.0 & (1 << v) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&v| self.contains(v))
    }

    /// All nonempty subsets of `[0, n)`, ordered by bitmask.
    pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = CoordSet> {
        (1..(1u32 << n)).map(CoordSet)
    }
}

/// A finite sequence of coordinate sets; the first step is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UpdateWord {
    steps: Vec<CoordSet>,
}

impl UpdateWord {
    pub fn new(steps: Vec<CoordSet>) -> Self {
        UpdateWord { steps }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Sequential word updating one coordinate per step.
    pub fn sequential(coords: impl IntoIterator<Item = usize>) -> Self {
        UpdateWord {
            steps: coords.into_iter().map(CoordSet::singleton).collect(),
        }
    }

    pub fn steps(&self) -> &[CoordSet] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_sequential(&self) -> bool {
        self.steps.iter().all(|s| s.len() == 1)
    }

    pub fn push(&mut self, step: CoordSet) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: &UpdateWord) {
        self.steps.extend_from_slice(&other.steps);
    }

    pub fn concat(&self, other: &UpdateWord) -> UpdateWord {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    /// Check every coordinate lies below `n` and every step is nonempty.
    pub fn validate(&self, n: usize) -> Result<()> {
        for s in &self.steps {
            if s.is_empty() {
                return Err(Error::InvalidParams("empty update step".into()));
            }
            if let Some(v) = s.iter().find(|&v| v >= n) {
                return Err(Error::InvalidCoordinate { coordinate: v, n });
            }
        }
        Ok(())
    }
}

/// Preimage structure of a non-bijective map, by rank deficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankClass {
    Bijective,
    /// Rank `q^n - 1`.
    RankDrop1,
    /// Rank `q^n - 2` with one configuration covered three times.
    TypeI,
    /// Rank `q^n - 2` with two configurations covered twice.
    TypeII,
    /// Rank below `q^n - 2`.
    Lower,
}

/// An automata network stored as its full image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Network {
    params: Params,
    table: Vec<u32>,
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Network{} {:?}", self.params, self.table)
    }
}

impl Network {
    pub fn from_table(params: Params, table: Vec<u32>) -> Result<Self> {
        if table.len() != params.size() {
            return Err(Error::Mismatch(format!(
                "table has {} entries, expected {}",
                table.len(),
                params.size()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t as usize >= params.size()) {
            return Err(Error::InvalidParams(format!(
                "table entry {bad} is not a configuration index"
            )));
        }
        Ok(Network { params, table })
    }

    pub(crate) fn from_table_unchecked(params: Params, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), params.size());
        Network { params, table }
    }

    pub fn identity(params: Params) -> Self {
        Network {
            params,
            table: (0..params.size() as u32).collect(),
        }
    }

    pub fn constant(params: Params, c: Configuration) -> Self {
        Network {
            params,
            table: vec![c.0; params.size()],
        }
    }

    /// Build a network from a map on configuration indices.
    pub fn from_index_fn(params: Params, mut f: impl FnMut(usize) -> usize) -> Result<Self> {
        let table = (0..params.size()).map(|x| f(x) as u32).collect();
        Self::from_table(params, table)
    }

    /// Build a network from a map on digit tuples.
    pub fn from_tuple_fn(params: Params, mut f: impl FnMut(&[usize]) -> Vec<usize>) -> Result<Self> {
        let mut table = Vec::with_capacity(params.size());
        for c in params.configurations() {
            let image = f(&params.decode(c))
                .iter()
                .map(|&d| d % params.q())
                .collect::<Vec<_>>();
            table.push(params.encode(&image)?.0);
        }
        Ok(Network { params, table })
    }

    /// The assignment `(a -> b)`: maps `a` to `b` and fixes everything else.
    pub fn assignment(params: Params, a: Configuration, b: Configuration) -> Self {
        let mut net = Self::identity(params);
        net.table[a.index()] = b.0;
        net
    }

    /// The transposition `(a <-> b)`.
    pub fn transposition(params: Params, a: Configuration, b: Configuration) -> Self {
        let mut net = Self::identity(params);
        net.table.swap(a.index(), b.index());
        net
    }

    #[inline]
    pub fn params(&self) -> Params {
        self.params
    }

    #[inline]
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    pub fn image_of(&self, c: Configuration) -> Configuration {
        Configuration(self.table[c.index()])
    }

    /// Local function `f_v` evaluated at `x`.
    #[inline]
    pub fn local(&self, v: usize, x: usize) -> usize {
        self.params.digit(self.apply(x), v)
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &t)| i == t as usize)
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &Network) -> Result<Network> {
        if self.params != inner.params {
            return Err(Error::Mismatch("cannot compose networks of different sizes".into()));
        }
        Ok(self.after(inner))
    }

    pub(crate) fn after(&self, inner: &Network) -> Network {
        let table = inner.table.iter().map(|&x| self.table[x as usize]).collect();
        Network {
            params: self.params,
            table,
        }
    }

    /// The masked update `f^(V)`: coordinates in `V` take `f`'s value, the
    /// others keep their current value.
    pub fn masked_update(&self, subset: CoordSet) -> Result<Network> {
        if let Some(v) = subset.iter().find(|&v| v >= self.params.n) {
            return Err(Error::InvalidCoordinate {
                coordinate: v,
                n: self.params.n,
            });
        }
        Ok(self.masked_unchecked(subset))
    }

    pub(crate) fn masked_unchecked(&self, subset: CoordSet) -> Network {
        let p = self.params;
        let full = CoordSet::full(p.n);
        if subset == full {
            return self.clone();
        }
        if subset.is_empty() {
            return Network::identity(p);
        }
        let coords: Vec<(usize, usize)> = subset.iter().map(|v| (v, p.stride(v))).collect();
        let table = (0..p.size())
            .map(|x| {
                let y = self.table[x] as usize;
                let mut out = x;
                for &(_, s) in &coords {
                    let xd = (x / s) % p.q;
                    let yd = (y / s) % p.q;
                    out = out - xd * s + yd * s;
                }
                out as u32
            })
            .collect();
        Network { params: p, table }
    }

    /// `f^(w) = f^(w_k) ∘ ... ∘ f^(w_1)`.
    pub fn word_apply(&self, word: &UpdateWord) -> Result<Network> {
        word.validate(self.params.n)?;
        let mut cache: Vec<(CoordSet, Network)> = Vec::new();
        for &s in word.steps() {
            if !cache.iter().any(|(k, _)| *k == s) {
                cache.push((s, self.masked_unchecked(s)));
            }
        }
        let table = (0..self.params.size() as u32)
            .map(|mut x| {
                for s in word.steps() {
                    let step = &cache.iter().find(|(k, _)| k == s).unwrap().1;
                    x = step.table[x as usize];
                }
                x
            })
            .collect();
        Ok(Network {
            params: self.params,
            table,
        })
    }

    /// Follow a single configuration through `f^(w)`.
    pub fn trace(&self, word: &UpdateWord, start: usize) -> Result<usize> {
        word.validate(self.params.n)?;
        let p = self.params;
        let mut x = start;
        for s in word.steps() {
            let y = self.apply(x);
            for v in s.iter() {
                x = p.with_digit(x, v, p.digit(y, v));
            }
        }
        Ok(x)
    }

    /// Preimage counts indexed by configuration.
    pub fn preimage_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.params.size()];
        for &t in &self.table {
            counts[t as usize] += 1;
        }
        counts
    }

    pub fn rank(&self) -> usize {
        self.preimage_counts().iter().filter(|&&c| c > 0).count()
    }

    pub fn is_bijective(&self) -> bool {
        self.rank() == self.params.size()
    }

    /// Configurations without preimage.
    pub fn orphans(&self) -> Vec<Configuration> {
        self.preimage_counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| Configuration(i as u32))
            .collect()
    }

    /// `count[y] = |f_v^{-1}(y)|`.
    pub fn coordinate_histogram(&self, v: usize) -> Result<Vec<usize>> {
        self.params.check_coordinate(v)?;
        let mut counts = vec![0usize; self.params.q];
        for &t in &self.table {
            counts[self.params.digit(t as usize, v)] += 1;
        }
        Ok(counts)
    }

    /// Whether every fiber of `f_v` has size `q^(n-1)`.
    pub fn is_balanced(&self, v: usize) -> Result<bool> {
        let expected = self.params.size() / self.params.q;
        Ok(self.coordinate_histogram(v)?.iter().all(|&c| c == expected))
    }

    /// Whether `f_v` depends essentially on coordinate `u`.
    pub fn depends_on(&self, v: usize, u: usize) -> bool {
        let p = self.params;
        let s = p.stride(u);
        (0..p.size())
            .filter(|&x| (x / s).is_multiple_of(p.q))
            .any(|x| {
                let base = self.local(v, x);
                (1..p.q).any(|t| self.local(v, x + t * s) != base)
            })
    }

    pub fn interaction_graph(&self) -> InteractionDigraph {
        let n = self.params.n;
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if self.depends_on(v, u) {
                    arcs.push((u, v));
                }
            }
        }
        InteractionDigraph::new(n, arcs).expect("arcs are in range")
    }

    pub fn classify_rank_deficiency(&self) -> RankClass {
        let size = self.params.size();
        let counts = self.preimage_counts();
        let rank = counts.iter().filter(|&&c| c > 0).count();
        match size - rank {
            0 => RankClass::Bijective,
            1 => RankClass::RankDrop1,
            2 if counts.contains(&3) => RankClass::TypeI,
            2 => RankClass::TypeII,
            _ => RankClass::Lower,
        }
    }

    /// Whether the network changes at most coordinate `v`.
    pub fn only_updates(&self, v: usize) -> bool {
        let p = self.params;
        let s = p.stride(v);
        self.table
            .iter()
            .enumerate()
            .all(|(x, &y)| {
                let y = y as usize;
                x - ((x / s) % p.q) * s == y - ((y / s) % p.q) * s
            })
    }
}
