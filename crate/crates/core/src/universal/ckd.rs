//! Words over the generators `c` (cycle), `k` (transposition) and `d`
//! (assignment) of the full transformation monoid.

use std::fmt;

use crate::error::{Error, Result};
use crate::network::{Configuration, Network, Params};
use crate::semigroup::{Closure, GeneratorLabel, Packing, DEFAULT_MEMBER_LIMIT};
use crate::CoordSet;

/// Transformation spaces up to this size are searched breadth first, which
/// yields shortest words; larger ones use the constructive route.
pub const BFS_SPACE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CkdSymbol {
    C,
    K,
    D,
}

impl fmt::Display for CkdSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CkdSymbol::C => "c",
            CkdSymbol::K => "k",
            CkdSymbol::D => "d",
        })
    }
}

/// `c(x) = x + 1 mod q^n` on indices, `k = (0 <-> 1)` and `d = (0 -> t)`.
#[derive(Debug, Clone)]
pub struct CkdGenerators {
    params: Params,
    target: usize,
    c: Network,
    k: Network,
    d: Network,
}

impl CkdGenerators {
    /// `d = (0 -> target)` for a nonzero configuration index `target`.
    pub fn new(params: Params, target: usize) -> Result<Self> {
        let size = params.size();
        if target == 0 || target >= size {
            return Err(Error::InvalidParams(format!(
                "assignment target {target} must lie in 1..{size}"
            )));
        }
        Ok(CkdGenerators {
            params,
            target,
            c: Network::from_index_fn(params, |x| (x + 1) % size)?,
            k: Network::transposition(params, Configuration(0), Configuration(1)),
            d: Network::assignment(params, Configuration(0), Configuration(target as u32)),
        })
    }

    /// The triple used by the factor construction: `d = ((0)^n -> 1(0)^(n-1))`.
    pub fn factor(params: Params) -> Result<Self> {
        Self::new(params, 1)
    }

    /// The triple used by the initialization construction:
    /// `d = ((0)^n -> (0)^q 1 (0)^(n-q-1))`.
    pub fn init(params: Params) -> Result<Self> {
        if params.n() <= params.q() {
            return Err(Error::InvalidParams("need n > q".into()));
        }
        Self::new(params, params.stride(params.q()))
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn network(&self, s: CkdSymbol) -> &Network {
        match s {
            CkdSymbol::C => &self.c,
            CkdSymbol::K => &self.k,
            CkdSymbol::D => &self.d,
        }
    }

    /// Compose a word, first symbol applied first.
    pub fn replay(&self, word: &[CkdSymbol]) -> Network {
        let size = self.params.size();
        let t = self.target as u32;
        let table = (0..size as u32)
            .map(|mut x| {
                for s in word {
                    x = match s {
                        CkdSymbol::C => (x + 1) % size as u32,
                        CkdSymbol::K if x < 2 => 1 - x,
                        CkdSymbol::D if x == 0 => t,
                        _ => x,
                    };
                }
                x
            })
            .collect();
        Network::from_table(self.params, table).expect("generators stay in range")
    }
}

/// A word over `{c, k, d}` whose composition is `h`, verified by replay.
pub fn decompose_ckd(gens: &CkdGenerators, h: &Network) -> Result<Vec<CkdSymbol>> {
    if h.params() != gens.params {
        return Err(Error::Mismatch("target and generators differ in size".into()));
    }
    let word = match Packing::for_params(gens.params).ok().and_then(|pk| pk.total()) {
        Some(total) if total <= BFS_SPACE_LIMIT => bfs_word(gens, h)?,
        _ => constructive_word(gens, h),
    };
    if gens.replay(&word) != *h {
        return Err(Error::DecompositionUnavailable(
            "generated word does not replay to the target".into(),
        ));
    }
    Ok(word)
}

fn bfs_word(gens: &CkdGenerators, h: &Network) -> Result<Vec<CkdSymbol>> {
    if h.is_identity() {
        return Ok(Vec::new());
    }
    let symbols = [CkdSymbol::C, CkdSymbol::K, CkdSymbol::D];
    let nets: Vec<Network> = symbols.iter().map(|&s| gens.network(s).clone()).collect();
    let labels = (0..3)
        .map(|i| GeneratorLabel {
            base: i,
            subset: CoordSet::full(gens.params.n()),
        })
        .collect();
    let cl = Closure::from_networks(gens.params, &nets, labels, DEFAULT_MEMBER_LIMIT)?;
    let ids = cl
        .witness_labels(h)
        .ok_or_else(|| Error::DecompositionUnavailable("target outside the generated monoid".into()))?;
    Ok(ids.iter().map(|l| symbols[l.base]).collect())
}

/// Tracks where groups of points sit while a word is being emitted.
///
/// Applying `c` rotates every position forward by one, so positions are
/// recorded relative to the accumulated rotation `r`: virtual slot `v`
/// is absolute position `v + r`. Only `k` and `d` change the virtual
/// arrangement.
struct Arranger {
    n: usize,
    t: usize,
    r: usize,
    slots: Vec<Option<usize>>,
    word: Vec<CkdSymbol>,
}

impl Arranger {
    fn abs_to_virtual(&self, p: usize) -> usize {
        (p + self.n - self.r) % self.n
    }

    fn emit_c(&mut self, times: usize) {
        for _ in 0..times % self.n {
            self.word.push(CkdSymbol::C);
        }
        self.r = (self.r + times) % self.n;
    }

    /// Rotate until virtual slot `v` sits at absolute position `p`.
    fn align(&mut self, v: usize, p: usize) {
        // need v + r ≡ p
        let want = (p + self.n - v) % self.n;
        let steps = (want + self.n - self.r) % self.n;
        self.emit_c(steps);
    }

    fn emit_k(&mut self) {
        let (a, b) = (self.abs_to_virtual(0), self.abs_to_virtual(1));
        self.slots.swap(a, b);
        self.word.push(CkdSymbol::K);
    }

    fn emit_d(&mut self) {
        let (a, b) = (self.abs_to_virtual(0), self.abs_to_virtual(self.t));
        if let Some(g) = self.slots[a].take() {
            debug_assert!(self.slots[b].is_none_or(|h| h == g));
            self.slots[b] = Some(g);
        }
        self.word.push(CkdSymbol::D);
    }

    /// Swap virtual slots `j` and `j + 1`.
    fn swap_virtual(&mut self, j: usize) {
        self.align(j, 0);
        self.emit_k();
    }

    /// Move the content of virtual slot `from` down to `to`, shifting the
    /// slots in between up by one.
    fn move_down(&mut self, from: usize, to: usize) {
        let mut at = from;
        while at != to {
            let j = (at + self.n - 1) % self.n;
            self.swap_virtual(j);
            at = j;
        }
    }

    fn distance_down(&self, from: usize, to: usize) -> usize {
        (from + self.n - to) % self.n
    }
}

/// Merge every fiber of `h` into a single point, then sort the survivors
/// into place with a bubble sort whose passes run against the rotation.
fn constructive_word(gens: &CkdGenerators, h: &Network) -> Vec<CkdSymbol> {
    let n = gens.params.size();
    let t = gens.target;
    let mut ar = Arranger {
        n,
        t,
        r: 0,
        slots: (0..n).map(|x| Some(h.apply(x))).collect(),
        word: Vec::new(),
    };

    // merge phase: a group is identified by its image under h
    loop {
        let mut first_seen: Vec<Option<usize>> = vec![None; n];
        let mut pair = None;
        for v in 0..n {
            if let Some(g) = ar.slots[v] {
                match first_seen[g] {
                    Some(u) => {
                        pair = Some((u, v));
                        break;
                    }
                    None => first_seen[g] = Some(v),
                }
            }
        }
        let Some((a, b)) = pair else { break };
        // park one slot just above the other, then slide the lower one down
        // by t - 1 so the two sit exactly t apart; neither move crosses the
        // other slot
        let (lo, hi) = if ar.distance_down(b, (a + 1) % n) <= ar.distance_down(a, (b + 1) % n) {
            (a, b)
        } else {
            (b, a)
        };
        ar.move_down(hi, (lo + 1) % n);
        let src = (lo + 1 + n - t) % n;
        ar.move_down(lo, src);
        ar.align(src, 0);
        ar.emit_d();
    }

    // sort phase: every slot gets a distinct key, groups keep their image
    let mut used = vec![false; n];
    for g in ar.slots.iter().flatten() {
        used[*g] = true;
    }
    let mut spare = (0..n).filter(|&y| !used[y]);
    let mut keys: Vec<usize> = ar
        .slots
        .iter()
        .map(|s| s.unwrap_or_else(|| spare.next().expect("enough spare keys")))
        .collect();
    for _pass in 0..n {
        let mut swapped = false;
        for j in (0..n - 1).rev() {
            if keys[j] > keys[j + 1] {
                ar.swap_virtual(j);
                keys.swap(j, j + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    ar.emit_c((n - ar.r) % n);
    merge_c_runs(ar.word, n)
}

/// Collapse runs of `c` modulo the cycle length.
fn merge_c_runs(word: Vec<CkdSymbol>, n: usize) -> Vec<CkdSymbol> {
    let mut out = Vec::with_capacity(word.len());
    let mut run = 0usize;
    for s in word {
        if s == CkdSymbol::C {
            run += 1;
            continue;
        }
        out.extend(std::iter::repeat_n(CkdSymbol::C, run % n));
        run = 0;
        out.push(s);
    }
    out.extend(std::iter::repeat_n(CkdSymbol::C, run % n));
    out
}
