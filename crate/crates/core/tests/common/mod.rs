//! Property checks shared by the acceptance run and the property tests.
#![allow(dead_code)]

use anet_core::graphs::column_sum_check;
use anet_core::semigroup::{close, GeneratorSet, Packing, UpdateMode};
use anet_core::{CoordSet, Network, Params};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub cases: u64,
    pub failures: u64,
    /// Closures abandoned at the member cap.
    pub skipped: u64,
}

impl Tally {
    pub fn add(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        self.skipped += other.skipped;
    }
}

/// `|O(f)| + rank(f) = q^n`.
pub fn orphan_count(f: &Network) -> bool {
    f.orphans().len() + f.rank() == f.params().size()
}

/// A bijection has every coordinate function balanced.
pub fn bijective_balanced(f: &Network) -> bool {
    let p = f.params();
    !f.is_bijective() || (0..p.n()).all(|v| f.is_balanced(v).unwrap())
}

/// If `f^(S)` has rank `q^n - 1`, with `a` covered twice and orphan `b`, then
/// `|f_v^{-1}(a_v)| = q^(n-1) + 1` for every `v` in `S` with `a_v != b_v`.
pub fn preimage_count(f: &Network) -> bool {
    let p = f.params();
    let fiber = p.size() / p.q();
    CoordSet::nonempty_subsets(p.n()).all(|s| {
        let g = f.masked_update(s).unwrap();
        if g.rank() + 1 != p.size() {
            return true;
        }
        let counts = g.preimage_counts();
        let a = counts.iter().position(|&c| c == 2).unwrap();
        let b = counts.iter().position(|&c| c == 0).unwrap();
        s.iter()
            .filter(|&v| p.digit(a, v) != p.digit(b, v))
            .all(|v| f.coordinate_histogram(v).unwrap()[p.digit(a, v)] == fiber + 1)
    })
}

/// Fiber sizes of `f_v` are multiples of `q^(n - d_v)` in the interaction graph.
pub fn column_sums(f: &Network) -> bool {
    column_sum_check(f, &f.interaction_graph()).unwrap().holds()
}

pub fn network_properties(f: &Network) -> bool {
    orphan_count(f) && bijective_balanced(f) && preimage_count(f) && column_sums(f)
}

/// When `phi` has a single orphan `y` and `f^(j) ∘ phi` has a single orphan
/// `y'`, the two agree off coordinate `j`.
pub fn orphan_propagation(f: &Network, phi: &Network) -> bool {
    let p = f.params();
    let [y] = phi.orphans()[..] else { return true };
    (0..p.n()).all(|j| {
        let psi = f.masked_update(CoordSet::singleton(j)).unwrap().compose(phi).unwrap();
        let [y2] = psi.orphans()[..] else { return true };
        (0..p.n()).all(|i| i == j || p.digit(y.index(), i) == p.digit(y2.index(), i))
    })
}

/// Close `f` sequentially, replay every witness, and test orphan propagation
/// with every member as `phi`. `None` when the cap is hit.
pub fn closure_properties(f: &Network, cap: usize) -> Option<bool> {
    let c = close(&GeneratorSet::single(f, UpdateMode::Sequential), cap).ok()?;
    Some(c.verify_witnesses() && c.members().all(|phi| orphan_propagation(f, &phi)))
}

/// Cheap properties over every network of `F(n, q)`, in parallel.
pub fn exhaustive_networks(p: Params) -> Tally {
    let pk = Packing::for_params(p).unwrap();
    let total = pk.total().unwrap();
    let failures = (0..total)
        .into_par_iter()
        .filter(|&o| !network_properties(&pk.network(p, pk.from_ordinal(o))))
        .count() as u64;
    Tally { cases: total, failures, skipped: 0 }
}

pub fn exhaustive_closures(p: Params, cap: usize) -> Tally {
    let pk = Packing::for_params(p).unwrap();
    let total = pk.total().unwrap();
    let results: Vec<Option<bool>> = (0..total)
        .into_par_iter()
        .map(|o| closure_properties(&pk.network(p, pk.from_ordinal(o)), cap))
        .collect();
    Tally {
        cases: total,
        failures: results.iter().filter(|r| **r == Some(false)).count() as u64,
        skipped: results.iter().filter(|r| r.is_none()).count() as u64,
    }
}

pub fn random_network(p: Params, rng: &mut impl Rng) -> Network {
    let table = (0..p.size()).map(|_| rng.gen_range(0..p.size() as u32)).collect();
    Network::from_table(p, table).unwrap()
}

/// Each `f^(j)` permutes every line along `j`, except possibly one line where
/// two values merge, so the sequential updates have rank `q^n` or `q^n - 1`.
pub fn near_bijective_network(p: Params, rng: &mut impl Rng) -> Network {
    let (n, q) = (p.n(), p.q());
    let mut digits: Vec<Vec<usize>> = vec![vec![0; n]; p.size()];
    for j in 0..n {
        let starts: Vec<usize> = (0..p.size()).filter(|&x| p.digit(x, j) == 0).collect();
        let merged = rng.gen_bool(0.5).then(|| rng.gen_range(0..starts.len()));
        for (k, &s) in starts.iter().enumerate() {
            let mut values: Vec<usize> = (0..q).collect();
            values.shuffle(rng);
            if merged == Some(k) {
                values[0] = values[1];
            }
            for (i, &val) in values.iter().enumerate() {
                digits[s + i * p.stride(j)][j] = val;
            }
        }
    }
    Network::from_tuple_fn(p, |x| digits[p.encode(x).unwrap().index()].clone()).unwrap()
}
