//! Sliding-token puzzles on simple graphs.
//!
//! Every vertex but the hole carries a token; a move slides a neighbouring
//! token into the hole. The placements reached with the hole back at its
//! starting vertex form the puzzle group.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::network::Params;

/// Placements are packed four bits per vertex.
pub const MAX_PUZZLE_VERTICES: usize = 16;
pub const DEFAULT_STATE_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertices];
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidParams(format!("edge ({u}, {v}) leaves the vertex set")));
            }
            if u == v {
                return Err(Error::InvalidParams(format!("self-loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::InvalidParams(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(SimpleGraph { adj })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn reach(&self, start: usize, removed: Option<usize>) -> usize {
        let mut seen = vec![false; self.adj.len()];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.reach(0, None) == self.adj.len()
    }

    /// Connected with at least three vertices and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        let n = self.adj.len();
        n >= 3
            && self.is_connected()
            && (0..n).all(|r| self.reach(if r == 0 { 1 } else { 0 }, Some(r)) == n - 1)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut colour = vec![u8::MAX; self.adj.len()];
        for s in 0..self.adj.len() {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[u];
                        queue.push_back(w);
                    } else if colour[w] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_cycle(&self) -> bool {
        self.adj.len() >= 3 && self.is_connected() && self.adj.iter().all(|a| a.len() == 2)
    }
}

/// `H(n, q)`: configurations at Hamming distance 1 are adjacent.
pub fn hamming_graph(n: usize, q: usize) -> Result<SimpleGraph> {
    let p = Params::new(n, q)?;
    let mut edges = Vec::new();
    for x in 0..p.size() {
        for i in 0..n {
            for d in p.digit(x, i) + 1..q {
                edges.push((x, p.with_digit(x, i, d)));
            }
        }
    }
    SimpleGraph::new(p.size(), edges)
}

/// The puzzle group as the set of placements `token -> vertex`, each packed
/// four bits per token.
#[derive(Debug, Clone)]
pub struct PuzzleGroup {
    vertices: usize,
    hole: usize,
    members: HashSet<u64>,
    states: u64,
}

fn pack(perm: &[usize]) -> u64 {
    perm.iter().enumerate().fold(0, |acc, (i, &v)| acc | (v as u64) << (4 * i))
}

fn unpack(code: u64, len: usize) -> Vec<usize> {
    (0..len).map(|i| ((code >> (4 * i)) & 15) as usize).collect()
}

impl PuzzleGroup {
    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn hole(&self) -> usize {
        self.hole
    }

    /// Number of placements reached with the hole anywhere.
    pub fn states(&self) -> u64 {
        self.states
    }

    /// `perm[t]` is the vertex holding the token that started at `t`.
    pub fn contains(&self, perm: &[usize]) -> bool {
        perm.len() == self.vertices && perm[self.hole] == self.hole && self.members.contains(&pack(perm))
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.members.iter().map(|&c| unpack(c, self.vertices))
    }
}

/// Breadth-first search over placements from the identity.
pub fn puzzle_group(d: &SimpleGraph, hole: usize, state_cap: u64) -> Result<PuzzleGroup> {
    let n = d.vertex_count();
    if n > MAX_PUZZLE_VERTICES {
        return Err(Error::InvalidParams(format!(
            "puzzles are limited to {MAX_PUZZLE_VERTICES} vertices"
        )));
    }
    if hole >= n {
        return Err(Error::InvalidParams(format!("hole {hole} is not a vertex")));
    }
    if !d.is_connected() {
        return Err(Error::InvalidParams("the graph must be connected".into()));
    }
    // State: at[v] = token on v; the hole is the token named `hole`.
    let start: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([pack(&start)]);
    let mut queue = VecDeque::from([(start, hole)]);
    let mut members = HashSet::new();
    while let Some((at, h)) = queue.pop_front() {
        if h == hole {
            let mut perm = vec![0; n];
            for (v, &t) in at.iter().enumerate() {
                perm[t] = v;
            }
            members.insert(pack(&perm));
        }
        for &u in d.neighbors(h) {
            let mut next = at.clone();
            next.swap(h, u);
            if seen.insert(pack(&next)) {
                if seen.len() as u64 > state_cap {
                    return Err(Error::StateCapExceeded(state_cap));
                }
                queue.push_back((next, u));
            }
        }
    }
    Ok(PuzzleGroup {
        vertices: n,
        hole,
        members,
        states: seen.len() as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WilsonPrediction {
    /// A cycle: the hole can only rotate the tokens, giving `Z_(|V|-1)`.
    Cyclic,
    Sym,
    Alt,
    OutOfScope,
}

impl WilsonPrediction {
    /// Group order for a graph on `vertices` vertices, when predicted.
    pub fn order(self, vertices: usize) -> Option<u64> {
        let fact = |k: usize| (1..=k as u64).product::<u64>();
        match self {
            WilsonPrediction::Cyclic => Some(vertices as u64 - 1),
            WilsonPrediction::Sym => Some(fact(vertices - 1)),
            WilsonPrediction::Alt => Some(fact(vertices - 1) / 2),
            WilsonPrediction::OutOfScope => None,
        }
    }
}

pub fn wilson_predict(d: &SimpleGraph) -> WilsonPrediction {
    if !d.is_two_connected() {
        WilsonPrediction::OutOfScope
    } else if d.is_cycle() {
        WilsonPrediction::Cyclic
    } else if d.is_bipartite() {
        WilsonPrediction::Alt
    } else if d.vertex_count() >= 8 {
        WilsonPrediction::Sym
    } else {
        WilsonPrediction::OutOfScope
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_graph_shapes() {
        let h22 = hamming_graph(2, 2).unwrap();
        assert!(h22.is_cycle());
        let h23 = hamming_graph(2, 3).unwrap();
        assert_eq!(h23.vertex_count(), 9);
        assert!((0..9).all(|v| h23.degree(v) == 4));
        assert!(!h23.is_bipartite());
        let h32 = hamming_graph(3, 2).unwrap();
        assert!(h32.is_bipartite() && h32.is_two_connected() && !h32.is_cycle());
        assert_eq!(h32.edge_count(), 12);
    }

    #[test]
    fn cycles_rotate() {
        // Running the hole once around the square shifts every token.
        let g = puzzle_group(&hamming_graph(2, 2).unwrap(), 0, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.contains(&[0, 3, 1, 2]));
        for n in 3..=7 {
            let c = SimpleGraph::cycle(n).unwrap();
            let prediction = wilson_predict(&c);
            assert_eq!(prediction, WilsonPrediction::Cyclic);
            let g = puzzle_group(&c, 0, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(Some(g.order()), prediction.order(n));
        }
    }

    #[test]
    fn cube_is_alternating() {
        let cube = hamming_graph(3, 2).unwrap();
        for hole in [0, 5] {
            let g = puzzle_group(&cube, hole, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(g.order(), 2520);
        }
        assert_eq!(wilson_predict(&cube), WilsonPrediction::Alt);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(SimpleGraph::new(2, [(0, 0)]).is_err());
        assert!(SimpleGraph::new(2, [(0, 1), (1, 0)]).is_err());
        let path = SimpleGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(wilson_predict(&path), WilsonPrediction::OutOfScope);
        let disconnected = SimpleGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(puzzle_group(&disconnected, 0, 100).is_err());
        assert_eq!(
            puzzle_group(&hamming_graph(3, 2).unwrap(), 0, 100).unwrap_err(),
            Error::StateCapExceeded(100)
        );
    }
}
