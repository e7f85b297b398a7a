use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A directed graph on vertices `0..n`; self-loops allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InteractionDigraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl InteractionDigraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidCoordinate { coordinate: w, n });
                }
            }
            set.insert((u, v));
        }
        Ok(InteractionDigraph { n, arcs: set })
    }

    pub fn empty(n: usize) -> Self {
        InteractionDigraph {
            n,
            arcs: BTreeSet::new(),
        }
    }

    /// All `n^2` arcs, loops included.
    pub fn complete_reflexive(n: usize) -> Self {
        let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        InteractionDigraph { n, arcs }
    }

    /// Loops plus the directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn reflexive_cycle(n: usize) -> Self {
        let arcs = (0..n).flat_map(|v| [(v, v), (v, (v + 1) % n)]).collect();
        InteractionDigraph { n, arcs }
    }

    pub fn with_loops(mut self) -> Self {
        for v in 0..self.n {
            self.arcs.insert((v, v));
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|v| self.has_arc(v, v))
    }

    pub fn is_subgraph_of(&self, other: &InteractionDigraph) -> bool {
        self.n == other.n && self.arcs.is_subset(&other.arcs)
    }

    /// In-neighbours of `v` in increasing order (including `v` on a loop).
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_arc(u, v)).collect()
    }

    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.has_arc(u, v)).collect()
    }

    /// In-degree counting a loop as one.
    pub fn in_degree(&self, v: usize) -> usize {
        self.in_neighbors(v).len()
    }

    fn reachable_from(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for (w, s) in seen.iter_mut().enumerate() {
                let arc = if forward {
                    self.has_arc(u, w)
                } else {
                    self.has_arc(w, u)
                };
                if arc && !*s {
                    *s = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn has_path(&self, from: usize, to: usize) -> bool {
        self.reachable_from(from, true)[to]
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n == 0
            || (self.reachable_from(0, true).iter().all(|&b| b)
                && self.reachable_from(0, false).iter().all(|&b| b))
    }

    /// Strongly connected components, each sorted, ordered by smallest vertex.
    pub fn strong_components(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n];
        let mut comps = Vec::new();
        for v in 0..self.n {
            if assigned[v] {
                continue;
            }
            let fwd = self.reachable_from(v, true);
            let bwd = self.reachable_from(v, false);
            let comp: Vec<usize> = (0..self.n).filter(|&w| fwd[w] && bwd[w]).collect();
            for &w in &comp {
                assigned[w] = true;
            }
            comps.push(comp);
        }
        comps
    }

    /// Shortest directed path `from -> ... -> to` (BFS, lowest vertex first).
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in 0..self.n {
                if self.has_arc(u, w) && !seen[w] {
                    seen[w] = true;
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_connectivity() {
        assert!(InteractionDigraph::reflexive_cycle(3).is_strongly_connected());
        assert!(!InteractionDigraph::empty(2).with_loops().is_strongly_connected());
        let g = InteractionDigraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!g.is_strongly_connected());
        assert_eq!(g.strong_components(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn paths_and_degrees() {
        let g = InteractionDigraph::reflexive_cycle(4);
        assert_eq!(g.shortest_path(1, 0), Some(vec![1, 2, 3, 0]));
        assert_eq!(g.in_degree(2), 2);
        assert!(InteractionDigraph::new(2, [(0, 2)]).is_err());
    }
}
