//! Factorization of a map with a distance-1 collision into singular
//! instructions.
//!
//! With `f(a) = f(b)` we have `f = f ∘ (a -> b)`, and only the values of the
//! outer factor off `a` matter. Tokens are routed on the Hamming graph: equal
//! targets are merged by assignments, then tokens are carried home by
//! transpositions along Hamming paths. Each permutation instruction is then
//! turned singular by redirecting it at an orphan of the prefix.

use super::{hamming_path, in_s, replay_instructions, Instruction};
use crate::error::{Error, Result};
use crate::network::{Configuration, Network, Params};

#[derive(Debug, Clone, Copy)]
enum Move {
    Swap(usize, usize),
    Assign(usize, usize),
}

/// Each vertex holds the common target of its tokens, or nothing.
struct Board {
    p: Params,
    slot: Vec<Option<usize>>,
    moves: Vec<Move>,
}

impl Board {
    fn swap(&mut self, u: usize, w: usize) {
        self.slot.swap(u, w);
        self.moves.push(Move::Swap(u, w));
    }

    fn assign(&mut self, u: usize, w: usize) {
        debug_assert!(self.slot[w].is_none() || self.slot[w] == self.slot[u]);
        self.slot[w] = self.slot[u].take();
        self.moves.push(Move::Assign(u, w));
    }

    /// Exchange the contents of the ends of `path`, leaving the interior as is.
    fn transpose_along(&mut self, path: &[usize]) {
        let k = path.len() - 1;
        for i in 0..k {
            self.swap(path[i], path[i + 1]);
        }
        for i in (0..k.saturating_sub(1)).rev() {
            self.swap(path[i], path[i + 1]);
        }
    }

    fn merge(&mut self, u: usize, w: usize) {
        let path = hamming_path(self.p, u, w, None);
        let before = path[path.len() - 2];
        if before != u {
            self.transpose_along(&path[..path.len() - 1]);
        }
        self.assign(before, w);
    }

    fn duplicate(&self) -> Option<(usize, usize)> {
        let mut first = vec![usize::MAX; self.p.size()];
        for (x, s) in self.slot.iter().enumerate() {
            if let Some(t) = *s {
                if first[t] != usize::MAX {
                    return Some((x, first[t]));
                }
                first[t] = x;
            }
        }
        None
    }
}

/// Singular instructions whose composition, in order, equals `f`.
pub fn decompose_singular(f: &Network) -> Result<Vec<Instruction>> {
    let p = f.params();
    let (a, b) = in_s(f).ok_or_else(|| {
        Error::DecompositionUnavailable("no two adjacent configurations share an image".into())
    })?;
    // Open the hole where f does not keep its token.
    let (a, b) = match (a.index(), b.index()) {
        (a, b) if f.apply(a) == a => (b, a),
        pair => pair,
    };
    let mut board = Board {
        p,
        slot: (0..p.size()).map(|x| Some(f.apply(x))).collect(),
        moves: Vec::new(),
    };
    board.assign(a, b);
    while let Some((u, w)) = board.duplicate() {
        board.merge(u, w);
    }

    // Give the holes the unused targets, then realize the permutation.
    let mut used = vec![false; p.size()];
    for t in board.slot.iter().flatten() {
        used[*t] = true;
    }
    let mut spare = (0..p.size()).filter(|&t| !used[t]);
    let mut target: Vec<usize> = board
        .slot
        .iter()
        .map(|s| s.unwrap_or_else(|| spare.next().expect("one spare target per hole")))
        .collect();
    let mut pos = vec![0; p.size()];
    for (x, &t) in target.iter().enumerate() {
        pos[t] = x;
    }
    for y in 0..p.size() {
        let x = pos[y];
        if x == y {
            continue;
        }
        let path = hamming_path(p, x, y, None);
        board.transpose_along(&path);
        let ty = target[y];
        target.swap(x, y);
        pos[y] = y;
        pos[ty] = x;
    }

    let program = singularize(p, &board.moves)?;
    if replay_instructions(p, &program)? != *f || program.iter().any(|s| !s.is_singular()) {
        return Err(Error::DecompositionUnavailable(
            "internal error: singular factorization failed to replay".into(),
        ));
    }
    Ok(program)
}

/// Replace every transposition by a singular instruction that agrees with it
/// on the image of everything applied before.
fn singularize(p: Params, moves: &[Move]) -> Result<Vec<Instruction>> {
    let mut prefix = Network::identity(p);
    let mut out = Vec::with_capacity(moves.len());
    for &m in moves {
        let ins = match m {
            Move::Assign(u, w) => Instruction::new(
                p.differing_coordinate(u, w).expect("moves are between neighbours"),
                Network::assignment(p, Configuration(u as u32), Configuration(w as u32)),
            )?,
            Move::Swap(u, w) => {
                let t = Instruction::transposition(p, Configuration(u as u32), Configuration(w as u32))?;
                let z = prefix
                    .orphans()
                    .first()
                    .expect("the first move is an assignment")
                    .index();
                redirect(t, z)
            }
        };
        prefix = ins.network().compose(&prefix)?;
        out.push(ins);
    }
    Ok(out)
}

/// `s_v(z) = p_v(z) + 1`, otherwise `s = p`. The result collides with `p`'s
/// preimage of `s(z)`, one step away along coordinate `v`.
pub(crate) fn redirect(perm: Instruction, z: usize) -> Instruction {
    let v = perm.v();
    let p = perm.network().params();
    let pz = perm.network().apply(z);
    let mut table = perm.network().table().to_vec();
    table[z] = p.with_digit(pz, v, (p.digit(pz, v) + 1) % p.q()) as u32;
    Instruction::new(v, Network::from_table_unchecked(p, table)).expect("still updates only v")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(p: Params, d: &[usize]) -> Configuration {
        p.encode(d).unwrap()
    }

    #[test]
    fn single_assignment() {
        let p = Params::new(2, 3).unwrap();
        let f = Network::assignment(p, c(p, &[1, 2]), c(p, &[1, 0]));
        let prog = decompose_singular(&f).unwrap();
        assert_eq!(prog.len(), 1);
        assert_eq!(prog[0].network(), &f);
    }

    #[test]
    fn permutation_after_assignment_is_redirected() {
        let p = Params::new(3, 2).unwrap();
        let (a, b) = (c(p, &[0, 0, 0]), c(p, &[1, 0, 0]));
        let first = Network::assignment(p, a, b);
        let perm = Instruction::transposition(p, c(p, &[0, 1, 0]), c(p, &[0, 1, 1])).unwrap();
        let orphan = first.orphans()[0].index();
        let s = redirect(perm.clone(), orphan);
        assert!(s.is_singular());
        assert_eq!(
            s.network().compose(&first).unwrap(),
            perm.network().compose(&first).unwrap()
        );
    }

    #[test]
    fn random_maps_in_s_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, q) in [(2, 3), (2, 2), (3, 2), (3, 3)] {
            let p = Params::new(n, q).unwrap();
            let mut done = 0;
            while done < 60 {
                let rank_cap = rng.gen_range(1..p.size());
                let table: Vec<u32> = (0..p.size()).map(|_| rng.gen_range(0..rank_cap) as u32 * 7 % p.size() as u32).collect();
                let f = Network::from_table(p, table).unwrap();
                if in_s(&f).is_none() {
                    assert!(decompose_singular(&f).is_err());
                    continue;
                }
                let prog = decompose_singular(&f).unwrap();
                assert_eq!(replay_instructions(p, &prog).unwrap(), f);
                for s in &prog {
                    let (x, y) = s.collision().unwrap();
                    assert_eq!(p.hamming(x.index(), y.index()), 1);
                }
                done += 1;
            }
        }
    }
}
