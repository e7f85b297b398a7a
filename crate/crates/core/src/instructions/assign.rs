//! Singular instructions as products of assignments, for `q >= 3`.
//!
//! An instruction on `v` acts separately on each fiber (the `q`
//! configurations that agree off `v`). Pick a collision `(a, b)` in one
//! singular fiber. Singular fibers are factored inside the fiber, which is a
//! clique of the Hamming graph. Permutation fibers are split into
//! transpositions, each wrapped in a bracket `(a -> b) ∘ (w <-> x)` that uses the
//! hole at `a`. The fiber of `a` goes last, since it absorbs `(a -> b)`.

use super::{hamming_path, replay_assignments, AssignmentInstruction, Instruction};
use crate::error::{Error, Result};
use crate::network::{Configuration, Params};

fn assign(p: Params, u: usize, w: usize) -> AssignmentInstruction {
    AssignmentInstruction::new(p, Configuration(u as u32), Configuration(w as u32))
        .expect("endpoints are adjacent")
}

/// Assignments realizing `(a -> b) ∘ (w <-> x)`, where `w, x` lie in a fiber
/// along `v` that does not contain `a`.
pub fn bracket(p: Params, a: usize, b: usize, w: usize, x: usize) -> Result<Vec<AssignmentInstruction>> {
    let v = p
        .differing_coordinate(w, x)
        .ok_or(Error::NotAdjacent { a: w, b: x })?;
    p.differing_coordinate(a, b).ok_or(Error::NotAdjacent { a, b })?;
    if p.q() < 3 {
        return Err(Error::InvalidParams("a bracket needs q >= 3".into()));
    }
    if p.with_digit(a, v, 0) == p.with_digit(w, v, 0) {
        return Err(Error::InvalidParams("a must lie outside the fiber of w and x".into()));
    }
    let (dw, dx) = (p.digit(w, v), p.digit(x, v));
    let dz = (0..p.q()).find(|&d| d != dw && d != dx).expect("q >= 3");
    let z = p.with_digit(w, v, dz);
    // Every vertex after `a` carries digit dz at v, so the path misses w and x.
    let path = hamming_path(p, a, z, Some(v));
    let mut out = vec![assign(p, a, b)];
    for i in 1..path.len() {
        out.push(assign(p, path[i], path[i - 1]));
    }
    out.extend([assign(p, w, z), assign(p, x, w), assign(p, z, x)]);
    for i in (1..path.len()).rev() {
        out.push(assign(p, path[i - 1], path[i]));
    }
    Ok(out)
}

/// Assignments within a fiber realizing a non-injective map `t` of `[q]`,
/// as pairs of positions.
fn fiber_singular(t: &[usize]) -> Vec<(usize, usize)> {
    let q = t.len();
    let mut slot: Vec<Option<usize>> = t.iter().map(|&y| Some(y)).collect();
    let mut out = Vec::new();
    let mut go = |slot: &mut Vec<Option<usize>>, u: usize, w: usize| {
        slot[w] = slot[u].take();
        out.push((u, w));
    };
    // Merge equal targets; the first merge opens a hole.
    for u in 0..q {
        if let Some(w) = (0..u).find(|&w| slot[w].is_some() && slot[w] == slot[u]) {
            go(&mut slot, u, w);
        }
    }
    for y in 0..q {
        let Some(x) = slot.iter().position(|&s| s == Some(y)) else {
            continue;
        };
        if x == y {
            continue;
        }
        if slot[y].is_some() {
            let hole = slot.iter().position(|s| s.is_none()).expect("map is singular");
            go(&mut slot, y, hole);
        }
        go(&mut slot, x, y);
    }
    out
}

/// Transpositions of positions whose product, in order, is the permutation `t`.
fn fiber_transpositions(t: &[usize]) -> Vec<(usize, usize)> {
    let q = t.len();
    let mut at: Vec<usize> = (0..q).collect();
    let mut pos: Vec<usize> = (0..q).collect();
    let mut out = Vec::new();
    for x in 0..q {
        let token = (0..q).find(|&s| t[s] == x).expect("t is a permutation");
        let here = pos[token];
        if here != x {
            let other = at[x];
            at.swap(here, x);
            pos[token] = x;
            pos[other] = here;
            out.push((here, x));
        }
    }
    out
}

/// Assignment instructions whose composition, in order, equals `ins`.
pub fn decompose_into_assignments(ins: &Instruction) -> Result<Vec<AssignmentInstruction>> {
    let f = ins.network();
    let p = f.params();
    if p.q() < 3 {
        return Err(Error::InvalidParams(
            "assignment instructions do not generate the singular instructions at q = 2".into(),
        ));
    }
    if !ins.is_singular() {
        return Err(Error::NotSingular);
    }
    let v = ins.v();
    let stride = p.stride(v);
    let fibers: Vec<Vec<usize>> = (0..p.size())
        .filter(|&x| p.digit(x, v) == 0)
        .map(|base| (0..p.q()).map(|d| base + d * stride).collect())
        .collect();
    let local = |fiber: &[usize]| -> Vec<usize> {
        fiber.iter().map(|&x| p.digit(f.apply(x), v)).collect()
    };
    let injective = |t: &[usize]| {
        let mut seen = vec![false; t.len()];
        t.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    };

    let home = fibers
        .iter()
        .position(|fb| !injective(&local(fb)))
        .expect("a singular instruction has a singular fiber");
    let t_home = local(&fibers[home]);
    let (ia, ib) = (0..p.q())
        .flat_map(|i| (i + 1..p.q()).map(move |j| (i, j)))
        .find(|&(i, j)| t_home[i] == t_home[j])
        .expect("singular fiber has a collision");
    let (a, b) = (fibers[home][ia], fibers[home][ib]);

    let mut out = Vec::new();
    for (k, fiber) in fibers.iter().enumerate() {
        if k == home {
            continue;
        }
        let t = local(fiber);
        if injective(&t) {
            for (i, j) in fiber_transpositions(&t) {
                out.extend(bracket(p, a, b, fiber[i], fiber[j])?);
            }
        } else {
            out.extend(fiber_singular(&t).into_iter().map(|(i, j)| assign(p, fiber[i], fiber[j])));
        }
    }
    out.extend(
        fiber_singular(&t_home)
            .into_iter()
            .map(|(i, j)| assign(p, fibers[home][i], fibers[home][j])),
    );

    if replay_assignments(p, &out) != *f {
        return Err(Error::DecompositionUnavailable(
            "internal error: assignment factorization failed to replay".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(p: Params, d: &[usize]) -> usize {
        p.encode(d).unwrap().index()
    }

    #[test]
    fn bracket_replays_to_assignment_after_swap() {
        let p = Params::new(2, 3).unwrap();
        let (a, b) = (c(p, &[0, 0]), c(p, &[1, 0]));
        for (w, x) in [([0, 1], [1, 1]), ([2, 2], [0, 2]), ([1, 1], [2, 1])] {
            let (w, x) = (c(p, &w), c(p, &x));
            let prog = bracket(p, a, b, w, x).unwrap();
            let expect = Network::assignment(p, Configuration(a as u32), Configuration(b as u32))
                .compose(&Network::transposition(p, Configuration(w as u32), Configuration(x as u32)))
                .unwrap();
            assert_eq!(replay_assignments(p, &prog), expect);
        }
    }

    #[test]
    fn fiber_helpers() {
        let t = [2, 0, 1, 3];
        let mut x: Vec<usize> = (0..4).collect();
        for (i, j) in fiber_transpositions(&t) {
            for s in x.iter_mut() {
                if *s == i {
                    *s = j
                } else if *s == j {
                    *s = i
                }
            }
        }
        assert_eq!(x, t);
        let t = [1, 1, 0, 3];
        let x: Vec<usize> = (0..4)
            .map(|s| fiber_singular(&t).iter().fold(s, |s, &(u, w)| if s == u { w } else { s }))
            .collect();
        assert_eq!(x, t);
    }

    #[test]
    fn q2_is_rejected() {
        let p = Params::new(2, 2).unwrap();
        let ins = Instruction::new(0, Network::assignment(p, Configuration(0), Configuration(1))).unwrap();
        assert!(matches!(decompose_into_assignments(&ins), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn random_singular_instructions_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, q) in [(2, 3), (3, 3), (2, 4)] {
            let p = Params::new(n, q).unwrap();
            for _ in 0..200 {
                let v = rng.gen_range(0..n);
                let mut table: Vec<u32> = (0..p.size())
                    .map(|x| p.with_digit(x, v, rng.gen_range(0..q)) as u32)
                    .collect();
                let x = rng.gen_range(0..p.size());
                let y = p.with_digit(x, v, (p.digit(x, v) + 1) % q);
                table[y] = table[x];
                let ins = Instruction::new(v, Network::from_table(p, table).unwrap()).unwrap();
                let prog = decompose_into_assignments(&ins).unwrap();
                assert_eq!(&replay_assignments(p, &prog), ins.network());
                assert!(prog.iter().all(|s| p.hamming(s.a().index(), s.b().index()) == 1));
            }
        }
    }
}
