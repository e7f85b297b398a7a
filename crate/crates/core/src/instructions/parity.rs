//! Parity obstruction for assignment programs over the binary alphabet.
//!
//! A product of assignments of rank `2^n - 1` starts with one merge, which
//! opens a hole, followed by slides of tokens into the hole. Read as a
//! permutation `sigma` of all vertices, with the hole carried from its first
//! position `h0` to the final orphan `o`, each slide is a transposition and
//! flips the colour of the hole in the bipartite Hamming graph. So
//! `sign(sigma)` must equal `(-1)^[colour(h0) != colour(o)]`.

use super::in_s;
use crate::network::{Configuration, Network, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityVerdict {
    /// The map is a product of assignment instructions.
    Generable,
    /// The induced permutation has the wrong sign.
    ParityBlocked,
    /// Not a rank `2^n - 1` map with a distance-1 collision at `q = 2`.
    NotApplicable,
}

fn colour(p: Params, x: usize) -> usize {
    (0..p.n()).map(|i| p.digit(x, i)).sum::<usize>() % 2
}

fn is_even(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        let mut len = 0usize;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    transpositions % 2 == 0
}

pub fn assignment_parity_obstruction(f: &Network) -> ParityVerdict {
    let p = f.params();
    if p.q() != 2 || f.rank() != p.size() - 1 {
        return ParityVerdict::NotApplicable;
    }
    let Some((a, _)) = in_s(f) else {
        return ParityVerdict::NotApplicable;
    };
    let h0 = a.index();
    let orphan = f.orphans()[0].index();
    let sigma: Vec<usize> = (0..p.size())
        .map(|x| if x == h0 { orphan } else { f.apply(x) })
        .collect();
    let required_even = colour(p, h0) == colour(p, orphan);
    if is_even(&sigma) != required_even {
        return ParityVerdict::ParityBlocked;
    }
    ParityVerdict::Generable
}

/// Every assignment instruction of `F(n, q)`.
pub fn all_assignments(p: Params) -> Vec<Network> {
    let mut out = Vec::new();
    for x in 0..p.size() {
        for i in 0..p.n() {
            for d in 0..p.q() {
                if d != p.digit(x, i) {
                    let y = p.with_digit(x, i, d);
                    out.push(Network::assignment(p, Configuration(x as u32), Configuration(y as u32)));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Closure;

    fn c(p: Params, d: &[usize]) -> Configuration {
        p.encode(d).unwrap()
    }

    #[test]
    fn swap_after_assignment_is_blocked() {
        for n in 3..=5 {
            let p = Params::new(n, 2).unwrap();
            let mut d = vec![0; n];
            let zero = c(p, &d);
            d[0] = 1;
            let e1 = c(p, &d);
            d[1] = 1;
            let e12 = c(p, &d);
            d[0] = 0;
            let e2 = c(p, &d);
            let f = Network::transposition(p, e2, e12)
                .compose(&Network::assignment(p, zero, e1))
                .unwrap();
            assert_eq!(assignment_parity_obstruction(&f), ParityVerdict::ParityBlocked);
            assert_eq!(
                assignment_parity_obstruction(&Network::assignment(p, zero, e1)),
                ParityVerdict::Generable
            );
            assert_eq!(
                assignment_parity_obstruction(&Network::identity(p)),
                ParityVerdict::NotApplicable
            );
        }
    }

    // On the square the puzzle group is Z_3 = Alt(3), so the sign test is
    // exact there too.
    #[test]
    fn small_cases_match_closure() {
        for n in 1..=2 {
            let p = Params::new(n, 2).unwrap();
            let closure = Closure::from_networks(p, &all_assignments(p), Vec::new(), 1 << 10).unwrap();
            let total = p.size().pow(p.size() as u32);
            for code in 0..total {
                let mut c = code;
                let table: Vec<u32> = (0..p.size())
                    .map(|_| {
                        let d = c % p.size();
                        c /= p.size();
                        d as u32
                    })
                    .collect();
                let f = Network::from_table(p, table).unwrap();
                let verdict = assignment_parity_obstruction(&f);
                if verdict == ParityVerdict::NotApplicable {
                    continue;
                }
                assert_eq!(verdict == ParityVerdict::Generable, closure.contains(&f));
            }
        }
    }
}
