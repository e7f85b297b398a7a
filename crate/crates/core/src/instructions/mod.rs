//! Single-coordinate instructions, the semigroup generated by the singular
//! ones, and factorizations into assignment instructions.
//!
//! Every list of instructions in this module is in application order: the
//! first element acts first.

mod assign;
mod parity;
mod program;
mod singular;

pub use assign::{bracket, decompose_into_assignments};
pub use parity::{all_assignments, assignment_parity_obstruction, ParityVerdict};
pub use program::{emit_program, parse_program, Program, ProgramStep};
pub use singular::decompose_singular;

use crate::error::{Error, Result};
use crate::network::{Configuration, Network, Params};

/// A network that changes at most coordinate `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instruction {
    v: usize,
    net: Network,
}

impl Instruction {
    pub fn new(v: usize, net: Network) -> Result<Self> {
        net.params().check_coordinate(v)?;
        if !net.only_updates(v) {
            return Err(Error::NotAnInstruction);
        }
        Ok(Instruction { v, net })
    }

    /// Detect the updated coordinate. The identity is reported on coordinate 0.
    pub fn from_network(net: Network) -> Result<Self> {
        let v = (0..net.params().n())
            .find(|&v| net.only_updates(v))
            .ok_or(Error::NotAnInstruction)?;
        Ok(Instruction { v, net })
    }

    /// The transposition `(a <-> b)` of two adjacent configurations.
    pub fn transposition(params: Params, a: Configuration, b: Configuration) -> Result<Self> {
        let v = adjacent_coordinate(params, a.index(), b.index())?;
        Ok(Instruction {
            v,
            net: Network::transposition(params, a, b),
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn into_network(self) -> Network {
        self.net
    }

    pub fn is_singular(&self) -> bool {
        !self.net.is_bijective()
    }

    /// A collision `f(a) = f(b)`; for an instruction it is at distance 1.
    pub fn collision(&self) -> Option<(Configuration, Configuration)> {
        in_s(&self.net)
    }
}

/// The assignment `(a -> b)` for configurations at Hamming distance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AssignmentInstruction {
    a: Configuration,
    b: Configuration,
    v: usize,
}

impl AssignmentInstruction {
    pub fn new(params: Params, a: Configuration, b: Configuration) -> Result<Self> {
        let v = adjacent_coordinate(params, a.index(), b.index())?;
        Ok(AssignmentInstruction { a, b, v })
    }

    pub fn a(&self) -> Configuration {
        self.a
    }

    pub fn b(&self) -> Configuration {
        self.b
    }

    /// The coordinate where `a` and `b` differ.
    pub fn coordinate(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        if x == self.a.index() {
            self.b.index()
        } else {
            x
        }
    }

    pub fn network(&self, params: Params) -> Network {
        Network::assignment(params, self.a, self.b)
    }

    pub fn instruction(&self, params: Params) -> Instruction {
        Instruction {
            v: self.v,
            net: self.network(params),
        }
    }
}

fn adjacent_coordinate(params: Params, a: usize, b: usize) -> Result<usize> {
    if a >= params.size() || b >= params.size() {
        return Err(Error::Mismatch(format!(
            "configuration index out of range for {params}"
        )));
    }
    params
        .differing_coordinate(a, b)
        .ok_or(Error::NotAdjacent { a, b })
}

/// A pair `a < b` with `f(a) = f(b)` and `d_H(a, b) = 1`, if one exists.
/// Such a pair exists exactly when `f` lies in the semigroup generated by
/// singular instructions.
pub fn in_s(f: &Network) -> Option<(Configuration, Configuration)> {
    let p = f.params();
    for x in 0..p.size() {
        for i in 0..p.n() {
            for d in p.digit(x, i) + 1..p.q() {
                let y = p.with_digit(x, i, d);
                if f.apply(x) == f.apply(y) {
                    return Some((Configuration(x as u32), Configuration(y as u32)));
                }
            }
        }
    }
    None
}

/// Every instruction of `F(n, q)` other than the identity, optionally only
/// the singular ones. Instructions on different coordinates never coincide
/// except for the identity. There
/// are `q^(q^n)` instructions per coordinate, so keep `n` and `q` small.
pub fn all_instructions(params: Params, singular_only: bool) -> Result<Vec<Instruction>> {
    let (q, size) = (params.q(), params.size());
    let per_coordinate = (q as u64)
        .checked_pow(size as u32)
        .filter(|&c| c <= 1 << 24)
        .ok_or(Error::LimitExceeded {
            what: "instructions per coordinate",
            limit: 1 << 24,
        })?;
    let mut out = Vec::new();
    for v in 0..params.n() {
        for code in 0..per_coordinate {
            let mut c = code;
            let table: Vec<u32> = (0..size)
                .map(|x| {
                    let d = (c % q as u64) as usize;
                    c /= q as u64;
                    params.with_digit(x, v, d) as u32
                })
                .collect();
            let net = Network::from_table_unchecked(params, table);
            if net.is_identity() || (singular_only && net.is_bijective()) {
                continue;
            }
            out.push(Instruction { v, net });
        }
    }
    Ok(out)
}

/// Compose instructions in application order.
pub fn replay_instructions(params: Params, program: &[Instruction]) -> Result<Network> {
    let mut acc = Network::identity(params);
    for ins in program {
        acc = ins.net.compose(&acc)?;
    }
    Ok(acc)
}

/// Compose assignments in application order.
pub fn replay_assignments(params: Params, program: &[AssignmentInstruction]) -> Network {
    let table = (0..params.size())
        .map(|x| program.iter().fold(x, |y, s| s.apply(y)) as u32)
        .collect();
    Network::from_table_unchecked(params, table)
}

/// Configurations along a shortest Hamming path from `from` to `to`. Coordinate
/// `first` is changed first if given, then the others in ascending order.
pub(crate) fn hamming_path(p: Params, from: usize, to: usize, first: Option<usize>) -> Vec<usize> {
    let mut path = vec![from];
    let mut x = from;
    let order = first.into_iter().chain((0..p.n()).filter(|&i| Some(i) != first));
    for i in order {
        let d = p.digit(to, i);
        if p.digit(x, i) != d {
            x = p.with_digit(x, i, d);
            path.push(x);
        }
    }
    path
}
