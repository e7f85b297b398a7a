//! A network over the alphabet `q + 1` that simulates every map of
//! `F(n,q)` on initial configurations drawn from `[q]^n`.
//!
//! Three blocks of `q` coordinates each store one control bit: a block in
//! `[q]^q` reads as 0, a block holding exactly one extra symbol `q` reads
//! as 1. The digits a block stands for are recovered by `mu`, so the
//! simulated configuration survives while bits are written. The remaining
//! coordinates hold digits directly.

use super::ckd::{decompose_ckd, CkdGenerators, CkdSymbol};
use super::control::{st, ControlAutomaton, ControlState, Sign};
use crate::error::{Error, Result};
use crate::network::{Network, Params, UpdateWord};

/// The six-state control cycle, blocks 0-based.
pub fn control_cycle() -> ControlAutomaton {
    ControlAutomaton::from_arcs(vec![
        (st("000"), 1, Sign::Plus, st("010")),
        (st("010"), 2, Sign::Plus, st("011")),
        (st("011"), 1, Sign::Minus, st("001")),
        (st("001"), 0, Sign::Plus, st("101")),
        (st("101"), 2, Sign::Minus, st("100")),
        (st("100"), 0, Sign::Minus, st("000")),
    ])
}

/// State in which block `b` acts as part of the counter.
fn counting_state(b: usize) -> ControlState {
    [st("010"), st("100"), st("000")][b]
}

/// Block-level coding: `lambda`, `mu`, and the two block rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitCoding {
    n: usize,
    q: usize,
    small: Params,
    large: Params,
}

impl InitCoding {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if q < 2 || n < 3 * q {
            return Err(Error::InvalidParams(
                "the initialization construction needs q >= 2 and n >= 3q".into(),
            ));
        }
        Ok(InitCoding {
            n,
            q,
            small: Params::new(n, q)?,
            large: Params::new(n, q + 1)?,
        })
    }

    pub fn small(&self) -> Params {
        self.small
    }

    pub fn large(&self) -> Params {
        self.large
    }

    /// Coordinates of block `b` (0-based).
    pub fn block(&self, b: usize) -> std::ops::Range<usize> {
        b * self.q..(b + 1) * self.q
    }

    /// Coordinates holding digits directly.
    pub fn rest(&self) -> std::ops::Range<usize> {
        3 * self.q..self.n
    }

    /// Coordinates of the update sequence for block `b`, or the rest for `b = 3`.
    pub fn block_word(&self, b: usize) -> UpdateWord {
        if b == 3 {
            UpdateWord::sequential(self.rest())
        } else {
            UpdateWord::sequential(self.block(b))
        }
    }

    fn extra_count(&self, z: &[usize]) -> usize {
        z.iter().filter(|&&d| d == self.q).count()
    }

    /// Whether a block lies in `Z`: at most one extra symbol.
    pub fn in_z(&self, z: &[usize]) -> bool {
        self.extra_count(z) <= 1
    }

    /// 0 on `[q]^q`, 1 elsewhere.
    pub fn lambda(&self, z: &[usize]) -> u8 {
        u8::from(self.extra_count(z) > 0)
    }

    /// Digits a block stands for. Blocks outside `Z` read their extra
    /// symbols as 0.
    pub fn mu(&self, z: &[usize]) -> Vec<usize> {
        let q = self.q;
        let mut out: Vec<usize> = z.iter().map(|&d| if d == q { 0 } else { d }).collect();
        if self.extra_count(z) == 1 {
            let j = z.iter().position(|&d| d == q).unwrap();
            let others: usize = out.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &d)| d).sum();
            out[j] = (j + q * q - others % q) % q;
        }
        out
    }

    /// `⊞_j`: mark position `sum mod q` of a plain block.
    pub fn boxplus(&self, z: &[usize], j: usize) -> usize {
        let q = self.q;
        if self.extra_count(z) == 0 && z.iter().sum::<usize>() % q == j {
            q
        } else {
            z[j]
        }
    }

    /// `⊟_j`: replace the marker by the digit it stands for.
    pub fn boxminus(&self, z: &[usize], j: usize) -> usize {
        if z[j] == self.q {
            self.mu(z)[j]
        } else {
            z[j]
        }
    }

    /// Decoded digits and control state, if every block lies in `Z` and the
    /// rest holds no extra symbol.
    pub fn read(&self, z: &[usize]) -> Option<(Vec<usize>, ControlState)> {
        let mut x = Vec::with_capacity(self.n);
        let mut y = ControlState(0);
        for b in 0..3 {
            let blk = &z[self.block(b)];
            if !self.in_z(blk) {
                return None;
            }
            y = y.with_bit(b, self.lambda(blk));
            x.extend(self.mu(blk));
        }
        let rest = &z[self.rest()];
        if rest.contains(&self.q) {
            return None;
        }
        x.extend_from_slice(rest);
        Some((x, y))
    }

    /// The configuration component of `z`; configurations outside the
    /// coding read their extra symbols as 0.
    pub fn decode(&self, z: usize) -> usize {
        let digits = self.large.decode(crate::Configuration(z as u32));
        let x = match self.read(&digits) {
            Some((x, _)) => x,
            None => digits.iter().map(|&d| if d == self.q { 0 } else { d }).collect(),
        };
        self.small.encode(&x).expect("digits below q").index()
    }

    /// Embed `[q]^n` into `[q+1]^n` (the same digits; control 000).
    pub fn embed(&self, x: usize) -> usize {
        let digits = self.small.decode(crate::Configuration(x as u32));
        self.large.encode(&digits).expect("digits below q + 1").index()
    }

    fn block_of(&self, i: usize) -> Option<usize> {
        (i < 3 * self.q).then_some(i / self.q)
    }

    /// The digit update `Psi_i` for a coordinate outside the active block.
    fn psi(&self, x: &[usize], y: ControlState, i: usize) -> usize {
        let q = self.q;
        let zero_below = |k: usize| x[..k].iter().all(|&d| d == 0);
        let inc = (x[i] + 1) % q;
        let all_zero = zero_below(self.n);
        let unit = x[0] == 1 && x[1..].iter().all(|&d| d == 0);
        match self.block_of(i) {
            Some(0) if i == 0 => {
                if y == st("010") {
                    inc
                } else if y == st("011") && all_zero {
                    1
                } else if y == st("011") && unit {
                    0
                } else {
                    x[i]
                }
            }
            Some(1) if i == q => {
                if y == st("100") && zero_below(i) {
                    inc
                } else if y == st("101") && all_zero {
                    1
                } else {
                    x[i]
                }
            }
            Some(b) => {
                if y == counting_state(b) && zero_below(i) {
                    inc
                } else {
                    x[i]
                }
            }
            None => {
                if zero_below(i) {
                    inc
                } else {
                    x[i]
                }
            }
        }
    }
}

/// The initialization-universal network in `F(n, q + 1)`.
pub fn init_simulator(n: usize, q: usize) -> Result<Network> {
    let coding = InitCoding::new(n, q)?;
    let cycle = control_cycle();
    let large = coding.large();
    Network::from_index_fn(large, |zi| {
        let z = large.decode(crate::Configuration(zi as u32));
        let Some((x, y)) = coding.read(&z) else {
            return zi;
        };
        let arc = cycle.arc_from(y);
        let mut out = z.clone();
        for (i, slot) in out.iter_mut().enumerate() {
            let b = coding.block_of(i);
            *slot = match (b, arc) {
                (Some(b), Some((ab, sign))) if b == ab => {
                    let blk = &z[coding.block(b)];
                    let j = i - b * q;
                    match sign {
                        Sign::Plus => coding.boxplus(blk, j),
                        Sign::Minus => coding.boxminus(blk, j),
                    }
                }
                // digits inside a marked block are left alone
                (Some(b), _) if coding.lambda(&z[coding.block(b)]) == 1 => z[i],
                _ => coding.psi(&x, y, i),
            };
        }
        large.encode(&out).expect("digits in range").index()
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGadgets {
    pub c: UpdateWord,
    pub k: UpdateWord,
    pub d: UpdateWord,
}

impl BlockGadgets {
    pub fn get(&self, s: CkdSymbol) -> &UpdateWord {
        match s {
            CkdSymbol::C => &self.c,
            CkdSymbol::K => &self.k,
            CkdSymbol::D => &self.d,
        }
    }
}

/// Block sequences realizing `c`, `k` and `d'` from control `000` back to
/// `000`. Block indices are 0-based with 3 standing for the rest.
pub fn init_gadgets(coding: &InitCoding) -> BlockGadgets {
    let seq = |blocks: &[usize]| {
        let mut w = UpdateWord::empty();
        for &b in blocks {
            w.extend(&coding.block_word(b));
        }
        w
    };
    BlockGadgets {
        c: seq(&[1, 0, 2, 1, 0, 2, 1, 0, 2, 3]),
        k: seq(&[1, 2, 0, 1, 0, 2, 0]),
        d: seq(&[1, 2, 1, 0, 1, 2, 0]),
    }
}

/// Concatenate gadget sequences for a word over `{c, k, d'}`.
pub fn assemble_init(coding: &InitCoding, word: &[CkdSymbol]) -> UpdateWord {
    let g = init_gadgets(coding);
    let mut out = UpdateWord::empty();
    for &s in word {
        out.extend(g.get(s));
    }
    out
}

/// A word `w` with `f^(w)(x) = h(x)` for every `x` in `[q]^n`.
pub fn compile_init(h: &Network) -> Result<UpdateWord> {
    let p = h.params();
    let coding = InitCoding::new(p.n(), p.q())?;
    let gens = CkdGenerators::init(p)?;
    let word = decompose_ckd(&gens, h)?;
    Ok(assemble_init(&coding, &word))
}

/// Check `f^(w)(x) = h(x)` on every `x` in `[q]^n`.
pub fn verify_init(f: &Network, h: &Network, w: &UpdateWord) -> Result<bool> {
    let coding = InitCoding::new(h.params().n(), h.params().q())?;
    if f.params() != coding.large() {
        return Err(Error::Mismatch("simulator alphabet must be q + 1".into()));
    }
    for x in 0..coding.small().size() {
        let z = f.trace(w, coding.embed(x))?;
        if z != coding.embed(h.apply(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_blocks(q: usize) -> Vec<Vec<usize>> {
        let p = Params::new(q, q + 1).unwrap();
        p.configurations().map(|c| p.decode(c)).collect()
    }

    #[test]
    fn mu_examples() {
        let c = InitCoding::new(6, 2).unwrap();
        assert_eq!(c.lambda(&[0, 0]), 0);
        assert_eq!(c.lambda(&[2, 0]), 1);
        // marker at j: mu_j = j - sum of the others
        assert_eq!(c.mu(&[2, 1]), vec![1, 1]);
        assert_eq!(c.mu(&[1, 2]), vec![1, 0]);
    }

    #[test]
    fn block_rewrites_preserve_mu() {
        for q in [2, 3] {
            let c = InitCoding::new(3 * q, q).unwrap();
            let mut hit = std::collections::HashSet::new();
            for z in all_blocks(q).into_iter().filter(|z| c.in_z(z)) {
                let mut plus = z.clone();
                let mut minus = z.clone();
                for j in 0..q {
                    plus[j] = c.boxplus(&plus, j);
                    minus[j] = c.boxminus(&minus, j);
                }
                assert_eq!(c.lambda(&plus), 1);
                assert!(c.in_z(&plus));
                assert_eq!(c.lambda(&minus), 0);
                assert_eq!(c.mu(&plus), c.mu(&z));
                assert_eq!(c.mu(&minus), c.mu(&z));
                if c.lambda(&z) == 1 {
                    hit.insert(c.mu(&z));
                }
            }
            assert_eq!(hit.len(), q.pow(q as u32));
        }
    }

    #[test]
    fn block_sequences_walk_the_cycle() {
        let cyc = control_cycle();
        let c = [1, 0, 2, 1, 0, 2, 1, 0, 2];
        let k = [1, 2, 0, 1, 0, 2, 0];
        let d = [1, 2, 1, 0, 1, 2, 0];
        for seq in [&c[..], &k[..], &d[..]] {
            assert_eq!(cyc.run(st("000"), seq.iter().copied()), st("000"));
        }
    }

    #[test]
    fn gadget_traces_at_2_6() {
        let (n, q) = (6, 2);
        let c = InitCoding::new(n, q).unwrap();
        let f = init_simulator(n, q).unwrap();
        let g = init_gadgets(&c);
        let gens = CkdGenerators::init(c.small()).unwrap();
        for s in [CkdSymbol::C, CkdSymbol::K, CkdSymbol::D] {
            let want = gens.network(s);
            assert!(verify_init(&f, want, g.get(s)).unwrap(), "{s}");
        }
    }
}
