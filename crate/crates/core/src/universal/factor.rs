//! A network over the alphabet `2q` whose sequential updates simulate every
//! map of `F(n,q)` through the projection `s -> s mod q`.
//!
//! A symbol `s` of `[2q]` is the pair `(s mod q, s div q)`: a digit of the
//! simulated configuration and a control bit. The first three control bits
//! run the automaton `rho`; the others never change.

use super::ckd::{decompose_ckd, CkdGenerators, CkdSymbol};
use super::control::{st, ControlAutomaton, ControlState};
use crate::error::{Error, Result};
use crate::network::{Network, Params, UpdateWord};

/// `rho` on `[2]^3`.
pub fn rho(y: ControlState) -> ControlState {
    const TABLE: [(&str, &str); 8] = [
        ("000", "100"),
        ("001", "000"),
        ("010", "000"),
        ("011", "001"),
        ("100", "011"),
        ("101", "111"),
        ("110", "010"),
        ("111", "010"),
    ];
    let (_, image) = TABLE
        .iter()
        .find(|(from, _)| st(from) == y)
        .expect("all eight states listed");
    st(image)
}

pub fn rho_automaton() -> ControlAutomaton {
    ControlAutomaton::from_map(rho)
}

/// Pairing between `[2q]^n` and `[q]^n x [2]^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorCoding {
    small: Params,
    large: Params,
}

impl FactorCoding {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        Ok(FactorCoding {
            small: Params::new(n, q)?,
            large: Params::new(n, 2 * q)?,
        })
    }

    pub fn small(&self) -> Params {
        self.small
    }

    pub fn large(&self) -> Params {
        self.large
    }

    /// Split a large configuration into its digit and bit components.
    pub fn split(&self, z: usize) -> (Vec<usize>, Vec<u8>) {
        let q = self.small.q();
        self.large
            .decode(crate::Configuration(z as u32))
            .into_iter()
            .map(|s| (s % q, (s / q) as u8))
            .unzip()
    }

    pub fn join(&self, x: &[usize], bits: &[u8]) -> usize {
        let q = self.small.q();
        let digits: Vec<usize> = x.iter().zip(bits).map(|(&d, &b)| d + q * b as usize).collect();
        self.large.encode(&digits).expect("digits in range").index()
    }

    /// `pi`, applied coordinatewise.
    pub fn project(&self, z: usize) -> usize {
        let q = self.small.q();
        (0..self.small.n())
            .map(|i| (self.large.digit(z, i) % q) * self.small.stride(i))
            .sum()
    }
}

fn control_of(bits: &[u8]) -> ControlState {
    ControlState(bits[0] | bits[1] << 1 | bits[2] << 2)
}

/// The digit update `Psi` (0-based coordinates).
pub fn psi(x: &[usize], y: ControlState, q: usize) -> Vec<usize> {
    let zero_below = |i: usize| x[..i].iter().all(|&d| d == 0);
    let all_zero = zero_below(x.len());
    let unit = x[0] == 1 && x[1..].iter().all(|&d| d == 0);
    let mut out = x.to_vec();
    out[0] = if y == st("101") {
        (x[0] + 1) % q
    } else if all_zero && (y == st("011") || y == st("001")) {
        1
    } else if unit && y == st("011") {
        0
    } else {
        x[0]
    };
    if x[0] == 0 && y == st("111") {
        out[1] = (x[1] + 1) % q;
    }
    if zero_below(2) && y == st("011") {
        out[2] = (x[2] + 1) % q;
    }
    for i in 3..x.len() {
        if zero_below(i) {
            out[i] = (x[i] + 1) % q;
        }
    }
    out
}

/// The factor-universal network in `F(n, 2q)`.
pub fn factor_simulator(n: usize, q: usize) -> Result<Network> {
    if n < 3 || q < 2 {
        return Err(Error::InvalidParams("the factor construction needs n >= 3 and q >= 2".into()));
    }
    let coding = FactorCoding::new(n, q)?;
    Network::from_index_fn(coding.large(), |z| {
        let (x, mut bits) = coding.split(z);
        let y = control_of(&bits);
        let x2 = psi(&x, y, q);
        let y2 = rho(y);
        for (i, b) in bits.iter_mut().take(3).enumerate() {
            *b = y2.bit(i);
        }
        coding.join(&x2, &bits)
    })
}

/// `((3)^q, 2, 3, 1, 1, 2, 1, 3)` in 0-based coordinates.
pub fn sync_word(q: usize) -> UpdateWord {
    let mut steps = vec![2; q];
    steps.extend([1, 2, 0, 0, 1, 0, 2]);
    UpdateWord::sequential(steps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetWords {
    pub c: UpdateWord,
    pub k: UpdateWord,
    pub d: UpdateWord,
}

impl GadgetWords {
    pub fn get(&self, s: CkdSymbol) -> &UpdateWord {
        match s {
            CkdSymbol::C => &self.c,
            CkdSymbol::K => &self.k,
            CkdSymbol::D => &self.d,
        }
    }
}

/// Words realizing `c`, `k` and `d` from control state `101`.
pub fn gadget_words(n: usize) -> GadgetWords {
    let mut c = vec![0, 1, 1, 0];
    c.extend(2..n);
    GadgetWords {
        c: UpdateWord::sequential(c),
        k: UpdateWord::sequential([1, 0, 0]),
        d: UpdateWord::sequential([1, 0, 1, 0]),
    }
}

/// Assemble a simulation word: the synchronizing word before every gadget.
pub fn assemble_factor(q: usize, n: usize, word: &[CkdSymbol]) -> UpdateWord {
    let sync = sync_word(q);
    let gadgets = gadget_words(n);
    let mut out = sync.clone();
    for (i, &s) in word.iter().enumerate() {
        if i > 0 {
            out.extend(&sync);
        }
        out.extend(gadgets.get(s));
    }
    out
}

/// A word `w` with `pi ∘ f^(w) = h ∘ pi` on all of `[2q]^n`.
pub fn compile_factor(h: &Network) -> Result<UpdateWord> {
    let p = h.params();
    let gens = CkdGenerators::factor(p)?;
    let word = decompose_ckd(&gens, h)?;
    Ok(assemble_factor(p.q(), p.n(), &word))
}

/// Check `pi ∘ f^(w) = h ∘ pi` for every configuration of the simulator.
pub fn verify_factor(f: &Network, h: &Network, w: &UpdateWord) -> Result<bool> {
    let coding = FactorCoding::new(h.params().n(), h.params().q())?;
    if f.params() != coding.large() {
        return Err(Error::Mismatch("simulator alphabet must be 2q".into()));
    }
    let fw = f.word_apply(w)?;
    Ok((0..coding.large().size())
        .all(|z| coding.project(fw.apply(z)) == h.apply(coding.project(z))))
}
