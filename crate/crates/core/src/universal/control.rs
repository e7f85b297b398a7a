use std::fmt;

/// A three-bit control state `y1 y2 y3`, stored with `y1` in bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ControlState(pub u8);

impl ControlState {
    pub const ALL: [ControlState; 8] = [
        ControlState(0),
        ControlState(1),
        ControlState(2),
        ControlState(3),
        ControlState(4),
        ControlState(5),
        ControlState(6),
        ControlState(7),
    ];

    /// Parse the written form, e.g. `"101"` has `y1 = 1, y2 = 0, y3 = 1`.
    pub const fn parse(s: &str) -> ControlState {
        let b = s.as_bytes();
        assert!(b.len() == 3);
        ControlState((b[0] - b'0') | (b[1] - b'0') << 1 | (b[2] - b'0') << 2)
    }

    /// Bit `i` (0-based) of the state.
    pub fn bit(self, i: usize) -> u8 {
        (self.0 >> i) & 1
    }

    pub fn with_bit(self, i: usize, b: u8) -> ControlState {
        ControlState((self.0 & !(1 << i)) | (b & 1) << i)
    }
}

impl fmt::Display for ControlState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.bit(0), self.bit(1), self.bit(2))
    }
}

pub(crate) const fn st(s: &str) -> ControlState {
    ControlState::parse(s)
}

/// Whether an arc of the initialization cycle encodes or decodes a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// A deterministic automaton on the eight control states, driven by the
/// index (0-based) of the bit or block that is updated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlAutomaton {
    next: [[ControlState; 3]; 8],
    arcs: Vec<(ControlState, usize, Sign, ControlState)>,
}

impl ControlAutomaton {
    /// Sequential behaviour of a map `rho` on `[2]^3`: updating bit `i`
    /// copies bit `i` of `rho(y)`.
    pub fn from_map(rho: impl Fn(ControlState) -> ControlState) -> Self {
        let mut next = [[ControlState(0); 3]; 8];
        for y in ControlState::ALL {
            for (i, slot) in next[y.0 as usize].iter_mut().enumerate() {
                *slot = y.with_bit(i, rho(y).bit(i));
            }
        }
        ControlAutomaton {
            next,
            arcs: Vec::new(),
        }
    }

    /// Labelled arcs; states without an arc for a block stay put.
    pub fn from_arcs(arcs: Vec<(ControlState, usize, Sign, ControlState)>) -> Self {
        let mut next = [[ControlState(0); 3]; 8];
        for y in ControlState::ALL {
            next[y.0 as usize] = [y; 3];
        }
        for &(from, i, _, to) in &arcs {
            next[from.0 as usize][i] = to;
        }
        ControlAutomaton { next, arcs }
    }

    pub fn next(&self, y: ControlState, i: usize) -> ControlState {
        self.next[y.0 as usize][i]
    }

    pub fn run(&self, y: ControlState, word: impl IntoIterator<Item = usize>) -> ControlState {
        word.into_iter().fold(y, |y, i| self.next(y, i))
    }

    pub fn arcs(&self) -> &[(ControlState, usize, Sign, ControlState)] {
        &self.arcs
    }

    /// The labelled arc leaving `y`, if any.
    pub fn arc_from(&self, y: ControlState) -> Option<(usize, Sign)> {
        self.arcs
            .iter()
            .find(|a| a.0 == y)
            .map(|&(_, i, s, _)| (i, s))
    }
}
