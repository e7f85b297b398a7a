use crate::error::{Error, Result};
use crate::network::{Network, Params};

/// Bit-packed encoding of transformations of a set of at most 16 points.
///
/// Point `i`'s image occupies bits `[b*i, b*(i+1))` where `b = ceil(log2 N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packing {
    points: usize,
    bits: u32,
    mask: u64,
}

pub const MAX_PACKED_POINTS: usize = 16;

impl Packing {
    pub fn new(points: usize) -> Result<Self> {
        if points == 0 || points > MAX_PACKED_POINTS {
            return Err(Error::LimitExceeded {
                what: "points of a packed transformation",
                limit: MAX_PACKED_POINTS as u64,
            });
        }
        let bits = (usize::BITS - (points - 1).leading_zeros()).max(1);
        Ok(Packing {
            points,
            bits,
            mask: (1u64 << bits) - 1,
        })
    }

    pub fn for_params(p: Params) -> Result<Self> {
        Self::new(p.size())
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Total width of a code in bits.
    #[inline]
    pub fn code_bits(&self) -> u32 {
        self.bits * self.points as u32
    }

    /// `N^N`, the number of transformations, if it fits in a `u64`.
    pub fn total(&self) -> Option<u64> {
        (self.points as u64).checked_pow(self.points as u32)
    }

    #[inline]
    pub fn get(&self, code: u64, i: usize) -> usize {
        ((code >> (self.bits as usize * i)) & self.mask) as usize
    }

    pub fn encode(&self, table: &[u32]) -> u64 {
        debug_assert_eq!(table.len(), self.points);
        table
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &t)| acc | ((t as u64) << (self.bits as usize * i)))
    }

    pub fn decode(&self, code: u64) -> Vec<u32> {
        (0..self.points).map(|i| self.get(code, i) as u32).collect()
    }

    pub fn code_of(&self, f: &Network) -> u64 {
        self.encode(f.table())
    }

    pub fn network(&self, params: Params, code: u64) -> Network {
        Network::from_table_unchecked(params, self.decode(code))
    }

    pub fn identity(&self) -> u64 {
        self.encode(&(0..self.points as u32).collect::<Vec<_>>())
    }

    /// `outer ∘ inner`.
    #[inline]
    pub fn compose(&self, outer: u64, inner: u64) -> u64 {
        let b = self.bits as usize;
        let mut out = 0u64;
        for i in 0..self.points {
            let x = (inner >> (b * i)) & self.mask;
            out |= ((outer >> (b as u64 * x)) & self.mask) << (b * i);
        }
        out
    }

    pub fn is_valid(&self, code: u64) -> bool {
        (self.code_bits() == 64 || code >> self.code_bits() == 0)
            && (0..self.points).all(|i| self.get(code, i) < self.points)
    }

    pub fn rank(&self, code: u64) -> usize {
        let mut seen = 0u32;
        for i in 0..self.points {
            seen |= 1 << self.get(code, i);
        }
        seen.count_ones() as usize
    }

    pub fn is_bijective(&self, code: u64) -> bool {
        self.rank(code) == self.points
    }

    /// Mixed-radix index in `[0, N^N)`: point 0 is the least significant.
    pub fn ordinal(&self, code: u64) -> u64 {
        let n = self.points as u64;
        (0..self.points)
            .rev()
            .fold(0u64, |acc, i| acc * n + self.get(code, i) as u64)
    }

    pub fn from_ordinal(&self, mut ordinal: u64) -> u64 {
        let n = self.points as u64;
        let mut code = 0u64;
        for i in 0..self.points {
            code |= (ordinal % n) << (self.bits as usize * i);
            ordinal /= n;
        }
        code
    }

    /// Every transformation in ordinal order.
    pub fn all_codes(&self) -> impl Iterator<Item = u64> + '_ {
        let total = self.total().expect("enumerable transformation space");
        (0..total).map(move |o| self.from_ordinal(o))
    }
}
