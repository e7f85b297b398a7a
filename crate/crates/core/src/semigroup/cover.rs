//! Greedy covering of all of `F(n,q)` by sequential closures of single
//! networks, with a resumable checkpoint.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use super::closure::{Scratch, DEFAULT_MEMBER_LIMIT};
use super::packing::Packing;
use super::symmetry::HammingSymmetry;
use crate::error::{Error, Result};
use crate::network::{CoordSet, Params};

const MAGIC: &[u8; 8] = b"ANETCOVR";
const VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct CoverConfig {
    pub member_limit: usize,
    /// Only close orbit-minimal candidates and mark whole orbits covered.
    pub use_symmetry: bool,
    pub checkpoint: Option<PathBuf>,
    /// Write the checkpoint after this many closed candidates.
    pub checkpoint_every: u64,
    /// Stop (incomplete) after closing this many candidates in this run.
    pub max_closures: Option<u64>,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            member_limit: DEFAULT_MEMBER_LIMIT,
            use_symmetry: true,
            checkpoint: None,
            checkpoint_every: 10_000,
            max_closures: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub params: Params,
    pub targets: u64,
    pub covered: u64,
    /// Candidates whose closure covered something new, in order.
    pub contributors: Vec<u64>,
    pub closures: u64,
    /// Last candidate code examined, if any.
    pub last_candidate: Option<u64>,
    pub resumed: bool,
}

impl CoverReport {
    pub fn complete(&self) -> bool {
        self.covered == self.targets
    }
}

struct State {
    covered_bits: Vec<u64>,
    covered: u64,
    contributors: Vec<u64>,
    closures: u64,
    next_ordinal: u64,
    last_candidate: Option<u64>,
}

impl State {
    fn fresh(pk: &Packing) -> Self {
        State {
            covered_bits: vec![0; (1usize << pk.code_bits()).div_ceil(64)],
            covered: 0,
            contributors: Vec::new(),
            closures: 0,
            next_ordinal: 0,
            last_candidate: None,
        }
    }

    #[inline]
    fn is_covered(&self, code: u64) -> bool {
        self.covered_bits[(code >> 6) as usize] & (1 << (code & 63)) != 0
    }

    #[inline]
    fn mark(&mut self, code: u64) -> bool {
        let w = &mut self.covered_bits[(code >> 6) as usize];
        let bit = 1 << (code & 63);
        if *w & bit != 0 {
            return false;
        }
        *w |= bit;
        self.covered += 1;
        true
    }
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn save(path: &Path, params: Params, pk: &Packing, st: &State) -> io::Result<()> {
    let mut buf = Vec::with_capacity(st.covered_bits.len() * 8 + 64);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    put_u64(&mut buf, params.n() as u64);
    put_u64(&mut buf, params.q() as u64);
    put_u64(&mut buf, st.next_ordinal);
    put_u64(&mut buf, st.last_candidate.unwrap_or(u64::MAX));
    put_u64(&mut buf, st.covered);
    put_u64(&mut buf, st.closures);
    put_u64(&mut buf, st.contributors.len() as u64);
    for &c in &st.contributors {
        put_u64(&mut buf, c);
    }
    put_u64(&mut buf, st.covered_bits.len() as u64);
    for &w in &st.covered_bits {
        put_u64(&mut buf, w);
    }
    debug_assert_eq!(st.covered_bits.len(), (1usize << pk.code_bits()).div_ceil(64));
    // write-then-rename so an interrupted save never clobbers the old file
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&buf)?;
    f.sync_all()?;
    fs::rename(tmp, path)
}

fn load(path: &Path, params: Params, pk: &Packing) -> Result<State> {
    let bad = |m: &str| Error::Io(format!("checkpoint {}: {m}", path.display()));
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| bad(&e.to_string()))?;
    let mut pos = 0usize;
    let mut take = |k: usize| -> Result<&[u8]> {
        let s = bytes.get(pos..pos + k).ok_or_else(|| bad("truncated"))?;
        pos += k;
        Ok(s)
    };
    if take(8)? != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
    if version != VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let mut u = || -> Result<u64> { Ok(u64::from_le_bytes(take(8)?.try_into().unwrap())) };
    let (n, q) = (u()?, u()?);
    if n != params.n() as u64 || q != params.q() as u64 {
        return Err(bad(&format!("written for n={n}, q={q}")));
    }
    let next_ordinal = u()?;
    let last = u()?;
    let covered = u()?;
    let closures = u()?;
    let nc = u()?;
    let contributors = (0..nc).map(|_| u()).collect::<Result<Vec<_>>>()?;
    let words = u()? as usize;
    if words != (1usize << pk.code_bits()).div_ceil(64) {
        return Err(bad("bitset size mismatch"));
    }
    let covered_bits = (0..words).map(|_| u()).collect::<Result<Vec<_>>>()?;
    let counted: u64 = covered_bits.iter().map(|w| w.count_ones() as u64).sum();
    if counted != covered {
        return Err(bad("covered count disagrees with bitset"));
    }
    Ok(State {
        covered_bits,
        covered,
        contributors,
        closures,
        next_ordinal,
        last_candidate: (last != u64::MAX).then_some(last),
    })
}

/// Close candidate simulators in ascending code order, marking everything
/// in their sequential closures covered, until all of `F(n,q)` is covered
/// or the candidates run out.
pub fn greedy_cover(params: Params, config: &CoverConfig) -> Result<CoverReport> {
    let pk = Packing::for_params(params)?;
    let mut scratch = Scratch::new(pk)?;
    let targets = pk.total().expect("dense code space");
    let symmetry = if config.use_symmetry {
        HammingSymmetry::new(params, 1 << 12)
    } else {
        None
    };

    let (mut st, resumed) = match &config.checkpoint {
        Some(path) if path.exists() => (load(path, params, &pk)?, true),
        _ => (State::fresh(&pk), false),
    };

    let mut since_save = 0u64;
    let mut this_run = 0u64;
    let n = params.n();
    let save_now = |st: &State| -> Result<()> {
        if let Some(path) = &config.checkpoint {
            save(path, params, &pk, st)
                .map_err(|e| Error::Io(format!("writing checkpoint {}: {e}", path.display())))?;
        }
        Ok(())
    };

    while st.covered < targets && st.next_ordinal < targets {
        if config.max_closures.is_some_and(|m| this_run >= m) {
            break;
        }
        let f = pk.from_ordinal(st.next_ordinal);
        st.next_ordinal += 1;
        st.last_candidate = Some(f);
        if let Some(sym) = &symmetry {
            if !sym.is_orbit_minimal(f) {
                continue;
            }
        }
        let net = pk.network(params, f);
        let gens: Vec<u64> = (0..n)
            .map(|v| pk.code_of(&net.masked_unchecked(CoordSet::singleton(v))))
            .collect();
        if !scratch.close(&gens, config.member_limit) {
            return Err(Error::LimitExceeded {
                what: "closure members",
                limit: config.member_limit as u64,
            });
        }
        st.closures += 1;
        this_run += 1;
        let before = st.covered;
        for &m in scratch.members() {
            if st.is_covered(m) {
                continue;
            }
            match &symmetry {
                Some(sym) => {
                    for c in sym.orbit(m) {
                        st.mark(c);
                    }
                }
                None => {
                    st.mark(m);
                }
            }
        }
        if st.covered > before {
            st.contributors.push(f);
        }
        since_save += 1;
        if since_save >= config.checkpoint_every {
            save_now(&st)?;
            since_save = 0;
        }
    }
    save_now(&st)?;

    Ok(CoverReport {
        params,
        targets,
        covered: st.covered,
        contributors: st.contributors,
        closures: st.closures,
        last_candidate: st.last_candidate,
        resumed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f22_cannot_be_fully_covered() {
        let p = Params::new(2, 2).unwrap();
        let r = greedy_cover(p, &CoverConfig::default()).unwrap();
        assert_eq!(r.targets, 256);
        assert!(!r.complete());
        // agrees with answering each target exhaustively
        use crate::semigroup::{sequentially_simulatable, SimLimits, Strategy};
        let pk = Packing::for_params(p).unwrap();
        let yes = pk
            .all_codes()
            .filter(|&c| {
                sequentially_simulatable(&pk.network(p, c), Strategy::Exhaustive, SimLimits::default())
                    .unwrap()
                    .is_yes()
            })
            .count();
        assert_eq!(r.covered, yes as u64);
    }

    #[test]
    fn symmetry_does_not_change_the_covered_set() {
        let p = Params::new(2, 2).unwrap();
        let plain = CoverConfig {
            use_symmetry: false,
            ..CoverConfig::default()
        };
        let a = greedy_cover(p, &plain).unwrap();
        let b = greedy_cover(p, &CoverConfig::default()).unwrap();
        assert_eq!(a.covered, b.covered);
        assert!(b.closures < a.closures);
    }

    #[test]
    fn checkpoint_resumes() {
        let dir = std::env::temp_dir().join(format!("anet-cover-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cover.ckpt");
        let p = Params::new(1, 3).unwrap();
        let first = CoverConfig {
            checkpoint: Some(path.clone()),
            checkpoint_every: 1,
            max_closures: Some(2),
            ..CoverConfig::default()
        };
        let partial = greedy_cover(p, &first).unwrap();
        assert!(!partial.resumed);
        let rest = CoverConfig {
            max_closures: None,
            ..first
        };
        let full = greedy_cover(p, &rest).unwrap();
        assert!(full.resumed);
        let direct = greedy_cover(p, &CoverConfig::default()).unwrap();
        assert_eq!(full.covered, direct.covered);
        assert_eq!(full.contributors, direct.contributors);
        fs::remove_dir_all(dir).unwrap();
    }
}
