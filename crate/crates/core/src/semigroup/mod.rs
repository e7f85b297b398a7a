//! Transformation semigroups generated by networks under an update mode.

mod closure;
mod cover;
mod packing;
mod simulate;
mod symmetry;

pub(crate) use closure::Scratch;
pub use closure::{close, close_incremental, Closure, MemberSet, GeneratorLabel, GeneratorSet, UpdateMode, DEFAULT_MEMBER_LIMIT};
pub use cover::{greedy_cover, CoverConfig, CoverReport};
pub use packing::{Packing, MAX_PACKED_POINTS};
pub use simulate::{
    is_singular_code, sequentially_simulatable, t_reason, verify_no_async_singular,
    verify_t_obstruction, SimLimits, Simulatability, SingularReport, Strategy, SweepEntry,
    TEntry, TReason, TReport,
};
pub use symmetry::HammingSymmetry;
