//! Universal simulators over enlarged alphabets: one by factor (alphabet
//! `2q`) and one by initialization (alphabet `q + 1`), with compilers from
//! target maps to update words.

mod ckd;
mod control;
mod factor;
mod init;

pub use ckd::{decompose_ckd, CkdGenerators, CkdSymbol, BFS_SPACE_LIMIT};
pub use control::{ControlAutomaton, ControlState, Sign};
pub use factor::{
    assemble_factor, compile_factor, gadget_words, psi, rho, rho_automaton, sync_word,
    factor_simulator, verify_factor, FactorCoding, GadgetWords,
};
pub use init::{
    assemble_init, compile_init, control_cycle, init_gadgets, init_simulator, verify_init,
    BlockGadgets, InitCoding,
};
