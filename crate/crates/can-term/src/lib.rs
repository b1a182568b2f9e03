//! Term representation of agents: entities, encoding and decoding,
//! canonical keys, structural checks and the algebraic notation.

pub mod canon;
pub mod control;
pub mod encode;
pub mod lint;
pub mod notation;
pub mod term;

pub use canon::{canonical_key, canonicalize, term_key, Canonical, DANGLING};
pub use control::{Control, Kind};
pub use encode::{
    decode_config, encode_action, encode_config, encode_formula, encode_library, encode_plan, encode_program,
    initial_state, seed_check_tokens, DecodeError,
};
pub use lint::{lint, LintError};
pub use notation::{parse_forest, parse_state, parse_term, print_forest, print_state, print_term, NotationError, PrintOpts, Shape};
pub use term::{Path, State, Term, BELIEFS, DESIRES, INTENTIONS, PLANS};
