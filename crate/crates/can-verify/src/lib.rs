//! State patterns and CTL model checking over transition systems.

pub mod check;
pub mod ctl;
pub mod props;

pub use check::{check_ctl, check_file, compare_verdicts, label_states, sat, with_labels, Labelled, Verdict};
pub use ctl::{parse_ctl, Ctl};
pub use props::{parse_properties, pattern_holds, PropertyFile, StatePattern};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("the transition system is not closed")]
    NotClosed,
    #[error("verdicts were computed in different modes ({0} and {1})")]
    ModeMismatch(String, String),
}
