//! Contexts, process states and the operational semantics.

pub mod context;
pub mod eval;
pub mod step;

pub use context::{Context, InitialContext, ProcessState, ScopeFrame};
pub use eval::{eval_condition, eval_expression, EvalError, EvalOutcome};
pub use step::{
    is_stable, step, Label, OpenReceive, StepError, StepOptions, StepOutcome, TauKind, TransKind,
    Transition,
};
