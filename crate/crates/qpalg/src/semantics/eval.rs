//! Expression evaluation against a stable context.
//!
//! Pure arithmetic and store lookups are folded in one go. The first
//! (leftmost-innermost) application of an admissible transformation stops
//! the fold: it rewrites the redex to a fresh result variable and splits the
//! context into the measurement mixture, with the fresh variable bound to
//! the branch outcome in each branch store.

use crate::quantum::{self, QuantumError};
use crate::syntax::ast::{ArithOp, CmpOp, Condition, Expression, VarType};
use thiserror::Error;

use super::context::{Context, ScopeFrame};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("qubit `{0}` is not initialized")]
    UninitializedQubit(String),
    #[error("qubit `{0}` used in arithmetic")]
    QubitInArithmetic(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone)]
pub enum EvalOutcome {
    /// Fully evaluated to an integer; the context is unchanged.
    Value(i64),
    /// The expression is a qubit variable present in the register.
    QubitRef(String),
    /// One measurement fired. `rewritten` has the redex replaced by a fresh
    /// variable; `branches` is the resulting context mixture.
    Measured {
        rewritten: Expression,
        branches: Vec<(f64, Context)>,
    },
}

enum NumStep {
    Val(i64),
    Measured(Expression, Vec<(f64, Context)>),
}

/// Evaluate an expression in a stable context.
pub fn eval_expression(
    e: &Expression,
    ctx: &Context,
    par_path: &[bool],
) -> Result<EvalOutcome, EvalError> {
    if let Expression::Var(x) = e {
        if !ctx.f.contains_key(x) && ctx.q.iter().any(|n| n == x) {
            return Ok(EvalOutcome::QubitRef(x.clone()));
        }
    }
    match eval_num(e, ctx, par_path)? {
        NumStep::Val(v) => Ok(EvalOutcome::Value(v)),
        NumStep::Measured(rewritten, branches) => Ok(EvalOutcome::Measured {
            rewritten,
            branches,
        }),
    }
}

fn eval_num(e: &Expression, ctx: &Context, par_path: &[bool]) -> Result<NumStep, EvalError> {
    match e {
        Expression::NatLit(n) => Ok(NumStep::Val(*n)),
        Expression::Var(x) => match ctx.f.get(x) {
            Some(v) => Ok(NumStep::Val(*v)),
            None => {
                if ctx.q.iter().any(|n| n == x) {
                    Err(EvalError::QubitInArithmetic(x.clone()))
                } else if matches!(ctx.var_type(x), Some(VarType::Qubit)) {
                    Err(EvalError::UninitializedQubit(x.clone()))
                } else {
                    Err(EvalError::UnboundVariable(x.clone()))
                }
            }
        },
        Expression::Arith(op, a, b) => match eval_num(a, ctx, par_path)? {
            NumStep::Measured(a2, branches) => Ok(NumStep::Measured(
                Expression::Arith(*op, Box::new(a2), b.clone()),
                branches,
            )),
            NumStep::Val(va) => match eval_num(b, ctx, par_path)? {
                NumStep::Measured(b2, branches) => Ok(NumStep::Measured(
                    Expression::Arith(*op, Box::new(Expression::NatLit(va)), Box::new(b2)),
                    branches,
                )),
                NumStep::Val(vb) => {
                    let r = match op {
                        ArithOp::Add => va.checked_add(vb),
                        ArithOp::Sub => va.checked_sub(vb),
                        ArithOp::Mul => va.checked_mul(vb),
                        ArithOp::Div => {
                            if vb == 0 {
                                return Err(EvalError::DivisionByZero);
                            }
                            va.checked_div(vb)
                        }
                    };
                    r.map(NumStep::Val).ok_or(EvalError::Overflow)
                }
            },
        },
        Expression::Neg(a) => match eval_num(a, ctx, par_path)? {
            NumStep::Measured(a2, branches) => {
                Ok(NumStep::Measured(Expression::Neg(Box::new(a2)), branches))
            }
            NumStep::Val(v) => v.checked_neg().map(NumStep::Val).ok_or(EvalError::Overflow),
        },
        Expression::Apply(name, xs) => {
            for x in xs {
                if !ctx.q.iter().any(|n| n == x) {
                    return Err(EvalError::UninitializedQubit(x.clone()));
                }
            }
            let a = quantum::builtin(name)?;
            let outcomes = quantum::measure(&a, xs, &ctx.q, &ctx.rho)?;
            let mut base = ctx.clone();
            let y = format!("$m{}", base.fresh_suffix());
            let mut branches = Vec::with_capacity(outcomes.len());
            for (tau, p, rho) in outcomes {
                let mut c = base.clone();
                c.rho = rho;
                c.f.insert(y.clone(), tau);
                c.scopes.push(ScopeFrame {
                    par_path: par_path.to_vec(),
                    entries: vec![(y.clone(), y.clone(), VarType::Nat)],
                });
                branches.push((p, c));
            }
            Ok(NumStep::Measured(Expression::Var(y), branches))
        }
    }
}

/// Conditions are statically measurement-free, so evaluation is pure.
pub fn eval_condition(c: &Condition, ctx: &Context) -> Result<bool, EvalError> {
    match c {
        Condition::Cmp(op, a, b) => {
            let va = eval_pure(a, ctx)?;
            let vb = eval_pure(b, ctx)?;
            Ok(match op {
                CmpOp::Eq => va == vb,
                CmpOp::Lt => va < vb,
            })
        }
        Condition::And(a, b) => Ok(eval_condition(a, ctx)? && eval_condition(b, ctx)?),
        Condition::Or(a, b) => Ok(eval_condition(a, ctx)? || eval_condition(b, ctx)?),
        Condition::Not(a) => Ok(!eval_condition(a, ctx)?),
    }
}

fn eval_pure(e: &Expression, ctx: &Context) -> Result<i64, EvalError> {
    match eval_num(e, ctx, &[])? {
        NumStep::Val(v) => Ok(v),
        NumStep::Measured(_, _) => Err(EvalError::QubitInArithmetic(
            "measurement in condition".into(),
        )),
    }
}
