//! Static validation: name resolution, scope closure and simple typing.

use std::collections::BTreeMap;

use super::ast::*;
use crate::quantum;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("undefined process `{0}`")]
    UndefinedProcess(String),
    #[error("process `{name}` takes {expected} argument(s), got {got}")]
    CallArity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{var}` has type {found}, expected {expected}")]
    TypeMismatch {
        var: String,
        expected: VarType,
        found: VarType,
    },
    #[error("measurements are not allowed inside conditions")]
    MeasurementInCondition,
    #[error("`{0}` is a builtin transformation name and cannot name a process")]
    ReservedName(String),
}

type Scope = Vec<(String, VarType)>;

/// Validate every definition body: closed under its parameters, calls
/// resolved with matching arity, variables used at their declared types.
pub fn check_program(prog: &Program) -> Result<(), CheckError> {
    for name in prog.definitions.keys() {
        if quantum::is_builtin(name) {
            return Err(CheckError::ReservedName(name.clone()));
        }
    }
    for def in prog.definitions.values() {
        let mut scope: Scope = def.params.clone();
        check_process(&def.body, &mut scope, &prog.definitions)?;
    }
    if let Some(entry) = &prog.entry {
        check_entry(entry, &prog.definitions, &[])?;
    }
    Ok(())
}

/// Validate an entry expression; `externals` are context-provided variables.
pub fn check_entry(
    p: &Process,
    defs: &BTreeMap<String, Definition>,
    externals: &[(String, VarType)],
) -> Result<(), CheckError> {
    let mut scope: Scope = externals.to_vec();
    check_process(p, &mut scope, defs)
}

fn lookup(scope: &Scope, name: &str) -> Option<VarType> {
    scope.iter().rev().find(|(n, _)| n == name).map(|(_, t)| *t)
}

fn expect(scope: &Scope, name: &str, ty: VarType) -> Result<(), CheckError> {
    match lookup(scope, name) {
        None => Err(CheckError::UnboundVariable(name.to_string())),
        Some(t) if t == ty => Ok(()),
        Some(t) => Err(CheckError::TypeMismatch {
            var: name.to_string(),
            expected: ty,
            found: t,
        }),
    }
}

fn check_process(
    p: &Process,
    scope: &mut Scope,
    defs: &BTreeMap<String, Definition>,
) -> Result<(), CheckError> {
    match p {
        Process::Nil | Process::End => Ok(()),
        Process::Prefix(a, cont) => {
            match a {
                Action::Send(_, e) => check_payload(e, scope)?,
                Action::Receive(_, x) => {
                    lookup(scope, x).ok_or_else(|| CheckError::UnboundVariable(x.clone()))?;
                }
                Action::Expr(e) => check_nat_expr(e, scope)?,
            }
            check_process(cont, scope, defs)
        }
        Process::VarDecl(decls, body) => {
            let base = scope.len();
            scope.extend(decls.iter().cloned());
            check_process(body, scope, defs)?;
            scope.truncate(base);
            Ok(())
        }
        Process::Parallel(a, b) | Process::NondetChoice(a, b) | Process::Seq(a, b) => {
            check_process(a, scope, defs)?;
            check_process(b, scope, defs)
        }
        Process::ProbChoice(branches) => {
            for (_, q) in branches {
                check_process(q, scope, defs)?;
            }
            Ok(())
        }
        Process::CondChoice(branches) => {
            for (c, q) in branches {
                check_cond(c, scope)?;
                check_process(q, scope, defs)?;
            }
            Ok(())
        }
        Process::Restrict(q, _) => check_process(q, scope, defs),
        Process::Call(name, args) => {
            let def = defs
                .get(name)
                .ok_or_else(|| CheckError::UndefinedProcess(name.clone()))?;
            if def.params.len() != args.len() {
                return Err(CheckError::CallArity {
                    name: name.clone(),
                    expected: def.params.len(),
                    got: args.len(),
                });
            }
            for (arg, (_, ty)) in args.iter().zip(def.params.iter()) {
                expect(scope, arg, *ty)?;
            }
            Ok(())
        }
    }
}

/// A send payload is either a single qubit variable or an integer expression.
fn check_payload(e: &Expression, scope: &Scope) -> Result<(), CheckError> {
    if let Expression::Var(x) = e {
        match lookup(scope, x) {
            None => return Err(CheckError::UnboundVariable(x.clone())),
            Some(_) => return Ok(()),
        }
    }
    check_nat_expr(e, scope)
}

fn check_nat_expr(e: &Expression, scope: &Scope) -> Result<(), CheckError> {
    match e {
        Expression::NatLit(_) => Ok(()),
        Expression::Var(x) => expect(scope, x, VarType::Nat),
        Expression::Arith(_, a, b) => {
            check_nat_expr(a, scope)?;
            check_nat_expr(b, scope)
        }
        Expression::Neg(a) => check_nat_expr(a, scope),
        Expression::Apply(_, qs) => {
            for q in qs {
                expect(scope, q, VarType::Qubit)?;
            }
            Ok(())
        }
    }
}

fn check_cond(c: &Condition, scope: &Scope) -> Result<(), CheckError> {
    match c {
        Condition::Cmp(_, a, b) => {
            if has_apply(a) || has_apply(b) {
                return Err(CheckError::MeasurementInCondition);
            }
            check_nat_expr(a, scope)?;
            check_nat_expr(b, scope)
        }
        Condition::And(a, b) | Condition::Or(a, b) => {
            check_cond(a, scope)?;
            check_cond(b, scope)
        }
        Condition::Not(a) => check_cond(a, scope),
    }
}

fn has_apply(e: &Expression) -> bool {
    match e {
        Expression::Apply(_, _) => true,
        Expression::Arith(_, a, b) => has_apply(a) || has_apply(b),
        Expression::Neg(a) => has_apply(a),
        _ => false,
    }
}
