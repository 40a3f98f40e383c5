//! Capture-avoiding variable renaming over process terms.
//!
//! Used for parameter binding at call unfolding and for freshening declared
//! names at declaration time. Binders of the target name shadow; binders of
//! the replacement name are alpha-renamed first so the replacement is never
//! captured.

use super::ast::*;

/// Rename every free occurrence of variable `from` to `to`.
pub fn rename_var(p: &Process, from: &str, to: &str) -> Process {
    if from == to {
        return p.clone();
    }
    let mut counter = 0usize;
    rename(p, from, to, &mut counter)
}

fn rename(p: &Process, from: &str, to: &str, counter: &mut usize) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::End => Process::End,
        Process::Prefix(a, cont) => Process::Prefix(
            rename_action(a, from, to),
            Box::new(rename(cont, from, to, counter)),
        ),
        Process::VarDecl(decls, body) => {
            if decls.iter().any(|(n, _)| n == from) {
                // `from` is rebound below; stop.
                return p.clone();
            }
            if decls.iter().any(|(n, _)| n == to) {
                // the binder would capture the replacement; alpha-rename it
                let mut decls2 = decls.clone();
                let fresh = fresh_name(to, counter);
                for d in decls2.iter_mut() {
                    if d.0 == to {
                        d.0 = fresh.clone();
                    }
                }
                let body2 = rename(body, to, &fresh, counter);
                return Process::VarDecl(decls2, Box::new(rename(&body2, from, to, counter)));
            }
            Process::VarDecl(decls.clone(), Box::new(rename(body, from, to, counter)))
        }
        Process::Parallel(a, b) => Process::Parallel(
            Box::new(rename(a, from, to, counter)),
            Box::new(rename(b, from, to, counter)),
        ),
        Process::NondetChoice(a, b) => Process::NondetChoice(
            Box::new(rename(a, from, to, counter)),
            Box::new(rename(b, from, to, counter)),
        ),
        Process::Seq(a, b) => Process::Seq(
            Box::new(rename(a, from, to, counter)),
            Box::new(rename(b, from, to, counter)),
        ),
        Process::ProbChoice(branches) => Process::ProbChoice(
            branches
                .iter()
                .map(|(p0, q)| (*p0, rename(q, from, to, counter)))
                .collect(),
        ),
        Process::CondChoice(branches) => Process::CondChoice(
            branches
                .iter()
                .map(|(c, q)| (rename_cond(c, from, to), rename(q, from, to, counter)))
                .collect(),
        ),
        Process::Restrict(q, gates) => {
            Process::Restrict(Box::new(rename(q, from, to, counter)), gates.clone())
        }
        Process::Call(name, args) => Process::Call(
            name.clone(),
            args.iter()
                .map(|a| if a == from { to.to_string() } else { a.clone() })
                .collect(),
        ),
    }
}

fn fresh_name(base: &str, counter: &mut usize) -> String {
    *counter += 1;
    format!("{base}${counter}")
}

fn rename_action(a: &Action, from: &str, to: &str) -> Action {
    match a {
        Action::Send(g, e) => Action::Send(g.clone(), rename_expr(e, from, to)),
        Action::Receive(g, x) => Action::Receive(
            g.clone(),
            if x == from { to.to_string() } else { x.clone() },
        ),
        Action::Expr(e) => Action::Expr(rename_expr(e, from, to)),
    }
}

pub fn rename_expr(e: &Expression, from: &str, to: &str) -> Expression {
    match e {
        Expression::NatLit(n) => Expression::NatLit(*n),
        Expression::Var(x) => Expression::Var(if x == from {
            to.to_string()
        } else {
            x.clone()
        }),
        Expression::Arith(op, a, b) => Expression::Arith(
            *op,
            Box::new(rename_expr(a, from, to)),
            Box::new(rename_expr(b, from, to)),
        ),
        Expression::Neg(a) => Expression::Neg(Box::new(rename_expr(a, from, to))),
        Expression::Apply(name, xs) => Expression::Apply(
            name.clone(),
            xs.iter()
                .map(|x| if x == from { to.to_string() } else { x.clone() })
                .collect(),
        ),
    }
}

fn rename_cond(c: &Condition, from: &str, to: &str) -> Condition {
    match c {
        Condition::Cmp(op, a, b) => {
            Condition::Cmp(*op, rename_expr(a, from, to), rename_expr(b, from, to))
        }
        Condition::And(a, b) => Condition::And(
            Box::new(rename_cond(a, from, to)),
            Box::new(rename_cond(b, from, to)),
        ),
        Condition::Or(a, b) => Condition::Or(
            Box::new(rename_cond(a, from, to)),
            Box::new(rename_cond(b, from, to)),
        ),
        Condition::Not(a) => Condition::Not(Box::new(rename_cond(a, from, to))),
    }
}
