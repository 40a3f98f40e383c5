//! Pretty printer. Output reparses to a structurally equal term; the only
//! slack is in probability values, which are recovered from the flattened
//! distribution by division (exact up to float rounding).

use super::ast::*;

// precedence levels, loosest to tightest
const L_SEQ: u8 = 0;
const L_COMP: u8 = 1;
const L_RESTRICT: u8 = 2;
const L_PREFIX: u8 = 3;

pub fn print_process(p: &Process) -> String {
    let mut s = String::new();
    write_process(p, L_SEQ, &mut s);
    s
}

pub fn print_program(prog: &Program) -> String {
    let mut out = String::new();
    for (name, def) in &prog.definitions {
        out.push_str(name);
        out.push_str(" := ");
        if !def.params.is_empty() {
            out.push('[');
            write_decls(&def.params, &mut out);
            out.push_str("] . ");
        }
        write_process(&def.body, L_SEQ, &mut out);
        out.push_str("\n\n");
    }
    out
}

fn level_of(p: &Process) -> u8 {
    match p {
        Process::Seq(_, _) => L_SEQ,
        Process::Parallel(_, _) | Process::NondetChoice(_, _) | Process::ProbChoice(_) => L_COMP,
        Process::Restrict(_, _) => L_RESTRICT,
        _ => L_PREFIX,
    }
}

fn write_process(p: &Process, min: u8, out: &mut String) {
    let lvl = level_of(p);
    if lvl < min {
        out.push('(');
        write_process(p, L_SEQ, out);
        out.push(')');
        return;
    }
    match p {
        Process::Nil => out.push_str("nil"),
        Process::End => out.push_str("end"),
        Process::Prefix(a, cont) => {
            write_action(a, out);
            out.push_str(" . ");
            write_process(cont, L_PREFIX, out);
        }
        Process::VarDecl(decls, body) => {
            out.push('[');
            write_decls(decls, out);
            out.push_str(" . ");
            write_process(body, L_SEQ, out);
            out.push(']');
        }
        Process::Parallel(_, _) => {
            let mut chain = Vec::new();
            let mut cur = p;
            while let Process::Parallel(l, r) = cur {
                chain.push(r.as_ref());
                cur = l;
            }
            chain.push(cur);
            chain.reverse();
            for (i, q) in chain.iter().enumerate() {
                if i > 0 {
                    out.push_str(" || ");
                }
                write_process(q, L_RESTRICT, out);
            }
        }
        Process::NondetChoice(_, _) => {
            let mut chain = Vec::new();
            let mut cur = p;
            while let Process::NondetChoice(l, r) = cur {
                chain.push(r.as_ref());
                cur = l;
            }
            chain.push(cur);
            chain.reverse();
            for (i, q) in chain.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_process(q, L_RESTRICT, out);
            }
        }
        Process::ProbChoice(branches) => write_prob_chain(branches, out),
        Process::CondChoice(branches) => {
            out.push_str("[ ");
            for (i, (c, q)) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_cond(c, 0, out);
                out.push_str(" -> ");
                write_process(q, L_SEQ, out);
            }
            out.push_str(" ]");
        }
        Process::Restrict(q, gates) => {
            write_process(q, L_RESTRICT, out);
            out.push_str(" \\ {");
            out.push_str(&gates.join(", "));
            out.push('}');
        }
        Process::Call(name, args) => {
            out.push_str(name);
            if !args.is_empty() {
                out.push('[');
                out.push_str(&args.join(", "));
                out.push(']');
            }
        }
        Process::Seq(a, b) => {
            write_process(a, L_COMP, out);
            out.push_str(" ; ");
            write_process(b, L_SEQ, out);
        }
    }
}

/// Invert the left-associative flattening: the last operand carries weight
/// `1 - q` for the final chain probability `q`, and the prefix weights all
/// carry the factor `q`.
fn write_prob_chain(branches: &[(f64, Process)], out: &mut String) {
    assert!(branches.len() >= 2, "probabilistic choice needs two branches");
    if branches.len() == 2 {
        write_process(&branches[0].1, L_RESTRICT, out);
        out.push_str(&format!(" +({}) ", branches[0].0));
        write_process(&branches[1].1, L_RESTRICT, out);
        return;
    }
    let q = 1.0 - branches.last().unwrap().0;
    let scaled: Vec<(f64, Process)> = branches[..branches.len() - 1]
        .iter()
        .map(|(w, p)| (w / q, p.clone()))
        .collect();
    write_prob_chain(&scaled, out);
    out.push_str(&format!(" +({}) ", q));
    write_process(&branches.last().unwrap().1, L_RESTRICT, out);
}

fn write_decls(decls: &[(String, VarType)], out: &mut String) {
    for (i, (n, t)) in decls.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("{n}:{t}"));
    }
}

fn write_action(a: &Action, out: &mut String) {
    match a {
        Action::Send(g, e) => {
            out.push_str(g);
            out.push('!');
            // parenthesize payloads that are not a single term so the
            // following `.` stays unambiguous to a reader
            match e {
                Expression::Arith(_, _, _) => {
                    out.push('(');
                    write_expr(e, 0, out);
                    out.push(')');
                }
                _ => write_expr(e, 2, out),
            }
        }
        Action::Receive(g, x) => {
            out.push_str(g);
            out.push('?');
            out.push_str(x);
        }
        // expressions are greedy up to the prefix dot, so no parentheses
        Action::Expr(e) => write_expr(e, 0, out),
    }
}

// expression levels: 0 = additive, 1 = multiplicative, 2 = term
pub fn write_expr(e: &Expression, min: u8, out: &mut String) {
    let lvl = match e {
        Expression::Arith(ArithOp::Add, _, _) | Expression::Arith(ArithOp::Sub, _, _) => 0,
        Expression::Arith(_, _, _) => 1,
        _ => 2,
    };
    if lvl < min {
        out.push('(');
        write_expr(e, 0, out);
        out.push(')');
        return;
    }
    match e {
        Expression::NatLit(n) => out.push_str(&n.to_string()),
        Expression::Var(x) => out.push_str(x),
        Expression::Arith(op, a, b) => {
            let (sym, lhs_min, rhs_min) = match op {
                ArithOp::Add => (" + ", 1, 0),
                ArithOp::Sub => (" - ", 1, 0),
                ArithOp::Mul => (" * ", 2, 1),
                ArithOp::Div => (" / ", 2, 1),
            };
            write_expr(a, lhs_min, out);
            out.push_str(sym);
            write_expr(b, rhs_min, out);
        }
        Expression::Neg(a) => {
            out.push('-');
            // `--x` would lex as a comment
            if matches!(a.as_ref(), Expression::Neg(_)) {
                out.push('(');
                write_expr(a, 0, out);
                out.push(')');
            } else {
                write_expr(a, 2, out);
            }
        }
        Expression::Apply(name, qs) => {
            out.push_str(name);
            out.push('[');
            out.push_str(&qs.join(", "));
            out.push(']');
        }
    }
}

// condition levels: 0 = or, 1 = and, 2 = not/atom
fn write_cond(c: &Condition, min: u8, out: &mut String) {
    let lvl = match c {
        Condition::Or(_, _) => 0,
        Condition::And(_, _) => 1,
        _ => 2,
    };
    if lvl < min {
        out.push('(');
        write_cond(c, 0, out);
        out.push(')');
        return;
    }
    match c {
        Condition::Or(a, b) => {
            write_cond(a, 0, out);
            out.push_str(" or ");
            write_cond(b, 1, out);
        }
        Condition::And(a, b) => {
            write_cond(a, 1, out);
            out.push_str(" and ");
            write_cond(b, 2, out);
        }
        Condition::Not(a) => {
            out.push_str("not ");
            write_cond(a, 2, out);
        }
        Condition::Cmp(op, a, b) => {
            write_expr(a, 0, out);
            out.push_str(match op {
                CmpOp::Eq => " = ",
                CmpOp::Lt => " < ",
            });
            write_expr(b, 0, out);
        }
    }
}
