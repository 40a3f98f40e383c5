//! Abstract syntax of process programs.

use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarType {
    Nat,
    Qubit,
}

impl std::fmt::Display for VarType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarType::Nat => write!(f, "Nat"),
            VarType::Qubit => write!(f, "Qubit"),
        }
    }
}

/// Integer expressions; `Apply` is the application of an admissible
/// transformation to a register of qubit variables and is the one expression
/// form with a side effect.
#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    NatLit(i64),
    Var(String),
    Arith(ArithOp, Box<Expression>, Box<Expression>),
    Neg(Box<Expression>),
    Apply(String, Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Guard language of conditional choice: comparisons over integer
/// expressions closed under boolean connectives.
#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    Cmp(CmpOp, Expression, Expression),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Not(Box<Condition>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Lt,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    /// `g!e` — emission of an expression (a qubit variable is the qubit-send
    /// case, decided against the register at run time).
    Send(String, Expression),
    /// `g?x` — reception into a declared variable.
    Receive(String, String),
    /// A bare expression used for its side effect, e.g. `H[x]`.
    Expr(Expression),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Process {
    Nil,
    End,
    Prefix(Action, Box<Process>),
    VarDecl(Vec<(String, VarType)>, Box<Process>),
    Parallel(Box<Process>, Box<Process>),
    NondetChoice(Box<Process>, Box<Process>),
    ProbChoice(Vec<(f64, Process)>),
    CondChoice(Vec<(Condition, Process)>),
    Restrict(Box<Process>, Vec<String>),
    Call(String, Vec<String>),
    Seq(Box<Process>, Box<Process>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub params: Vec<(String, VarType)>,
    pub body: Process,
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub definitions: BTreeMap<String, Definition>,
    pub entry: Option<Process>,
}

impl Process {
    pub fn prefix(a: Action, p: Process) -> Process {
        Process::Prefix(a, Box::new(p))
    }

    /// Structural equality with probabilities compared at `tol`. Exact
    /// float equality is too strict for print/parse round trips because the
    /// printer divides flattened probability lists back into chain form.
    pub fn structural_eq(&self, other: &Process, tol: f64) -> bool {
        use Process::*;
        match (self, other) {
            (Nil, Nil) | (End, End) => true,
            (Prefix(a, p), Prefix(b, q)) => a == b && p.structural_eq(q, tol),
            (VarDecl(d1, p), VarDecl(d2, q)) => d1 == d2 && p.structural_eq(q, tol),
            (Parallel(a, b), Parallel(c, d)) | (NondetChoice(a, b), NondetChoice(c, d)) | (Seq(a, b), Seq(c, d)) => {
                a.structural_eq(c, tol) && b.structural_eq(d, tol)
            }
            (ProbChoice(xs), ProbChoice(ys)) => {
                xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|((p, a), (q, b))| {
                        (p - q).abs() <= tol && a.structural_eq(b, tol)
                    })
            }
            (CondChoice(xs), CondChoice(ys)) => {
                xs.len() == ys.len()
                    && xs
                        .iter()
                        .zip(ys.iter())
                        .all(|((c, a), (d, b))| c == d && a.structural_eq(b, tol))
            }
            (Restrict(p, l1), Restrict(q, l2)) => l1 == l2 && p.structural_eq(q, tol),
            (Call(n, a), Call(m, b)) => n == m && a == b,
            _ => false,
        }
    }

    /// Variable names occurring free (parameters and declarations bind).
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut push = |name: &str, bound: &Vec<String>, out: &mut Vec<String>| {
            if !bound.iter().any(|b| b == name) && !out.iter().any(|o| o == name) {
                out.push(name.to_string());
            }
        };
        match self {
            Process::Nil | Process::End => {}
            Process::Prefix(a, p) => {
                match a {
                    Action::Send(_, e) => expr_free(e, bound, out),
                    Action::Receive(_, x) => push(x, bound, out),
                    Action::Expr(e) => expr_free(e, bound, out),
                }
                p.collect_free(bound, out);
            }
            Process::VarDecl(decls, p) => {
                let base = bound.len();
                for (n, _) in decls {
                    bound.push(n.clone());
                }
                p.collect_free(bound, out);
                bound.truncate(base);
            }
            Process::Parallel(p, q) | Process::NondetChoice(p, q) | Process::Seq(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Process::ProbChoice(branches) => {
                for (_, p) in branches {
                    p.collect_free(bound, out);
                }
            }
            Process::CondChoice(branches) => {
                for (c, p) in branches {
                    cond_free(c, bound, out);
                    p.collect_free(bound, out);
                }
            }
            Process::Restrict(p, _) => p.collect_free(bound, out),
            Process::Call(_, args) => {
                for a in args {
                    push(a, bound, out);
                }
            }
        }
    }
}

fn expr_free(e: &Expression, bound: &[String], out: &mut Vec<String>) {
    match e {
        Expression::NatLit(_) => {}
        Expression::Var(x) => {
            if !bound.iter().any(|b| b == x) && !out.iter().any(|o| o == x) {
                out.push(x.clone());
            }
        }
        Expression::Arith(_, a, b) => {
            expr_free(a, bound, out);
            expr_free(b, bound, out);
        }
        Expression::Neg(a) => expr_free(a, bound, out),
        Expression::Apply(_, xs) => {
            for x in xs {
                if !bound.iter().any(|b| b == x) && !out.iter().any(|o| o == x) {
                    out.push(x.clone());
                }
            }
        }
    }
}

fn cond_free(c: &Condition, bound: &[String], out: &mut Vec<String>) {
    match c {
        Condition::Cmp(_, a, b) => {
            expr_free(a, bound, out);
            expr_free(b, bound, out);
        }
        Condition::And(a, b) | Condition::Or(a, b) => {
            cond_free(a, bound, out);
            cond_free(b, bound, out);
        }
        Condition::Not(a) => cond_free(a, bound, out),
    }
}
