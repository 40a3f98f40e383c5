//! Recursive-descent parser.
//!
//! Operator layering, loosest to tightest: `;`, then one homogeneous layer of
//! `||` / `+` / `+(p)` (mixing them requires parentheses), then restriction
//! `\{...}`, then action prefix `.`. Unparenthesized probabilistic chains
//! flatten into a single distribution with left-associatively resolved
//! conditional probabilities.

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok};
use crate::quantum;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("syntax error at {pos}: `{name}` expects {expected} qubit argument(s), got {got}")]
    Arity {
        pos: Pos,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate definition of `{0}`")]
    DuplicateDefinition(String),
    #[error("probabilities at {pos} sum to {sum}, expected 1")]
    BadProbabilities { pos: Pos, sum: f64 },
}

pub struct Parser {
    toks: Vec<(Tok, Pos)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        let toks = tokenize(src).map_err(|e| ParseError::Syntax {
            pos: e.pos,
            msg: e.msg,
        })?;
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> PResult<()> {
        if self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected {t}, found {}", self.peek())))
        }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.here(),
            msg: msg.to_string(),
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(&format!("expected identifier, found {other}"))),
        }
    }

    // ---- programs --------------------------------------------------------

    fn program(&mut self) -> PResult<Program> {
        let mut prog = Program::default();
        while *self.peek() != Tok::Eof {
            let name = self.ident()?;
            self.eat(&Tok::Define)?;
            let def = self.definition_rhs()?;
            if prog.definitions.insert(name.clone(), def).is_some() {
                return Err(ParseError::DuplicateDefinition(name));
            }
        }
        Ok(prog)
    }

    /// Either `[params] . body` (parameterized) or a plain process body.
    /// `[x:Nat . P]` is a declaration block, `[x:Nat] . P` a parameter list;
    /// the position of the dot relative to `]` decides.
    fn definition_rhs(&mut self) -> PResult<Definition> {
        let save = self.pos;
        if *self.peek() == Tok::LBracket {
            self.bump();
            if let Ok(params) = self.decls() {
                if *self.peek() == Tok::RBracket && *self.peek_at(1) == Tok::Dot {
                    self.bump();
                    self.bump();
                    let body = self.process()?;
                    check_distinct_params(&params)?;
                    return Ok(Definition { params, body });
                }
            }
            self.pos = save;
        }
        let body = self.process()?;
        Ok(Definition {
            params: Vec::new(),
            body,
        })
    }

    fn decls(&mut self) -> PResult<Vec<(String, VarType)>> {
        let mut out = Vec::new();
        loop {
            let name = self.ident()?;
            self.eat(&Tok::Colon)?;
            let ty = match self.bump() {
                Tok::Nat => VarType::Nat,
                Tok::Qubit => VarType::Qubit,
                other => return Err(self.err(&format!("expected a type, found {other}"))),
            };
            out.push((name, ty));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    // ---- processes -------------------------------------------------------

    fn process(&mut self) -> PResult<Process> {
        let first = self.composition()?;
        if *self.peek() == Tok::Semi {
            self.bump();
            let rest = self.process()?;
            Ok(Process::Seq(Box::new(first), Box::new(rest)))
        } else {
            Ok(first)
        }
    }

    /// `+(p)` is recognized by the token triple `+ ( FLOAT`.
    fn at_prob_op(&self) -> bool {
        *self.peek() == Tok::Plus
            && *self.peek_at(1) == Tok::LParen
            && matches!(self.peek_at(2), Tok::Float(_))
    }

    fn composition(&mut self) -> PResult<Process> {
        let start = self.here();
        let first = self.restricted()?;
        if *self.peek() == Tok::Par {
            let mut acc = first;
            while *self.peek() == Tok::Par {
                self.bump();
                let rhs = self.restricted()?;
                acc = Process::Parallel(Box::new(acc), Box::new(rhs));
            }
            self.no_mixing()?;
            Ok(acc)
        } else if self.at_prob_op() {
            // flatten the chain left-associatively into one distribution
            let mut weighted: Vec<(f64, Process)> = vec![(1.0, first)];
            while self.at_prob_op() {
                self.bump();
                self.bump();
                let p = match self.bump() {
                    Tok::Float(p) => p,
                    _ => unreachable!(),
                };
                if !(p > 0.0 && p < 1.0) {
                    return Err(self.err(&format!("probability {p} not in (0,1)")));
                }
                self.eat(&Tok::RParen)?;
                let rhs = self.restricted()?;
                for w in weighted.iter_mut() {
                    w.0 *= p;
                }
                weighted.push((1.0 - p, rhs));
            }
            self.no_mixing()?;
            let sum: f64 = weighted.iter().map(|(p, _)| p).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(ParseError::BadProbabilities { pos: start, sum });
            }
            Ok(Process::ProbChoice(weighted))
        } else if *self.peek() == Tok::Plus {
            let mut acc = first;
            while *self.peek() == Tok::Plus && !self.at_prob_op() {
                self.bump();
                let rhs = self.restricted()?;
                acc = Process::NondetChoice(Box::new(acc), Box::new(rhs));
            }
            self.no_mixing()?;
            Ok(acc)
        } else {
            Ok(first)
        }
    }

    fn no_mixing(&self) -> PResult<()> {
        if *self.peek() == Tok::Par || *self.peek() == Tok::Plus {
            Err(self.err(
                "mixed `||`/`+`/`+(p)` at the same level; parenthesize to disambiguate",
            ))
        } else {
            Ok(())
        }
    }

    fn restricted(&mut self) -> PResult<Process> {
        let mut p = self.prefixed()?;
        while *self.peek() == Tok::Backslash {
            self.bump();
            self.eat(&Tok::LBrace)?;
            let mut gates = vec![self.ident()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                gates.push(self.ident()?);
            }
            self.eat(&Tok::RBrace)?;
            if gates.is_empty() {
                return Err(self.err("empty restriction set"));
            }
            p = Process::Restrict(Box::new(p), gates);
        }
        Ok(p)
    }

    /// A chain of actions ending in an atom: `a1 . a2 . ... . atom`.
    fn prefixed(&mut self) -> PResult<Process> {
        if let Some(action) = self.try_action()? {
            self.eat(&Tok::Dot)?;
            let cont = self.prefixed()?;
            return Ok(Process::prefix(action, cont));
        }
        // `( expr ) . P` is an expression action whose head needed
        // parentheses; anything else starting with `(` is a process
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            if let Ok(e) = self.nexp() {
                if *self.peek() == Tok::Dot {
                    self.bump();
                    let cont = self.prefixed()?;
                    return Ok(Process::prefix(Action::Expr(e), cont));
                }
            }
            self.pos = save;
        }
        self.atom()
    }

    /// Recognizes an action at the cursor without consuming an atom.
    fn try_action(&mut self) -> PResult<Option<Action>> {
        match self.peek().clone() {
            Tok::Ident(name) => match self.peek_at(1) {
                Tok::Bang => {
                    self.bump();
                    self.bump();
                    let e = self.nexp()?;
                    Ok(Some(Action::Send(name, e)))
                }
                Tok::Question => {
                    self.bump();
                    self.bump();
                    let var = self.ident()?;
                    Ok(Some(Action::Receive(name, var)))
                }
                Tok::LBracket if quantum::is_builtin(&name) => {
                    let e = self.nexp()?;
                    Ok(Some(Action::Expr(e)))
                }
                Tok::Dot => {
                    // a bare variable used as an expression action
                    self.bump();
                    Ok(Some(Action::Expr(Expression::Var(name))))
                }
                _ => Ok(None),
            },
            Tok::Int(_) | Tok::Minus => {
                let e = self.nexp()?;
                Ok(Some(Action::Expr(e)))
            }
            _ => Ok(None),
        }
    }

    fn atom(&mut self) -> PResult<Process> {
        match self.peek().clone() {
            Tok::Nil => {
                self.bump();
                Ok(Process::Nil)
            }
            Tok::End => {
                self.bump();
                Ok(Process::End)
            }
            Tok::LParen => {
                self.bump();
                let p = self.process()?;
                self.eat(&Tok::RParen)?;
                Ok(p)
            }
            Tok::LBracket => self.bracket_form(),
            Tok::Ident(name) => {
                self.bump();
                let args = if *self.peek() == Tok::LBracket {
                    self.var_list()?
                } else {
                    Vec::new()
                };
                Ok(Process::Call(name, args))
            }
            other => Err(self.err(&format!("expected a process, found {other}"))),
        }
    }

    fn var_list(&mut self) -> PResult<Vec<String>> {
        self.eat(&Tok::LBracket)?;
        let mut args = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.ident()?);
        }
        self.eat(&Tok::RBracket)?;
        Ok(args)
    }

    /// `[x:T, ... . P]` declaration, `[x:T, ...] . P [args]` inline
    /// parameterized process (substituted away here), or
    /// `[c1 -> P1, ...]` conditional choice.
    fn bracket_form(&mut self) -> PResult<Process> {
        let save = self.pos;
        self.eat(&Tok::LBracket)?;
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
            let decls = self.decls()?;
            check_distinct_params(&decls)?;
            match self.bump() {
                Tok::Dot => {
                    let body = self.process()?;
                    self.eat(&Tok::RBracket)?;
                    Ok(Process::VarDecl(decls, Box::new(body)))
                }
                Tok::RBracket => {
                    self.eat(&Tok::Dot)?;
                    let body = self.prefixed()?;
                    let here = self.here();
                    let args = self.var_list()?;
                    if args.len() != decls.len() {
                        return Err(ParseError::Syntax {
                            pos: here,
                            msg: format!(
                                "inline parameterized process takes {} argument(s), got {}",
                                decls.len(),
                                args.len()
                            ),
                        });
                    }
                    let mut out = body;
                    for ((param, _), arg) in decls.iter().zip(args.iter()) {
                        out = super::subst::rename_var(&out, param, arg);
                    }
                    Ok(out)
                }
                other => Err(self.err(&format!("expected `.` or `]`, found {other}"))),
            }
        } else {
            self.pos = save;
            self.cond_choice()
        }
    }

    fn cond_choice(&mut self) -> PResult<Process> {
        self.eat(&Tok::LBracket)?;
        let mut branches = Vec::new();
        loop {
            let c = self.condition()?;
            self.eat(&Tok::Arrow)?;
            let p = self.process()?;
            branches.push((c, p));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.eat(&Tok::RBracket)?;
        Ok(Process::CondChoice(branches))
    }

    // ---- conditions ------------------------------------------------------

    fn condition(&mut self) -> PResult<Condition> {
        let mut acc = self.cond_and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.cond_and()?;
            acc = Condition::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn cond_and(&mut self) -> PResult<Condition> {
        let mut acc = self.cond_not()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.cond_not()?;
            acc = Condition::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn cond_not(&mut self) -> PResult<Condition> {
        if *self.peek() == Tok::Not {
            self.bump();
            Ok(Condition::Not(Box::new(self.cond_not()?)))
        } else {
            self.cond_atom()
        }
    }

    fn cond_atom(&mut self) -> PResult<Condition> {
        if *self.peek() == Tok::LParen {
            // speculative: parenthesized condition unless a comparison follows
            let save = self.pos;
            self.bump();
            if let Ok(c) = self.condition() {
                if *self.peek() == Tok::RParen
                    && *self.peek_at(1) != Tok::Eq
                    && *self.peek_at(1) != Tok::Lt
                {
                    self.bump();
                    return Ok(c);
                }
            }
            self.pos = save;
        }
        let lhs = self.nexp()?;
        let op = match self.bump() {
            Tok::Eq => CmpOp::Eq,
            Tok::Lt => CmpOp::Lt,
            other => return Err(self.err(&format!("expected `=` or `<`, found {other}"))),
        };
        let rhs = self.nexp()?;
        Ok(Condition::Cmp(op, lhs, rhs))
    }

    // ---- expressions -----------------------------------------------------

    fn nexp(&mut self) -> PResult<Expression> {
        let lhs = self.nfact()?;
        match self.peek() {
            // `+( float )` is the probabilistic choice operator, never
            // arithmetic; an action prefix always ends in `.` before any
            // process-level `+`, so this is the only collision.
            Tok::Plus if !self.at_prob_op() => {
                self.bump();
                let rhs = self.nexp()?;
                Ok(Expression::Arith(ArithOp::Add, Box::new(lhs), Box::new(rhs)))
            }
            Tok::Minus => {
                self.bump();
                let rhs = self.nexp()?;
                Ok(Expression::Arith(ArithOp::Sub, Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    fn nfact(&mut self) -> PResult<Expression> {
        let lhs = self.nterm()?;
        match self.peek() {
            Tok::Star => {
                self.bump();
                let rhs = self.nfact()?;
                Ok(Expression::Arith(ArithOp::Mul, Box::new(lhs), Box::new(rhs)))
            }
            Tok::Slash => {
                self.bump();
                let rhs = self.nfact()?;
                Ok(Expression::Arith(ArithOp::Div, Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    fn nterm(&mut self) -> PResult<Expression> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expression::NatLit(n))
            }
            Tok::Minus => {
                self.bump();
                Ok(Expression::Neg(Box::new(self.nterm()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.nexp()?;
                self.eat(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let here = self.here();
                self.bump();
                if *self.peek() == Tok::LBracket {
                    // admissible transformation applied to a qubit register
                    self.bump();
                    let mut qs = vec![self.ident()?];
                    while *self.peek() == Tok::Comma || *self.peek() == Tok::Star {
                        self.bump();
                        qs.push(self.ident()?);
                    }
                    self.eat(&Tok::RBracket)?;
                    let a = quantum::builtin(&name).map_err(|_| ParseError::Syntax {
                        pos: here,
                        msg: format!("unknown transformation `{name}`"),
                    })?;
                    if a.arity != qs.len() {
                        return Err(ParseError::Arity {
                            pos: here,
                            name,
                            expected: a.arity,
                            got: qs.len(),
                        });
                    }
                    Ok(Expression::Apply(name, qs))
                } else {
                    Ok(Expression::Var(name))
                }
            }
            other => Err(self.err(&format!("expected an expression, found {other}"))),
        }
    }
}

fn check_distinct_params(params: &[(String, VarType)]) -> PResult<()> {
    for (i, (n, _)) in params.iter().enumerate() {
        if params[i + 1..].iter().any(|(m, _)| m == n) {
            return Err(ParseError::Syntax {
                pos: Pos { line: 0, col: 0 },
                msg: format!("duplicate variable `{n}` in declaration"),
            });
        }
    }
    Ok(())
}

/// Parse a whole source file (a sequence of `Name := process` definitions).
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    p.program()
}

/// Parse a single process expression, e.g. a CLI entry point.
pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(src)?;
    let proc = p.process()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err(&format!("trailing input: {}", p.peek())));
    }
    Ok(proc)
}
