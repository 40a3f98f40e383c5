//! Elimination of sequential composition.
//!
//! `P ; Q` becomes `(P' || [v:Nat . d?v . Q']) \ {d}` for a fresh gate `d`,
//! where every `end` belonging to `P` becomes `d!0 . nil`. Termination
//! signals must also escape from *called* definitions: a call in the left
//! operand is redirected to a specialized copy of its definition whose free
//! `end`s (and calls, recursively) signal the same gate. Specializations are
//! cached per (definition, gate), so tail-recursive definitions reuse one
//! copy and the rewrite terminates.

use std::collections::BTreeMap;

use super::ast::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesugarError {
    #[error("call to undefined process `{0}`")]
    UndefinedProcess(String),
}

pub struct Desugared {
    pub definitions: BTreeMap<String, Definition>,
    pub entry: Option<Process>,
}

struct Ctx<'a> {
    source: &'a BTreeMap<String, Definition>,
    out: BTreeMap<String, Definition>,
    cache: BTreeMap<(String, Option<String>), String>,
    gate_counter: usize,
    var_counter: usize,
}

pub fn desugar_program(prog: &Program) -> Result<Desugared, DesugarError> {
    let mut ctx = Ctx {
        source: &prog.definitions,
        out: BTreeMap::new(),
        cache: BTreeMap::new(),
        gate_counter: next_free_index(prog),
        var_counter: 0,
    };
    for name in prog.definitions.keys() {
        ensure_def(&mut ctx, name, None)?;
    }
    let entry = match &prog.entry {
        Some(e) => Some(transform(&mut ctx, e, None)?),
        None => None,
    };
    Ok(Desugared {
        definitions: ctx.out,
        entry,
    })
}

/// Desugar a standalone process against already-desugared definitions.
pub fn desugar_entry(
    entry: &Process,
    source: &BTreeMap<String, Definition>,
    desugared: &mut BTreeMap<String, Definition>,
) -> Result<Process, DesugarError> {
    let mut ctx = Ctx {
        source,
        out: std::mem::take(desugared),
        cache: BTreeMap::new(),
        gate_counter: 0,
        var_counter: 0,
    };
    // rebuild the cache from the names already generated and keep fresh
    // gates disjoint from everything present
    for name in ctx.out.keys() {
        if let Some((base, gate)) = name.split_once("$e") {
            ctx.cache
                .insert((base.to_string(), Some(format!("$seq{gate}"))), name.clone());
        } else {
            ctx.cache.insert((name.clone(), None), name.clone());
        }
    }
    ctx.gate_counter = ctx
        .out
        .values()
        .map(|d| max_seq_index(&d.body))
        .max()
        .unwrap_or(0);
    let out = transform(&mut ctx, entry, None)?;
    *desugared = ctx.out;
    Ok(out)
}

fn next_free_index(prog: &Program) -> usize {
    prog.definitions
        .values()
        .map(|d| max_seq_index(&d.body))
        .chain(prog.entry.iter().map(max_seq_index))
        .max()
        .unwrap_or(0)
}

fn max_seq_index(p: &Process) -> usize {
    let mut max = 0usize;
    let mut scan_gate = |g: &str, max: &mut usize| {
        if let Some(rest) = g.strip_prefix("$seq") {
            if let Ok(n) = rest.parse::<usize>() {
                *max = (*max).max(n + 1);
            }
        }
    };
    match p {
        Process::Prefix(a, cont) => {
            match a {
                Action::Send(g, _) | Action::Receive(g, _) => scan_gate(g, &mut max),
                Action::Expr(_) => {}
            }
            max = max.max(max_seq_index(cont));
        }
        Process::VarDecl(_, b) => max = max.max(max_seq_index(b)),
        Process::Parallel(a, b) | Process::NondetChoice(a, b) | Process::Seq(a, b) => {
            max = max.max(max_seq_index(a)).max(max_seq_index(b))
        }
        Process::ProbChoice(bs) => {
            for (_, q) in bs {
                max = max.max(max_seq_index(q));
            }
        }
        Process::CondChoice(bs) => {
            for (_, q) in bs {
                max = max.max(max_seq_index(q));
            }
        }
        Process::Restrict(q, gates) => {
            for g in gates {
                scan_gate(g, &mut max);
            }
            max = max.max(max_seq_index(q));
        }
        _ => {}
    }
    max
}

fn ensure_def(ctx: &mut Ctx, name: &str, pending: Option<&str>) -> Result<String, DesugarError> {
    let key = (name.to_string(), pending.map(|s| s.to_string()));
    if let Some(n) = ctx.cache.get(&key) {
        return Ok(n.clone());
    }
    let def = ctx
        .source
        .get(name)
        .ok_or_else(|| DesugarError::UndefinedProcess(name.to_string()))?
        .clone();
    let new_name = match pending {
        None => name.to_string(),
        Some(gate) => format!("{name}$e{}", gate.trim_start_matches("$seq")),
    };
    // insert before transforming the body so recursion hits the cache
    ctx.cache.insert(key, new_name.clone());
    ctx.out.insert(
        new_name.clone(),
        Definition {
            params: def.params.clone(),
            body: Process::Nil,
        },
    );
    let body = transform(ctx, &def.body, pending)?;
    ctx.out.get_mut(&new_name).unwrap().body = body;
    Ok(new_name)
}

fn transform(ctx: &mut Ctx, p: &Process, pending: Option<&str>) -> Result<Process, DesugarError> {
    Ok(match p {
        Process::Nil => Process::Nil,
        Process::End => match pending {
            Some(gate) => Process::prefix(
                Action::Send(gate.to_string(), Expression::NatLit(0)),
                Process::Nil,
            ),
            None => Process::Nil,
        },
        Process::Seq(a, b) => {
            let gate = format!("$seq{}", ctx.gate_counter);
            ctx.gate_counter += 1;
            let var = format!("$sv{}", ctx.var_counter);
            ctx.var_counter += 1;
            let left = transform(ctx, a, Some(&gate))?;
            let right = transform(ctx, b, pending)?;
            let receiver = Process::VarDecl(
                vec![(var.clone(), VarType::Nat)],
                Box::new(Process::prefix(Action::Receive(gate.clone(), var), right)),
            );
            Process::Restrict(
                Box::new(Process::Parallel(Box::new(left), Box::new(receiver))),
                vec![gate],
            )
        }
        Process::Call(name, args) => {
            let target = ensure_def(ctx, name, pending)?;
            Process::Call(target, args.clone())
        }
        Process::Prefix(a, cont) => {
            Process::Prefix(a.clone(), Box::new(transform(ctx, cont, pending)?))
        }
        Process::VarDecl(decls, body) => {
            Process::VarDecl(decls.clone(), Box::new(transform(ctx, body, pending)?))
        }
        Process::Parallel(a, b) => Process::Parallel(
            Box::new(transform(ctx, a, pending)?),
            Box::new(transform(ctx, b, pending)?),
        ),
        Process::NondetChoice(a, b) => Process::NondetChoice(
            Box::new(transform(ctx, a, pending)?),
            Box::new(transform(ctx, b, pending)?),
        ),
        Process::ProbChoice(branches) => {
            let mut out = Vec::with_capacity(branches.len());
            for (w, q) in branches {
                out.push((*w, transform(ctx, q, pending)?));
            }
            Process::ProbChoice(out)
        }
        Process::CondChoice(branches) => {
            let mut out = Vec::with_capacity(branches.len());
            for (c, q) in branches {
                out.push((c.clone(), transform(ctx, q, pending)?));
            }
            Process::CondChoice(out)
        }
        Process::Restrict(q, gates) => {
            Process::Restrict(Box::new(transform(ctx, q, pending)?), gates.clone())
        }
    })
}
