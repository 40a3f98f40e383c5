//! Small-step operational semantics.
//!
//! A state with a probabilistic context resolves it first; nothing else
//! fires until the context is a single branch. Process-level probabilistic
//! choices likewise resolve before any action: under `+` and `||`, an
//! unstable operand contributes only probabilistic transitions (jointly,
//! with product probabilities, when both operands are unstable), so the
//! outgoing transitions of any state are either all probabilistic or all
//! actions.
//!
//! Reception is synchronizing by default: a receive prefix produces no
//! standalone transition unless the options supply a finite probe set, in
//! which case one reception per probe fires (the register gains the probe
//! state for qubit receives). This keeps graphs finite while letting tests
//! quantify over inputs at chosen points.

use std::collections::BTreeMap;

use crate::quantum::{self, CMat};
use crate::syntax::ast::*;
use crate::syntax::subst::rename_var;
use thiserror::Error;

use super::context::{Context, ProcessState, ScopeFrame};
use super::eval::{eval_condition, eval_expression, EvalError, EvalOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("call to undefined process `{0}`")]
    UnboundProcessName(String),
    #[error("receive into already-initialized qubit `{0}`")]
    QubitAlreadyInitialized(String),
    #[error("parallel branches both declare `{0}`")]
    SharedNameCollision(String),
    #[error("evaluation failed: {0}")]
    Eval(EvalError),
    #[error("internal: {0}")]
    Internal(String),
}

/// Reasons evaluation can make a rule inapplicable rather than fail the
/// whole step: the state simply has no transition from that redex.
fn is_soft(e: &EvalError) -> bool {
    matches!(
        e,
        EvalError::UnboundVariable(_) | EvalError::UninitializedQubit(_)
    )
}

#[derive(Debug, Clone, Default)]
pub struct StepOptions {
    /// Values offered to otherwise-unmatched classical receives.
    pub classical_probes: Vec<i64>,
    /// Named one-qubit states offered to otherwise-unmatched qubit receives.
    pub qubit_probes: Vec<(String, CMat)>,
    /// Optional bound on definition unfoldings along a run (used by the
    /// sampler to cut off unproductive recursion).
    pub unfold_limit: Option<usize>,
}

impl StepOptions {
    pub fn closed() -> Self {
        StepOptions::default()
    }

    pub fn with_tomo_probes() -> Self {
        StepOptions {
            classical_probes: Vec::new(),
            qubit_probes: quantum::tomo4(),
            unfold_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TauKind {
    Plain,
    /// Internal classical communication `gate: value`.
    Comm { gate: String, value: i64 },
    /// Internal qubit initialization (classical-to-quantum) or handover.
    QComm { gate: String },
    Unfold(String),
    Decl,
    Eval,
}

#[derive(Debug, Clone)]
pub enum Label {
    Tau(TauKind),
    SendVal {
        gate: String,
        value: i64,
    },
    /// Qubit emission; carries the sent qubit's reduced state at the moment
    /// of sending, which is what equivalence checking compares.
    SendQubit {
        gate: String,
        var: String,
        snapshot: CMat,
    },
    RecvVal {
        gate: String,
        value: i64,
    },
    /// Qubit reception from a probe; carries the received state.
    RecvQubit {
        gate: String,
        var: String,
        snapshot: CMat,
    },
}

impl Label {
    pub fn is_silent(&self) -> bool {
        matches!(self, Label::Tau(_))
    }

    pub fn gate(&self) -> Option<&str> {
        match self {
            Label::Tau(_) => None,
            Label::SendVal { gate, .. }
            | Label::SendQubit { gate, .. }
            | Label::RecvVal { gate, .. }
            | Label::RecvQubit { gate, .. } => Some(gate),
        }
    }

    /// Rendering used by exports; internal detail is kept out of it.
    pub fn display(&self) -> String {
        match self {
            Label::Tau(_) => "tau".to_string(),
            Label::SendVal { gate, value } => format!("{gate}!{value}"),
            Label::SendQubit { gate, var, .. } => {
                format!("{gate}!{}", Context::display_name(var))
            }
            Label::RecvVal { gate, value } => format!("{gate}?{value}"),
            Label::RecvQubit { gate, var, .. } => {
                format!("{gate}?{}", Context::display_name(var))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum TransKind {
    Act(Label),
    Prob(f64),
}

#[derive(Debug, Clone)]
pub struct Transition {
    pub kind: TransKind,
    pub target: ProcessState,
}

/// An unmatched receive the state is offering.
#[derive(Debug, Clone)]
pub struct OpenReceive {
    pub gate: String,
    pub var: String,
    pub ty: VarType,
}

#[derive(Debug, Default)]
pub struct StepOutcome {
    pub transitions: Vec<Transition>,
    /// Receives that found neither a partner nor a probe.
    pub open_receives: Vec<OpenReceive>,
    /// Redexes whose rule premises could not be satisfied.
    pub stuck: Vec<String>,
}

/// Term-level probabilistic stability.
pub fn is_stable(p: &Process) -> bool {
    match p {
        Process::Nil
        | Process::End
        | Process::Prefix(_, _)
        | Process::VarDecl(_, _)
        | Process::Call(_, _) => true,
        Process::Restrict(q, _) => is_stable(q),
        Process::Parallel(a, b) | Process::NondetChoice(a, b) | Process::Seq(a, b) => {
            is_stable(a) && is_stable(b)
        }
        Process::CondChoice(branches) => branches.iter().all(|(_, q)| is_stable(q)),
        Process::ProbChoice(_) => false,
    }
}

struct LocalTrans {
    kind: TransKind,
    process: Process,
    ctxs: Vec<(f64, Context)>,
}

struct RecvCap {
    gate: String,
    var: String,
    ty: VarType,
    cont: Process,
}

#[derive(Default)]
struct Local {
    trans: Vec<LocalTrans>,
    caps: Vec<RecvCap>,
}

/// All transitions of a state.
pub fn step(
    state: &ProcessState,
    defs: &BTreeMap<String, Definition>,
    opts: &StepOptions,
) -> Result<StepOutcome, StepError> {
    let mut out = StepOutcome::default();
    // an unstable context resolves before anything else
    if !state.is_context_stable() {
        for (p, ctx) in &state.contexts {
            out.transitions.push(Transition {
                kind: TransKind::Prob(*p),
                target: ProcessState::new(state.process.clone(), ctx.clone()),
            });
        }
        return Ok(out);
    }
    let ctx = state.single_context();
    let mut path = Vec::new();
    let local = step_term(&state.process, ctx, &mut path, defs, &mut out.stuck)?;

    for lt in local.trans {
        out.transitions.push(Transition {
            kind: lt.kind,
            target: ProcessState {
                process: lt.process,
                contexts: lt.ctxs,
            },
        });
    }

    // offer probes to surviving open receives
    for cap in local.caps {
        let mut matched = false;
        match cap.ty {
            VarType::Nat => {
                for v in &opts.classical_probes {
                    matched = true;
                    let mut c2 = ctx.clone();
                    c2.f.insert(cap.var.clone(), *v);
                    out.transitions.push(Transition {
                        kind: TransKind::Act(Label::RecvVal {
                            gate: cap.gate.clone(),
                            value: *v,
                        }),
                        target: ProcessState::new(cap.cont.clone(), c2),
                    });
                }
            }
            VarType::Qubit => {
                if !opts.qubit_probes.is_empty() && ctx.q.iter().any(|n| n == &cap.var) {
                    return Err(StepError::QubitAlreadyInitialized(
                        Context::display_name(&cap.var).to_string(),
                    ));
                }
                for (_, nu) in &opts.qubit_probes {
                    matched = true;
                    let mut c2 = ctx.clone();
                    c2.q.insert(0, cap.var.clone());
                    c2.rho = quantum::tensor_prepend(nu, &c2.rho)
                        .map_err(|e| StepError::Eval(EvalError::Quantum(e)))?;
                    out.transitions.push(Transition {
                        kind: TransKind::Act(Label::RecvQubit {
                            gate: cap.gate.clone(),
                            var: cap.var.clone(),
                            snapshot: nu.clone(),
                        }),
                        target: ProcessState::new(cap.cont.clone(), c2),
                    });
                }
            }
        }
        if !matched {
            out.open_receives.push(OpenReceive {
                gate: cap.gate,
                var: cap.var,
                ty: cap.ty,
            });
        }
    }
    Ok(out)
}

fn step_term(
    p: &Process,
    ctx: &Context,
    path: &mut Vec<bool>,
    defs: &BTreeMap<String, Definition>,
    stuck: &mut Vec<String>,
) -> Result<Local, StepError> {
    match p {
        Process::Nil => Ok(Local::default()),
        Process::End | Process::Seq(_, _) => Err(StepError::Internal(
            "sequential composition must be desugared before stepping".into(),
        )),
        Process::Prefix(action, cont) => step_prefix(action, cont, ctx, path, stuck),
        Process::VarDecl(decls, body) => step_decl(decls, body, ctx, path),
        Process::Call(name, args) => step_call(name, args, ctx, defs),
        Process::ProbChoice(branches) => Ok(Local {
            trans: branches
                .iter()
                .map(|(w, q)| LocalTrans {
                    kind: TransKind::Prob(*w),
                    process: q.clone(),
                    ctxs: vec![(1.0, ctx.clone())],
                })
                .collect(),
            caps: Vec::new(),
        }),
        Process::CondChoice(branches) => {
            let mut live = Vec::new();
            for (c, q) in branches {
                match eval_condition(c, ctx) {
                    Ok(true) => live.push(q.clone()),
                    Ok(false) => {}
                    Err(e) if is_soft(&e) => {
                        stuck.push(format!("condition undecidable: {e}"));
                    }
                    Err(e) => return Err(StepError::Eval(e)),
                }
            }
            match live.len() {
                0 => Ok(Local::default()),
                1 => step_term(&live[0], ctx, path, defs, stuck),
                _ => {
                    // behaves as the nondeterministic sum of the live branches
                    let mut fold = live.remove(0);
                    for q in live {
                        fold = Process::NondetChoice(Box::new(fold), Box::new(q));
                    }
                    step_term(&fold, ctx, path, defs, stuck)
                }
            }
        }
        Process::NondetChoice(a, b) => {
            let sa = is_stable(a);
            let sb = is_stable(b);
            let mut out = Local::default();
            if sa && sb {
                let la = step_term(a, ctx, path, defs, stuck)?;
                let lb = step_term(b, ctx, path, defs, stuck)?;
                // either side resolves the choice
                out.trans.extend(la.trans);
                out.trans.extend(lb.trans);
                out.caps.extend(la.caps);
                out.caps.extend(lb.caps);
            } else if !sa && sb {
                let la = step_term(a, ctx, path, defs, stuck)?;
                for t in la.trans {
                    let w = prob_of(&t)?;
                    out.trans.push(LocalTrans {
                        kind: TransKind::Prob(w),
                        process: Process::NondetChoice(Box::new(t.process), b.clone()),
                        ctxs: t.ctxs,
                    });
                }
            } else if sa && !sb {
                let lb = step_term(b, ctx, path, defs, stuck)?;
                for t in lb.trans {
                    let w = prob_of(&t)?;
                    out.trans.push(LocalTrans {
                        kind: TransKind::Prob(w),
                        process: Process::NondetChoice(a.clone(), Box::new(t.process)),
                        ctxs: t.ctxs,
                    });
                }
            } else {
                // joint resolution with product probabilities
                let la = step_term(a, ctx, path, defs, stuck)?;
                let lb = step_term(b, ctx, path, defs, stuck)?;
                for ta in &la.trans {
                    for tb in &lb.trans {
                        let w = prob_of(ta)? * prob_of(tb)?;
                        out.trans.push(LocalTrans {
                            kind: TransKind::Prob(w),
                            process: Process::NondetChoice(
                                Box::new(ta.process.clone()),
                                Box::new(tb.process.clone()),
                            ),
                            ctxs: vec![(1.0, ctx.clone())],
                        });
                    }
                }
            }
            Ok(out)
        }
        Process::Parallel(a, b) => step_parallel(a, b, ctx, path, defs, stuck),
        Process::Restrict(q, gates) => {
            let inner = step_term(q, ctx, path, defs, stuck)?;
            let mut out = Local::default();
            for t in inner.trans {
                if let TransKind::Act(label) = &t.kind {
                    if let Some(g) = label.gate() {
                        if gates.iter().any(|x| x == g) {
                            continue;
                        }
                    }
                }
                out.trans.push(LocalTrans {
                    kind: t.kind,
                    process: Process::Restrict(Box::new(t.process), gates.clone()),
                    ctxs: t.ctxs,
                });
            }
            for cap in inner.caps {
                if gates.iter().any(|x| x == &cap.gate) {
                    continue;
                }
                out.caps.push(RecvCap {
                    cont: Process::Restrict(Box::new(cap.cont), gates.clone()),
                    ..cap
                });
            }
            Ok(out)
        }
    }
}

fn prob_of(t: &LocalTrans) -> Result<f64, StepError> {
    match t.kind {
        TransKind::Prob(p) => Ok(p),
        TransKind::Act(_) => Err(StepError::Internal(
            "action transition from an unstable operand".into(),
        )),
    }
}

fn step_prefix(
    action: &Action,
    cont: &Process,
    ctx: &Context,
    path: &mut Vec<bool>,
    stuck: &mut Vec<String>,
) -> Result<Local, StepError> {
    let mut out = Local::default();
    match action {
        Action::Receive(gate, var) => {
            let ty = match ctx.var_type(var) {
                Some(t) => t,
                None => {
                    stuck.push(format!(
                        "receive into undeclared variable `{}`",
                        Context::display_name(var)
                    ));
                    return Ok(out);
                }
            };
            out.caps.push(RecvCap {
                gate: gate.clone(),
                var: var.clone(),
                ty,
                cont: cont.clone(),
            });
        }
        Action::Send(gate, payload) => match eval_expression(payload, ctx, path) {
            Ok(EvalOutcome::QubitRef(x)) => {
                let snapshot = ctx
                    .qubit_state(&x)
                    .map_err(|e| StepError::Eval(EvalError::Quantum(e)))?;
                out.trans.push(LocalTrans {
                    kind: TransKind::Act(Label::SendQubit {
                        gate: gate.clone(),
                        var: x,
                        snapshot,
                    }),
                    process: cont.clone(),
                    ctxs: vec![(1.0, ctx.clone())],
                });
            }
            Ok(EvalOutcome::Value(v)) => {
                out.trans.push(LocalTrans {
                    kind: TransKind::Act(Label::SendVal {
                        gate: gate.clone(),
                        value: v,
                    }),
                    process: cont.clone(),
                    ctxs: vec![(1.0, ctx.clone())],
                });
            }
            Ok(EvalOutcome::Measured {
                rewritten,
                branches,
            }) => {
                out.trans.push(LocalTrans {
                    kind: TransKind::Act(Label::Tau(TauKind::Eval)),
                    process: Process::prefix(
                        Action::Send(gate.clone(), rewritten),
                        cont.clone(),
                    ),
                    ctxs: branches,
                });
            }
            Err(e) if is_soft(&e) => stuck.push(format!("send blocked: {e}")),
            Err(e) => return Err(StepError::Eval(e)),
        },
        Action::Expr(e) => match eval_expression(e, ctx, path) {
            Ok(EvalOutcome::Value(_)) => {
                out.trans.push(LocalTrans {
                    kind: TransKind::Act(Label::Tau(TauKind::Eval)),
                    process: cont.clone(),
                    ctxs: vec![(1.0, ctx.clone())],
                });
            }
            Ok(EvalOutcome::QubitRef(x)) => {
                stuck.push(format!(
                    "qubit `{}` is not a value",
                    Context::display_name(&x)
                ));
            }
            Ok(EvalOutcome::Measured {
                rewritten,
                branches,
            }) => {
                out.trans.push(LocalTrans {
                    kind: TransKind::Act(Label::Tau(TauKind::Eval)),
                    process: Process::prefix(Action::Expr(rewritten), cont.clone()),
                    ctxs: branches,
                });
            }
            Err(e) if is_soft(&e) => stuck.push(format!("expression blocked: {e}")),
            Err(e) => return Err(StepError::Eval(e)),
        },
    }
    Ok(out)
}

fn step_decl(
    decls: &[(String, VarType)],
    body: &Process,
    ctx: &Context,
    path: &mut Vec<bool>,
) -> Result<Local, StepError> {
    // parallel siblings may not both declare one user name
    for (user, _) in decls {
        for frame in &ctx.scopes {
            let diverges = !is_prefix(&frame.par_path, path) && !is_prefix(path, &frame.par_path);
            if diverges
                && frame
                    .entries
                    .iter()
                    .any(|(u, _, _)| u == user && !u.starts_with('$'))
            {
                return Err(StepError::SharedNameCollision(user.clone()));
            }
        }
    }
    let mut c2 = ctx.clone();
    let mut body2 = body.clone();
    let mut entries = Vec::with_capacity(decls.len());
    for (user, ty) in decls {
        let runtime = format!("{user}#{}", c2.fresh_suffix());
        body2 = rename_var(&body2, user, &runtime);
        entries.push((user.clone(), runtime, *ty));
    }
    c2.scopes.push(ScopeFrame {
        par_path: path.clone(),
        entries,
    });
    Ok(Local {
        trans: vec![LocalTrans {
            kind: TransKind::Act(Label::Tau(TauKind::Decl)),
            process: body2,
            ctxs: vec![(1.0, c2)],
        }],
        caps: Vec::new(),
    })
}

fn step_call(
    name: &str,
    args: &[String],
    ctx: &Context,
    defs: &BTreeMap<String, Definition>,
) -> Result<Local, StepError> {
    let def = defs
        .get(name)
        .ok_or_else(|| StepError::UnboundProcessName(name.to_string()))?;
    if def.params.len() != args.len() {
        return Err(StepError::Internal(format!(
            "`{name}` takes {} argument(s), got {}",
            def.params.len(),
            args.len()
        )));
    }
    // simultaneous substitution: params to placeholders, then to arguments
    let mut body = def.body.clone();
    let placeholders: Vec<String> = (0..args.len()).map(|i| format!("$p{i}")).collect();
    for ((param, _), ph) in def.params.iter().zip(placeholders.iter()) {
        body = rename_var(&body, param, ph);
    }
    for (ph, arg) in placeholders.iter().zip(args.iter()) {
        body = rename_var(&body, ph, arg);
    }
    Ok(Local {
        trans: vec![LocalTrans {
            kind: TransKind::Act(Label::Tau(TauKind::Unfold(name.to_string()))),
            process: body,
            ctxs: vec![(1.0, ctx.clone())],
        }],
        caps: Vec::new(),
    })
}

fn step_parallel(
    a: &Process,
    b: &Process,
    ctx: &Context,
    path: &mut Vec<bool>,
    defs: &BTreeMap<String, Definition>,
    stuck: &mut Vec<String>,
) -> Result<Local, StepError> {
    let sa = is_stable(a);
    let sb = is_stable(b);
    let mut out = Local::default();
    if sa && sb {
        path.push(false);
        let la = step_term(a, ctx, path, defs, stuck)?;
        path.pop();
        path.push(true);
        let lb = step_term(b, ctx, path, defs, stuck)?;
        path.pop();
        // interleaving
        for t in &la.trans {
            out.trans.push(LocalTrans {
                kind: t.kind.clone(),
                process: Process::Parallel(Box::new(t.process.clone()), Box::new(b.clone())),
                ctxs: t.ctxs.clone(),
            });
        }
        for t in &lb.trans {
            out.trans.push(LocalTrans {
                kind: t.kind.clone(),
                process: Process::Parallel(Box::new(a.clone()), Box::new(t.process.clone())),
                ctxs: t.ctxs.clone(),
            });
        }
        // synchronization
        sync_pairs(&la.trans, &lb.caps, true, ctx, &mut out, stuck)?;
        sync_pairs(&lb.trans, &la.caps, false, ctx, &mut out, stuck)?;
        for cap in la.caps {
            out.caps.push(RecvCap {
                cont: Process::Parallel(Box::new(cap.cont), Box::new(b.clone())),
                ..cap
            });
        }
        for cap in lb.caps {
            out.caps.push(RecvCap {
                cont: Process::Parallel(Box::new(a.clone()), Box::new(cap.cont)),
                ..cap
            });
        }
    } else if !sa && sb {
        path.push(false);
        let la = step_term(a, ctx, path, defs, stuck)?;
        path.pop();
        for t in la.trans {
            let w = prob_of(&t)?;
            out.trans.push(LocalTrans {
                kind: TransKind::Prob(w),
                process: Process::Parallel(Box::new(t.process), Box::new(b.clone())),
                ctxs: t.ctxs,
            });
        }
    } else if sa && !sb {
        path.push(true);
        let lb = step_term(b, ctx, path, defs, stuck)?;
        path.pop();
        for t in lb.trans {
            let w = prob_of(&t)?;
            out.trans.push(LocalTrans {
                kind: TransKind::Prob(w),
                process: Process::Parallel(Box::new(a.clone()), Box::new(t.process)),
                ctxs: t.ctxs,
            });
        }
    } else {
        path.push(false);
        let la = step_term(a, ctx, path, defs, stuck)?;
        path.pop();
        path.push(true);
        let lb = step_term(b, ctx, path, defs, stuck)?;
        path.pop();
        for ta in &la.trans {
            for tb in &lb.trans {
                let w = prob_of(ta)? * prob_of(tb)?;
                out.trans.push(LocalTrans {
                    kind: TransKind::Prob(w),
                    process: Process::Parallel(
                        Box::new(ta.process.clone()),
                        Box::new(tb.process.clone()),
                    ),
                    ctxs: vec![(1.0, ctx.clone())],
                });
            }
        }
    }
    Ok(out)
}

/// Combine sender transitions of one branch with receive offers of the
/// other into internal communications.
fn sync_pairs(
    sends: &[LocalTrans],
    caps: &[RecvCap],
    sender_is_left: bool,
    ctx: &Context,
    out: &mut Local,
    stuck: &mut Vec<String>,
) -> Result<(), StepError> {
    for t in sends {
        let label = match &t.kind {
            TransKind::Act(l) => l,
            TransKind::Prob(_) => continue,
        };
        for cap in caps {
            match (label, cap.ty) {
                (Label::SendVal { gate, value }, VarType::Nat) if gate == &cap.gate => {
                    let mut c2 = ctx.clone();
                    c2.f.insert(cap.var.clone(), *value);
                    push_sync(
                        out,
                        Label::Tau(TauKind::Comm {
                            gate: gate.clone(),
                            value: *value,
                        }),
                        &t.process,
                        &cap.cont,
                        sender_is_left,
                        c2,
                    );
                }
                (Label::SendVal { gate, value }, VarType::Qubit) if gate == &cap.gate => {
                    // classical-to-quantum initialization, basis values only
                    if *value != 0 && *value != 1 {
                        stuck.push(format!(
                            "gate {gate}: cannot initialize a qubit from value {value}"
                        ));
                        continue;
                    }
                    if ctx.q.iter().any(|n| n == &cap.var) {
                        return Err(StepError::QubitAlreadyInitialized(
                            Context::display_name(&cap.var).to_string(),
                        ));
                    }
                    let mut c2 = ctx.clone();
                    c2.q.insert(0, cap.var.clone());
                    let nu = if *value == 0 {
                        quantum::named_state("0").unwrap()
                    } else {
                        quantum::named_state("1").unwrap()
                    };
                    c2.rho = quantum::tensor_prepend(&nu, &c2.rho)
                        .map_err(|e| StepError::Eval(EvalError::Quantum(e)))?;
                    push_sync(
                        out,
                        Label::Tau(TauKind::QComm { gate: gate.clone() }),
                        &t.process,
                        &cap.cont,
                        sender_is_left,
                        c2,
                    );
                }
                (Label::SendQubit { gate, var, .. }, VarType::Qubit) if gate == &cap.gate => {
                    if ctx.q.iter().any(|n| n == &cap.var) {
                        return Err(StepError::QubitAlreadyInitialized(
                            Context::display_name(&cap.var).to_string(),
                        ));
                    }
                    // hand the qubit over: the register renames it and the
                    // sender's variable goes out of scope
                    let mut c2 = ctx.clone();
                    for n in c2.q.iter_mut() {
                        if n == var {
                            *n = cap.var.clone();
                        }
                    }
                    for frame in c2.scopes.iter_mut() {
                        frame.entries.retain(|(_, rt, _)| rt != var);
                    }
                    push_sync(
                        out,
                        Label::Tau(TauKind::QComm { gate: gate.clone() }),
                        &t.process,
                        &cap.cont,
                        sender_is_left,
                        c2,
                    );
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn push_sync(
    out: &mut Local,
    label: Label,
    sender_proc: &Process,
    recv_cont: &Process,
    sender_is_left: bool,
    ctx: Context,
) {
    let process = if sender_is_left {
        Process::Parallel(Box::new(sender_proc.clone()), Box::new(recv_cont.clone()))
    } else {
        Process::Parallel(Box::new(recv_cont.clone()), Box::new(sender_proc.clone()))
    };
    out.trans.push(LocalTrans {
        kind: TransKind::Act(label),
        process,
        ctxs: vec![(1.0, ctx)],
    });
}

fn is_prefix(shorter: &[bool], longer: &[bool]) -> bool {
    shorter.len() <= longer.len() && shorter.iter().zip(longer.iter()).all(|(a, b)| a == b)
}
