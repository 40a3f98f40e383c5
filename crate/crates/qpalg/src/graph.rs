//! Exhaustive reachability: builds a finite process graph from an initial
//! state by breadth-first exploration with canonical-key deduplication.
//!
//! Canonical keys rename bound and fresh variables in first-occurrence
//! order, restrict the context to the variables the residual term can still
//! reach (dead register qubits are traced out, which is observationally
//! sound because no later action can involve them), normalize the register
//! order and round matrix entries to six decimal digits. The rounding grid
//! is deliberately coarser than the numeric comparison tolerance used
//! elsewhere so states equal within tolerance collide.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{self, CMat};
use crate::semantics::{
    step, Context, Label, ProcessState, StepError, StepOptions, TransKind,
};
use crate::syntax::ast::*;
use crate::syntax::print_process;

pub const DEFAULT_MAX_NODES: usize = 100_000;
/// Digits kept in canonical keys; 10^-6 is coarser than the 1e-9 tolerance.
const KEY_DIGITS: usize = 6;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("state space exceeded {0} nodes")]
    StateSpaceOverflow(usize),
    #[error(transparent)]
    Step(#[from] StepError),
}

#[derive(Debug, Clone)]
pub struct GraphNode {
    pub state: ProcessState,
    pub key: String,
    pub out_edges: Vec<usize>,
    /// The state offers a reception that neither synchronized nor had probes.
    pub has_open_receive: bool,
    pub stuck_notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub kind: TransKind,
}

impl GraphEdge {
    pub fn is_silent(&self) -> bool {
        match &self.kind {
            TransKind::Prob(_) => true,
            TransKind::Act(l) => l.is_silent(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProcessGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub initial: usize,
}

impl ProcessGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Terminal nodes (no outgoing transitions).
    pub fn terminals(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].out_edges.is_empty())
            .collect()
    }
}

fn round_key(x: f64) -> String {
    let r = format!("{:.*}", KEY_DIGITS, x);
    // avoid the two zero representations
    if r.starts_with("-0.") && r[1..].chars().all(|c| c == '0' || c == '.') {
        r[1..].to_string()
    } else {
        r
    }
}

fn mat_key(m: &CMat) -> String {
    let mut s = String::new();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let v = m[(i, j)];
            s.push_str(&round_key(v.re));
            s.push(',');
            s.push_str(&round_key(v.im));
            s.push(';');
        }
    }
    s
}

/// Key of a transition label; qubit payloads compare by rounded reduced
/// state, not by variable name.
pub fn label_key(label: &Label) -> String {
    match label {
        Label::Tau(_) => "tau".to_string(),
        Label::SendVal { gate, value } => format!("snd:{gate}:{value}"),
        Label::SendQubit { gate, snapshot, .. } => {
            format!("sndq:{gate}:{}", mat_key(snapshot))
        }
        Label::RecvVal { gate, value } => format!("rcv:{gate}:{value}"),
        Label::RecvQubit { gate, snapshot, .. } => {
            format!("rcvq:{gate}:{}", mat_key(snapshot))
        }
    }
}

struct Renamer {
    map: BTreeMap<String, usize>,
}

impl Renamer {
    fn new() -> Self {
        Renamer {
            map: BTreeMap::new(),
        }
    }
    fn index(&mut self, name: &str) -> usize {
        let next = self.map.len();
        *self.map.entry(name.to_string()).or_insert(next)
    }
}

fn expr_key(e: &Expression, r: &mut Renamer, out: &mut String) {
    match e {
        Expression::NatLit(n) => out.push_str(&format!("n{n}")),
        Expression::Var(x) => out.push_str(&format!("v{}", r.index(x))),
        Expression::Arith(op, a, b) => {
            out.push_str(match op {
                ArithOp::Add => "(+",
                ArithOp::Sub => "(-",
                ArithOp::Mul => "(*",
                ArithOp::Div => "(/",
            });
            expr_key(a, r, out);
            out.push(' ');
            expr_key(b, r, out);
            out.push(')');
        }
        Expression::Neg(a) => {
            out.push_str("(neg ");
            expr_key(a, r, out);
            out.push(')');
        }
        Expression::Apply(name, xs) => {
            out.push_str(&format!("(app {name}"));
            for x in xs {
                out.push_str(&format!(" v{}", r.index(x)));
            }
            out.push(')');
        }
    }
}

fn cond_key(c: &Condition, r: &mut Renamer, out: &mut String) {
    match c {
        Condition::Cmp(op, a, b) => {
            out.push_str(match op {
                CmpOp::Eq => "(= ",
                CmpOp::Lt => "(< ",
            });
            expr_key(a, r, out);
            out.push(' ');
            expr_key(b, r, out);
            out.push(')');
        }
        Condition::And(a, b) => {
            out.push_str("(and ");
            cond_key(a, r, out);
            cond_key(b, r, out);
            out.push(')');
        }
        Condition::Or(a, b) => {
            out.push_str("(or ");
            cond_key(a, r, out);
            cond_key(b, r, out);
            out.push(')');
        }
        Condition::Not(a) => {
            out.push_str("(not ");
            cond_key(a, r, out);
            out.push(')');
        }
    }
}

fn process_key(p: &Process, r: &mut Renamer, out: &mut String) {
    match p {
        Process::Nil => out.push('0'),
        Process::End => out.push('E'),
        Process::Prefix(a, cont) => {
            match a {
                Action::Send(g, e) => {
                    out.push_str(&format!("({g}! "));
                    expr_key(e, r, out);
                }
                Action::Receive(g, x) => {
                    out.push_str(&format!("({g}? v{}", r.index(x)));
                }
                Action::Expr(e) => {
                    out.push_str("(e ");
                    expr_key(e, r, out);
                }
            }
            out.push('.');
            process_key(cont, r, out);
            out.push(')');
        }
        Process::VarDecl(decls, body) => {
            out.push_str("(d");
            for (n, t) in decls {
                out.push_str(&format!(
                    " v{}{}",
                    r.index(n),
                    if *t == VarType::Nat { "N" } else { "Q" }
                ));
            }
            out.push('.');
            process_key(body, r, out);
            out.push(')');
        }
        Process::Parallel(a, b) => {
            out.push_str("(| ");
            process_key(a, r, out);
            out.push(' ');
            process_key(b, r, out);
            out.push(')');
        }
        Process::NondetChoice(a, b) => {
            out.push_str("(+ ");
            process_key(a, r, out);
            out.push(' ');
            process_key(b, r, out);
            out.push(')');
        }
        Process::ProbChoice(branches) => {
            out.push_str("(p");
            for (w, q) in branches {
                out.push_str(&format!(" {}:", round_key(*w)));
                process_key(q, r, out);
            }
            out.push(')');
        }
        Process::CondChoice(branches) => {
            out.push_str("(c");
            for (c, q) in branches {
                out.push(' ');
                cond_key(c, r, out);
                out.push_str("->");
                process_key(q, r, out);
            }
            out.push(')');
        }
        Process::Restrict(q, gates) => {
            out.push_str("(r ");
            process_key(q, r, out);
            out.push_str(" {");
            out.push_str(&gates.join(","));
            out.push_str("})");
        }
        Process::Call(name, args) => {
            out.push_str(&format!("({name}"));
            for a in args {
                out.push_str(&format!(" v{}", r.index(a)));
            }
            out.push(')');
        }
        Process::Seq(a, b) => {
            out.push_str("(; ");
            process_key(a, r, out);
            out.push(' ');
            process_key(b, r, out);
            out.push(')');
        }
    }
}

fn context_key(ctx: &Context, live: &[String], r: &mut Renamer) -> String {
    let mut out = String::new();
    // classical store and uninitialized variables, in renaming order
    let mut live_sorted: Vec<&String> = live.iter().collect();
    live_sorted.sort_by_key(|n| r.map.get(*n).copied().unwrap_or(usize::MAX));
    for name in &live_sorted {
        if let Some(v) = ctx.f.get(*name) {
            out.push_str(&format!("v{}={v};", r.index(name)));
        } else if !ctx.q.iter().any(|n| n == *name) {
            let ty = match ctx.var_type(name) {
                Some(VarType::Nat) => "N",
                Some(VarType::Qubit) => "Q",
                None => "?",
            };
            out.push_str(&format!("v{}:{ty};", r.index(name)));
        }
    }
    // live register part, normalized to renaming order
    let live_q: Vec<String> = ctx
        .q
        .iter()
        .filter(|n| live.iter().any(|l| l == *n))
        .cloned()
        .collect();
    if live_q.is_empty() {
        out.push_str("q[]");
        return out;
    }
    let mut keep = live_q.clone();
    keep.sort_by_key(|n| r.map.get(n).copied().unwrap_or(usize::MAX));
    let reduced = quantum::partial_trace(&ctx.q, &ctx.rho, &keep)
        .expect("live register names are present");
    out.push_str("q[");
    for n in &keep {
        out.push_str(&format!("v{},", r.index(n)));
    }
    out.push(']');
    out.push_str(&mat_key(&reduced));
    out
}

/// Canonical key of a state: alpha-equivalent states whose live context
/// parts agree within the rounding grid map to the same key.
pub fn canonical_key(state: &ProcessState) -> String {
    let mut r = Renamer::new();
    let mut term = String::new();
    process_key(&state.process, &mut r, &mut term);
    let live = state.process.free_vars();
    if state.contexts.len() == 1 {
        let ck = context_key(&state.contexts[0].1, &live, &mut r);
        format!("S|{term}|{ck}")
    } else {
        let mut parts: Vec<String> = state
            .contexts
            .iter()
            .map(|(p, c)| {
                let mut r2 = Renamer {
                    map: r.map.clone(),
                };
                format!("{}@{}", round_key(*p), context_key(c, &live, &mut r2))
            })
            .collect();
        parts.sort();
        format!("P|{term}|{}", parts.join("&"))
    }
}

/// Breadth-first construction of the reachable graph.
pub fn build_graph(
    initial: ProcessState,
    defs: &BTreeMap<String, Definition>,
    opts: &StepOptions,
    max_nodes: usize,
) -> Result<ProcessGraph, GraphError> {
    let mut nodes: Vec<GraphNode> = Vec::new();
    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();

    let key0 = canonical_key(&initial);
    nodes.push(GraphNode {
        state: initial,
        key: key0.clone(),
        out_edges: Vec::new(),
        has_open_receive: false,
        stuck_notes: Vec::new(),
    });
    index.insert(key0, 0);

    let mut frontier = std::collections::VecDeque::from([0usize]);
    while let Some(id) = frontier.pop_front() {
        let out = step(&nodes[id].state, defs, opts)?;
        nodes[id].has_open_receive = !out.open_receives.is_empty();
        nodes[id].stuck_notes = out.stuck;

        // deterministic edge order: kind, label, then target key
        let mut sortable: Vec<(String, TransKind, ProcessState, String)> = out
            .transitions
            .into_iter()
            .map(|t| {
                let tkey = canonical_key(&t.target);
                let skey = match &t.kind {
                    TransKind::Prob(p) => format!("1p{}", round_key(*p)),
                    TransKind::Act(l) => format!("0a{}", label_key(l)),
                };
                (skey, t.kind, t.target, tkey)
            })
            .collect();
        sortable.sort_by(|a, b| (&a.0, &a.3).cmp(&(&b.0, &b.3)));

        for (_, kind, target, tkey) in sortable {
            let to = match index.get(&tkey) {
                Some(&i) => i,
                None => {
                    if nodes.len() >= max_nodes {
                        return Err(GraphError::StateSpaceOverflow(max_nodes));
                    }
                    let i = nodes.len();
                    nodes.push(GraphNode {
                        state: target,
                        key: tkey.clone(),
                        out_edges: Vec::new(),
                        has_open_receive: false,
                        stuck_notes: Vec::new(),
                    });
                    index.insert(tkey, i);
                    frontier.push_back(i);
                    i
                }
            };
            let eid = edges.len();
            edges.push(GraphEdge { from: id, to, kind });
            nodes[id].out_edges.push(eid);
        }
    }
    Ok(ProcessGraph {
        nodes,
        edges,
        initial: 0,
    })
}

// ---- export ---------------------------------------------------------------

fn edge_label(kind: &TransKind) -> (String, Option<f64>) {
    match kind {
        TransKind::Prob(p) => (format!("p={p}"), Some(*p)),
        TransKind::Act(l) => (l.display(), None),
    }
}

pub fn export_dot(g: &ProcessGraph) -> String {
    let mut out = String::from("digraph process_graph {\n");
    out.push_str("  rankdir=TB;\n");
    for (i, n) in g.nodes.iter().enumerate() {
        let mut label = print_process(&n.state.process);
        if label.len() > 60 {
            label.truncate(57);
            label.push_str("...");
        }
        let label = label.replace('\\', "\\\\").replace('"', "\\\"");
        let shape = if i == g.initial {
            ", shape=doublecircle"
        } else {
            ""
        };
        out.push_str(&format!("  n{i} [label=\"{i}: {label}\"{shape}];\n"));
    }
    for e in &g.edges {
        let (label, _) = edge_label(&e.kind);
        out.push_str(&format!(
            "  n{} -> n{} [label=\"{}\"];\n",
            e.from, e.to, label
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonContext {
    pub prob: f64,
    pub qubits: Vec<String>,
    pub rho: Vec<Vec<[f64; 2]>>,
    pub store: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonNode {
    pub id: usize,
    pub process: String,
    pub context: Vec<JsonContext>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub open_receive: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonEdge {
    pub from: usize,
    pub to: usize,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prob: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JsonGraph {
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<JsonEdge>,
    pub initial: usize,
}

fn context_json(p: f64, ctx: &Context) -> JsonContext {
    let dim = ctx.rho.dim();
    let mut rho = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            let v = ctx.rho[(i, j)];
            row.push([v.re, v.im]);
        }
        rho.push(row);
    }
    JsonContext {
        prob: p,
        qubits: ctx
            .q
            .iter()
            .map(|n| Context::display_name(n).to_string())
            .collect(),
        rho,
        store: ctx
            .f
            .iter()
            .map(|(k, v)| (Context::display_name(k).to_string(), *v))
            .collect(),
    }
}

pub fn to_json_graph(g: &ProcessGraph) -> JsonGraph {
    JsonGraph {
        nodes: g
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| JsonNode {
                id: i,
                process: print_process(&n.state.process),
                context: n
                    .state
                    .contexts
                    .iter()
                    .map(|(p, c)| context_json(*p, c))
                    .collect(),
                open_receive: n.has_open_receive,
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| {
                let (label, prob) = edge_label(&e.kind);
                JsonEdge {
                    from: e.from,
                    to: e.to,
                    label,
                    prob,
                }
            })
            .collect(),
        initial: g.initial,
    }
}

pub fn export_json(g: &ProcessGraph) -> String {
    serde_json::to_string_pretty(&to_json_graph(g)).expect("graph serialization")
}

pub fn import_json(text: &str) -> Result<JsonGraph, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{InitialContext, ProcessState};
    use crate::syntax::{desugar_program, parse_process};

    fn graph_of(src: &str, opts: &StepOptions) -> ProcessGraph {
        let prog = Program {
            definitions: Default::default(),
            entry: Some(parse_process(src).unwrap()),
        };
        let d = desugar_program(&prog).unwrap();
        let st = ProcessState::new(d.entry.unwrap(), Context::empty());
        build_graph(st, &d.definitions, opts, DEFAULT_MAX_NODES).unwrap()
    }

    #[test]
    fn nil_graph_is_a_point() {
        let g = graph_of("nil", &StepOptions::closed());
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn branching_before_choice_graph_shape() {
        let g = graph_of(
            "(a!0.nil +(0.2) b!0.nil) + c!0.nil",
            &StepOptions::closed(),
        );
        // root, two probabilistic targets, one shared terminal
        assert_eq!(g.node_count(), 4);
        let root_edges: Vec<&GraphEdge> = g.nodes[g.initial]
            .out_edges
            .iter()
            .map(|&e| &g.edges[e])
            .collect();
        assert_eq!(root_edges.len(), 2);
        assert!(root_edges
            .iter()
            .all(|e| matches!(e.kind, TransKind::Prob(_))));
        // both probabilistic targets still offer the third alternative
        for e in root_edges {
            let mid = &g.nodes[e.to];
            let labels: Vec<String> = mid
                .out_edges
                .iter()
                .map(|&i| match &g.edges[i].kind {
                    TransKind::Act(l) => l.display(),
                    TransKind::Prob(p) => format!("p={p}"),
                })
                .collect();
            assert_eq!(labels.len(), 2);
            assert!(labels.contains(&"c!0".to_string()));
        }
    }

    #[test]
    fn canonical_key_ignores_fresh_numbering() {
        let term = |n: &str| {
            Process::prefix(
                Action::Expr(Expression::Var(n.to_string())),
                Process::Nil,
            )
        };
        let mk = |n: &str| {
            let mut ctx = Context::empty();
            ctx.scopes.push(crate::semantics::ScopeFrame {
                par_path: vec![],
                entries: vec![(n.to_string(), n.to_string(), VarType::Nat)],
            });
            ctx.f.insert(n.to_string(), 1);
            ProcessState::new(term(n), ctx)
        };
        assert_eq!(canonical_key(&mk("$m3")), canonical_key(&mk("$m7")));
    }

    #[test]
    fn canonical_key_rounding_window() {
        let term = Process::prefix(
            Action::Send("g".into(), Expression::Var("x".into())),
            Process::Nil,
        );
        let mk = |p: f64| {
            let mut rho = CMat::zeros(2);
            rho[(0, 0)] = num_complex::Complex64::new(p, 0.0);
            rho[(1, 1)] = num_complex::Complex64::new(1.0 - p, 0.0);
            let init = InitialContext {
                singles: vec![("x".to_string(), rho)],
                ..Default::default()
            };
            ProcessState::new(term.clone(), init.build().unwrap())
        };
        assert_eq!(
            canonical_key(&mk(0.4999999996)),
            canonical_key(&mk(0.5000000001))
        );
    }

    #[test]
    fn canonical_key_normalizes_register_order() {
        // same physical situation entered in either register order
        let term = parse_process("g!x . h!y . nil").unwrap();
        let zero = quantum::named_state("0").unwrap();
        let plus = quantum::named_state("+").unwrap();
        let a = InitialContext {
            singles: vec![
                ("x".to_string(), zero.clone()),
                ("y".to_string(), plus.clone()),
            ],
            ..Default::default()
        };
        let b = InitialContext {
            singles: vec![("y".to_string(), plus), ("x".to_string(), zero)],
            ..Default::default()
        };
        let sa = ProcessState::new(term.clone(), a.build().unwrap());
        let sb = ProcessState::new(term, b.build().unwrap());
        assert_eq!(canonical_key(&sa), canonical_key(&sb));
    }

    #[test]
    fn dead_qubits_do_not_split_states() {
        let term = parse_process("g!x . nil").unwrap();
        let live_only = InitialContext {
            singles: vec![("x".to_string(), quantum::named_state("+").unwrap())],
            ..Default::default()
        };
        let with_junk = InitialContext {
            singles: vec![
                ("x".to_string(), quantum::named_state("+").unwrap()),
                ("dead".to_string(), quantum::named_state("1").unwrap()),
            ],
            ..Default::default()
        };
        let sa = ProcessState::new(term.clone(), live_only.build().unwrap());
        let sb = ProcessState::new(term, with_junk.build().unwrap());
        assert_eq!(canonical_key(&sa), canonical_key(&sb));
    }

    #[test]
    fn graph_construction_is_deterministic() {
        let src = "(a!0.nil +(0.5) b!0.nil) || c!0.nil";
        let g1 = graph_of(src, &StepOptions::closed());
        let g2 = graph_of(src, &StepOptions::closed());
        assert_eq!(g1.node_count(), g2.node_count());
        let keys1: Vec<&String> = g1.nodes.iter().map(|n| &n.key).collect();
        let keys2: Vec<&String> = g2.nodes.iter().map(|n| &n.key).collect();
        assert_eq!(keys1, keys2);
        let e1: Vec<(usize, usize)> = g1.edges.iter().map(|e| (e.from, e.to)).collect();
        let e2: Vec<(usize, usize)> = g2.edges.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(e1, e2);
    }

    #[test]
    fn probe_fanout_shape() {
        let g = graph_of(
            "[x:Qubit . g?x . H[x] . h!x . nil]",
            &StepOptions::with_tomo_probes(),
        );
        // the receive node fans out once per probe
        let recv_node = g
            .nodes
            .iter()
            .position(|n| {
                !n.out_edges.is_empty()
                    && n.out_edges.iter().all(|&e| {
                        matches!(&g.edges[e].kind, TransKind::Act(Label::RecvQubit { .. }))
                    })
            })
            .expect("no reception node");
        assert_eq!(g.nodes[recv_node].out_edges.len(), 4);
        // every probe branch eventually emits on h
        let mut sends = 0;
        for e in &g.edges {
            if let TransKind::Act(Label::SendQubit { gate, .. }) = &e.kind {
                assert_eq!(gate, "h");
                sends += 1;
            }
        }
        assert_eq!(sends, 4);
    }

    #[test]
    fn state_space_overflow_reported() {
        // unbounded unfolding of a growing parallel composition
        let src = "P := a!0.nil || P";
        let mut prog = crate::syntax::parse_program(src).unwrap();
        prog.entry = Some(parse_process("P").unwrap());
        let d = desugar_program(&prog).unwrap();
        let st = ProcessState::new(d.entry.unwrap(), Context::empty());
        match build_graph(st, &d.definitions, &StepOptions::closed(), 50) {
            Err(GraphError::StateSpaceOverflow(50)) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn self_recursion_closes_into_a_loop() {
        let src = "P := P";
        let mut prog = crate::syntax::parse_program(src).unwrap();
        prog.entry = Some(parse_process("P").unwrap());
        let d = desugar_program(&prog).unwrap();
        let st = ProcessState::new(d.entry.unwrap(), Context::empty());
        let g = build_graph(st, &d.definitions, &StepOptions::closed(), 100).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges[0].from, g.edges[0].to);
    }

    #[test]
    fn dot_export_trivials() {
        let g = graph_of("nil", &StepOptions::closed());
        let dot = export_dot(&g);
        assert!(dot.contains("digraph"));
        assert!(!dot.contains("->"));
        let g = graph_of("a!0.nil +(0.2) b!0.nil", &StepOptions::closed());
        let dot = export_dot(&g);
        assert!(dot.contains("p=0.2"));
        assert!(dot.contains("p=0.8"));
    }

    #[test]
    fn json_roundtrip_is_a_fixpoint() {
        let g = graph_of(
            "[x:Nat . (g!2.nil || g?x.a!x.nil) \\ {g}]",
            &StepOptions::closed(),
        );
        let text = export_json(&g);
        let doc = import_json(&text).unwrap();
        let text2 = serde_json::to_string_pretty(&doc).unwrap();
        assert_eq!(text, text2);
        let doc2 = import_json(&text2).unwrap();
        assert_eq!(doc, doc2);
    }
}
