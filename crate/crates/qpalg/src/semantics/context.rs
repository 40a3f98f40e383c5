//! Run-time contexts: variable scopes, the qubit register with its density
//! matrix, and the classical store. A context may temporarily be a
//! probability mixture after a measurement; a mixture with more than one
//! branch is unstable and must be resolved by probabilistic transitions
//! before any action fires.

use std::collections::BTreeMap;

use crate::quantum::{self, CMat};
use crate::syntax::ast::{Process, VarType};

/// One declaration frame. `par_path` records the chain of parallel-branch
/// sides under which the frame was pushed (false = left), so that sibling
/// branches declaring the same user name can be rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct ScopeFrame {
    pub par_path: Vec<bool>,
    pub entries: Vec<(String, String, VarType)>, // (user name, runtime name, type)
}

/// `<s, q = rho, f>`: environment stack, qubit register (position 0 is the
/// leftmost tensor factor), quantum state, classical store. Runtime variable
/// names are made unique at declaration, so `q` and `f` key directly on them.
#[derive(Clone, Debug, PartialEq)]
pub struct Context {
    pub scopes: Vec<ScopeFrame>,
    pub q: Vec<String>,
    pub rho: CMat,
    pub f: BTreeMap<String, i64>,
    pub fresh: u64,
}

impl Context {
    pub fn empty() -> Self {
        Context {
            scopes: Vec::new(),
            q: Vec::new(),
            rho: CMat::scalar_one(),
            f: BTreeMap::new(),
            fresh: 0,
        }
    }

    pub fn fresh_suffix(&mut self) -> u64 {
        let n = self.fresh;
        self.fresh += 1;
        n
    }

    /// Type of a runtime variable, innermost frame first.
    pub fn var_type(&self, runtime: &str) -> Option<VarType> {
        for frame in self.scopes.iter().rev() {
            for (_, rt, ty) in frame.entries.iter().rev() {
                if rt == runtime {
                    return Some(*ty);
                }
            }
        }
        None
    }

    /// User-facing name of a runtime variable.
    pub fn display_name(runtime: &str) -> &str {
        runtime.split('#').next().unwrap_or(runtime)
    }

    /// Runtime names currently bound to a user-facing name, innermost first.
    pub fn lookup_user(&self, user: &str) -> Option<&str> {
        for frame in self.scopes.iter().rev() {
            for (u, rt, _) in frame.entries.iter().rev() {
                if u == user {
                    return Some(rt);
                }
            }
        }
        None
    }

    /// Reduced state of one register qubit.
    pub fn qubit_state(&self, runtime: &str) -> Result<CMat, quantum::QuantumError> {
        quantum::partial_trace(&self.q, &self.rho, &[runtime.to_string()])
    }

    /// Register/scope/store consistency; used after every step in tests.
    pub fn validate(&self) -> Result<(), String> {
        let dim = 1usize << self.q.len();
        if self.rho.dim() != dim {
            return Err(format!(
                "state dimension {} does not match register size {}",
                self.rho.dim(),
                self.q.len()
            ));
        }
        if !self.rho.is_hermitian(quantum::TOL) {
            return Err("state is not Hermitian".into());
        }
        let tr = self.rho.trace().re;
        if (tr - 1.0).abs() > quantum::TOL {
            return Err(format!("state trace {tr} differs from 1"));
        }
        for name in &self.q {
            match self.var_type(name) {
                Some(VarType::Qubit) => {}
                Some(t) => return Err(format!("register name `{name}` has type {t}")),
                None => return Err(format!("register name `{name}` is out of scope")),
            }
        }
        for name in self.f.keys() {
            match self.var_type(name) {
                Some(VarType::Nat) => {}
                Some(t) => return Err(format!("store name `{name}` has type {t}")),
                None => return Err(format!("store name `{name}` is out of scope")),
            }
        }
        Ok(())
    }
}

/// A process term paired with a (possibly probabilistic) context.
#[derive(Clone, Debug)]
pub struct ProcessState {
    pub process: Process,
    /// Mixture branches; stable iff there is exactly one.
    pub contexts: Vec<(f64, Context)>,
}

impl ProcessState {
    pub fn new(process: Process, context: Context) -> Self {
        ProcessState {
            process,
            contexts: vec![(1.0, context)],
        }
    }

    pub fn is_context_stable(&self) -> bool {
        self.contexts.len() == 1
    }

    pub fn single_context(&self) -> &Context {
        assert!(self.is_context_stable(), "context is probabilistic");
        &self.contexts[0].1
    }
}

/// Initial-state description: named single-qubit preparations and jointly
/// prepared pairs. Pairs come first in the register, then singles, in the
/// listed order.
#[derive(Clone, Debug, Default)]
pub struct InitialContext {
    pub singles: Vec<(String, CMat)>,
    pub pairs: Vec<(String, String, CMat)>,
    pub values: Vec<(String, i64)>,
}

impl InitialContext {
    pub fn build(&self) -> Result<Context, String> {
        let mut ctx = Context::empty();
        let mut entries = Vec::new();
        for (a, b, rho) in &self.pairs {
            if rho.dim() != 4 {
                return Err(format!("pair state for ({a}, {b}) must be 4x4"));
            }
            ctx.q.push(a.clone());
            ctx.q.push(b.clone());
            ctx.rho = ctx.rho.kron(rho);
            entries.push((a.clone(), a.clone(), VarType::Qubit));
            entries.push((b.clone(), b.clone(), VarType::Qubit));
        }
        for (name, rho) in &self.singles {
            if rho.dim() != 2 {
                return Err(format!("state for {name} must be 2x2"));
            }
            ctx.q.push(name.clone());
            ctx.rho = ctx.rho.kron(rho);
            entries.push((name.clone(), name.clone(), VarType::Qubit));
        }
        for (name, v) in &self.values {
            ctx.f.insert(name.clone(), *v);
            entries.push((name.clone(), name.clone(), VarType::Nat));
        }
        if !entries.is_empty() {
            ctx.scopes.push(ScopeFrame {
                par_path: Vec::new(),
                entries,
            });
        }
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn external_vars(&self) -> Vec<(String, VarType)> {
        let mut out = Vec::new();
        for (a, b, _) in &self.pairs {
            out.push((a.clone(), VarType::Qubit));
            out.push((b.clone(), VarType::Qubit));
        }
        for (n, _) in &self.singles {
            out.push((n.clone(), VarType::Qubit));
        }
        for (n, _) in &self.values {
            out.push((n.clone(), VarType::Nat));
        }
        out
    }
}
