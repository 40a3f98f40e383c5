//! Density-matrix state engine.
//!
//! Quantum state lives in a dense `2^n x 2^n` complex matrix over an ordered
//! register of qubit names. General quantum measurements ("admissible
//! transformations") are sets of branch operators `{A_t}` with
//! `sum A_t^dag A_t = I`; unitaries are the single-branch case. Applying a
//! branch to qubits `xs` somewhere inside the register conjugates the state
//! with `Pi^dag (A_t (x) I^(x)k) Pi` where `Pi` is the permutation placing
//! `xs` at the head of the register.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for hermiticity / completeness / trace checks.
pub const TOL: f64 = 1e-9;
/// Branches with probability at or below this floor are dropped.
pub const PROB_FLOOR: f64 = 1e-12;
/// Hard cap on matrix dimension (12 qubits).
pub const MAX_DIM: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("unknown transformation `{0}`")]
    UnknownTransformation(String),
    #[error("unknown qubit `{0}`")]
    UnknownQubit(String),
    #[error("duplicate qubit `{0}`")]
    DuplicateQubit(String),
    #[error("transformation `{name}` expects {expected} qubit(s), got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("register dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// 1x1 matrix holding `1`, the empty-register state.
    pub fn scalar_one() -> Self {
        let mut m = CMat::zeros(1);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = CMat::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn from_reals(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut m = CMat::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(*v, 0.0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let n = self.dim;
        let m = other.dim;
        let mut out = CMat::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let v = self[(i, j)];
                write!(f, " {:.4}{:+.4}i", v.re, v.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// `|0>` / `|1>` projectors and common single-qubit states.
pub fn ket_density(amplitudes: &[Complex64]) -> CMat {
    let n = amplitudes.len();
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut m = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = amplitudes[i] * amplitudes[j].conj() / (norm * norm);
        }
    }
    m
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Named single-qubit preparations accepted on the command line and by probes.
pub fn named_state(name: &str) -> Option<CMat> {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    match name {
        "0" => Some(ket_density(&[c(1.0, 0.0), c(0.0, 0.0)])),
        "1" => Some(ket_density(&[c(0.0, 0.0), c(1.0, 0.0)])),
        "+" => Some(ket_density(&[c(s2, 0.0), c(s2, 0.0)])),
        "-" => Some(ket_density(&[c(s2, 0.0), c(-s2, 0.0)])),
        "+i" => Some(ket_density(&[c(s2, 0.0), c(0.0, s2)])),
        "-i" => Some(ket_density(&[c(s2, 0.0), c(0.0, -s2)])),
        "mix" => Some(CMat::identity(2).scale(0.5)),
        _ => None,
    }
}

/// The tomographically complete probe set `{|0>, |1>, |+>, |+i>}`.
pub fn tomo4() -> Vec<(String, CMat)> {
    ["0", "1", "+", "+i"]
        .iter()
        .map(|n| (n.to_string(), named_state(n).unwrap()))
        .collect()
}

/// Two-qubit EPR pair `(|00>+|11>)/sqrt(2)` as a density matrix.
pub fn epr_density() -> CMat {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    ket_density(&[c(s2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s2, 0.0)])
}

/// A general quantum measurement: named branch operators with distinct
/// integer outcomes. Unitaries have a single branch with outcome 0.
#[derive(Clone, Debug)]
pub struct AdmissibleTransformation {
    pub name: String,
    pub arity: usize,
    pub branches: Vec<(i64, CMat)>,
}

impl AdmissibleTransformation {
    /// `sum A_t^dag A_t = I` within `TOL`.
    pub fn is_complete(&self) -> bool {
        let dim = 1 << self.arity;
        let mut sum = CMat::zeros(dim);
        for (_, a) in &self.branches {
            sum = sum.add(&a.dagger().mul(a));
        }
        sum.max_abs_diff(&CMat::identity(dim)) <= TOL
    }
}

fn pauli_x() -> CMat {
    CMat::from_reals(&[&[0.0, 1.0], &[1.0, 0.0]])
}

fn pauli_y() -> CMat {
    CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
}

fn pauli_z() -> CMat {
    CMat::from_reals(&[&[1.0, 0.0], &[0.0, -1.0]])
}

fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_reals(&[&[s, s], &[s, -s]])
}

/// Eigenprojectors `(I +- O)/2` of an involution observable, outcomes +1/-1.
fn observable_branches(obs: &CMat) -> Vec<(i64, CMat)> {
    let id = CMat::identity(obs.dim());
    vec![
        (1, id.add(obs).scale(0.5)),
        (-1, id.sub(obs).scale(0.5)),
    ]
}

/// The builtin set of admissible transformations.
///
/// Unitaries: `I`, `H`, `CNot`, `sX`, `sY`, `sZ`. Standard-basis
/// measurements: `M_std1` (outcomes 0/1), `M_std2` (outcomes 0..3, first
/// listed qubit is the high bit). Observable measurements with outcomes
/// +1/-1: `X` and `ZX` (the two-qubit observable `Z (x) X`).
pub fn builtin(name: &str) -> Result<AdmissibleTransformation, QuantumError> {
    let unitary = |arity: usize, m: CMat| AdmissibleTransformation {
        name: name.to_string(),
        arity,
        branches: vec![(0, m)],
    };
    match name {
        "I" => Ok(unitary(1, CMat::identity(2))),
        "H" => Ok(unitary(1, hadamard())),
        "sX" => Ok(unitary(1, pauli_x())),
        "sY" => Ok(unitary(1, pauli_y())),
        "sZ" => Ok(unitary(1, pauli_z())),
        "CNot" => Ok(unitary(
            2,
            CMat::from_reals(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
        )),
        "M_std1" => {
            let branches = (0..2)
                .map(|v| {
                    let mut p = CMat::zeros(2);
                    p[(v, v)] = c(1.0, 0.0);
                    (v as i64, p)
                })
                .collect();
            Ok(AdmissibleTransformation {
                name: name.to_string(),
                arity: 1,
                branches,
            })
        }
        "M_std2" => {
            let branches = (0..4)
                .map(|v| {
                    let mut p = CMat::zeros(4);
                    p[(v, v)] = c(1.0, 0.0);
                    (v as i64, p)
                })
                .collect();
            Ok(AdmissibleTransformation {
                name: name.to_string(),
                arity: 2,
                branches,
            })
        }
        "X" => Ok(AdmissibleTransformation {
            name: name.to_string(),
            arity: 1,
            branches: observable_branches(&pauli_x()),
        }),
        "ZX" => Ok(AdmissibleTransformation {
            name: name.to_string(),
            arity: 2,
            branches: observable_branches(&pauli_z().kron(&pauli_x())),
        }),
        _ => Err(QuantumError::UnknownTransformation(name.to_string())),
    }
}

pub const BUILTIN_NAMES: [&str; 10] = [
    "I", "H", "CNot", "sX", "sY", "sZ", "M_std1", "M_std2", "X", "ZX",
];

pub fn is_builtin(name: &str) -> bool {
    BUILTIN_NAMES.contains(&name)
}

/// Permutation matrix placing the named qubits `xs` at the head of the
/// register `q`, in the given order; remaining names keep their relative
/// order. Position 0 of `q` is the leftmost (most significant) tensor factor.
pub fn permutation_to_front(q: &[String], xs: &[String]) -> Result<CMat, QuantumError> {
    let mut picked = Vec::with_capacity(q.len());
    for x in xs {
        let pos = q
            .iter()
            .position(|n| n == x)
            .ok_or_else(|| QuantumError::UnknownQubit(x.clone()))?;
        if picked.contains(&pos) {
            return Err(QuantumError::DuplicateQubit(x.clone()));
        }
        picked.push(pos);
    }
    let mut order = picked.clone();
    for i in 0..q.len() {
        if !picked.contains(&i) {
            order.push(i);
        }
    }
    let n = q.len();
    let dim = 1usize << n;
    if dim > MAX_DIM {
        return Err(QuantumError::DimensionTooLarge(dim));
    }
    let mut pi = CMat::zeros(dim);
    for v in 0..dim {
        let mut u = 0usize;
        for (new_pos, &old_pos) in order.iter().enumerate() {
            let bit = (v >> (n - 1 - old_pos)) & 1;
            u |= bit << (n - 1 - new_pos);
        }
        pi[(u, v)] = c(1.0, 0.0);
    }
    Ok(pi)
}

/// One branch of the super-operator: `Pi^dag (A_t (x) I^(x)k) Pi rho Pi^dag (A_t^dag (x) I^(x)k) Pi`.
/// The result is unnormalized; its trace is the branch probability.
pub fn apply_branch(
    a: &AdmissibleTransformation,
    branch: usize,
    xs: &[String],
    q: &[String],
    rho: &CMat,
) -> Result<CMat, QuantumError> {
    if xs.len() != a.arity {
        return Err(QuantumError::ArityMismatch {
            name: a.name.clone(),
            expected: a.arity,
            got: xs.len(),
        });
    }
    let k = q.len() - a.arity;
    let pi = permutation_to_front(q, xs)?;
    let op = a.branches[branch].1.kron(&CMat::identity(1 << k));
    let m = pi.dagger().mul(&op).mul(&pi);
    Ok(m.mul(rho).mul(&m.dagger()))
}

/// All measurement branches with their probabilities and normalized
/// post-states. Branches with probability `<= PROB_FLOOR` are dropped.
pub fn measure(
    a: &AdmissibleTransformation,
    xs: &[String],
    q: &[String],
    rho: &CMat,
) -> Result<Vec<(i64, f64, CMat)>, QuantumError> {
    let mut out = Vec::new();
    for i in 0..a.branches.len() {
        let unnorm = apply_branch(a, i, xs, q, rho)?;
        let p = unnorm.trace().re;
        if p <= PROB_FLOOR {
            continue;
        }
        out.push((a.branches[i].0, p, unnorm.scale(1.0 / p)));
    }
    Ok(out)
}

/// Reduced density matrix over `keep` (in the listed order), tracing out the
/// rest of the register.
pub fn partial_trace(q: &[String], rho: &CMat, keep: &[String]) -> Result<CMat, QuantumError> {
    let n = q.len();
    let mut keep_pos = Vec::with_capacity(keep.len());
    for x in keep {
        let pos = q
            .iter()
            .position(|n| n == x)
            .ok_or_else(|| QuantumError::UnknownQubit(x.clone()))?;
        if keep_pos.contains(&pos) {
            return Err(QuantumError::DuplicateQubit(x.clone()));
        }
        keep_pos.push(pos);
    }
    let trace_pos: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
    let kn = keep_pos.len();
    let tn = trace_pos.len();
    let mut out = CMat::zeros(1 << kn);
    for i in 0..(1usize << kn) {
        for j in 0..(1usize << kn) {
            let mut acc = c(0.0, 0.0);
            for e in 0..(1usize << tn) {
                let mut row = 0usize;
                let mut col = 0usize;
                for (b, &pos) in keep_pos.iter().enumerate() {
                    let ib = (i >> (kn - 1 - b)) & 1;
                    let jb = (j >> (kn - 1 - b)) & 1;
                    row |= ib << (n - 1 - pos);
                    col |= jb << (n - 1 - pos);
                }
                for (b, &pos) in trace_pos.iter().enumerate() {
                    let eb = (e >> (tn - 1 - b)) & 1;
                    row |= eb << (n - 1 - pos);
                    col |= eb << (n - 1 - pos);
                }
                acc += rho[(row, col)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Prepend a one-qubit state to the register state: `nu (x) rho`.
pub fn tensor_prepend(nu: &CMat, rho: &CMat) -> Result<CMat, QuantumError> {
    if nu.dim() != 2 {
        return Err(QuantumError::InvalidDensity(
            "expected a 2x2 one-qubit state".into(),
        ));
    }
    if !nu.is_hermitian(TOL) || (nu.trace().re - 1.0).abs() > TOL {
        return Err(QuantumError::InvalidDensity(
            "not Hermitian trace-1".into(),
        ));
    }
    if 2 * rho.dim() > MAX_DIM {
        return Err(QuantumError::DimensionTooLarge(2 * rho.dim()));
    }
    Ok(nu.kron(rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Jacobi eigensolver for real symmetric matrices; test oracle only.
    fn jacobi_eigen(m: &CMat) -> Vec<(f64, Vec<f64>)> {
        let n = m.dim();
        let mut a = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                assert!(m[(i, j)].im.abs() < 1e-12, "oracle needs a real matrix");
                a[i][j] = m[(i, j)].re;
            }
        }
        let mut v = vec![vec![0.0f64; n]; n];
        for (i, row) in v.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for _ in 0..200 {
            let mut off = 0.0;
            let (mut p, mut q) = (0, 1);
            for i in 0..n {
                for j in (i + 1)..n {
                    if a[i][j].abs() > off {
                        off = a[i][j].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
            let theta = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
            let (s, co) = theta.sin_cos();
            for k in 0..n {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = co * akp - s * akq;
                a[k][q] = s * akp + co * akq;
            }
            for k in 0..n {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = co * apk - s * aqk;
                a[q][k] = s * apk + co * aqk;
            }
            for k in 0..n {
                let (vkp, vkq) = (v[k][p], v[k][q]);
                v[k][p] = co * vkp - s * vkq;
                v[k][q] = s * vkp + co * vkq;
            }
        }
        (0..n)
            .map(|i| (a[i][i], (0..n).map(|k| v[k][i]).collect()))
            .collect()
    }

    /// Spectral projector onto the eigenspace of `obs` with eigenvalue near `ev`.
    fn spectral_projector(obs: &CMat, ev: f64) -> CMat {
        let n = obs.dim();
        let mut proj = CMat::zeros(n);
        for (lambda, vec) in jacobi_eigen(obs) {
            if (lambda - ev).abs() < 1e-6 {
                for i in 0..n {
                    for j in 0..n {
                        proj[(i, j)] += Complex64::new(vec[i] * vec[j], 0.0);
                    }
                }
            }
        }
        proj
    }

    fn random_density(n_qubits: usize, seed: &mut u64) -> CMat {
        // xorshift; deterministic across runs
        let mut next = || {
            *seed ^= *seed << 13;
            *seed ^= *seed >> 7;
            *seed ^= *seed << 17;
            (*seed as f64 / u64::MAX as f64) - 0.5
        };
        let dim = 1 << n_qubits;
        let mut b = CMat::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                b[(i, j)] = Complex64::new(next(), next());
            }
        }
        let rho = b.mul(&b.dagger());
        let t = rho.trace().re;
        rho.scale(1.0 / t)
    }

    #[test]
    fn builtin_hadamard_single_branch() {
        let h = builtin("H").unwrap();
        assert_eq!(h.branches.len(), 1);
        assert_eq!(h.branches[0].0, 0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = CMat::from_reals(&[&[s, s], &[s, -s]]);
        assert!(h.branches[0].1.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn builtin_mstd2_projectors() {
        let m = builtin("M_std2").unwrap();
        assert_eq!(m.branches.len(), 4);
        let outcomes: Vec<i64> = m.branches.iter().map(|(t, _)| *t).collect();
        assert_eq!(outcomes, vec![0, 1, 2, 3]);
        for (v, (_, p)) in m.branches.iter().enumerate() {
            let mut expected = CMat::zeros(4);
            expected[(v, v)] = Complex64::new(1.0, 0.0);
            assert!(p.max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn builtin_zx_matches_spectral_oracle() {
        // Oracle: diagonalize Z(x)X and group eigenvectors by eigenvalue.
        let zx_obs = pauli_z().kron(&pauli_x());
        let zx = builtin("ZX").unwrap();
        assert_eq!(zx.branches.len(), 2);
        for (outcome, op) in &zx.branches {
            let oracle = spectral_projector(&zx_obs, *outcome as f64);
            assert!(
                op.max_abs_diff(&oracle) < 1e-9,
                "projector for outcome {outcome} disagrees with spectral oracle"
            );
        }
    }

    #[test]
    fn builtin_x_matches_spectral_oracle() {
        let x = builtin("X").unwrap();
        for (outcome, op) in &x.branches {
            let oracle = spectral_projector(&pauli_x(), *outcome as f64);
            assert!(op.max_abs_diff(&oracle) < 1e-9);
        }
    }

    #[test]
    fn all_builtins_complete() {
        for name in BUILTIN_NAMES {
            let a = builtin(name).unwrap();
            assert!(a.is_complete(), "{name} fails completeness");
        }
    }

    #[test]
    fn unknown_transformation() {
        assert!(matches!(
            builtin("Foo"),
            Err(QuantumError::UnknownTransformation(_))
        ));
    }

    #[test]
    fn permutation_singleton_is_identity() {
        let q = vec!["a".to_string()];
        let pi = permutation_to_front(&q, &["a".to_string()]).unwrap();
        assert!(pi.max_abs_diff(&CMat::identity(2)) < 1e-15);
    }

    #[test]
    fn permutation_two_qubit_swap() {
        let q = vec!["a".to_string(), "b".to_string()];
        let pi = permutation_to_front(&q, &["b".to_string()]).unwrap();
        let swap = CMat::from_reals(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(pi.max_abs_diff(&swap) < 1e-15);
    }

    #[test]
    fn permutation_three_qubit_brute_force() {
        // Oracle: apply Pi to every basis vector and check the index
        // arithmetic directly.
        let q: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let xs: Vec<String> = ["c", "a"].iter().map(|s| s.to_string()).collect();
        let pi = permutation_to_front(&q, &xs).unwrap();
        // new order is (c, a, b)
        for v in 0..8usize {
            let a = (v >> 2) & 1;
            let b = (v >> 1) & 1;
            let cbit = v & 1;
            let u = (cbit << 2) | (a << 1) | b;
            for row in 0..8 {
                let expect = if row == u { 1.0 } else { 0.0 };
                assert!((pi[(row, v)].re - expect).abs() < 1e-15);
            }
        }
        // unitarity
        let prod = pi.dagger().mul(&pi);
        assert!(prod.max_abs_diff(&CMat::identity(8)) < 1e-12);
    }

    #[test]
    fn permutation_errors() {
        let q = vec!["a".to_string()];
        assert!(matches!(
            permutation_to_front(&q, &["z".to_string()]),
            Err(QuantumError::UnknownQubit(_))
        ));
        let q2 = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            permutation_to_front(&q2, &["a".to_string(), "a".to_string()]),
            Err(QuantumError::DuplicateQubit(_))
        ));
    }

    #[test]
    fn apply_hadamard_to_zero() {
        let h = builtin("H").unwrap();
        let q = vec!["a".to_string()];
        let rho = named_state("0").unwrap();
        let out = apply_branch(&h, 0, &q, &q, &rho).unwrap();
        assert!(out.max_abs_diff(&named_state("+").unwrap()) < 1e-12);
    }

    #[test]
    fn apply_projector_branch_trace() {
        let m = builtin("M_std1").unwrap();
        let q = vec!["a".to_string()];
        let rho = named_state("+").unwrap();
        let out = apply_branch(&m, 0, &q, &q, &rho).unwrap();
        assert!((out.trace().re - 0.5).abs() < 1e-12);
        assert!(out.max_abs_diff(&named_state("0").unwrap().scale(0.5)) < 1e-12);
    }

    #[test]
    fn apply_cnot_reordered_register() {
        // Register listed as (b, a); apply CNot to (a, b). Oracle builds the
        // full 4x4 operator by explicit reordering instead of the
        // permutation shortcut.
        let q = vec!["b".to_string(), "a".to_string()];
        let cnot = builtin("CNot").unwrap();
        // state: b = |0>, a = |+>  (so rho = |0><0| (x) |+><+| in (b,a) order)
        let rho = named_state("0").unwrap().kron(&named_state("+").unwrap());
        let out = apply_branch(&cnot, 0, &["a".to_string(), "b".to_string()], &q, &rho).unwrap();

        // Oracle: CNot with control a (low bit of (b,a) ordering is a).
        // Basis |b a>: control a flips b.
        let mut oracle_op = CMat::zeros(4);
        for v in 0..4usize {
            let b = (v >> 1) & 1;
            let a = v & 1;
            let b2 = b ^ a;
            oracle_op[((b2 << 1) | a, v)] = Complex64::new(1.0, 0.0);
        }
        let expected = oracle_op.mul(&rho).mul(&oracle_op.dagger());
        assert!(out.max_abs_diff(&expected) < 1e-12);
        // And the state is the EPR pair up to reordering of (b, a).
        let back = partial_trace(&q, &out, &["a".to_string(), "b".to_string()]).unwrap();
        assert!(back.max_abs_diff(&epr_density()) < 1e-12);
    }

    #[test]
    fn measure_mstd1_on_plus() {
        let m = builtin("M_std1").unwrap();
        let q = vec!["a".to_string()];
        let rho = named_state("+").unwrap();
        let out = measure(&m, &q, &q, &rho).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0, 0);
        assert!((out[0].1 - 0.5).abs() < 1e-12);
        assert!(out[0].2.max_abs_diff(&named_state("0").unwrap()) < 1e-12);
        assert_eq!(out[1].0, 1);
        assert!((out[1].1 - 0.5).abs() < 1e-12);
        assert!(out[1].2.max_abs_diff(&named_state("1").unwrap()) < 1e-12);
    }

    #[test]
    fn measure_mstd1_on_zero_drops_branch() {
        let m = builtin("M_std1").unwrap();
        let q = vec!["a".to_string()];
        let rho = named_state("0").unwrap();
        let out = measure(&m, &q, &q, &rho).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, 0);
        assert!((out[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_zx_on_zero_zero() {
        // <Z(x)X> = 0 on |00>, so both outcomes carry probability 1/2 and the
        // post-states are the normalized spectral projections.
        let zx = builtin("ZX").unwrap();
        let q = vec!["a".to_string(), "b".to_string()];
        let rho = named_state("0").unwrap().kron(&named_state("0").unwrap());
        let out = measure(&zx, &q, &q, &rho).unwrap();
        assert_eq!(out.len(), 2);
        let zx_obs = pauli_z().kron(&pauli_x());
        for (outcome, p, post) in &out {
            assert!((p - 0.5).abs() < 1e-9);
            let proj = spectral_projector(&zx_obs, *outcome as f64);
            let expected_unnorm = proj.mul(&rho).mul(&proj.dagger());
            let expected = expected_unnorm.scale(1.0 / expected_unnorm.trace().re);
            assert!(post.max_abs_diff(&expected) < 1e-9);
        }
    }

    #[test]
    fn measure_probabilities_sum_to_one() {
        let mut seed = 0x1234_5678_9abc_def0u64;
        for n in 1..=3usize {
            let q: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
            for name in BUILTIN_NAMES {
                let a = builtin(name).unwrap();
                if a.arity > n {
                    continue;
                }
                let rho = random_density(n, &mut seed);
                let xs: Vec<String> = q.iter().take(a.arity).cloned().collect();
                let out = measure(&a, &xs, &q, &rho).unwrap();
                let total: f64 = out.iter().map(|(_, p, _)| p).sum();
                assert!((total - 1.0).abs() < TOL, "{name} on {n} qubits: sum {total}");
                for (_, _, post) in &out {
                    assert!(post.is_hermitian(TOL));
                    assert!((post.trace().re - 1.0).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn partial_trace_epr_marginal() {
        let q = vec!["a".to_string(), "b".to_string()];
        let red = partial_trace(&q, &epr_density(), &["a".to_string()]).unwrap();
        assert!(red.max_abs_diff(&CMat::identity(2).scale(0.5)) < 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        let q = vec!["a".to_string(), "b".to_string()];
        let rho = named_state("0").unwrap().kron(&named_state("+").unwrap());
        let red = partial_trace(&q, &rho, &["b".to_string()]).unwrap();
        assert!(red.max_abs_diff(&named_state("+").unwrap()) < 1e-12);
    }

    #[test]
    fn partial_trace_matches_naive_oracle() {
        // Oracle: independent summation written index-by-index for the
        // specific keep-list (q2, q0) of a 3-qubit register.
        let mut seed = 0xdead_beef_cafe_f00du64;
        let q: Vec<String> = ["q0", "q1", "q2"].iter().map(|s| s.to_string()).collect();
        let rho = random_density(3, &mut seed);
        let keep = vec!["q2".to_string(), "q0".to_string()];
        let got = partial_trace(&q, &rho, &keep).unwrap();

        let mut oracle = CMat::zeros(4);
        for i2 in 0..2usize {
            for i0 in 0..2usize {
                for j2 in 0..2usize {
                    for j0 in 0..2usize {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for e in 0..2usize {
                            // register index is (q0 q1 q2) MSB-first
                            let row = (i0 << 2) | (e << 1) | i2;
                            let col = (j0 << 2) | (e << 1) | j2;
                            acc += rho[(row, col)];
                        }
                        oracle[((i2 << 1) | i0, (j2 << 1) | j0)] = acc;
                    }
                }
            }
        }
        assert!(got.max_abs_diff(&oracle) < 1e-12);
        assert!((got.trace().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tensor_prepend_cases() {
        let zero = named_state("0").unwrap();
        let one = named_state("1").unwrap();
        // empty register base case
        let out = tensor_prepend(&zero, &CMat::scalar_one()).unwrap();
        assert!(out.max_abs_diff(&zero) < 1e-15);
        // |1> (x) |0> = |10><10|
        let out = tensor_prepend(&one, &zero).unwrap();
        let mut expected = CMat::zeros(4);
        expected[(2, 2)] = Complex64::new(1.0, 0.0);
        assert!(out.max_abs_diff(&expected) < 1e-15);
        // direct Kronecker oracle on a mixed state
        let mix = CMat::identity(2).scale(0.5);
        let plus = named_state("+").unwrap();
        let out = tensor_prepend(&mix, &plus).unwrap();
        let mut oracle = CMat::zeros(4);
        for i in 0..4usize {
            for j in 0..4usize {
                oracle[(i, j)] =
                    mix[(i >> 1, j >> 1)] * plus[(i & 1, j & 1)];
            }
        }
        assert!(out.max_abs_diff(&oracle) < 1e-15);
        assert!((out.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_prepend_rejects_invalid() {
        let bad = CMat::identity(2); // trace 2
        assert!(matches!(
            tensor_prepend(&bad, &CMat::scalar_one()),
            Err(QuantumError::InvalidDensity(_))
        ));
    }

    #[test]
    fn permutation_round_trip_on_random_state() {
        let mut seed = 0x0bad_c0de_1234_5678u64;
        let q: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let rho = random_density(3, &mut seed);
        let pi = permutation_to_front(&q, &["c".to_string(), "a".to_string()]).unwrap();
        let there = pi.mul(&rho).mul(&pi.dagger());
        let back = pi.dagger().mul(&there).mul(&pi);
        assert!(back.max_abs_diff(&rho) <= 1e-12);
    }

    #[test]
    fn apply_identity_is_exact() {
        let mut seed = 0x1111_2222_3333_4444u64;
        let q: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let rho = random_density(2, &mut seed);
        let id = builtin("I").unwrap();
        let out = apply_branch(&id, 0, &["b".to_string()], &q, &rho).unwrap();
        assert!(out.max_abs_diff(&rho) <= 1e-12);
    }

    #[test]
    fn partial_trace_inverts_tensor_prepend() {
        let mut seed = 0x9999_8888_7777_6666u64;
        let rho = random_density(2, &mut seed);
        let nu = named_state("+i").unwrap();
        let big = tensor_prepend(&nu, &rho).unwrap();
        let q: Vec<String> = ["x", "a", "b"].iter().map(|s| s.to_string()).collect();
        let back = partial_trace(&q, &big, &["a".to_string(), "b".to_string()]).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-9);
    }
}
