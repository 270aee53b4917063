//! Dense operators on the qubit 1 ⊗ qubit 2 ⊗ cavity space.
//!
//! Levels are ordered excited first, so a single qubit reads `(e, g)` and the
//! two-qubit sub-basis reads `{ee, eg, ge, gg}`. The cavity factor always sits
//! last and carries Fock levels `0..=n_max`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Absolute max-norm tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tensor layout: {0}")]
    Layout(String),
    #[error("operator is not Hermitian (max |H - H†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
}

/// Shape of the space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisDescriptor {
    qubits: usize,
    fock_levels: Option<usize>,
}

impl BasisDescriptor {
    pub const SINGLE_QUBIT: Self = Self { qubits: 1, fock_levels: None };
    pub const TWO_QUBIT: Self = Self { qubits: 2, fock_levels: None };

    pub fn cavity(n_max: usize) -> Self {
        Self { qubits: 0, fock_levels: Some(n_max + 1) }
    }

    /// Full two-qubit plus cavity space.
    pub fn composite(n_max: usize) -> Self {
        Self { qubits: 2, fock_levels: Some(n_max + 1) }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn n_max(&self) -> Option<usize> {
        self.fock_levels.map(|l| l - 1)
    }

    pub fn fock_levels(&self) -> usize {
        self.fock_levels.unwrap_or(1)
    }

    pub fn dim(&self) -> usize {
        (1 << self.qubits) * self.fock_levels()
    }

    fn append(self, other: Self) -> Result<Self, OpError> {
        if self.fock_levels.is_some() {
            return Err(OpError::Layout("cavity factor must be the last factor".into()));
        }
        let qubits = self.qubits + other.qubits;
        if qubits > 2 {
            return Err(OpError::Layout(format!("{qubits} qubit factors, at most 2 supported")));
        }
        Ok(Self { qubits, fock_levels: other.fock_levels })
    }
}

impl fmt::Display for BasisDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.qubits, self.fock_levels) {
            (q, None) => write!(f, "{q}-qubit"),
            (0, Some(l)) => write!(f, "cavity(n_max={})", l - 1),
            (q, Some(l)) => write!(f, "{q}-qubit x cavity(n_max={})", l - 1),
        }
    }
}

/// Dressed two-qubit basis state, ordered `{ee, eg, ge, gg}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoQubitState {
    EE,
    EG,
    GE,
    GG,
}

impl TwoQubitState {
    pub const ALL: [TwoQubitState; 4] = [Self::EE, Self::EG, Self::GE, Self::GG];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Index of `|self, n⟩` in the composite basis.
    pub fn composite_index(self, n: usize, n_max: usize) -> usize {
        debug_assert!(n <= n_max);
        self.index() * (n_max + 1) + n
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::EE => "ee",
            Self::EG => "eg",
            Self::GE => "ge",
            Self::GG => "gg",
        }
    }
}

impl fmt::Display for TwoQubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TwoQubitState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ee" => Ok(Self::EE),
            "eg" => Ok(Self::EG),
            "ge" => Ok(Self::GE),
            "gg" => Ok(Self::GG),
            other => Err(format!("unknown two-qubit state `{other}` (expected ee, eg, ge or gg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliKind {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Dense complex square matrix tagged with its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    data: DMatrix<C64>,
    basis: BasisDescriptor,
}

impl OperatorMatrix {
    pub fn new(data: DMatrix<C64>, basis: BasisDescriptor) -> Result<Self, OpError> {
        if data.nrows() != basis.dim() || data.ncols() != basis.dim() {
            return Err(OpError::DimensionMismatch {
                expected: basis.dim(),
                found: data.nrows().max(data.ncols()),
            });
        }
        Ok(Self { data, basis })
    }

    pub fn identity(basis: BasisDescriptor) -> Self {
        Self { data: DMatrix::identity(basis.dim(), basis.dim()), basis }
    }

    pub fn zeros(basis: BasisDescriptor) -> Self {
        Self { data: DMatrix::zeros(basis.dim(), basis.dim()), basis }
    }

    pub fn from_diagonal(diag: &[C64], basis: BasisDescriptor) -> Result<Self, OpError> {
        let d = DVector::from_column_slice(diag);
        Self::new(DMatrix::from_diagonal(&d), basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> BasisDescriptor {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint(), basis: self.basis }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { data: &self.data * s, basis: self.basis }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M − M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITIAN_TOL
    }

    /// `max |U†U − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.data.adjoint() * &self.data;
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        (p - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.data * v
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.basis, other.basis, "operator basis mismatch");
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.basis)?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.data[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&OperatorMatrix> for &OperatorMatrix {
            type Output = OperatorMatrix;
            fn $m(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                self.check_same(rhs);
                OperatorMatrix { data: &self.data $op &rhs.data, basis: self.basis }
            }
        }
        impl $tr<OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $m(self, rhs: OperatorMatrix) -> OperatorMatrix {
                &self $op &rhs
            }
        }
        impl $tr<&OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $m(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&OperatorMatrix> for OperatorMatrix {
    fn add_assign(&mut self, rhs: &OperatorMatrix) {
        self.check_same(rhs);
        self.data += &rhs.data;
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, s: C64) -> OperatorMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, s: f64) -> OperatorMatrix {
        self.scale(C64::new(s, 0.0))
    }
}

impl Mul<C64> for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, s: C64) -> OperatorMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, s: f64) -> OperatorMatrix {
        self.scale(C64::new(s, 0.0))
    }
}

impl Neg for OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix { data: -self.data, basis: self.basis }
    }
}

/// Cavity annihilation operator on Fock levels `0..=n_max`.
pub fn fock_annihilation(n_max: usize) -> OperatorMatrix {
    let d = n_max + 1;
    let mut m = DMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix { data: m, basis: BasisDescriptor::cavity(n_max) }
}

/// 2×2 Pauli-family matrix in `(e, g)` order.
pub fn single_qubit(kind: PauliKind) -> OperatorMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match kind {
        PauliKind::X => [o, l, l, o],
        PauliKind::Y => [o, -i, i, o],
        PauliKind::Z => [l, o, o, -l],
        PauliKind::Plus => [o, l, o, o],
        PauliKind::Minus => [o, o, l, o],
    };
    OperatorMatrix {
        data: DMatrix::from_row_slice(2, 2, &entries),
        basis: BasisDescriptor::SINGLE_QUBIT,
    }
}

/// Kronecker product of the factors, left to right.
pub fn tensor(ops: &[&OperatorMatrix]) -> Result<OperatorMatrix, OpError> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| OpError::Layout("empty factor list".into()))?;
    let mut acc = (*first).clone();
    for op in rest {
        let basis = acc.basis.append(op.basis)?;
        acc = OperatorMatrix { data: acc.data.kronecker(&op.data), basis };
    }
    Ok(acc)
}

/// Single-qubit operator on `qubit` (1 or 2) embedded in the composite space.
pub fn pauli(kind: PauliKind, qubit: usize, n_max: usize) -> OperatorMatrix {
    assert!(qubit == 1 || qubit == 2, "qubit index must be 1 or 2");
    let s = single_qubit(kind);
    let id2 = OperatorMatrix::identity(BasisDescriptor::SINGLE_QUBIT);
    let idc = OperatorMatrix::identity(BasisDescriptor::cavity(n_max));
    let factors: [&OperatorMatrix; 3] =
        if qubit == 1 { [&s, &id2, &idc] } else { [&id2, &s, &idc] };
    tensor(&factors).expect("fixed layout is valid")
}

/// Cavity annihilation operator embedded in the composite space.
pub fn cavity_annihilation(n_max: usize) -> OperatorMatrix {
    let id4 = OperatorMatrix::identity(BasisDescriptor::TWO_QUBIT);
    tensor(&[&id4, &fock_annihilation(n_max)]).expect("fixed layout is valid")
}

/// Embeds a two-qubit operator as `op ⊗ I_cavity`.
pub fn lift_two_qubit(op: &OperatorMatrix, n_max: usize) -> Result<OperatorMatrix, OpError> {
    if op.basis != BasisDescriptor::TWO_QUBIT {
        return Err(OpError::DimensionMismatch { expected: 4, found: op.dim() });
    }
    tensor(&[op, &OperatorMatrix::identity(BasisDescriptor::cavity(n_max))])
}

/// Restricts a composite operator to the two-qubit block with `n` photons.
pub fn photon_block(op: &OperatorMatrix, n: usize) -> Result<OperatorMatrix, OpError> {
    let n_max = op
        .basis
        .n_max()
        .filter(|_| op.basis.qubits == 2)
        .ok_or_else(|| OpError::Layout("photon block needs the composite space".into()))?;
    if n > n_max {
        return Err(OpError::Layout(format!("photon number {n} exceeds n_max {n_max}")));
    }
    let idx: Vec<usize> = TwoQubitState::ALL.iter().map(|s| s.composite_index(n, n_max)).collect();
    let m = DMatrix::from_fn(4, 4, |i, j| op.data[(idx[i], idx[j])]);
    OperatorMatrix::new(m, BasisDescriptor::TWO_QUBIT)
}

/// `e^{−iHt}` for Hermitian `H`, via eigendecomposition.
pub fn expm(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix, OpError> {
    let deviation = h.hermiticity_error();
    if deviation > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(OpError::NotHermitian { deviation });
    }
    Ok(OperatorMatrix { data: hermitian_propagator(&h.data, t), basis: h.basis })
}

/// `e^{−iHt}` on a raw matrix assumed Hermitian.
pub(crate) fn hermitian_propagator(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * t));
    let mut vd = v.clone();
    for (j, mut col) in vd.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    vd * v.adjoint()
}

/// Composite basis state `|label, n⟩`.
pub fn basis_state(label: TwoQubitState, n: usize, n_max: usize) -> DVector<C64> {
    let mut v = DVector::zeros(4 * (n_max + 1));
    v[label.composite_index(n, n_max)] = C64::new(1.0, 0.0);
    v
}
