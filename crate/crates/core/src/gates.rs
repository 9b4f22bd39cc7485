//! Named gates of the representation and the `R` matrix.
//!
//! Qubit indices are 1-based throughout. For a braid group on `n` strands the
//! register has `n + 1` qubits.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::qlinalg::{
    self, commutator_residual, embed_local, kron, matmul, max_entry_distance, Operator, C64, I,
    ONE, ZERO,
};
use crate::report::{CheckReport, Stopwatch};

/// Exact residual bound for identities between signed permutation matrices.
const EXACT_TOL: f64 = 1e-12;

/// Strand count and odd modulus of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GateParams {
    n: usize,
    m: u32,
}

impl GateParams {
    pub fn new(n: usize, m: u32) -> Result<Self> {
        validate_m(m)?;
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "strand count n must be at least 2, got {n}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn qubits(&self) -> usize {
        self.n + 1
    }

    pub fn nu(&self) -> f64 {
        nu(self.m)
    }

    pub fn is_m3(&self) -> bool {
        self.m == 3
    }

    /// Angle of the exponential in the generator decomposition of `R`:
    /// `2π/3` for `m = 3`, `π/m` otherwise.
    pub fn angle(&self) -> f64 {
        if self.is_m3() {
            2.0 * PI / 3.0
        } else {
            PI / self.m as f64
        }
    }
}

pub fn validate_m(m: u32) -> Result<()> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "m must be an odd integer >= 3, got {m}"
        )));
    }
    Ok(())
}

fn nu(m: u32) -> f64 {
    if m == 3 {
        -1.0
    } else {
        1.0
    }
}

/// Single-qubit factor of a [`PauliWord`]; `XZ` is the ordered product `X·Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Z,
    XZ,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::XZ,
        }
    }

    pub fn matrix(self) -> Operator {
        let rows = match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
            Pauli::XZ => [[ZERO, -ONE], [ONE, ZERO]],
        };
        Operator::from_rows(rows).expect("2x2")
    }
}

/// Signed tensor product `i^phase · ⊗_q X^{x_q} Z^{z_q}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliWord {
    x: Vec<bool>,
    z: Vec<bool>,
    phase: u8,
}

impl PauliWord {
    pub fn identity(qubits: usize) -> Self {
        Self {
            x: vec![false; qubits],
            z: vec![false; qubits],
            phase: 0,
        }
    }

    fn single(i: usize, qubits: usize, x: bool, z: bool) -> Result<Self> {
        check_qubit(i, qubits)?;
        let mut w = Self::identity(qubits);
        w.x[i - 1] = x;
        w.z[i - 1] = z;
        Ok(w)
    }

    pub fn x(i: usize, qubits: usize) -> Result<Self> {
        Self::single(i, qubits, true, false)
    }

    pub fn z(i: usize, qubits: usize) -> Result<Self> {
        Self::single(i, qubits, false, true)
    }

    pub fn qubit_count(&self) -> usize {
        self.x.len()
    }

    /// Phase as a power of `i`, in `0..4`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_value(&self) -> C64 {
        [ONE, I, -ONE, -I][self.phase as usize]
    }

    pub fn factor(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.x[i - 1], self.z[i - 1])
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.qubit_count() != rhs.qubit_count() {
            return Err(Error::DimensionMismatch {
                left: self.qubit_count(),
                right: rhs.qubit_count(),
            });
        }
        // (X^a Z^b)(X^c Z^d) = (-1)^{bc} X^{a+c} Z^{b+d}
        let flips = self
            .z
            .iter()
            .zip(&rhs.x)
            .filter(|(&b, &c)| b && c)
            .count();
        Ok(Self {
            x: self.x.iter().zip(&rhs.x).map(|(a, c)| a ^ c).collect(),
            z: self.z.iter().zip(&rhs.z).map(|(b, d)| b ^ d).collect(),
            phase: ((self.phase as usize + rhs.phase as usize + 2 * flips) % 4) as u8,
        })
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same width")
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|b| !b)
    }

    /// True iff the word equals `+I` exactly.
    pub fn is_plus_identity(&self) -> bool {
        self.phase == 0 && self.is_identity_up_to_phase()
    }

    pub fn to_operator(&self) -> Operator {
        let mut op = Operator::identity(1);
        for q in 1..=self.qubit_count() {
            op = kron(&op, &self.factor(q).matrix());
        }
        op.scale(self.phase_value())
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        let mut any = false;
        for q in 1..=self.qubit_count() {
            match self.factor(q) {
                Pauli::I => continue,
                Pauli::X => write!(f, "X{q}")?,
                Pauli::Z => write!(f, "Z{q}")?,
                Pauli::XZ => write!(f, "X{q}Z{q}")?,
            }
            any = true;
        }
        if !any {
            f.write_str("I")?;
        }
        Ok(())
    }
}

fn check_qubit(i: usize, qubits: usize) -> Result<()> {
    if i == 0 || i > qubits {
        return Err(Error::IndexOutOfRange {
            what: "qubit",
            index: i as i64,
            lo: 1,
            hi: qubits as i64,
        });
    }
    Ok(())
}

fn check_gate_index(i: usize, params: &GateParams) -> Result<()> {
    if i < 2 || i > params.n() {
        return Err(Error::IndexOutOfRange {
            what: "gate",
            index: i as i64,
            lo: 2,
            hi: params.n() as i64,
        });
    }
    Ok(())
}

pub fn pauli_x(i: usize, qubits: usize) -> Result<Operator> {
    check_qubit(i, qubits)?;
    embed_local(&Pauli::X.matrix(), i, qubits)
}

pub fn pauli_z(i: usize, qubits: usize) -> Result<Operator> {
    check_qubit(i, qubits)?;
    embed_local(&Pauli::Z.matrix(), i, qubits)
}

/// Flips the middle qubit of `|abc⟩` exactly when `a ≠ c`.
pub fn xor_controlled_not() -> Operator {
    let images: Vec<usize> = (0..8)
        .map(|s| {
            let (a, c) = (s >> 2 & 1, s & 1);
            if a == c {
                s
            } else {
                s ^ 0b010
            }
        })
        .collect();
    Operator::from_basis_map(&images).expect("8 states")
}

/// `NOT_i`: the XOR-controlled NOT on qubits `(i-1, i, i+1)` of `n + 1`.
pub fn not_i(i: usize, params: &GateParams) -> Result<Operator> {
    check_gate_index(i, params)?;
    embed_local(&xor_controlled_not(), i - 1, params.qubits())
}

/// `cos θ · I + i sin θ · P` for a Pauli word with `P² = +I`.
pub fn exp_involution(p: &PauliWord, theta: f64) -> Result<Operator> {
    if !p.square().is_plus_identity() {
        return Err(Error::NotInvolution);
    }
    let dim = 1 << p.qubit_count();
    Operator::identity(dim)
        .scale(C64::new(theta.cos(), 0.0))
        .add(&p.to_operator().scale(C64::new(0.0, theta.sin())))
}

/// The 8×8 gYB matrix, assembled entrywise as a block sum of two 4×4 blocks.
pub fn build_r_direct(m: u32) -> Result<Operator> {
    validate_m(m)?;
    let t = PI / m as f64;
    let c = C64::new(t.cos(), 0.0);
    let nc = c * nu(m);
    let is = C64::new(0.0, t.sin());
    let upper = [
        [nc, ZERO, is, ZERO],
        [ZERO, -is, ZERO, c],
        [is, ZERO, nc, ZERO],
        [ZERO, c, ZERO, -is],
    ];
    let lower = [
        [-is, ZERO, c, ZERO],
        [ZERO, nc, ZERO, is],
        [c, ZERO, -is, ZERO],
        [ZERO, is, ZERO, nc],
    ];
    let mut r = Operator::zeros(8);
    for row in 0..4 {
        for col in 0..4 {
            r.set(row, col, upper[row][col]);
            r.set(row + 4, col + 4, lower[row][col]);
        }
    }
    Ok(r)
}

/// `R` as a gate product:
/// `e^{(2πi/3) X_2} · Z_1 Z_3 · Λ` for `m = 3` and
/// `e^{(πi/m) Z_1 X_2 Z_3} · Λ` for `m ≥ 5`, where `Λ` is the
/// XOR-controlled NOT.
pub fn build_r_decomposed(m: u32) -> Result<Operator> {
    validate_m(m)?;
    let params = GateParams::new(2, m)?;
    let h = h_generator(2, &params)?;
    let rotation = exp_involution(&h, params.angle())?;
    let lambda = xor_controlled_not();
    if params.is_m3() {
        let zz = matmul(&pauli_z(1, 3)?, &pauli_z(3, 3)?)?;
        matmul(&rotation, &matmul(&zz, &lambda)?)
    } else {
        matmul(&rotation, &lambda)
    }
}

/// `H_i = X_i` for `m = 3` and `Z_{i-1} X_i Z_{i+1}` for `m ≥ 5`.
pub fn h_generator(i: usize, params: &GateParams) -> Result<PauliWord> {
    check_gate_index(i, params)?;
    let q = params.qubits();
    let x = PauliWord::x(i, q)?;
    if params.is_m3() {
        Ok(x)
    } else {
        PauliWord::z(i - 1, q)?
            .mul(&x)?
            .mul(&PauliWord::z(i + 1, q)?)
    }
}

/// `S_{k,l} = H_k H_{k+1} ⋯ H_l` with phases tracked exactly.
pub fn s_kl(k: usize, l: usize, params: &GateParams) -> Result<PauliWord> {
    check_gate_index(k, params)?;
    check_gate_index(l, params)?;
    if k > l {
        return Err(Error::InvalidParameter(format!(
            "S_(k,l) needs k <= l, got ({k}, {l})"
        )));
    }
    (k..=l).try_fold(PauliWord::identity(params.qubits()), |acc, i| {
        acc.mul(&h_generator(i, params)?)
    })
}

/// Each clause of the Pauli/NOT commutation lemma as matrix identities on
/// `n + 1` qubits, one report per clause.
pub fn comm_identities_check(params: &GateParams) -> Result<Vec<CheckReport>> {
    let (n, m, q) = (params.n(), params.m(), params.qubits());
    let xs: Vec<Operator> = (1..=q).map(|i| pauli_x(i, q)).collect::<Result<_>>()?;
    let zs: Vec<Operator> = (1..=q).map(|i| pauli_z(i, q)).collect::<Result<_>>()?;
    let nots: Vec<Operator> = (2..=n).map(|i| not_i(i, params)).collect::<Result<_>>()?;
    let x = |i: usize| &xs[i - 1];
    let z = |i: usize| &zs[i - 1];
    let not = |i: usize| &nots[i - 2];

    let mut reports = Vec::with_capacity(5);

    let watch = Stopwatch::start();
    let mut r = CheckReport::new(n, m, "comm_identities.1 [X_i,X_j]=0");
    for i in 1..=q {
        for j in 1..=q {
            r.record(|| format!("[X{i},X{j}]"), commutator_residual(x(i), x(j))?, EXACT_TOL);
        }
    }
    reports.push(r.finish(watch));

    let watch = Stopwatch::start();
    let mut r = CheckReport::new(n, m, "comm_identities.2 [Z_i,Z_j]=0");
    for i in 1..=q {
        for j in 1..=q {
            r.record(|| format!("[Z{i},Z{j}]"), commutator_residual(z(i), z(j))?, EXACT_TOL);
        }
    }
    reports.push(r.finish(watch));

    let watch = Stopwatch::start();
    let mut r = CheckReport::new(n, m, "comm_identities.3 X_iZ_i=-Z_iX_i, [X_i,Z_j]=0");
    for i in 1..=q {
        for j in 1..=q {
            if i == j {
                let lhs = matmul(x(i), z(i))?;
                let rhs = matmul(z(i), x(i))?.neg();
                r.record(|| format!("X{i}Z{i}+Z{i}X{i}"), max_entry_distance(&lhs, &rhs)?, EXACT_TOL);
            } else {
                r.record(|| format!("[X{i},Z{j}]"), commutator_residual(x(i), z(j))?, EXACT_TOL);
            }
        }
    }
    reports.push(r.finish(watch));

    let watch = Stopwatch::start();
    let mut r = CheckReport::new(n, m, "comm_identities.4 Z_iNOT_i=Z_{i-1}Z_{i+1}NOT_iZ_i, [Z_i,NOT_j]=0");
    for i in 2..=n {
        let lhs = matmul(z(i), not(i))?;
        let rhs = qlinalg::product([z(i - 1), z(i + 1), not(i), z(i)], 1 << q)?;
        r.record(|| format!("Z{i}NOT{i}"), max_entry_distance(&lhs, &rhs)?, EXACT_TOL);
    }
    for i in 1..=q {
        for j in 2..=n {
            if i != j {
                r.record(|| format!("[Z{i},NOT{j}]"), commutator_residual(z(i), not(j))?, EXACT_TOL);
            }
        }
    }
    reports.push(r.finish(watch));

    let watch = Stopwatch::start();
    let mut r = CheckReport::new(n, m, "comm_identities.5 NOT_iX_{i-1}=X_{i-1}X_iNOT_i, NOT_iX_{i+1}=X_iX_{i+1}NOT_i, [NOT_i,X_j]=0");
    for i in 2..=n {
        let lhs = matmul(not(i), x(i - 1))?;
        let rhs = qlinalg::product([x(i - 1), x(i), not(i)], 1 << q)?;
        r.record(|| format!("NOT{i}X{}", i - 1), max_entry_distance(&lhs, &rhs)?, EXACT_TOL);
        let lhs = matmul(not(i), x(i + 1))?;
        let rhs = qlinalg::product([x(i), x(i + 1), not(i)], 1 << q)?;
        r.record(|| format!("NOT{i}X{}", i + 1), max_entry_distance(&lhs, &rhs)?, EXACT_TOL);
        for j in 1..=q {
            if j != i - 1 && j != i + 1 {
                r.record(|| format!("[NOT{i},X{j}]"), commutator_residual(not(i), x(j))?, EXACT_TOL);
            }
        }
    }
    reports.push(r.finish(watch));

    Ok(reports)
}

/// `NOT_i² = Id` and `NOT_i NOT_{i+1} NOT_i = NOT_{i+1} NOT_i NOT_{i+1}`.
pub fn not_identities_check(params: &GateParams) -> Result<Vec<CheckReport>> {
    let (n, m, q) = (params.n(), params.m(), params.qubits());
    let nots: Vec<Operator> = (2..=n).map(|i| not_i(i, params)).collect::<Result<_>>()?;
    let not = |i: usize| &nots[i - 2];
    let id = Operator::identity_qubits(q);

    let watch = Stopwatch::start();
    let mut squares = CheckReport::new(n, m, "not_identities.1 NOT_i^2=Id");
    for i in 2..=n {
        squares.record(
            || format!("NOT{i}^2"),
            max_entry_distance(&matmul(not(i), not(i))?, &id)?,
            EXACT_TOL,
        );
    }
    let squares = squares.finish(watch);

    let watch = Stopwatch::start();
    let mut braid = CheckReport::new(n, m, "not_identities.2 NOT_iNOT_{i+1}NOT_i=NOT_{i+1}NOT_iNOT_{i+1}");
    for i in 2..n {
        let lhs = qlinalg::product([not(i), not(i + 1), not(i)], 1 << q)?;
        let rhs = qlinalg::product([not(i + 1), not(i), not(i + 1)], 1 << q)?;
        braid.record(|| format!("braid at {i}"), max_entry_distance(&lhs, &rhs)?, EXACT_TOL);
    }
    Ok(vec![squares, braid.finish(watch)])
}
