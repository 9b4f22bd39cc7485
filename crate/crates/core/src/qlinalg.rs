//! Dense complex linear algebra on qubit registers.
//!
//! Basis states are ordered lexicographically over qubit strings: qubit 1 is
//! the most significant bit of the basis index, so `|10⟩` has index 2.

use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix of dimension `2^q`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = ONE;
        }
        out
    }

    pub fn identity_qubits(qubits: usize) -> Self {
        Self::identity(1 << qubits)
    }

    /// Builds an operator from row-major entries. The length must be a
    /// perfect square whose side is a power of two.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        if !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        Self::from_row_major(rows.iter().flatten().copied().collect())
    }

    /// Permutation matrix sending basis state `j` to `images[j]`.
    pub fn from_basis_map(images: &[usize]) -> Result<Self> {
        let dim = images.len();
        if !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let mut out = Self::zeros(dim);
        for (col, &row) in images.iter().enumerate() {
            if row >= dim {
                return Err(Error::IndexOutOfRange {
                    what: "basis image",
                    index: row as i64,
                    lo: 0,
                    hi: dim as i64 - 1,
                });
            }
            out.data[row * dim + col] = ONE;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Applies the operator to a state vector.
    pub fn apply(&self, state: &[C64]) -> Result<Vec<C64>> {
        if state.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: state.len(),
            });
        }
        Ok(self
            .data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(state).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entrywise modulus of `self·self† − I`.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = matmul(self, &self.dagger()).expect("square dims agree");
        max_entry_distance(&prod, &Operator::identity(self.dim)).expect("same dims")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() < tol
    }

    /// Text export: `{"dim": d, "entries": [[re, im], ...]}` in row-major
    /// order, every number printed with 17 significant digits.
    pub fn to_export_text(&self) -> String {
        let mut s = String::with_capacity(self.data.len() * 50 + 32);
        write!(s, "{{\"dim\": {}, \"entries\": [", self.dim).unwrap();
        for (idx, z) in self.data.iter().enumerate() {
            if idx > 0 {
                s.push_str(", ");
            }
            write!(s, "[{:.16e}, {:.16e}]", z.re, z.im).unwrap();
        }
        s.push_str("]}");
        s
    }

    pub fn from_export_text(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Exported {
            dim: usize,
            entries: Vec<[f64; 2]>,
        }
        let parsed: Exported =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if parsed.entries.len() != parsed.dim * parsed.dim {
            return Err(Error::Parse(format!(
                "expected {} entries for dim {}, found {}",
                parsed.dim * parsed.dim,
                parsed.dim,
                parsed.entries.len()
            )));
        }
        Self::from_row_major(
            parsed
                .entries
                .into_iter()
                .map(|[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks_exact(self.dim) {
            for z in row {
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check_dims(a: &Operator, b: &Operator) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

/// Computational basis vector `|index⟩` on `qubits` qubits.
pub fn basis_state(qubits: usize, index: usize) -> Vec<C64> {
    let mut v = vec![ZERO; 1 << qubits];
    v[index] = ONE;
    v
}

/// Basis index of a bit string such as `"0110"` (qubit 1 first).
pub fn basis_index(label: &str) -> Result<usize> {
    let label = label.trim().trim_start_matches('|').trim_end_matches('⟩');
    let label = label.trim_end_matches('>');
    if label.is_empty() {
        return Err(Error::Parse("empty basis label".into()));
    }
    label.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::Parse(format!("bad basis label character {c:?}"))),
    })
}

/// Kronecker product; `a` acts on the most significant qubits.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let (da, db) = (a.dim, b.dim);
    let dim = da * db;
    let mut out = Operator::zeros(dim);
    for ar in 0..da {
        for ac in 0..da {
            let x = a.data[ar * da + ac];
            if x == ZERO {
                continue;
            }
            for br in 0..db {
                let row = (ar * db + br) * dim + ac * db;
                let src = &b.data[br * db..(br + 1) * db];
                for (dst, y) in out.data[row..row + db].iter_mut().zip(src) {
                    *dst = x * y;
                }
            }
        }
    }
    out
}

fn placement(op: &Operator, start: usize, total: usize) -> Result<(usize, usize)> {
    let k = op.qubits();
    if start == 0 || start - 1 + k > total {
        return Err(Error::Placement {
            op_qubits: k,
            start,
            total,
        });
    }
    let high = start - 1;
    let low = total - high - k;
    Ok((high, low))
}

/// `I^{⊗(start-1)} ⊗ op ⊗ I^{⊗rest}` on `total` qubits (1-based `start`).
pub fn embed_local(op: &Operator, start: usize, total: usize) -> Result<Operator> {
    let (high, low) = placement(op, start, total)?;
    Ok(kron(
        &kron(&Operator::identity_qubits(high), op),
        &Operator::identity_qubits(low),
    ))
}

/// Offsets of the `2^k` block states and the list of block base indices.
fn local_layout(k: usize, high: usize, low: usize) -> (Vec<usize>, Vec<usize>) {
    let offsets = (0..1usize << k).map(|j| j << low).collect();
    let mut bases = Vec::with_capacity(1 << (high + low));
    for h in 0..1usize << high {
        for l in 0..1usize << low {
            bases.push((h << (k + low)) | l);
        }
    }
    (offsets, bases)
}

/// Applies `op` (on `k` qubits) at qubits `start..start+k` of a state vector
/// without building the full Kronecker product.
pub fn apply_local_vec(op: &Operator, start: usize, state: &[C64]) -> Result<Vec<C64>> {
    if !state.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(state.len()));
    }
    let total = state.len().trailing_zeros() as usize;
    let (high, low) = placement(op, start, total)?;
    let (offsets, bases) = local_layout(op.qubits(), high, low);
    let d = op.dim;
    let mut out = vec![ZERO; state.len()];
    for base in bases {
        for i in 0..d {
            let row = &op.data[i * d..(i + 1) * d];
            out[base + offsets[i]] = row
                .iter()
                .zip(&offsets)
                .map(|(a, &off)| a * state[base + off])
                .sum();
        }
    }
    Ok(out)
}

/// Left-multiplies `matrix` by the embedding of `op` at `start`, i.e.
/// `embed_local(op, start, q) · matrix`, working block by block.
pub fn apply_local(op: &Operator, start: usize, matrix: &Operator) -> Result<Operator> {
    let total = matrix.qubits();
    let (high, low) = placement(op, start, total)?;
    let (offsets, bases) = local_layout(op.qubits(), high, low);
    let d = op.dim;
    let n = matrix.dim;
    let mut out = Operator::zeros(n);
    for base in bases {
        for i in 0..d {
            let dst_row = (base + offsets[i]) * n;
            for j in 0..d {
                let a = op.data[i * d + j];
                if a == ZERO {
                    continue;
                }
                let src_row = (base + offsets[j]) * n;
                let (dst, src) = (dst_row, src_row);
                for c in 0..n {
                    let v = a * matrix.data[src + c];
                    out.data[dst + c] += v;
                }
            }
        }
    }
    Ok(out)
}

pub fn matmul(a: &Operator, b: &Operator) -> Result<Operator> {
    check_dims(a, b)?;
    let n = a.dim;
    let mut out = Operator::zeros(n);
    for r in 0..n {
        let out_row = &mut out.data[r * n..(r + 1) * n];
        for k in 0..n {
            let x = a.data[r * n + k];
            if x == ZERO {
                continue;
            }
            for (dst, y) in out_row.iter_mut().zip(&b.data[k * n..(k + 1) * n]) {
                *dst += x * y;
            }
        }
    }
    Ok(out)
}

/// Product of a sequence of equally sized operators, left to right.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a Operator>, dim: usize) -> Result<Operator> {
    factors
        .into_iter()
        .try_fold(Operator::identity(dim), |acc, f| matmul(&acc, f))
}

/// `a^k` by repeated squaring.
pub fn matpow(a: &Operator, mut k: u64) -> Operator {
    let mut result = Operator::identity(a.dim);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = matmul(&result, &base).expect("same dims");
        }
        k >>= 1;
        if k > 0 {
            base = matmul(&base, &base).expect("same dims");
        }
    }
    result
}

/// Largest entrywise modulus of `a − b`.
pub fn max_entry_distance(a: &Operator, b: &Operator) -> Result<f64> {
    check_dims(a, b)?;
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

pub fn approx_eq(a: &Operator, b: &Operator, tol: f64) -> Result<bool> {
    Ok(max_entry_distance(a, b)? < tol)
}

/// Largest entrywise modulus of the commutator `ab − ba`.
pub fn commutator_residual(a: &Operator, b: &Operator) -> Result<f64> {
    max_entry_distance(&matmul(a, b)?, &matmul(b, a)?)
}

/// Largest entrywise distance between two state vectors.
pub fn vec_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Fingerprint of an operator: every real and imaginary part is rounded to
/// the nearest multiple of `grid`, and the rounded grid is hashed with
/// SHA-256.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey([u8; 32]);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in &self.0[..8] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..)")
    }
}

pub fn canonical_key(a: &Operator, grid: f64) -> Result<CanonicalKey> {
    if !(grid > 0.0) {
        return Err(Error::InvalidParameter(format!("grid must be positive, got {grid}")));
    }
    let mut hasher = Sha256::new();
    hasher.update((a.dim as u64).to_le_bytes());
    let mut buf = Vec::with_capacity(a.data.len() * 16);
    for z in &a.data {
        let re = (z.re / grid).round() as i64;
        let im = (z.im / grid).round() as i64;
        buf.extend_from_slice(&re.to_le_bytes());
        buf.extend_from_slice(&im.to_le_bytes());
    }
    hasher.update(&buf);
    Ok(CanonicalKey(hasher.finalize().into()))
}
