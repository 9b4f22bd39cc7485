//! Exact model of the image of the representation as `Z_m^{C(n,2)} ⋊ S_n`.
//!
//! The abelian factor is generated by one matrix per interval `2 ≤ k ≤ l ≤ n`:
//! `e^{(2πi/3)(-1)^{l-k} S_{k,l}}` for `m = 3` and `-e^{(πi/m)(-1)^{l-k} S_{k,l}}`
//! for `m ≥ 5`. Here the interval `[k, l]` is re-indexed by the unordered pair
//! `{k-1, l} ⊆ {1, …, n}`. Conjugating by the symmetric factor then moves pair
//! coordinates: the generator of the transposition `(j-1, j)` is
//! `Z_{j-1} Z_{j+1} NOT_j` for `m = 3` and `-NOT_j` for `m ≥ 5`.
//!
//! Under this encoding the braid generator `σ_i` is `(e_{i,i+1}, (i i+1))`.

use std::collections::HashSet;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::json;

use crate::braidrep::{operator_order, BraidWord, RepContext};
use crate::error::{Error, Result};
use crate::gates::{exp_involution, not_i, pauli_z, s_kl, xor_controlled_not, GateParams, Pauli};
use crate::qlinalg::{
    apply_local, apply_local_vec, basis_state, canonical_key, commutator_residual, kron, matmul,
    matpow, max_entry_distance, vec_distance, CanonicalKey, Operator, C64,
};
use crate::report::{Backend, CheckReport, EnumerationReport, Stopwatch};

/// Residual bound for identities between exactly representable matrices.
const EXACT_TOL: f64 = 1e-12;

/// Exponent spaces up to this size are enumerated in full by
/// [`gamma_skl_independence_check`]; larger ones are sampled.
const FULL_EXPONENT_LIMIT: u64 = 20_000;
const EXPONENT_SAMPLES: usize = 1000;

/// A bijection of `{1, …, n}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// From 1-based one-line notation, e.g. `[2, 1, 3]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for &x in one_line {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidParameter(format!(
                    "{one_line:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x - 1] = true;
            images.push(x - 1);
        }
        Ok(Self { images })
    }

    /// The transposition of `a` and `b` (1-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        for x in [a, b] {
            if x == 0 || x > n {
                return Err(Error::IndexOutOfRange {
                    what: "transposition point",
                    index: x as i64,
                    lo: 1,
                    hi: n as i64,
                });
            }
        }
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `π(x)` for 1-based `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ContextMismatch(
                format!("S_{}", self.n()),
                format!("S_{}", other.n()),
            ));
        }
        Ok(Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Self { images }
    }

    /// Word `[j_1, …, j_r]` with `self = τ_{j_1} ∘ ⋯ ∘ τ_{j_r}`, where
    /// `τ_j = (j, j+1)`. Obtained by bubble sort, so it is deterministic and
    /// has length equal to the inversion count.
    pub fn adjacent_decomposition(&self) -> Vec<usize> {
        // right-composing with τ_j swaps positions j, j+1 of the image array
        let mut arr = self.images.clone();
        let mut swaps = Vec::new();
        let n = arr.len();
        for pass in 0..n {
            let mut swapped = false;
            for j in 0..n.saturating_sub(1 + pass) {
                if arr[j] > arr[j + 1] {
                    arr.swap(j, j + 1);
                    swaps.push(j + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        swaps.reverse();
        swaps
    }

    /// Lexicographic rank in `0..n!` (Lehmer code).
    pub fn rank(&self) -> u64 {
        let n = self.n();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&x| x < self.images[i])
                .count() as u64;
            rank = rank * (n - i) as u64 + smaller;
        }
        rank
    }

    pub fn unrank(n: usize, mut rank: u64) -> Self {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = (n - i) as u64;
            digits[i] = (rank % base) as usize;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Self { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.one_line().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// Number of unordered pairs in `{1, …, n}`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs `(a, b)`, `a < b`, in coordinate order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect()
}

/// Coordinate index of the unordered pair `{a, b}` (1-based, `a ≠ b`).
pub fn pair_index(a: usize, b: usize, n: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    debug_assert!(a >= 1 && b <= n && a < b);
    // pairs before row a, then offset within the row
    (a - 1) * n - (a - 1) * a / 2 + (b - a - 1)
}

/// Pair `{k-1, l}` of the interval `[k, l]`.
pub fn interval_to_pair(k: usize, l: usize) -> (usize, usize) {
    (k - 1, l)
}

/// Interval `[a+1, b]` of the pair `{a, b}`.
pub fn pair_to_interval(a: usize, b: usize) -> (usize, usize) {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    (a + 1, b)
}

/// Residues mod `m` indexed by unordered pairs of `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    n: usize,
    m: u32,
    coords: Vec<u32>,
}

impl ExponentVector {
    pub fn zero(n: usize, m: u32) -> Self {
        Self {
            n,
            m,
            coords: vec![0; pair_count(n)],
        }
    }

    pub fn from_coords(n: usize, m: u32, coords: Vec<u32>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates for n={n}, got {}",
                pair_count(n),
                coords.len()
            )));
        }
        Ok(Self {
            n,
            m,
            coords: coords.into_iter().map(|c| c % m).collect(),
        })
    }

    /// Unit vector at the pair `{a, b}`.
    pub fn unit(n: usize, m: u32, a: usize, b: usize) -> Result<Self> {
        if a == b || a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidParameter(format!(
                "{{{a}, {b}}} is not a pair in 1..={n}"
            )));
        }
        let mut v = Self::zero(n, m);
        v.coords[pair_index(a, b, n)] = 1;
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.coords[pair_index(a, b, self.n)]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::ContextMismatch(
                format!("n={}, m={}", self.n, self.m),
                format!("n={}, m={}", other.n, other.m),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            n: self.n,
            m: self.m,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (a + b) % self.m)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            m: self.m,
            coords: self.coords.iter().map(|&c| (self.m - c) % self.m).collect(),
        }
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, (a, b)) in pairs(self.n).into_iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}{b}:{}", self.coords[idx])?;
        }
        f.write_str("}")
    }
}

/// Moves the coordinate at `{a, b}` to `{π(a), π(b)}`.
pub fn pair_action(pi: &Permutation, v: &ExponentVector) -> Result<ExponentVector> {
    if pi.n() != v.n {
        return Err(Error::ContextMismatch(
            format!("S_{}", pi.n()),
            format!("vector over n={}", v.n),
        ));
    }
    let mut out = ExponentVector::zero(v.n, v.m);
    for (idx, (a, b)) in pairs(v.n).into_iter().enumerate() {
        out.coords[pair_index(pi.apply(a), pi.apply(b), v.n)] = v.coords[idx];
    }
    Ok(out)
}

/// Normal form `(v, π)` of an element of `Z_m^{C(n,2)} ⋊ S_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageElement {
    pub v: ExponentVector,
    pub perm: Permutation,
}

impl ImageElement {
    pub fn identity(n: usize, m: u32) -> Self {
        Self {
            v: ExponentVector::zero(n, m),
            perm: Permutation::identity(n),
        }
    }

    pub fn new(v: ExponentVector, perm: Permutation) -> Result<Self> {
        if v.n != perm.n() {
            return Err(Error::ContextMismatch(
                format!("vector over n={}", v.n),
                format!("S_{}", perm.n()),
            ));
        }
        Ok(Self { v, perm })
    }

    pub fn n(&self) -> usize {
        self.v.n
    }

    pub fn m(&self) -> u32 {
        self.v.m
    }

    pub fn is_identity(&self) -> bool {
        self.v.is_zero() && self.perm.is_identity()
    }

    /// `(v, π)(w, σ) = (v + π·w, π∘σ)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.v.check_same(&other.v)?;
        Ok(Self {
            v: self.v.add(&pair_action(&self.perm, &other.v)?)?,
            perm: self.perm.compose(&other.perm)?,
        })
    }

    /// `(v, π)⁻¹ = (-π⁻¹·v, π⁻¹)`.
    pub fn inv(&self) -> Self {
        let pinv = self.perm.inverse();
        let v = pair_action(&pinv, &self.v).expect("same n").neg();
        Self { v, perm: pinv }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut out = Self::identity(self.n(), self.m());
        for _ in 0..k {
            out = out.mul(self).expect("same context");
        }
        out
    }

    /// Multiplicative order, searched up to `max_k`.
    pub fn order(&self, max_k: u64) -> Option<u64> {
        let mut power = self.clone();
        for k in 1..=max_k {
            if power.is_identity() {
                return Some(k);
            }
            power = power.mul(self).expect("same context");
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        let exps: serde_json::Map<String, serde_json::Value> = pairs(self.n())
            .into_iter()
            .map(|(a, b)| (format!("{a},{b}"), json!(self.v.get(a, b))))
            .collect();
        json!({ "exponents": exps, "perm": self.perm.one_line() })
    }
}

impl fmt::Display for ImageElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exponents {} perm {}", self.v, self.perm)
    }
}

/// Image of the letter `σ_i` (`i > 0`) or `σ_{|i|}⁻¹` (`i < 0`).
pub fn braid_gen_symbolic(letter: i32, ctx: &RepContext) -> Result<ImageElement> {
    let n = ctx.n();
    let i = letter.unsigned_abs() as usize;
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            what: "braid generator",
            index: letter as i64,
            lo: 1,
            hi: n as i64 - 1,
        });
    }
    let g = ImageElement {
        v: ExponentVector::unit(n, ctx.m(), i, i + 1)?,
        perm: Permutation::transposition(n, i, i + 1)?,
    };
    Ok(if letter > 0 { g } else { g.inv() })
}

pub fn word_to_symbolic(w: &BraidWord, ctx: &RepContext) -> Result<ImageElement> {
    if w.n() != ctx.n() {
        return Err(Error::ContextMismatch(
            format!("word n={}", w.n()),
            format!("context n={}", ctx.n()),
        ));
    }
    w.letters()
        .iter()
        .try_fold(ImageElement::identity(ctx.n(), ctx.m()), |acc, &j| {
            acc.mul(&braid_gen_symbolic(j, ctx)?)
        })
}

fn check_interval(k: usize, l: usize, n: usize) -> Result<()> {
    if k < 2 || l > n || k > l {
        return Err(Error::InvalidParameter(format!(
            "interval [{k}, {l}] must satisfy 2 <= k <= l <= {n}"
        )));
    }
    Ok(())
}

/// Signed rotation angle and global sign of the abelian generator for `[k, l]`.
fn skl_angle_and_sign(k: usize, l: usize, params: &GateParams) -> (f64, f64) {
    let parity = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
    let sign = if params.is_m3() { 1.0 } else { -1.0 };
    (parity * params.angle(), sign)
}

/// Generator of the abelian factor for the interval `2 ≤ k ≤ l ≤ n`.
pub fn gamma_skl_generator_matrix(k: usize, l: usize, ctx: &RepContext) -> Result<Operator> {
    check_interval(k, l, ctx.n())?;
    let (theta, sign) = skl_angle_and_sign(k, l, ctx.params());
    let s = s_kl(k, l, ctx.params())?;
    Ok(exp_involution(&s, theta)?.scale(C64::new(sign, 0.0)))
}

/// Generator of the abelian factor for the pair `{a, b}`.
pub fn pair_generator_matrix(a: usize, b: usize, ctx: &RepContext) -> Result<Operator> {
    let (k, l) = pair_to_interval(a, b);
    gamma_skl_generator_matrix(k, l, ctx)
}

/// The 8×8 block of the symmetric-factor generator, acting on qubits
/// `(k-1, k, k+1)`: `(Z ⊗ I ⊗ Z)·Λ` for `m = 3`, `-Λ` otherwise.
pub fn gamma_not_block(params: &GateParams) -> Operator {
    let lambda = xor_controlled_not();
    if params.is_m3() {
        let zz = kron(&kron(&Pauli::Z.matrix(), &Pauli::I.matrix()), &Pauli::Z.matrix());
        matmul(&zz, &lambda).expect("8x8")
    } else {
        lambda.neg()
    }
}

/// `Z_{k-1} Z_{k+1} NOT_k` for `m = 3`, `-NOT_k` for `m ≥ 5`.
pub fn gamma_not_generator_matrix(k: usize, ctx: &RepContext) -> Result<Operator> {
    let params = ctx.params();
    let not = not_i(k, params)?;
    if params.is_m3() {
        let q = params.qubits();
        crate::qlinalg::product([&pauli_z(k - 1, q)?, &pauli_z(k + 1, q)?, &not], 1 << q)
    } else {
        Ok(not.neg())
    }
}

/// Evaluates normal forms as matrices, caching generator powers.
#[derive(Debug, Clone)]
pub struct ImageEvaluator {
    ctx: RepContext,
    /// `powers[p][e]` is the pair-`p` generator raised to `e < m`.
    powers: Vec<Vec<Operator>>,
    not_block: Operator,
}

impl ImageEvaluator {
    pub fn new(ctx: &RepContext) -> Result<Self> {
        let n = ctx.n();
        let powers = pairs(n)
            .into_iter()
            .map(|(a, b)| {
                let g = pair_generator_matrix(a, b, ctx)?;
                Ok((0..ctx.m() as u64).map(|e| matpow(&g, e)).collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            ctx: ctx.clone(),
            powers,
            not_block: gamma_not_block(ctx.params()),
        })
    }

    pub fn context(&self) -> &RepContext {
        &self.ctx
    }

    /// Product of abelian generators raised to the coordinates of `v`.
    pub fn exponent_matrix(&self, v: &ExponentVector) -> Result<Operator> {
        self.check(v.n, v.m)?;
        let dim = self.ctx.dim();
        v.coords
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .try_fold(Operator::identity(dim), |acc, (p, &e)| {
                matmul(&acc, &self.powers[p][e as usize])
            })
    }

    /// Product of symmetric-factor generators along `word`, where letter `j`
    /// stands for the transposition `(j, j+1)`.
    pub fn transposition_word_matrix(&self, word: &[usize]) -> Result<Operator> {
        let n = self.ctx.n();
        word.iter()
            .rev()
            .try_fold(Operator::identity(self.ctx.dim()), |acc, &j| {
                if j == 0 || j >= n {
                    return Err(Error::IndexOutOfRange {
                        what: "transposition",
                        index: j as i64,
                        lo: 1,
                        hi: n as i64 - 1,
                    });
                }
                // τ_j ↦ generator k = j + 1 on qubits (j, j+1, j+2)
                apply_local(&self.not_block, j, &acc)
            })
    }

    pub fn permutation_matrix(&self, perm: &Permutation) -> Result<Operator> {
        if perm.n() != self.ctx.n() {
            return Err(Error::ContextMismatch(
                format!("S_{}", perm.n()),
                format!("context n={}", self.ctx.n()),
            ));
        }
        self.transposition_word_matrix(&perm.adjacent_decomposition())
    }

    pub fn to_matrix(&self, g: &ImageElement) -> Result<Operator> {
        matmul(&self.exponent_matrix(&g.v)?, &self.permutation_matrix(&g.perm)?)
    }

    fn check(&self, n: usize, m: u32) -> Result<()> {
        if n != self.ctx.n() || m != self.ctx.m() {
            return Err(Error::ContextMismatch(
                format!("n={n}, m={m}"),
                format!("n={}, m={}", self.ctx.n(), self.ctx.m()),
            ));
        }
        Ok(())
    }
}

/// `(v, π) ↦ Π_p G_p^{v_p} · M(π)`.
pub fn symbolic_to_matrix(g: &ImageElement, ctx: &RepContext) -> Result<Operator> {
    ImageEvaluator::new(ctx)?.to_matrix(g)
}

/// Target of conjugating the interval `[k, l]` by the generator for
/// transposition `(j-1, j)`: the new interval and the sign in front of
/// `S_{k,l}`.
pub fn conjugation_table(j: usize, k: usize, l: usize) -> ((usize, usize), f64) {
    if j + 1 == k {
        ((k - 1, l), -1.0)
    } else if j == k && k < l {
        ((k + 1, l), -1.0)
    } else if j == l && k < l {
        ((k, l - 1), -1.0)
    } else if j == l + 1 {
        ((k, l + 1), -1.0)
    } else {
        ((k, l), 1.0)
    }
}

/// Verifies every row of the conjugation tables as matrix identities, for
/// both `S_{k,l}` and the abelian generators, and checks that the table
/// agrees with [`pair_action`] under the interval/pair encoding.
pub fn conjugation_table_check(ctx: &RepContext) -> Result<CheckReport> {
    let watch = Stopwatch::start();
    let (n, m) = (ctx.n(), ctx.m());
    let params = ctx.params();
    let mut report = CheckReport::new(n, m, "conjugation_tables");
    let intervals: Vec<(usize, usize)> = (2..=n).flat_map(|k| (k..=n).map(move |l| (k, l))).collect();
    let s_mats: Vec<Operator> = intervals
        .iter()
        .map(|&(k, l)| Ok(s_kl(k, l, params)?.to_operator()))
        .collect::<Result<_>>()?;
    let gens: Vec<Operator> = intervals
        .iter()
        .map(|&(k, l)| gamma_skl_generator_matrix(k, l, ctx))
        .collect::<Result<_>>()?;
    let find = |k: usize, l: usize| intervals.iter().position(|&iv| iv == (k, l)).expect("valid interval");

    for j in 2..=n {
        let g = gamma_not_generator_matrix(j, ctx)?;
        let tau = Permutation::transposition(n, j - 1, j)?;
        for (idx, &(k, l)) in intervals.iter().enumerate() {
            let ((tk, tl), sign) = conjugation_table(j, k, l);
            let target = find(tk, tl);

            let conj_s = matmul(&matmul(&g, &s_mats[idx])?, &g)?;
            let expected_s = s_mats[target].scale(C64::new(sign, 0.0));
            report.record(
                || format!("G{j} S[{k},{l}] G{j} = {}S[{tk},{tl}]", if sign < 0.0 { "-" } else { "" }),
                max_entry_distance(&conj_s, &expected_s)?,
                EXACT_TOL,
            );

            let conj_e = matmul(&matmul(&g, &gens[idx])?, &g)?;
            report.record(
                || format!("G{j} E[{k},{l}] G{j} = E[{tk},{tl}]"),
                max_entry_distance(&conj_e, &gens[target])?,
                EXACT_TOL,
            );

            let (a, b) = interval_to_pair(k, l);
            let moved = (tau.apply(a).min(tau.apply(b)), tau.apply(a).max(tau.apply(b)));
            report.record_bool(
                || format!("pair action of ({}, {j}) on [{k},{l}] disagrees with table", j - 1),
                moved == interval_to_pair(tk, tl),
            );
        }
    }
    Ok(report.finish(watch))
}

/// Pairwise commutation and exact order `m` of the abelian generators, and
/// injectivity of `v ↦ Π G_p^{v_p}` (full enumeration when the exponent
/// space is small, otherwise [`EXPONENT_SAMPLES`] random vectors).
pub fn gamma_skl_independence_check(ctx: &RepContext) -> Result<CheckReport> {
    let watch = Stopwatch::start();
    let (n, m) = (ctx.n(), ctx.m());
    let tol = ctx.tolerances();
    let mut report = CheckReport::new(n, m, "gamma_skl_independence");
    let eval = ImageEvaluator::new(ctx)?;
    let gens: Vec<Operator> = pairs(n)
        .into_iter()
        .map(|(a, b)| pair_generator_matrix(a, b, ctx))
        .collect::<Result<_>>()?;
    let plist = pairs(n);

    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            report.record(
                || format!("[G{:?}, G{:?}]", plist[i], plist[j]),
                commutator_residual(&gens[i], &gens[j])?,
                EXACT_TOL,
            );
        }
    }
    for (p, g) in plist.iter().zip(&gens) {
        let order = operator_order(g, 2 * m as u64, tol.eq);
        report.record_bool(|| format!("order of G{p:?} is {order:?}, expected {m}"), order == Some(m as u64));
    }

    let zero = ExponentVector::zero(n, m);
    report.record(
        || "zero vector".into(),
        max_entry_distance(&eval.exponent_matrix(&zero)?, &Operator::identity(ctx.dim()))?,
        EXACT_TOL,
    );

    let k = pair_count(n) as u32;
    let space = (m as u64).checked_pow(k);
    let vectors: Vec<ExponentVector> = match space {
        Some(total) if total <= FULL_EXPONENT_LIMIT => (0..total)
            .map(|code| ExponentVector::from_coords(n, m, mixed_radix(code, m, k as usize)))
            .collect::<Result<_>>()?,
        _ => {
            let mut rng = StdRng::seed_from_u64(0x5eed_0000 + (n as u64) * 1000 + m as u64);
            let mut set = HashSet::new();
            while set.len() < EXPONENT_SAMPLES {
                let coords = (0..k).map(|_| rng.gen_range(0..m)).collect();
                set.insert(ExponentVector::from_coords(n, m, coords)?);
            }
            let mut v: Vec<_> = set.into_iter().collect();
            v.sort();
            v
        }
    };
    let keys = vectors
        .par_iter()
        .map(|v| canonical_key(&eval.exponent_matrix(v)?, tol.grid))
        .collect::<Result<Vec<CanonicalKey>>>()?;
    let distinct: HashSet<_> = keys.iter().collect();
    report.record_bool(
        || format!("{} exponent vectors gave only {} distinct matrices", vectors.len(), distinct.len()),
        distinct.len() == vectors.len(),
    );
    Ok(report.finish(watch))
}

fn mixed_radix(mut code: u64, m: u32, digits: usize) -> Vec<u32> {
    (0..digits)
        .map(|_| {
            let d = (code % m as u64) as u32;
            code /= m as u64;
            d
        })
        .collect()
}

/// `m^{n(n-1)/2} · n!`.
pub fn theoretical_order(n: usize, m: u32) -> Result<u64> {
    GateParams::new(n, m)?;
    let overflow = || Error::InvalidParameter(format!("order for (n={n}, m={m}) exceeds u64"));
    let abelian = (m as u64)
        .checked_pow(pair_count(n) as u32)
        .ok_or_else(overflow)?;
    let factorial = (2..=n as u64).try_fold(1u64, |acc, x| acc.checked_mul(x)).ok_or_else(overflow)?;
    abelian.checked_mul(factorial).ok_or_else(overflow)
}

/// Result of a breadth-first closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub order: u64,
    pub truncated: bool,
    pub level_sizes: Vec<u64>,
}

/// Frontier elements processed per parallel batch.
const BATCH: usize = 256;

/// Breadth-first closure of the group generated by local gates
/// `(block, start_qubit)` on `qubits` qubits. Elements are deduplicated by
/// canonical key; only the current frontier is held as matrices. Stops
/// once more than `max_elements` distinct elements are found.
pub fn local_closure(
    generators: &[(Operator, usize)],
    qubits: usize,
    grid: f64,
    max_elements: u64,
) -> Result<Closure> {
    let id = Operator::identity_qubits(qubits);
    let mut seen: HashSet<CanonicalKey> = HashSet::new();
    seen.insert(canonical_key(&id, grid)?);
    let mut frontier = vec![id];
    let mut level_sizes = vec![1u64];
    let mut truncated = false;
    while !frontier.is_empty() && !truncated {
        let mut next = Vec::new();
        for chunk in frontier.chunks(BATCH) {
            let products = chunk
                .par_iter()
                .flat_map_iter(|g| generators.iter().map(move |(block, start)| (g, block, *start)))
                .map(|(g, block, start)| {
                    let h = apply_local(block, start, g)?;
                    let key = canonical_key(&h, grid)?;
                    Ok((key, h))
                })
                .collect::<Result<Vec<_>>>()?;
            for (key, h) in products {
                if seen.insert(key) {
                    next.push(h);
                    if seen.len() as u64 > max_elements {
                        truncated = true;
                        break;
                    }
                }
            }
            if truncated {
                break;
            }
        }
        if !next.is_empty() {
            level_sizes.push(next.len() as u64);
        }
        frontier = next;
    }
    Ok(Closure {
        order: seen.len() as u64,
        truncated,
        level_sizes,
    })
}

/// Order of the group generated by the plain gates `NOT_2, …, NOT_n`.
pub fn not_group_order(n: usize, max_elements: u64) -> Result<Closure> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let lambda = xor_controlled_not();
    let gens: Vec<(Operator, usize)> = (2..=n).map(|k| (lambda.clone(), k - 1)).collect();
    local_closure(&gens, n + 1, 1e-6, max_elements)
}

/// Order of the symmetric factor, generated by the signed or Z-dressed NOT
/// gates of the context.
pub fn gamma_not_group_order(ctx: &RepContext, max_elements: u64) -> Result<Closure> {
    let block = gamma_not_block(ctx.params());
    let gens: Vec<(Operator, usize)> = (2..=ctx.n()).map(|k| (block.clone(), k - 1)).collect();
    local_closure(&gens, ctx.qubits(), ctx.tolerances().grid, max_elements)
}

/// Which generators a witness word is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `NOT_k`.
    PlainNot,
    /// `Z_{k-1}Z_{k+1}NOT_k` (`m = 3`) or `-NOT_k` (`m ≥ 5`).
    GammaNot,
}

/// The witness word lists used to separate group elements on a basis state:
/// for `n = 3` the words `G2, G3, G2G3`; for `n = 4` the seven words
/// `G2, G3, G4, G2G3, G3G4, G3G2, G4G3`. Words are lists of gate indices,
/// multiplied left to right.
pub fn witness_words(n: usize) -> Result<Vec<Vec<usize>>> {
    match n {
        3 => Ok(vec![vec![2], vec![3], vec![2, 3]]),
        4 => Ok(vec![
            vec![2],
            vec![3],
            vec![4],
            vec![2, 3],
            vec![3, 4],
            vec![3, 2],
            vec![4, 3],
        ]),
        _ => Err(Error::InvalidParameter(format!(
            "witness sets exist for n = 3 and n = 4 only, got {n}"
        ))),
    }
}

/// The basis label each witness set is applied to. The `n = 4` label is
/// given on four qubits and is padded with a trailing `0` to `n + 1 = 5`.
pub fn witness_state_label(n: usize) -> Result<String> {
    let base = match n {
        3 => "0100",
        4 => "0110",
        _ => {
            return Err(Error::InvalidParameter(format!(
                "witness sets exist for n = 3 and n = 4 only, got {n}"
            )))
        }
    };
    Ok(format!("{base:0<width$}", width = n + 1))
}

/// Builds the operators of gate-index words for the given generator kind.
pub fn witness_operators(
    words: &[Vec<usize>],
    kind: WitnessKind,
    ctx: &RepContext,
) -> Result<Vec<(String, Operator)>> {
    let prefix = match (kind, ctx.params().is_m3()) {
        (WitnessKind::PlainNot, _) => "NOT",
        (WitnessKind::GammaNot, true) => "ZZNOT",
        (WitnessKind::GammaNot, false) => "-NOT",
    };
    words
        .iter()
        .map(|word| {
            let mats = word
                .iter()
                .map(|&k| match kind {
                    WitnessKind::PlainNot => not_i(k, ctx.params()),
                    WitnessKind::GammaNot => gamma_not_generator_matrix(k, ctx),
                })
                .collect::<Result<Vec<_>>>()?;
            let label = word
                .iter()
                .map(|k| format!("({prefix}{k})"))
                .collect::<String>();
            Ok((label, crate::qlinalg::product(&mats, ctx.dim())?))
        })
        .collect()
}

/// Applies every word to `|state⟩` and passes iff the resulting vectors,
/// phases included, are pairwise distinct.
pub fn witness_distinctness(
    words: &[(String, Operator)],
    state: usize,
    n: usize,
    m: u32,
) -> Result<CheckReport> {
    let watch = Stopwatch::start();
    let mut report = CheckReport::new(n, m, "witness_distinctness");
    let images = words
        .iter()
        .map(|(_, op)| {
            if state >= op.dim() {
                return Err(Error::IndexOutOfRange {
                    what: "basis state",
                    index: state as i64,
                    lo: 0,
                    hi: op.dim() as i64 - 1,
                });
            }
            op.apply(&basis_state(op.qubits(), state))
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let d = vec_distance(&images[i], &images[j]);
            report.record_bool(
                || format!("{} and {} agree on the state", words[i].0, words[j].0),
                d > 1e-9,
            );
        }
    }
    Ok(report.finish(watch))
}

/// Passes iff the operators are pairwise distinct as matrices.
pub fn operator_distinctness(words: &[(String, Operator)], grid: f64, n: usize, m: u32) -> Result<CheckReport> {
    let watch = Stopwatch::start();
    let mut report = CheckReport::new(n, m, "operator_distinctness");
    let keys = words
        .iter()
        .map(|(_, op)| canonical_key(op, grid))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            report.record_bool(|| format!("{} = {}", words[i].0, words[j].0), keys[i] != keys[j]);
        }
    }
    Ok(report.finish(watch))
}

/// Applies a basis-state witness directly to a state vector via local gates;
/// used by tests as an independent path.
pub fn apply_gamma_not_word(word: &[usize], ctx: &RepContext, state: &[C64]) -> Result<Vec<C64>> {
    let block = gamma_not_block(ctx.params());
    word.iter()
        .rev()
        .try_fold(state.to_vec(), |acc, &k| apply_local_vec(&block, k - 1, &acc))
}

/// Breadth-first enumeration of the image from `{ρ(σ_i), ρ(σ_i)⁻¹}`.
pub fn enumerate_image(ctx: &RepContext, max_elements: u64, backend: Backend) -> Result<EnumerationReport> {
    let watch = Stopwatch::start();
    let predicted = theoretical_order(ctx.n(), ctx.m())?;
    let closure = match backend {
        Backend::Matrix => {
            let gens: Vec<(Operator, usize)> = (1..ctx.n())
                .flat_map(|i| [i as i32, -(i as i32)])
                .map(|j| {
                    let (block, start) = ctx.local_letter(j)?;
                    Ok((block.clone(), start))
                })
                .collect::<Result<_>>()?;
            local_closure(&gens, ctx.qubits(), ctx.tolerances().grid, max_elements)?
        }
        Backend::Symbolic => symbolic_closure(ctx, max_elements)?,
    };
    Ok(EnumerationReport {
        n: ctx.n(),
        m: ctx.m(),
        check_name: "image_order".into(),
        backend,
        pass: !closure.truncated && closure.order == predicted,
        order_found: closure.order,
        order_predicted: predicted,
        truncated: closure.truncated,
        level_sizes: closure.level_sizes,
        elapsed_ms: watch.elapsed_ms(),
    })
}

/// Packs `(v, π)` into `rank(π) · m^k + Σ v_p m^p`.
#[derive(Debug, Clone)]
struct SymbolicCodec {
    n: usize,
    m: u64,
    k: usize,
    radix: Vec<u64>,
    abelian: u64,
    space: u64,
}

impl SymbolicCodec {
    fn new(n: usize, m: u32) -> Result<Self> {
        let k = pair_count(n);
        let m = m as u64;
        let mut radix = Vec::with_capacity(k);
        let mut acc = 1u64;
        let overflow = || Error::InvalidParameter(format!("element codes for n={n}, m={m} exceed u64"));
        for _ in 0..k {
            radix.push(acc);
            acc = acc.checked_mul(m).ok_or_else(overflow)?;
        }
        let fact = (2..=n as u64).try_fold(1u64, |a, x| a.checked_mul(x)).ok_or_else(overflow)?;
        let space = acc.checked_mul(fact).ok_or_else(overflow)?;
        Ok(Self {
            n,
            m,
            k,
            radix,
            abelian: acc,
            space,
        })
    }

    fn split(&self, code: u64) -> (u64, Permutation) {
        (code % self.abelian, Permutation::unrank(self.n, code / self.abelian))
    }

    fn digit(&self, vcode: u64, p: usize) -> u64 {
        vcode / self.radix[p] % self.m
    }

    /// Right-multiplies `(v, π)` by `σ_i^{±1} = (±e_{i,i+1}, τ_i)`.
    fn step(&self, vcode: u64, perm: &Permutation, i: usize, positive: bool) -> u64 {
        let p = pair_index(perm.apply(i), perm.apply(i + 1), self.n);
        let d = self.digit(vcode, p);
        let nd = if positive { (d + 1) % self.m } else { (d + self.m - 1) % self.m };
        let v = vcode - d * self.radix[p] + nd * self.radix[p];
        let mut images = perm.images.clone();
        images.swap(i - 1, i);
        Permutation { images }.rank() * self.abelian + v
    }

    fn encode(&self, g: &ImageElement) -> u64 {
        let v: u64 = g
            .v
            .coords
            .iter()
            .zip(&self.radix)
            .map(|(&c, &r)| c as u64 * r)
            .sum();
        g.perm.rank() * self.abelian + v
    }

    fn decode(&self, code: u64, m: u32) -> ImageElement {
        let (v, perm) = self.split(code);
        let coords = (0..self.k).map(|p| self.digit(v, p) as u32).collect();
        ImageElement {
            v: ExponentVector { n: self.n, m, coords },
            perm,
        }
    }
}

/// Dense bitset when the code space is small, hash set otherwise.
enum Visited {
    Bits(Vec<u64>),
    Set(HashSet<u64>),
}

impl Visited {
    const BITSET_LIMIT: u64 = 1 << 30;

    fn new(space: u64) -> Self {
        if space <= Self::BITSET_LIMIT {
            Visited::Bits(vec![0; space.div_ceil(64) as usize])
        } else {
            Visited::Set(HashSet::new())
        }
    }

    fn insert(&mut self, code: u64) -> bool {
        match self {
            Visited::Bits(bits) => {
                let (w, b) = ((code / 64) as usize, code % 64);
                let fresh = bits[w] >> b & 1 == 0;
                bits[w] |= 1 << b;
                fresh
            }
            Visited::Set(set) => set.insert(code),
        }
    }
}

fn symbolic_closure(ctx: &RepContext, max_elements: u64) -> Result<Closure> {
    let codec = SymbolicCodec::new(ctx.n(), ctx.m())?;
    let id = codec.encode(&ImageElement::identity(ctx.n(), ctx.m()));
    let mut visited = Visited::new(codec.space);
    visited.insert(id);
    let mut count = 1u64;
    let mut frontier = vec![id];
    let mut level_sizes = vec![1u64];
    let mut truncated = false;
    let letters: Vec<(usize, bool)> = (1..ctx.n()).flat_map(|i| [(i, true), (i, false)]).collect();
    let codec = &codec;
    let letters = &letters;
    while !frontier.is_empty() && !truncated {
        let candidates: Vec<u64> = frontier
            .par_iter()
            .flat_map_iter(|&code| {
                let (v, perm) = codec.split(code);
                letters
                    .iter()
                    .map(move |&(i, pos)| codec.step(v, &perm, i, pos))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for c in candidates {
            if visited.insert(c) {
                next.push(c);
                count += 1;
                if count > max_elements {
                    truncated = true;
                    break;
                }
            }
        }
        if !next.is_empty() {
            level_sizes.push(next.len() as u64);
        }
        frontier = next;
    }
    Ok(Closure {
        order: count,
        truncated,
        level_sizes,
    })
}

/// Decodes an element code of the symbolic enumeration; exposed for tests.
pub fn symbolic_code_roundtrip(g: &ImageElement) -> Result<ImageElement> {
    let codec = SymbolicCodec::new(g.n(), g.m())?;
    Ok(codec.decode(codec.encode(g), g.m()))
}
