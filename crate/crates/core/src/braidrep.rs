//! Braid words and the representation `σ_i ↦ I^{⊗(i-1)} ⊗ R ⊗ I^{⊗(n-i-1)}`.
//!
//! Generator `σ_i` acts with `R` on qubits `(i, i+1, i+2)` of an `(n+1)`-qubit
//! register. A word is evaluated left to right: the leftmost letter is the
//! leftmost matrix factor.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::{build_r_direct, GateParams};
use crate::qlinalg::{
    apply_local, commutator_residual, embed_local, kron, matmul, max_entry_distance, Operator,
};
use crate::report::{CheckReport, Stopwatch};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Identity checks after long products.
    pub eq: f64,
    pub unitary: f64,
    /// Rounding grid of canonical keys.
    pub grid: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq: 1e-9,
            unitary: 1e-10,
            grid: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eq", self.eq), ("unitary", self.unitary), ("grid", self.grid)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A representation instance: `(n, m)`, tolerances, and the cached `R`, `R†`.
#[derive(Debug, Clone)]
pub struct RepContext {
    params: GateParams,
    tol: Tolerances,
    r: Operator,
    r_inv: Operator,
}

impl RepContext {
    pub fn new(n: usize, m: u32) -> Result<Self> {
        Self::with_tolerances(n, m, Tolerances::default())
    }

    pub fn with_tolerances(n: usize, m: u32, tol: Tolerances) -> Result<Self> {
        let params = GateParams::new(n, m)?;
        tol.validate()?;
        let r = build_r_direct(m)?;
        let r_inv = r.dagger();
        Ok(Self {
            params,
            tol,
            r,
            r_inv,
        })
    }

    pub fn params(&self) -> &GateParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn m(&self) -> u32 {
        self.params.m()
    }

    pub fn qubits(&self) -> usize {
        self.params.qubits()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn r(&self) -> &Operator {
        &self.r
    }

    fn check_generator(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.n() {
            return Err(Error::IndexOutOfRange {
                what: "braid generator",
                index: i as i64,
                lo: 1,
                hi: self.n() as i64 - 1,
            });
        }
        Ok(())
    }

    /// The local 8×8 block and starting qubit of a signed letter.
    pub fn local_letter(&self, letter: i32) -> Result<(&Operator, usize)> {
        let i = letter.unsigned_abs() as usize;
        self.check_generator(i)?;
        Ok((if letter > 0 { &self.r } else { &self.r_inv }, i))
    }
}

/// `ρ(σ_i)` as a dense operator on `n + 1` qubits.
pub fn rho_sigma(i: usize, ctx: &RepContext) -> Result<Operator> {
    ctx.check_generator(i)?;
    embed_local(&ctx.r, i, ctx.qubits())
}

/// `ρ(σ_i⁻¹) = ρ(σ_i)†`.
pub fn rho_sigma_inv(i: usize, ctx: &RepContext) -> Result<Operator> {
    ctx.check_generator(i)?;
    embed_local(&ctx.r_inv, i, ctx.qubits())
}

/// Element of `B_n` written in the generators: `j > 0` is `σ_j`, `j < 0`
/// is `σ_{|j|}⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "strand count n must be at least 2, got {n}"
            )));
        }
        for &j in &letters {
            if j == 0 || j.unsigned_abs() as usize >= n {
                return Err(Error::IndexOutOfRange {
                    what: "braid letter",
                    index: j as i64,
                    lo: 1,
                    hi: n as i64 - 1,
                });
            }
        }
        Ok(Self { n, letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Parses whitespace-separated signed integers, e.g. `"1 2 -1 3"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                i32::from_str(tok).map_err(|_| Error::Parse(format!("bad braid letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ContextMismatch(
                format!("n={}", self.n),
                format!("n={}", other.n),
            ));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self { n: self.n, letters })
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            letters: self.letters.iter().rev().map(|j| -j).collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{j}")?;
            first = false;
        }
        Ok(())
    }
}

fn check_word(w: &BraidWord, ctx: &RepContext) -> Result<()> {
    if w.n != ctx.n() {
        return Err(Error::ContextMismatch(
            format!("word n={}", w.n),
            format!("context n={}", ctx.n()),
        ));
    }
    Ok(())
}

/// `ρ(w)`: the ordered product of the letters' images.
pub fn eval_word(w: &BraidWord, ctx: &RepContext) -> Result<Operator> {
    check_word(w, ctx)?;
    // right to left, each letter left-multiplies the accumulated product
    w.letters
        .iter()
        .rev()
        .try_fold(Operator::identity(ctx.dim()), |acc, &j| {
            let (block, start) = ctx.local_letter(j)?;
            apply_local(block, start, &acc)
        })
}

/// Residual of `(R⊗I)(I⊗R)(R⊗I) = (I⊗R)(R⊗I)(I⊗R)` on four qubits.
pub fn check_gyb(r: &Operator, tol: f64) -> Result<CheckReport> {
    if r.dim() != 8 {
        return Err(Error::DimensionMismatch {
            left: 8,
            right: r.dim(),
        });
    }
    let watch = Stopwatch::start();
    let id = Operator::identity(2);
    let ri = kron(r, &id);
    let ir = kron(&id, r);
    let lhs = matmul(&matmul(&ri, &ir)?, &ri)?;
    let rhs = matmul(&matmul(&ir, &ri)?, &ir)?;
    let mut report = CheckReport::new(2, 0, "gyb_equation");
    report.record(|| "gYB".into(), max_entry_distance(&lhs, &rhs)?, tol);
    Ok(report.finish(watch))
}

/// `ρ(σ_i)ρ(σ_j) = ρ(σ_j)ρ(σ_i)` for all `j - i ≥ 2`; vacuous for `n ≤ 3`.
pub fn check_far_commutativity(ctx: &RepContext, tol: f64) -> Result<CheckReport> {
    let watch = Stopwatch::start();
    let gens = all_generators(ctx)?;
    let n = ctx.n();
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (i + 2..n).map(move |j| (i, j)))
        .collect();
    let residuals = pairs
        .par_iter()
        .map(|&(i, j)| commutator_residual(&gens[i - 1], &gens[j - 1]))
        .collect::<Result<Vec<_>>>()?;
    let mut report = CheckReport::new(n, ctx.m(), "far_commutativity");
    for (&(i, j), res) in pairs.iter().zip(residuals) {
        report.record(|| format!("[rho(s{i}), rho(s{j})]"), res, tol);
    }
    Ok(report.finish(watch))
}

/// `ρ(σ_i)ρ(σ_{i+1})ρ(σ_i) = ρ(σ_{i+1})ρ(σ_i)ρ(σ_{i+1})`; vacuous for `n = 2`.
pub fn check_braid_relation(ctx: &RepContext, tol: f64) -> Result<CheckReport> {
    let watch = Stopwatch::start();
    let gens = all_generators(ctx)?;
    let n = ctx.n();
    let residuals = (1..n.saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let (a, b) = (&gens[i - 1], &gens[i]);
            let lhs = matmul(&matmul(a, b)?, a)?;
            let rhs = matmul(&matmul(b, a)?, b)?;
            max_entry_distance(&lhs, &rhs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = CheckReport::new(n, ctx.m(), "braid_relation");
    for (idx, res) in residuals.into_iter().enumerate() {
        let i = idx + 1;
        report.record(|| format!("s{i}s{}s{i}", i + 1), res, tol);
    }
    Ok(report.finish(watch))
}

fn all_generators(ctx: &RepContext) -> Result<Vec<Operator>> {
    (1..ctx.n()).map(|i| rho_sigma(i, ctx)).collect()
}

/// Smallest `1 ≤ k ≤ max_k` with `‖a^k − I‖_max < tol`.
pub fn operator_order(a: &Operator, max_k: u64, tol: f64) -> Option<u64> {
    let id = Operator::identity(a.dim());
    let mut power = a.clone();
    for k in 1..=max_k {
        if max_entry_distance(&power, &id).ok()? < tol {
            return Some(k);
        }
        power = matmul(&power, a).ok()?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::not_i;
    use crate::qlinalg::{basis_state, matpow, C64};
    use std::f64::consts::PI;

    #[test]
    fn words_validate_and_parse() {
        let w = BraidWord::parse("1 2 -1 3", 4).unwrap();
        assert_eq!(w.letters(), &[1, 2, -1, 3]);
        assert_eq!(w.to_string(), "1 2 -1 3");
        assert_eq!(w.inverse().letters(), &[-3, 1, -2, -1]);
        assert!(BraidWord::parse("1 x", 4).is_err());
        assert!(BraidWord::parse("0", 4).is_err());
        assert!(BraidWord::parse("4", 4).is_err());
        assert!(BraidWord::parse("-4", 4).is_err());
        assert!(BraidWord::parse("", 4).unwrap().is_empty());
        assert!(BraidWord::new(1, vec![]).is_err());
    }

    #[test]
    fn rho_sigma_examples() {
        let ctx = RepContext::new(2, 5).unwrap();
        assert_eq!(rho_sigma(1, &ctx).unwrap(), build_r_direct(5).unwrap());
        assert!(rho_sigma(2, &ctx).is_err());
        assert!(rho_sigma(0, &ctx).is_err());

        let ctx = RepContext::new(3, 3).unwrap();
        let out = rho_sigma(2, &ctx).unwrap().apply(&basis_state(4, 0)).unwrap();
        let t = PI / 3.0;
        assert!((out[0b0000] - C64::new(-t.cos(), 0.0)).norm() < 1e-15);
        assert!((out[0b0010] - C64::new(0.0, t.sin())).norm() < 1e-15);
        assert!(out.iter().enumerate().all(|(k, z)| k == 0 || k == 2 || z.norm() == 0.0));

        let ctx = RepContext::new(2, 3).unwrap();
        let g = rho_sigma(1, &ctx).unwrap();
        assert!(max_entry_distance(&matpow(&g, 6), &Operator::identity(8)).unwrap() < 1e-12);
    }

    #[test]
    fn eval_word_basics() {
        let ctx = RepContext::new(3, 5).unwrap();
        let id = Operator::identity(16);
        assert_eq!(eval_word(&BraidWord::identity(3).unwrap(), &ctx).unwrap(), id);
        let w = BraidWord::parse("1 -1", 3).unwrap();
        assert!(max_entry_distance(&eval_word(&w, &ctx).unwrap(), &id).unwrap() < 1e-12);
        let a = eval_word(&BraidWord::parse("1 2 1", 3).unwrap(), &ctx).unwrap();
        let b = eval_word(&BraidWord::parse("2 1 2", 3).unwrap(), &ctx).unwrap();
        assert!(max_entry_distance(&a, &b).unwrap() < 1e-12);
        let explicit = crate::qlinalg::product(
            [&rho_sigma(1, &ctx).unwrap(), &rho_sigma(2, &ctx).unwrap(), &rho_sigma(1, &ctx).unwrap()],
            16,
        )
        .unwrap();
        assert!(max_entry_distance(&a, &explicit).unwrap() < 1e-14);
        let wrong_n = BraidWord::parse("1", 2).unwrap();
        assert!(eval_word(&wrong_n, &ctx).is_err());
    }

    #[test]
    fn gyb_checks() {
        for m in [3, 9] {
            let r = check_gyb(&build_r_direct(m).unwrap(), 1e-12).unwrap();
            assert!(r.pass && r.residual_max < 1e-12, "{r}");
        }
        assert!(check_gyb(&Operator::identity(8), 1e-12).unwrap().pass);
        assert!(check_gyb(&Operator::identity(4), 1e-12).is_err());
        // X on the first qubit: lhs reduces to X_2, rhs to X_1
        let bad = embed_local(&crate::gates::Pauli::X.matrix(), 1, 3).unwrap();
        assert!(!check_gyb(&bad, 1e-12).unwrap().pass);
    }

    #[test]
    fn far_commutativity_and_braid_relation() {
        let r = check_far_commutativity(&RepContext::new(4, 3).unwrap(), 1e-12).unwrap();
        assert!(r.pass && r.cases == 1, "{r}");
        let r = check_far_commutativity(&RepContext::new(5, 5).unwrap(), 1e-12).unwrap();
        assert!(r.pass && r.cases == 3, "{r}");
        let r = check_far_commutativity(&RepContext::new(3, 7).unwrap(), 1e-12).unwrap();
        assert!(r.pass && r.cases == 0);
        assert!(check_braid_relation(&RepContext::new(3, 3).unwrap(), 1e-12).unwrap().pass);
        assert!(check_braid_relation(&RepContext::new(4, 7).unwrap(), 1e-12).unwrap().pass);
        let r = check_braid_relation(&RepContext::new(2, 7).unwrap(), 1e-12).unwrap();
        assert!(r.pass && r.cases == 0);
    }

    #[test]
    fn orders() {
        assert_eq!(operator_order(&Operator::identity(4), 10, 1e-9), Some(1));
        let ctx = RepContext::new(2, 5).unwrap();
        assert_eq!(operator_order(&rho_sigma(1, &ctx).unwrap(), 100, 1e-9), Some(10));
        let p = GateParams::new(2, 5).unwrap();
        assert_eq!(operator_order(&not_i(2, &p).unwrap().neg(), 10, 1e-9), Some(2));
        assert_eq!(operator_order(&rho_sigma(1, &ctx).unwrap(), 9, 1e-9), None);
    }

    #[test]
    fn generators_are_unitary() {
        let ctx = RepContext::new(4, 7).unwrap();
        for i in 1..4 {
            assert!(rho_sigma(i, &ctx).unwrap().is_unitary(1e-10));
            assert!(rho_sigma_inv(i, &ctx).unwrap().is_unitary(1e-10));
        }
    }
}
