//! Polynomial invariants of braid closures, used as independent oracles.
//!
//! The Alexander polynomial comes from the reduced Burau representation:
//! for a braid `b` on `n` strands whose closure is a knot,
//! `Δ(t) ≐ det(I - ρ(b)) / (1 + t + ⋯ + t^{n-1})`.
//! The Jones polynomial comes from a Kauffman-bracket state sum over all
//! `2^c` smoothings, normalized by the writhe.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{ttk_braid, BraidError, BraidWord, TtkParams};
use crate::poly::{LaurentPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("closure has {0} components; only knots are supported")]
    NotAKnot(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

/// Default crossing cap for the Jones state sum (`2^22` states).
pub const DEFAULT_JONES_CAP: usize = 22;

type Matrix = Vec<Vec<LaurentPoly>>;

fn t_pow(k: i64) -> LaurentPoly {
    LaurentPoly::monomial(1, k)
}

fn c(k: i64) -> LaurentPoly {
    LaurentPoly::monomial(k, 0)
}

/// The nontrivial block of the reduced Burau image of a letter, together
/// with the first row/column it occupies. The image is the identity
/// outside the block.
pub fn burau_block(strands: usize, letter: i32) -> (usize, Matrix) {
    let m = strands - 1;
    let i = letter.unsigned_abs() as usize;
    let pos = letter > 0;
    let z = LaurentPoly::zero;
    if m == 1 {
        let v = if pos { -t_pow(1) } else { -t_pow(-1) };
        return (0, vec![vec![v]]);
    }
    if i == 1 {
        let b = if pos {
            vec![vec![-t_pow(1), z()], vec![c(1), c(1)]]
        } else {
            vec![vec![-t_pow(-1), z()], vec![t_pow(-1), c(1)]]
        };
        return (0, b);
    }
    if i == m {
        let b = if pos {
            vec![vec![c(1), t_pow(1)], vec![z(), -t_pow(1)]]
        } else {
            vec![vec![c(1), c(1)], vec![z(), -t_pow(-1)]]
        };
        return (m - 2, b);
    }
    let b = if pos {
        vec![
            vec![c(1), t_pow(1), z()],
            vec![z(), -t_pow(1), z()],
            vec![z(), c(1), c(1)],
        ]
    } else {
        vec![
            vec![c(1), c(1), z()],
            vec![z(), -t_pow(-1), z()],
            vec![z(), t_pow(-1), c(1)],
        ]
    };
    (i - 2, b)
}

fn identity(m: usize) -> Matrix {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { c(1) } else { LaurentPoly::zero() })
                .collect()
        })
        .collect()
}

/// Reduced Burau matrix `ρ(b)`, a `(strands - 1)`-square Laurent matrix.
pub fn burau_matrix(b: &BraidWord) -> Matrix {
    let m = b.strands().saturating_sub(1);
    let mut acc = identity(m);
    for &letter in b.letters() {
        let (off, block) = burau_block(b.strands(), letter);
        let k = block.len();
        for row in acc.iter_mut() {
            let old: Vec<LaurentPoly> = row[off..off + k].to_vec();
            for j in 0..k {
                let mut v = LaurentPoly::zero();
                for (l, o) in old.iter().enumerate() {
                    if !o.is_zero() && !block[l][j].is_zero() {
                        v = &v + &(o * &block[l][j]);
                    }
                }
                row[off + j] = v;
            }
        }
    }
    acc
}

/// Fraction-free (Bareiss) determinant over `Z[t, t^-1]`.
pub fn determinant_laurent(mut a: Matrix) -> Result<LaurentPoly, PolyError> {
    let n = a.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Unnormalized `det(I - ρ(b))`, exposed so alternative corrections can be
/// tested against the standard one.
pub fn burau_characteristic(b: &BraidWord) -> Result<LaurentPoly, InvariantError> {
    let mut m = burau_matrix(b);
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if i == j { &c(1) - v } else { -&*v };
        }
    }
    determinant_laurent(m).map_err(|e| InvariantError::Internal(format!("Burau determinant: {e}")))
}

fn require_knot(b: &BraidWord) -> Result<(), InvariantError> {
    match b.component_count() {
        1 => Ok(()),
        k => Err(InvariantError::NotAKnot(k)),
    }
}

/// Normalized Alexander polynomial of the closure of `b`.
pub fn alexander(b: &BraidWord) -> Result<LaurentPoly, InvariantError> {
    require_knot(b)?;
    let det = burau_characteristic(b)?;
    let correction = LaurentPoly::from_terms((0..b.strands() as i64).map(|k| (k, 1)));
    let delta = det
        .div_exact(&correction)
        .map_err(|e| InvariantError::Internal(format!("Burau correction quotient: {e}")))?;
    let delta = delta
        .normalize_symmetric()
        .map_err(|e| InvariantError::Internal(format!("Alexander normalization: {e}")))?;
    let at_one = delta.eval_unit(1);
    if at_one.abs() != BigInt::from(1) {
        return Err(InvariantError::Internal(format!("Δ(1) = {at_one}, expected ±1")));
    }
    Ok(delta)
}

/// Closed form `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, normalized.
pub fn torus_alexander(p: i64, q: i64) -> Result<LaurentPoly, InvariantError> {
    let (p, q) = (p.abs(), q.abs());
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(InvariantError::InvalidInput(format!(
            "torus knot type needs coprime p, q >= 2, got ({p}, {q})"
        )));
    }
    let tk1 = |k: i64| LaurentPoly::from_terms([(k, 1), (0, -1)]);
    let num = &tk1(p * q) * &tk1(1);
    let den = &tk1(p) * &tk1(q);
    num.div_exact(&den)
        .and_then(|d| d.normalize_symmetric())
        .map_err(|e| InvariantError::Internal(format!("torus quotient: {e}")))
}

/// `|Δ(-1)|`.
pub fn determinant(b: &BraidWord) -> Result<BigInt, InvariantError> {
    Ok(alexander(b)?.eval_unit(-1).abs())
}

/// Kauffman bracket `<D>` of the closure diagram, as a Laurent polynomial
/// in `A`.
///
/// For a positive letter the A-smoothing joins each incoming end to the
/// outgoing end directly below it; for a negative letter it joins the two
/// incoming ends together and the two outgoing ends together.
pub fn kauffman_bracket(b: &BraidWord) -> LaurentPoly {
    let n = b.strands();
    let len = b.crossing_count();
    // boundary point (level, position); level len wraps to 0
    let node = |level: usize, pos: usize| (level % len.max(1)) * n + pos;

    if len == 0 {
        // n unlinked circles
        return loop_factor().pow(n as u32 - 1);
    }

    // arcs present in every state: strands passing beside a crossing
    let mut base = UnionFind::new(len * n);
    for (k, &letter) in b.letters().iter().enumerate() {
        let i = letter.unsigned_abs() as usize - 1;
        for j in (0..n).filter(|&j| j != i && j != i + 1) {
            base.union(node(k, j), node(k + 1, j));
        }
    }
    let (classes, label) = base.compress();

    // per crossing: the two vertical and the two horizontal joins
    struct Joins {
        vertical: [(usize, usize); 2],
        horizontal: [(usize, usize); 2],
        positive: bool,
    }
    let joins: Vec<Joins> = b
        .letters()
        .iter()
        .enumerate()
        .map(|(k, &letter)| {
            let i = letter.unsigned_abs() as usize - 1;
            let (tl, tr) = (label[node(k, i)], label[node(k, i + 1)]);
            let (bl, br) = (label[node(k + 1, i)], label[node(k + 1, i + 1)]);
            Joins {
                vertical: [(tl, bl), (tr, br)],
                horizontal: [(tl, tr), (bl, br)],
                positive: letter > 0,
            }
        })
        .collect();

    // histogram[a][loops]: number of states with `a` A-smoothings and that many loops
    let max_loops = classes + 1;
    let states: u64 = 1 << len;
    let histogram = (0..states)
        .into_par_iter()
        .fold(
            || vec![vec![0u64; max_loops]; len + 1],
            |mut hist, state| {
                let mut uf = UnionFind::new(classes);
                let mut a_count = 0;
                for (k, j) in joins.iter().enumerate() {
                    let smooth_a = state >> k & 1 == 1;
                    a_count += smooth_a as usize;
                    let vertical = smooth_a == j.positive;
                    let pairs = if vertical { &j.vertical } else { &j.horizontal };
                    for &(x, y) in pairs {
                        uf.union(x, y);
                    }
                }
                hist[a_count][uf.components()] += 1;
                hist
            },
        )
        .reduce(
            || vec![vec![0u64; max_loops]; len + 1],
            |mut x, y| {
                for (rx, ry) in x.iter_mut().zip(y) {
                    for (vx, vy) in rx.iter_mut().zip(ry) {
                        *vx += vy;
                    }
                }
                x
            },
        );

    let d = loop_factor();
    let mut d_pows = vec![LaurentPoly::one()];
    for k in 1..max_loops {
        d_pows.push(&d_pows[k - 1] * &d);
    }
    let mut bracket = LaurentPoly::zero();
    for (a_count, row) in histogram.iter().enumerate() {
        let a_exp = 2 * a_count as i64 - len as i64;
        for (loops, &count) in row.iter().enumerate().filter(|(_, &c)| c > 0) {
            let term = d_pows[loops - 1].shift(a_exp).scale(&BigInt::from(count));
            bracket = &bracket + &term;
        }
    }
    bracket
}

/// `d = -A^2 - A^-2`.
fn loop_factor() -> LaurentPoly {
    LaurentPoly::from_terms([(2, -1), (-2, -1)])
}

/// Writhe-normalized bracket `(-A^3)^{-w} <D>` with `A^{4k} -> t^k`.
///
/// This substitution makes the closure of `σ_1^3` evaluate to
/// `-t^-4 + t^-3 + t^-1`.
pub fn jones_from_bracket(bracket: &LaurentPoly, writhe: i64) -> Result<LaurentPoly, InvariantError> {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let f = bracket.shift(-3 * writhe).scale(&BigInt::from(sign));
    let mut out = Vec::new();
    for (e, coeff) in f.terms() {
        if e.rem_euclid(4) != 0 {
            return Err(InvariantError::Internal(format!(
                "normalized bracket has exponent {e} not divisible by 4"
            )));
        }
        out.push((e / 4, coeff.clone()));
    }
    Ok(LaurentPoly::from_terms(out))
}

/// Jones polynomial when `crossing_count <= cap`, otherwise `None`.
pub fn jones_capped(b: &BraidWord, cap: usize) -> Result<Option<LaurentPoly>, InvariantError> {
    require_knot(b)?;
    if b.crossing_count() > cap {
        return Ok(None);
    }
    if b.crossing_count() >= 63 {
        return Err(InvariantError::InvalidInput("state sum limited to 62 crossings".into()));
    }
    jones_from_bracket(&kauffman_bracket(b), b.exponent_sum()).map(Some)
}

struct UnionFind {
    parent: Vec<usize>,
    comps: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            comps: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx] = ry;
            self.comps -= 1;
        }
    }

    fn components(&self) -> usize {
        self.comps
    }

    /// Dense relabelling of the classes: `(class count, label per element)`.
    fn compress(mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut label = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            label.push(ids[r]);
        }
        (next, label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JonesStatus {
    Computed,
    TooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub alexander: LaurentPoly,
    #[serde(serialize_with = "serialize_bigint")]
    pub determinant: BigInt,
    pub jones: Option<LaurentPoly>,
    pub jones_status: JonesStatus,
    pub crossing_count: usize,
}

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl InvariantReport {
    pub fn compute(b: &BraidWord, jones_cap: usize) -> Result<Self, InvariantError> {
        let alexander = alexander(b)?;
        let determinant = alexander.eval_unit(-1).abs();
        let jones = jones_capped(b, jones_cap)?;
        let jones_status = if jones.is_some() {
            JonesStatus::Computed
        } else {
            JonesStatus::TooLarge
        };
        Ok(Self {
            alexander,
            determinant,
            jones,
            jones_status,
            crossing_count: b.crossing_count(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    /// Alexander polynomials agree. Necessary, not sufficient, for the knot
    /// to be the torus knot `T(p, q)`.
    Consistent,
    Inconsistent,
    /// No torus-knot claim is made for these parameters.
    Inconclusive,
}

/// Checks that `T(p, q, r, s)` with `r ∈ {0, 1}` has the Alexander
/// polynomial of the torus knot `T(p, q)`.
pub fn torus_oracle_check(params: &TtkParams) -> Result<OracleVerdict, InvariantError> {
    torus_oracle_check_with(params, alexander)
}

/// [`torus_oracle_check`] with a caller-supplied Alexander routine.
pub fn torus_oracle_check_with<F>(params: &TtkParams, alexander_fn: F) -> Result<OracleVerdict, InvariantError>
where
    F: Fn(&BraidWord) -> Result<LaurentPoly, InvariantError>,
{
    if !params.is_torus_regime() {
        return Ok(OracleVerdict::Inconclusive);
    }
    let word = ttk_braid(params)?;
    let expected = torus_alexander(params.p(), params.q())?;
    Ok(match alexander_fn(&word) {
        Ok(got) if got == expected => OracleVerdict::Consistent,
        _ => OracleVerdict::Inconsistent,
    })
}

/// Evaluates a braid to check that Burau images satisfy the braid relations.
#[cfg(test)]
fn burau_of(strands: usize, letters: &[i32]) -> Matrix {
    burau_matrix(&BraidWord::new(strands, letters.to_vec()).unwrap())
}
