//! Braid words, closure permutations, and the standard braid of a twisted
//! torus knot.
//!
//! Convention: letter `i > 0` is `σ_i`, strand `i` crossing over strand
//! `i + 1`; letter `-i` is its inverse. Positive `q` and positive `s` give
//! all-positive words.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Parameters that are meaningful but outside what this crate realizes
    /// as a braid (the `p < r <= p + q` regime).
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("braid word too long to materialize ({0} crossings)")]
    TooLong(u128),
}

/// Parameters `(p, q, r, s)` of the twisted torus knot `T(p, q, r, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "[i64; 4]")]
pub struct TtkParams {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
}

impl From<TtkParams> for [i64; 4] {
    fn from(k: TtkParams) -> Self {
        [k.p, k.q, k.r, k.s]
    }
}

impl TtkParams {
    /// Validates `p, q > 1`, `gcd(p, q) = 1` and `0 <= r <= p`.
    ///
    /// `p < r <= p + q` is a legitimate twisted torus knot but is rejected
    /// with [`BraidError::UnsupportedParameter`].
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self, BraidError> {
        if p <= 1 || q <= 1 {
            return Err(BraidError::InvalidInput(format!("need p, q > 1, got p={p}, q={q}")));
        }
        if p.gcd(&q) != 1 {
            return Err(BraidError::InvalidInput(format!("gcd({p}, {q}) != 1")));
        }
        if r < 0 || r > p + q {
            return Err(BraidError::InvalidInput(format!("need 0 <= r <= p + q, got r={r}")));
        }
        if r > p {
            return Err(BraidError::UnsupportedParameter(format!(
                "r={r} exceeds p={p}; only 0 <= r <= p is realized"
            )));
        }
        Ok(Self { p, q, r, s })
    }

    pub fn p(&self) -> i64 {
        self.p
    }
    pub fn q(&self) -> i64 {
        self.q
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn s(&self) -> i64 {
        self.s
    }

    /// `r ∈ {0, 1}`: the twist is trivial and the knot is the torus knot `T(p, q)`.
    pub fn is_torus_regime(&self) -> bool {
        self.r <= 1
    }

    /// Crossing count of [`ttk_braid`] without building the word.
    pub fn crossing_count(&self) -> u128 {
        let torus = (self.p - 1) as u128 * self.q as u128;
        if self.is_torus_regime() {
            torus
        } else {
            torus + (self.r - 1) as u128 * self.r as u128 * self.s.unsigned_abs() as u128
        }
    }

    pub fn exponent_sum(&self) -> i128 {
        let torus = (self.p - 1) as i128 * self.q as i128;
        if self.is_torus_regime() {
            torus
        } else {
            torus + (self.r - 1) as i128 * self.r as i128 * self.s as i128
        }
    }

    /// Closure permutation of [`ttk_braid`], computed from cycle powers.
    ///
    /// `σ_1⋯σ_{k-1}` induces a `k`-cycle, and the full twist on `r` strands is
    /// pure, so only the torus factor contributes.
    pub fn closure_permutation(&self) -> Permutation {
        let p = self.p as usize;
        let shift = (self.q.rem_euclid(self.p)) as usize;
        // reading σ_1⋯σ_{p-1} left to right sends the strand at position j to j-1 (mod p)
        let image = (0..p).map(|j| (j + p - shift) % p).collect();
        Permutation { image }
    }
}

impl fmt::Display for TtkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}, {}, {}, {})", self.p, self.q, self.r, self.s)
    }
}

/// A word in the Artin generators on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBraid")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

#[derive(Deserialize)]
struct RawBraid {
    strands: usize,
    letters: Vec<i32>,
}

impl TryFrom<RawBraid> for BraidWord {
    type Error = BraidError;
    fn try_from(raw: RawBraid) -> Result<Self, BraidError> {
        BraidWord::new(raw.strands, raw.letters)
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::InvalidInput("a braid needs at least one strand".into()));
        }
        if let Some(&bad) = letters
            .iter()
            .find(|&&k| k == 0 || k.unsigned_abs() as usize >= strands)
        {
            return Err(BraidError::InvalidInput(format!(
                "letter {bad} out of range for {strands} strands"
            )));
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn crossing_count(&self) -> usize {
        self.letters.len()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&k| k.signum() as i64).sum()
    }

    /// Permutation of strand positions, letters read left to right.
    pub fn closure_permutation(&self) -> Permutation {
        let mut pos: Vec<usize> = (0..self.strands).collect();
        // pos[strand] = current position of the strand that started at `strand`
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &k in &self.letters {
            let i = k.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
            pos[at[i]] = i;
            pos[at[i + 1]] = i + 1;
        }
        Permutation { image: pos }
    }

    /// Number of components of the braid closure.
    pub fn component_count(&self) -> usize {
        self.closure_permutation().cycle_count()
    }

    /// Letters in reverse order.
    pub fn reversed(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Every letter inverted; the closure is the mirror image.
    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|k| -k).collect(),
        }
    }

    /// Adds a strand and a positive `σ_{strands}` (Markov stabilization).
    pub fn stabilized(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.push(self.strands as i32);
        Self {
            strands: self.strands + 1,
            letters,
        }
    }
}

/// Plain-text form `s:3 w:1 2 -1`.
impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s:{} w:", self.strands)?;
        for (i, k) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;
    fn from_str(s: &str) -> Result<Self, BraidError> {
        let bad = || BraidError::InvalidInput(format!("expected `s:<strands> w:<letters>`, got {s:?}"));
        let s = s.trim();
        let rest = s.strip_prefix("s:").ok_or_else(bad)?;
        let (n, word) = rest.split_once("w:").ok_or_else(bad)?;
        let strands = n.trim().parse::<usize>().map_err(|_| bad())?;
        let letters = word
            .split_whitespace()
            .map(|tok| tok.parse::<i32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(strands, letters)
    }
}

/// Largest word [`ttk_braid`] will build.
pub const MAX_MATERIALIZED_CROSSINGS: u128 = 50_000_000;

/// The word `(σ_1⋯σ_{p-1})^q · (σ_1⋯σ_{r-1})^{r·s}` on `p` strands.
///
/// The second factor is `s` full twists on the first `r` strands and is
/// empty when `r <= 1`.
pub fn ttk_braid(params: &TtkParams) -> Result<BraidWord, BraidError> {
    let total = params.crossing_count();
    if total > MAX_MATERIALIZED_CROSSINGS {
        return Err(BraidError::TooLong(total));
    }
    let p = params.p() as i32;
    let r = params.r() as i32;
    let mut letters = Vec::with_capacity(total as usize);
    for _ in 0..params.q() {
        letters.extend(1..p);
    }
    if r > 1 {
        let sign = params.s().signum() as i32;
        for _ in 0..(r as i64 * params.s().abs()) {
            letters.extend((1..r).map(|i| sign * i));
        }
    }
    Ok(BraidWord {
        strands: p as usize,
        letters,
    })
}

/// A permutation of `0..n`, stored as the image of each point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// Fails unless `image` is a bijection of `0..image.len()`.
    pub fn from_images(image: Vec<usize>) -> Result<Self, BraidError> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || std::mem::replace(&mut seen[x], true) {
                return Err(BraidError::InvalidInput(format!("not a permutation: {image:?}")));
            }
        }
        Ok(Self { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycles in increasing order of their smallest element, fixed points
    /// included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

/// Cycle notation on `1..=n`, e.g. `(1 2 3)`; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "()");
        }
        for c in nontrivial {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}
