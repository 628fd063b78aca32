//! Twisting one curve about another on a genus-two Heegaard surface, the
//! resulting Berge and Dean families, primitivity, and the two-gap
//! certificate generator.
//!
//! With `α = T(a, b, 0, 0)` and `β = T(c, d, e, f)` meeting in
//! `Δ = |ad - bc|` points, twisting `α` along `β` `n` times gives
//! `K^n = T(a + nΔc, b + nΔd, nΔe, f)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidError, TtkParams};
use crate::certificate::{hypothesis_chain, ChainInputs, GapCertificate, PairSpec};
use crate::spectrum::{bgl_bound_exact, bgl_lower_bound, Certification, Citation, Rational};

/// Default upper limit for every linear search over `n`.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("n = {requested} is too small; smallest valid n is {min_n}")]
    NeedsLargerN { requested: u64, min_n: u64 },
    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),
    #[error("no valid n found up to the search bound {bound}")]
    SearchExhausted { bound: u64 },
    #[error("T({p}, {q}, ...) is not a knot: gcd({p}, {q}) != 1")]
    NotAKnot { p: i64, q: i64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaRegime {
    /// `e = 1`: β is the torus knot `T(c, d)` with surface slope `cd + f`.
    TorusBeta,
    /// `1 < e < c < d`.
    GenericBeta,
}

/// The curves `α = T(a, b, 0, 0)` and `β = T(c, d, e, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistPair {
    alpha: [i64; 2],
    beta: [i64; 4],
    regime: BetaRegime,
}

/// `|ad - bc|`.
pub fn delta_raw(alpha: [i64; 2], c: i64, d: i64) -> i64 {
    (alpha[0] * d - alpha[1] * c).abs()
}

/// `1 - (|a| - 1)(|b| - 1) - |bc| - |ad|`; must be negative for the
/// twisting bound to apply.
pub fn catching_chi_raw(alpha: [i64; 2], c: i64, d: i64) -> Result<i64, FamilyError> {
    let (a, b) = (alpha[0].abs(), alpha[1].abs());
    let chi = 1 - (a - 1) * (b - 1) - (b * c).abs() - (a * d).abs();
    if chi >= 0 {
        return Err(FamilyError::UnsupportedPair(format!(
            "χ(Q) = {chi} is not negative; the twisting bound does not apply"
        )));
    }
    Ok(chi)
}

/// `(a + nΔc, b + nΔd, nΔe, f)` without any validation.
pub fn twist_raw(alpha: [i64; 2], beta: [i64; 4], n: u64) -> [i128; 4] {
    let [c, d, e, f] = beta.map(i128::from);
    let k = n as i128 * delta_raw(alpha, beta[0], beta[1]) as i128;
    [alpha[0] as i128 + k * c, alpha[1] as i128 + k * d, k * e, f]
}

fn ordered(raw: [i128; 4]) -> bool {
    let [p, q, r, _] = raw;
    1 < r && r < p && p < q
}

fn coprime(raw: [i128; 4]) -> bool {
    raw[0].gcd(&raw[1]) == 1
}

impl TwistPair {
    /// Validates the pair and infers its regime from `e`.
    pub fn new(alpha: [i64; 2], beta: [i64; 4]) -> Result<Self, FamilyError> {
        let [a, b] = alpha;
        let [c, d, e, f] = beta;
        let bad = |m: String| Err(FamilyError::InvalidPair(m));
        if a.gcd(&b) != 1 {
            return bad(format!("gcd(a, b) = gcd({a}, {b}) != 1"));
        }
        if c.gcd(&d) != 1 {
            return bad(format!("gcd(c, d) = gcd({c}, {d}) != 1"));
        }
        if delta_raw(alpha, c, d) < 1 {
            return bad(format!("ad - bc = 0 for α = ({a}, {b}), β = ({c}, {d})"));
        }
        if f == 0 {
            return bad("f must be nonzero".into());
        }
        let regime = if e == 1 {
            if !(1 < c && c < d) {
                return bad(format!("torus β needs 1 < c < d, got c = {c}, d = {d}"));
            }
            let (x, y) = (a.abs().min(b.abs()), a.abs().max(b.abs()));
            if x > 1 && (x, y) == (c, d) {
                return bad(format!("α and β are both the torus knot T({c}, {d})"));
            }
            BetaRegime::TorusBeta
        } else {
            if !(1 < e && e < c && c < d) {
                return bad(format!("generic β needs 1 < e < c < d, got e = {e}, c = {c}, d = {d}"));
            }
            BetaRegime::GenericBeta
        };
        Ok(Self { alpha, beta, regime })
    }

    pub fn alpha(&self) -> [i64; 2] {
        self.alpha
    }

    pub fn beta(&self) -> [i64; 4] {
        self.beta
    }

    pub fn regime(&self) -> BetaRegime {
        self.regime
    }

    pub fn f(&self) -> i64 {
        self.beta[3]
    }

    /// The same curves with the twist parameter `f` of β replaced by `s`,
    /// revalidated.
    pub fn with_twist(&self, s: i64) -> Result<Self, FamilyError> {
        let [c, d, e, _] = self.beta;
        Self::new(self.alpha, [c, d, e, s])
    }

    pub fn spec(&self) -> PairSpec {
        PairSpec {
            alpha: self.alpha,
            beta: self.beta,
            regime: self.regime,
        }
    }
}

impl Serialize for TwistPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

pub fn delta(pair: &TwistPair) -> i64 {
    delta_raw(pair.alpha, pair.beta[0], pair.beta[1])
}

pub fn catching_chi(pair: &TwistPair) -> Result<i64, FamilyError> {
    catching_chi_raw(pair.alpha, pair.beta[0], pair.beta[1])
}

/// Smallest `n >= 1` with `1 < r < p < q` and `gcd(p, q) = 1`.
pub fn min_n(pair: &TwistPair, search_bound: u64) -> Result<u64, FamilyError> {
    (1..=search_bound)
        .find(|&n| {
            let raw = twist_raw(pair.alpha, pair.beta, n);
            ordered(raw) && coprime(raw)
        })
        .ok_or(FamilyError::SearchExhausted { bound: search_bound })
}

fn to_params(raw: [i128; 4]) -> Result<TtkParams, FamilyError> {
    let conv = |x: i128| i64::try_from(x).map_err(|_| FamilyError::InvalidInput(format!("{x} overflows i64")));
    Ok(TtkParams::new(
        conv(raw[0])?,
        conv(raw[1])?,
        conv(raw[2])?,
        conv(raw[3])?,
    )?)
}

/// `K^n` as twisted torus knot parameters, in the regime `1 < r < p < q`.
pub fn twist(pair: &TwistPair, n: u64) -> Result<TtkParams, FamilyError> {
    let raw = twist_raw(pair.alpha, pair.beta, n);
    if !ordered(raw) {
        let min_n = min_n(pair, DEFAULT_SEARCH_BOUND)?;
        return Err(FamilyError::NeedsLargerN { requested: n, min_n });
    }
    if !coprime(raw) {
        return Err(FamilyError::NotAKnot {
            p: raw[0] as i64,
            q: raw[1] as i64,
        });
    }
    to_params(raw)
}

/// Integer lower bound on `b_1(K^n)` from twisting along the annulus
/// bounded by two push-offs of β.
pub fn b1_lower(pair: &TwistPair, n: u64) -> Result<i64, FamilyError> {
    b1_lower_raw(pair.alpha, pair.beta[0], pair.beta[1], n)
}

/// [`b1_lower`] for curves that need not satisfy the [`TwistPair`] ordering
/// (the Dean families have `c > d`).
pub fn b1_lower_raw(alpha: [i64; 2], c: i64, d: i64, n: u64) -> Result<i64, FamilyError> {
    let chi = catching_chi_raw(alpha, c, d)?;
    let (a, b) = (alpha[0].abs(), alpha[1].abs());
    let denom = 36 * ((a * d).abs() + (b * c).abs() + (a - 1) * (b - 1) - 1);
    if denom != -36 * chi {
        return Err(FamilyError::Internal(format!(
            "denominator {denom} != -36χ(Q) = {}",
            -36 * chi
        )));
    }
    bgl_lower_bound(n, chi, 1).map_err(|e| FamilyError::Internal(e.to_string()))
}

/// Primitive in the inside handlebody: `r ≡ ±1` or `r ≡ ±q (mod p)`.
pub fn primitive_h1(params: &TtkParams) -> bool {
    let (p, q, r) = (params.p(), params.q(), params.r());
    [1, -1, q, -q].iter().any(|&x| (r - x).rem_euclid(p) == 0)
}

/// Primitive in the outside handlebody: `s = ±1` and
/// (`r ≡ ±1` or `r ≡ ±p (mod q)`).
pub fn primitive_h2(params: &TtkParams) -> bool {
    let (p, q, r, s) = (params.p(), params.q(), params.r(), params.s());
    s.abs() == 1 && [1, -1, p, -p].iter().any(|&x| (r - x).rem_euclid(q) == 0)
}

/// Primitive on either side makes the knot a handlebody core, hence tunnel
/// number one.
pub fn tunnel_number_one(params: &TtkParams) -> Certification {
    Certification::from_bool(primitive_h1(params) || primitive_h2(params))
}

fn check_sign(sign: i64) -> Result<(), FamilyError> {
    if sign.abs() != 1 {
        return Err(FamilyError::InvalidInput(format!("sign must be ±1, got {sign}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BergeRecord {
    pub m: i64,
    pub n: u64,
    pub sign: i64,
    pub primitive_h1: bool,
    pub primitive_h2: bool,
    pub doubly_primitive: bool,
    pub berge_types: String,
    pub chi_q: i64,
    pub b1_lower: i64,
}

/// The α = `(1, 1)`, β = `T(m, m + 1, 1, ±1)` curve pair.
pub fn berge_pair(m: i64, sign: i64) -> Result<TwistPair, FamilyError> {
    TwistPair::new([1, 1], [m, m + 1, 1, sign])
}

/// `K^n = T(mn + 1, mn + n + 1, n, ±1)`, checked to be doubly primitive.
pub fn berge_family(m: i64, n: u64, sign: i64) -> Result<(TtkParams, BergeRecord), FamilyError> {
    if m < 2 || n < 1 {
        return Err(FamilyError::InvalidInput(format!(
            "need m > 1 and n >= 1, got m = {m}, n = {n}"
        )));
    }
    check_sign(sign)?;
    let n_i = n as i64;
    let params = TtkParams::new(m * n_i + 1, m * n_i + n_i + 1, n_i, sign)?;
    let (h1, h2) = (primitive_h1(&params), primitive_h2(&params));
    if !(h1 && h2) {
        return Err(FamilyError::Internal(format!(
            "{params} is not doubly primitive (h1 = {h1}, h2 = {h2})"
        )));
    }
    let pair = berge_pair(m, sign)?;
    let raw = twist_raw(pair.alpha, pair.beta, n);
    if raw != [params.p(), params.q(), params.r(), params.s()].map(i128::from) {
        return Err(FamilyError::Internal(format!(
            "{params} differs from the twisting formula {raw:?}"
        )));
    }
    let record = BergeRecord {
        m,
        n,
        sign,
        primitive_h1: h1,
        primitive_h2: h2,
        doubly_primitive: true,
        berge_types: "VII/VIII".into(),
        chi_q: catching_chi(&pair)?,
        b1_lower: b1_lower(&pair, n)?,
    };
    Ok((params, record))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeanKind {
    /// `T(p, q, 2q - p, ±1)` with `(p + 1)/2 < q < p`.
    One,
    /// `T(p, q, p - lq, ±1)` with `1 < q < p/2` and `2 <= l <= (p - 2)/q`.
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeanRecord {
    pub kind: DeanKind,
    pub l: Option<i64>,
    pub m: i64,
    pub n: u64,
    pub sign: i64,
    /// `r = 2q - p` (kind one) or `r = p - lq` (kind two).
    pub r_identity: bool,
    /// The range constraints of the kind.
    pub range_ok: bool,
    pub primitive_h1: bool,
    pub primitive_h2: bool,
    pub tunnel_one: bool,
    pub chi_q: i64,
    pub b1_lower: i64,
}

fn dean_raw(kind: DeanKind, l: i64, m: i64, n: i64) -> [i64; 3] {
    match kind {
        DeanKind::One => [2 * m * n - n + 2, m * n + 1, n],
        DeanKind::Two => [(l * m + 1) * n + l, m * n + 1, n],
    }
}

/// `(r identity, range constraints)`, both required along with `r > 1`.
fn dean_checks(kind: DeanKind, l: i64, [p, q, r]: [i64; 3]) -> (bool, bool) {
    match kind {
        DeanKind::One => (r == 2 * q - p, p + 1 < 2 * q && q < p),
        DeanKind::Two => (r == p - l * q, 1 < q && 2 * q < p && 2 <= l && l * q <= p - 2),
    }
}

fn dean_valid(kind: DeanKind, l: i64, raw: [i64; 3]) -> bool {
    let (ident, range) = dean_checks(kind, l, raw);
    ident && range && raw[2] > 1
}

/// A Dean knot from twisting `α = (2, 1)` about `β = (2m - 1, m, 1, ±1)`
/// (kind one) or `α = (l, 1)` about `β = (lm + 1, m, 1, ±1)` (kind two).
pub fn dean_family(
    kind: DeanKind,
    l: Option<i64>,
    m: i64,
    n: u64,
    sign: i64,
    search_bound: u64,
) -> Result<(TtkParams, DeanRecord), FamilyError> {
    check_sign(sign)?;
    if m < 2 || n < 1 {
        return Err(FamilyError::InvalidInput(format!(
            "need m >= 2 and n >= 1, got m = {m}, n = {n}"
        )));
    }
    let l_val = match (kind, l) {
        (DeanKind::One, _) => 0,
        (DeanKind::Two, Some(l)) if l >= 2 => l,
        (DeanKind::Two, Some(l)) => return Err(FamilyError::InvalidInput(format!("need l >= 2, got {l}"))),
        (DeanKind::Two, None) => return Err(FamilyError::InvalidInput("kind two requires l".into())),
    };
    let raw = dean_raw(kind, l_val, m, n as i64);
    if !dean_valid(kind, l_val, raw) {
        let min_n = (1..=search_bound)
            .find(|&k| dean_valid(kind, l_val, dean_raw(kind, l_val, m, k as i64)))
            .ok_or(FamilyError::SearchExhausted { bound: search_bound })?;
        return Err(FamilyError::NeedsLargerN { requested: n, min_n });
    }
    let [p, q, r] = raw;
    let params = TtkParams::new(p, q, r, sign)?;
    let (alpha, c, d) = match kind {
        DeanKind::One => ([2, 1], 2 * m - 1, m),
        DeanKind::Two => ([l_val, 1], l_val * m + 1, m),
    };
    let twisted = twist_raw(alpha, [c, d, 1, sign], n);
    if twisted != [p, q, r, sign].map(i128::from) {
        return Err(FamilyError::Internal(format!(
            "{params} differs from the twisting formula {twisted:?}"
        )));
    }
    let (r_identity, range_ok) = dean_checks(kind, l_val, raw);
    let (h1, h2) = (primitive_h1(&params), primitive_h2(&params));
    let record = DeanRecord {
        kind,
        l: (kind == DeanKind::Two).then_some(l_val),
        m,
        n,
        sign,
        r_identity,
        range_ok,
        primitive_h1: h1,
        primitive_h2: h2,
        tunnel_one: h1 || h2,
        chi_q: catching_chi_raw(alpha, c, d)?,
        b1_lower: b1_lower_raw(alpha, c, d, n)?,
    };
    Ok((params, record))
}

/// Hyperbolicity of `K^n` via the tunnel-one route: toroidal tunnel-one
/// knots and torus knots have `b_1 <= 1`, so a tunnel-one knot with
/// `b_1 >= 2` is hyperbolic.
pub fn hyperbolic_via_b1(params: &TtkParams, pair: &TwistPair, n: u64) -> Certification {
    let expected = twist_raw(pair.alpha, pair.beta, n);
    if expected != [params.p(), params.q(), params.r(), params.s()].map(i128::from) {
        return Certification::Unknown;
    }
    let lower = b1_lower(pair, n).unwrap_or(0);
    Certification::from_bool(tunnel_number_one(params).is_certified() && lower >= 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceTwoCertificate {
    pub m: i64,
    pub n: u64,
    pub sign: i64,
    pub params: TtkParams,
    pub chi_q: i64,
    pub b1_lower: i64,
    pub distance: u32,
    pub reasons: Vec<Citation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceTwoOutcome {
    Issued(DistanceTwoCertificate),
    Refused { reason: String },
}

/// Certifies that the Berge knot `T(mn + 1, mn + n + 1, n, ±1)` has a
/// genus-two Heegaard surface of distance exactly two.
pub fn distance_two_certificate(m: i64, n: u64, sign: i64) -> Result<DistanceTwoOutcome, FamilyError> {
    let (params, record) = berge_family(m, n, sign)?;
    let pair = berge_pair(m, sign)?;
    if !hyperbolic_via_b1(&params, &pair, n).is_certified() {
        return Ok(DistanceTwoOutcome::Refused {
            reason: format!(
                "hyperbolicity not certified: genus-one lower bound {} < 2 at n = {n}",
                record.b1_lower
            ),
        });
    }
    let reasons = vec![
        Citation::new(
            "double primitivity",
            "K primitive on both sides of Σ gives disjoint compressing disks on opposite sides, so distance <= 2",
            [format!(
                "primitive_h1 = {}, primitive_h2 = {}",
                record.primitive_h1, record.primitive_h2
            )],
        ),
        Citation::new(
            "tunnel one with large genus-one bridge number is hyperbolic",
            "toroidal tunnel-one knots and torus knots have b1 <= 1",
            [format!("b1 >= {} >= 2", record.b1_lower)],
        ),
        Citation::new(
            "Casson-Gordon",
            "a hyperbolic knot exterior has no genus-two splitting of distance 0 or 1",
            [format!("{params} certified hyperbolic")],
        ),
    ];
    Ok(DistanceTwoOutcome::Issued(DistanceTwoCertificate {
        m,
        n,
        sign,
        params,
        chi_q: record.chi_q,
        b1_lower: record.b1_lower,
        distance: 2,
        reasons,
    }))
}

/// Builds a certificate that `K = T(p, q, r, s)`, twisted from `pair`, has
/// `b0 - b1 >= C` and `b1 - b2 >= C`.
///
/// `n` is the smallest value at or above [`min_n`] where the exact
/// genus-one bound reaches `C + 1`, `r` is not a multiple of `p` or `q`,
/// and `p - min(r, p - r) >= C`. Then `s = ±(18p + 1)` with the sign of β's `f`.
pub fn certify_gaps(gap: u64, pair: &TwistPair, search_bound: u64) -> Result<GapCertificate, FamilyError> {
    if gap == 0 {
        return Err(FamilyError::InvalidInput("C must be positive".into()));
    }
    let chi = catching_chi(pair)?;
    let start = min_n(pair, search_bound)?;
    let target = Rational::new(gap as i128 + 1, 1);
    // the exact bound (n - k) / 2k reaches C + 1 exactly when n >= k(2C + 3)
    let k = 36 * (-chi) as u64;
    let first = start.max(k.saturating_mul(2 * gap + 3));
    for n in first..=search_bound {
        let raw = twist_raw(pair.alpha, pair.beta, n);
        if !ordered(raw) || !coprime(raw) {
            continue;
        }
        let bound = bgl_bound_exact(n, chi, 1).map_err(|e| FamilyError::Internal(e.to_string()))?;
        if bound.num * target.den < target.num * bound.den {
            continue;
        }
        let [p, q, r, _] = raw;
        if r % p == 0 || r % q == 0 {
            continue;
        }
        let b1_hi = r.min(p - r);
        if p - b1_hi < gap as i128 {
            continue;
        }
        let s_abs = 18 * p + 1;
        let s = if pair.f() > 0 { s_abs } else { -s_abs };
        let s = i64::try_from(s).map_err(|_| FamilyError::InvalidInput("s overflows i64".into()))?;
        pair.with_twist(s)
            .map_err(|e| FamilyError::UnsupportedPair(format!("β fails revalidation with f = {s}: {e}")))?;
        let params = to_params([p, q, r, s as i128])?;
        let b1_lo = bound.ceil().max(0) as i64;
        let b1_hi = b1_hi as i64;
        let inputs = ChainInputs {
            gap,
            params,
            chi_q: chi,
            n,
            bound,
            b1_lower: b1_lo,
            b1_upper: b1_hi,
            b2_upper: 1,
            tunnel_one: tunnel_number_one(&params).is_certified(),
            primitive_h1: primitive_h1(&params),
            regime: pair.regime,
        };
        let cert = GapCertificate {
            c: gap,
            pair: pair.spec(),
            n,
            s,
            params: [params.p(), params.q(), params.r(), params.s()],
            chi_q: chi,
            bounds: crate::certificate::Bounds {
                b0: params.p(),
                b1: [b1_lo, b1_hi],
                b2_upper: 1,
            },
            gaps: [params.p() - b1_hi, b1_lo - 1],
            hypothesis_chain: hypothesis_chain(&inputs),
            tunnel_one: inputs.tunnel_one,
        };
        return Ok(cert);
    }
    Err(FamilyError::SearchExhausted { bound: search_bound })
}
