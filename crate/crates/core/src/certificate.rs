//! Gap certificates and their independent validator.
//!
//! A certificate is fully determined by `(C, pair, n, s)`. The validator
//! rederives every other field with its own arithmetic (it does not call
//! into [`crate::families`] or [`crate::spectrum`]) and reports the first
//! field that differs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::braid::TtkParams;
use crate::families::BetaRegime;
use crate::spectrum::Rational;

/// The curve pair as it appears in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSpec {
    pub alpha: [i64; 2],
    pub beta: [i64; 4],
    pub regime: BetaRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub b0: i64,
    /// `[lower, upper]`.
    pub b1: [i64; 2],
    pub b2_upper: i64,
}

/// One checked hypothesis with the numbers it was checked on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub result: String,
    pub quote: String,
    pub values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapCertificate {
    #[serde(rename = "C")]
    pub c: u64,
    pub pair: PairSpec,
    pub n: u64,
    pub s: i64,
    pub params: [i64; 4],
    pub chi_q: i64,
    pub bounds: Bounds,
    /// `[b0 - b1_upper, b1_lower - b2_upper]`.
    pub gaps: [i64; 2],
    pub hypothesis_chain: Vec<ChainLink>,
    pub tunnel_one: bool,
}

impl GapCertificate {
    /// Canonical JSON: sorted keys, integers only.
    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("certificate serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

/// Numbers the hypothesis chain is rendered from.
#[derive(Debug, Clone, Copy)]
pub struct ChainInputs {
    pub gap: u64,
    pub params: TtkParams,
    pub chi_q: i64,
    pub n: u64,
    pub bound: Rational,
    pub b1_lower: i64,
    pub b1_upper: i64,
    pub b2_upper: i64,
    pub tunnel_one: bool,
    pub primitive_h1: bool,
    pub regime: BetaRegime,
}

fn link(result: &str, quote: &str, values: Value) -> ChainLink {
    let values = match values {
        Value::Object(m) => m.into_iter().collect(),
        _ => unreachable!("chain values are objects"),
    };
    ChainLink {
        result: result.into(),
        quote: quote.into(),
        values,
    }
}

/// The ordered list of results a gap certificate relies on.
pub fn hypothesis_chain(x: &ChainInputs) -> Vec<ChainLink> {
    let (p, q, r, s) = (x.params.p(), x.params.q(), x.params.r(), x.params.s());
    let mut chain = vec![
        link(
            "twisted parameters are ordered",
            "1 < r < p < q",
            json!({"p": p, "q": q, "r": r}),
        ),
        link(
            "catching surface",
            "chi(Q) = 1 - (|a|-1)(|b|-1) - |bc| - |ad| < 0",
            json!({"chi_q": x.chi_q}),
        ),
    ];
    if x.regime == BetaRegime::TorusBeta {
        chain.push(link(
            "torus beta has a non-torus surface slope",
            "slope(T(c,d,1,f)) = cd + f != cd for f != 0",
            json!({"regime": "torus_beta"}),
        ));
    }
    chain.extend([
        link(
            "genus-one bound from annulus twisting (Baker-Gordon-Luecke)",
            "b1(K^n) >= (1/2)(n/(-36 chi(Q)) - 1)",
            json!({
                "n": x.n,
                "chi_q": x.chi_q,
                "bound": {"num": x.bound.num, "den": x.bound.den},
                "b1_lower": x.b1_lower,
            }),
        ),
        link(
            "hyperbolic twisting link (Lee)",
            "r > 1 and r not a multiple of p or q imply K ∪ C hyperbolic",
            json!({"r": r, "r_mod_p": r % p, "r_mod_q": r % q}),
        ),
        link(
            "exceptional surgeries on a hyperbolic twisting link (Lee)",
            "K ∪ C hyperbolic and |s| > 5 imply T(p,q,r,s) hyperbolic",
            json!({"s_abs": s.abs()}),
        ),
        link(
            "bridge sphere survives large twisting",
            "1 < r < p < q and |s| > 18p imply b0(T(p,q,r,s)) = p",
            json!({"s_abs": s.abs(), "threshold": 18 * p, "b0": p}),
        ),
        link(
            "bridge torus for twisted torus knots",
            "b1(T(p,q,r,s)) <= min(r, p - r)",
            json!({"b1_upper": x.b1_upper}),
        ),
        link(
            "natural genus-two position",
            "b2(K) <= 1",
            json!({"b2_upper": x.b2_upper}),
        ),
        link(
            "two gaps",
            "b0 - b1 >= C and b1 - b2 >= C",
            json!({"C": x.gap, "gap0": p - x.b1_upper, "gap1": x.b1_lower - x.b2_upper}),
        ),
        link(
            "primitive curves are handlebody cores",
            "r ≡ ±1 or ±q (mod p), or s = ±1 and r ≡ ±1 or ±p (mod q), implies tunnel number one",
            json!({"primitive_h1": x.primitive_h1, "tunnel_one": x.tunnel_one}),
        ),
    ]);
    chain
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("field `{field}`: {detail}")]
pub struct ValidationFailure {
    pub field: String,
    pub detail: String,
}

fn fail<T>(field: &str, detail: impl Into<String>) -> Result<T, ValidationFailure> {
    Err(ValidationFailure {
        field: field.into(),
        detail: detail.into(),
    })
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_pair(pair: &PairSpec) -> Result<(), ValidationFailure> {
    let [a, b] = pair.alpha;
    let [c, d, e, f] = pair.beta;
    if gcd(a.into(), b.into()) != 1 || gcd(c.into(), d.into()) != 1 {
        return fail("pair", "gcd(a, b) and gcd(c, d) must be 1");
    }
    if a * d == b * c {
        return fail("pair", "ad - bc must be nonzero");
    }
    if f == 0 {
        return fail("pair.beta", "f must be nonzero");
    }
    let regime = if e == 1 {
        BetaRegime::TorusBeta
    } else {
        BetaRegime::GenericBeta
    };
    if regime != pair.regime {
        return fail("pair.regime", format!("e = {e} implies {regime:?}"));
    }
    let ok = match regime {
        BetaRegime::TorusBeta => {
            let lo = a.abs().min(b.abs());
            let hi = a.abs().max(b.abs());
            1 < c && c < d && (lo <= 1 || (lo, hi) != (c, d))
        }
        BetaRegime::GenericBeta => 1 < e && e < c && c < d,
    };
    if !ok {
        return fail("pair.beta", "β violates its regime constraints");
    }
    Ok(())
}

/// Rederives a certificate from `(C, pair, n, s)` and compares it field by
/// field with `cert`.
pub fn validate_certificate(cert: &GapCertificate) -> Result<(), ValidationFailure> {
    if cert.c == 0 {
        return fail("C", "must be positive");
    }
    check_pair(&cert.pair)?;
    let [a, b] = cert.pair.alpha.map(i128::from);
    let [c, d, e, f] = cert.pair.beta.map(i128::from);
    let n = cert.n as i128;
    let s = cert.s as i128;

    let delta = (a * d - b * c).abs();
    let p = a + n * delta * c;
    let q = b + n * delta * d;
    let r = n * delta * e;
    if !(1 < r && r < p && p < q) {
        return fail("n", format!("twisted parameters ({p}, {q}, {r}) violate 1 < r < p < q"));
    }
    if gcd(p, q) != 1 {
        return fail("n", format!("gcd({p}, {q}) != 1"));
    }
    if s.signum() != f.signum() {
        return fail("s", "sign of s must match the sign of β's f");
    }
    if s.abs() <= 18 * p {
        return fail("s", format!("|s| = {} must exceed 18p = {}", s.abs(), 18 * p));
    }
    if r % p == 0 || r % q == 0 {
        return fail("params", "r is a multiple of p or q");
    }

    let chi = 1 - (a.abs() - 1) * (b.abs() - 1) - (b * c).abs() - (a * d).abs();
    if chi >= 0 {
        return fail("chi_q", format!("χ(Q) = {chi} is not negative"));
    }
    let k = -36 * chi;
    // b1 lower: least integer m >= 0 with 2km >= n - k
    let num = n - k;
    let den = 2 * k;
    let mut b1_lo = if num <= 0 { 0 } else { (num + den - 1) / den };
    while b1_lo > 0 && den * (b1_lo - 1) >= num {
        b1_lo -= 1;
    }
    let g = gcd(num, den).max(1);
    let bound = Rational {
        num: num / g,
        den: den / g,
    };
    let b1_hi = r.min(p - r);
    let b2 = 1i128;
    let gap0 = p - b1_hi;
    let gap1 = b1_lo - b2;
    let cc = cert.c as i128;
    if gap0 < cc || gap1 < cc {
        return fail("gaps", format!("gaps ({gap0}, {gap1}) do not reach C = {cc}"));
    }
    if b1_lo > b1_hi {
        return fail("bounds.b1", format!("lower {b1_lo} exceeds upper {b1_hi}"));
    }

    let to64 = |x: i128, field: &str| i64::try_from(x).or_else(|_| fail(field, "overflows i64"));
    let (p64, q64, r64) = (to64(p, "params")?, to64(q, "params")?, to64(r, "params")?);
    let params = TtkParams::new(p64, q64, r64, cert.s).or_else(|e| fail("params", e.to_string()))?;
    let h1 = [1, -1, q, -q].iter().any(|&x| (r - x).rem_euclid(p) == 0);
    let h2 = s.abs() == 1 && [1, -1, p, -p].iter().any(|&x| (r - x).rem_euclid(q) == 0);

    let inputs = ChainInputs {
        gap: cert.c,
        params,
        chi_q: to64(chi, "chi_q")?,
        n: cert.n,
        bound,
        b1_lower: to64(b1_lo, "bounds.b1")?,
        b1_upper: to64(b1_hi, "bounds.b1")?,
        b2_upper: 1,
        tunnel_one: h1 || h2,
        primitive_h1: h1,
        regime: cert.pair.regime,
    };
    let expected = GapCertificate {
        c: cert.c,
        pair: cert.pair,
        n: cert.n,
        s: cert.s,
        params: [p64, q64, r64, cert.s],
        chi_q: inputs.chi_q,
        bounds: Bounds {
            b0: p64,
            b1: [inputs.b1_lower, inputs.b1_upper],
            b2_upper: 1,
        },
        gaps: [to64(gap0, "gaps")?, to64(gap1, "gaps")?],
        hypothesis_chain: hypothesis_chain(&inputs),
        tunnel_one: inputs.tunnel_one,
    };
    compare(cert, &expected)
}

fn compare(got: &GapCertificate, want: &GapCertificate) -> Result<(), ValidationFailure> {
    let checks: [(&str, bool); 12] = [
        ("params", got.params == want.params),
        ("chi_q", got.chi_q == want.chi_q),
        ("bounds.b0", got.bounds.b0 == want.bounds.b0),
        ("bounds.b1", got.bounds.b1 == want.bounds.b1),
        ("bounds.b2_upper", got.bounds.b2_upper == want.bounds.b2_upper),
        ("gaps", got.gaps == want.gaps),
        ("tunnel_one", got.tunnel_one == want.tunnel_one),
        (
            "hypothesis_chain.length",
            got.hypothesis_chain.len() == want.hypothesis_chain.len(),
        ),
        ("C", got.c == want.c),
        ("n", got.n == want.n),
        ("s", got.s == want.s),
        ("pair", got.pair == want.pair),
    ];
    if let Some((field, _)) = checks.iter().find(|(_, ok)| !ok) {
        return fail(field, "recomputed value differs");
    }
    for (i, (g, w)) in got.hypothesis_chain.iter().zip(&want.hypothesis_chain).enumerate() {
        if g != w {
            return fail(
                &format!("hypothesis_chain[{i}]"),
                format!("expected `{}` with {:?}", w.result, w.values),
            );
        }
    }
    // belt and braces: the canonical renderings must agree byte for byte
    if got.to_canonical_json() != want.to_canonical_json() {
        return fail("certificate", "canonical JSON differs");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{certify_gaps, TwistPair, DEFAULT_SEARCH_BOUND};

    fn cert() -> GapCertificate {
        let pair = TwistPair::new([1, 1], [2, 3, 1, 1]).unwrap();
        certify_gaps(3, &pair, DEFAULT_SEARCH_BOUND).unwrap()
    }

    #[test]
    fn round_trip_validates() {
        let c = cert();
        validate_certificate(&c).unwrap();
        let back: GapCertificate = serde_json::from_str(&c.to_canonical_json()).unwrap();
        assert_eq!(back, c);
        validate_certificate(&back).unwrap();
    }

    #[test]
    fn json_schema_keys() {
        let v: Value = serde_json::from_str(&cert().to_canonical_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "C",
                "bounds",
                "chi_q",
                "gaps",
                "hypothesis_chain",
                "n",
                "pair",
                "params",
                "s",
                "tunnel_one"
            ]
        );
        assert_eq!(v["pair"]["regime"], "torus_beta");
        assert_eq!(v["bounds"]["b1"], json!([4, 1296]));
        let bgl = v["hypothesis_chain"]
            .as_array()
            .unwrap()
            .iter()
            .find(|l| l["values"].get("bound").is_some())
            .unwrap();
        assert_eq!(bgl["values"]["bound"], json!({"num": 4, "den": 1}));
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = cert();
        c.bounds.b0 += 1;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "bounds.b0");

        let mut c = cert();
        c.bounds.b1[0] = 5;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "bounds.b1");

        let mut c = cert();
        c.s = 18 * 2593;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "s");

        let mut c = cert();
        c.s = -c.s;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "s");

        let mut c = cert();
        c.hypothesis_chain[0].values.insert("p".into(), json!(1));
        assert_eq!(validate_certificate(&c).unwrap_err().field, "hypothesis_chain[0]");

        let mut c = cert();
        c.tunnel_one = false;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "tunnel_one");

        let mut c = cert();
        c.pair.regime = BetaRegime::GenericBeta;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "pair.regime");

        let mut c = cert();
        c.c = 4;
        assert_eq!(validate_certificate(&c).unwrap_err().field, "gaps");
    }

    #[test]
    fn larger_twist_still_validates() {
        // any |s| > 18p is acceptable once the other fields follow
        let mut c = cert();
        c.s += 1000;
        c.params[3] = c.s;
        let mut fixed = c.clone();
        for l in &mut fixed.hypothesis_chain {
            if l.values.contains_key("s_abs") {
                l.values.insert("s_abs".into(), json!(c.s));
            }
        }
        validate_certificate(&fixed).unwrap();
    }
}
