//! Bridge-number bounds for a single twisted torus knot.
//!
//! Each bound carries provenance: the result that certifies it and the
//! hypotheses that were checked. All criteria here are sufficient
//! conditions, so a failed hypothesis yields "no bound" or "unknown",
//! never a negative claim.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::TtkParams;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A cited result together with the concrete hypotheses checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citation {
    pub result: String,
    pub quote: String,
    pub hypotheses_checked: Vec<String>,
}

impl Citation {
    pub fn new(result: &str, quote: &str, checked: impl IntoIterator<Item = String>) -> Self {
        Self {
            result: result.to_string(),
            quote: quote.to_string(),
            hypotheses_checked: checked.into_iter().collect(),
        }
    }
}

/// An interval for `b_g(K)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub genus: u32,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
    pub exact: Option<i64>,
    pub provenance: Vec<Citation>,
}

impl BoundReport {
    pub fn unknown(genus: u32) -> Self {
        Self {
            genus,
            lower: None,
            upper: None,
            exact: None,
            provenance: Vec::new(),
        }
    }

    pub fn exact(genus: u32, value: i64, why: Citation) -> Self {
        Self {
            genus,
            lower: Some(value),
            upper: Some(value),
            exact: Some(value),
            provenance: vec![why],
        }
    }

    pub fn upper(genus: u32, value: i64, why: Citation) -> Self {
        Self {
            genus,
            lower: None,
            upper: Some(value),
            exact: None,
            provenance: vec![why],
        }
    }

    /// `exact` pins both ends, and `lower <= upper`.
    pub fn is_consistent(&self) -> bool {
        let pinned = match self.exact {
            Some(e) => self.lower == Some(e) && self.upper == Some(e),
            None => true,
        };
        let ordered = match (self.lower, self.upper) {
            (Some(l), Some(u)) => l <= u,
            _ => true,
        };
        pinned && ordered
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Certified,
    Unknown,
}

impl Certification {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Certified
        } else {
            Self::Unknown
        }
    }

    pub fn is_certified(self) -> bool {
        self == Self::Certified
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityStatus {
    /// Hyperbolicity of `K ∪ C`, `C` the unknotted twisting circle.
    pub link_status: Certification,
    pub knot_status: Certification,
    /// Knot certified through the tunnel-one / genus-one bridge route rather
    /// than through the link.
    pub alt_route: bool,
    pub reasons: Vec<Citation>,
}

/// `pq + r²s`, the slope of the genus-two splitting surface on `∂N(K)`.
pub fn surface_slope(params: &TtkParams) -> i128 {
    let (p, q, r, s) = (
        params.p() as i128,
        params.q() as i128,
        params.r() as i128,
        params.s() as i128,
    );
    p * q + r * r * s
}

/// `|s|` must exceed this (strictly) for `b_0 = p` when `1 < r < p < q`.
pub fn b0_twist_threshold(p: i64) -> i64 {
    18 * p
}

fn twisted_regime(k: &TtkParams) -> bool {
    1 < k.r() && k.r() < k.p() && k.p() < k.q()
}

pub fn b0_bounds(params: &TtkParams) -> BoundReport {
    let (p, q, r, s) = (params.p(), params.q(), params.r(), params.s());
    if params.is_torus_regime() {
        return BoundReport::exact(
            0,
            p.min(q),
            Citation::new(
                "torus knot bridge number (Schubert)",
                "b0(T(p,q)) = min(p, q)",
                [format!("r = {r} in {{0, 1}}: trivial twist, knot is T({p}, {q})")],
            ),
        );
    }
    let threshold = b0_twist_threshold(p);
    if twisted_regime(params) && s.unsigned_abs() > threshold as u64 {
        return BoundReport::exact(
            0,
            p,
            Citation::new(
                "bridge sphere survives large twisting",
                "1 < r < p < q and |s| > 18p imply b0(T(p,q,r,s)) = p",
                [
                    format!("1 < r < p < q: 1 < {r} < {p} < {q}"),
                    format!("|s| > 18p: {} > {threshold}", s.unsigned_abs()),
                ],
            ),
        );
    }
    if 1 < r && r < p {
        return BoundReport::upper(
            0,
            p,
            Citation::new(
                "twisting circle isotopic into a p-bridge sphere",
                "r < p implies b0(T(p,q,r,s)) <= p for every s",
                [format!("1 < r < p: 1 < {r} < {p}")],
            ),
        );
    }
    BoundReport::unknown(0)
}

/// `min(r, p - r)` for `1 < r < p`; `None` outside that range.
pub fn b1_upper(params: &TtkParams) -> Option<i64> {
    let (p, r) = (params.p(), params.r());
    (1 < r && r < p).then(|| r.min(p - r))
}

/// `b_2 <= 1`: the knot sits on the genus-two splitting surface.
pub fn b2_upper(_params: &TtkParams) -> i64 {
    1
}

/// Propagates `b_{g+1} <= b_g - 1` through reports sorted by genus.
///
/// Only upper bounds are touched; an exact value is left alone.
pub fn stabilization_chain(reports: &[BoundReport]) -> Vec<BoundReport> {
    let mut out = reports.to_vec();
    for g in 1..out.len() {
        let Some(prev) = out[g - 1].upper else { continue };
        let candidate = (prev - 1).max(0);
        let cur = &mut out[g];
        if cur.exact.is_some() || cur.upper.is_some_and(|u| u <= candidate) {
            continue;
        }
        if cur.lower.is_some_and(|l| l > candidate) {
            continue;
        }
        cur.upper = Some(candidate);
        let line = format!("b{} <= {prev} gives b{} <= {candidate}", g - 1, g);
        let already = cur.provenance.iter().any(|c| c.hypotheses_checked.contains(&line));
        if !already {
            cur.provenance.push(Citation::new(
                "meridional stabilization",
                "b_{g+1}(K) <= b_g(K) - 1 whenever b_g(K) > 0",
                [line],
            ));
        }
    }
    out
}

pub fn hyperbolicity(params: &TtkParams) -> HyperbolicityStatus {
    let (p, q, r, s) = (params.p(), params.q(), params.r(), params.s());
    let link = r > 1 && r % p != 0 && r % q != 0;
    let knot = link && s.abs() > 5;
    let mut reasons = vec![Citation::new(
        "hyperbolic twisting link (Lee)",
        "r > 1 and r not a multiple of p or q imply K ∪ C hyperbolic",
        [
            format!("r > 1: {}", r > 1),
            format!("r mod p = {} != 0: {}", r % p, r % p != 0),
            format!("r mod q = {} != 0: {}", r % q, r % q != 0),
        ],
    )];
    if link {
        reasons.push(Citation::new(
            "exceptional surgeries on a hyperbolic twisting link (Lee)",
            "K ∪ C hyperbolic and |s| > 5 imply T(p,q,r,s) hyperbolic",
            [format!("|s| > 5: {} > 5 is {}", s.abs(), s.abs() > 5)],
        ));
    }
    HyperbolicityStatus {
        link_status: Certification::from_bool(link),
        knot_status: Certification::from_bool(knot),
        alt_route: false,
        reasons,
    }
}

/// `9 χ(F) χ(G)`, the most essential arcs two essential surfaces with
/// negative Euler characteristic can meet in without parallel arcs.
pub fn arc_bound(chi_f: i64, chi_g: i64) -> Result<i64, SpectrumError> {
    if chi_f >= 0 || chi_g >= 0 {
        return Err(SpectrumError::InvalidInput(format!(
            "Euler characteristics must be negative, got ({chi_f}, {chi_g})"
        )));
    }
    Ok(9 * chi_f * chi_g)
}

/// `-3 χ`, the largest family of pairwise non-parallel essential arcs.
pub fn max_nonparallel_arcs(chi: i64) -> Result<i64, SpectrumError> {
    if chi >= 0 {
        return Err(SpectrumError::InvalidInput(format!(
            "Euler characteristic must be negative, got {chi}"
        )));
    }
    Ok(-3 * chi)
}

/// An exact nonnegative-denominator fraction, rendered as `{num, den}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i128,
    pub den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num_integer::gcd(num, den).max(1);
        let sign = den.signum();
        Self {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn ceil(&self) -> i128 {
        num_integer::Integer::div_ceil(&self.num, &self.den)
    }
}

/// The real-valued twisting bound `(1/2)(n / (-36 χ(Q)) - 2g + 1)`.
pub fn bgl_bound_exact(n: u64, chi_q: i64, g: u32) -> Result<Rational, SpectrumError> {
    if chi_q >= 0 {
        return Err(SpectrumError::InvalidInput(format!(
            "χ(Q) must be negative, got {chi_q}"
        )));
    }
    let k = 36 * (-chi_q) as i128;
    // (n - k(2g - 1)) / 2k
    Ok(Rational::new(n as i128 - k * (2 * g as i128 - 1), 2 * k))
}

/// Integer lower bound on `b_g(K^n)`: the ceiling of [`bgl_bound_exact`],
/// clamped at 0.
pub fn bgl_lower_bound(n: u64, chi_q: i64, g: u32) -> Result<i64, SpectrumError> {
    let ceil = bgl_bound_exact(n, chi_q, g)?.ceil().max(0);
    Ok(ceil as i64)
}

/// Smallest `n` with `bgl_lower_bound(n, chi_q, g) >= target`.
pub fn bgl_min_n(target: i64, chi_q: i64, g: u32) -> Result<u64, SpectrumError> {
    if chi_q >= 0 {
        return Err(SpectrumError::InvalidInput(format!(
            "χ(Q) must be negative, got {chi_q}"
        )));
    }
    if target <= 0 {
        return Ok(0);
    }
    let k = 36 * (-chi_q) as i128;
    // ceil((n - k(2g - 1)) / 2k) >= target  <=>  n > k(2g - 1) + 2k(target - 1)
    let n = k * (2 * g as i128 - 1) + 2 * k * (target as i128 - 1) + 1;
    u64::try_from(n.max(0)).map_err(|_| SpectrumError::InvalidInput(format!("n = {n} overflows")))
}

/// Bounds for genus 0, 1 and 2, stabilized.
pub fn spectrum_report(params: &TtkParams) -> Vec<BoundReport> {
    let (p, r) = (params.p(), params.r());
    let b0 = b0_bounds(params);

    let b1 = match b1_upper(params) {
        Some(u) => BoundReport::upper(
            1,
            u,
            Citation::new(
                "bridge torus for twisted torus knots",
                "b1(T(p,q,r,s)) <= min(r, p - r)",
                [
                    format!("1 < r < p: 1 < {r} < {p}"),
                    format!("min({r}, {}) = {u}", p - r),
                ],
            ),
        ),
        None if params.is_torus_regime() => BoundReport {
            provenance: vec![Citation::new(
                "torus regime",
                "r in {0, 1}: knot is a torus knot on the genus-one Heegaard torus; b1 bound trivial",
                [format!("r = {r}")],
            )],
            ..BoundReport::unknown(1)
        },
        None => BoundReport::unknown(1),
    };

    let b2 = BoundReport::upper(
        2,
        b2_upper(params),
        Citation::new(
            "natural genus-two position",
            "K lies on a genus-two Heegaard surface as a core-parallel curve, so b2(K) <= 1",
            [format!("0 <= r <= p: 0 <= {r} <= {p}")],
        ),
    );
    stabilization_chain(&[b0, b1, b2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: i64, q: i64, r: i64, s: i64) -> TtkParams {
        TtkParams::new(p, q, r, s).unwrap()
    }

    fn bounds(rep: &BoundReport) -> (Option<i64>, Option<i64>, Option<i64>) {
        (rep.lower, rep.upper, rep.exact)
    }

    #[test]
    fn surface_slope_examples() {
        assert_eq!(surface_slope(&k(3, 2, 2, 1)), 10);
        assert_eq!(surface_slope(&k(7, 9, 4, 0)), 63);
        let s = surface_slope(&k(5, 7, 1, -4));
        assert_eq!(s, 31);
        assert_ne!(s, 35);
    }

    #[test]
    fn b0_examples() {
        let big = b0_bounds(&k(2593, 3889, 1296, 46675));
        assert_eq!(big.exact, Some(2593));
        assert!(big.is_consistent());
        assert_eq!(b0_bounds(&k(5, 7, 1, 100)).exact, Some(5));
        assert_eq!(b0_bounds(&k(7, 5, 0, 3)).exact, Some(5));
        assert_eq!(bounds(&b0_bounds(&k(7, 9, 4, 2))), (None, Some(7), None));
        // r = p: no claim
        assert_eq!(bounds(&b0_bounds(&k(5, 7, 5, 200))), (None, None, None));
    }

    #[test]
    fn b0_threshold_is_strict() {
        let p = 7;
        let at = b0_bounds(&k(p, 9, 4, 18 * p));
        assert_eq!(at.exact, None);
        assert_eq!(at.upper, Some(p));
        assert_eq!(b0_bounds(&k(p, 9, 4, -(18 * p + 1))).exact, Some(p));
        assert_eq!(b0_bounds(&k(p, 9, 4, -(18 * p))).exact, None);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(b0_twist_threshold(2593), 46674);
        assert_eq!(b0_twist_threshold(2), 36);
        assert_eq!(b0_twist_threshold(6049), 108882);
    }

    #[test]
    fn b1_b2_examples() {
        assert_eq!(b1_upper(&k(7, 9, 3, 5)), Some(3));
        assert_eq!(b1_upper(&k(7, 9, 5, 1)), Some(2));
        let big = b1_upper(&k(2593, 3889, 1296, 1)).unwrap();
        assert_eq!(big, 1296);
        assert!(2 * big <= 2593);
        assert_eq!(b1_upper(&k(5, 7, 1, 3)), None);
        assert_eq!(b1_upper(&k(5, 7, 5, 3)), None);
        assert_eq!(b2_upper(&k(3, 2, 2, 1)), 1);
        assert_eq!(b2_upper(&k(2, 3, 0, 0)), 1);
    }

    #[test]
    fn stabilization_examples() {
        let c = || Citation::new("x", "y", []);
        let out = stabilization_chain(&[BoundReport::exact(0, 5, c()), BoundReport::unknown(1)]);
        assert_eq!(out[1].upper, Some(4));
        let out = stabilization_chain(&[BoundReport::upper(0, 7, c()), BoundReport::upper(1, 2, c())]);
        assert_eq!(out[1].upper, Some(2));
        assert_eq!(out[1].provenance.len(), 1);
        let chain = [
            BoundReport::exact(0, 11, c()),
            BoundReport::upper(1, 3, c()),
            BoundReport::upper(2, 1, c()),
        ];
        let out = stabilization_chain(&chain);
        assert_eq!(out[2].upper, Some(1));
        assert_eq!(out, chain.to_vec());
        // idempotent
        let once = stabilization_chain(&[
            BoundReport::exact(0, 5, c()),
            BoundReport::unknown(1),
            BoundReport::unknown(2),
        ]);
        assert_eq!(once[2].upper, Some(3));
        assert_eq!(stabilization_chain(&once), once);
        // zero stays zero
        let out = stabilization_chain(&[BoundReport::upper(0, 0, c()), BoundReport::unknown(1)]);
        assert_eq!(out[1].upper, Some(0));
    }

    #[test]
    fn hyperbolicity_examples() {
        let h = hyperbolicity(&k(7, 9, 4, 6));
        assert_eq!(
            (h.link_status, h.knot_status),
            (Certification::Certified, Certification::Certified)
        );
        let h = hyperbolicity(&k(7, 9, 4, 3));
        assert_eq!(
            (h.link_status, h.knot_status),
            (Certification::Certified, Certification::Unknown)
        );
        // 3 is not a multiple of 6 or 7
        let h = hyperbolicity(&k(6, 7, 3, 100));
        assert_eq!(
            (h.link_status, h.knot_status),
            (Certification::Certified, Certification::Certified)
        );
        let h = hyperbolicity(&k(6, 7, 6, 100));
        assert_eq!(h.link_status, Certification::Unknown);
        let h = hyperbolicity(&k(5, 7, 1, 100));
        assert_eq!(h.link_status, Certification::Unknown);
        assert_eq!(hyperbolicity(&k(7, 9, 4, -5)).knot_status, Certification::Unknown);
        assert_eq!(hyperbolicity(&k(7, 9, 4, -6)).knot_status, Certification::Certified);
    }

    #[test]
    fn arc_counts() {
        assert_eq!(arc_bound(-1, -2), Ok(18));
        assert_eq!(arc_bound(-2, -2), Ok(36));
        assert_eq!(arc_bound(-4, -2), Ok(72));
        assert!(arc_bound(0, -2).is_err());
        assert!(arc_bound(-1, 3).is_err());
        assert_eq!(max_nonparallel_arcs(-1), Ok(3));
        assert_eq!(max_nonparallel_arcs(-4), Ok(12));
        assert_eq!(max_nonparallel_arcs(-2), Ok(6));
        assert!(max_nonparallel_arcs(0).is_err());
        for a in -6..0 {
            for b in -6..0 {
                assert_eq!(arc_bound(a, b), arc_bound(b, a));
            }
        }
    }

    /// Smallest integer `>= (1/2)(n/(-36χ) - 2g + 1)` by scanning candidates,
    /// independent of the closed-form ceiling.
    fn bgl_by_scan(n: u64, chi: i64, g: u32) -> i64 {
        let k = 36 * -chi;
        // m >= x  <=>  2km >= n - k(2g-1)
        let rhs = n as i64 - k * (2 * g as i64 - 1);
        (0..).find(|&m| 2 * k * m >= rhs).unwrap()
    }

    #[test]
    fn bgl_examples() {
        assert_eq!(bgl_lower_bound(3024, -4, 1), Ok(10));
        assert_eq!(bgl_lower_bound(0, -4, 1), Ok(0));
        assert_eq!(bgl_lower_bound(0, -9, 1), Ok(0));
        assert_eq!(bgl_lower_bound(1296, -4, 1), Ok(4));
        assert_eq!(bgl_bound_exact(1296, -4, 1).unwrap(), Rational { num: 4, den: 1 });
        assert!(bgl_lower_bound(10, 0, 1).is_err());
        for chi in [-1, -4, -6, -10] {
            for g in 0..3 {
                for n in (0..5000).step_by(37) {
                    assert_eq!(
                        bgl_lower_bound(n, chi, g).unwrap(),
                        bgl_by_scan(n, chi, g),
                        "n={n} chi={chi} g={g}"
                    );
                }
            }
        }
    }

    #[test]
    fn bgl_min_n_matches_scan() {
        for chi in [-1, -4, -9] {
            for g in 0..3 {
                for target in 0..40 {
                    let n = bgl_min_n(target, chi, g).unwrap();
                    assert!(bgl_by_scan(n, chi, g) >= target);
                    assert!(n == 0 || bgl_by_scan(n - 1, chi, g) < target);
                }
            }
        }
        assert_eq!(bgl_min_n(4, -4, 1), Ok(1009));
        assert!(bgl_min_n(4, 0, 1).is_err());
    }

    #[test]
    fn bgl_is_monotone_and_unbounded() {
        for target in [1i64, 10, 100, 1000] {
            let n = (0u64..)
                .step_by(1)
                .find(|&n| bgl_lower_bound(n, -4, 1).unwrap() >= target);
            let n = n.unwrap();
            assert!(bgl_lower_bound(n.saturating_sub(1), -4, 1).unwrap() < target || n == 0);
        }
        let mut last = 0;
        for n in 0..20_000 {
            let b = bgl_lower_bound(n, -7, 1).unwrap();
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn spectrum_report_examples() {
        let rep = spectrum_report(&k(2593, 3889, 1296, 46675));
        assert_eq!(
            rep.iter().map(bounds).collect::<Vec<_>>(),
            vec![
                (Some(2593), Some(2593), Some(2593)),
                (None, Some(1296), None),
                (None, Some(1), None),
            ]
        );
        let rep = spectrum_report(&k(5, 7, 1, 3));
        assert_eq!(rep[0].exact, Some(5));
        assert_eq!(rep[1].upper, Some(4));
        assert!(rep[1].provenance.iter().any(|c| c.result == "meridional stabilization"));
        assert!(rep[1].provenance.iter().any(|c| c.result == "torus regime"));
        assert_eq!(rep[2].upper, Some(1));
        let rep = spectrum_report(&k(7, 9, 4, 2));
        assert_eq!(
            rep.iter().map(|r| r.upper).collect::<Vec<_>>(),
            vec![Some(7), Some(3), Some(1)]
        );
        assert!(rep.iter().all(BoundReport::is_consistent));
        assert!(rep.iter().all(|r| r.upper.is_none() || !r.provenance.is_empty()));
    }

    #[test]
    fn b1_upper_is_at_most_half_p() {
        for p in 3..40i64 {
            for r in 2..p {
                let q = p + 1;
                assert!(2 * b1_upper(&k(p, q, r, 1)).unwrap() <= p);
            }
        }
    }

    #[test]
    fn exact_b0_needs_its_hypotheses() {
        for p in 2..12i64 {
            for q in 2..14i64 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for r in 0..=p {
                    for s in [-300, -37, -36, -5, 0, 1, 36, 37, 216, 217] {
                        let kk = k(p, q, r, s);
                        if b0_bounds(&kk).exact.is_some() {
                            assert!(r <= 1 || s.abs() > b0_twist_threshold(p), "{kk}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bound_report_json_shape() {
        let rep = b0_bounds(&k(7, 9, 4, 2));
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["genus", "lower", "upper", "exact", "provenance"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["lower"], serde_json::Value::Null);
        let cite = &v["provenance"][0];
        for key in ["result", "quote", "hypotheses_checked"] {
            assert!(cite.get(key).is_some(), "{key}");
        }
    }
}
