//! Property suites that exercise the invariants against closed forms and
//! symmetries. Every suite is seeded and deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid::{ttk_braid, BraidWord, TtkParams};
use crate::invariants::{alexander, jones_capped, torus_oracle_check_with, InvariantError, OracleVerdict};
use crate::poly::LaurentPoly;

pub const DEFAULT_SEED: u64 = 7_631_979;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// `[p, q, r, s]` of the offending knot.
    pub params: [i64; 4],
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn quad(k: &TtkParams) -> [i64; 4] {
    [k.p(), k.q(), k.r(), k.s()]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `T(p, q, r, f)` for coprime `2 ≤ p, q ≤ max_pq`, `p ≠ q`, `r ∈ {0, 1}`,
/// `|f| ≤ max_f` must carry the Alexander polynomial of `T(p, q)`.
pub fn torus_suite<F>(max_pq: i64, max_f: i64, alexander_fn: F) -> SuiteReport
where
    F: Fn(&BraidWord) -> Result<LaurentPoly, InvariantError> + Copy,
{
    let mut report = SuiteReport {
        name: "torus".into(),
        checked: 0,
        failures: vec![],
    };
    for p in 2..=max_pq {
        for q in 2..=max_pq {
            if p == q || gcd(p, q) != 1 {
                continue;
            }
            for r in 0..=1 {
                for f in -max_f..=max_f {
                    let k = TtkParams::new(p, q, r, f).expect("grid parameters are valid");
                    report.checked += 1;
                    match torus_oracle_check_with(&k, alexander_fn) {
                        Ok(OracleVerdict::Consistent) => {}
                        Ok(v) => report.failures.push(Failure {
                            params: quad(&k),
                            reason: format!("{v:?}"),
                        }),
                        Err(e) => report.failures.push(Failure {
                            params: quad(&k),
                            reason: e.to_string(),
                        }),
                    }
                }
            }
        }
    }
    report
}

/// Draws `count` twisted torus knots whose braid word has at most
/// `max_crossings` letters.
pub fn random_knots(count: usize, max_crossings: u128, seed: u64) -> Vec<TtkParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = rng.gen_range(2..=6);
        let q = rng.gen_range(2..=12);
        if p == q || gcd(p, q) != 1 {
            continue;
        }
        let r = rng.gen_range(0..=p);
        let s = rng.gen_range(-4..=4);
        let Ok(k) = TtkParams::new(p, q, r, s) else { continue };
        if k.crossing_count() <= max_crossings {
            out.push(k);
        }
    }
    out
}

/// Alexander polynomials of random knot closures are palindromic with
/// `Δ(1) = ±1`.
pub fn symmetry_suite<F>(count: usize, max_crossings: u128, seed: u64, alexander_fn: F) -> SuiteReport
where
    F: Fn(&BraidWord) -> Result<LaurentPoly, InvariantError>,
{
    let mut report = SuiteReport {
        name: "symmetry".into(),
        checked: 0,
        failures: vec![],
    };
    for k in random_knots(count, max_crossings, seed) {
        report.checked += 1;
        let word = ttk_braid(&k).expect("small words materialize");
        let fail = |reason: String| Failure {
            params: quad(&k),
            reason,
        };
        match alexander_fn(&word) {
            Err(e) => report.failures.push(fail(e.to_string())),
            Ok(d) if !d.is_palindromic() => report.failures.push(fail(format!("not palindromic: {d}"))),
            Ok(d) => {
                let at_one = d.eval_unit(1);
                if at_one.magnitude() != &1u32.into() {
                    report.failures.push(fail(format!("Δ(1) = {at_one}")));
                }
            }
        }
    }
    report
}

/// Jones polynomials are unchanged by reversing the braid word, and the
/// mirror image substitutes `t ↦ 1/t`.
pub fn jones_suite(count: usize, max_crossings: u128, seed: u64, cap: usize) -> SuiteReport {
    let mut report = SuiteReport {
        name: "jones".into(),
        checked: 0,
        failures: vec![],
    };
    for k in random_knots(count, max_crossings, seed) {
        let word = ttk_braid(&k).expect("small words materialize");
        let fail = |reason: String| Failure {
            params: quad(&k),
            reason,
        };
        let (Ok(Some(v)), Ok(Some(rv)), Ok(Some(mv))) = (
            jones_capped(&word, cap),
            jones_capped(&word.reversed(), cap),
            jones_capped(&word.mirror(), cap),
        ) else {
            continue;
        };
        report.checked += 1;
        if v != rv {
            report
                .failures
                .push(fail(format!("reversal changed Jones: {v} vs {rv}")));
        } else if v.invert_variable() != mv {
            report
                .failures
                .push(fail(format!("mirror is not t -> 1/t: {v} vs {mv}")));
        }
    }
    report
}

/// The suites run by `oracle all`.
pub fn all_suites(seed: u64, jones_cap: usize) -> Vec<SuiteReport> {
    vec![
        torus_suite(8, 3, alexander),
        symmetry_suite(50, 14, seed, alexander),
        jones_suite(20, jones_cap.min(14) as u128, seed, jones_cap),
    ]
}
