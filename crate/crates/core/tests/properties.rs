use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttk_core::braid::{ttk_braid, BraidWord, TtkParams};
use ttk_core::certificate::validate_certificate;
use ttk_core::families::{
    b1_lower, berge_pair, catching_chi, certify_gaps, min_n, twist, FamilyError, TwistPair, DEFAULT_SEARCH_BOUND,
};
use ttk_core::invariants::{alexander, jones_capped};
use ttk_core::spectrum::{arc_bound, spectrum_report, stabilization_chain};

/// Random words on 2..=5 strands whose closure is a knot.
fn random_knot_words(count: usize, max_len: usize, seed: u64) -> Vec<BraidWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let strands = rng.gen_range(2..=5usize);
        let len = rng.gen_range(1..=max_len);
        let letters = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let w = BraidWord::new(strands, letters).unwrap();
        if w.component_count() == 1 {
            out.push(w);
        }
    }
    out
}

#[test]
fn alexander_survives_markov_stabilization() {
    for w in random_knot_words(20, 12, 1) {
        let s = w.stabilized();
        assert_eq!(s.strands(), w.strands() + 1);
        assert_eq!(alexander(&w).unwrap(), alexander(&s).unwrap(), "{w}");
    }
}

#[test]
fn jones_survives_reversal_and_stabilization() {
    for w in random_knot_words(20, 10, 2) {
        let v = jones_capped(&w, 22).unwrap().unwrap();
        assert_eq!(jones_capped(&w.reversed(), 22).unwrap().unwrap(), v, "{w}");
        assert_eq!(jones_capped(&w.stabilized(), 22).unwrap().unwrap(), v, "{w}");
    }
}

#[test]
fn invariants_survive_conjugation() {
    for w in random_knot_words(15, 10, 3) {
        let mut letters = w.letters().to_vec();
        letters.rotate_left(1);
        let c = BraidWord::new(w.strands(), letters).unwrap();
        assert_eq!(alexander(&w).unwrap(), alexander(&c).unwrap());
        assert_eq!(jones_capped(&w, 22).unwrap(), jones_capped(&c, 22).unwrap());
    }
}

#[test]
fn certificates_are_consistent_across_a_sweep() {
    for m in 2..=6 {
        for sign in [1, -1] {
            let pair = berge_pair(m, sign).unwrap();
            for c in 1..=12 {
                let cert = certify_gaps(c, &pair, DEFAULT_SEARCH_BOUND).unwrap();
                assert!(cert.bounds.b1[0] <= cert.bounds.b1[1], "m={m} C={c}");
                assert!(cert.gaps[0] >= c as i64 && cert.gaps[1] >= c as i64);
                assert!(cert.s.abs() > 18 * cert.params[0]);
                assert_eq!(cert.s.signum(), sign);
                validate_certificate(&cert).unwrap();
            }
        }
    }
}

fn arb_pair() -> impl Strategy<Value = TwistPair> {
    (-6i64..7, -6i64..7, 2i64..9, 3i64..12, 1i64..8, -4i64..5).prop_filter_map("valid pair", |(a, b, c, d, e, f)| {
        TwistPair::new([a, b], [c, d, e, f]).ok()
    })
}

proptest! {
    #[test]
    fn chi_identity(pair in arb_pair()) {
        let [a, b] = pair.alpha();
        let [c, d, _, _] = pair.beta();
        let chi = catching_chi(&pair).unwrap();
        prop_assert_eq!(-36 * chi, 36 * ((a * d).abs() + (b * c).abs() + (a.abs() - 1) * (b.abs() - 1) - 1));
        prop_assert!(b1_lower(&pair, 5000).is_ok());
    }

    #[test]
    fn twisting_stays_ordered_past_min_n(pair in arb_pair()) {
        let n0 = min_n(&pair, 10_000).unwrap();
        for n in n0..=10 * n0 {
            match twist(&pair, n) {
                Ok(k) => prop_assert!(1 < k.r() && k.r() < k.p() && k.p() < k.q()),
                Err(FamilyError::NotAKnot { .. }) => {}
                Err(e) => prop_assert!(false, "n = {}: {}", n, e),
            }
        }
    }

    #[test]
    fn stabilization_chain_is_idempotent(p in 2i64..30, q in 2i64..30, r in 0i64..30, s in -50i64..50) {
        let Ok(k) = TtkParams::new(p, q, r.min(p), s) else { return Ok(()) };
        let once = spectrum_report(&k);
        prop_assert_eq!(stabilization_chain(&once), once.clone());
        for b in &once {
            prop_assert!(b.is_consistent());
        }
    }

    #[test]
    fn arc_bound_is_symmetric(a in -50i64..0, b in -50i64..0) {
        prop_assert_eq!(arc_bound(a, b), arc_bound(b, a));
    }

    #[test]
    fn twist_free_words_coincide(p in 2i64..9, q in 2i64..9, s in -5i64..6) {
        let (Ok(k1), Ok(k0)) = (TtkParams::new(p, q, 1, s), TtkParams::new(p, q, 0, 0)) else { return Ok(()) };
        prop_assert_eq!(ttk_braid(&k1).unwrap(), ttk_braid(&k0).unwrap());
    }
}
