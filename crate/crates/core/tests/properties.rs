//! Link-level invariance properties of `F'` under randomly generated braids.

use adolink::qscalar::relative_residual;
use adolink::{
    f_prime, twist_scalar, typical_module, BraidWord, ColoredLink, HighestWeight, RootContext,
    Scalar,
};
use proptest::prelude::*;

const TOL: f64 = 1e-8;

fn weight() -> impl Strategy<Value = HighestWeight> {
    (
        -3i32..3,
        0.05f64..0.95,
        prop_oneof![Just(0.0), -0.4f64..0.4],
    )
        .prop_map(|(k, frac, im)| HighestWeight::new(k as f64 + frac, im))
}

fn signed_word(strands: usize, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    let s = strands as i64;
    prop::collection::vec((1..s, any::<bool>()), 0..=max_len).prop_map(|w| {
        w.into_iter()
            .map(|(i, pos)| if pos { i } else { -i })
            .collect()
    })
}

/// A braid on 2..=3 strands with one color per strand, constant on components.
fn link() -> impl Strategy<Value = ColoredLink> {
    (2usize..=3)
        .prop_flat_map(|k| {
            (
                Just(k),
                signed_word(k, 6),
                prop::collection::vec(weight(), 3),
            )
        })
        .prop_map(|(k, word, palette)| {
            let braid = BraidWord::from_signed(k, &word).unwrap();
            let colors = palette[..braid.closure_components().len()].to_vec();
            ColoredLink::new(braid, colors).unwrap()
        })
}

fn order() -> impl Strategy<Value = RootContext> {
    (2usize..=3).prop_map(|n| RootContext::new(n).unwrap())
}

fn close(a: Scalar, b: Scalar) -> bool {
    relative_residual(a, b, 1e-12) <= TOL
}

fn signed(link: &ColoredLink) -> Vec<i64> {
    link.braid()
        .word()
        .iter()
        .map(|g| g.sign() * g.index as i64)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugation_preserves_value(ctx in order(), l in link(), at in 0usize..8) {
        let at = at.min(l.braid().len());
        let a = f_prime(&ctx, &l).unwrap();
        let b = f_prime(&ctx, &l.rotated(at).unwrap()).unwrap();
        prop_assert!(close(a.value, b.value), "{} vs {}", a.value, b.value);
    }

    #[test]
    fn stabilization_adds_one_kink(ctx in order(), l in link(), positive in any::<bool>()) {
        let k = l.braid().strands();
        let mut word = signed(&l);
        word.push(if positive { k as i64 } else { -(k as i64) });
        let braid = BraidWord::from_signed(k + 1, &word).unwrap();
        let mut colors = l.strand_colors();
        colors.push(colors[k - 1]);
        let stabilized = ColoredLink::from_strand_colors(braid, &colors).unwrap();

        let before = f_prime(&ctx, &l).unwrap();
        let after = f_prime(&ctx, &stabilized).unwrap();
        let theta = twist_scalar(&ctx, &typical_module(&ctx, colors[k - 1]).unwrap()).unwrap();
        let kink = if positive { theta } else { theta.inv() };
        prop_assert!(close(after.value, before.value * kink));
        prop_assert!(close(after.unframed_value, before.unframed_value));
    }

    #[test]
    fn cancelling_pair_is_invisible(ctx in order(), l in link(), at in 0usize..8, i in 1usize..3) {
        let k = l.braid().strands();
        let i = i.min(k - 1) as i64;
        let mut word = signed(&l);
        let at = at.min(word.len());
        word.splice(at..at, [i, -i]);
        // The pair does not move strands, so the strand coloring carries over.
        let padded = ColoredLink::from_strand_colors(
            BraidWord::from_signed(k, &word).unwrap(),
            &l.strand_colors(),
        )
        .unwrap();
        let a = f_prime(&ctx, &l).unwrap();
        let b = f_prime(&ctx, &padded).unwrap();
        prop_assert!(close(a.value, b.value));
    }

    #[test]
    fn braid_relation_is_invisible(ctx in order(), colors in prop::collection::vec(weight(), 3), tail in signed_word(3, 3)) {
        let build = |head: [i64; 3]| {
            let mut word = head.to_vec();
            word.extend(&tail);
            let braid = BraidWord::from_signed(3, &word).unwrap();
            let n = braid.closure_components().len();
            ColoredLink::new(braid, colors[..n].to_vec()).unwrap()
        };
        let a = build([1, 2, 1]);
        let b = build([2, 1, 2]);
        prop_assert_eq!(a.components(), b.components());
        let fa = f_prime(&ctx, &a).unwrap();
        let fb = f_prime(&ctx, &b).unwrap();
        prop_assert!(close(fa.value, fb.value), "{} vs {}", fa.value, fb.value);
    }

    #[test]
    fn cuts_agree(ctx in order(), l in link()) {
        let r = f_prime(&ctx, &l).unwrap();
        prop_assert!(r.max_disagreement <= r.tolerance);
        prop_assert_eq!(r.per_cut.len(), l.braid().strands());
    }
}
