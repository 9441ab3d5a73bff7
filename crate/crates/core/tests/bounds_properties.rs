use proptest::prelude::*;
use symlen_core::bounds::{bound, rule_value, Hypothesis, Params, Rule};

fn value(rule: Rule, p: u32, n: u32, lambda: u32, m: u32) -> u128 {
    rule_value(
        rule,
        Params {
            p,
            n,
            e: 1,
            m,
            lambda,
        },
    )
    .unwrap()
}

#[test]
fn p_extension_bound_is_monotone() {
    for p in [2, 3, 5, 7] {
        let mut prev = 0;
        for n in 1..=20 {
            let b = bound(p, &Hypothesis::SplitByPExtension { n }, false)
                .unwrap()
                .bound;
            assert!(b >= prev, "p={p} n={n}: {b} < {prev}");
            prev = b;
        }
    }
}

#[test]
fn two_extension_rule_beats_general_rule() {
    for n in 3..=20 {
        let special = value(Rule::TwoExtensionSplit, 2, n, 0, 0);
        let general = value(Rule::PExtensionSplit, 2, n, 0, 0);
        assert!(special < general, "n={n}");
        assert_eq!(
            bound(2, &Hypothesis::SplitByPExtension { n }, false)
                .unwrap()
                .bound,
            special
        );
    }
}

#[test]
fn chain_identity() {
    // one cyclic-extension step per layer from a length-one decomposition
    for p in [2, 3, 5, 7] {
        for n in 1..=10 {
            let mut lambda = 1;
            for _ in 1..n {
                lambda = value(Rule::CyclicExtension, p, 0, lambda as u32, 0);
            }
            assert_eq!(
                lambda,
                value(Rule::PExtensionSplit, p, n, 0, 0),
                "p={p} n={n}"
            );
            assert_eq!(
                lambda,
                value(Rule::PExtensionChain, p, 0, 1, n - 1),
                "p={p} n={n}"
            );
        }
    }
}

proptest! {
    #[test]
    fn chain_rule_composes(pi in 0usize..4, lambda in 0u32..50, m1 in 0u32..5, m2 in 0u32..5) {
        // (λ+1)p^a - 1 then (μ+1)p^b - 1 equals (λ+1)p^(a+b) - 1
        let p = [2, 3, 5, 7][pi];
        let mid = value(Rule::PExtensionChain, p, 0, lambda, m1);
        let two_steps = value(Rule::PExtensionChain, p, 0, mid as u32, m2);
        prop_assert_eq!(two_steps, value(Rule::PExtensionChain, p, 0, lambda, m1 + m2));
    }

    #[test]
    fn closed_forms(pi in 0usize..6, n in 1u32..=20, lambda in 0u32..20) {
        let p = [2u32, 3, 5, 7, 11, 13][pi];
        let (pp, nn, l) = (p as u128, n as u128, lambda as u128);
        prop_assert_eq!(value(Rule::CyclicExponentP, p, n, 0, 0), pp.pow(n - 1));
        prop_assert_eq!(value(Rule::InsepCyclicReduction, p, n, 0, 0), nn + pp - 1);
        prop_assert_eq!(value(Rule::InsepTower, p, n, lambda, 0), pp.pow(n) * l);
        prop_assert_eq!(value(Rule::InsepDegreeP, p, 0, lambda, 0), l * pp);
        prop_assert_eq!(value(Rule::CyclicExtension, p, 0, lambda, 0), (l + 1) * pp - 1);
        prop_assert_eq!(value(Rule::PExtensionSplit, p, n, 0, 0), 2 * pp.pow(n - 1) - 1);
        prop_assert_eq!(value(Rule::IndexCharTwo, 2, n, 0, 0), (1u128 << n) - 1);
    }
}

#[test]
fn pinned_reports() {
    let s = |p, h| bound(p, &h, false).unwrap().summary();
    assert_eq!(
        s(2, Hypothesis::SplitByPExtension { n: 3 }),
        "4 via two-extension-split"
    );
    assert_eq!(
        s(3, Hypothesis::CyclicDeg { n: 2, e: 1 }),
        "3 via cyclic-degree-square"
    );
    assert_eq!(
        s(2, Hypothesis::SplitByCyclicP { m: 1, lambda: 1 }),
        "3 via cyclic-extension"
    );
    assert_eq!(
        s(2, Hypothesis::Index { n: 3, e: 1 }),
        "4 via index-eight-reference"
    );
    // n+p-1 and λp tie at 5; the earlier rule wins
    assert_eq!(
        s(5, Hypothesis::SplitByInsep { n: 1, lambda: 1 }),
        "5 via insep-cyclic-reduction"
    );
    assert_eq!(
        s(5, Hypothesis::SplitByInsep { n: 1, lambda: 2 }),
        "10 via insep-degree-p"
    );
    assert_eq!(
        s(5, Hypothesis::SplitByInsep { n: 3, lambda: 1 }),
        "7 via insep-cyclic-reduction"
    );
    // the reducible-index rule needs the flag for odd p
    let gated = bound(3, &Hypothesis::Index { n: 2, e: 1 }, true).unwrap();
    assert!(gated.conditional || gated.rule != Rule::CyclicReducibleIndex);
    assert!(bound(4, &Hypothesis::Index { n: 1, e: 1 }, false).is_err());
}
