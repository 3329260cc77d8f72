use std::collections::BTreeSet;

use ecrank_core::perm::enumerate::transitive_with_transposition;
use ecrank_core::perm::{fixed_space_dimension, PermGroup, Permutation};
use proptest::prelude::*;

/// Closure by breadth-first multiplication, on raw image vectors.
fn closure(gens: &[Vec<usize>], n: usize) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::from([(0..n).collect::<Vec<_>>()]);
    let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<usize> = (0..n).map(|i| g[p[i]]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_and_orbits_match_closure(a in perm_strategy(6), b in perm_strategy(6)) {
        let g = PermGroup::new(6, vec![
            Permutation::from_images(a.clone()).unwrap(),
            Permutation::from_images(b.clone()).unwrap(),
        ]).unwrap();
        let all = closure(&[a, b], 6);
        prop_assert_eq!(g.order().unwrap(), all.len());
        let orbit0: BTreeSet<usize> = all.iter().map(|p| p[0]).collect();
        prop_assert_eq!(g.is_transitive(), orbit0.len() == 6);
    }

    #[test]
    fn inverse_and_cycle_count(a in perm_strategy(9)) {
        let p = Permutation::from_images(a).unwrap();
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.cycle_type().iter().sum::<usize>(), 9);
        prop_assert_eq!(p.is_even(), (9 - p.num_cycles()) % 2 == 0);
        prop_assert!(p.pow(p.order() as i64).is_identity());
    }
}

// S_2; S_3; D_4 and S_4; only S_5 among the transitive groups of degree 5.
#[test]
fn transitive_groups_with_a_transposition() {
    for (n, orders) in [(2, vec![2]), (3, vec![6]), (4, vec![8, 24]), (5, vec![120])] {
        let groups = transitive_with_transposition(n).unwrap();
        let mut got: Vec<usize> = groups.iter().map(|g| g.order().unwrap()).collect();
        got.sort();
        assert_eq!(got, orders, "n = {n}");
        for g in &groups {
            assert!(g.is_transitive());
            assert!(!g.transpositions().unwrap().is_empty());
            assert_eq!(fixed_space_dimension(g).unwrap(), 1);
        }
    }
}
