use opkit_core::properads::*;
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..4, 0..4)
}

#[test]
fn enumerator_matches_oracle_up_to_five() {
    let ps = profiles(5, 5);
    let mut checked = 0;
    for ms in &ps {
        for ns in &ps {
            if ms.iter().sum::<usize>() != ns.iter().sum::<usize>() {
                assert!(connected_perms(ms, ns).is_empty());
                continue;
            }
            assert_eq!(connected_perms(ms, ns), connected_perms_bruteforce(ms, ns), "{ms:?} {ns:?}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn single_blocks_connect_everything() {
    for k in 1..=5 {
        let n = permutations(k).len();
        assert_eq!(count_connected(&[k], &[k]), n);
        assert_eq!(count_connected(&[k], &vec![1; k]), n);
    }
}

proptest! {
    #[test]
    fn inverse_is_a_bijection(ms in profile(), ns in profile()) {
        let there = connected_perms(&ms, &ns);
        let mut back: Vec<_> = there.iter().map(ConnectedPerm::inverse).collect();
        back.sort();
        let mut other = connected_perms(&ns, &ms);
        other.sort();
        prop_assert_eq!(back, other);
    }

    #[test]
    fn every_result_is_a_connected_permutation(ms in profile(), ns in profile()) {
        for s in connected_perms(&ms, &ns) {
            let mut sorted = s.perm.clone();
            sorted.sort();
            prop_assert_eq!(sorted, (0..s.perm.len()).collect::<Vec<_>>());
            prop_assert!(is_connected(&ms, &ns, &s.perm));
        }
    }

    #[test]
    fn unequal_totals_give_nothing(ms in profile(), ns in profile()) {
        prop_assume!(ms.iter().sum::<usize>() != ns.iter().sum::<usize>());
        prop_assert!(connected_perms(&ms, &ns).is_empty());
    }

    #[test]
    fn units_on_trivial_collections(a in 0usize..3, m in 0usize..3, count in 1usize..3) {
        let labels: Vec<String> = (0..count).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let x = Collection::new().with_trivial(a, m, &refs).with_trivial(1, 1, &["u"]);
        let r = unit_laws_check(&x).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }
}

#[test]
fn units_with_regular_actions() {
    // S_2 acting on itself from the input side, trivially on outputs.
    let x = Collection::new()
        .with_actions(2, 1, vec!["e".into(), "t".into()], vec![vec![1, 0]], vec![])
        .unwrap()
        .with_actions(1, 2, vec!["e".into(), "t".into()], vec![], vec![vec![1, 0]])
        .unwrap();
    let r = unit_laws_check(&x).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn identity_composes_to_itself() {
    let id = identity_bioperation();
    let c = properad_vcompose(&id, &id, &[1], &[1]).unwrap();
    assert_eq!(c.classes.len(), 1);
    assert_eq!(c.classes.representative(0).arity(), (1, 1));
}
