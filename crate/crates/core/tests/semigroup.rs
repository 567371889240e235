use numsemi::{
    apery_set, frobenius, genus, invariants, membership, minimal_generators, normalize_generators,
    semigroup_prefix, Error, GeneratorSet,
};
use proptest::prelude::*;

fn cofinite() -> impl Strategy<Value = GeneratorSet> {
    prop::collection::vec(2i64..150, 2..7)
        .prop_map(|v| normalize_generators(&v).unwrap())
        .prop_filter("gcd 1", |g| g.gcd() == 1)
}

proptest! {
    #[test]
    fn apery_membership_matches_prefix_table(gens in cofinite()) {
        let ap = apery_set(&gens).unwrap();
        let bound = (frobenius(&ap) + 3 * ap.multiplicity() as i64) as u64;
        let table = semigroup_prefix(&gens, bound);
        for n in 0..=bound {
            prop_assert_eq!(membership(&ap, n as i64), table.member(n), "n = {}", n);
        }
        prop_assert_eq!(table.gap_count(), genus(&ap));
    }

    #[test]
    fn minimal_generators_regenerate_the_semigroup(gens in cofinite()) {
        let ap = apery_set(&gens).unwrap();
        let minimal = minimal_generators(&ap);
        let reduced = normalize_generators(&minimal.iter().map(|&a| a as i64).collect::<Vec<_>>()).unwrap();
        let bound = (frobenius(&ap) + 2 * ap.multiplicity() as i64).max(1) as u64;
        let a = semigroup_prefix(&gens, bound);
        let b = semigroup_prefix(&reduced, bound);
        prop_assert!(a.members().eq(b.members()));
        prop_assert!(minimal.iter().all(|m| gens.elements().contains(m)));
        prop_assert_eq!(minimal.len() as u64, invariants(&gens).unwrap().embedding_dim);
    }

    #[test]
    fn adding_a_member_changes_nothing(gens in cofinite(), k in 1u64..5) {
        let before = invariants(&gens).unwrap();
        let mut raw: Vec<i64> = gens.elements().iter().map(|&a| a as i64).collect();
        raw.push((k * gens.elements()[0] + gens.elements()[1]) as i64);
        let after = invariants(&normalize_generators(&raw).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn elementary_inequalities(gens in cofinite()) {
        let r = invariants(&gens).unwrap();
        prop_assert!(r.satisfies_inequalities());
        prop_assert!(r.embedding_dim <= r.multiplicity);
    }
}

#[test]
fn three_generator_examples() {
    let r = invariants(&normalize_generators(&[6, 9, 20]).unwrap()).unwrap();
    assert_eq!(r.to_string(), "F=43 g=22 e=3 q=6");
    let r = invariants(&normalize_generators(&[5, 7, 9]).unwrap()).unwrap();
    assert_eq!((r.frobenius, r.genus, r.embedding_dim), (13, 8, 3));
}

#[test]
fn error_paths() {
    assert!(matches!(normalize_generators(&[4, 6]).map(|g| apery_set(&g)), Ok(Err(Error::NotCofinite { gcd: 2 }))));
    assert!(matches!(normalize_generators(&[]), Err(Error::InvalidGenerators(_))));
    assert!(matches!(normalize_generators(&[0, 3]), Err(Error::InvalidGenerators(_))));
}
