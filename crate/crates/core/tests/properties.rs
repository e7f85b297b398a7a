mod common;

use anet_core::instructions::in_s;
use anet_core::semigroup::Packing;
use anet_core::{Configuration, CoordSet, Network, Params, UpdateWord};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = Params> {
    prop_oneof![
        Just((1, 5)),
        Just((2, 2)),
        Just((2, 3)),
        Just((3, 2)),
        Just((2, 4)),
        Just((4, 2)),
        Just((3, 3)),
    ]
    .prop_map(|(n, q)| Params::new(n, q).unwrap())
}

fn network() -> impl Strategy<Value = Network> {
    params().prop_flat_map(|p| {
        proptest::collection::vec(0..p.size() as u32, p.size())
            .prop_map(move |t| Network::from_table(p, t).unwrap())
    })
}

fn network_pair() -> impl Strategy<Value = (Network, Network)> {
    params().prop_flat_map(|p| {
        let table = proptest::collection::vec(0..p.size() as u32, p.size());
        (table.clone(), table).prop_map(move |(a, b)| {
            (Network::from_table(p, a).unwrap(), Network::from_table(p, b).unwrap())
        })
    })
}

fn word(n: usize) -> impl Strategy<Value = UpdateWord> {
    proptest::collection::vec(1u32..1 << n, 0..6)
        .prop_map(|steps| UpdateWord::new(steps.into_iter().map(CoordSet::from_bits).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn orphans_and_rank_partition(f in network()) {
        prop_assert!(common::orphan_count(&f));
    }

    #[test]
    fn bijections_are_balanced(f in network()) {
        prop_assert!(common::bijective_balanced(&f));
    }

    #[test]
    fn rank_drop_fibers(f in network()) {
        prop_assert!(common::preimage_count(&f));
    }

    #[test]
    fn fiber_sizes_follow_in_degree(f in network()) {
        prop_assert!(common::column_sums(&f));
    }

    #[test]
    fn composition_cannot_raise_rank((f, g) in network_pair()) {
        let h = g.compose(&f).unwrap();
        prop_assert!(h.rank() <= f.rank().min(g.rank()));
    }

    #[test]
    fn masked_updates_touch_only_the_mask(f in network(), bits in 0u32..16) {
        let p = f.params();
        let s = CoordSet::from_bits(bits & ((1 << p.n()) - 1));
        let g = f.masked_update(s).unwrap();
        if s.is_empty() {
            prop_assert!(g.is_identity());
        }
        if s == CoordSet::full(p.n()) {
            prop_assert_eq!(&g, &f);
        }
        for x in 0..p.size() {
            for i in 0..p.n() {
                let expect = if s.contains(i) { p.digit(f.apply(x), i) } else { p.digit(x, i) };
                prop_assert_eq!(p.digit(g.apply(x), i), expect);
            }
        }
    }

    #[test]
    fn words_compose_in_order(
        (f, w1, w2) in network().prop_flat_map(|f| {
            let n = f.params().n();
            (Just(f), word(n), word(n))
        })
    ) {
        let both = f.word_apply(&w1.concat(&w2)).unwrap();
        let split = f.word_apply(&w2).unwrap().compose(&f.word_apply(&w1).unwrap()).unwrap();
        prop_assert_eq!(both, split);
    }

    #[test]
    fn unique_orphans_move_along_the_updated_coordinate(
        (f, w) in (any::<u64>(), word(2)).prop_map(|(seed, w)| {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (common::near_bijective_network(Params::new(2, 3).unwrap(), &mut rng), w)
        })
    ) {
        let seq = UpdateWord::sequential(w.steps().iter().flat_map(|s| s.iter()));
        let phi = f.word_apply(&seq).unwrap();
        prop_assert!(common::orphan_propagation(&f, &phi));
    }

    #[test]
    fn closure_witnesses_replay(f in network().prop_filter("packable", |f| f.params().size() <= 9)) {
        prop_assert_ne!(common::closure_properties(&f, 1 << 16), Some(false));
    }
}

#[test]
fn closures_exhaustive_on_four_points() {
    for (n, q) in [(1, 2), (1, 3), (1, 4), (2, 2)] {
        let t = common::exhaustive_closures(Params::new(n, q).unwrap(), 1 << 16);
        assert_eq!((t.failures, t.skipped), (0, 0), "{n} {q}");
    }
}

#[test]
fn orphan_propagation_exhaustive_on_binary_pairs() {
    // Every f in F(2,2) and every phi in its sequential closure.
    let p = Params::new(2, 2).unwrap();
    let t = common::exhaustive_closures(p, 1 << 16);
    assert_eq!(t.cases, 256);
    assert_eq!(t.failures, 0);
}

/// Rank `q^n - 1` idempotents are the collapses `(y -> t)`; those with a
/// distance-1 collision are exactly the assignment instructions.
#[test]
fn rank_drop_idempotents_in_s_are_assignments() {
    for (n, q) in [(2, 2), (2, 3)] {
        let p = Params::new(n, q).unwrap();
        for y in 0..p.size() {
            for t in (0..p.size()).filter(|&t| t != y) {
                let f = Network::assignment(p, Configuration(y as u32), Configuration(t as u32));
                assert_eq!(f.compose(&f).unwrap(), f);
                assert_eq!(in_s(&f).is_some(), p.hamming(y, t) == 1, "{y} -> {t}");
            }
        }
    }
    // At (2,2) the collapses are all of them.
    let p = Params::new(2, 2).unwrap();
    let pk = Packing::for_params(p).unwrap();
    let idempotents = pk
        .all_codes()
        .map(|c| pk.network(p, c))
        .filter(|f| f.rank() == 3 && f.compose(f).unwrap() == *f)
        .count();
    assert_eq!(idempotents, 4 * 3);
}
