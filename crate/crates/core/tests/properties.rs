use std::sync::Arc;

use autqm::automorphisms::random_composite;
use autqm::graphprod::{gp_invert, gp_multiply, join_decompose, project_kill_h0};
use autqm::norms::{acl_upper, cl_upper, AclSearch};
use autqm::whitehead::{minimize, replay};
use autqm::{AutoWitness, Automorphism, CyclicWord, GPWord, Quasimorphism, VertexGraph, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    let letter = (1..=rank as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
    prop::collection::vec(letter, 0..=max_len).prop_map(move |raw| Word::reduce(raw, rank).unwrap())
}

fn auto(rank: usize, depth: usize) -> impl Strategy<Value = Automorphism> {
    any::<u64>().prop_map(move |s| random_composite(&mut ChaCha8Rng::seed_from_u64(s), rank, depth))
}

fn pattern() -> impl Strategy<Value = Word> {
    word(2, 3).prop_filter("nonempty", |w| !w.is_empty())
}

/// A pentagon joined to a square with finite vertices 2 and 6: three join
/// factors, one of them the pentagon.
fn graph() -> Arc<VertexGraph> {
    let mut edges = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 0),
        (5, 7),
        (5, 8),
        (6, 7),
        (6, 8),
    ];
    for u in 0..5 {
        for v in 5..9 {
            edges.push((u, v));
        }
    }
    Arc::new(VertexGraph::new(vec![0, 0, 2, 0, 0, 0, 3, 0, 0], &edges).unwrap())
}

fn gp_word(syllables: usize) -> impl Strategy<Value = GPWord> {
    any::<u64>()
        .prop_map(move |s| GPWord::random(&graph(), &mut ChaCha8Rng::seed_from_u64(s), syllables))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn automorphisms_are_homomorphisms(phi in auto(3, 4), u in word(3, 12), v in word(3, 12)) {
        prop_assert_eq!(phi.apply(&(&u * &v)).unwrap(), &phi.apply(&u).unwrap() * &phi.apply(&v).unwrap());
        prop_assert_eq!(phi.inverse().apply(&phi.apply(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn compose_acts_inner_first(phi in auto(2, 3), psi in auto(2, 3), u in word(2, 10)) {
        let both = phi.compose(&psi).unwrap();
        prop_assert_eq!(both.apply(&u).unwrap(), phi.apply(&psi.apply(&u).unwrap()).unwrap());
    }

    #[test]
    fn witness_rebuilds_the_tables(phi in auto(3, 5)) {
        let w = phi.witness();
        let parsed = AutoWitness::parse(&w.to_string(), 3).unwrap();
        prop_assert_eq!(&parsed, w);
        let rebuilt = parsed.build(3).unwrap();
        prop_assert_eq!(rebuilt.images(), phi.images());
    }

    #[test]
    fn homogeneous_brooks_is_a_class_function(p in pattern(), g in word(2, 10), h in word(2, 6)) {
        let f = Quasimorphism::brooks_homogeneous(&p).unwrap();
        let fg = f.evaluate(&g).unwrap();
        prop_assert_eq!(f.evaluate(&g.conjugate_by(&h).unwrap()).unwrap(), fg);
        prop_assert_eq!(f.evaluate(&g.invert()).unwrap(), -fg);
        prop_assert_eq!(f.evaluate(&g.power(3)).unwrap(), fg * 3);
    }

    #[test]
    fn defect_within_declared_bound(p in pattern(), homog in any::<bool>(), g in word(2, 10), h in word(2, 10)) {
        let f = if homog {
            Quasimorphism::brooks_homogeneous(&p).unwrap()
        } else {
            Quasimorphism::brooks(&p).unwrap()
        };
        prop_assert!(f.defect_at(&g, &h).unwrap() <= f.defect_bound().unwrap());
    }

    #[test]
    fn whitehead_minimum_is_an_orbit_invariant(w in word(2, 8), phi in auto(2, 3)) {
        let m = minimize(&w);
        prop_assert!(m.min_word.len() <= CyclicWord::of(&w).len());
        prop_assert_eq!(replay(&w, &m.trace).unwrap(), CyclicWord::of(&m.min_word));
        let other = minimize(&phi.apply(&w).unwrap());
        prop_assert_eq!(other.min_word.len(), m.min_word.len());
    }

    #[test]
    fn gp_group_axioms(x in gp_word(8), y in gp_word(8), z in gp_word(8)) {
        let xy_z = gp_multiply(&gp_multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = gp_multiply(&x, &gp_multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(gp_multiply(&x, &gp_invert(&x)).unwrap(), GPWord::identity(&graph()));
    }

    #[test]
    fn gp_normal_form_round_trips(x in gp_word(10)) {
        prop_assert_eq!(GPWord::parse(&graph(), &x.to_string()).unwrap(), x);
    }

    #[test]
    fn projection_is_a_homomorphism(x in gp_word(8), y in gp_word(8)) {
        let d = join_decompose(&graph());
        let px = project_kill_h0(&x, &d).unwrap();
        let py = project_kill_h0(&y, &d).unwrap();
        let pxy = project_kill_h0(&gp_multiply(&x, &y).unwrap(), &d).unwrap();
        for ((a, b), c) in px.iter().zip(&py).zip(&pxy) {
            prop_assert_eq!(&gp_multiply(a, b).unwrap(), c);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_witnesses_replay(g in word(2, 4)) {
        let acl = acl_upper(&g, &AclSearch::default());
        if acl.finite().is_some() {
            prop_assert!(acl.verifies(&g));
        }
        let cl = cl_upper(&g, 2, 2);
        if cl.finite().is_some() {
            prop_assert!(cl.verifies(&g));
        }
    }

    #[test]
    fn commutators_have_cl_at_most_one(u in word(2, 2), v in word(2, 2)) {
        let g = Word::commutator(&u, &v).unwrap();
        let cl = cl_upper(&g, 2, 1);
        let k = cl.finite();
        prop_assert!(matches!(k, Some(0) | Some(1)), "cl({}) = {:?}", g, cl.value);
        prop_assert_eq!(k == Some(0), g.is_empty());
        prop_assert!(cl.verifies(&g));
    }
}
