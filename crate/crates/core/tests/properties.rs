use std::sync::Arc;

use proptest::prelude::*;

use netcay::cayley::{graph_isomorphic, SimpleGraph};
use netcay::dihedral::{self, DihedralAut};
use netcay::frattini;
use netcay::group::{frattini_subgroup, FiniteGroup};
use netcay::numtheory::gcd;
use netcay::Limits;

fn unit(n: usize, seed: usize) -> usize {
    (1..n).cycle().skip(seed % n).find(|&k| gcd(k as u64, n as u64) == 1).unwrap()
}

fn graph_strategy() -> impl Strategy<Value = SimpleGraph> {
    (1usize..24).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..60).prop_map(move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            SimpleGraph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trips(g in graph_strategy()) {
        let text = g.to_graph6();
        prop_assert_eq!(SimpleGraph::from_graph6(&text).unwrap(), g);
    }

    #[test]
    fn relabelled_graphs_are_isomorphic(g in graph_strategy(), shift in 0usize..24) {
        let n = g.vertex_count();
        let p = |v: usize| (v * 5 + shift) % n;
        let perm_ok = gcd(5, n as u64) == 1;
        prop_assume!(perm_ok);
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (p(u), p(v))).collect();
        let h = SimpleGraph::from_edges(n, &edges).unwrap();
        let witness = graph_isomorphic(&g, &h, &Limits::default()).unwrap().expect("isomorphic");
        for (u, v) in g.edges() {
            prop_assert!(h.has_edge(witness[u], witness[v]));
        }
    }

    #[test]
    fn dihedral_automorphisms_compose_as_maps(n in 3usize..30, a in 0usize..100, b in 0usize..100, j1 in 0usize..30, j2 in 0usize..30) {
        let x = DihedralAut::new(n, unit(n, a), j1 % n).unwrap();
        let y = DihedralAut::new(n, unit(n, b), j2 % n).unwrap();
        let xy = x.compose(&y);
        for e in 0..2 * n {
            prop_assert_eq!(xy.apply(e), y.apply(x.apply(e)));
        }
        prop_assert_eq!(x.compose(&x.inverse()), DihedralAut::identity(n));
    }

    #[test]
    fn frattini_of_group_lies_in_relative_frattini(n in 3usize..13, mask in 1u32..4096) {
        let g = Arc::new(FiniteGroup::dihedral(n));
        let units = frattini::inverse_pairs(&g);
        let set: Vec<usize> = units
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 12) & 1 == 1)
            .flat_map(|(_, u)| u.iter().copied())
            .collect();
        prop_assume!(!set.is_empty() && g.generates(&set));
        let limits = Limits::default();
        let c = frattini::make_connection_set(&g, &set, &limits).unwrap();
        let phi = frattini::invariant_normal_lattice(&c, &limits).unwrap().phi;
        prop_assert!(frattini_subgroup(&g, &limits).unwrap().is_subgroup_of(&phi));
    }

    #[test]
    fn classification_is_invariant_under_automorphisms(n in 5usize..25, a in 0usize..100, j in 0usize..25) {
        let Ok(classes) = dihedral::enumerate_4valent(n, &Limits::default()) else { unreachable!() };
        let sigma = DihedralAut::new(n, unit(n, a), j % n).unwrap();
        for class in classes {
            let image = sigma.apply_set(&class.canonical);
            let moved = dihedral::classify_4valent(n, &image).unwrap();
            prop_assert_eq!(moved.family, class.class.family);
        }
    }
}
