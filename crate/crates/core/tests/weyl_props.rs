use proptest::prelude::*;
use singer_core::diffset::{based_class_members, plane_modulus, singer_difference_set, BasedDifferenceSet};
use singer_core::polygon::{quotient_digon, quotient_triangle};
use singer_core::presentation::{cycle_relator, lattice_presentation, telescoped_cycle_relator, Word};
use singer_core::weyl::{
    build_weyl_graph, cycle_basis, edgewise_isomorphic, extract_gluing_matrix, validate_gluing, CoxeterMatrix,
    GluedEdge, GluingMatrix,
};

const NAMES: [&str; 6] = ["s", "t", "u", "v", "w", "x"];

/// A connected graph on `n` vertices: a random spanning tree plus extra edges.
fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..=5).prop_flat_map(|n| {
        let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..4);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut edges: Vec<(usize, usize)> = tree.iter().enumerate().map(|(i, ix)| (ix.index(i + 1), i + 1)).collect();
            for (a, b) in extra {
                if a != b && !edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                    edges.push((a, b));
                }
            }
            (n, edges)
        })
    })
}

fn gluing() -> impl Strategy<Value = GluingMatrix> {
    (graph(), 2u32..=3).prop_flat_map(|((n, edges), q)| {
        let per_edge = proptest::collection::vec((any::<bool>(), any::<bool>(), any::<prop::sample::Index>(), Just(()).prop_perturb(|_, mut rng| rng.random::<u64>())), edges.len());
        (Just(n), Just(edges), Just(q), per_edge)
    })
    .prop_map(|(n, edges, q, choices)| {
        let mut c = CoxeterMatrix::new(NAMES[..n].iter().copied()).unwrap();
        let members: Vec<BasedDifferenceSet> = based_class_members(&singer_difference_set(q).unwrap().into_inner());
        let mut columns = Vec::new();
        for (&(a, b), &(triangle, flip, pick, seed)) in edges.iter().zip(&choices) {
            let m = if triangle { 3 } else { 2 };
            c.add_edge(NAMES[a], NAMES[b], m).unwrap();
            let mut column: Vec<u32> = if m == 2 { (1..=q).collect() } else { members[pick.index(members.len())].nonzero().to_vec() };
            shuffle(&mut column, seed);
            let (from, to) = if flip { (b, a) } else { (a, b) };
            columns.push(GluedEdge { from: NAMES[from].into(), to: NAMES[to].into(), column });
        }
        GluingMatrix { coxeter: c, q, columns }
    })
}

fn shuffle(v: &mut [u32], mut seed: u64) {
    for i in (1..v.len()).rev() {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (seed >> 33) as usize % (i + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_matrices_validate(g in gluing()) {
        prop_assert!(validate_gluing(&g).is_valid(), "{}", validate_gluing(&g));
    }

    #[test]
    fn round_trip_preserves_residues(g in gluing()) {
        let w = build_weyl_graph(&g).unwrap();
        let extracted = extract_gluing_matrix(&w, &w.orientation()).unwrap();
        let rebuilt = build_weyl_graph(&extracted).unwrap();
        prop_assert!(edgewise_isomorphic(&w, &rebuilt).unwrap());
        prop_assert!(edgewise_isomorphic(&rebuilt, &w).unwrap());
    }

    #[test]
    fn residues_transport_to_canonical_polygons(g in gluing()) {
        let w = build_weyl_graph(&g).unwrap();
        for r in &w.residues {
            let omega = r.omega.as_ref().unwrap();
            let target = if r.m == 2 {
                quotient_digon(g.q).unwrap()
            } else {
                quotient_triangle(&BasedDifferenceSet::new(omega, plane_modulus(g.q)).unwrap())
            };
            prop_assert_eq!(r.suites.len(), (g.q as usize).pow(r.m));
            for s in &r.suites {
                prop_assert!(target.is_flower_cycle(&s.map_chambers(|c| omega[c as usize])));
            }
        }
    }

    #[test]
    fn cycle_basis_has_betti_number_size(g in gluing()) {
        let l = &g.coxeter;
        let basis = cycle_basis(l);
        prop_assert_eq!(basis.len(), l.edge_count() + 1 - l.vertices().len());
        for cycle in &basis {
            prop_assert_eq!(cycle.first(), cycle.last());
            prop_assert!(cycle.windows(2).all(|p| l.m(&p[0], &p[1]).is_some_and(|m| m >= 2)));
        }
    }

    #[test]
    fn cycle_relators_telescope_and_reverse_to_inverses(g in gluing()) {
        for cycle in cycle_basis(&g.coxeter) {
            let reversed: Vec<String> = cycle.iter().rev().cloned().collect();
            for n in 1..=g.q {
                prop_assert!(telescoped_cycle_relator(&g, &cycle, n).unwrap().is_empty());
                let forward = cycle_relator(&g, &cycle, n).unwrap();
                let backward = cycle_relator(&g, &reversed, n).unwrap();
                prop_assert_eq!(backward, forward.inverse());
            }
        }
    }

    #[test]
    fn tree_lattices_are_free_products_of_cyclic_groups(g in gluing()) {
        let p = lattice_presentation(&g).unwrap();
        prop_assert_eq!(p.generators().len(), g.coxeter.edge_count());
        let powers = &p.relators()[..g.coxeter.edge_count()];
        for (i, r) in powers.iter().enumerate() {
            let m = g.coxeter.edges().nth(i).unwrap().2;
            let delta = if m == 2 { g.q + 1 } else { plane_modulus(g.q) };
            prop_assert_eq!(r, &Word::new([(i, i64::from(delta))]));
        }
        if cycle_basis(&g.coxeter).is_empty() {
            prop_assert_eq!(p.relators().len(), g.coxeter.edge_count());
        }
    }
}
