
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twlab_core::graph::{treewidth_exact, Graph};
use twlab_core::po::{Constraint, Domain, Objective, POInstance, Polynomial, Variable};
use twlab_core::polytope::*;
use twlab_core::rational::{int, Rational};

mod common;
use common::*;

// ---- hull and slack --------------------------------------------------------

#[test]
fn hull_matches_oracle_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checked = 0;
    while checked < 60 {
        let dim = rng.gen_range(2..=4);
        let s = random_binary_set(&mut rng, dim, 0.5);
        if s.len() < 2 || affine_rank(s.points()) != dim {
            continue;
        }
        let h = convex_hull_facets(&s, 8).unwrap();
        assert!(h.equations.is_empty());
        assert_eq!(facet_vectors(&h), facet_oracle(&s), "{:?}", s.points());
        checked += 1;
    }
}

#[test]
fn flat_sets_have_consistent_hulls() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..60 {
        let size = rng.gen_range(2..=5);
        let s = random_binary_set(&mut rng, size, 0.2);
        let h = convex_hull_facets(&s, 8).unwrap();
        assert_eq!(h.dim, affine_rank(s.points()));
        assert_eq!(h.equations.len(), s.dim() - h.dim);
        for p in s.points() {
            assert!(h.contains(p));
        }
        // each facet is tight on at least dim points spanning a ridge
        for f in &h.facets {
            let tight: Vec<Vec<i64>> = s.points().iter().filter(|p| f.slack(p).is_zero()).cloned().collect();
            assert!(!tight.is_empty() && affine_rank(&tight) + 1 == h.dim, "{f}");
        }
    }
}

#[test]
fn stab_p3_has_five_facets() {
    let h = convex_hull_facets(&stab_vertices(&Graph::path(3), 20).unwrap(), 8).unwrap();
    assert_eq!(h.facets.len(), 5);
    let s = stab_vertices(&Graph::path(3), 20).unwrap();
    assert_eq!(facet_vectors(&h), facet_oracle(&s));
}

#[test]
fn slack_matrices_of_small_polytopes() {
    let seg = PointSet::new(1, vec![vec![0], vec![1]]).unwrap();
    let h = convex_hull_facets(&seg, 8).unwrap();
    let m = slack_matrix(&h, &seg).unwrap();
    let rows: Vec<Vec<Rational>> = m.entries.iter().map(|r| r.0.clone()).collect();
    assert!(rows == vec![vec![int(0), int(1)], vec![int(1), int(0)]] || rows == vec![vec![int(1), int(0)], vec![int(0), int(1)]]);

    let tri = PointSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let m = slack_matrix(&convex_hull_facets(&tri, 8).unwrap(), &tri).unwrap();
    assert_eq!((m.n_rows(), m.n_cols()), (3, 3));
    for i in 0..3 {
        assert_eq!((0..3).filter(|&j| m.get(i, j).is_zero()).count(), 2);
    }

    let sq = PointSet::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
    let m = slack_matrix(&convex_hull_facets(&sq, 8).unwrap(), &sq).unwrap();
    assert_eq!((m.n_rows(), m.n_cols()), (4, 4));
    assert!(m.support().iter().all(|r| r.iter().filter(|&&b| !b).count() == 2));

    let outside = PointSet::new(2, vec![vec![1, 1]]).unwrap();
    assert!(slack_matrix(&convex_hull_facets(&tri, 8).unwrap(), &outside).is_err());
    assert!(slack_matrix(&convex_hull_facets(&tri, 8).unwrap(), &seg).is_err());
}

#[test]
fn rectangle_cover_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..150 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows: Vec<Vec<Rational>> =
            (0..r).map(|_| (0..c).map(|_| int(rng.gen_range(0..3))).collect()).collect();
        let m = SlackMatrix::from_rows(rows).unwrap();
        let lb = rectangle_cover_lb(&m, 64).unwrap();
        assert_eq!(lb, cover_oracle(&m.support()));
        assert!(lb <= nn_rank_ub(&m));
    }
}

#[test]
fn slack_invariants_on_random_polytopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut checked = 0;
    while checked < 40 {
        let size = rng.gen_range(2..=3);
        let s = random_binary_set(&mut rng, size, 0.6);
        let h = convex_hull_facets(&s, 8).unwrap();
        if h.dim == 0 {
            continue;
        }
        let m = slack_matrix(&h, &s).unwrap();
        for (i, f) in h.facets.iter().enumerate() {
            for (j, p) in s.points().iter().enumerate() {
                assert!(!m.get(i, j).is_negative());
                assert_eq!(m.get(i, j).is_zero(), f.slack(p).is_zero());
            }
        }
        if m.support_size() <= 16 && m.n_rows() <= 4 && m.n_cols() <= 4 {
            assert_eq!(rectangle_cover_lb(&m, 64).unwrap(), cover_oracle(&m.support()));
        }
        let r = xc_bracket(&s, 8, 64, None).unwrap();
        assert!(r.bracket.lower <= r.bracket.upper);
        checked += 1;
    }
}

#[test]
fn brackets_of_the_small_cases() {
    let seg = PointSet::new(1, vec![vec![0], vec![1]]).unwrap();
    let tri = PointSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let sq = cartesian_product(&seg, &seg);
    let tt = cartesian_product(&tri, &tri);
    for (s, want) in [(&seg, 2), (&tri, 3), (&sq, 4), (&tt, 6)] {
        let r = xc_bracket(s, 8, 64, None).unwrap();
        assert_eq!((r.bracket.lower, r.bracket.upper), (want, want), "{:?}", s.points());
    }
    let m = xc_bracket(&tt, 8, 64, None).unwrap().slack;
    assert_eq!(rectangle_cover_lb(&m, 64).unwrap(), 3 + 3);
    assert!(xc_bracket(&tt, 8, 64, Some(5)).is_err());
}

// ---- composition ---------------------------------------------------------

#[test]
fn stab_of_graph_plus_is_plus_of_stab() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..50 {
        let size = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, size, 0.4);
        let gp = graph_plus(&g, &fresh_label(&g)).unwrap();
        let lhs = stab_vertices(&gp, 20).unwrap();
        let rhs = plus_operator(&stab_vertices(&g, 20).unwrap()).unwrap();
        assert!(lhs.same_set(&rhs));
    }
}

fn random_formulation(rng: &mut impl Rng, n: usize) -> POInstance {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let vars = names.iter().map(|v| Variable { name: v.clone(), domain: Domain::Binary }).collect();
    let cons = (0..rng.gen_range(0..4))
        .map(|_| {
            let a = &names[rng.gen_range(0..n)];
            let b = &names[rng.gen_range(0..n)];
            let prod = &Polynomial::var(a) * &Polynomial::var(b);
            let lin = &Polynomial::var(a) - &Polynomial::var(b);
            let p = &(&prod.scale(&int(rng.gen_range(-2..3))) + &lin.scale(&int(rng.gen_range(-1..2))))
                + &Polynomial::constant(int(rng.gen_range(-1..2)));
            if rng.gen_bool(0.8) {
                Constraint::ge0(p)
            } else {
                Constraint::eq0(p)
            }
        })
        .collect();
    POInstance::new(vars, cons, Objective::none()).unwrap()
}

#[test]
fn formulation_of_plus_matches_plus_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..50 {
        let size = rng.gen_range(1..=5);
        let f = random_formulation(&mut rng, size);
        let fp = formulation_of_plus(&f).unwrap();
        let s = feasible_points(&f, 1 << 12).unwrap();
        let sp = feasible_points(&fp, 1 << 12).unwrap();
        if s.is_empty() {
            let mut apex = vec![0; f.n() + 1];
            apex[f.n()] = 1;
            assert_eq!(sp.points(), &[apex]);
        } else {
            assert!(sp.same_set(&plus_operator(&s).unwrap()));
        }
        let g = canonical(&f).unwrap().intersection_graph();
        let want = graph_plus(&g, &coord_name(f.n())).unwrap();
        assert!(fp.intersection_graph().same_labeled(&want));
    }
}

#[test]
fn product_formulation_keeps_treewidth_and_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let g = random_graph(&mut rng, n, 0.6);
        let f = stab_formulation(&g);
        let k = rng.gen_range(1..=3);
        let fk = product_formulation(&f, k).unwrap();
        let w = treewidth_exact(&f.intersection_graph(), 16).unwrap().width;
        assert_eq!(treewidth_exact(&fk.intersection_graph(), 16).unwrap().width, w);
        let s = feasible_points(&f, 1 << 16).unwrap();
        let mut prod = s.clone();
        for _ in 1..k {
            prod = cartesian_product(&prod, &s);
        }
        assert!(feasible_points(&fk, 1 << 16).unwrap().same_set(&prod));
    }
    let f = stab_formulation(&Graph::path(3));
    assert_eq!(product_formulation(&f, 1).unwrap(), canonical(&f).unwrap());
    assert!(product_formulation(&f, 0).is_err());
}

#[test]
fn hard_family_for_the_listed_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for (n, omega) in [(10, 2), (13, 3), (9, 1)] {
        let seed = random_binary_set(&mut rng, omega, 0.7);
        let h = build_hard_family(&seed, n, omega).unwrap();
        let k = (n - 1) / (omega + 1);
        assert_eq!(h.k, k);
        assert_eq!(h.ambient_dim, k * (omega + 1) + 1);
        assert_eq!(h.points.dim(), h.ambient_dim);
        assert_eq!(h.points.len(), (seed.len() + 1).pow(k as u32) + 1);
        assert_eq!(h.pyramid.apex, h.points.len() - 1);
        let w = treewidth_exact(&h.instance().intersection_graph(), 16).unwrap().width;
        assert!(w <= omega + 1);
        assert!(is_decomposable(&h.points).is_none());
    }
}

// ---- certificates --------------------------------------------------------

fn binary_set_strategy(max_dim: usize) -> impl Strategy<Value = PointSet> {
    (1..=max_dim).prop_flat_map(|dim| {
        prop::collection::btree_set(prop::collection::vec(0i64..2, dim), 1..=(1usize << dim).min(12))
            .prop_map(move |pts| PointSet::new(dim, pts.into_iter().collect()).unwrap())
    })
}

fn unimodular(rng: &mut impl Rng, n: usize) -> AffineMap {
    let mut a = AffineMap::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let f = rng.gen_range(-2..=2);
            for c in 0..n {
                a.matrix[i][c] += f * a.matrix[j][c];
            }
        } else if rng.gen_bool(0.5) {
            a.matrix[i].iter_mut().for_each(|x| *x = -*x);
        }
    }
    a.shift = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plus_is_always_a_pyramid(s in binary_set_strategy(6)) {
        let p = plus_operator(&s).unwrap();
        prop_assert_eq!(p.len(), s.len() + 1);
        prop_assert!(pyramid_with_apex(&p, s.len()).is_some());
        prop_assert!(is_pyramid(&p).is_some());
    }

    #[test]
    fn high_dimensional_pyramids_do_not_split(s in binary_set_strategy(5)) {
        let p = plus_operator(&s).unwrap();
        let h = convex_hull_facets(&p, 8).unwrap();
        if h.dim >= 3 {
            prop_assert!(is_decomposable(&p).is_none());
        }
    }

    #[test]
    fn products_split(a in binary_set_strategy(3), b in binary_set_strategy(3)) {
        let prod = cartesian_product(&a, &b);
        let da = convex_hull_facets(&a, 8).unwrap().dim;
        let db = convex_hull_facets(&b, 8).unwrap().dim;
        if da >= 1 && db >= 1 {
            let c = is_decomposable(&prod).unwrap();
            prop_assert_eq!(c.dims.0 + c.dims.1, da + db);
            prop_assert!(cartesian_product(&c.factors.0, &c.factors.1).len() == prod.len());
        }
    }

    #[test]
    fn reencoding_keeps_pyramid_status(s in binary_set_strategy(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = unimodular(&mut rng, s.dim());
        let t = affine_reencode(&s, &a).unwrap();
        prop_assert_eq!(is_pyramid(&s).is_some(), is_pyramid(&t).is_some());
    }
}

#[test]
fn gnp_frequencies_stay_below_the_bound() {
    let row = gnp_experiment(20, 0.5, 8, 300, 11).unwrap();
    assert!(row.within_bound(), "{row:?}");
    assert_eq!(row, gnp_experiment(20, 0.5, 8, 300, 11).unwrap());
    assert!(gnp_experiment(10, 0.5, 3, 0, 1).is_err());
}
