use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use adebrane::commuting::{random_commuting_pair, random_cyclic_triple, random_invertible, MonomialIdeal, PairKind};
use adebrane::equivariant::orbit_to_triple;
use adebrane::group::{AdeLabel, FiniteSubgroup, Representation};
use adebrane::invariants::{reynolds, InvariantRingModel, Polynomial};
use adebrane::io::{parse_triples, TripleFile};
use adebrane::mckay::mckay_quiver;
use adebrane::resolution::{chart_triple_a, kempf_ness_flow, resolution_map, FlowOptions};
use adebrane::scalar::{cplx, modulus, random_complex, Complex};
use adebrane::{Group, Tols};

fn label() -> impl Strategy<Value = AdeLabel> {
    prop_oneof![
        (2usize..=9).prop_map(|n| AdeLabel::cyclic(n).unwrap()),
        (2usize..=6).prop_map(|n| AdeLabel::binary_dihedral(n).unwrap()),
        Just(AdeLabel::E6),
        Just(AdeLabel::E7),
    ]
}

fn small_label() -> impl Strategy<Value = AdeLabel> {
    prop_oneof![
        (2usize..=5).prop_map(|n| AdeLabel::cyclic(n).unwrap()),
        (2usize..=3).prop_map(|n| AdeLabel::binary_dihedral(n).unwrap()),
    ]
}

fn kind() -> impl Strategy<Value = PairKind> {
    proptest::sample::select(PairKind::ALL.to_vec())
}

fn build(label: AdeLabel) -> Group {
    FiniteSubgroup::build(label, 1e-9).unwrap()
}

fn point(re0: f64, im0: f64, re1: f64, im1: f64) -> [Complex<f64>; 2] {
    [cplx(re0, im0), cplx(re1, im1)]
}

/// A partition given by weakly decreasing parts.
fn partition() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..=4, 1..=4).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groups_close_and_characters_are_orthogonal(label in label()) {
        let g = build(label);
        prop_assert!(g.is_latin_square());
        prop_assert!(g.unitarity_defect() < 1e-9);
        prop_assert_eq!(g.order(), label.order());
        let table = g.character_table().unwrap();
        prop_assert!(table.orthogonality_defect() < 1e-8);
        prop_assert_eq!(table.irrep_dims.iter().map(|d| d * d).sum::<usize>(), g.order());
        let regular = Representation::regular(&g).decompose(&table, 1e-6).unwrap();
        prop_assert_eq!(regular, table.irrep_dims.clone());
    }

    #[test]
    fn mckay_quiver_is_an_affine_dynkin_diagram(label in label()) {
        let g = build(label);
        let q = mckay_quiver(&g, &g.character_table().unwrap()).unwrap();
        prop_assert!(q.is_symmetric() && q.has_zero_diagonal() && q.is_connected() && q.matches_cartan());
        let perron = q.perron::<f64>();
        prop_assert!((perron.eigenvalue - 2.0).abs() < 1e-8);
        for (x, &d) in perron.eigenvector.iter().zip(&q.node_dims) {
            prop_assert!((x - d as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn joint_spectrum_is_conjugation_invariant(seed in any::<u64>(), r in 1usize..=6, kind in kind()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tols = Tols::default();
        let p = random_commuting_pair::<f64, _>(r, kind, &mut rng);
        let g = random_invertible::<f64, _>(r, &mut rng);
        let a = p.joint_spectrum(&tols).unwrap();
        let b = p.conjugate(&g).unwrap().joint_spectrum(&tols).unwrap();
        prop_assert!(a.approx_eq(&b, 1e-7), "{:?} vs {:?}", a, b);
    }

    #[test]
    fn algebra_dimension_is_bounded_by_rank(seed in any::<u64>(), r in 1usize..=6, kind in kind()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_commuting_pair::<f64, _>(r, kind, &mut rng);
        prop_assert!(p.algebra_dimension(&Tols::default()) <= r);
    }

    #[test]
    fn semisimplification_is_idempotent_and_keeps_spectrum(seed in any::<u64>(), r in 1usize..=5, kind in kind()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tols = Tols::default();
        let p = random_commuting_pair::<f64, _>(r, kind, &mut rng);
        let s = p.semisimplify(&tols).unwrap();
        let ss = s.semisimplify(&tols).unwrap();
        let spectrum = p.joint_spectrum(&tols).unwrap();
        prop_assert!(s.joint_spectrum(&tols).unwrap().approx_eq(&spectrum, 1e-7));
        prop_assert!((&ss.m1 - &s.m1).norm() < 1e-7 * (1.0 + s.m1.norm()));
        prop_assert!((&ss.m2 - &s.m2).norm() < 1e-7 * (1.0 + s.m2.norm()));
    }

    #[test]
    fn monomial_ideals_give_exact_cyclic_triples(parts in partition()) {
        let tols = Tols::default();
        let ideal = MonomialIdeal::from_partition(&parts).unwrap();
        let r: usize = parts.iter().sum();
        prop_assert_eq!(ideal.r(), r);
        for &(a, b) in ideal.cells() {
            prop_assert!(a == 0 || ideal.contains_cell((a - 1, b)));
            prop_assert!(b == 0 || ideal.contains_cell((a, b - 1)));
        }
        let t = ideal.to_triple::<f64>();
        prop_assert_eq!(t.pair.commutator_residual(), 0.0);
        prop_assert!(t.is_cyclic(&tols));
        prop_assert_eq!(t.to_ideal(&tols).unwrap().staircase, ideal);
    }

    #[test]
    fn free_orbits_give_stable_triples_of_orbifold_length_one(
        label in small_label(), re0 in -2.0..2.0f64, im0 in -2.0..2.0f64, re1 in -2.0..2.0f64, im1 in -2.0..2.0f64,
    ) {
        let g = build(label);
        let table = g.character_table().unwrap();
        let tols = Tols::default();
        let p = point(re0, im0, re1, im1);
        prop_assume!(modulus(p[0]) + modulus(p[1]) > 0.1);
        // only points with a nontrivial stabilizer are rejected
        let built = orbit_to_triple(&g, p, &tols);
        prop_assume!(built.is_ok());
        let e = built.unwrap();
        prop_assert!(e.equivariance_residual(&g) < 1e-10);
        prop_assert!(e.pair.commutator_residual() < 1e-12);
        prop_assert!(e.stacky_stability(&g, &table, &tols).unwrap().is_stable());
        let report = e.support_classification(&g, &tols).unwrap();
        prop_assert_eq!(report.orbil, num_rational::Ratio::from_integer(1));
    }

    #[test]
    fn stacky_stability_is_conjugation_invariant(label in small_label(), seed in any::<u64>()) {
        let g = build(label);
        let table = g.character_table().unwrap();
        let tols = Tols::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = [random_complex::<f64, _>(&mut rng), random_complex(&mut rng)];
        let e = orbit_to_triple(&g, p, &tols).unwrap();
        let h = random_invertible::<f64, _>(e.r(), &mut rng);
        let moved = e.act(&h).unwrap();
        let before = e.stacky_stability(&g, &table, &tols).unwrap();
        let after = moved.stacky_stability(&g, &table, &tols).unwrap();
        prop_assert_eq!(before.is_stable(), after.is_stable());
        prop_assert_eq!(before.regular_type, after.regular_type);
    }

    #[test]
    fn equivariant_spectra_are_group_invariant(n in 2usize..=5, chart in 0usize..5, s in -1.5..1.5f64, t in -1.5..1.5f64) {
        prop_assume!(chart < n);
        let g = build(AdeLabel::cyclic(n).unwrap());
        let tols = Tols::default();
        let e = chart_triple_a::<f64>(n, chart, cplx(s, 0.3), cplx(t, -0.2)).unwrap();
        let spectrum = e.pair.joint_spectrum(&tols).unwrap();
        for gamma in &g.elements {
            let moved = spectrum.map(|p| gamma.apply(p), tols.cluster_tol);
            prop_assert!(moved.approx_eq(&spectrum, 1e-6));
        }
    }

    #[test]
    fn reynolds_is_idempotent(label in small_label(), seed in any::<u64>(), d in 0usize..=6) {
        let g = build(label);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Complex<f64>> = (0..=d).map(|_| random_complex(&mut rng)).collect();
        let f = Polynomial::from_homogeneous(d, &coeffs);
        let once = reynolds(&f, &g);
        let twice = reynolds(&once, &g);
        prop_assert!(once.sub(&twice).max_coefficient() < 1e-12);
    }

    #[test]
    fn quotient_coordinates_ignore_conjugation(label in small_label(), seed in any::<u64>()) {
        let g = build(label);
        let tols = Tols::default();
        let model = InvariantRingModel::build(&g, 12, false, tols.rank_tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = [random_complex::<f64, _>(&mut rng), random_complex(&mut rng)];
        let e = orbit_to_triple(&g, p, &tols).unwrap();
        let h = random_invertible::<f64, _>(e.r(), &mut rng);
        let a = model.quotient_coordinates(&e.pair, &tols).unwrap();
        let b = model.quotient_coordinates(&e.act(&h).unwrap().pair, &tols).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(modulus(*x - *y) < 1e-6 * (1.0 + modulus(*x)));
        }
    }

    #[test]
    fn chart_points_map_onto_the_singular_surface(n in 2usize..=5, chart in 0usize..5, s in -1.5..1.5f64, t in -1.5..1.5f64) {
        prop_assume!(chart < n);
        let g = build(AdeLabel::cyclic(n).unwrap());
        let table = g.character_table().unwrap();
        let tols = Tols::default();
        let model = InvariantRingModel::build(&g, 12, true, tols.rank_tol).unwrap();
        let e = chart_triple_a::<f64>(n, chart, cplx(s, 0.1), cplx(t, 0.4)).unwrap();
        prop_assert!(e.pair.commutator_residual() < 1e-10);
        prop_assert!(e.equivariance_residual(&g) < 1e-10);
        let image = resolution_map(&e, &g, &table, &model, &tols).unwrap();
        let relation = model.relation.as_ref().unwrap();
        prop_assert!(modulus(relation.eval(&image)) < 1e-8 * (1.0 + image.iter().map(|z| modulus(*z)).fold(0.0, f64::max).powi(n as i32)));
    }

    #[test]
    fn flow_keeps_spectrum_and_cyclicity(seed in any::<u64>(), r in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tols = Tols::default();
        let t = random_cyclic_triple::<f64, _>(r, &mut rng);
        let report = kempf_ness_flow(&t, &FlowOptions::default(), &tols).unwrap();
        prop_assert!(report.converged);
        prop_assert!(report.final_residual <= tols.flow_tol);
        prop_assert!(report.spectrum_shift < 1e-6);
        prop_assert!(report.triple_out.is_cyclic(&tols));
    }

    #[test]
    fn triple_files_round_trip_exactly(seed in any::<u64>(), r in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_cyclic_triple::<f64, _>(r, &mut rng);
        let file = TripleFile::from_triple(&t);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed = parse_triples(&text).unwrap();
        let back = parsed[0].to_triple::<f64>().unwrap();
        prop_assert_eq!(&back.pair.m1, &t.pair.m1);
        prop_assert_eq!(&back.pair.m2, &t.pair.m2);
        prop_assert_eq!(&back.v, &t.v);
        prop_assert_eq!(serde_json::to_string_pretty(&parsed[0]).unwrap(), text);
    }
}
