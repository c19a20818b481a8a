use graphfold::cli::{build_report, Report};
use graphfold::cupring::{
    cup_form, cup_image, integrally_trivial, rational_rings_isomorphic, RingComparison,
};
use graphfold::homology::{homology, homology_closed_form, homology_mv};
use graphfold::intlat::{
    cokernel, snf, subgroup_structure, CoefficientRing, FgAbelianGroup, IntMatrix,
};
use graphfold::manifold::{
    canonical_representation, lower_bundle, parse, twist_matrix, ManifoldExpr,
};
use graphfold::random;
use graphfold::roundmap::{
    classify, directed_standard, manifold_of, reeb_homology, reeb_quotient_audit, verify_verdict,
    Verdict,
};
use graphfold::selftest::snf_contract_holds;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sphere_sum(eulers: &[i64]) -> ManifoldExpr {
    ManifoldExpr::sum(eulers.iter().map(|&e| ManifoldExpr::bundle(0, e)).collect()).unwrap()
}

/// Product of elementary row operations `row[i] += f·row[j]` and swaps.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for &(i, j, f) in ops {
        let (i, j) = (i % n, j % n);
        let mut e = IntMatrix::identity(n);
        if i == j {
            let k = (i + 1) % n;
            e.set(i, i, BigInt::from(0));
            e.set(k, k, BigInt::from(0));
            e.set(i, k, BigInt::one());
            e.set(k, i, BigInt::one());
        } else {
            e.set(i, j, BigInt::from(f));
        }
        m = e.mul(&m);
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_contract(a in matrix(7, 40)) {
        prop_assert!(snf_contract_holds(&a, &snf(&a)));
    }

    #[test]
    fn invariant_factors_ignore_unimodular_changes(
        a in matrix(5, 12),
        row_ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..6),
        col_ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..6),
    ) {
        let p = unimodular(a.rows(), &row_ops);
        let q = unimodular(a.cols(), &col_ops);
        prop_assert!(p.is_unimodular() && q.is_unimodular());
        let b = p.mul(&a).mul(&q);
        prop_assert_eq!(snf(&a).invariant_factors(), snf(&b).invariant_factors());
        prop_assert_eq!(cokernel(&a), cokernel(&b));
    }

    #[test]
    fn diagonal_cokernel(diag in prop::collection::vec(1i64..=30, 1..5)) {
        let n = diag.len();
        let d: Vec<BigInt> = diag.iter().map(|&x| BigInt::from(x)).collect();
        let g = cokernel(&IntMatrix::diagonal(n, n, &d));
        let order: i64 = diag.iter().product();
        prop_assert_eq!(g.order(), Some(BigInt::from(order)));
        prop_assert_eq!(g.rank(), 0);
        for w in g.torsion().windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
        }
    }

    #[test]
    fn full_basis_generates_ambient(rank in 0usize..3, orders in prop::collection::vec(2i64..=9, 0..3)) {
        let g = FgAbelianGroup::from_cyclic(rank, orders);
        let n = g.coordinate_len();
        let basis: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        prop_assert_eq!(subgroup_structure(&g, &basis).unwrap(), g.clone());
        prop_assert!(subgroup_structure(&g, &[]).unwrap().is_trivial());
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let m = random::expr(&mut rng(seed), 2);
        let text = m.render();
        prop_assert_eq!(parse(&text).unwrap(), m, "{}", text);
    }

    #[test]
    fn twist_algebra(j in -1000i64..=1000, k in -1000i64..=1000, x in -50i64..=50, y in -50i64..=50) {
        prop_assert_eq!(twist_matrix(j).mul(&twist_matrix(k)), twist_matrix(j + k));
        prop_assert_eq!(twist_matrix(j).determinant(), 1);
        // fibers are fixed, the boundary curve picks up j fibers
        prop_assert_eq!(twist_matrix(j).apply((0, y)), (0, y));
        prop_assert_eq!(twist_matrix(j).apply((x, 0)), (x, j * x));
    }

    #[test]
    fn sphere_sums_have_tree_witnesses(eulers in prop::collection::vec(-12i64..=12, 1..=8)) {
        let m = sphere_sum(&eulers);
        let w = canonical_representation(&m).expect("witness");
        prop_assert!(w.is_tree() && w.all_genus_zero() && w.is_well_formed());
        let v = classify(&m);
        prop_assert!(matches!(v, Verdict::AdmitsDirected { .. }), "{}", v);
        prop_assert!(verify_verdict(&m, &v));
        prop_assert!(integrally_trivial(&cup_form(&m, CoefficientRing::Integers).unwrap()));
    }

    #[test]
    fn closed_form_agrees_with_mayer_vietoris(g in 0u32..=5, e in -100i64..=100) {
        let mv = homology_mv(&lower_bundle(g, e)).unwrap();
        let closed = homology_closed_form(&ManifoldExpr::bundle(g, e)).unwrap();
        prop_assert_eq!(mv.groups, closed.groups);
    }

    #[test]
    fn random_plumbings_satisfy_invariants(seed in any::<u64>()) {
        let m = random::plumbing(&mut rng(seed), 6, 5);
        let h = homology(&m);
        prop_assert!(h.violations().is_empty(), "{}: {:?}", m, h.violations());
    }

    #[test]
    fn homology_of_sums_is_summandwise(eulers in prop::collection::vec((0u32..=2, -9i64..=9), 2..=4)) {
        let parts: Vec<ManifoldExpr> = eulers.iter().map(|&(g, e)| ManifoldExpr::bundle(g, e)).collect();
        let expected = parts.iter().map(|p| homology(p).groups[1].clone())
            .reduce(|a, b| a.direct_sum(&b)).unwrap();
        let m = ManifoldExpr::sum(parts).unwrap();
        prop_assert_eq!(&homology(&m).groups[1], &expected);
    }

    #[test]
    fn cup_forms_are_antisymmetric(g in 0u32..=3, e in -8i64..=8, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let m = ManifoldExpr::sum(vec![ManifoldExpr::bundle(g, e), ManifoldExpr::bundle(1, e + 1)]).unwrap();
        for ring in [CoefficientRing::Integers, CoefficientRing::Rationals, CoefficientRing::ModP { p }] {
            prop_assert!(cup_form(&m, ring).unwrap().is_antisymmetric());
        }
    }

    #[test]
    fn cup_image_ignores_summand_order(mut parts in prop::collection::vec((0u32..=2, -6i64..=6), 2..=4), rot in 0usize..4) {
        let build = |ps: &[(u32, i64)]| {
            ManifoldExpr::sum(ps.iter().map(|&(g, e)| ManifoldExpr::bundle(g, e)).collect()).unwrap()
        };
        let before = cup_image(&cup_form(&build(&parts), CoefficientRing::Integers).unwrap());
        let n = parts.len();
        parts.rotate_left(rot % n);
        let after = cup_image(&cup_form(&build(&parts), CoefficientRing::Integers).unwrap());
        prop_assert_eq!(before, after);
    }

    #[test]
    fn torsion_cup_product_reduces_mod_p(k in 2i64..=60, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let m = ManifoldExpr::bundle(1, k);
        let integral = cup_form(&m, CoefficientRing::Integers).unwrap();
        prop_assert_eq!(cup_image(&integral), FgAbelianGroup::from_cyclic(0, [k]));
        let modp = cup_form(&m, CoefficientRing::ModP { p }).unwrap();
        prop_assert_eq!(modp.nonzero_pair().is_some(), k % p as i64 == 0);
        prop_assert!(cup_form(&m, CoefficientRing::Rationals).unwrap().nonzero_pair().is_none());
    }

    #[test]
    fn family_pairs_share_rational_rings(k in 2i64..=200) {
        let m = ManifoldExpr::bundle(1, k);
        let m0 = ManifoldExpr::sum(vec![
            ManifoldExpr::bundle(0, 0), ManifoldExpr::bundle(0, 0), ManifoldExpr::bundle(0, k),
        ]).unwrap();
        prop_assert_eq!(homology(&m).groups, homology(&m0).groups);
        prop_assert_eq!(rational_rings_isomorphic(&m, &m0).unwrap(), RingComparison::Yes);
        prop_assert!(matches!(classify(&m), Verdict::NoDirected { .. }), "{}", m);
    }

    #[test]
    fn positive_genus_nonzero_euler_has_no_directed_map(g in 1u32..=4, e in 2i64..=30, neg in any::<bool>()) {
        let e = if neg { -e } else { e };
        let m = ManifoldExpr::bundle(g, e);
        let v = classify(&m);
        prop_assert!(matches!(v, Verdict::NoDirected { .. }), "{}", v);
        prop_assert!(verify_verdict(&m, &v));
    }

    #[test]
    fn directed_standard_models(eulers in prop::collection::vec(-12i64..=12, 1..=8)) {
        let l = eulers.len();
        let d = directed_standard(l, &eulers).unwrap();
        let counts: Vec<u32> = (1..=l as u32 + 1).rev().collect();
        prop_assert_eq!(d.counts(), counts.as_slice());
        prop_assert_eq!(reeb_homology(&d).unwrap()[2].rank(), l);
        let m = manifold_of(&d).unwrap();
        prop_assert_eq!(homology(&m).groups, homology(&sphere_sum(&eulers)).groups);
        prop_assert!(homology(&m).groups[2].rank() <= l);
        prop_assert!(reeb_quotient_audit(&d).unwrap().passed());
    }

    #[test]
    fn report_json_round_trips(seed in any::<u64>(), ring in prop::sample::select(vec!["z", "q", "mod:2", "mod:3", "mod:5"])) {
        let m = random::expr(&mut rng(seed), 2);
        let ring: CoefficientRing = ring.parse().unwrap();
        let report = build_report(&m, ring);
        prop_assert!(report.passed(), "{:?}", report.checks);
        let json = serde_json::to_string(&report).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, report);
    }
}
