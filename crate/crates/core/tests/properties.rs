use avgauss::measures::{recurrence_table, theta_pair, Measure};
use avgauss::rules::{
    antigauss_rule, error_estimate, gauss_rule, gstar_rule, rule, weighted_averaged_rule,
    QuadratureRule, RefinedRule, RuleKind, WeightedMethod,
};
use avgauss::symtrid::{build_gauss_matrix, build_gstar_matrix, eigen_first_components};
use proptest::prelude::*;

fn jacobi() -> impl Strategy<Value = Measure> {
    (-0.9f64..3.0, -0.9f64..3.0).prop_map(|(a, b)| Measure::jacobi(a, b).unwrap())
}

fn any_measure() -> impl Strategy<Value = Measure> {
    prop_oneof![
        3 => jacobi(),
        1 => (-0.9f64..4.0).prop_map(|a| Measure::laguerre(a).unwrap()),
        1 => Just(Measure::hermite()),
    ]
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn moment(reference: &QuadratureRule, k: i32) -> (f64, f64) {
    reference
        .nodes
        .iter()
        .zip(&reference.weights)
        .fold((0.0, 0.0), |(s, a), (x, w)| {
            let v = w * x.powi(k);
            (s + v, a + v.abs())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_positive(mu in any_measure(), k in 1usize..1000) {
        prop_assert!(mu.beta(k) > 0.0);
    }

    #[test]
    fn theta_sums_to_one(mu in any_measure(), m in 1usize..200) {
        let t = theta_pair(&mu, m).unwrap();
        prop_assert!(t.theta1 > 0.0 && t.theta2 > 0.0);
        prop_assert!((t.theta1 + t.theta2 - 1.0).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn symmetric_jacobi_has_zero_alpha(a in -0.9f64..3.0, k in 0usize..500) {
        prop_assert_eq!(Measure::jacobi(a, a).unwrap().alpha(k), 0.0);
    }

    #[test]
    fn first_components_sum_to_one(mu in any_measure(), m in 1usize..40) {
        let table = recurrence_table(&mu, m + 2).unwrap();
        for t in [build_gauss_matrix(&table, m).unwrap(), build_gstar_matrix(&table, m).unwrap()] {
            let e = eigen_first_components(&t).unwrap();
            let sum: f64 = e.firstcomp2.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(strictly_increasing(&e.values));
            let trace: f64 = t.diag.iter().sum();
            let eig: f64 = e.values.iter().sum();
            prop_assert!((trace - eig).abs() <= 1e-10 * e.values.iter().map(|v| v.abs()).sum::<f64>().max(1.0));
        }
    }

    #[test]
    fn gauss_nodes_inside_domain(mu in any_measure(), m in 1usize..40) {
        let g = gauss_rule(&mu, m).unwrap();
        prop_assert!(!g.out_of_domain);
        prop_assert!(g.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn weights_sum_to_mass(mu in any_measure(), m in 1usize..30) {
        for kind in RuleKind::ALL {
            let r = rule(kind, &mu, m).unwrap();
            prop_assert!(strictly_increasing(&r.nodes), "{kind}");
            prop_assert!(r.weights.iter().all(|&w| w > 0.0), "{kind}");
            prop_assert!((r.weight_sum() - mu.beta0()).abs() <= 1e-12 * mu.beta0(), "{kind}");
        }
    }

    #[test]
    fn gauss_and_gstar_interlace(mu in any_measure(), m in 1usize..40) {
        let g = gauss_rule(&mu, m).unwrap().nodes;
        for other in [gstar_rule(&mu, m).unwrap().nodes, antigauss_rule(&mu, m).unwrap().nodes] {
            for j in 0..m {
                prop_assert!(other[j] < g[j] && g[j] < other[j + 1]);
            }
        }
    }

    #[test]
    fn weighted_averaged_exact_on_polynomials(
        mu in jacobi(),
        m in 1usize..12,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..8),
    ) {
        let reference = gauss_rule(&mu, 4 * m + 8).unwrap();
        let hat = weighted_averaged_rule(&mu, m, WeightedMethod::Split).unwrap();
        let degree = 2 * m + 2;
        for (i, c) in coeffs.iter().enumerate() {
            let k = (i * degree / coeffs.len().max(1)) as i32;
            let (exact, scale) = moment(&reference, k);
            let got: f64 = hat.nodes.iter().zip(&hat.weights).map(|(x, w)| w * x.powi(k)).sum();
            prop_assert!((c * (got - exact)).abs() <= 1e-11 * scale, "k = {k}");
        }
    }

    #[test]
    fn estimates_vanish_on_low_degree(mu in jacobi(), m in 1usize..15, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        for refined in [RefinedRule::Averaged, RefinedRule::WeightedAveraged] {
            let e = error_estimate(&mu, m, |x| a + b * x, refined).unwrap();
            prop_assert!(e.estimate.abs() <= 1e-13 * (a.abs() + b.abs() + 1.0) * mu.beta0());
        }
    }

    #[test]
    fn symmetric_measures_give_symmetric_rules(a in -0.9f64..3.0, m in 1usize..20) {
        for mu in [Measure::jacobi(a, a).unwrap(), Measure::hermite()] {
            let r = weighted_averaged_rule(&mu, m, WeightedMethod::Eigen).unwrap();
            let n = r.len();
            for i in 0..n {
                prop_assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() <= 1e-12 * r.nodes[i].abs().max(1.0));
            }
        }
    }
}
