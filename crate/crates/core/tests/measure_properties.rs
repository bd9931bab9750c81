use licorm::measures::{wasserstein, DiscreteMeasure};
use licorm::riskmeasures::{cvar, higher_moment, kusuoka_to_measure};
use licorm::transport::{chi_single, comonotone_coupling, exact_potentials_single};
use licorm::Order;
use proptest::prelude::*;

fn measure() -> impl Strategy<Value = DiscreteMeasure<f64>> {
    prop::collection::vec((-50.0f64..50.0, 0.01f64..1.0), 1..40).prop_map(|atoms| {
        let (xs, ws): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        DiscreteMeasure::from_samples(&xs, Some(&ws)).unwrap()
    })
}

/// Unit-mean measure on `ℝ₊`: positive atoms rescaled by their mean.
fn target() -> impl Strategy<Value = DiscreteMeasure<f64>> {
    prop::collection::vec((0.0f64..10.0, 0.01f64..1.0), 1..8).prop_filter_map("positive mean", |atoms| {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let mean: f64 = atoms.iter().map(|a| a.0 * a.1).sum::<f64>() / total;
        (mean > 1e-3).then(|| {
            let xs: Vec<f64> = atoms.iter().map(|a| a.0 / mean).collect();
            let ws: Vec<f64> = atoms.iter().map(|a| a.1).collect();
            DiscreteMeasure::from_samples(&xs, Some(&ws)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quantile_partition_round_trips(m in measure()) {
        let back = m.quantile_partition().to_measure().unwrap();
        prop_assert_eq!(back.positions(), m.positions());
        for (a, b) in back.weights().iter().zip(m.weights()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn quantile_is_right_inverse_of_cdf(m in measure(), t in 1e-9f64..=1.0) {
        let q = m.quantile(t).unwrap();
        prop_assert!(m.cdf(q) >= t - 1e-12);
        let k = m.positions().partition_point(|&x| x < q);
        if k > 0 {
            prop_assert!(m.cdf(m.positions()[k - 1]) < t + 1e-12);
        }
    }

    #[test]
    fn wasserstein_is_a_metric(a in measure(), b in measure(), c in measure(), p in 1.0f64..4.0) {
        let p = Order::Finite(p);
        let ab = wasserstein(&a, &b, p).unwrap();
        prop_assert!((ab - wasserstein(&b, &a, p).unwrap()).abs() < 1e-9);
        prop_assert!(wasserstein(&a, &a, p).unwrap().abs() < 1e-12);
        let via = wasserstein(&a, &c, p).unwrap() + wasserstein(&c, &b, p).unwrap();
        prop_assert!(ab <= via + 1e-9);
    }

    #[test]
    fn comonotone_coupling_has_the_right_marginals(m in measure(), r in target()) {
        let plan = comonotone_coupling(&m, &r);
        let (first, second) = (plan.first_marginal(), plan.second_marginal());
        prop_assert_eq!(first.positions(), m.positions());
        prop_assert_eq!(second.positions(), r.positions());
        for (a, b) in first.weights().iter().zip(m.weights()).chain(second.weights().iter().zip(r.weights())) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!((plan.objective() - chi_single(&m, &r)).abs() < 1e-9);
    }

    #[test]
    fn exact_potentials_are_feasible_and_tight(m in measure(), r in target()) {
        let pair = exact_potentials_single(&m, &r);
        let chi = chi_single(&m, &r);
        let scale = 1.0 + m.max().abs().max(m.min().abs()) * r.max();
        prop_assert!(pair.min_slack() >= -1e-11 * scale);
        prop_assert!((pair.dual_value(&m, &r) - chi).abs() <= 1e-10 * scale);
        prop_assert_eq!(pair.g[0], 0.0);
    }

    #[test]
    fn chi_is_bounded_by_moments(m in measure(), r in target()) {
        let bound = m.moment(Order::Finite(1.0)).unwrap() * r.moment(Order::Infinity).unwrap();
        prop_assert!(chi_single(&m, &r).abs() <= bound + 1e-9);
        prop_assert!(chi_single(&m, &r) >= m.expectation() - 1e-9);
    }

    #[test]
    fn cvar_is_monotone_in_beta(m in measure(), b1 in 0.0f64..0.99, b2 in 0.0f64..0.99) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        prop_assert!(cvar(&m, lo).unwrap() <= cvar(&m, hi).unwrap() + 1e-9);
        prop_assert!(cvar(&m, hi).unwrap() <= m.max() + 1e-9);
    }

    #[test]
    fn higher_moment_sits_between_mean_and_max_scaled(m in measure(), p in 1.1f64..4.0, c in 1.01f64..6.0) {
        let v = higher_moment(&m, p, c).unwrap().value;
        prop_assert!(v >= m.expectation() - 1e-9);
        prop_assert!(v <= m.max() + 1e-9);
    }

    #[test]
    fn kusuoka_image_has_unit_mean(atoms in prop::collection::vec((0.0f64..0.999, 0.01f64..1.0), 1..8)) {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(b, w)| (b, w / total)).collect();
        let img = kusuoka_to_measure(&atoms).unwrap();
        prop_assert!((img.image_measure().expectation() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn single_precision_instantiation() {
    let m = DiscreteMeasure::<f32>::uniform(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert!((cvar(&m, 0.5f32).unwrap() - 3.5).abs() < 1e-5);
    let hm = higher_moment(&DiscreteMeasure::<f32>::uniform(&[0.0, 1.0]).unwrap(), 2.0, 1.2).unwrap();
    assert!((hm.value - 0.83166).abs() < 1e-4);
    let img = kusuoka_to_measure::<f32>(&[(0.0, 0.5), (0.5, 0.5)]).unwrap();
    assert!((chi_single(&m, img.image_measure()) - 3.0).abs() < 1e-5);
}
