use std::sync::Arc;

use proptest::prelude::*;

use eigenrand::mc::{stream_rng, Welford};
use eigenrand::measure::{weak_lp_quasinorm, QuadratureRule, SampledFunction, PANEL_ORDER};
use eigenrand::plp::*;
use eigenrand::randmat::{haar_orthogonal, RMat};
use eigenrand::spectral::{dim_e, Family};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (2usize..=3).prop_map(|d| Family::HermiteOscillator { d }),
        (2usize..=3).prop_map(|d| Family::SphereHighest { d }),
        (2usize..=3).prop_map(|d| Family::SphereZonal { d }),
        Just(Family::TorusFourier),
    ]
}

fn norms_for(f: Family, raw: Vec<f64>) -> Vec<f64> {
    raw.into_iter().enumerate().map(|(n, x)| if n < f.first_level() { 0.0 } else { x }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_norm_is_homogeneous(f in family(), raw in prop::collection::vec(0.0f64..2.0, 2..10),
                                      p in 1.0f64..9.0, c in 0.01f64..50.0) {
        let u = norms_for(f, raw);
        let base = plp_norm_quadrature(f, &u, p).unwrap().value;
        let scaled: Vec<f64> = u.iter().map(|x| c * x).collect();
        let v = plp_norm_quadrature(f, &scaled, p).unwrap().value;
        prop_assert!((v - c * base).abs() <= 1e-12 * (c * base).max(1e-300));
    }

    #[test]
    fn quadrature_norm_grows_with_p(f in family(), raw in prop::collection::vec(0.0f64..2.0, 2..10),
                                   p in 1.0f64..6.0, dp in 0.1f64..4.0) {
        // the reference measures are normalized to mass one except the oscillator
        prop_assume!(!matches!(f, Family::HermiteOscillator { .. }));
        let u = norms_for(f, raw);
        let m = f.total_measure();
        let a = plp_norm_quadrature(f, &u, p).unwrap().value * m.powf(-1.0 / p);
        let b = plp_norm_quadrature(f, &u, p + dp).unwrap().value * m.powf(-1.0 / (p + dp));
        prop_assert!(a <= b * (1.0 + 1e-9));
    }

    #[test]
    fn duality_pairing_bound(f in family(), u in prop::collection::vec(0.0f64..1.0, 2..9),
                             w in prop::collection::vec(0.0f64..1.0, 2..9), p in 1.2f64..8.0) {
        let u = norms_for(f, u);
        let w = norms_for(f, w);
        let (lhs, rhs) = duality_check(f, &u, &w, p).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-8) + 1e-14);
    }

    #[test]
    fn closed_forms_are_homogeneous(a in prop::collection::vec(-1.0f64..1.0, 2..30), c in 0.01f64..30.0,
                                    d in 2usize..=4, p in 4.5f64..10.0) {
        let scaled: Vec<f64> = a.iter().map(|x| c * x).collect();
        for (x, y) in [
            (y_closed_form(&a, p, d).unwrap(), y_closed_form(&scaled, p, d).unwrap()),
            (z_closed_form(&a, p, d).unwrap(), z_closed_form(&scaled, p, d).unwrap()),
        ] {
            prop_assert!((y - c * x).abs() <= 1e-12 * (c * x).max(1e-300));
        }
        let h: Vec<f64> = a.iter().map(|x| x.abs()).collect();
        let hs: Vec<f64> = h.iter().map(|x| c * x).collect();
        let (x, y) = (hermite_closed_form(&h, p, d).unwrap(), hermite_closed_form(&hs, p, d).unwrap());
        prop_assert!((y - c * x).abs() <= 1e-12 * (c * x).max(1e-300));
    }

    #[test]
    fn closed_forms_are_monotone(a in prop::collection::vec(0.0f64..1.0, 2..30), k in 1usize..29,
                                 bump in 0.0f64..1.0, d in 2usize..=3, p in 4.5f64..8.0) {
        let mut b = a.clone();
        let k = k.min(b.len() - 1);
        b[k] += bump;
        prop_assert!(y_closed_form(&a, p, d).unwrap() <= y_closed_form(&b, p, d).unwrap() * (1.0 + 1e-14));
        prop_assert!(z_closed_form(&a, p, d).unwrap() <= z_closed_form(&b, p, d).unwrap() * (1.0 + 1e-14));
    }

    #[test]
    fn hurwitz_shift(s in 1.05f64..8.0, a in 0.05f64..40.0) {
        let lhs = hurwitz_zeta(s, a).unwrap();
        let rhs = a.powf(-s) + hurwitz_zeta(s, a + 1.0).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn membership_is_monotone_in_p(sigma in 0.0f64..2.0, tau in -1.0f64..2.0, p in 2.05f64..20.0,
                                   dp in 0.01f64..10.0, d in 2usize..=4, zonal in any::<bool>()) {
        let f = if zonal { Family::SphereZonal { d } } else { Family::SphereHighest { d } };
        let m = CoeffModel::PowerLog { sigma, tau };
        if membership(f, &m, p + dp).unwrap() {
            prop_assert!(membership(f, &m, p).unwrap());
        }
    }

    #[test]
    fn critical_exponent_of_zonal_log_family(p0 in 4.2f64..20.0, beta in prop_oneof![0.2f64..0.9, 1.1f64..3.0]) {
        let pc = critical_exponent(Family::SphereZonal { d: 2 }, &zonal_log_family(2, p0, beta)).unwrap();
        prop_assert!((pc - p0).abs() <= 1e-2);
        prop_assert_eq!(membership(Family::SphereZonal { d: 2 }, &zonal_log_family(2, p0, beta), p0).unwrap(), beta > 1.0);
    }

    #[test]
    fn defect_is_at_least_one(c in prop::collection::vec(-1.5f64..1.5, 1..5), p1 in 1.0f64..3.0, dp in 0.3f64..6.0) {
        let rule = profile_rule(0.0, 1.0, 4);
        let phi = SampledFunction::from_fn(rule, |x| {
            c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * x[0]).sin()).sum::<f64>().exp()
        }).unwrap();
        let q = interpolation_defect(&phi, p1, p1 + dp, 64).unwrap().q;
        prop_assert!(q >= 1.0);
    }

    #[test]
    fn defect_of_scaled_indicator_is_one(h in 0.01f64..100.0, len in 0.1f64..5.0, p1 in 1.0f64..4.0, dp in 0.1f64..8.0) {
        let rule = profile_rule(0.0, len, 2);
        let phi = SampledFunction::from_fn(rule, |_| h).unwrap();
        let q = interpolation_defect(&phi, p1, p1 + dp, 64).unwrap().q;
        prop_assert!((q - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn witness_inequalities(c in prop::collection::vec(-1.0f64..1.0, 1..5), p1 in 1.3f64..3.0, extra in 0.0f64..4.0) {
        let q1 = p1 / (p1 - 1.0);
        let p2 = q1.max(p1 + 0.2) + extra;
        let rule = profile_rule(0.0, 1.0, 4);
        let phi = SampledFunction::from_fn(rule, |x| {
            c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * 3.0 * x[0]).cos()).sum::<f64>().exp()
        }).unwrap();
        let w = holder_witness(&phi, p1, p2).unwrap();
        prop_assert!(w.holds(1e-6), "{:?} {:?} {:?}", w.pairing, w.products, w.pointwise_excess);
    }

    #[test]
    fn counterexample_is_exact(p in 1.0f64..8.0, n in 1usize..200) {
        let (s, u) = r_boundedness_counterexample(p, n).unwrap();
        let nf = n as f64;
        prop_assert!((s - nf.powf(p / 2.0)).abs() <= 1e-12 * nf.powf(p / 2.0));
        prop_assert_eq!(u, nf);
    }

    #[test]
    fn weak_norm_below_strong(v in prop::collection::vec(0.0f64..10.0, 16..=16), p in 1.1f64..8.0) {
        let rule = Arc::new(QuadratureRule::interval(0.0, 2.0, 1, PANEL_ORDER));
        let u = SampledFunction::new(rule, v).unwrap();
        prop_assert!(weak_lp_quasinorm(&u, p) <= u.lp_norm(p) * (1.0 + 1e-12));
    }

    #[test]
    fn welford_merge_matches_sequential(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
        let cut = cut.min(xs.len());
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        prop_assert!((a.variance() - all.variance()).abs() <= 1e-9 * all.variance().max(1.0));
    }

    #[test]
    fn haar_samples_are_orthogonal(seed in any::<u64>(), d in 1usize..12) {
        let q = haar_orthogonal(d, &mut stream_rng(seed, 0));
        prop_assert!((q.transpose() * &q - RMat::identity(d, d)).amax() <= 1e-12);
    }

    #[test]
    fn oscillator_multiplicities(n in 0usize..500) {
        let m = n as u64;
        prop_assert_eq!(dim_e(1, n).unwrap(), 1);
        prop_assert_eq!(dim_e(2, n).unwrap(), m + 1);
        prop_assert_eq!(dim_e(3, n).unwrap(), (m + 1) * (m + 2) / 2);
    }
}
