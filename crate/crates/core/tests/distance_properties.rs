mod common;

use proptest::prelude::*;

use common::*;
use tvclust::distkit::{half_l1_distance, kl_divergence, tv_distance};
use tvclust::estkit::{unit_grid, FreqUnit, SpectralDensity};

fn density(values: Vec<f64>) -> Option<SpectralDensity> {
    let n = values.len();
    SpectralDensity::new(unit_grid(n), values, FreqUnit::RadPerSample).ok()?.normalize().ok()
}

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..1.0f64], n)
}

fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (3usize..48).prop_flat_map(|n| (values(n), values(n), values(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tv_is_a_bounded_metric((a, b, c) in triple()) {
        let (Some(f), Some(g), Some(h)) = (density(a), density(b), density(c)) else { return Ok(()) };
        let fg = tv_distance(&f, &g).unwrap();
        prop_assert!((0.0..=1.0).contains(&fg));
        prop_assert_eq!(tv_distance(&f, &f).unwrap(), 0.0);
        prop_assert!((fg - tv_distance(&g, &f).unwrap()).abs() < 1e-12);
        let (fh, gh) = (tv_distance(&f, &h).unwrap(), tv_distance(&g, &h).unwrap());
        prop_assert!(fh <= fg + gh + 1e-12);
        prop_assert!((fg - half_l1_distance(&f, &g).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn pinsker((a, b) in (3usize..48).prop_flat_map(|n| {
        (prop::collection::vec(0.01..1.0f64, n), prop::collection::vec(0.01..1.0f64, n))
    })) {
        let (f, g) = (density(a).unwrap(), density(b).unwrap());
        let tv = tv_distance(&f, &g).unwrap();
        let kl = kl_divergence(&f, &g).unwrap();
        prop_assert!(2.0 * tv * tv <= kl + 1e-9, "2 tv^2 = {} > KL = {}", 2.0 * tv * tv, kl);
    }

    #[test]
    fn tv_matches_sup_over_subsets(a in values(8), b in values(8)) {
        let (Some(f), Some(g)) = (density(a), density(b)) else { return Ok(()) };
        let tv = tv_distance(&f, &g).unwrap();
        prop_assert!((tv - sup_over_subsets(&f, &g)).abs() < 1e-12);
    }
}

#[test]
fn seeded_batteries() {
    tv_metric_battery(11, 1000).unwrap();
    pinsker_battery(12, 1000).unwrap();
    subset_battery(13, 500).unwrap();
    tv_matrix_check(14).unwrap();
}

#[test]
fn scale_invariance() {
    scale_battery(15, 20).unwrap();
}

#[test]
fn disjoint_halves_have_distance_one() {
    let f = density([vec![1.0; 5], vec![0.0; 6]].concat()).unwrap();
    let g = density([vec![0.0; 6], vec![1.0; 5]].concat()).unwrap();
    assert!((tv_distance(&f, &g).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(kl_divergence(&f, &g).unwrap(), f64::INFINITY);
}
