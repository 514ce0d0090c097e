mod common;

use proptest::prelude::*;

use common::*;
use tvclust::clusterkit::{agglomerate, silhouette_revision_rounds, sim_index, Linkage, Partition};
use tvclust::distkit::DissimilarityMatrix;

fn matrix() -> impl Strategy<Value = DissimilarityMatrix> {
    (2usize..=7).prop_flat_map(|n| {
        prop::collection::vec(0.001..1.0f64, n * (n - 1) / 2).prop_map(move |v| {
            let mut rows = vec![vec![0.0; n]; n];
            let mut it = v.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
            }
            DissimilarityMatrix::from_rows(rows, "random").unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn cuts_match_brute_force(m in matrix(), complete in any::<bool>()) {
        let linkage = if complete { Linkage::Complete } else { Linkage::Average };
        let tree = agglomerate(&m, linkage).unwrap();
        prop_assert!(tree.is_monotone());
        for k in 1..=m.n() {
            let got = tree.cut(k).unwrap().canonical();
            prop_assert_eq!(got.labels(), &brute_force_cut(&m, linkage, k)[..]);
        }
    }

    #[test]
    fn relabeling_items_permutes_clusters(m in matrix(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = m.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng(seed));
        let permuted = m.select(&perm);
        for linkage in [Linkage::Complete, Linkage::Average] {
            let (a, b) = (agglomerate(&m, linkage).unwrap(), agglomerate(&permuted, linkage).unwrap());
            for k in 1..=n {
                let pa = a.cut(k).unwrap();
                let pb = b.cut(k).unwrap();
                // item perm[i] of the original sits at position i
                let back: Vec<usize> = (0..n).map(|i| pa.label(perm[i])).collect();
                prop_assert_eq!(Partition::new(back).unwrap().canonical(), pb.canonical());
            }
        }
    }

    #[test]
    fn sim_bounds(a in prop::collection::vec(0usize..4, 2..12), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let b: Vec<usize> = a.iter().map(|_| r.random_range(0..4)).collect();
        let (pa, pb) = (Partition::from_keys(&a).unwrap(), Partition::from_keys(&b).unwrap());
        let s = sim_index(&pa, &pb).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        prop_assert_eq!(sim_index(&pa, &pa).unwrap(), 1.0);
    }

    #[test]
    fn revision_keeps_every_cluster(m in matrix(), k in 2usize..5) {
        prop_assume!(k < m.n());
        let p = agglomerate(&m, Linkage::Average).unwrap().cut(k).unwrap();
        let out = silhouette_revision_rounds(&p, &m, 10).unwrap();
        prop_assert_eq!(out.partition.k(), k);
        prop_assert!(out.partition.sizes().iter().all(|&s| s > 0));
    }
}

#[test]
fn seeded_oracle_battery() {
    clustering_oracle_battery(21, 500).unwrap();
}

#[test]
fn hand_computed_cases() {
    sim_battery().unwrap();
    validity_battery().unwrap();
}

#[test]
fn matrix_scaling_keeps_decisions() {
    matrix_scale_battery(22, 100).unwrap();
}
