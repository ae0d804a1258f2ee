use std::collections::HashSet;

use sktdpc::baseline::{brute_knn, full_matrix, sktdpc_reference};
use sktdpc::dataset::{corpus_case, generate_gaussian_blobs, BlobSpec};
use sktdpc::dpc::{local_density, separation};
use sktdpc::metrics::evaluate;
use sktdpc::{run_sktdpc, Dataset, KdTree};

fn assert_same_clustering(data: &Dataset, k: usize) {
    let fast = run_sktdpc(data, k).unwrap();
    let slow = sktdpc_reference(data, k).unwrap();
    let tag = format!("{} k={k}", data.name());
    assert_eq!(fast.profile.rho_order, slow.profile.rho_order, "{tag}");
    assert_eq!(fast.profile.nhd, slow.profile.nhd, "{tag}");
    assert_eq!(fast.profile.gamma_order, slow.profile.gamma_order, "{tag}");
    assert_eq!(fast.m_p, slow.m_p, "{tag}");
    assert_eq!(fast.centers, slow.centers, "{tag}");
    assert_eq!(fast.labels, slow.labels, "{tag}");
    for i in 0..data.len() {
        assert_eq!(fast.profile.rho[i], slow.profile.rho[i], "{tag} rho[{i}]");
        assert_eq!(
            fast.profile.delta[i], slow.profile.delta[i],
            "{tag} delta[{i}]"
        );
    }
}

#[test]
fn corpus_matches_full_matrix_reference() {
    for seed in 0..100 {
        let (data, k) = corpus_case(seed);
        assert_same_clustering(&data, k);
    }
}

#[test]
fn two_points_degenerate_case() {
    let data = Dataset::from_rows("two", &[vec![0.0, 0.0], vec![3.0, 4.0]], None).unwrap();
    assert_same_clustering(&data, 1);
}

#[test]
fn density_is_reciprocal_neighbour_sum() {
    let data = generate_gaussian_blobs(&BlobSpec {
        centers: vec![vec![0.0, 0.0], vec![6.0, 1.0]],
        spreads: vec![1.0],
        points_per_cluster: 150,
        seed: 21,
    })
    .unwrap();
    let m = full_matrix(&data);
    let r = run_sktdpc(&data, 6).unwrap();
    for i in 0..data.len() {
        let sum: f64 = brute_knn(&m, i, 6)
            .unwrap()
            .neighbors
            .iter()
            .map(|nb| nb.distance)
            .sum();
        assert_eq!(r.profile.rho[i], 1.0 / sum);
    }
}

/// Fallback scans may only evaluate pairs between a fallback point and the
/// points ahead of it; everything else must come from the neighbour cache.
#[test]
fn intersection_branch_evaluates_nothing() {
    for seed in 0..100 {
        let (data, k) = corpus_case(seed);
        let tree = KdTree::build(&data);
        let (sets, mut cache) = tree.knn_all(k).unwrap();
        let mut known: HashSet<(usize, usize)> =
            cache.pairs().into_iter().map(|(i, j, _)| (i, j)).collect();
        let density = local_density(&sets).unwrap();
        let sep = separation(&density, &sets, &mut cache, &data);

        let rank = density.ranks();
        let mut expected = 0u64;
        for &i in &sep.fallback {
            let ahead: Vec<usize> = if rank[i] == 0 {
                (0..data.len()).filter(|&j| j != i).collect()
            } else {
                density.order[..rank[i]].to_vec()
            };
            for j in ahead {
                if known.insert((i.min(j), i.max(j))) {
                    expected += 1;
                }
            }
        }
        assert_eq!(sep.evaluations, expected, "seed {seed}");

        // separation by definition on the full matrix
        let m = full_matrix(&data);
        for (r, &i) in density.order.iter().enumerate().skip(1) {
            let (d, j) = density.order[..r]
                .iter()
                .map(|&j| (m.get(i, j), j))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .unwrap();
            assert_eq!(
                (sep.delta[i], sep.nhd[i]),
                (d, Some(j)),
                "seed {seed} point {i}"
            );
        }
    }
}

/// Sixteen points arranged so that exactly three points have no denser
/// neighbour among their three nearest: the densest point and two others.
#[test]
fn sixteen_point_fallback_structure() {
    let rows = [
        [5.2, 7.5],
        [4.4, 1.4],
        [3.5, 9.8],
        [7.5, 1.2],
        [8.1, 3.1],
        [7.8, 0.1],
        [8.7, 1.6],
        [4.6, 6.6],
        [5.1, 1.7],
        [1.4, 2.8],
        [0.5, 2.2],
        [1.3, 4.6],
        [3.6, 5.9],
        [2.8, 0.3],
        [3.3, 7.6],
        [2.6, 4.0],
    ];
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let data = Dataset::from_rows("sixteen", &rows, None).unwrap();
    let tree = KdTree::build(&data);
    let (sets, mut cache) = tree.knn_all(3).unwrap();
    let density = local_density(&sets).unwrap();
    assert_eq!(&density.order[..3], &[7, 3, 9]);

    let sep = separation(&density, &sets, &mut cache, &data);
    assert_eq!(sep.fallback, vec![7, 3, 9]);
    // the densest point knows its distance to every other point afterwards
    for j in (0..16).filter(|&j| j != 7) {
        assert!(cache.contains(7, j));
    }
    // point 3 compares against {7}, point 9 against {7, 3}
    assert_eq!(sep.nhd[3], Some(7));
    assert_eq!(sep.delta[3], data.distance(3, 7));
    let nine = if data.distance(9, 7) <= data.distance(9, 3) {
        7
    } else {
        3
    };
    assert_eq!(sep.nhd[9], Some(nine));

    let r = run_sktdpc(&data, 3).unwrap();
    assert_eq!(r.counters.fallback_points, 3);
    assert_eq!(r.counters.intersection_points, 13);
}

fn two_blob_fixture() -> Dataset {
    generate_gaussian_blobs(&BlobSpec {
        centers: vec![vec![0.0, 0.0], vec![8.0, 8.0]],
        spreads: vec![1.0],
        points_per_cluster: 150,
        seed: 1,
    })
    .unwrap()
}

#[test]
fn two_blob_fixture_has_mutation_point_two() {
    let data = two_blob_fixture();
    for k in 3..=7 {
        let r = run_sktdpc(&data, k).unwrap();
        let mp = r.mutation.as_ref().unwrap();
        assert_eq!(mp.window_end, 17);
        assert_eq!(mp.scores.len(), 14);
        assert_eq!(r.m_p, 2, "k = {k}");
        assert_eq!(r.centers.len(), 2, "k = {k}");
        let s = evaluate(data.labels().unwrap(), &r.labels).unwrap();
        assert_eq!(s.acc, 1.0, "k = {k}");
    }
}

#[test]
fn uniform_scaling_keeps_every_decision() {
    let mut checked = 0;
    for seed in (0..40).filter(|s| s % 4 != 0).take(20) {
        let (data, k) = corpus_case(seed);
        let base = run_sktdpc(&data, k).unwrap();
        for c in [0.1, 10.0] {
            let r = run_sktdpc(&data.scaled(c), k).unwrap();
            assert_eq!(
                r.profile.gamma_order, base.profile.gamma_order,
                "seed {seed} c {c}"
            );
            assert_eq!(r.m_p, base.m_p, "seed {seed} c {c}");
            assert_eq!(r.centers, base.centers, "seed {seed} c {c}");
            assert_eq!(r.labels, base.labels, "seed {seed} c {c}");
        }
        checked += 1;
    }
    assert_eq!(checked, 20);
}

#[test]
fn labels_cover_exactly_the_centres() {
    for seed in 0..30 {
        let (data, k) = corpus_case(seed);
        let r = run_sktdpc(&data, k).unwrap();
        let distinct: HashSet<usize> = r.labels.iter().copied().collect();
        assert_eq!(distinct.len(), r.centers.len());
        for (id, &c) in r.centers.iter().enumerate() {
            assert_eq!(r.labels[c], id);
        }
        assert!(r.counters.ratio() > 0.0 && r.counters.ratio() <= 1.0);
    }
}
