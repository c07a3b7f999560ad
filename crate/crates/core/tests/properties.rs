use ghsteiner::correspondence::enumerate_minimal_correspondences;
use ghsteiner::io::SpaceJson;
use ghsteiner::lp::solve_edge_lengths;
use ghsteiner::metric::{MergeClasses, EPS_FEAS};
use ghsteiner::solver::{random_slot, restrict_to_threads, TreeVertex};
use ghsteiner::topology::VertexKind;
use ghsteiner::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Half-integer entries repaired to a metric by shortest paths.
fn metric_rows(n: usize, raw: &[u8]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    let mut it = raw.iter().cycle();
    for i in 0..n {
        for j in i + 1..n {
            let v = f64::from(1 + it.next().unwrap() % 10) * 0.5;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn space(max: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (1..=max, prop::collection::vec(any::<u8>(), 16)).prop_map(|(n, raw)| {
        FiniteMetricSpace::from_rows("s", &metric_rows(n, &raw)).expect("generator yields metrics")
    })
}

/// Minimum distortion over every subset of X × Y that is a correspondence.
fn brute_force(x: &DistanceMatrix, y: &DistanceMatrix) -> (f64, Vec<bool>) {
    let (n, m) = (x.len(), y.len());
    let cells = n * m;
    let mut best: Option<(f64, Vec<bool>)> = None;
    for mask in 1u32..(1 << cells) {
        let bits: Vec<bool> = (0..cells).map(|c| mask >> (cells - 1 - c) & 1 == 1).collect();
        let rows_ok = (0..n).all(|i| (0..m).any(|j| bits[i * m + j]));
        let cols_ok = (0..m).all(|j| (0..n).any(|i| bits[i * m + j]));
        if !rows_ok || !cols_ok {
            continue;
        }
        let mut dis = 0.0f64;
        for a in 0..cells {
            for b in 0..cells {
                if bits[a] && bits[b] {
                    dis = dis.max((x.get(a / m, b / m) - y.get(a % m, b % m)).abs());
                }
            }
        }
        if best
            .as_ref()
            .is_none_or(|(d, bb)| dis < *d || (dis == *d && bits < *bb))
        {
            best = Some((dis, bits));
        }
    }
    best.expect("full relation is a correspondence")
}

fn incidence(r: &Relation) -> Vec<bool> {
    let (n, m) = r.dims();
    (0..n * m).map(|c| r.contains(c / m, c % m)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn space_json_round_trips(x in space(5)) {
        let json = serde_json::to_string(&SpaceJson::from_space(&x)).unwrap();
        let back: SpaceJson = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.parse().unwrap(), x);
    }

    #[test]
    fn distortion_symmetric_under_transpose(x in space(4), y in space(4)) {
        let (r, _) = optimal_correspondence(&x, &y).unwrap();
        let full = Correspondence::full(x.len(), y.len());
        prop_assert_eq!(distortion(&r, &x, &y), distortion(&r.transpose(), &y, &x));
        prop_assert_eq!(distortion(&full, &x, &y), distortion(&full.transpose(), &y, &x));
    }

    #[test]
    fn distortion_monotone_under_inclusion(x in space(4), y in space(4), extra in any::<u16>()) {
        let (r, _) = optimal_correspondence(&x, &y).unwrap();
        let mut bigger = r.as_relation().clone();
        let (n, m) = bigger.dims();
        for c in 0..n * m {
            if extra >> (c % 16) & 1 == 1 {
                bigger.insert(c / m, c % m);
            }
        }
        prop_assert!(r.is_subset_of(&bigger));
        prop_assert!(distortion(&r, &x, &y) <= distortion(&bigger, &x, &y));
    }

    #[test]
    fn search_matches_brute_force(x in space(3), y in space(3)) {
        let (bd, bits) = brute_force(x.matrix(), y.matrix());
        let (r, d) = optimal_correspondence(&x, &y).unwrap();
        prop_assert_eq!(d, bd);
        prop_assert_eq!(incidence(&r), bits);
    }

    #[test]
    fn search_matches_minimal_family(x in space(4), y in space(4)) {
        let family_min = enumerate_minimal_correspondences(x.len(), y.len(), 1_000_000)
            .unwrap()
            .map(|r| distortion(&r, &x, &y))
            .fold(f64::INFINITY, f64::min);
        let (_, d) = optimal_correspondence(&x, &y).unwrap();
        prop_assert_eq!(d, family_min);
    }

    #[test]
    fn gh_is_a_metric(x in space(4), y in space(4), z in space(4)) {
        let xy = gh_distance(&x, &y).unwrap().distance;
        prop_assert_eq!(xy, gh_distance(&y, &x).unwrap().distance);
        prop_assert_eq!(gh_distance(&x, &x).unwrap().distance, 0.0);
        let yz = gh_distance(&y, &z).unwrap().distance;
        let xz = gh_distance(&x, &z).unwrap().distance;
        prop_assert!(xz <= xy + yz + 1e-12);
        prop_assert!(xy + 1e-12 >= diameter_lower_bound(&x, &y));
    }

    #[test]
    fn gh_to_a_point_is_half_the_diameter(x in space(5)) {
        let p = FiniteMetricSpace::one_point("p");
        prop_assert!((gh_distance(&x, &p).unwrap().distance - x.diameter() / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn quotient_keeps_diameter_and_is_idempotent(x in space(4), dup in prop::collection::vec(0usize..4, 0..4)) {
        let idx: Vec<usize> = (0..x.len()).chain(dup.into_iter().map(|i| i % x.len())).collect();
        let p = PseudometricSpace::new("p", x.matrix().restrict(&idx), None).unwrap();
        let q = quotient(&p).unwrap();
        prop_assert_eq!(q.diameter(), p.diameter());
        prop_assert_eq!(q.len(), x.len());
        let again = quotient(&q.to_pseudometric()).unwrap();
        prop_assert_eq!(again.matrix(), q.matrix());
        prop_assert!(MergeClasses::of(q.matrix()).is_trivial());
    }

    #[test]
    fn edge_program_solution_is_feasible(a in space(3), b in space(3), c in space(3), seed in any::<u64>()) {
        let boundary = [a, b, c];
        let terminals: Vec<DistanceMatrix> = boundary.iter().map(|s| s.matrix().clone()).collect();
        let star = SteinerTopology::new(3, 1, vec![(0, 3), (1, 3), (2, 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slot = random_slot(&terminals, 4, 3.0, &mut rng);
        let corrs: Vec<Correspondence> = terminals
            .iter()
            .map(|t| optimal_correspondence(t, &slot).unwrap().0)
            .collect();
        let d_hat = 10.0;
        let sol = solve_edge_lengths(&star, &terminals, &[4], &corrs, d_hat).unwrap();
        let m = &sol.matrices[0];
        prop_assert!(m.violations(false).is_empty());
        prop_assert!(m.diameter() <= d_hat + EPS_FEAS);
        for (e, r) in corrs.iter().enumerate() {
            prop_assert!(distortion(r, &terminals[e], m) <= sol.slacks[e] + EPS_FEAS);
        }
        // the starting slot is feasible for the same correspondences
        let start: f64 = corrs.iter().zip(&terminals).map(|(r, t)| distortion(r, t, &slot)).sum::<f64>() / 2.0;
        prop_assert!(sol.objective <= start + 1e-9);
    }

    #[test]
    fn thread_restriction_never_lengthens(a in space(3), b in space(3), c in space(3), s in space(5)) {
        let mut vertices: Vec<TreeVertex> = [a, b, c]
            .into_iter()
            .map(|space| TreeVertex { kind: VertexKind::Terminal, space })
            .collect();
        vertices.push(TreeVertex { kind: VertexKind::Steiner, space: s });
        let tree = SteinerTree::with_exact_edges(vertices, &[(0, 3), (1, 3), (2, 3)], 1_000_000).unwrap();
        let restricted = restrict_to_threads(&tree).unwrap();
        for (old, new) in tree.edges.iter().zip(&restricted.edges) {
            prop_assert!(new.length <= old.length);
        }
        prop_assert!(restricted.vertices[3].space.len() <= tree.vertices[3].space.len());
        prop_assert!(restricted.vertices[3].space.len() <= 9);
    }

    #[test]
    fn canonical_form_ignores_steiner_labels(k in 4usize..=6, pick in any::<prop::sample::Index>()) {
        let all = enumerate_topologies(k, TopologyMode::Full, 7).unwrap();
        let t = &all[pick.index(all.len())];
        let s = t.steiner_count();
        // reverse the Steiner labels
        let relabel = |v: usize| if v < k { v } else { k + s - 1 - (v - k) };
        let edges = t.edges().iter().map(|&(u, v)| (relabel(u), relabel(v))).collect();
        let moved = SteinerTopology::new(k, s, edges).unwrap();
        prop_assert_eq!(canonical_form(&moved), canonical_form(t));
    }
}
