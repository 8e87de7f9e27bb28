//! Cross-checks against brute-force computations that share no code with the
//! library's elimination routines.

use ringstore::edmatrix::{ed_matrix, euclid_chain};
use ringstore::galois::{decompose_over, FieldMatrix, FieldOrder};
use ringstore::planner::{build_flow_graph, flow_mincut, plan_greedy, plan_reconstruction, FlowNode};
use ringstore::scheme::{build_ed_scheme, build_mds_scheme, Scheme};

/// Every vector in `GF(q)^len`, in lexicographic order.
fn all_vectors(q: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Rank as `log_q` of the number of distinct linear combinations of the columns.
fn span_count_rank(q: u32, columns: &[Vec<u32>], len: usize) -> usize {
    let mut seen = std::collections::HashSet::new();
    for coeffs in all_vectors(q, columns.len()) {
        let mut acc = vec![0u32; len];
        for (c, col) in coeffs.iter().zip(columns) {
            for (a, x) in acc.iter_mut().zip(col) {
                *a = (*a + c * x) % q;
            }
        }
        seen.insert(acc);
    }
    let mut size = seen.len();
    let mut rank = 0;
    while size > 1 {
        assert_eq!(size % q as usize, 0);
        size /= q as usize;
        rank += 1;
    }
    rank
}

fn det_cofactor(m: &[Vec<i64>], q: i64) -> i64 {
    if m.len() == 1 {
        return m[0][0].rem_euclid(q);
    }
    let mut total = 0;
    for j in 0..m.len() {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det_cofactor(&minor, q);
    }
    total.rem_euclid(q)
}

#[test]
fn gf5_inverses_match_exhaustive_search() {
    let f = FieldOrder::new(5).unwrap();
    for a in 1..5u32 {
        let found = (1..5u32).find(|b| a * b % 5 == 1).unwrap();
        assert_eq!(f.inv(a), Some(found));
    }
    assert_eq!(f.inv(0), None);
}

#[test]
fn gf11_products_match_integer_reduction() {
    let f = FieldOrder::new(11).unwrap();
    for a in 0..11u32 {
        for b in 0..11u32 {
            assert_eq!(f.mul(a, b), (a * b) % 11);
            assert_eq!(f.add(a, b), (a + b) % 11);
            assert_eq!(f.sub(a, b), (a + 11 - b) % 11);
        }
    }
}

#[test]
fn rank_agrees_with_span_count_over_small_fields() {
    for q in [2u32, 3] {
        let f = FieldOrder::new(q).unwrap();
        // All 3x3 matrices over GF(2), and a strided sample over GF(3).
        let entries = all_vectors(q, 9);
        let step = if q == 2 { 1 } else { 37 };
        for e in entries.iter().step_by(step) {
            let rows: Vec<Vec<u32>> = e.chunks(3).map(<[u32]>::to_vec).collect();
            let m = FieldMatrix::from_rows(f, &rows).unwrap();
            let cols: Vec<Vec<u32>> = m.columns().collect();
            assert_eq!(m.rank(), span_count_rank(q, &cols, 3), "{rows:?}");
        }
    }
}

#[test]
fn mds_windows_have_nonzero_cofactor_determinants() {
    // (n, alpha, M) = (2, 2, 3): q = 5, every 3 columns of the 3x4 generator.
    let s = build_mds_scheme(2, 2, 3).unwrap();
    assert_eq!(s.order().q(), 5);
    let g = s.generator();
    for a in 0..4 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                let sub: Vec<Vec<i64>> = (0..3)
                    .map(|r| [a, b, c].iter().map(|&j| g.get(r, j) as i64).collect())
                    .collect();
                assert_ne!(det_cofactor(&sub, 5), 0, "columns {a},{b},{c}");
            }
        }
    }
}

/// Minimum over all source-side sets of the total capacity leaving that set.
fn brute_force_cut(g: &ringstore::planner::FlowGraph, src: FlowNode, dst: FlowNode) -> u64 {
    let graph = g.graph();
    let nodes: Vec<_> = graph.node_indices().collect();
    let s = g.node(src).unwrap();
    let t = g.node(dst).unwrap();
    let free: Vec<_> = nodes.iter().copied().filter(|&v| v != s && v != t).collect();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << free.len()) {
        let inside = |v| v == s || free.iter().position(|&u| u == v).is_some_and(|i| mask >> i & 1 == 1);
        let cut: u64 = graph
            .edge_indices()
            .filter_map(|e| {
                let (a, b) = graph.edge_endpoints(e).unwrap();
                (inside(a) && !inside(b)).then(|| graph[e])
            })
            .sum();
        best = best.min(cut);
    }
    best
}

#[test]
fn flow_mincut_matches_cut_enumeration() {
    let schemes: Vec<Scheme> = vec![
        build_ed_scheme(4, 2, 5).unwrap(),
        build_ed_scheme(5, 2, 5).unwrap(),
        build_ed_scheme(3, 3, 7).unwrap(),
        build_mds_scheme(4, 2, 6).unwrap(),
        build_ed_scheme(6, 1, 4).unwrap(),
    ];
    for s in &schemes {
        for user in 1..=s.params().n() {
            for plan in [plan_reconstruction(s, user).unwrap(), plan_greedy(s, user).unwrap()] {
                let g = build_flow_graph(s.params(), &plan);
                let (src, dst) = (FlowNode::Source, FlowNode::User(user));
                assert_eq!(flow_mincut(&g, src, dst), brute_force_cut(&g, src, dst));
                for &e in g.chain_edges() {
                    let mut h = g.clone();
                    h.set_capacity(e, g.capacity(e).saturating_sub(1));
                    assert_eq!(flow_mincut(&h, src, dst), brute_force_cut(&h, src, dst));
                }
            }
        }
    }
}

#[test]
fn decomposition_matches_exhaustive_search_over_gf2() {
    let f = FieldOrder::GF2;
    let u = FieldMatrix::from_columns(f, 4, &[vec![1, 0, 0, 1], vec![0, 1, 0, 1]]).unwrap();
    let w = FieldMatrix::from_columns(f, 4, &[vec![0, 0, 1, 0], vec![1, 1, 1, 1]]).unwrap();
    let combine = |cu: &[u32], cw: &[u32]| -> Vec<u32> {
        (0..4)
            .map(|r| (cu[0] * u.get(r, 0) + cu[1] * u.get(r, 1) + cw[0] * w.get(r, 0) + cw[1] * w.get(r, 1)) % 2)
            .collect()
    };
    for v in all_vectors(2, 4) {
        let reachable = all_vectors(2, 4).iter().any(|c| combine(&c[..2], &c[2..]) == v);
        match decompose_over(&v, &u, &w) {
            Ok(d) => {
                assert!(reachable);
                assert_eq!(combine(&d.u_coeffs, &d.w_coeffs), v);
            }
            Err(_) => assert!(!reachable, "{v:?} is reachable but was rejected"),
        }
    }
}

#[test]
fn euclid_chain_matches_hand_division() {
    for n in 1..=40usize {
        for m0 in 1..=n {
            let chain = euclid_chain(n, m0).unwrap();
            let (mut a, mut b) = (n, m0);
            let (mut quotients, mut remainders) = (vec![], vec![]);
            while b != 0 {
                quotients.push(a / b);
                if a % b != 0 {
                    remainders.push(a % b);
                }
                (a, b) = (b, a % b);
            }
            assert_eq!(chain.quotients, quotients, "({n},{m0})");
            assert_eq!(chain.remainders, remainders, "({n},{m0})");
            assert_eq!(chain.gcd(), a);
        }
    }
}

#[test]
fn ed_matrix_columns_are_binary_with_leading_identity() {
    // Each ED(m0, n) column is a nonzero 0/1 vector; the first m0 columns form I.
    for n in 1..=20 {
        for m0 in 1..=n {
            let m = ed_matrix(m0, n).unwrap().into_matrix();
            for c in 0..n {
                let col = m.column(c);
                assert!(col.iter().all(|&x| x <= 1) && col.contains(&1));
            }
            for i in 0..m0 {
                for j in 0..m0 {
                    assert_eq!(m.get(i, j), u32::from(i == j));
                }
            }
        }
    }
}
