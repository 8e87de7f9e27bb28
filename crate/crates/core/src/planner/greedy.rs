use crate::galois::SpanTracker;
use crate::scheme::Scheme;

use super::{downstream_target, Endpoint, Hop, PlanError, ReconstructionPlan};

/// Reconstruction plan for any full-rank scheme.
///
/// Walks upstream from the user's node, keeping from each node only the
/// columns that raise the running rank. Each node forwards what it received
/// plus its kept columns, so the hop leaving the `j`-th nearest node carries
/// `M − r_j` vectors, where `r_j` is the rank of the `j` nearest nodes.
pub fn plan_greedy(s: &Scheme, user: usize) -> Result<ReconstructionPlan, PlanError> {
    s.node_offsets(user)?;
    let p = s.params();
    let m = p.m_size();
    let mut span = SpanTracker::new(s.order(), m);
    let mut chain = Vec::new();
    let mut kept: Vec<Vec<Vec<u32>>> = Vec::new();
    while span.rank() < m && chain.len() < p.n() {
        let node = p.upstream(user, chain.len());
        let innovative = s
            .node_vectors(node)?
            .into_iter()
            .filter(|v| span.rank() < m && span.insert(v))
            .collect();
        chain.push(node);
        kept.push(innovative);
    }
    if span.rank() < m {
        return Err(PlanError::RankDeficient {
            rank: span.rank(),
            m_size: m,
        });
    }

    let mut payload = Vec::new();
    let mut hops = Vec::with_capacity(chain.len());
    for j in (0..chain.len()).rev() {
        payload.extend(kept[j].iter().cloned());
        hops.push(Hop {
            from: Endpoint::Node(chain[j]),
            to: downstream_target(Endpoint::User(user), &chain, j),
            vectors: payload.clone(),
        });
    }
    Ok(ReconstructionPlan {
        user,
        order: s.order(),
        m_size: m,
        hops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{FieldMatrix, FieldOrder};
    use crate::planner::plan_reconstruction;
    use crate::scheme::{build_ed_scheme, RingParams};

    fn scheme(n: usize, alpha: usize, m: usize, cols: &[Vec<u32>]) -> Scheme {
        let params = RingParams::new(n, alpha, m, FieldOrder::GF2).unwrap();
        Scheme::new(params, FieldMatrix::from_columns(FieldOrder::GF2, m, cols).unwrap()).unwrap()
    }

    #[test]
    fn matches_optimal_on_ed_example() {
        let s = build_ed_scheme(4, 2, 5).unwrap();
        for user in 1..=4 {
            let g = plan_greedy(&s, user).unwrap();
            assert_eq!(g.total_bandwidth(), 9);
            assert_eq!(g, plan_reconstruction(&s, user).unwrap());
        }
    }

    #[test]
    fn own_node_suffices() {
        let s = scheme(2, 2, 2, &[vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]);
        let g = plan_greedy(&s, 1).unwrap();
        assert_eq!(g.total_bandwidth(), 2);
        assert_eq!(g.hops.len(), 1);
    }

    #[test]
    fn overlapping_nodes_cost_more_than_bound() {
        // {e1,e2}, {e1,e3}, {e4,e1}
        let e = |i: usize| {
            let mut v = vec![0; 4];
            v[i - 1] = 1;
            v
        };
        let s = scheme(3, 2, 4, &[e(1), e(2), e(1), e(3), e(4), e(1)]);
        let g = plan_greedy(&s, 1).unwrap();
        assert_eq!(g.payload_sizes(), vec![1, 2, 4]);
        assert_eq!(g.total_bandwidth(), 7);
        assert_eq!(crate::scheme::reconstruct_bound(s.params()), 6);
    }
}
