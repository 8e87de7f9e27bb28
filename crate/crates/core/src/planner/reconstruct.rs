use crate::galois::{complete_basis, FieldMatrix};
use crate::scheme::{validate_ordss, Scheme};

use super::{downstream_target, Endpoint, Hop, PlanError, ReconstructionPlan};

/// Optimal plan for the user attached to node `user`.
///
/// The `k` nodes `N_user, N_user+1, …, N_user+k−1` form a chain. The farthest
/// one sends the `γ` of its vectors that complete the nearer nodes' vectors to
/// a basis (lowest column first); every nearer node forwards what it got plus
/// all `α` of its own vectors. Hop `j` (counting from the user) carries
/// `M − jα` vectors.
pub fn plan_reconstruction(s: &Scheme, user: usize) -> Result<ReconstructionPlan, PlanError> {
    s.node_offsets(user)?;
    let report = validate_ordss(s);
    if !report.is_ordss() {
        return Err(PlanError::NotOrdss(report));
    }
    let p = s.params();
    let k = p.k();
    let chain: Vec<usize> = (0..k).map(|j| p.upstream(user, j)).collect();
    let farthest = chain[k - 1];

    let nearer = FieldMatrix::from_columns(s.order(), p.m_size(), &s.window_vectors(user, k - 1)?)?;
    let own = s.node_matrix(farthest)?;
    let picks = complete_basis(&nearer, &own, p.m_size())?;
    let mut payload: Vec<Vec<u32>> = picks.iter().map(|&c| own.column(c - 1)).collect();

    let mut hops = Vec::with_capacity(k);
    hops.push(Hop {
        from: Endpoint::Node(farthest),
        to: downstream_target(Endpoint::User(user), &chain, k - 1),
        vectors: payload.clone(),
    });
    for j in (0..k - 1).rev() {
        payload.extend(s.node_vectors(chain[j])?);
        hops.push(Hop {
            from: Endpoint::Node(chain[j]),
            to: downstream_target(Endpoint::User(user), &chain, j),
            vectors: payload.clone(),
        });
    }
    Ok(ReconstructionPlan {
        user,
        order: s.order(),
        m_size: p.m_size(),
        hops,
    })
}
