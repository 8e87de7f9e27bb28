use crate::galois::{complete_basis, decompose_over, solve, FieldMatrix, SpanTracker};
use crate::scheme::{validate_ordss, Scheme};

use super::{Endpoint, Hop, PlanError, RepairPlan};

/// Exact-repair plan for node `failed` using `M` transmitted symbols.
///
/// Helpers are the `k` nodes upstream of the failed one. Let `U` be the span
/// of the `k−1` nearest helpers' vectors and `T` the failed node's vectors.
/// `T` is first rewritten as `T·A` so that only `γ` of its columns leave `U`
/// (the rest fall inside `U`). Each of those `γ` columns is split into a part
/// in `U` and a part spanned by the farthest helper, which sends its `γ`
/// parts. Every nearer helper adds its own share of all `α` columns and
/// forwards `α` partial sums. The newcomer receives `T·A` and multiplies by
/// `A⁻¹`.
///
/// With `k = 1` the nearest helper alone spans the whole space: it sends `M`
/// independent vectors and the newcomer recomputes its symbols from them.
pub fn plan_repair(s: &Scheme, failed: usize) -> Result<RepairPlan, PlanError> {
    s.node_offsets(failed)?;
    let p = s.params();
    let (n, k, alpha, m) = (p.n(), p.k(), p.alpha(), p.m_size());
    if k + 1 > n {
        return Err(PlanError::TooFewHelpers { k, n });
    }
    let report = validate_ordss(s);
    if !report.is_ordss() {
        return Err(PlanError::NotOrdss(report));
    }
    let f = s.order();
    let target = s.node_matrix(failed)?;

    if k == 1 {
        let helper = p.upstream(failed, 1);
        let own = s.node_matrix(helper)?;
        let picks = complete_basis(&FieldMatrix::zeros(f, m, 0), &own, m)?;
        let sent: Vec<Vec<u32>> = picks.iter().map(|&c| own.column(c - 1)).collect();
        let received = FieldMatrix::from_columns(f, m, &sent)?;
        let decoding = solve(&received, &target)?.expect("helper vectors span the space");
        return Ok(RepairPlan {
            failed,
            order: f,
            m_size: m,
            hops: vec![Hop {
                from: Endpoint::Node(helper),
                to: Endpoint::Substitute(failed),
                vectors: sent,
            }],
            basis_change: FieldMatrix::identity(f, alpha),
            decoding,
        });
    }

    // helpers[0] is adjacent to the failed node, helpers[k-1] is the farthest.
    let helpers: Vec<usize> = (1..=k).map(|j| p.upstream(failed, j)).collect();
    let near = FieldMatrix::from_columns(f, m, &s.window_vectors(helpers[0], k - 1)?)?;
    let far = s.node_matrix(helpers[k - 1])?;

    // Target columns independent modulo U, lowest index first.
    let mut quotient = SpanTracker::new(f, m);
    for col in near.columns() {
        quotient.insert(&col);
    }
    let leaving: Vec<usize> = (0..alpha).filter(|&j| quotient.insert(&target.column(j))).collect();
    debug_assert_eq!(leaving.len(), p.gamma());

    // A = I except column j (for j staying) which subtracts the leaving
    // columns needed to push T_j into U.
    let mut basis_change = FieldMatrix::identity(f, alpha);
    let leaving_block = target.select_columns(&leaving).hstack(&near)?;
    for j in (0..alpha).filter(|j| !leaving.contains(j)) {
        let rhs = target.select_columns(&[j]);
        let c = solve(&leaving_block, &rhs)?.expect("leaving columns and U span the target");
        for (row, &l) in leaving.iter().enumerate() {
            basis_change.set(l, j, f.neg(c.get(row, 0)))?;
        }
    }
    let transformed = target.mul(&basis_change)?;

    // Per transformed column: coefficients on U (near) and on the farthest helper.
    let mut near_coeffs = Vec::with_capacity(alpha);
    let mut far_parts = Vec::with_capacity(leaving.len());
    for j in 0..alpha {
        let t = transformed.column(j);
        if leaving.contains(&j) {
            let d = decompose_over(&t, &near, &far)?;
            let w = FieldMatrix::from_columns(f, alpha, &[d.w_coeffs])?;
            far_parts.push(far.mul(&w)?.column(0));
            near_coeffs.push(d.u_coeffs);
        } else {
            let rhs = transformed.select_columns(&[j]);
            let c = solve(&near, &rhs)?.expect("staying column lies in U");
            near_coeffs.push(c.column(0));
        }
    }

    let mut hops = Vec::with_capacity(k);
    hops.push(Hop {
        from: Endpoint::Node(helpers[k - 1]),
        to: Endpoint::Node(helpers[k - 2]),
        vectors: far_parts.clone(),
    });
    let mut partial: Vec<Vec<u32>> = (0..alpha)
        .map(|j| match leaving.iter().position(|&l| l == j) {
            Some(pos) => far_parts[pos].clone(),
            None => vec![0; m],
        })
        .collect();
    for h in (0..k - 1).rev() {
        let own = s.node_matrix(helpers[h])?;
        for (j, sum) in partial.iter_mut().enumerate() {
            let share = &near_coeffs[j][h * alpha..(h + 1) * alpha];
            let w = FieldMatrix::from_columns(f, alpha, &[share.to_vec()])?;
            let contribution = own.mul(&w)?.column(0);
            for (x, y) in sum.iter_mut().zip(contribution) {
                *x = f.add(*x, y);
            }
        }
        let to = if h == 0 {
            Endpoint::Substitute(failed)
        } else {
            Endpoint::Node(helpers[h - 1])
        };
        hops.push(Hop {
            from: Endpoint::Node(helpers[h]),
            to,
            vectors: partial.clone(),
        });
    }
    debug_assert_eq!(FieldMatrix::from_columns(f, m, &partial)?, transformed);

    let decoding = basis_change.inverse().expect("basis change is unipotent");
    Ok(RepairPlan {
        failed,
        order: f,
        m_size: m,
        hops,
        basis_change,
        decoding,
    })
}
