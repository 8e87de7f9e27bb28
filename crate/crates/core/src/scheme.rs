//! Storage schemes on a ring of `n` nodes holding `alpha` symbols each.
//!
//! A [`Scheme`] is an `M × nα` generator matrix over `GF(q)`; node `i`
//! (1-based) owns columns `(i−1)α+1 ..= iα` and stores `X · column` for each
//! of them. Both constructions here produce schemes that reach the
//! reconstruction bound for every user.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edmatrix::ed_matrix;
use crate::galois::{FieldElement, FieldMatrix, FieldOrder, GaloisError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("n, alpha and M must all be at least 1")]
    ZeroParameter,
    #[error("infeasible: n*alpha < M ({n}*{alpha} < {m_size})")]
    NotStorable { n: usize, alpha: usize, m_size: usize },
    #[error("infeasible: k = ceil(M/alpha) = {k} exceeds n = {n}")]
    TooFewNodes { k: usize, n: usize },
    #[error("generator is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    GeneratorShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("generator over GF({found}) but parameters declare GF({declared})")]
    FieldMismatch { found: u32, declared: u32 },
    #[error("generator has rank {rank}, expected full row rank {m_size}")]
    RankDeficient { rank: usize, m_size: usize },
    #[error("node index {index} is outside 1..={n}")]
    NodeIndex { index: usize, n: usize },
    #[error("data vector has length {found}, expected {expected}")]
    DataLength { found: usize, expected: usize },
    #[error("malformed scheme file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] GaloisError),
}

/// `(n, α, M)` over `GF(q)`, with `k = ⌈M/α⌉` and `γ = M − (k−1)α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    n: usize,
    alpha: usize,
    m_size: usize,
    q: FieldOrder,
}

impl RingParams {
    pub fn new(n: usize, alpha: usize, m_size: usize, q: FieldOrder) -> Result<Self, SchemeError> {
        if n == 0 || alpha == 0 || m_size == 0 {
            return Err(SchemeError::ZeroParameter);
        }
        if n * alpha < m_size {
            return Err(SchemeError::NotStorable { n, alpha, m_size });
        }
        let k = m_size.div_ceil(alpha);
        if k > n {
            return Err(SchemeError::TooFewNodes { k, n });
        }
        Ok(RingParams { n, alpha, m_size, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn m_size(&self) -> usize {
        self.m_size
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    /// Number of adjacent nodes a user has to draw on.
    pub fn k(&self) -> usize {
        self.m_size.div_ceil(self.alpha)
    }

    /// What the farthest of the `k` nodes contributes.
    pub fn gamma(&self) -> usize {
        self.m_size - (self.k() - 1) * self.alpha
    }

    /// The node `steps` hops upstream of `node`, wrapping around the ring.
    pub fn upstream(&self, node: usize, steps: usize) -> usize {
        (node - 1 + steps) % self.n + 1
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, alpha={}, M={}) over {}",
            self.n, self.alpha, self.m_size, self.q
        )
    }
}

/// Minimum symbols any user must receive to rebuild the data: `kM − k(k−1)α/2`.
pub fn reconstruct_bound(params: &RingParams) -> usize {
    let k = params.k();
    k * params.m_size - k * (k - 1) * params.alpha / 2
}

/// Minimum symbols needed to repair one node of an optimal scheme: `M`.
pub fn repair_bound(params: &RingParams) -> usize {
    params.m_size
}

/// Original data `X = [x₁, …, x_M]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataVector {
    order: FieldOrder,
    coords: Vec<u32>,
}

impl DataVector {
    pub fn new(order: FieldOrder, coords: Vec<u32>) -> Result<Self, SchemeError> {
        for &v in &coords {
            order.element(v)?;
        }
        Ok(DataVector { order, coords })
    }

    /// Uniformly random data drawn from `rng`.
    pub fn random<R: rand::Rng + ?Sized>(order: FieldOrder, len: usize, rng: &mut R) -> Self {
        let coords = (0..len).map(|_| rng.random_range(0..order.q())).collect();
        DataVector { order, coords }
    }

    pub fn order(&self) -> FieldOrder {
        self.order
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    params: RingParams,
    generator: FieldMatrix,
}

impl Scheme {
    /// Wraps a generator matrix; it must be `M × nα` over `GF(q)` and of full row rank.
    pub fn new(params: RingParams, generator: FieldMatrix) -> Result<Self, SchemeError> {
        let (expected_rows, expected_cols) = (params.m_size, params.n * params.alpha);
        if generator.rows() != expected_rows || generator.cols() != expected_cols {
            return Err(SchemeError::GeneratorShape {
                rows: generator.rows(),
                cols: generator.cols(),
                expected_rows,
                expected_cols,
            });
        }
        if generator.order() != params.q {
            return Err(SchemeError::FieldMismatch {
                found: generator.order().q(),
                declared: params.q.q(),
            });
        }
        let rank = generator.rank();
        if rank != params.m_size {
            return Err(SchemeError::RankDeficient {
                rank,
                m_size: params.m_size,
            });
        }
        Ok(Scheme { params, generator })
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn order(&self) -> FieldOrder {
        self.params.q
    }

    fn check_node(&self, index: usize) -> Result<(), SchemeError> {
        if index == 0 || index > self.params.n {
            Err(SchemeError::NodeIndex {
                index,
                n: self.params.n,
            })
        } else {
            Ok(())
        }
    }

    /// 0-based generator column offsets owned by node `index`.
    pub fn node_offsets(&self, index: usize) -> Result<std::ops::Range<usize>, SchemeError> {
        self.check_node(index)?;
        let a = self.params.alpha;
        Ok((index - 1) * a..index * a)
    }

    /// The `M × α` node generator matrix of node `index`.
    pub fn node_matrix(&self, index: usize) -> Result<FieldMatrix, SchemeError> {
        let offs: Vec<usize> = self.node_offsets(index)?.collect();
        Ok(self.generator.select_columns(&offs))
    }

    /// Node vectors of node `index`, in column order.
    pub fn node_vectors(&self, index: usize) -> Result<Vec<Vec<u32>>, SchemeError> {
        Ok(self.node_offsets(index)?.map(|c| self.generator.column(c)).collect())
    }

    /// Node vectors of `count` adjacent nodes starting at `start` and moving upstream.
    pub fn window_vectors(&self, start: usize, count: usize) -> Result<Vec<Vec<u32>>, SchemeError> {
        self.check_node(start)?;
        let mut out = Vec::with_capacity(count * self.params.alpha);
        for step in 0..count {
            out.extend(self.node_vectors(self.params.upstream(start, step))?);
        }
        Ok(out)
    }

    pub fn window_matrix(&self, start: usize, count: usize) -> Result<FieldMatrix, SchemeError> {
        let cols = self.window_vectors(start, count)?;
        Ok(FieldMatrix::from_columns(self.order(), self.params.m_size, &cols)?)
    }

    fn check_data(&self, x: &DataVector) -> Result<(), SchemeError> {
        if x.order() != self.order() {
            return Err(GaloisError::OrderMismatch {
                left: x.order().q(),
                right: self.order().q(),
            }
            .into());
        }
        if x.len() != self.params.m_size {
            return Err(SchemeError::DataLength {
                found: x.len(),
                expected: self.params.m_size,
            });
        }
        Ok(())
    }

    /// Raw symbol values stored on node `index` for data `x`.
    pub fn node_values(&self, x: &DataVector, index: usize) -> Result<Vec<u32>, SchemeError> {
        self.check_data(x)?;
        Ok(self.node_matrix(index)?.left_mul_vec(x.coords())?)
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            q: self.params.q.q(),
            n: self.params.n,
            alpha: self.params.alpha,
            m_size: self.params.m_size,
            generator: self.generator.to_rows(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, SchemeError> {
        let file: SchemeFile = serde_json::from_str(text).map_err(|e| SchemeError::Malformed(e.to_string()))?;
        file.into_scheme()
    }
}

/// The symbols node `index` stores for data `x`.
pub fn node_symbols(s: &Scheme, x: &DataVector, index: usize) -> Result<Vec<FieldElement>, SchemeError> {
    let order = s.order();
    Ok(s.node_values(x, index)?
        .into_iter()
        .map(|v| order.element(v).expect("products stay in the field"))
        .collect())
}

/// On-disk form of a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub q: u32,
    pub n: usize,
    pub alpha: usize,
    pub m_size: usize,
    pub generator: Vec<Vec<u32>>,
}

impl SchemeFile {
    /// Compact JSON followed by a newline; stable for identical schemes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("scheme file serializes");
        s.push('\n');
        s
    }

    pub fn into_scheme(self) -> Result<Scheme, SchemeError> {
        let q = FieldOrder::new(self.q)?;
        let params = RingParams::new(self.n, self.alpha, self.m_size, q)?;
        if self.generator.len() != self.m_size {
            return Err(SchemeError::GeneratorShape {
                rows: self.generator.len(),
                cols: self.generator.first().map_or(0, Vec::len),
                expected_rows: self.m_size,
                expected_cols: self.n * self.alpha,
            });
        }
        let generator = FieldMatrix::from_rows(q, &self.generator)?;
        Scheme::new(params, generator)
    }
}

/// GF(2) scheme whose generator is the `M × nα` ED-matrix, split contiguously.
pub fn build_ed_scheme(n: usize, alpha: usize, m_size: usize) -> Result<Scheme, SchemeError> {
    let params = RingParams::new(n, alpha, m_size, FieldOrder::GF2)?;
    let ed = ed_matrix(m_size, n * alpha).expect("feasible parameters give n*alpha >= M >= 1");
    Scheme::new(params, ed.into_matrix())
}

/// Vandermonde scheme over the smallest prime field with at least `nα`
/// elements, evaluated at points `0, 1, …, nα−1`. Any `M` columns are independent.
pub fn build_mds_scheme(n: usize, alpha: usize, m_size: usize) -> Result<Scheme, SchemeError> {
    let order = FieldOrder::smallest_prime_at_least((n * alpha) as u32);
    let params = RingParams::new(n, alpha, m_size, order)?;
    let points = n * alpha;
    let rows: Vec<Vec<u32>> = (0..m_size)
        .map(|power| (0..points).map(|x| order.pow(x as u32, power as u64)).collect())
        .collect();
    let generator = FieldMatrix::from_rows(order, &rows)?;
    Scheme::new(params, generator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Ed,
    Mds,
}

pub fn build_scheme(construction: Construction, n: usize, alpha: usize, m_size: usize) -> Result<Scheme, SchemeError> {
    match construction {
        Construction::Ed => build_ed_scheme(n, alpha, m_size),
        Construction::Mds => build_mds_scheme(n, alpha, m_size),
    }
}

/// Result of checking the two window conditions that characterize optimal schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdssReport {
    /// Every `k−1` adjacent nodes hold `(k−1)α` independent vectors.
    pub condition_i_ok: bool,
    /// Every `k` adjacent nodes hold `M` independent vectors.
    pub condition_ii_ok: bool,
    /// Lowest starting node of a window that violates either condition.
    pub failing_window: Option<usize>,
}

impl OrdssReport {
    pub fn is_ordss(&self) -> bool {
        self.condition_i_ok && self.condition_ii_ok
    }
}

impl fmt::Display for OrdssReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ordss() {
            return write!(f, "ORDSS: yes");
        }
        write!(f, "ORDSS: no (")?;
        let mut failed = Vec::new();
        if !self.condition_i_ok {
            failed.push("condition (i)");
        }
        if !self.condition_ii_ok {
            failed.push("condition (ii)");
        }
        write!(f, "{} failed", failed.join(" and "))?;
        if let Some(w) = self.failing_window {
            write!(f, "; first failing window starts at node {w}")?;
        }
        write!(f, ")")
    }
}

pub fn validate_ordss(s: &Scheme) -> OrdssReport {
    let p = s.params();
    let (k, alpha, m) = (p.k(), p.alpha(), p.m_size());
    let mut report = OrdssReport {
        condition_i_ok: true,
        condition_ii_ok: true,
        failing_window: None,
    };
    for start in 1..=p.n() {
        let i_ok = k == 1 || s.window_matrix(start, k - 1).expect("start is a node").rank() == (k - 1) * alpha;
        let ii_ok = s.window_matrix(start, k).expect("start is a node").rank() == m;
        report.condition_i_ok &= i_ok;
        report.condition_ii_ok &= ii_ok;
        if (!i_ok || !ii_ok) && report.failing_window.is_none() {
            report.failing_window = Some(start);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2(n: usize, alpha: usize, m: usize) -> RingParams {
        RingParams::new(n, alpha, m, FieldOrder::GF2).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p = gf2(4, 2, 5);
        assert_eq!((p.k(), p.gamma()), (3, 1));
        let p = gf2(3, 4, 8);
        assert_eq!((p.k(), p.gamma()), (2, 4));
        assert_eq!(p.upstream(3, 1), 1);
        assert_eq!(p.upstream(2, 5), 1);
    }

    #[test]
    fn param_errors() {
        assert_eq!(
            RingParams::new(2, 2, 5, FieldOrder::GF2),
            Err(SchemeError::NotStorable {
                n: 2,
                alpha: 2,
                m_size: 5
            })
        );
        assert_eq!(
            RingParams::new(0, 2, 5, FieldOrder::GF2),
            Err(SchemeError::ZeroParameter)
        );
    }

    #[test]
    fn bound_examples() {
        assert_eq!(reconstruct_bound(&gf2(5, 2, 5)), 9);
        assert_eq!(reconstruct_bound(&gf2(4, 2, 5)), 9);
        assert_eq!(reconstruct_bound(&gf2(1, 7, 4)), 4);
        assert_eq!(reconstruct_bound(&gf2(3, 1, 3)), 6);
        assert_eq!(repair_bound(&gf2(4, 2, 5)), 5);
        assert_eq!(repair_bound(&gf2(5, 2, 5)), 5);
        assert_eq!(repair_bound(&gf2(2, 6, 4)), 4);
    }

    #[test]
    fn bound_formula_matches_sum_of_cut_terms() {
        for alpha in 1..=6 {
            for m in 1usize..=30 {
                let n = m.div_ceil(alpha);
                let p = gf2(n, alpha, m);
                let by_sum: usize = (0..p.k()).map(|j| m - j * alpha).sum();
                assert_eq!(reconstruct_bound(&p), by_sum);
            }
        }
    }

    #[test]
    fn bound_is_monotone_in_alpha() {
        for m in 1..=24 {
            let mut last = usize::MAX;
            for alpha in 1..=m + 2 {
                let b = reconstruct_bound(&gf2(m, alpha, m));
                assert!(b <= last);
                last = b;
            }
            assert_eq!(last, m);
        }
    }

    #[test]
    fn ed_example_node_contents() {
        let s = build_ed_scheme(4, 2, 5).unwrap();
        let e = |bits: &[usize]| {
            let mut v = vec![0u32; 5];
            for &b in bits {
                v[b - 1] = 1;
            }
            v
        };
        assert_eq!(s.node_vectors(1).unwrap(), vec![e(&[1]), e(&[2])]);
        assert_eq!(s.node_vectors(2).unwrap(), vec![e(&[3]), e(&[4])]);
        assert_eq!(s.node_vectors(3).unwrap(), vec![e(&[5]), e(&[1, 4])]);
        assert_eq!(s.node_vectors(4).unwrap(), vec![e(&[2, 5]), e(&[3, 4, 5])]);
    }

    #[test]
    fn ed_five_nodes_is_doubled_identity() {
        let s = build_ed_scheme(5, 2, 5).unwrap();
        let i5 = FieldMatrix::identity(FieldOrder::GF2, 5);
        assert_eq!(s.generator(), &i5.hstack(&i5).unwrap());
        let n3 = s.node_vectors(3).unwrap();
        assert_eq!(n3, vec![vec![0, 0, 0, 0, 1], vec![1, 0, 0, 0, 0]]);
    }

    #[test]
    fn infeasible_builds() {
        assert!(matches!(build_ed_scheme(2, 2, 5), Err(SchemeError::NotStorable { .. })));
        assert!(matches!(
            build_mds_scheme(2, 2, 5),
            Err(SchemeError::NotStorable { .. })
        ));
    }

    #[test]
    fn mds_small_instance() {
        let s = build_mds_scheme(2, 2, 3).unwrap();
        assert_eq!(s.order().q(), 5);
        assert_eq!(
            s.generator().to_rows(),
            vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3], vec![0, 1, 4, 4]]
        );
        for skip in 0..4 {
            let offs: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            assert_eq!(s.generator().select_columns(&offs).rank(), 3);
        }
    }

    #[test]
    fn mds_single_node() {
        let s = build_mds_scheme(1, 4, 4).unwrap();
        assert_eq!(s.generator().rank(), 4);
        assert!(validate_ordss(&s).is_ordss());
    }

    #[test]
    fn validate_examples() {
        assert!(validate_ordss(&build_ed_scheme(4, 2, 5).unwrap()).is_ordss());
        assert!(validate_ordss(&build_ed_scheme(5, 2, 5).unwrap()).is_ordss());

        // node 1 = {e1, e1}, node 2 = {e2, e3}, node 3 = {e4, e1}
        let g = FieldMatrix::from_columns(
            FieldOrder::GF2,
            4,
            &[
                vec![1, 0, 0, 0],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 0, 0, 0],
            ],
        )
        .unwrap();
        let s = Scheme::new(gf2(3, 2, 4), g).unwrap();
        let r = validate_ordss(&s);
        assert!(!r.condition_i_ok);
        assert_eq!(r.failing_window, Some(1));
        assert!(!r.is_ordss());
        assert!(r.to_string().starts_with("ORDSS: no (condition (i)"));
    }

    #[test]
    fn node_symbols_of_example() {
        let s = build_ed_scheme(4, 2, 5).unwrap();
        // x = (x1..x5) = (1,0,1,1,0): x2+x5 = 0, x3+x4+x5 = 0
        let x = DataVector::new(FieldOrder::GF2, vec![1, 0, 1, 1, 0]).unwrap();
        let n4: Vec<u32> = node_symbols(&s, &x, 4).unwrap().iter().map(|e| e.value()).collect();
        assert_eq!(n4, vec![0, 0]);
        let x = DataVector::new(FieldOrder::GF2, vec![0, 1, 1, 0, 0]).unwrap();
        assert_eq!(s.node_values(&x, 4).unwrap(), vec![1, 1]);
        assert_eq!(s.node_values(&x, 1).unwrap(), vec![0, 1]);

        let short = DataVector::new(FieldOrder::GF2, vec![1, 0]).unwrap();
        assert_eq!(
            node_symbols(&s, &short, 1),
            Err(SchemeError::DataLength { found: 2, expected: 5 })
        );
        assert_eq!(node_symbols(&s, &x, 5), Err(SchemeError::NodeIndex { index: 5, n: 4 }));
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let s = build_ed_scheme(4, 2, 5).unwrap();
        let text = s.to_json();
        assert!(text.starts_with(r#"{"q":2,"n":4,"alpha":2,"m_size":5,"generator":[[1,0,0,0,0,1,0,0],"#));
        let back = Scheme::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(matches!(Scheme::from_json("{"), Err(SchemeError::Malformed(_))));
        let bad_q = r#"{"q":4,"n":1,"alpha":1,"m_size":1,"generator":[[1]]}"#;
        assert_eq!(
            Scheme::from_json(bad_q),
            Err(SchemeError::Field(GaloisError::NotPrime(4)))
        );
        let out_of_field = r#"{"q":2,"n":1,"alpha":1,"m_size":1,"generator":[[2]]}"#;
        assert!(matches!(
            Scheme::from_json(out_of_field),
            Err(SchemeError::Field(GaloisError::ValueOutOfRange { .. }))
        ));
        let deficient = r#"{"q":2,"n":2,"alpha":1,"m_size":2,"generator":[[1,1],[1,1]]}"#;
        assert_eq!(
            Scheme::from_json(deficient),
            Err(SchemeError::RankDeficient { rank: 1, m_size: 2 })
        );
    }
}
