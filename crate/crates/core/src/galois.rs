//! Arithmetic over prime fields and the dense linear algebra built on it.
//!
//! Everything in the crate funnels through [`FieldMatrix`]: generator
//! matrices, node vectors, and transmitted vectors are all columns of some
//! matrix over `GF(q)`. Elimination always picks the leftmost pivot column and
//! the first nonzero row, so results are deterministic.
//!
//! Raw storage accessors ([`FieldMatrix::get`], [`FieldMatrix::column`], ...)
//! use 0-based offsets like any Rust slice. Operations that select or report
//! positions in the storage model ([`cyclic_window`], [`complete_basis`]) use
//! 1-based indices, matching the numbering of nodes and data symbols.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("field order {0} is not prime")]
    NotPrime(u32),
    #[error("field order mismatch: GF({left}) vs GF({right})")]
    OrderMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("value {value} is not an element of GF({q})")]
    ValueOutOfRange { value: u32, q: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("window of width {width} exceeds axis length {len}")]
    WindowTooWide { width: usize, len: usize },
    #[error("window start {start} is outside 1..={len}")]
    WindowStart { start: usize, len: usize },
    #[error("cannot reach rank {target}: pool only reaches {reached}")]
    UnreachableRank { target: usize, reached: usize },
    #[error("vector is not in the joint span of the two bases")]
    NotInSpan,
}

/// The order `q` of a prime field `GF(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrder(u32);

impl FieldOrder {
    pub const GF2: FieldOrder = FieldOrder(2);

    pub fn new(q: u32) -> Result<Self, GaloisError> {
        if is_prime(q) {
            Ok(FieldOrder(q))
        } else {
            Err(GaloisError::NotPrime(q))
        }
    }

    /// The smallest prime field with at least `n` elements.
    pub fn smallest_prime_at_least(n: u32) -> Self {
        let mut p = n.max(2);
        while !is_prime(p) {
            p += 1;
        }
        FieldOrder(p)
    }

    pub fn q(self) -> u32 {
        self.0
    }

    pub fn element(self, value: u32) -> Result<FieldElement, GaloisError> {
        FieldElement::new(value, self)
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.0 - b)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    fn check(self, value: u32) -> Result<u32, GaloisError> {
        if value < self.0 {
            Ok(value)
        } else {
            Err(GaloisError::ValueOutOfRange { value, q: self.0 })
        }
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    order: FieldOrder,
}

impl FieldElement {
    pub fn new(value: u32, order: FieldOrder) -> Result<Self, GaloisError> {
        Ok(FieldElement {
            value: order.check(value)?,
            order,
        })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn order(self) -> FieldOrder {
        self.order
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
}

pub fn field_arith(a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement, GaloisError> {
    if a.order != b.order {
        return Err(GaloisError::OrderMismatch {
            left: a.order.q(),
            right: b.order.q(),
        });
    }
    let f = a.order;
    let value = match op {
        FieldOp::Add => f.add(a.value, b.value),
        FieldOp::Sub => f.sub(a.value, b.value),
        FieldOp::Mul => f.mul(a.value, b.value),
    };
    Ok(FieldElement { value, order: f })
}

pub fn field_inv(a: FieldElement) -> Result<FieldElement, GaloisError> {
    let value = a.order.inv(a.value).ok_or(GaloisError::InverseOfZero)?;
    Ok(FieldElement { value, order: a.order })
}

/// Which axis a cyclic window runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Columns,
    Rows,
}

/// A dense row-major matrix over `GF(q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    order: FieldOrder,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {} {}x{} [", self.order, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl FieldMatrix {
    pub fn zeros(order: FieldOrder, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            order,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(order: FieldOrder, n: usize) -> Self {
        let mut m = Self::zeros(order, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(order: FieldOrder, rows: &[Vec<u32>]) -> Result<Self, GaloisError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(GaloisError::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    r + 1,
                    row.len(),
                    cols
                )));
            }
            for &v in row {
                data.push(order.check(v)?);
            }
        }
        Ok(FieldMatrix {
            order,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(order: FieldOrder, rows: usize, columns: &[Vec<u32>]) -> Result<Self, GaloisError> {
        let mut m = Self::zeros(order, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(GaloisError::DimensionMismatch(format!(
                    "column {} has {} entries, expected {}",
                    c + 1,
                    col.len(),
                    rows
                )));
            }
            for (r, &v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = order.check(v)?;
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> FieldOrder {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u32) -> Result<(), GaloisError> {
        self.data[r * self.cols + c] = self.order.check(value)?;
        Ok(())
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        FieldElement {
            value: self.get(r, c),
            order: self.order,
        }
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.cols).map(move |c| self.column(c))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.order, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn same_order(&self, other: &Self) -> Result<(), GaloisError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(GaloisError::OrderMismatch {
                left: self.order.q(),
                right: other.order.q(),
            })
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, GaloisError> {
        self.same_order(rhs)?;
        if self.cols != rhs.rows {
            return Err(GaloisError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.order;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(r, i);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let idx = r * rhs.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, rhs.get(i, c)));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `x · self`.
    pub fn left_mul_vec(&self, x: &[u32]) -> Result<Vec<u32>, GaloisError> {
        if x.len() != self.rows {
            return Err(GaloisError::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let f = self.order;
        Ok((0..self.cols)
            .map(|c| {
                x.iter()
                    .enumerate()
                    .fold(0, |acc, (r, &xv)| f.add(acc, f.mul(xv, self.get(r, c))))
            })
            .collect())
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self, GaloisError> {
        self.same_order(rhs)?;
        if self.rows != rhs.rows {
            return Err(GaloisError::DimensionMismatch(format!(
                "cannot stack {} rows beside {} rows",
                self.rows, rhs.rows
            )));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Ok(FieldMatrix {
            order: self.order,
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Vertical concatenation, `self` above `rhs`.
    pub fn vstack(&self, rhs: &Self) -> Result<Self, GaloisError> {
        self.same_order(rhs)?;
        if self.cols != rhs.cols {
            return Err(GaloisError::DimensionMismatch(format!(
                "cannot stack {} columns over {} columns",
                self.cols, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(FieldMatrix {
            order: self.order,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    /// Columns at the given 0-based offsets, in the given order.
    pub fn select_columns(&self, offsets: &[usize]) -> Self {
        let mut out = Self::zeros(self.order, self.rows, offsets.len());
        for r in 0..self.rows {
            for (j, &c) in offsets.iter().enumerate() {
                out.data[r * offsets.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, offsets: &[usize]) -> Self {
        let mut data = Vec::with_capacity(offsets.len() * self.cols);
        for &r in offsets {
            data.extend_from_slice(self.row(r));
        }
        FieldMatrix {
            order: self.order,
            rows: offsets.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        if self.order == FieldOrder::GF2 {
            return packed_gf2_rank(self);
        }
        self.rank_unpacked()
    }

    /// Rank by plain elimination, bypassing the packed GF(2) path.
    #[doc(hidden)]
    pub fn rank_unpacked(&self) -> usize {
        let mut m = self.clone();
        m.reduce(self.cols).len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let id = Self::identity(self.order, self.rows);
        match solve(self, &id) {
            Ok(Some(inv)) => Some(inv),
            _ => None,
        }
    }

    /// In-place reduced row echelon form restricted to pivots in the first
    /// `limit` columns. Returns the pivot columns in row order.
    fn reduce(&mut self, limit: usize) -> Vec<usize> {
        let f = self.order;
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..limit {
            if pivot_row == self.rows {
                break;
            }
            let Some(found) = (pivot_row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if found != pivot_row {
                for c in 0..self.cols {
                    self.data.swap(found * self.cols + c, pivot_row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(pivot_row, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let idx = pivot_row * self.cols + c;
                self.data[idx] = f.mul(self.data[idx], inv);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let p = self.data[pivot_row * self.cols + c];
                    let idx = r * self.cols + c;
                    self.data[idx] = f.sub(self.data[idx], f.mul(factor, p));
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }
}

/// Rank over GF(2) with rows packed into 64-bit words.
fn packed_gf2_rank(m: &FieldMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            let mut packed = vec![0u64; words];
            for (c, &v) in m.row(r).iter().enumerate() {
                if v != 0 {
                    packed[c / 64] |= 1 << (c % 64);
                }
            }
            packed
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of `m` over its field.
pub fn mat_rank(m: &FieldMatrix) -> usize {
    m.rank()
}

/// Solves `a · c = b` for `c`. Free variables are set to zero.
///
/// Returns `Ok(None)` when some column of `b` lies outside the column span of `a`.
pub fn solve(a: &FieldMatrix, b: &FieldMatrix) -> Result<Option<FieldMatrix>, GaloisError> {
    a.same_order(b)?;
    if a.rows != b.rows {
        return Err(GaloisError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has {}",
            a.rows, b.rows
        )));
    }
    let mut aug = a.hstack(b)?;
    let pivots = aug.reduce(a.cols);
    let rank = pivots.len();
    for r in rank..aug.rows {
        if (a.cols..aug.cols).any(|c| aug.get(r, c) != 0) {
            return Ok(None);
        }
    }
    let mut c = FieldMatrix::zeros(a.order, a.cols, b.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            c.data[pc * b.cols + j] = aug.get(row, a.cols + j);
        }
    }
    Ok(Some(c))
}

/// Same as [`solve`]; named after the operation it realizes.
pub fn mat_solve(a: &FieldMatrix, b: &FieldMatrix) -> Result<Option<FieldMatrix>, GaloisError> {
    solve(a, b)
}

/// The `width` consecutive columns (or rows) starting at 1-based `start`,
/// wrapping past the end back to the beginning.
pub fn cyclic_window(m: &FieldMatrix, start: usize, width: usize, axis: Axis) -> Result<FieldMatrix, GaloisError> {
    let len = match axis {
        Axis::Columns => m.cols,
        Axis::Rows => m.rows,
    };
    if width > len {
        return Err(GaloisError::WindowTooWide { width, len });
    }
    if start == 0 || start > len {
        return Err(GaloisError::WindowStart { start, len });
    }
    let offsets: Vec<usize> = (0..width).map(|i| (start - 1 + i) % len).collect();
    Ok(match axis {
        Axis::Columns => m.select_columns(&offsets),
        Axis::Rows => m.select_rows(&offsets),
    })
}

/// Incrementally maintained span of column vectors, kept in echelon form.
#[derive(Debug, Clone)]
pub struct SpanTracker {
    order: FieldOrder,
    dim: usize,
    basis: Vec<(usize, Vec<u32>)>,
}

impl SpanTracker {
    pub fn new(order: FieldOrder, dim: usize) -> Self {
        SpanTracker {
            order,
            dim,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn residue(&self, v: &[u32]) -> Vec<u32> {
        let f = self.order;
        let mut v = v.to_vec();
        for (pivot, b) in &self.basis {
            let factor = v[*pivot];
            if factor != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.residue(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent of the tracked span; reports whether it was.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length must match ambient dimension");
        let mut r = self.residue(v);
        let Some(pivot) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.order.inv(r[pivot]).expect("pivot is nonzero");
        for x in r.iter_mut() {
            *x = self.order.mul(*x, inv);
        }
        self.basis.push((pivot, r));
        true
    }
}

/// Picks columns of `pool`, lowest index first, that raise the rank of
/// `base` until it reaches `target_rank`. Returned indices are 1-based.
pub fn complete_basis(base: &FieldMatrix, pool: &FieldMatrix, target_rank: usize) -> Result<Vec<usize>, GaloisError> {
    base.same_order(pool)?;
    if base.rows != pool.rows {
        return Err(GaloisError::DimensionMismatch(format!(
            "base vectors have length {} but pool vectors have length {}",
            base.rows, pool.rows
        )));
    }
    let mut span = SpanTracker::new(base.order, base.rows);
    for col in base.columns() {
        span.insert(&col);
    }
    let mut picked = Vec::new();
    for (j, col) in pool.columns().enumerate() {
        if span.rank() >= target_rank {
            break;
        }
        if span.insert(&col) {
            picked.push(j + 1);
        }
    }
    if span.rank() < target_rank {
        return Err(GaloisError::UnreachableRank {
            target: target_rank,
            reached: span.rank(),
        });
    }
    Ok(picked)
}

/// Coefficients splitting a vector across two spanning sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub u_coeffs: Vec<u32>,
    pub w_coeffs: Vec<u32>,
}

/// Writes `v = u + w` with `u = u_basis · u_coeffs` and `w = w_basis · w_coeffs`.
///
/// Columns of `u_basis` are preferred as pivots, so `w_coeffs` is zero
/// whenever `v` already lies in the span of `u_basis`.
pub fn decompose_over(v: &[u32], u_basis: &FieldMatrix, w_basis: &FieldMatrix) -> Result<Decomposition, GaloisError> {
    if v.len() != u_basis.rows {
        return Err(GaloisError::DimensionMismatch(format!(
            "vector of length {} against bases of length {}",
            v.len(),
            u_basis.rows
        )));
    }
    let joint = u_basis.hstack(w_basis)?;
    let rhs = FieldMatrix::from_columns(u_basis.order, v.len(), &[v.to_vec()])?;
    let c = solve(&joint, &rhs)?.ok_or(GaloisError::NotInSpan)?;
    let coeffs = c.column(0);
    let (u, w) = coeffs.split_at(u_basis.cols);
    Ok(Decomposition {
        u_coeffs: u.to_vec(),
        w_coeffs: w.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> FieldOrder {
        FieldOrder::new(q).unwrap()
    }

    fn unit(dim: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; dim];
        v[i - 1] = 1;
        v
    }

    fn sum(vs: &[Vec<u32>]) -> Vec<u32> {
        let mut out = vec![0; vs[0].len()];
        for v in vs {
            for (o, x) in out.iter_mut().zip(v) {
                *o ^= x;
            }
        }
        out
    }

    fn ed_5x8() -> FieldMatrix {
        FieldMatrix::from_rows(
            FieldOrder::GF2,
            &[
                vec![1, 0, 0, 0, 0, 1, 0, 0],
                vec![0, 1, 0, 0, 0, 0, 1, 0],
                vec![0, 0, 1, 0, 0, 0, 0, 1],
                vec![0, 0, 0, 1, 0, 1, 0, 1],
                vec![0, 0, 0, 0, 1, 0, 1, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn prime_orders_only() {
        assert!(FieldOrder::new(2).is_ok());
        assert!(FieldOrder::new(37).is_ok());
        assert_eq!(FieldOrder::new(4), Err(GaloisError::NotPrime(4)));
        assert_eq!(FieldOrder::new(1), Err(GaloisError::NotPrime(1)));
        assert_eq!(FieldOrder::new(0), Err(GaloisError::NotPrime(0)));
        assert_eq!(FieldOrder::smallest_prime_at_least(4).q(), 5);
        assert_eq!(FieldOrder::smallest_prime_at_least(1).q(), 2);
        assert_eq!(FieldOrder::smallest_prime_at_least(32).q(), 37);
    }

    #[test]
    fn scalar_examples() {
        let f2 = FieldOrder::GF2;
        let one = f2.element(1).unwrap();
        assert_eq!(field_arith(one, one, FieldOp::Add).unwrap().value(), 0);

        let two = gf(5).element(2).unwrap();
        assert_eq!(field_inv(two).unwrap().value(), 3);

        let f11 = gf(11);
        let p = field_arith(f11.element(7).unwrap(), f11.element(8).unwrap(), FieldOp::Mul).unwrap();
        assert_eq!(p.value(), 1);
    }

    #[test]
    fn scalar_errors() {
        let a = gf(5).element(1).unwrap();
        let b = gf(7).element(1).unwrap();
        assert_eq!(
            field_arith(a, b, FieldOp::Add),
            Err(GaloisError::OrderMismatch { left: 5, right: 7 })
        );
        assert_eq!(field_inv(gf(5).element(0).unwrap()), Err(GaloisError::InverseOfZero));
        assert_eq!(gf(5).element(5), Err(GaloisError::ValueOutOfRange { value: 5, q: 5 }));
    }

    #[test]
    fn sub_wraps() {
        let f = gf(7);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.neg(3), 4);
        assert_eq!(f.neg(0), 0);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&FieldMatrix::identity(gf(3), 5)), 5);
        assert_eq!(mat_rank(&FieldMatrix::identity(FieldOrder::GF2, 5)), 5);
        assert_eq!(mat_rank(&FieldMatrix::zeros(gf(7), 3, 4)), 0);
        assert_eq!(mat_rank(&FieldMatrix::zeros(FieldOrder::GF2, 3, 4)), 0);
        assert_eq!(mat_rank(&ed_5x8()), 5);
    }

    #[test]
    fn rank_of_wide_gf2_matrix_uses_multiple_words() {
        let m = FieldMatrix::identity(FieldOrder::GF2, 130);
        assert_eq!(m.rank(), 130);
        let doubled = m.hstack(&m).unwrap();
        assert_eq!(doubled.rank(), 130);
    }

    #[test]
    fn solve_identity() {
        let f = gf(7);
        let b = FieldMatrix::from_rows(f, &[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let c = mat_solve(&FieldMatrix::identity(f, 3), &b).unwrap().unwrap();
        assert_eq!(c, b);
    }

    #[test]
    fn solve_outside_span() {
        let f = FieldOrder::GF2;
        let a = FieldMatrix::from_columns(f, 5, &[unit(5, 5), sum(&[unit(5, 1), unit(5, 4)])]).unwrap();
        let b = FieldMatrix::from_columns(f, 5, &[unit(5, 3)]).unwrap();
        assert_eq!(mat_solve(&a, &b).unwrap(), None);
    }

    #[test]
    fn solve_two_unit_coefficients() {
        let f = FieldOrder::GF2;
        let cols: Vec<Vec<u32>> = (1..=5).map(|i| unit(5, i)).collect();
        let a = FieldMatrix::from_columns(f, 5, &cols).unwrap();
        let b = FieldMatrix::from_columns(f, 5, &[sum(&[unit(5, 1), unit(5, 4)])]).unwrap();
        let c = mat_solve(&a, &b).unwrap().unwrap();
        assert_eq!(c.column(0), vec![1, 0, 0, 1, 0]);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let f = gf(3);
        let a = FieldMatrix::identity(f, 3);
        let b = FieldMatrix::zeros(f, 2, 1);
        assert!(matches!(mat_solve(&a, &b), Err(GaloisError::DimensionMismatch(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf(11);
        let a = FieldMatrix::from_rows(f, &[vec![2, 3], vec![1, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FieldMatrix::identity(f, 2));
        let singular = FieldMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(singular.inverse(), None);
    }

    #[test]
    fn window_wraps_around() {
        let f = FieldOrder::GF2;
        let i2 = FieldMatrix::identity(f, 2);
        let m = i2.hstack(&i2).unwrap();
        let w = cyclic_window(&m, 4, 2, Axis::Columns).unwrap();
        assert_eq!(w.columns().collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn window_of_ed_example_is_identity() {
        let w = cyclic_window(&ed_5x8(), 1, 5, Axis::Columns).unwrap();
        assert_eq!(w, FieldMatrix::identity(FieldOrder::GF2, 5));
    }

    #[test]
    fn window_errors() {
        let f = FieldOrder::GF2;
        let i2 = FieldMatrix::identity(f, 2);
        let m = i2.hstack(&i2).unwrap();
        assert_eq!(
            cyclic_window(&m, 1, 9, Axis::Columns),
            Err(GaloisError::WindowTooWide { width: 9, len: 4 })
        );
        assert_eq!(
            cyclic_window(&m, 0, 2, Axis::Columns),
            Err(GaloisError::WindowStart { start: 0, len: 4 })
        );
        let rows = cyclic_window(&m, 2, 2, Axis::Rows).unwrap();
        assert_eq!(rows.row(0), &[0, 1, 0, 1]);
        assert_eq!(rows.row(1), &[1, 0, 1, 0]);
    }

    #[test]
    fn complete_basis_examples() {
        let f = FieldOrder::GF2;
        let base = FieldMatrix::from_columns(f, 5, &(1..=4).map(|i| unit(5, i)).collect::<Vec<_>>()).unwrap();
        let pool = FieldMatrix::from_columns(f, 5, &[unit(5, 5), sum(&[unit(5, 1), unit(5, 4)])]).unwrap();
        assert_eq!(complete_basis(&base, &pool, 5).unwrap(), vec![1]);
        assert_eq!(complete_basis(&base, &pool, 4).unwrap(), Vec::<usize>::new());

        let zeros = FieldMatrix::zeros(f, 5, 3);
        assert_eq!(
            complete_basis(&base, &zeros, 5),
            Err(GaloisError::UnreachableRank { target: 5, reached: 4 })
        );
    }

    #[test]
    fn complete_basis_skips_dependent_candidates() {
        let f = FieldOrder::GF2;
        let base = FieldMatrix::from_columns(f, 3, &[unit(3, 1)]).unwrap();
        let pool = FieldMatrix::from_columns(
            f,
            3,
            &[unit(3, 1), unit(3, 2), sum(&[unit(3, 1), unit(3, 2)]), unit(3, 3)],
        )
        .unwrap();
        assert_eq!(complete_basis(&base, &pool, 3).unwrap(), vec![2, 4]);
    }

    #[test]
    fn decompose_example() {
        let f = FieldOrder::GF2;
        let e = |i| unit(5, i);
        let u = FieldMatrix::from_columns(
            f,
            5,
            &[e(5), sum(&[e(1), e(4)]), sum(&[e(2), e(5)]), sum(&[e(3), e(4), e(5)])],
        )
        .unwrap();
        let w = FieldMatrix::from_columns(f, 5, &[e(1), e(2)]).unwrap();
        let d = decompose_over(&e(3), &u, &w).unwrap();
        assert_eq!(d.u_coeffs, vec![1, 1, 0, 1]);
        assert_eq!(d.w_coeffs, vec![1, 0]);
    }

    #[test]
    fn decompose_one_sided() {
        let f = gf(5);
        let u = FieldMatrix::from_columns(f, 3, &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let w = FieldMatrix::from_columns(f, 3, &[vec![0, 0, 1]]).unwrap();
        let d = decompose_over(&[2, 0, 1], &u, &w).unwrap();
        assert_eq!(d.w_coeffs, vec![0]);
        assert_eq!(d.u_coeffs, vec![2, 1]);
    }

    #[test]
    fn decompose_outside_span() {
        let f = FieldOrder::GF2;
        let zero = FieldMatrix::zeros(f, 3, 2);
        assert_eq!(decompose_over(&[1, 0, 0], &zero, &zero), Err(GaloisError::NotInSpan));
    }

    #[test]
    fn span_tracker_membership() {
        let f = gf(3);
        let mut s = SpanTracker::new(f, 3);
        assert!(s.insert(&[1, 2, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[2, 1, 0]));
        assert!(s.contains(&[1, 0, 1]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.rank(), 2);
    }
}
