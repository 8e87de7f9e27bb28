//! Euclidean-division (ED) matrices and the weakly MDS check.
//!
//! An ED-matrix of shape `m0 × n` is built from identity blocks whose sizes
//! follow the quotient/remainder chain of dividing `n` by `m0`. Concretely,
//! `E(m, n)` is `[I_m repeated n/m times]` when `m` divides `n`, and otherwise
//! `[I_m repeated p times | E(s, m)ᵀ]` where `n = p·m + s`.
//!
//! ```
//! use ringstore::edmatrix::{ed_matrix, is_weakly_mds};
//!
//! let ed = ed_matrix(3, 5).unwrap();
//! assert_eq!(ed.matrix().row(2), &[0, 0, 1, 1, 1]);
//! assert!(is_weakly_mds(ed.matrix()).holds);
//! ```

use thiserror::Error;

use crate::galois::{cyclic_window, Axis, FieldMatrix, FieldOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdError {
    #[error("ED-matrix dimensions must be positive (got m0 = {m0}, n = {n})")]
    Zero { m0: usize, n: usize },
    #[error("ED-matrix needs n >= m0 (got m0 = {m0}, n = {n})")]
    TooNarrow { m0: usize, n: usize },
}

/// Quotients and remainders of the Euclidean algorithm on `(n_value, m0)`.
///
/// `n_value = q[0]·m0 + r[0]`, `m0 = q[1]·r[0] + r[1]`, and so on until a
/// division is exact. `remainders` holds only the nonzero remainders, so the
/// chain depth is `remainders.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidChain {
    pub n_value: usize,
    pub m0: usize,
    pub quotients: Vec<usize>,
    pub remainders: Vec<usize>,
}

impl EuclidChain {
    pub fn gcd(&self) -> usize {
        self.remainders.last().copied().unwrap_or(self.m0)
    }

    pub fn depth(&self) -> usize {
        self.remainders.len()
    }

    /// Folds the chain back up, returning `(n_value, m0)`.
    pub fn recompose(&self) -> (usize, usize) {
        // Walk from the exact division upwards: (dividend, divisor) pairs.
        let mut divisor = self.gcd();
        let mut dividend = self.quotients.last().copied().unwrap_or(0) * divisor;
        for (i, q) in self.quotients.iter().rev().enumerate().skip(1) {
            let rem = divisor;
            divisor = dividend;
            dividend = q * divisor + rem;
            debug_assert_eq!(rem, self.remainders[self.remainders.len() - i]);
        }
        (dividend, divisor)
    }
}

pub fn euclid_chain(n_value: usize, m0: usize) -> Result<EuclidChain, EdError> {
    if n_value == 0 || m0 == 0 {
        return Err(EdError::Zero { m0, n: n_value });
    }
    if n_value < m0 {
        return Err(EdError::TooNarrow { m0, n: n_value });
    }
    let mut quotients = Vec::new();
    let mut remainders = Vec::new();
    let (mut a, mut b) = (n_value, m0);
    loop {
        quotients.push(a / b);
        let r = a % b;
        if r == 0 {
            break;
        }
        remainders.push(r);
        (a, b) = (b, r);
    }
    Ok(EuclidChain {
        n_value,
        m0,
        quotients,
        remainders,
    })
}

/// A binary matrix built by [`ed_matrix`], together with its Euclidean chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdMatrix {
    matrix: FieldMatrix,
    chain: EuclidChain,
}

impl EdMatrix {
    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn chain(&self) -> &EuclidChain {
        &self.chain
    }

    pub fn into_matrix(self) -> FieldMatrix {
        self.matrix
    }
}

/// Builds the `m0 × n_value` ED-matrix over GF(2).
pub fn ed_matrix(m0: usize, n_value: usize) -> Result<EdMatrix, EdError> {
    let chain = euclid_chain(n_value, m0)?;
    let mut rows = vec![vec![0u32; n_value]; m0];
    fill(&mut rows, 0, 0, m0, n_value, false);
    let matrix = FieldMatrix::from_rows(FieldOrder::GF2, &rows).expect("entries are 0/1 and rows are uniform");
    Ok(EdMatrix { matrix, chain })
}

/// Writes `E(m, n)` (or its transpose) into `out` with top-left corner at
/// `(row0, col0)`. A transposed `E(m, n)` occupies `n` rows and `m` columns.
fn fill(out: &mut [Vec<u32>], row0: usize, col0: usize, m: usize, n: usize, transposed: bool) {
    let p = n / m;
    let s = n % m;
    for block in 0..p {
        for i in 0..m {
            let (r, c) = if transposed {
                (row0 + block * m + i, col0 + i)
            } else {
                (row0 + i, col0 + block * m + i)
            };
            out[r][c] = 1;
        }
    }
    if s > 0 {
        // Tail block is E(s, m)ᵀ, an m × s block; transposing twice cancels.
        if transposed {
            fill(out, row0 + p * m, col0, s, m, false);
        } else {
            fill(out, row0, col0 + p * m, s, m, true);
        }
    }
}

/// Outcome of [`is_weakly_mds`]; `failing_start` is the 1-based start of the
/// first window that is not full rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeaklyMdsReport {
    pub holds: bool,
    pub failing_start: Option<usize>,
}

/// Checks that every cyclic window of `rows` adjacent columns (or, for tall
/// matrices, `cols` adjacent rows) is linearly independent.
pub fn is_weakly_mds(m: &FieldMatrix) -> WeaklyMdsReport {
    let (axis, len, width) = if m.rows() <= m.cols() {
        (Axis::Columns, m.cols(), m.rows())
    } else {
        (Axis::Rows, m.rows(), m.cols())
    };
    for start in 1..=len {
        let window = cyclic_window(m, start, width, axis).expect("window fits the axis");
        if window.rank() < width {
            return WeaklyMdsReport {
                holds: false,
                failing_start: Some(start),
            };
        }
    }
    WeaklyMdsReport {
        holds: true,
        failing_start: None,
    }
}
