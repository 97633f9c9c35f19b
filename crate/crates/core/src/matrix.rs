//! Pairwise-comparison matrices and their triads.
//!
//! A [`PcMatrix`] holds positive ratios `a_ij` ("how many times is `i`
//! larger than `j`") with `a_ii = 1` and `a_ji = 1 / a_ij`. Every
//! inconsistency question reduces to the triads `(a_ij, a_ik, a_jk)` with
//! `i < j < k`, which are consistent when `a_ik = a_ij * a_jk`.
//!
//! [`AdditivePcMatrix`] is the difference-based counterpart, with
//! `a_ji = -a_ij` and the consistency condition `a_ik = a_ij + a_jk`. The two
//! are bridged elementwise by `ln` / `exp`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when validating reciprocity.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-12;

/// Absolute tolerance used when validating skew-symmetry of additive matrices.
pub const SKEW_TOLERANCE: f64 = 1e-12;

fn check_ratio(i: usize, j: usize, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveEntry { i, j, value })
    }
}

fn check_square(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    Ok(n)
}

/// Number of triads in an `n x n` matrix, `C(n, 3)`.
pub fn triad_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// A multiplicative reciprocal pairwise-comparison matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PcMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl PcMatrix {
    /// Validates a full grid of ratios.
    ///
    /// Every entry must be positive and finite, the diagonal must be exactly
    /// 1, and `a_ij * a_ji` must equal 1 within a relative tolerance of
    /// [`RECIPROCITY_TOLERANCE`]. Non-reciprocal input is rejected, never
    /// repaired; use [`PcMatrix::from_upper_triangle`] to build a matrix that
    /// is reciprocal by construction.
    #[allow(clippy::needless_range_loop)]
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = check_square(&rows)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                check_ratio(i, j, v)?;
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != 1.0 {
                return Err(Error::BadDiagonal {
                    i,
                    value: row[i],
                    expected: 1.0,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a_ij, a_ji) = (rows[i][j], rows[j][i]);
                let product = a_ij * a_ji;
                if (product - 1.0).abs() > RECIPROCITY_TOLERANCE * product.abs().max(1.0) {
                    return Err(Error::ReciprocityViolation { i, j, a_ij, a_ji });
                }
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from its strict upper triangle in row-major order:
    /// `a_01, a_02, ..., a_0(n-1), a_12, ...`. The lower triangle is filled
    /// with reciprocals and the diagonal with ones.
    pub fn from_upper_triangle(n: usize, values: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        let expected = n * (n - 1) / 2;
        if values.len() != expected {
            return Err(Error::WrongCount {
                expected,
                got: values.len(),
            });
        }
        let mut entries = vec![1.0; n * n];
        let mut it = values.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = *it.next().expect("length checked above");
                check_ratio(i, j, v)?;
                entries[i * n + j] = v;
                entries[j * n + i] = 1.0 / v;
            }
        }
        Ok(Self { n, entries })
    }

    /// The all-ones matrix of size `n`.
    pub fn identity(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        Ok(Self {
            n,
            entries: vec![1.0; n * n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Strict upper triangle in the row-major order accepted by
    /// [`PcMatrix::from_upper_triangle`].
    pub fn upper_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Returns a copy with `a_ij = value` and `a_ji = 1 / value`.
    pub fn with_entry(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidParameter {
                name: "index",
                reason: format!("({i}, {j}) is not an off-diagonal position of a {0}x{0} matrix", self.n),
            });
        }
        check_ratio(i, j, value)?;
        let mut out = self.clone();
        out.entries[i * self.n + j] = value;
        out.entries[j * self.n + i] = 1.0 / value;
        Ok(out)
    }

    /// Triad at indices `i < j < k`.
    pub fn triad_at(&self, i: usize, j: usize, k: usize) -> Triad {
        debug_assert!(i < j && j < k && k < self.n);
        Triad {
            x: self.get(i, j),
            y: self.get(i, k),
            z: self.get(j, k),
            indices: (i, j, k),
        }
    }

    /// Iterator over all triads in lexicographic `(i, j, k)` order.
    pub fn triad_iter(&self) -> impl Iterator<Item = Triad> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| self.triad_at(i, j, k))))
    }

    /// All `C(n, 3)` triads in lexicographic `(i, j, k)` order. Empty for `n = 2`.
    pub fn triads(&self) -> Vec<Triad> {
        self.triad_iter().collect()
    }

    /// True iff every triad satisfies `|y - x*z| <= tol * |y|`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.triad_iter().all(|t| t.is_consistent(tol))
    }

    /// Elementwise natural logarithm.
    pub fn to_additive(&self) -> AdditivePcMatrix {
        AdditivePcMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v.ln()).collect(),
        }
    }
}

/// A skew-symmetric matrix of differences: `a_ii = 0`, `a_ji = -a_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivePcMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl AdditivePcMatrix {
    #[allow(clippy::needless_range_loop)]
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = check_square(&rows)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFiniteEntry { i, j, value });
                }
            }
            if row[i] != 0.0 {
                return Err(Error::BadDiagonal {
                    i,
                    value: row[i],
                    expected: 0.0,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a_ij, a_ji) = (rows[i][j], rows[j][i]);
                if (a_ij + a_ji).abs() > SKEW_TOLERANCE {
                    return Err(Error::SkewSymmetryViolation { i, j, a_ij, a_ji });
                }
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Additive triads `(a_ij, a_ik, a_jk)`, consistent when `y = x + z`.
    pub fn triads(&self) -> Vec<AdditiveTriad> {
        let n = self.n;
        let mut out = Vec::with_capacity(triad_count(n));
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    out.push(AdditiveTriad {
                        x: self.get(i, j),
                        y: self.get(i, k),
                        z: self.get(j, k),
                        indices: (i, j, k),
                    });
                }
            }
        }
        out
    }

    /// Elementwise exponential. Exponentiating finite differences can
    /// overflow, so the result is validated like any other ratio matrix.
    pub fn to_multiplicative(&self) -> Result<PcMatrix> {
        let n = self.n;
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.get(i, j).exp();
                check_ratio(i, j, v)?;
                entries[i * n + j] = v;
                entries[j * n + i] = self.get(j, i).exp();
            }
        }
        PcMatrix::new(entries.chunks(n).map(<[f64]>::to_vec).collect())
    }
}

/// The triple `(m_ij, m_ik, m_jk)` taken from a PC matrix at `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triad {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub indices: (usize, usize, usize),
}

impl Triad {
    /// A free-standing triad, placed at indices `(0, 1, 2)`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        for value in [x, y, z] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveInput { value });
            }
        }
        Ok(Self {
            x,
            y,
            z,
            indices: (0, 1, 2),
        })
    }

    pub fn values(&self) -> (f64, f64, f64) {
        (self.x, self.y, self.z)
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        (self.y - self.x * self.z).abs() <= tol * self.y.abs()
    }

    /// The 3x3 matrix this triad spans.
    pub fn to_matrix(&self) -> PcMatrix {
        PcMatrix::from_upper_triangle(3, &[self.x, self.y, self.z]).expect("triad components are positive and finite")
    }
}

/// An additive triad, consistent when `y = x + z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditiveTriad {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub indices: (usize, usize, usize),
}
