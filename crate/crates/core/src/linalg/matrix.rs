use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LinalgError, Rational};

/// A k-dimensional row vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowVector(Vec<Rational>);

impl RowVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::EmptyDimension);
        }
        Ok(RowVector(entries))
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RowVector::new(entries.iter().map(|&n| Rational::from(n)).collect())
            .expect("vector literal must be nonempty")
    }

    pub fn zeros(dim: usize) -> Self {
        RowVector(vec![Rational::zero(); dim])
    }

    /// Unit vector with a one at zero-based position `index`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    /// Zero-based entry access.
    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.0.get(index)
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    /// `self · m` under the row-vector convention: `out[j] = Σ_i self[i] · m[i][j]`.
    pub fn mul_mat(&self, m: &SquareMatrix) -> Result<RowVector, LinalgError> {
        vec_mat_mul(self, m)
    }

    pub fn dot(&self, other: &RowVector) -> Result<Rational, LinalgError> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Appends `value` as a new last coordinate.
    pub fn extended(&self, value: Rational) -> RowVector {
        let mut entries = self.0.clone();
        entries.push(value);
        RowVector(entries)
    }

    pub fn max_bits(&self) -> u64 {
        self.0.iter().map(Rational::bits).max().unwrap_or(0)
    }
}

impl fmt::Display for RowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for RowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A k×k matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinalgError::EmptyDimension);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(LinalgError::NotSquare {
                    rows: dim,
                    columns: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(SquareMatrix { dim, entries })
    }

    /// Integer literal rows; panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| Rational::from(n)).collect())
                .collect(),
        )
        .expect("matrix literal must be square")
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![Rational::one(); dim])
    }

    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn diagonal(diag: Vec<Rational>) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * dim + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based `(row, column)` access.
    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.dim)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|r| {
            (0..self.dim).all(|c| {
                let x = self.get(r, c);
                if r == c {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, rhs: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
        mat_mul(self, rhs)
    }

    /// Block extension `[[self, 0], [0, 1]]` of dimension `dim + 1`.
    pub fn extended_with_one(&self) -> SquareMatrix {
        let k = self.dim + 1;
        let mut out = SquareMatrix::zeros(k);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        out.set(self.dim, self.dim, Rational::one());
        out
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("]")
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows())
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        SquareMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Row vector times matrix.
pub fn vec_mat_mul(v: &RowVector, m: &SquareMatrix) -> Result<RowVector, LinalgError> {
    if v.dim() != m.dim {
        return Err(LinalgError::DimensionMismatch {
            expected: m.dim,
            found: v.dim(),
        });
    }
    let k = m.dim;
    let mut out = vec![Rational::zero(); k];
    for (i, vi) in v.0.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            let mij = m.get(i, j);
            if mij.is_zero() {
                continue;
            }
            *slot = &*slot + &(vi * mij);
        }
    }
    Ok(RowVector(out))
}

pub fn mat_mul(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
    if a.dim != b.dim {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let k = a.dim;
    let mut out = SquareMatrix::zeros(k);
    for r in 0..k {
        for t in 0..k {
            let art = a.get(r, t);
            if art.is_zero() {
                continue;
            }
            for c in 0..k {
                let btc = b.get(t, c);
                if btc.is_zero() {
                    continue;
                }
                let idx = r * k + c;
                out.entries[idx] = &out.entries[idx] + &(art * btc);
            }
        }
    }
    Ok(out)
}

/// `E_k^i(c)`: the k×k identity with the `i`'th entry of the first column set to `c`.
///
/// `i` is one-based. Multiplying a row vector by it adds `c·v_i` to the first
/// entry when `i > 1`, and scales the first entry by `c` when `i = 1`.
pub fn elementary_matrix(i: usize, k: usize, c: Rational) -> Result<SquareMatrix, LinalgError> {
    if k == 0 {
        return Err(LinalgError::EmptyDimension);
    }
    if i == 0 || i > k {
        return Err(LinalgError::IndexOutOfRange { index: i, dim: k });
    }
    let mut m = SquareMatrix::identity(k);
    m.set(i - 1, 0, c);
    Ok(m)
}

/// Permutation matrix exchanging coordinates 1 and `i` (one-based).
pub fn swap_matrix(i: usize, k: usize) -> Result<SquareMatrix, LinalgError> {
    if k == 0 {
        return Err(LinalgError::EmptyDimension);
    }
    if i == 0 || i > k {
        return Err(LinalgError::IndexOutOfRange { index: i, dim: k });
    }
    let mut m = SquareMatrix::identity(k);
    if i != 1 {
        m.set(0, 0, Rational::zero());
        m.set(i - 1, i - 1, Rational::zero());
        m.set(0, i - 1, Rational::one());
        m.set(i - 1, 0, Rational::one());
    }
    Ok(m)
}
