use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

use super::{Semiring, SemanticsError};

/// A dense `rows × cols` matrix of exact rationals; either dimension may be
/// zero. A morphism `n → m` is an `m × n` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, SemanticsError> {
        if data.len() != rows * cols {
            return Err(SemanticsError::Shape(format!("{} entries for a {rows}×{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, SemanticsError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(SemanticsError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Matrix::new(n, cols, rows.into_iter().flatten().collect())
    }

    /// Builds from columns of equal height `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Result<Self, SemanticsError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(SemanticsError::Shape("ragged columns".into()));
        }
        let cols = columns.len();
        let mut m = Matrix::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.data[i * cols + j] = v.clone();
            }
        }
        Ok(m)
    }

    /// Parses `[[a, b], [c, d]]`; a flat `[a, b]` is read as a column.
    pub fn parse(text: &str) -> Result<Self, SemanticsError> {
        let bad = || SemanticsError::Shape(format!("malformed matrix literal `{text}`"));
        let t = text.trim();
        let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?.trim();
        if inner.is_empty() {
            return Ok(Matrix::zeros(0, 0));
        }
        let parse_list = |s: &str| -> Result<Vec<Rational>, SemanticsError> {
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',').map(|x| x.trim().parse::<Rational>().map_err(|_| bad())).collect()
        };
        if !inner.starts_with('[') {
            let col = parse_list(inner)?;
            let n = col.len();
            return Matrix::new(n, 1, col);
        }
        let mut rows = Vec::new();
        let mut rest = inner;
        loop {
            let open = rest.strip_prefix('[').ok_or_else(bad)?;
            let close = open.find(']').ok_or_else(bad)?;
            rows.push(parse_list(&open[..close])?);
            rest = open[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest.strip_prefix(',').ok_or_else(bad)?.trim_start();
        }
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    /// `self · rhs` in the given semiring.
    pub fn mul(&self, rhs: &Matrix, semiring: Semiring) -> Result<Matrix, SemanticsError> {
        if self.cols != rhs.rows {
            return Err(SemanticsError::Dimension { left: (self.rows, self.cols), right: (rhs.rows, rhs.cols) });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = semiring.add(&out.data[idx], &semiring.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Diagrammatic composite: `self : n → m` followed by `next : m → l`,
    /// i.e. the product `next · self`.
    pub fn then(&self, next: &Matrix, semiring: Semiring) -> Result<Matrix, SemanticsError> {
        next.mul(self, semiring)
    }

    /// Block-diagonal direct sum.
    pub fn dsum(&self, other: &Matrix) -> Matrix {
        let (rows, cols) = (self.rows + other.rows, self.cols + other.cols);
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[(self.rows + i) * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    /// The permutation matrix of the swap `2 → 2`.
    pub fn swap() -> Matrix {
        let (o, z) = (Rational::one(), Rational::zero());
        Matrix { rows: 2, cols: 2, data: vec![z.clone(), o.clone(), o, z] }
    }

    /// First entry `(i, j)` where `self[i][j] ≰ other[i][j]`.
    pub fn first_violation(&self, other: &Matrix) -> Result<Option<(usize, usize)>, SemanticsError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SemanticsError::Dimension { left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        Ok(self.data.iter().zip(&other.data).position(|(a, b)| a > b).map(|p| (p / self.cols, p % self.cols)))
    }

    /// Comma-separated rows, for CSV export.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[] ({}×{})", self.rows, self.cols);
        }
        f.write_str("[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{{{}×{} {}}}", self.rows, self.cols, self)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr { rows: self.rows, cols: self.cols, entries: self.to_rows() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows {
            return Err(serde::de::Error::custom("row count does not match entries"));
        }
        Matrix::from_rows(repr.entries, repr.cols).map_err(serde::de::Error::custom)
    }
}

/// A probability distribution on `{0, …, m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct Distribution(Vec<Rational>);

impl Distribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self, SemanticsError> {
        if weights.is_empty() {
            return Err(SemanticsError::NotStochastic("empty distribution".into()));
        }
        if weights.iter().any(Rational::is_negative) {
            return Err(SemanticsError::NotStochastic("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(SemanticsError::NotStochastic(format!("weights sum to {total}")));
        }
        Ok(Distribution(weights))
    }

    pub fn point(m: usize, i: usize) -> Self {
        let mut w = vec![Rational::zero(); m];
        w[i] = Rational::one();
        Distribution(w)
    }

    pub fn uniform(m: usize) -> Self {
        Distribution(vec![Rational::new(1, m as i64); m])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self +_λ other = λ·self + (1-λ)·other`.
    pub fn mix(&self, lambda: &Rational, other: &Distribution) -> Result<Distribution, SemanticsError> {
        if self.len() != other.len() {
            return Err(SemanticsError::Dimension { left: (self.len(), 1), right: (other.len(), 1) });
        }
        let rest = Rational::one() - lambda;
        Distribution::new(self.0.iter().zip(&other.0).map(|(a, b)| lambda * a + &rest * b).collect())
    }
}

impl TryFrom<Vec<Rational>> for Distribution {
    type Error = SemanticsError;
    fn try_from(v: Vec<Rational>) -> Result<Self, Self::Error> {
        Distribution::new(v)
    }
}

impl From<Distribution> for Vec<Rational> {
    fn from(d: Distribution) -> Self {
        d.0
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", cells.join(", "))
    }
}

/// A column-stochastic matrix: entries in `[0, 1]`, every column sums to 1.
/// A matrix with no rows must also have no columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct StochMatrix(Matrix);

impl StochMatrix {
    pub fn new(m: Matrix) -> Result<Self, SemanticsError> {
        if m.rows == 0 && m.cols > 0 {
            return Err(SemanticsError::NoStochastic { arity: m.cols });
        }
        if m.data.iter().any(|x| !x.in_unit_interval()) {
            return Err(SemanticsError::NotStochastic("entry outside [0, 1]".into()));
        }
        for j in 0..m.cols {
            let total: Rational = (0..m.rows).map(|i| m.get(i, j)).sum();
            if !total.is_one() {
                return Err(SemanticsError::NotStochastic(format!("column {j} sums to {total}")));
            }
        }
        Ok(StochMatrix(m))
    }

    pub fn from_columns(columns: &[Distribution], rows: usize) -> Result<Self, SemanticsError> {
        let cols: Vec<Vec<Rational>> = columns.iter().map(|d| d.weights().to_vec()).collect();
        StochMatrix::new(Matrix::from_columns(&cols, rows)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    pub fn column(&self, j: usize) -> Distribution {
        Distribution(self.0.column(j))
    }

    pub fn columns(&self) -> Vec<Distribution> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &StochMatrix) -> Result<StochMatrix, SemanticsError> {
        Ok(StochMatrix(self.0.then(&next.0, Semiring::NonNegative)?))
    }

    pub fn dsum(&self, other: &StochMatrix) -> StochMatrix {
        StochMatrix(self.0.dsum(&other.0))
    }
}

impl From<StochMatrix> for Matrix {
    fn from(s: StochMatrix) -> Self {
        s.0
    }
}

impl TryFrom<Matrix> for StochMatrix {
    type Error = SemanticsError;
    fn try_from(m: Matrix) -> Result<Self, Self::Error> {
        StochMatrix::new(m)
    }
}

impl fmt::Display for StochMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
