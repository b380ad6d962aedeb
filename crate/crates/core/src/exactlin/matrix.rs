use super::{Field, LinAlgError, Scalar, SparseVec};

/// Dense matrix, row-major. Hom matrices are `rank(dst) × rank(src)`: column `a`
/// holds the image of the source basis vector `e_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    pub fn scalar(field: Field, n: usize, c: &Scalar) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinAlgError::DimensionMismatch { expected: c, found: row.len() });
            }
            for v in row {
                if v.field() != field {
                    return Err(LinAlgError::FieldMismatch { expected: field, found: v.field() });
                }
                data.push(v);
            }
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    pub fn from_i64s(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|v| field.from_i64(*v)).collect()).collect();
        Matrix::from_rows(field, rows).expect("rectangular input")
    }

    /// Inverse of [`Matrix::to_vector`].
    pub fn from_vector(v: &SparseVec, rows: usize, cols: usize) -> Self {
        assert_eq!(v.dim(), rows * cols);
        let mut m = Matrix::zeros(v.field(), rows, cols);
        for (i, x) in v.iter() {
            m.data[i] = x.clone();
        }
        m
    }

    /// Row-major flattening: entry `(r, c)` goes to coordinate `r * cols + c`.
    pub fn to_vector(&self) -> SparseVec {
        SparseVec::from_dense(self.field, &self.data).expect("field-consistent")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[Scalar]> + '_ {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn column(&self, c: usize) -> SparseVec {
        let entries = (0..self.rows).map(|r| (r, self.get(r, c).clone()));
        SparseVec::new(self.field, self.rows, entries).expect("in range")
    }

    /// Image `M x` of a source-coordinate vector.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        assert_eq!(x.dim(), self.cols);
        let mut out = Vec::new();
        for r in 0..self.rows {
            let mut acc = self.field.zero();
            for (c, v) in x.iter() {
                let m = self.get(r, c);
                if !m.is_zero() {
                    acc = &acc + &(m * v);
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        SparseVec::from_sorted_unchecked(self.field, self.rows, out)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        let v = cur + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && self.scalar_value().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the matrix equals `c · I`.
    pub fn scalar_value(&self) -> Option<Scalar> {
        if self.rows != self.cols {
            return None;
        }
        let c = if self.rows == 0 { self.field.one() } else { self.get(0, 0).clone() };
        for r in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(r, k);
                let ok = if r == k { *v == c } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Dense row-major text form, one string per entry.
    pub fn to_artifact_rows(&self) -> Vec<Vec<String>> {
        self.row_vecs().map(|r| r.iter().map(Scalar::to_artifact_string).collect()).collect()
    }
}
