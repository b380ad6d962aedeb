use super::{Field, LinAlgError, Scalar};

/// Sparse vector over one field. Entries are sorted by index, never zero, and
/// every index is below `dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec {
    field: Field,
    dim: usize,
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero(field: Field, dim: usize) -> Self {
        SparseVec { field, dim, entries: Vec::new() }
    }

    pub fn unit(field: Field, dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range {dim}");
        SparseVec { field, dim, entries: vec![(index, field.one())] }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs. Repeated indices
    /// are summed and zeros dropped.
    pub fn new(
        field: Field,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Result<Self, LinAlgError> {
        let mut raw: Vec<(usize, Scalar)> = Vec::new();
        for (i, v) in entries {
            if i >= dim {
                return Err(LinAlgError::IndexOutOfRange { index: i, dim });
            }
            if v.field() != field {
                return Err(LinAlgError::FieldMismatch { expected: field, found: v.field() });
            }
            raw.push((i, v));
        }
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w = &*w + &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Ok(SparseVec { field, dim, entries: out })
    }

    pub fn from_dense(field: Field, values: &[Scalar]) -> Result<Self, LinAlgError> {
        SparseVec::new(field, values.len(), values.iter().cloned().enumerate())
    }

    pub fn from_i64s(field: Field, values: &[i64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (i, field.from_i64(*v)))
            .collect::<Vec<_>>();
        SparseVec::new(field, values.len(), entries).expect("indices in range")
    }

    /// Internal constructor for entries already sorted, distinct, and nonzero.
    pub(crate) fn from_sorted_unchecked(field: Field, dim: usize, entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(i, v)| *i < dim && !v.is_zero()));
        SparseVec { field, dim, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.field, self.dim);
        }
        let entries = self.entries.iter().map(|(i, v)| (*i, v * c)).collect();
        SparseVec { field: self.field, dim: self.dim, entries }
    }

    /// `self + c * other`, merged in one pass.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let s = x + &(c * y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { field: self.field, dim: self.dim, entries: out }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&self.field.from_i64(-1), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = self.field.zero();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc = &acc + &(x * y);
                a.next();
                b.next();
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_merges_and_drops_zeros() {
        let f = Field::Rational;
        let v = SparseVec::new(f, 4, vec![(2, f.from_i64(1)), (0, f.from_i64(3)), (2, f.from_i64(-1))]).unwrap();
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.get(0), f.from_i64(3));
        assert!(v.get(2).is_zero());
        assert!(SparseVec::new(f, 2, vec![(2, f.one())]).is_err());
    }

    #[test]
    fn add_scaled_cancels() {
        let f = Field::Prime(3);
        let a = SparseVec::from_i64s(f, &[1, 2, 0]);
        let b = SparseVec::from_i64s(f, &[1, 0, 1]);
        let c = a.add_scaled(&f.from_i64(-1), &b);
        assert_eq!(c, SparseVec::from_i64s(f, &[0, 2, 2]));
        assert_eq!(a.dot(&b), f.one());
    }
}
