use std::collections::{BTreeMap, HashMap};

use super::{Field, LinAlgError, Scalar, SparseVec};

/// Reduced row-echelon basis of a subspace of `field^dim`.
///
/// Each row has a leading 1 at its pivot column, pivot columns vanish in every
/// other row, and rows are ordered by pivot. The representation is canonical:
/// two bases are equal iff they span the same subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: Field,
    dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Residual of `v` after removing its component along the pivots; zero iff
    /// `v` lies in the span.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        let mut w = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(p);
            if !c.is_zero() {
                w = w.add_scaled(&-&c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.residual(v).is_zero()
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim).filter(|c| !is_pivot[*c]).collect()
    }

    /// Column view of the non-pivot entries: column → [(row position, value)].
    pub(crate) fn column_index(&self) -> HashMap<usize, Vec<(usize, Scalar)>> {
        let mut cols: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter() {
                if c != self.pivots[r] {
                    cols.entry(c).or_default().push((r, v.clone()));
                }
            }
        }
        cols
    }
}

fn check_rows(field: Field, dim: usize, rows: &[SparseVec]) -> Result<(), LinAlgError> {
    for r in rows {
        if r.dim() != dim {
            return Err(LinAlgError::DimensionMismatch { expected: dim, found: r.dim() });
        }
        if r.field() != field {
            return Err(LinAlgError::FieldMismatch { expected: field, found: r.field() });
        }
    }
    Ok(())
}

/// Reduced row-echelon form of the row span of `rows`.
///
/// Rows are taken in input order; each is reduced on its lowest nonzero column
/// against the pivots found so far. A final back-substitution pass clears the
/// remaining pivot columns.
pub fn rref(field: Field, dim: usize, rows: &[SparseVec]) -> Result<SubspaceBasis, LinAlgError> {
    check_rows(field, dim, rows)?;
    let mut echelon: HashMap<usize, SparseVec> = HashMap::new();
    for row in rows {
        insert_row(&mut echelon, row.clone());
    }
    Ok(back_substitute(field, dim, echelon))
}

fn insert_row(echelon: &mut HashMap<usize, SparseVec>, mut w: SparseVec) {
    while let Some((c, v)) = w.leading() {
        match echelon.get(&c) {
            Some(p) => {
                let coef = -v;
                w = w.add_scaled(&coef, p);
            }
            None => {
                let inv = v.inv().expect("leading entry is nonzero");
                let normalized = w.scale(&inv);
                echelon.insert(c, normalized);
                return;
            }
        }
    }
}

fn back_substitute(field: Field, dim: usize, echelon: HashMap<usize, SparseVec>) -> SubspaceBasis {
    let ordered: BTreeMap<usize, SparseVec> = echelon.into_iter().collect();
    let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (&p, row) in ordered.iter().rev() {
        let mut r = row.clone();
        let hits: Vec<(usize, Scalar)> =
            row.iter().filter(|(c, _)| *c != p && ordered.contains_key(c)).map(|(c, v)| (c, v.clone())).collect();
        for (c, v) in hits {
            r = r.add_scaled(&-&v, &reduced[&c]);
        }
        reduced.insert(p, r);
    }
    let pivots: Vec<usize> = reduced.keys().copied().collect();
    let rows: Vec<SparseVec> = reduced.into_values().collect();
    SubspaceBasis { field, dim, rows, pivots }
}

/// Decides whether `v` lies in the span of `basis`.
pub fn member(v: &SparseVec, basis: &SubspaceBasis) -> Result<bool, LinAlgError> {
    if v.dim() != basis.dim {
        return Err(LinAlgError::DimensionMismatch { expected: basis.dim, found: v.dim() });
    }
    if v.field() != basis.field {
        return Err(LinAlgError::FieldMismatch { expected: basis.field, found: v.field() });
    }
    Ok(basis.contains(v))
}

/// Basis (in reduced row-echelon form) of `{x : <c, x> = 0 for every constraint c}`.
pub fn solve_homogeneous(
    field: Field,
    unknowns: usize,
    constraints: &[SparseVec],
) -> Result<SubspaceBasis, LinAlgError> {
    let system = rref(field, unknowns, constraints)?;
    Ok(nullspace_of(&system))
}

/// Kernel of an already-reduced system.
pub fn nullspace_of(system: &SubspaceBasis) -> SubspaceBasis {
    let field = system.field;
    let cols = system.column_index();
    let minus_one = field.from_i64(-1);
    let mut gens = Vec::new();
    for f in system.free_columns() {
        let mut entries = vec![(f, field.one())];
        if let Some(hits) = cols.get(&f) {
            for (r, v) in hits {
                entries.push((system.pivots[*r], &minus_one * v));
            }
        }
        gens.push(SparseVec::new(field, system.dim, entries).expect("indices in range"));
    }
    rref(field, system.dim, &gens).expect("generators share one dimension")
}

/// True when the two bases span the same subspace.
pub fn same_span(a: &SubspaceBasis, b: &SubspaceBasis) -> bool {
    a.field == b.field && a.dim == b.dim && a.rows == b.rows
}
