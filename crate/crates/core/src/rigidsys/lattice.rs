use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A sublattice of ℤ^dim in Hermite normal form: rows in echelon form with
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl IntLattice {
    /// Lattice spanned by the given integer rows.
    pub fn from_rows(dim: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == dim), "rows must have length {dim}");
        let mut pending: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        let mut done: Vec<Vec<BigInt>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` across the pending rows.
            loop {
                let mut live: Vec<usize> = (0..pending.len()).filter(|&i| !pending[i][col].is_zero()).collect();
                if live.len() <= 1 {
                    break;
                }
                live.sort_by(|&a, &b| pending[a][col].abs().cmp(&pending[b][col].abs()).then(a.cmp(&b)));
                let small = live[0];
                let pivot_row = pending[small].clone();
                for &i in &live[1..] {
                    let q = pending[i][col].div_floor(&pivot_row[col]);
                    for (x, y) in pending[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            if let Some(i) = pending.iter().position(|r| !r[col].is_zero()) {
                let mut row = pending.swap_remove(i);
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                }
                for earlier in done.iter_mut() {
                    let q = earlier[col].div_floor(&row[col]);
                    if !q.is_zero() {
                        for (x, y) in earlier.iter_mut().zip(&row) {
                            *x -= &q * y;
                        }
                    }
                }
                done.push(row);
                pivots.push(col);
            }
            pending.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
        IntLattice { dim, rows: done, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Membership by reduction against the echelon rows.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.dim);
        let mut r = x.to_vec();
        let mut next = 0;
        for col in 0..self.dim {
            if next < self.pivots.len() && self.pivots[next] == col {
                let row = &self.rows[next];
                let (q, rem) = r[col].div_rem(&row[col]);
                if !rem.is_zero() {
                    return false;
                }
                if !q.is_zero() {
                    for (a, b) in r.iter_mut().zip(row) {
                        *a -= &q * b;
                    }
                }
                next += 1;
            } else if !r[col].is_zero() {
                return false;
            }
        }
        true
    }
}
