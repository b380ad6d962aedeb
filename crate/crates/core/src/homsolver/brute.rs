use super::{check_compatible, HomBasis, HomError, SlotChecker};
use crate::encoder::DistModule;
use crate::exactlin::{rref, Field, Matrix, Scalar, SparseVec};

/// Default bound on the number of matrices scanned.
pub const DEFAULT_BRUTE_GUARD: u128 = 1 << 20;

/// `Hom(src, dst)` over a prime field by enumerating every matrix, keeping
/// those that carry each slot into its counterpart, and reducing the
/// survivors. A test oracle for [`super::hom_space`].
pub fn brute_force_hom_space(src: &DistModule, dst: &DistModule) -> Result<HomBasis, HomError> {
    brute_force_hom_space_guarded(src, dst, DEFAULT_BRUTE_GUARD)
}

pub fn brute_force_hom_space_guarded(src: &DistModule, dst: &DistModule, guard: u128) -> Result<HomBasis, HomError> {
    brute_force_scan(src, dst, guard).map(|(basis, _)| basis)
}

/// Matrices scanned and matrices kept by one brute-force run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteStats {
    pub scanned: u128,
    pub survivors: usize,
}

pub fn brute_force_scan(src: &DistModule, dst: &DistModule, guard: u128) -> Result<(HomBasis, BruteStats), HomError> {
    check_compatible(src, dst)?;
    let field = src.field();
    let Field::Prime(p) = field else {
        return Err(HomError::NotPrimeField(field));
    };
    let (rows, cols) = (dst.rank(), src.rank());
    let cells = rows * cols;
    let size = (p as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if size > guard {
        return Err(HomError::GuardExceeded { size, guard });
    }
    let checker = SlotChecker::new(dst);
    let residues: Vec<Scalar> = (0..p).map(|r| Scalar::from_residue(field, r).expect("residue below p")).collect();
    let mut digits = vec![0usize; cells];
    let mut survivors: Vec<SparseVec> = Vec::new();
    loop {
        let mut phi = Matrix::zeros(field, rows, cols);
        for (i, &d) in digits.iter().enumerate() {
            if d != 0 {
                phi.set(i / cols, i % cols, residues[d].clone());
            }
        }
        if checker.check(src, &phi).is_ok() {
            survivors.push(phi.to_vector());
        }
        let mut pos = 0;
        loop {
            if pos == cells {
                let solution = rref(field, cells, &survivors).expect("uniform dimension");
                let stats = BruteStats { scanned: size, survivors: survivors.len() };
                return Ok((HomBasis::from_solution(src, dst, &solution), stats));
            }
            digits[pos] += 1;
            if digits[pos] < p as usize {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
