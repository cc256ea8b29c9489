//! Sparse exact linear algebra over ℚ.
//!
//! Everything downstream (cohomology, truncations, Hopf structure constants)
//! reduces to the three operations here: [`rank`], [`kernel_basis`] and
//! [`cokernel_quotient`].

mod elim;
mod rat;
mod sparse;

pub use elim::{row_reduce, Pivoting, RowEchelon, Subspace, DENSE_CUTOFF};
pub use rat::{denominator_lcm, ParseRatError, Rat};
pub use sparse::{SparseMatrix, SparseVec};

pub fn rank(m: &SparseMatrix) -> usize {
    rank_with(m, Pivoting::Auto)
}

pub fn rank_with(m: &SparseMatrix, pivoting: Pivoting) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    row_reduce(m.columns().to_vec(), m.nrows(), pivoting, false).rank()
}

/// A basis of `{v : m v = 0}`, exactly `cols - rank` vectors.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    kernel_basis_with(m, Pivoting::Auto)
}

pub fn kernel_basis_with(m: &SparseMatrix, pivoting: Pivoting) -> Vec<SparseVec> {
    if m.nrows() == 0 {
        return (0..m.ncols()).map(SparseVec::unit).collect();
    }
    row_reduce(m.row_vectors(), m.ncols(), pivoting, true).kernel()
}

/// Some `x` with `m x = b`, or `None` if the system is inconsistent. Free
/// variables are set to zero.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let n = m.ncols();
    let mut rows = m.row_vectors();
    for (i, c) in b.iter() {
        rows[i] = rows[i].add(&SparseVec::unit(n).scale(c));
    }
    let ech = row_reduce(rows, n + 1, Pivoting::Auto, true);
    let mut x = Vec::new();
    for (p, row) in &ech.rows {
        if *p == n {
            return None;
        }
        let v = row.get(n);
        if !v.is_zero() {
            x.push((*p, v));
        }
    }
    Some(SparseVec::from_entries(x))
}

/// `ℚ^rows / im(m)`, presented by coordinate representatives.
#[derive(Clone, Debug)]
pub struct Cokernel {
    image: Subspace,
    representatives: Vec<usize>,
}

impl Cokernel {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Indices `i` whose standard basis vectors `e_i` represent a basis of the
    /// quotient.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative_vectors(&self) -> Vec<SparseVec> {
        self.representatives.iter().map(|&i| SparseVec::unit(i)).collect()
    }

    pub fn image(&self) -> &Subspace {
        &self.image
    }

    /// Coordinates of the class of `v` against the representatives.
    pub fn reduce(&self, v: &SparseVec) -> Vec<Rat> {
        let r = self.image.reduce(v);
        self.representatives.iter().map(|&i| r.get(i)).collect()
    }
}

pub fn cokernel_quotient(m: &SparseMatrix) -> Cokernel {
    cokernel_quotient_with(m, Pivoting::Auto)
}

pub fn cokernel_quotient_with(m: &SparseMatrix, pivoting: Pivoting) -> Cokernel {
    let image = Subspace::span_with(m.nrows(), m.columns().to_vec(), pivoting);
    let representatives = (0..m.nrows()).filter(|&i| !image.is_pivot(i)).collect();
    Cokernel { image, representatives }
}
