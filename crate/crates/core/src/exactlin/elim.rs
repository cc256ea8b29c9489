//! Gaussian elimination over the rationals.
//!
//! Three engines share one output type:
//! - sparse Markowitz: pivots chosen to limit fill-in (shortest row, then the
//!   least populated column within it),
//! - sparse natural: pivots in increasing column order, which yields the
//!   canonical reduced row echelon form,
//! - dense fraction-free (Bareiss) for small blocks.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::denominator_lcm;
use super::{Rat, SparseVec};

/// Below this size (in both dimensions) elimination runs on a dense
/// fraction-free array instead of sparse rows.
pub const DENSE_CUTOFF: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pivoting {
    /// Dense Bareiss below [`DENSE_CUTOFF`], sparse Markowitz above.
    Auto,
    Markowitz,
    Natural,
    Dense,
}

impl Pivoting {
    fn resolve(self, nvecs: usize, ncols: usize) -> Pivoting {
        match self {
            Pivoting::Auto if nvecs < DENSE_CUTOFF && ncols < DENSE_CUTOFF => Pivoting::Dense,
            Pivoting::Auto => Pivoting::Markowitz,
            p => p,
        }
    }
}

/// Result of row reduction: normalized pivot rows (pivot entry 1).
///
/// When `reduced` is set, every pivot column is zero in all other rows.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub ncols: usize,
    /// `(pivot column, row)`, sorted by pivot column.
    pub rows: Vec<(usize, SparseVec)>,
    pub reduced: bool,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Null space basis of the reduced matrix, one vector per free column in
    /// increasing order.
    pub fn kernel(&self) -> Vec<SparseVec> {
        assert!(self.reduced, "kernel requires a fully reduced echelon form");
        let mut is_pivot = vec![false; self.ncols];
        for (c, _) in &self.rows {
            is_pivot[*c] = true;
        }
        let mut slot = vec![usize::MAX; self.ncols];
        let mut vecs: Vec<Vec<(usize, Rat)>> = Vec::new();
        for f in 0..self.ncols {
            if !is_pivot[f] {
                slot[f] = vecs.len();
                vecs.push(vec![(f, Rat::one())]);
            }
        }
        for (c, row) in &self.rows {
            for (f, v) in row.iter() {
                if !is_pivot[f] {
                    vecs[slot[f]].push((*c, -v));
                }
            }
        }
        vecs.into_iter().map(SparseVec::from_entries).collect()
    }
}

/// Row-reduces `vectors` (each of length `ncols`).
pub fn row_reduce(vectors: Vec<SparseVec>, ncols: usize, pivoting: Pivoting, reduced: bool) -> RowEchelon {
    match pivoting.resolve(vectors.len(), ncols) {
        Pivoting::Dense => dense_bareiss(&vectors, ncols, reduced),
        Pivoting::Natural => sparse_eliminate(vectors, ncols, reduced, false),
        Pivoting::Markowitz => sparse_eliminate(vectors, ncols, reduced, true),
        Pivoting::Auto => unreachable!(),
    }
}

fn sparse_eliminate(vectors: Vec<SparseVec>, ncols: usize, reduced: bool, markowitz: bool) -> RowEchelon {
    let mut rows = vectors;
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    let mut active: Vec<usize> = Vec::new();
    let mut is_active = vec![false; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        if row.is_zero() {
            continue;
        }
        for (c, _) in row.iter() {
            assert!(c < ncols, "column {c} out of range");
            col_rows[c].insert(r);
        }
        active.push(r);
        is_active[r] = true;
    }

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut cursor = 0usize;
    loop {
        active.retain(|&r| is_active[r]);
        if active.is_empty() {
            break;
        }
        let (p, c) = if markowitz {
            let &p = active.iter().min_by_key(|&&r| (rows[r].nnz(), r)).unwrap();
            let c = rows[p].iter().min_by_key(|(c, v)| (col_rows[*c].len(), v.bit_size(), *c)).map(|(c, _)| c).unwrap();
            (p, c)
        } else {
            let mut found = None;
            while cursor < ncols {
                if let Some(&r) = col_rows[cursor].iter().find(|&&r| is_active[r]) {
                    found = Some((r, cursor));
                    break;
                }
                cursor += 1;
            }
            match found {
                Some(x) => x,
                None => break,
            }
        };

        let inv = rows[p].get(c).recip();
        rows[p] = rows[p].scale(&inv);
        is_active[p] = false;
        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != p && (reduced || is_active[r])).collect();
        for r in targets {
            let f = -rows[r].get(c);
            let new = rows[r].axpy(&f, &rows[p]);
            update_support(&mut col_rows, r, &rows[r], &new);
            if new.is_zero() {
                is_active[r] = false;
            }
            rows[r] = new;
        }
        if !reduced {
            for (cc, _) in rows[p].iter() {
                col_rows[cc].remove(&p);
            }
        }
        pivots.push((p, c));
        if !markowitz {
            cursor = c + 1;
        }
    }

    let mut out: Vec<(usize, SparseVec)> = pivots.into_iter().map(|(p, c)| (c, std::mem::take(&mut rows[p]))).collect();
    out.sort_by_key(|e| e.0);
    RowEchelon { ncols, rows: out, reduced }
}

fn update_support(col_rows: &mut [BTreeSet<usize>], r: usize, old: &SparseVec, new: &SparseVec) {
    let (a, b) = (old.entries(), new.entries());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            col_rows[a[i].0].remove(&r);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            col_rows[b[j].0].insert(r);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
}

fn dense_bareiss(vectors: &[SparseVec], ncols: usize, reduced: bool) -> RowEchelon {
    // Clear denominators row by row so the forward pass stays in ℤ.
    let mut a: Vec<Vec<BigInt>> = vectors
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| {
            let l = denominator_lcm(v.iter().map(|(_, x)| x));
            let mut row = vec![BigInt::zero(); ncols];
            for (c, x) in v.iter() {
                row[c] = x.numer() * (&l / x.denom());
            }
            row
        })
        .collect();
    let n = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..ncols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..ncols {
                let t = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = t / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }

    let mut rows: Vec<Vec<Rat>> = a
        .into_iter()
        .take(r)
        .zip(&pivot_cols)
        .map(|(row, &c)| {
            let p = Rat::from(row[c].clone());
            row.into_iter().map(|x| &Rat::from(x) / &p).collect()
        })
        .collect();
    if reduced {
        for k in (0..rows.len()).rev() {
            let c = pivot_cols[k];
            let (head, tail) = rows.split_at_mut(k);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let f = row[c].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..ncols {
                    if !pivot_row[j].is_zero() {
                        row[j] = &row[j] - &(&f * &pivot_row[j]);
                    }
                }
            }
        }
    }
    RowEchelon { ncols, rows: pivot_cols.into_iter().zip(rows).map(|(c, row)| (c, SparseVec::from_dense(&row))).collect(), reduced }
}

/// A subspace of `ℚ^ambient` held in canonical reduced row echelon form
/// (pivot = leading index), so equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn span(ambient: usize, vectors: Vec<SparseVec>) -> Self {
        Subspace::span_with(ambient, vectors, Pivoting::Auto)
    }

    /// Spans `vectors`; the result is canonical whatever engine is used.
    pub fn span_with(ambient: usize, vectors: Vec<SparseVec>, pivoting: Pivoting) -> Self {
        let ech = match pivoting.resolve(vectors.len(), ambient) {
            Pivoting::Markowitz => {
                let basis = row_reduce(vectors, ambient, Pivoting::Markowitz, false);
                let rows = basis.rows.into_iter().map(|(_, r)| r).collect();
                row_reduce(rows, ambient, Pivoting::Natural, true)
            }
            p => row_reduce(vectors, ambient, p, true),
        };
        let (pivots, rows) = ech.rows.into_iter().unzip();
        Subspace { ambient, pivots, rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivots.binary_search(&i).is_ok()
    }

    /// Coefficients of `v` against the basis, read off at the pivots. Exact
    /// only when `v` lies in the subspace; otherwise it is the coordinate part
    /// of the projection along the non-pivot directions.
    pub fn coordinates(&self, v: &SparseVec) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, x) in v.iter() {
            if let Ok(k) = self.pivots.binary_search(&i) {
                out[k] = x.clone();
            }
        }
        out
    }

    /// The normal form of `v` modulo the subspace: zero at every pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rat)> = v.entries().to_vec();
        for (i, x) in v.iter() {
            if let Ok(k) = self.pivots.binary_search(&i) {
                acc.extend(self.rows[k].iter().map(|(j, y)| (j, -(x * y))));
            }
        }
        SparseVec::from_entries(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn combine(&self, coeffs: &[Rat]) -> SparseVec {
        let mut acc = Vec::new();
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if !c.is_zero() {
                acc.extend(row.iter().map(|(j, y)| (j, c * y)));
            }
        }
        SparseVec::from_entries(acc)
    }
}
