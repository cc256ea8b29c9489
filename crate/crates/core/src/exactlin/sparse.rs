use std::fmt;

use super::Rat;

/// A sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rat)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds a vector from unordered, possibly repeated entries (repeats are summed).
    pub fn from_entries(mut entries: Vec<(usize, Rat)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Rat)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    /// Builds from entries already sorted by strictly increasing index and nonzero.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, Rat)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Rat::one())] }
    }

    pub fn from_dense(values: &[Rat]) -> Self {
        SparseVec { entries: values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect() }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Rat)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rat)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rat {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &Rat)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&self, c: &Rat) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rat, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Rat::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Rat::from_int(-1), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Rat {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Rat::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &(&a[i].1 * &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Reindexes every entry through `f`, summing collisions.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect())
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, v)| (i, v))).finish()
    }
}

impl FromIterator<(usize, Rat)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Rat)>>(iter: T) -> Self {
        SparseVec::from_entries(iter.into_iter().collect())
    }
}

/// A sparse matrix stored column-wise.
///
/// Column `j` is the image of the `j`-th source basis vector, which is how the
/// differentials of every complex in this crate are assembled.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, columns: (0..n).map(SparseVec::unit).collect() }
    }

    /// Panics if a column has an index `>= rows`.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for c in &columns {
            if let Some(m) = c.max_index() {
                assert!(m < rows, "row index {m} out of range for {rows} rows");
            }
        }
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec]) -> Self {
        SparseMatrix::from_columns(rows.len(), rows.to_vec()).transpose_with_rows(cols)
    }

    fn transpose_with_rows(&self, new_rows: usize) -> Self {
        let mut buckets: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); new_rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col.iter() {
                assert!(i < new_rows, "index {i} out of range");
                buckets[i].push((j, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: new_rows, columns: buckets.into_iter().map(SparseVec::from_sorted_unchecked).collect() }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Rat)>) -> Self {
        let mut buckets: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of range for {rows}x{cols}");
            buckets[c].push((r, v));
        }
        SparseMatrix { rows, cols, columns: buckets.into_iter().map(SparseVec::from_entries).collect() }
    }

    pub fn from_dense(rows: &[Vec<Rat>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        SparseMatrix::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))),
        )
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&v| Rat::from_int(v)).collect()).collect();
        SparseMatrix::from_dense(&dense)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.columns[c].get(r)
    }

    /// All nonzero entries as `(row, col, value)`, ordered by column then row.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> + '_ {
        self.columns.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        self.transpose_with_rows(self.rows)
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rat)> = Vec::new();
        for (j, x) in v.iter() {
            assert!(j < self.cols, "vector index {j} out of range");
            for (i, a) in self.columns[j].iter() {
                acc.push((i, a * x));
            }
        }
        SparseVec::from_entries(acc)
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        SparseMatrix { rows: self.rows, cols: other.cols, columns: other.columns.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: self.cols, columns: self.columns.iter().map(|col| col.scale(c)).collect() }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in matrix sum");
        SparseMatrix { rows: self.rows, cols: self.cols, columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    /// Restricts to the given source columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: cols.len(), columns: cols.iter().map(|&j| self.columns[j].clone()).collect() }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SparseMatrix) -> SparseMatrix {
        let shift = self.rows;
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().map(|c| c.map_indices(|i| i + shift)));
        SparseMatrix { rows: self.rows + other.rows, cols: self.cols + other.cols, columns }
    }

    /// Kronecker product: `(A ⊗ B)` acting on `x ⊗ y` with source index
    /// `i * B.cols + j` and target index `r * B.rows + s`.
    pub fn kronecker(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a in &self.columns {
            for b in &other.columns {
                let mut entries = Vec::with_capacity(a.nnz() * b.nnz());
                for (r, x) in a.iter() {
                    for (s, y) in b.iter() {
                        entries.push((r * other.rows + s, x * y));
                    }
                }
                columns.push(SparseVec::from_sorted_unchecked(entries));
            }
        }
        SparseMatrix { rows: self.rows * other.rows, cols: self.cols * other.cols, columns }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}", self.rows, self.cols)?;
        for (i, j, v) in self.entries() {
            write!(f, " ({i},{j})={v}")?;
        }
        write!(f, ")")
    }
}
