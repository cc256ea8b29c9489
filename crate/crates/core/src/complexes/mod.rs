//! Cohomologically graded cochain complexes over ℚ.
//!
//! Differentials have degree `+1`. A [`Complex`] is materialized on an
//! inclusive degree window `[lo, hi]`; each end of the window is either
//! *closed* (the complex is known to vanish beyond it) or *open* (beyond it
//! nothing is known, and any operation needing those degrees fails).
//!
//! Sign conventions: `d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy`, braiding
//! `x⊗y ↦ (-1)^{|x||y|} y⊗x`, shift by `m` multiplies `d` by `(-1)^m`,
//! cone differential `d(x, y) = (-dx, f(x) + dy)`.
//!
//! Homotopy-indexed statements translate by `π_n ↔ H^{-n}`.

mod label;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::exactlin::{kernel_basis, rank, Rat, SparseMatrix, SparseVec, Subspace};

pub use label::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("degree {degree} needs data outside the materialized window [{lo}, {hi}]")]
    WindowViolation { degree: i64, lo: i64, hi: i64 },
    #[error("{0} requires complexes that vanish outside their windows")]
    Unbounded(&'static str),
    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    lo: i64,
    hi: i64,
    closed_below: bool,
    closed_above: bool,
    basis: Vec<Vec<Label>>,
    diffs: Vec<SparseMatrix>,
}

impl Complex {
    /// Assembles a complex from raw parts without validation; see
    /// [`check_complex`]. `diffs[k]` is `d^{lo+k}: C^{lo+k} → C^{lo+k+1}`, one
    /// per adjacent pair in the window.
    pub fn from_parts(lo: i64, basis: Vec<Vec<Label>>, diffs: Vec<SparseMatrix>) -> Complex {
        assert!(!basis.is_empty(), "window must contain at least one degree");
        assert_eq!(diffs.len() + 1, basis.len(), "need one differential per adjacent degree pair");
        let hi = lo + basis.len() as i64 - 1;
        Complex { lo, hi, closed_below: true, closed_above: true, basis, diffs }
    }

    /// Marks the ends of the window as open: outside it the complex is unknown.
    pub fn with_open_ends(mut self, open_below: bool, open_above: bool) -> Complex {
        self.closed_below = !open_below;
        self.closed_above = !open_above;
        self
    }

    pub fn zero() -> Complex {
        Complex::from_parts(0, vec![Vec::new()], Vec::new())
    }

    /// ℚ concentrated in degree 0.
    pub fn unit() -> Complex {
        Complex::from_parts(0, vec![vec![Label::Unit]], Vec::new())
    }

    /// A single vector space in degree `n`.
    pub fn concentrated(n: i64, labels: Vec<Label>) -> Complex {
        Complex::from_parts(n, vec![labels], Vec::new())
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.closed_below && self.closed_above
    }

    pub fn closed_ends(&self) -> (bool, bool) {
        (self.closed_below, self.closed_above)
    }

    /// Whether degree `n` is materialized or known to vanish.
    pub fn is_known(&self, n: i64) -> bool {
        (self.lo..=self.hi).contains(&n) || (n < self.lo && self.closed_below) || (n > self.hi && self.closed_above)
    }

    pub fn basis(&self, n: i64) -> &[Label] {
        if (self.lo..=self.hi).contains(&n) {
            &self.basis[(n - self.lo) as usize]
        } else {
            &[]
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.iter().map(Vec::len).sum()
    }

    /// `d^n`, or a zero matrix of the right shape outside the stored range.
    pub fn differential(&self, n: i64) -> SparseMatrix {
        if n >= self.lo && n < self.hi {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            SparseMatrix::zero(self.dim(n + 1), self.dim(n))
        }
    }

    fn differential_ref(&self, n: i64) -> Option<&SparseMatrix> {
        if n >= self.lo && n < self.hi {
            Some(&self.diffs[(n - self.lo) as usize])
        } else {
            None
        }
    }

    fn require_differential(&self, n: i64) -> Result<(), ComplexError> {
        if self.is_known(n) && self.is_known(n + 1) {
            Ok(())
        } else {
            Err(ComplexError::WindowViolation { degree: n, lo: self.lo, hi: self.hi })
        }
    }

    pub fn can_compute_cohomology(&self, n: i64) -> bool {
        self.require_differential(n - 1).is_ok() && self.require_differential(n).is_ok()
    }

    /// Degrees at which cohomology is computable and possibly nonzero.
    pub fn cohomology_degrees(&self) -> Vec<i64> {
        (self.lo..=self.hi).filter(|&n| self.can_compute_cohomology(n)).collect()
    }

    /// Euler characteristic over the window.
    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi).map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(n) as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexViolation {
    Shape { expected: (usize, usize), found: (usize, usize) },
    SquareNonzero,
}

/// Outcome of [`check_complex`]; `violations` is keyed by the degree `n` of the
/// offending `d^n` (or of `d^{n+1}∘d^n`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub violations: Vec<(i64, ComplexViolation)>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn flagged_degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.violations.iter().map(|(n, _)| *n).collect();
        v.dedup();
        v
    }
}

pub fn check_complex(c: &Complex) -> ComplexReport {
    let mut violations = Vec::new();
    let mut shapes_ok = vec![true; c.diffs.len()];
    for (k, d) in c.diffs.iter().enumerate() {
        let n = c.lo + k as i64;
        let expected = (c.dim(n + 1), c.dim(n));
        let found = (d.nrows(), d.ncols());
        if expected != found {
            shapes_ok[k] = false;
            violations.push((n, ComplexViolation::Shape { expected, found }));
        }
    }
    for k in 0..c.diffs.len().saturating_sub(1) {
        if shapes_ok[k] && shapes_ok[k + 1] && !c.diffs[k + 1].compose(&c.diffs[k]).is_zero() {
            violations.push((c.lo + k as i64, ComplexViolation::SquareNonzero));
        }
    }
    violations.sort_by_key(|v| v.0);
    ComplexReport { violations }
}

/// `H^n` with chosen representatives.
///
/// Representatives are the canonical echelon basis of the complement of the
/// boundaries inside the cycles that vanishes on every boundary pivot, so they
/// are independent of elimination order.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i64,
    boundaries: Subspace,
    classes: Subspace,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        self.classes.basis()
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Coordinates of the class of the cycle `v`. Linear on the whole cochain
    /// space and zero on boundaries.
    pub fn class_of(&self, v: &SparseVec) -> Vec<Rat> {
        self.classes.coordinates(&self.boundaries.reduce(v))
    }
}

pub fn cohomology(c: &Complex, n: i64) -> Result<Cohomology, ComplexError> {
    c.require_differential(n - 1)?;
    c.require_differential(n)?;
    let dim = c.dim(n);
    let cycles = match c.differential_ref(n) {
        Some(d) => kernel_basis(d),
        None => (0..dim).map(SparseVec::unit).collect(),
    };
    let boundaries = match c.differential_ref(n - 1) {
        Some(d) => Subspace::span(dim, d.columns().to_vec()),
        None => Subspace::zero(dim),
    };
    let reduced: Vec<SparseVec> = cycles.iter().map(|z| boundaries.reduce(z)).collect();
    let classes = Subspace::span(dim, reduced);
    Ok(Cohomology { degree: n, boundaries, classes })
}

/// `dim H^n`, by ranks alone.
pub fn cohomology_dim(c: &Complex, n: i64) -> Result<usize, ComplexError> {
    c.require_differential(n - 1)?;
    c.require_differential(n)?;
    let out = c.differential_ref(n).map_or(0, rank);
    let inc = c.differential_ref(n - 1).map_or(0, rank);
    Ok(c.dim(n) - out - inc)
}

/// `degree → dim H^degree` over every computable degree of the window.
pub fn cohomology_table(c: &Complex) -> BTreeMap<i64, usize> {
    let degrees = c.cohomology_degrees();
    let ranks: Vec<(i64, usize)> = (c.lo - 1..=c.hi).into_par_iter().map(|n| (n, c.differential_ref(n).map_or(0, rank))).collect();
    let ranks: BTreeMap<i64, usize> = ranks.into_iter().collect();
    degrees.into_iter().map(|n| (n, c.dim(n) - ranks[&n] - ranks[&(n - 1)])).collect()
}

/// Degree `n` of the result is degree `n + m` of `c`; `d` picks up `(-1)^m`.
pub fn shift(c: &Complex, m: i64) -> Complex {
    let s = Rat::sign(m);
    Complex {
        lo: c.lo - m,
        hi: c.hi - m,
        closed_below: c.closed_below,
        closed_above: c.closed_above,
        basis: c.basis.clone(),
        diffs: c.diffs.iter().map(|d| d.scale(&s)).collect(),
    }
}

pub fn direct_sum(a: &Complex, b: &Complex) -> Result<Complex, ComplexError> {
    if !a.is_bounded() || !b.is_bounded() {
        return Err(ComplexError::Unbounded("direct_sum"));
    }
    let lo = a.lo.min(b.lo);
    let hi = a.hi.max(b.hi);
    let basis = (lo..=hi)
        .map(|n| {
            let mut v: Vec<Label> = a.basis(n).iter().map(|l| Label::summand(0, l.clone())).collect();
            v.extend(b.basis(n).iter().map(|l| Label::summand(1, l.clone())));
            v
        })
        .collect();
    let diffs = (lo..hi).map(|n| a.differential(n).direct_sum(&b.differential(n))).collect();
    Ok(Complex::from_parts(lo, basis, diffs))
}

/// Index bookkeeping for the tensor product: degree `n` is laid out as blocks
/// `C_a^p ⊗ C_b^{n-p}` in increasing `p`, each block row-major in `(x, y)`.
struct TensorLayout {
    offsets: BTreeMap<(i64, i64), usize>,
}

impl TensorLayout {
    fn new(a: &Complex, b: &Complex, n: i64) -> TensorLayout {
        let mut offsets = BTreeMap::new();
        let mut off = 0;
        for p in a.lo..=a.hi {
            let q = n - p;
            if a.dim(p) > 0 && b.dim(q) > 0 {
                offsets.insert((p, q), off);
                off += a.dim(p) * b.dim(q);
            }
        }
        TensorLayout { offsets }
    }
}

pub fn tensor(a: &Complex, b: &Complex) -> Result<Complex, ComplexError> {
    if !a.is_bounded() || !b.is_bounded() {
        return Err(ComplexError::Unbounded("tensor"));
    }
    let lo = a.lo + b.lo;
    let hi = a.hi + b.hi;
    let layouts: Vec<TensorLayout> = (lo..=hi + 1).map(|n| TensorLayout::new(a, b, n)).collect();
    let basis: Vec<Vec<Label>> = (lo..=hi)
        .map(|n| {
            let lay = &layouts[(n - lo) as usize];
            let mut v = Vec::new();
            for &(p, q) in lay.offsets.keys() {
                for x in a.basis(p) {
                    for y in b.basis(q) {
                        v.push(Label::tensor(x.clone(), y.clone()));
                    }
                }
            }
            v
        })
        .collect();
    let diffs = (lo..hi)
        .map(|n| {
            let src = &layouts[(n - lo) as usize];
            let dst = &layouts[(n + 1 - lo) as usize];
            let rows = basis[(n + 1 - lo) as usize].len();
            let cols = basis[(n - lo) as usize].len();
            let mut triplets = Vec::new();
            for (&(p, q), &off) in &src.offsets {
                let (dp, dq) = (a.dim(p), b.dim(q));
                // dx ⊗ y
                if let Some(&toff) = dst.offsets.get(&(p + 1, q)) {
                    let da = a.differential(p);
                    for i in 0..dp {
                        for (r, v) in da.column(i).iter() {
                            for j in 0..dq {
                                triplets.push((toff + r * dq + j, off + i * dq + j, v.clone()));
                            }
                        }
                    }
                }
                // (-1)^p x ⊗ dy
                if let Some(&toff) = dst.offsets.get(&(p, q + 1)) {
                    let db = b.differential(q);
                    let s = Rat::sign(p);
                    let tq = b.dim(q + 1);
                    for i in 0..dp {
                        for j in 0..dq {
                            for (r, v) in db.column(j).iter() {
                                triplets.push((toff + i * tq + r, off + i * dq + j, &s * v));
                            }
                        }
                    }
                }
            }
            SparseMatrix::from_triplets(rows, cols, triplets)
        })
        .collect();
    Ok(Complex::from_parts(lo, basis, diffs))
}

/// The symmetry `a ⊗ b → b ⊗ a`, `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn braiding(a: &Complex, b: &Complex) -> Result<ChainMap, ComplexError> {
    let ab = tensor(a, b)?;
    let ba = tensor(b, a)?;
    let mut components = BTreeMap::new();
    for n in ab.lo..=ab.hi {
        let src = TensorLayout::new(a, b, n);
        let dst = TensorLayout::new(b, a, n);
        let mut triplets = Vec::new();
        for (&(p, q), &off) in &src.offsets {
            let toff = dst.offsets[&(q, p)];
            let s = Rat::sign(p * q);
            let (dp, dq) = (a.dim(p), b.dim(q));
            for i in 0..dp {
                for j in 0..dq {
                    triplets.push((toff + j * dp + i, off + i * dq + j, s.clone()));
                }
            }
        }
        components.insert(n, SparseMatrix::from_triplets(ba.dim(n), ab.dim(n), triplets));
    }
    ChainMap::new(ab, ba, components)
}

/// Smart truncation `τ≤n`: degrees above `n` dropped, degree `n` replaced by
/// its cycles. Keeps `H^k` for `k ≤ n`, kills it above.
pub fn truncate_leq(c: &Complex, n: i64) -> Result<Complex, ComplexError> {
    if n < c.lo {
        if !c.closed_below {
            return Err(ComplexError::WindowViolation { degree: n, lo: c.lo, hi: c.hi });
        }
        return Ok(Complex::zero());
    }
    if n >= c.hi && c.closed_above {
        return Ok(c.clone());
    }
    c.require_differential(n)?;
    let cycles = Subspace::span(c.dim(n), kernel_basis(&c.differential(n)));
    let mut basis: Vec<Vec<Label>> = c.basis[..(n - c.lo) as usize].to_vec();
    basis.push((0..cycles.dim()).map(Label::Cycle).collect());
    let mut diffs: Vec<SparseMatrix> = c.diffs[..(n - c.lo) as usize].to_vec();
    if n > c.lo {
        let d = c.differential(n - 1);
        let cols = d.columns().iter().map(|col| SparseVec::from_dense(&cycles.coordinates(col))).collect();
        *diffs.last_mut().unwrap() = SparseMatrix::from_columns(cycles.dim(), cols);
    }
    let mut out = Complex::from_parts(c.lo, basis, diffs);
    out.closed_below = c.closed_below;
    Ok(out)
}

/// Smart truncation `τ≥n`: degrees below `n` dropped, degree `n` replaced by a
/// complement of its boundaries (spanned by standard basis vectors, which keep
/// their labels). Keeps `H^k` for `k ≥ n`, kills it below.
pub fn truncate_geq(c: &Complex, n: i64) -> Result<Complex, ComplexError> {
    if n > c.hi {
        if !c.closed_above {
            return Err(ComplexError::WindowViolation { degree: n, lo: c.lo, hi: c.hi });
        }
        return Ok(Complex::zero());
    }
    if n <= c.lo && c.closed_below {
        return Ok(c.clone());
    }
    c.require_differential(n - 1)?;
    let boundaries = Subspace::span(c.dim(n), c.differential(n - 1).columns().to_vec());
    let keep: Vec<usize> = (0..c.dim(n)).filter(|&i| !boundaries.is_pivot(i)).collect();
    let k = (n - c.lo) as usize;
    let mut basis: Vec<Vec<Label>> = vec![keep.iter().map(|&i| c.basis[k][i].clone()).collect()];
    basis.extend(c.basis[k + 1..].iter().cloned());
    let mut diffs: Vec<SparseMatrix> = c.diffs[k..].to_vec();
    if !diffs.is_empty() {
        diffs[0] = diffs[0].select_columns(&keep);
    }
    let mut out = Complex::from_parts(n, basis, diffs);
    out.closed_above = c.closed_above;
    Ok(out)
}

/// A degree-0 map of complexes, one matrix per degree of the source window.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    components: BTreeMap<i64, SparseMatrix>,
}

impl ChainMap {
    /// Checks shapes and `f d = d f` on every degree where both sides are known.
    pub fn new(source: Complex, target: Complex, components: BTreeMap<i64, SparseMatrix>) -> Result<ChainMap, ComplexError> {
        let map = ChainMap { source, target, components };
        map.validate()?;
        Ok(map)
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let components = (c.lo..=c.hi).map(|n| (n, SparseMatrix::identity(c.dim(n)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn component(&self, n: i64) -> SparseMatrix {
        self.components.get(&n).cloned().unwrap_or_else(|| SparseMatrix::zero(self.target.dim(n), self.source.dim(n)))
    }

    fn validate(&self) -> Result<(), ComplexError> {
        for (&n, m) in &self.components {
            if (m.nrows(), m.ncols()) != (self.target.dim(n), self.source.dim(n)) {
                return Err(ComplexError::InvalidChainMap(format!("component {n} has shape {}x{}", m.nrows(), m.ncols())));
            }
        }
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi.max(self.target.hi);
        for n in lo - 1..=hi {
            let known = self.source.require_differential(n).is_ok() && self.target.require_differential(n).is_ok();
            if !known {
                continue;
            }
            let lhs = self.component(n + 1).compose(&self.source.differential(n));
            let rhs = self.target.differential(n).compose(&self.component(n));
            if lhs != rhs {
                return Err(ComplexError::InvalidChainMap(format!("does not commute with d in degree {n}")));
            }
        }
        Ok(())
    }
}

/// Mapping cone: `cone^n = source^{n+1} ⊕ target^n`.
pub fn cone(f: &ChainMap) -> Result<Complex, ComplexError> {
    let (a, b) = (&f.source, &f.target);
    if !a.is_bounded() || !b.is_bounded() {
        return Err(ComplexError::Unbounded("cone"));
    }
    f.validate()?;
    let lo = (a.lo - 1).min(b.lo);
    let hi = (a.hi - 1).max(b.hi);
    let basis = (lo..=hi)
        .map(|n| {
            let mut v: Vec<Label> = a.basis(n + 1).iter().map(|l| Label::summand(0, l.clone())).collect();
            v.extend(b.basis(n).iter().map(|l| Label::summand(1, l.clone())));
            v
        })
        .collect();
    let minus = Rat::from_int(-1);
    let diffs = (lo..hi)
        .map(|n| {
            let (sa, ta) = (a.dim(n + 1), a.dim(n + 2));
            let rows = ta + b.dim(n + 1);
            let da = a.differential(n + 1);
            let db = b.differential(n);
            let fm = f.component(n + 1);
            let mut cols = Vec::with_capacity(sa + b.dim(n));
            for i in 0..sa {
                let top = da.column(i).scale(&minus);
                let bottom = fm.column(i).map_indices(|r| r + ta);
                cols.push(top.add(&bottom));
            }
            for j in 0..b.dim(n) {
                cols.push(db.column(j).map_indices(|r| r + ta));
            }
            SparseMatrix::from_columns(rows, cols)
        })
        .collect();
    Ok(Complex::from_parts(lo, basis, diffs))
}

pub fn is_quasi_iso(f: &ChainMap) -> Result<bool, ComplexError> {
    let c = cone(f)?;
    Ok(cohomology_table(&c).values().all(|&d| d == 0))
}

/// The matrix of `H^n(f)` in the representative bases of source and target.
pub fn induced_on_cohomology(f: &ChainMap, n: i64) -> Result<SparseMatrix, ComplexError> {
    let hs = cohomology(&f.source, n)?;
    let ht = cohomology(&f.target, n)?;
    let m = f.component(n);
    let cols = hs.representatives().iter().map(|z| SparseVec::from_dense(&ht.class_of(&m.mul_vec(z)))).collect();
    Ok(SparseMatrix::from_columns(ht.dim(), cols))
}

#[cfg(test)]
mod tests;
