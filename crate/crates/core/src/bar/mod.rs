//! The reduced bar complex `B(A) = ⊕ (sĀ)^{⊗n}` with its Hopf structure.
//!
//! Words are graded by `Σ (|a_i| - 1)` and split into independent pieces by
//! total weight and by the total grade of their letters (see
//! [`LetterGrading`]). With a weight bound or a monomial-length cap every
//! computed piece is exact. With a plain word-length cap the truncation
//! `B_{≤N}` is a subcomplex, and only degrees that longer words cannot reach
//! are reported as stable.

mod cech;
mod oracle;
mod word;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::complexes::{cohomology, cohomology_table, direct_sum, Cohomology, Complex, ComplexError, Label};
use crate::dga::{validate, AugmentedDGA, DgaError, LetterGrading, LetterTable, Presentation};
use crate::exactlin::{Rat, SparseMatrix, SparseVec};

pub use cech::{cech_level, CechLevel};
pub use oracle::{comonadic_oracle, OracleReport, OracleRow};
pub use word::{
    antipode, antipode_of, apply_left, apply_right, coproduct_of, counit, deconcatenation, differential, differential_of, shuffle_elements,
    shuffle_product, tensor_differential, tensor_product, BarElement, BarWord, TensorElement,
};

/// Largest number of basis words any single construction may enumerate.
pub const MAX_WORDS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BarError {
    #[error("the algebra fails validation: {0}")]
    InvalidAlgebra(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{0}")]
    ForeignWord(String),
    #[error("a word of grade {grade} lies beyond the bound {bound}")]
    BeyondBound { grade: usize, bound: usize },
    #[error("invalid bound or window: {0}")]
    BadBound(String),
    #[error("{what} needs {size} basis elements, above the limit {limit}")]
    TooLarge { what: String, size: usize, limit: usize },
    #[error("{0}")]
    Unsupported(String),
}

/// How far the bar construction is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BarBound {
    /// All words of total weight at most `W`; exact for Adams-positive inputs.
    Weight(i64),
    /// Words of length at most `N` (structure constants) or of total
    /// monomial length at most `N` (free presentations with linear `d`).
    WordLength(usize),
}

/// Which degrees of a truncated construction agree with the untruncated one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// Every computed piece is exact.
    Exact,
    /// Words longer than `cap` occupy degrees in `[lowest, highest]`,
    /// `None` meaning unbounded on that side.
    Capped { cap: usize, lowest: Option<i64>, highest: Option<i64> },
}

impl Stability {
    /// From the range of suspended letter degrees.
    pub fn from_letter_range(cap: usize, range: Option<(i64, i64)>) -> Stability {
        match range {
            None => Stability::Exact,
            Some((smin, smax)) => {
                let n = cap as i64 + 1;
                Stability::Capped { cap, lowest: (smin >= 0).then_some(n * smin), highest: (smax <= 0).then_some(n * smax) }
            }
        }
    }

    /// No word beyond the cap has degree `m`.
    pub fn is_complete(&self, m: i64) -> bool {
        match *self {
            Stability::Exact => true,
            Stability::Capped { lowest, highest, .. } => lowest.is_some_and(|l| m < l) || highest.is_some_and(|h| m > h),
        }
    }

    /// `H^m` of the truncation equals `H^m` of the whole construction.
    pub fn is_stable(&self, m: i64) -> bool {
        self.is_complete(m) && self.is_complete(m - 1)
    }
}

/// One row of a cohomology table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableRow {
    pub weight: i64,
    pub degree: i64,
    pub dim: usize,
}

/// The words of one `(weight, grade)` piece and their complex.
#[derive(Clone, Debug)]
pub struct BarPiece {
    weight: i64,
    grade: usize,
    complex: Complex,
    words: BTreeMap<i64, Vec<BarWord>>,
    index: HashMap<Vec<u32>, usize>,
}

impl BarPiece {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Basis words in degree `n`, in basis order.
    pub fn words(&self, n: i64) -> &[BarWord] {
        self.words.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Coordinates of a homogeneous element of this piece.
    pub fn vector(&self, x: &BarElement) -> Result<(i64, SparseVec), BarError> {
        let mut degree = None;
        let mut entries = Vec::new();
        for (w, c) in x.terms() {
            if *degree.get_or_insert(w.degree()) != w.degree() {
                return Err(BarError::Unsupported("element is not homogeneous in degree".into()));
            }
            let i = self.index.get(w.letters()).filter(|&&i| self.words(w.degree()).get(i) == Some(w)).ok_or_else(|| {
                BarError::ForeignWord(format!("word {w} is not a basis word of piece (weight {}, grade {})", self.weight, self.grade))
            })?;
            entries.push((*i, c.clone()));
        }
        Ok((degree.unwrap_or(0), SparseVec::from_entries(entries)))
    }

    pub fn element(&self, n: i64, v: &SparseVec) -> BarElement {
        let mut e = BarElement::zero();
        for (i, c) in v.iter() {
            e.add_term(self.words(n)[i].clone(), c.clone());
        }
        e
    }
}

/// The reduced bar complex of an augmented dg-algebra, split into pieces.
#[derive(Clone, Debug)]
pub struct BarComplex {
    algebra: AugmentedDGA,
    letters: Arc<LetterTable>,
    bound: BarBound,
    window: Option<(i64, i64)>,
    pieces: BTreeMap<(i64, usize), BarPiece>,
    stability: Stability,
}

/// Builds the bar complex. `window` restricts the cohomological degrees of
/// interest; without it every piece is materialized in full.
pub fn bar_complex(a: &AugmentedDGA, window: Option<(i64, i64)>, bound: BarBound) -> Result<BarComplex, BarError> {
    let report = validate(a);
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(BarError::InvalidAlgebra(lines.join("; ")));
    }
    if let Some((lo, hi)) = window {
        if lo > hi {
            return Err(BarError::BadBound(format!("empty window [{lo}, {hi}]")));
        }
    }
    let letters = Arc::new(letter_table(a, bound)?);
    let words = enumerate_words(&letters, bound)?;
    let stability = match letters.grading() {
        LetterGrading::All => Stability::from_letter_range(cap_of(bound), letters.suspended_degree_range()),
        _ => Stability::Exact,
    };
    let built: Vec<((i64, usize), Option<BarPiece>)> =
        words.into_par_iter().map(|(key, by_degree)| (key, build_piece(&letters, key, by_degree, window))).collect();
    let pieces = built.into_iter().filter_map(|(k, p)| p.map(|p| (k, p))).collect();
    Ok(BarComplex { algebra: a.clone(), letters, bound, window, pieces, stability })
}

pub(crate) fn letter_table(a: &AugmentedDGA, bound: BarBound) -> Result<LetterTable, BarError> {
    let grading = match (bound, a.presentation()) {
        (BarBound::Weight(w), _) if w < 0 => return Err(BarError::BadBound(format!("weight bound {w} is negative"))),
        (BarBound::Weight(w), _) => LetterGrading::Weight(w),
        (BarBound::WordLength(n), Presentation::Free(_)) => LetterGrading::MonomialLength(n),
        (BarBound::WordLength(_), Presentation::StructConst(_)) => LetterGrading::All,
    };
    Ok(LetterTable::build(a, grading)?)
}

fn cap_of(bound: BarBound) -> usize {
    match bound {
        BarBound::WordLength(n) => n,
        BarBound::Weight(w) => w.max(0) as usize,
    }
}

type Pieces = BTreeMap<(i64, usize), BTreeMap<i64, Vec<BarWord>>>;

/// Every word within the bound, bucketed by `(weight, grade)` and degree.
fn enumerate_words(t: &LetterTable, bound: BarBound) -> Result<Pieces, BarError> {
    let graded = t.bound().is_some();
    let limit = match (t.bound(), bound) {
        (Some(b), _) => b,
        (None, b) => cap_of(b),
    };
    let mut out: Pieces = BTreeMap::new();
    let mut count = 0usize;
    let mut stack: Vec<(Vec<u32>, usize)> = vec![(Vec::new(), 0)];
    while let Some((w, g)) = stack.pop() {
        count += 1;
        if count > MAX_WORDS {
            return Err(BarError::TooLarge { what: "the bar complex".into(), size: count, limit: MAX_WORDS });
        }
        for l in 0..t.len() {
            let ng = if graded { g + t.grade(l) } else { w.len() + 1 };
            if ng <= limit {
                let mut nw = w.clone();
                nw.push(l as u32);
                stack.push((nw, if graded { ng } else { 0 }));
            }
        }
        let word = BarWord::from_letters(t, w);
        out.entry((word.weight(), g)).or_default().entry(word.degree()).or_default().push(word);
    }
    for by_degree in out.values_mut() {
        for ws in by_degree.values_mut() {
            ws.sort_by(|a, b| (a.len(), a.letters()).cmp(&(b.len(), b.letters())));
        }
    }
    Ok(out)
}

fn build_piece(t: &LetterTable, key: (i64, usize), by_degree: BTreeMap<i64, Vec<BarWord>>, window: Option<(i64, i64)>) -> Option<BarPiece> {
    let dmin = *by_degree.keys().next()?;
    let dmax = *by_degree.keys().next_back()?;
    let (lo, hi) = match window {
        Some((wl, wh)) => ((wl - 1).max(dmin), (wh + 1).min(dmax)),
        None => (dmin, dmax),
    };
    if lo > hi {
        return None;
    }
    let words: BTreeMap<i64, Vec<BarWord>> = by_degree.into_iter().filter(|(n, _)| (lo..=hi).contains(n)).collect();
    let complex = assemble(
        &words.iter().map(|(&n, ws)| (n, ws.iter().map(|w| w.letters().to_vec()).collect())).collect(),
        (lo, hi),
        (dmin < lo, dmax > hi),
        |w: &Vec<u32>| Label::Word(w.iter().map(|&l| t.label(l as usize).clone()).collect()),
        |w: &Vec<u32>| word::d_letters(t, w),
    );
    let index = words.values().flat_map(|ws| ws.iter().enumerate().map(|(i, w)| (w.letters().to_vec(), i))).collect();
    Some(BarPiece { weight: key.0, grade: key.1, complex, words, index })
}

/// Assembles a complex on `span` from bases per degree and a differential on
/// basis elements. Terms landing outside the basis must not occur.
pub(crate) fn assemble<W, L, D>(words: &BTreeMap<i64, Vec<W>>, span: (i64, i64), open: (bool, bool), label: L, d: D) -> Complex
where
    W: Clone + Eq + Hash + Sync + Send,
    L: Fn(&W) -> Label + Sync,
    D: Fn(&W) -> Vec<(W, Rat)> + Sync,
{
    let (lo, hi) = span;
    let empty = Vec::new();
    let at = |n: i64| words.get(&n).unwrap_or(&empty);
    let basis: Vec<Vec<Label>> = (lo..=hi).map(|n| at(n).iter().map(&label).collect()).collect();
    let diffs: Vec<SparseMatrix> = (lo..hi)
        .into_par_iter()
        .map(|n| {
            let target: HashMap<&W, usize> = at(n + 1).iter().enumerate().map(|(i, w)| (w, i)).collect();
            let cols = at(n)
                .iter()
                .map(|w| {
                    SparseVec::from_entries(
                        d(w).into_iter().map(|(v, c)| (*target.get(&v).expect("differential stays in the basis"), c)).collect(),
                    )
                })
                .collect();
            SparseMatrix::from_columns(at(n + 1).len(), cols)
        })
        .collect();
    Complex::from_parts(lo, basis, diffs).with_open_ends(open.0, open.1)
}

impl BarComplex {
    pub fn algebra(&self) -> &AugmentedDGA {
        &self.algebra
    }

    pub fn letters(&self) -> &LetterTable {
        &self.letters
    }

    pub fn letters_arc(&self) -> Arc<LetterTable> {
        Arc::clone(&self.letters)
    }

    pub fn bound(&self) -> BarBound {
        self.bound
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn stability(&self) -> Stability {
        self.stability
    }

    /// The word-length cap, for constructions truncated by word length.
    pub fn wordlength_cap(&self) -> Option<usize> {
        match self.stability {
            Stability::Capped { cap, .. } => Some(cap),
            Stability::Exact => None,
        }
    }

    pub fn pieces(&self) -> impl Iterator<Item = &BarPiece> {
        self.pieces.values()
    }

    pub fn piece(&self, weight: i64, grade: usize) -> Option<&BarPiece> {
        self.pieces.get(&(weight, grade))
    }

    /// The piece containing `w`.
    pub fn piece_of(&self, w: &BarWord) -> Option<&BarPiece> {
        let g = match self.letters.grading() {
            LetterGrading::All => 0,
            _ => w.letters().iter().map(|&l| self.letters.grade(l as usize)).sum(),
        };
        self.piece(w.weight(), g)
    }

    /// Degrees whose cohomology is requested: the window, or every degree
    /// computable in some piece.
    fn degrees_of(&self, c: &Complex) -> Vec<i64> {
        let mut ds = c.cohomology_degrees();
        if let Some((lo, hi)) = self.window {
            ds.retain(|n| (lo..=hi).contains(n));
        }
        ds
    }

    /// `(weight, grade, degree) → dim` over every computed degree, stable or not, nonzero entries only.
    pub fn raw_table(&self) -> BTreeMap<(i64, usize, i64), usize> {
        let rows: Vec<Vec<((i64, usize, i64), usize)>> = self
            .pieces
            .par_iter()
            .map(|(&(w, g), p)| {
                let ds = self.degrees_of(&p.complex);
                cohomology_table(&p.complex).into_iter().filter(|(n, d)| *d > 0 && ds.contains(n)).map(|(n, d)| ((w, g, n), d)).collect()
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    /// Stable nonzero `(weight, degree, dim)` rows, summed over grades.
    pub fn table(&self) -> Vec<TableRow> {
        collapse(&self.raw_table(), &self.stability)
    }

    /// Computed degrees left out of [`BarComplex::table`] as unstable.
    pub fn unstable_degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> =
            self.pieces.values().flat_map(|p| self.degrees_of(&p.complex)).filter(|&n| !self.stability.is_stable(n)).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    pub fn cohomology(&self, weight: i64, grade: usize, n: i64) -> Result<Option<Cohomology>, BarError> {
        match self.piece(weight, grade) {
            None => Ok(None),
            Some(p) => Ok(Some(cohomology(&p.complex, n)?)),
        }
    }

    /// The direct sum of all pieces (unwindowed constructions only).
    pub fn total_complex(&self) -> Result<Complex, BarError> {
        let mut acc: Option<Complex> = None;
        for p in self.pieces.values() {
            acc = Some(match acc {
                None => p.complex.clone(),
                Some(c) => direct_sum(&c, &p.complex)?,
            });
        }
        Ok(acc.unwrap_or_else(Complex::zero))
    }

    /// Total number of basis words.
    pub fn size(&self) -> usize {
        self.pieces.values().map(|p| p.complex.total_dim()).sum()
    }
}

pub(crate) fn collapse(raw: &BTreeMap<(i64, usize, i64), usize>, stability: &Stability) -> Vec<TableRow> {
    let mut acc: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&(w, _, n), &d) in raw {
        if stability.is_stable(n) {
            *acc.entry((w, n)).or_default() += d;
        }
    }
    acc.into_iter().filter(|(_, d)| *d > 0).map(|((weight, degree), dim)| TableRow { weight, degree, dim }).collect()
}
