//! ℤ-weight-graded complexes and algebras: the convolution tensor product,
//! connectivity of mixed Tate inputs, the equivariant bar construction and
//! periodization by a class of positive weight.


use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::bar::{bar_complex, BarBound, BarComplex, BarError};
use crate::complexes::{cohomology, cohomology_table, direct_sum, induced_on_cohomology, tensor, ChainMap, Complex, ComplexError};
use crate::dga::{validate, AugmentedDGA, DgaError, Element};
use crate::exactlin::{rank, SparseMatrix};

/// Default number of multiplication steps [`periodify`] tries.
pub const DEFAULT_STABILIZATION_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightedError {
    #[error("weight window [{0}, {1}] is empty or does not contain every piece")]
    BadWindow(i64, i64),
    #[error("weight window overflows")]
    Overflow,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error("the algebra fails validation: {0}")]
    InvalidAlgebra(String),
    #[error("not a mixed Tate input: {0}")]
    NotMixedTate(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("multiplication by the class does not stabilize: {0}")]
    NotStabilizing(String),
}

/// A complex split into finitely many weight pieces; weights in the window
/// without a piece are zero, weights outside it are zero as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    window: (i64, i64),
    pieces: BTreeMap<i64, Complex>,
}

impl GradedComplex {
    pub fn new(window: (i64, i64), pieces: BTreeMap<i64, Complex>) -> Result<GradedComplex, WeightedError> {
        let (lo, hi) = window;
        if lo > hi || pieces.keys().any(|w| !(lo..=hi).contains(w)) {
            return Err(WeightedError::BadWindow(lo, hi));
        }
        Ok(GradedComplex { window, pieces })
    }

    /// ℚ in weight 0 and degree 0.
    pub fn unit() -> GradedComplex {
        GradedComplex { window: (0, 0), pieces: BTreeMap::from([(0, Complex::unit())]) }
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn piece(&self, w: i64) -> Option<&Complex> {
        self.pieces.get(&w)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&i64, &Complex)> {
        self.pieces.iter()
    }

    /// `(weight, degree) → dim H`, nonzero entries only.
    pub fn table(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces
            .iter()
            .flat_map(|(&w, c)| cohomology_table(c).into_iter().filter(|(_, d)| *d > 0).map(move |(n, d)| ((w, n), d)))
            .collect()
    }

    /// `(weight, degree) → dim` of the underlying graded vector space, nonzero entries only.
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&w, c) in &self.pieces {
            let (lo, hi) = c.window();
            for n in lo..=hi {
                if c.dim(n) > 0 {
                    out.insert((w, n), c.dim(n));
                }
            }
        }
        out
    }
}

/// Piece `k` of the result is `⊕_{i+j=k} a_i ⊗ b_j`.
pub fn graded_tensor(a: &GradedComplex, b: &GradedComplex) -> Result<GradedComplex, WeightedError> {
    let lo = a.window.0.checked_add(b.window.0).ok_or(WeightedError::Overflow)?;
    let hi = a.window.1.checked_add(b.window.1).ok_or(WeightedError::Overflow)?;
    let pairs: Vec<(i64, &Complex, &Complex)> =
        a.pieces.iter().flat_map(|(&i, x)| b.pieces.iter().map(move |(&j, y)| (i + j, x, y))).collect();
    let products: Vec<(i64, Complex)> = pairs.into_par_iter().map(|(k, x, y)| tensor(x, y).map(|c| (k, c))).collect::<Result<_, _>>()?;
    let mut pieces: BTreeMap<i64, Complex> = BTreeMap::new();
    for (k, c) in products {
        let merged = match pieces.remove(&k) {
            None => c,
            Some(prev) => direct_sum(&prev, &c)?,
        };
        pieces.insert(k, merged);
    }
    GradedComplex::new((lo, hi), pieces)
}

/// A weight-graded algebra whose augmentation ideal sits in weights `≥ 1`.
#[derive(Clone, Debug)]
pub struct MixedTateInput {
    algebra: AugmentedDGA,
    note: String,
}

impl MixedTateInput {
    pub fn new(algebra: AugmentedDGA, note: impl Into<String>) -> Result<MixedTateInput, WeightedError> {
        let report = validate(&algebra);
        if !report.is_valid() {
            let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(WeightedError::InvalidAlgebra(lines.join("; ")));
        }
        if !algebra.is_adams_positive() {
            return Err(WeightedError::NotMixedTate("the augmentation ideal must sit in weights >= 1".into()));
        }
        Ok(MixedTateInput { algebra, note: note.into() })
    }

    pub fn algebra(&self) -> &AugmentedDGA {
        &self.algebra
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    /// The algebra as a graded complex in weights `0..=max_weight`.
    pub fn graded(&self, max_weight: i64) -> Result<GradedComplex, WeightedError> {
        let pieces =
            (0..=max_weight.max(0)).map(|w| self.algebra.weight_piece(w).map(|p| (w, p.complex))).collect::<Result<BTreeMap<_, _>, _>>()?;
        GradedComplex::new((0, max_weight.max(0)), pieces)
    }
}

/// Outcome of [`connectivity_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub max_weight: i64,
    /// `(weight, degree) → dim H`, nonzero entries only.
    pub table: BTreeMap<(i64, i64), usize>,
    pub failures: Vec<String>,
}

impl ConnectivityReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `H^n(Q_w) = 0` for `n < 0`, `H^0(Q_0) = ℚ` and `H^0(Q_w) = 0` for
/// `1 ≤ w ≤ max_weight`.
pub fn connectivity_check(q: &MixedTateInput, max_weight: i64) -> Result<ConnectivityReport, WeightedError> {
    let table = q.graded(max_weight)?.table();
    let mut failures = Vec::new();
    for (&(w, n), &d) in &table {
        if n < 0 {
            failures.push(format!("H^{n} in weight {w} has dimension {d}"));
        } else if n == 0 && w > 0 {
            failures.push(format!("H^0 in weight {w} has dimension {d}"));
        }
    }
    let h00 = table.get(&(0, 0)).copied().unwrap_or(0);
    if h00 != 1 {
        failures.push(format!("H^0 in weight 0 has dimension {h00}, expected 1"));
    }
    Ok(ConnectivityReport { max_weight, table, failures })
}

/// The bar construction of a mixed Tate input, exact in every weight `≤ weight_bound`.
pub fn equivariant_bar(q: &MixedTateInput, weight_bound: i64) -> Result<BarComplex, WeightedError> {
    if weight_bound < 0 {
        return Err(WeightedError::Precondition(format!("weight bound {weight_bound} is negative")));
    }
    Ok(bar_complex(&q.algebra, None, BarBound::Weight(weight_bound))?)
}

/// One stabilized bidegree of a [`PeriodicAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePiece {
    pub weight: i64,
    pub degree: i64,
    pub dim: usize,
    /// The weight `weight + k·w₀` from which multiplication is an isomorphism.
    pub reached_weight: i64,
    /// Multiplication by the class from this piece to the one of weight `weight + w₀`.
    pub kappa: SparseMatrix,
}

/// Cohomology of a weight-graded algebra with a class of positive weight inverted.
#[derive(Clone, Debug)]
pub struct PeriodicAlgebra {
    pub base: String,
    pub kappa: String,
    pub kappa_weight: i64,
    pub pieces: BTreeMap<(i64, i64), StablePiece>,
}

impl PeriodicAlgebra {
    /// `(weight, degree) → dim`, nonzero entries only.
    pub fn table(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces.iter().filter(|(_, p)| p.dim > 0).map(|(&k, p)| (k, p.dim)).collect()
    }

    /// Multiplication by the inverted class is an isomorphism on every reported piece.
    pub fn kappa_is_invertible(&self) -> bool {
        self.pieces.values().all(|p| p.kappa.nrows() == p.dim && p.kappa.ncols() == p.dim && rank(&p.kappa) == p.dim)
    }
}

/// Stabilizes `H^n(A_w) → H^n(A_{w+w₀}) → …` under multiplication by `kappa`
/// for every weight in `weights`. A degree stabilizes once every remaining
/// map up to `bound` steps (and at least two of them) is an isomorphism.
pub fn periodify(base: &AugmentedDGA, kappa: &Element, weights: (i64, i64), bound: usize) -> Result<PeriodicAlgebra, WeightedError> {
    let report = validate(base);
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(WeightedError::InvalidAlgebra(lines.join("; ")));
    }
    let bideg = base.bidegrees(kappa)?;
    let (w0, deg) = match bideg.as_slice() {
        [single] => *single,
        _ => return Err(WeightedError::Precondition("the class must be homogeneous and nonzero".into())),
    };
    if deg != 0 {
        return Err(WeightedError::Precondition(format!("the class has degree {deg}, expected 0")));
    }
    if w0 <= 0 {
        return Err(WeightedError::Precondition(format!("the class has weight {w0}, expected a positive weight")));
    }
    if !base.differential(kappa)?.is_zero() {
        return Err(WeightedError::Precondition("the class is not a cycle".into()));
    }
    if bound < 2 {
        return Err(WeightedError::Precondition("the stabilization bound must be at least 2".into()));
    }
    if weights.0 > weights.1 {
        return Err(WeightedError::BadWindow(weights.0, weights.1));
    }
    // a nilpotent class inverts to the zero ring
    let mut power = kappa.clone();
    for k in 1..=bound {
        let piece = base.weight_piece(w0 * k as i64)?;
        let coords = piece.coordinates(0, &power)?;
        let h = cohomology(&piece.complex, 0)?;
        if h.class_of(&coords).iter().all(|c| c.is_zero()) {
            return Err(WeightedError::NotStabilizing(format!("the class raised to the power {k} vanishes in cohomology")));
        }
        power = base.multiply(&power, kappa)?;
    }

    let start = weights.0;
    let end = weights.1 + w0 * bound as i64;
    let pieces: BTreeMap<i64, crate::dga::WeightPiece> =
        (start..=end).map(|w| base.weight_piece(w).map(|p| (w, p))).collect::<Result<_, _>>()?;
    let step = |w: i64| -> Result<ChainMap, WeightedError> {
        let (s, t) = (&pieces[&w], &pieces[&(w + w0)]);
        let (lo, hi) = s.complex.window();
        let mut comps = BTreeMap::new();
        for n in lo..=hi {
            let cols = s.elements(n).iter().map(|e| t.coordinates(n, &base.multiply(kappa, e)?)).collect::<Result<Vec<_>, _>>()?;
            comps.insert(n, SparseMatrix::from_columns(t.complex.dim(n), cols));
        }
        Ok(ChainMap::new(s.complex.clone(), t.complex.clone(), comps)?)
    };

    let mut out = BTreeMap::new();
    for w in weights.0..=weights.1 {
        let maps: Vec<ChainMap> = (0..bound).map(|k| step(w + k as i64 * w0)).collect::<Result<_, _>>()?;
        let mut degrees: Vec<i64> = (0..=bound)
            .flat_map(|k| cohomology_table(&pieces[&(w + k as i64 * w0)].complex).into_iter().filter(|(_, d)| *d > 0).map(|(n, _)| n))
            .collect();
        degrees.sort();
        degrees.dedup();
        for n in degrees {
            let induced: Vec<SparseMatrix> = maps.iter().map(|m| induced_on_cohomology(m, n)).collect::<Result<_, _>>()?;
            let iso = |m: &SparseMatrix| m.nrows() == m.ncols() && rank(m) == m.nrows();
            let mut k = bound;
            while k > 0 && iso(&induced[k - 1]) {
                k -= 1;
            }
            if bound - k < 2 {
                return Err(WeightedError::NotStabilizing(format!("H^{n} starting in weight {w} is not stable within {bound} steps")));
            }
            let m = &induced[k];
            out.insert((w, n), StablePiece { weight: w, degree: n, dim: m.ncols(), reached_weight: w + k as i64 * w0, kappa: m.clone() });
        }
    }
    Ok(PeriodicAlgebra { base: base.name().to_string(), kappa: base.format_element(kappa), kappa_weight: w0, pieces: out })
}
