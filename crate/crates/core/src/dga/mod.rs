//! Augmented graded-commutative dg-algebras over ℚ.
//!
//! Two presentations are supported: free graded-commutative algebras on
//! generators with a differential given per generator, and finite-dimensional
//! algebras given by structure constants on an ordered basis. The augmentation
//! `t: A → ℚ` is given per generator or basis element; the unit `s: ℚ → A` is
//! the empty monomial, respectively a distinguished basis element.

mod expr;
mod letters;
mod poly;
mod validate;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::complexes::{Complex, Label};
use crate::exactlin::{Rat, SparseMatrix, SparseVec};

pub use expr::{is_identifier, parse_expr, ExprError, ExprTerm};
pub use letters::{LetterGrading, LetterTable};
pub use poly::{Monomial, Poly};
pub use validate::{validate, InvariantKind, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgaError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Malformed(String),
    #[error("no unit element declared")]
    MissingUnit,
    #[error("the unit `{0}` must have degree 0 and weight 0")]
    BadUnit(String),
    #[error("product `{0}*{1}` given twice")]
    DuplicateProduct(String, String),
    #[error("element does not belong to this algebra: {0}")]
    UnknownLabel(String),
    #[error("infinite basis: generator `{0}` has weight {1} and no monomial-length cap was given")]
    InfiniteBasis(String, i64),
    #[error("{0}")]
    Unsupported(String),
    #[error("expression: {0}")]
    Expr(#[from] ExprError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64, weight: i64) -> Generator {
        Generator { name: name.into(), degree, weight }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGC {
    gens: Vec<Generator>,
    diffs: Vec<Poly>,
    aug: Vec<Rat>,
    odd: Vec<bool>,
    names: Vec<String>,
}

impl FreeGC {
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn differentials(&self) -> &[Poly] {
        &self.diffs
    }

    pub fn augmentation_values(&self) -> &[Rat] {
        &self.aug
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub(crate) fn odd(&self) -> &[bool] {
        &self.odd
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }

    fn weights(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.weight).collect()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.linear_form(&self.degrees())
    }

    pub fn monomial_weight(&self, m: &Monomial) -> i64 {
        m.linear_form(&self.weights())
    }

    pub fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        p.mul(q, &self.odd)
    }

    /// `d` on a monomial, extended as a graded derivation.
    pub fn d_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        let mut before = Monomial::one();
        let mut deg_before = 0i64;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let dg = &self.diffs[i];
                if !dg.is_zero() {
                    let mut after_exps = m.exponents().to_vec();
                    for x in after_exps.iter_mut().take(i + 1) {
                        *x = 0;
                    }
                    let after = Poly::term(Rat::one(), Monomial::from_exponents(after_exps));
                    let lower = Poly::term(Rat::from_int(e as i64), Monomial::power(i, e - 1));
                    let left = Poly::term(Rat::sign(deg_before), before.clone());
                    let t = self.mul(&self.mul(&self.mul(&left, &lower), dg), &after);
                    out = out.add(&t);
                }
                let mut exps = before.exponents().to_vec();
                exps.resize(i + 1, 0);
                exps[i] = e;
                before = Monomial::from_exponents(exps);
                deg_before += e as i64 * self.gens[i].degree;
            }
        }
        out
    }

    pub fn d(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            out = out.add(&self.d_monomial(m).scale(c));
        }
        out
    }

    pub fn augment(&self, p: &Poly) -> Rat {
        let mut total = Rat::zero();
        for (m, c) in p.terms() {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    v = &v * &self.aug[i];
                }
            }
            total += v;
        }
        total
    }

    /// The same algebra on generators `y = x - t(x)`, so that every generator
    /// has augmentation zero. Names of shifted generators read `(x-c)`.
    pub fn recentered(&self) -> FreeGC {
        if self.aug.iter().all(Rat::is_zero) {
            return self.clone();
        }
        let images: Vec<Poly> = (0..self.gens.len()).map(|i| Poly::generator(i).add(&Poly::constant(self.aug[i].clone()))).collect();
        let diffs = self.diffs.iter().map(|p| p.substitute(&images, &self.odd)).collect();
        let gens: Vec<Generator> = self
            .gens
            .iter()
            .zip(&self.aug)
            .map(|(g, t)| {
                let name = if t.is_zero() {
                    g.name.clone()
                } else if t.is_negative() {
                    format!("({}+{})", g.name, t.abs())
                } else {
                    format!("({}-{t})", g.name)
                };
                Generator { name, ..g.clone() }
            })
            .collect();
        let names = gens.iter().map(|g| g.name.clone()).collect();
        FreeGC { gens, diffs, aug: vec![Rat::zero(); self.aug.len()], odd: self.odd.clone(), names }
    }

    /// Monomials with length in `min_len..=max_len` and, where given, the
    /// prescribed weight and degree, in order of their expanded name sequences.
    pub fn monomials(&self, weight: Option<i64>, degree: Option<i64>, min_len: usize, max_len: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.gens.len()];
        let positive = self.is_adams_positive();
        self.enumerate(0, &mut exps, 0, 0, positive, weight, degree, (min_len, max_len), &mut out);
        out.sort_by(|a, b| a.name_sequence(&self.names).cmp(&b.name_sequence(&self.names)));
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        i: usize,
        exps: &mut Vec<u32>,
        len: usize,
        w: i64,
        positive: bool,
        weight: Option<i64>,
        degree: Option<i64>,
        lens: (usize, usize),
        out: &mut Vec<Monomial>,
    ) {
        if i == self.gens.len() {
            let m = Monomial::from_exponents(exps.clone());
            if weight.is_none_or(|x| x == w) && degree.is_none_or(|n| n == self.monomial_degree(&m)) && len >= lens.0 {
                out.push(m);
            }
            return;
        }
        let g = &self.gens[i];
        let max_e = if self.odd[i] { 1 } else { (lens.1 - len) as u32 };
        for e in 0..=max_e {
            let nl = len + e as usize;
            if nl > lens.1 {
                break;
            }
            let nw = w + e as i64 * g.weight;
            // with positive weights the running weight only grows
            if positive && weight.is_some_and(|x| nw > x) {
                break;
            }
            exps[i] = e;
            self.enumerate(i + 1, exps, nl, nw, positive, weight, degree, lens, out);
        }
        exps[i] = 0;
    }

    /// Whether every generator has weight at least one.
    pub fn is_adams_positive(&self) -> bool {
        self.gens.iter().all(|g| g.weight >= 1)
    }

    pub fn poly_from_expr(&self, terms: &[ExprTerm]) -> Result<Poly, DgaError> {
        let mut out = Poly::zero();
        for (c, factors) in terms {
            let mut p = Poly::constant(c.clone());
            for (name, e) in factors {
                let i = self.index_of(name).ok_or_else(|| DgaError::UnknownName(name.clone()))?;
                for _ in 0..*e {
                    p = self.mul(&p, &Poly::generator(i));
                }
            }
            out = out.add(&p);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructConst {
    basis: Vec<BasisElement>,
    unit: usize,
    aug: Vec<Rat>,
    /// `mul[i][j]` is `b_i · b_j` in the basis.
    mul: Vec<Vec<SparseVec>>,
    diff: SparseMatrix,
}

impl StructConst {
    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn augmentation_values(&self) -> &[Rat] {
        &self.aug
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i][j]
    }

    /// `d` as a matrix whose column `i` is `d(b_i)`.
    pub fn differential(&self) -> &SparseMatrix {
        &self.diff
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rat)> = Vec::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                let c = a * b;
                for (k, x) in self.mul[i][j].iter() {
                    acc.push((k, &c * x));
                }
            }
        }
        SparseVec::from_entries(acc)
    }

    pub fn augment(&self, u: &SparseVec) -> Rat {
        u.iter().map(|(i, c)| c * &self.aug[i]).sum()
    }

    /// Whether every non-unit basis element has weight at least one.
    pub fn is_adams_positive(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, b)| i == self.unit || b.weight >= 1)
    }

    pub fn vec_from_expr(&self, terms: &[ExprTerm]) -> Result<SparseVec, DgaError> {
        let mut acc = Vec::new();
        for (c, factors) in terms {
            let mut v = SparseVec::unit(self.unit).scale(c);
            for (name, e) in factors {
                let i = self.index_of(name).ok_or_else(|| DgaError::UnknownName(name.clone()))?;
                for _ in 0..*e {
                    v = self.mul(&v, &SparseVec::unit(i));
                }
            }
            acc.extend(v.into_entries());
        }
        Ok(SparseVec::from_entries(acc))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Free(FreeGC),
    StructConst(StructConst),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Free,
    StructConst,
}

/// An element: a polynomial for free presentations, a coordinate vector in the
/// basis for structure-constant presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Poly(Poly),
    Vector(SparseVec),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Poly(p) => p.is_zero(),
            Element::Vector(v) => v.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedDGA {
    name: String,
    mixed_tate: bool,
    presentation: Presentation,
}

impl AugmentedDGA {
    /// The free graded-commutative algebra on `gens` with `d(gens[i]) = diffs[i]`
    /// and `t(gens[i]) = aug[i]`.
    pub fn free(name: impl Into<String>, gens: Vec<Generator>, diffs: Vec<Poly>, aug: Vec<Rat>) -> Result<AugmentedDGA, DgaError> {
        if diffs.len() != gens.len() || aug.len() != gens.len() {
            return Err(DgaError::Malformed(format!(
                "{} generators but {} differentials and {} augmentation values",
                gens.len(),
                diffs.len(),
                aug.len()
            )));
        }
        let mut seen = HashMap::new();
        for g in &gens {
            if !is_identifier(&g.name) {
                return Err(DgaError::Malformed(format!("`{}` is not a valid name", g.name)));
            }
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(DgaError::DuplicateName(g.name.clone()));
            }
        }
        for p in &diffs {
            if p.max_generator().is_some_and(|m| m >= gens.len()) {
                return Err(DgaError::UnknownLabel("differential uses an undeclared generator".into()));
            }
        }
        let odd = gens.iter().map(Generator::is_odd).collect();
        let names = gens.iter().map(|g| g.name.clone()).collect();
        Ok(AugmentedDGA { name: name.into(), mixed_tate: false, presentation: Presentation::Free(FreeGC { gens, diffs, aug, odd, names }) })
    }

    pub fn with_mixed_tate(mut self, flag: bool) -> AugmentedDGA {
        self.mixed_tate = flag;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_mixed_tate(&self) -> bool {
        self.mixed_tate
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn kind(&self) -> Kind {
        match self.presentation {
            Presentation::Free(_) => Kind::Free,
            Presentation::StructConst(_) => Kind::StructConst,
        }
    }

    pub fn as_free(&self) -> Option<&FreeGC> {
        match &self.presentation {
            Presentation::Free(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_struct(&self) -> Option<&StructConst> {
        match &self.presentation {
            Presentation::StructConst(s) => Some(s),
            _ => None,
        }
    }

    /// Whether the augmentation ideal lives in weights `≥ 1`.
    pub fn is_adams_positive(&self) -> bool {
        match &self.presentation {
            Presentation::Free(f) => f.is_adams_positive(),
            Presentation::StructConst(s) => s.is_adams_positive(),
        }
    }

    /// Whether any generator or basis element carries a nonzero weight.
    pub fn is_weighted(&self) -> bool {
        match &self.presentation {
            Presentation::Free(f) => f.gens.iter().any(|g| g.weight != 0),
            Presentation::StructConst(s) => s.basis.iter().any(|b| b.weight != 0),
        }
    }

    pub fn one(&self) -> Element {
        match &self.presentation {
            Presentation::Free(_) => Element::Poly(Poly::constant(Rat::one())),
            Presentation::StructConst(s) => Element::Vector(SparseVec::unit(s.unit)),
        }
    }

    /// The generator or basis element called `name`.
    pub fn element(&self, name: &str) -> Result<Element, DgaError> {
        match &self.presentation {
            Presentation::Free(f) => {
                f.index_of(name).map(|i| Element::Poly(Poly::generator(i))).ok_or_else(|| DgaError::UnknownName(name.into()))
            }
            Presentation::StructConst(s) => {
                s.index_of(name).map(|i| Element::Vector(SparseVec::unit(i))).ok_or_else(|| DgaError::UnknownName(name.into()))
            }
        }
    }

    pub fn parse_element(&self, src: &str) -> Result<Element, DgaError> {
        self.element_from_terms(&parse_expr(src)?)
    }

    pub fn element_from_terms(&self, terms: &[ExprTerm]) -> Result<Element, DgaError> {
        match &self.presentation {
            Presentation::Free(f) => Ok(Element::Poly(f.poly_from_expr(terms)?)),
            Presentation::StructConst(s) => Ok(Element::Vector(s.vec_from_expr(terms)?)),
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        match (&self.presentation, e) {
            (Presentation::Free(f), Element::Poly(p)) => p.display(&f.names),
            (Presentation::StructConst(s), Element::Vector(v)) => {
                let names: Vec<String> = s.basis.iter().map(|b| b.name.clone()).collect();
                format_combination(v, &names, Some(s.unit))
            }
            _ => "<foreign element>".into(),
        }
    }

    fn check_element(&self, e: &Element) -> Result<(), DgaError> {
        match (&self.presentation, e) {
            (Presentation::Free(f), Element::Poly(p)) => {
                if p.max_generator().is_some_and(|m| m >= f.gens.len()) {
                    Err(DgaError::UnknownLabel("monomial uses an undeclared generator".into()))
                } else {
                    Ok(())
                }
            }
            (Presentation::StructConst(s), Element::Vector(v)) => {
                if v.max_index().is_some_and(|m| m >= s.dim()) {
                    Err(DgaError::UnknownLabel(format!("basis index {} out of range", v.max_index().unwrap())))
                } else {
                    Ok(())
                }
            }
            _ => Err(DgaError::UnknownLabel("element of the other presentation kind".into())),
        }
    }

    pub fn multiply(&self, u: &Element, v: &Element) -> Result<Element, DgaError> {
        self.check_element(u)?;
        self.check_element(v)?;
        Ok(match (&self.presentation, u, v) {
            (Presentation::Free(f), Element::Poly(p), Element::Poly(q)) => Element::Poly(f.mul(p, q)),
            (Presentation::StructConst(s), Element::Vector(a), Element::Vector(b)) => Element::Vector(s.mul(a, b)),
            _ => unreachable!(),
        })
    }

    pub fn differential(&self, u: &Element) -> Result<Element, DgaError> {
        self.check_element(u)?;
        Ok(match (&self.presentation, u) {
            (Presentation::Free(f), Element::Poly(p)) => Element::Poly(f.d(p)),
            (Presentation::StructConst(s), Element::Vector(a)) => Element::Vector(s.diff.mul_vec(a)),
            _ => unreachable!(),
        })
    }

    pub fn augmentation(&self, u: &Element) -> Result<Rat, DgaError> {
        self.check_element(u)?;
        Ok(match (&self.presentation, u) {
            (Presentation::Free(f), Element::Poly(p)) => f.augment(p),
            (Presentation::StructConst(s), Element::Vector(a)) => s.augment(a),
            _ => unreachable!(),
        })
    }

    /// `(weight, degree)` of every term, deduplicated and sorted.
    pub fn bidegrees(&self, u: &Element) -> Result<Vec<(i64, i64)>, DgaError> {
        self.check_element(u)?;
        let mut out: Vec<(i64, i64)> = match (&self.presentation, u) {
            (Presentation::Free(f), Element::Poly(p)) => p.terms().map(|(m, _)| (f.monomial_weight(m), f.monomial_degree(m))).collect(),
            (Presentation::StructConst(s), Element::Vector(a)) => a.iter().map(|(i, _)| (s.basis[i].weight, s.basis[i].degree)).collect(),
            _ => unreachable!(),
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Ordered basis of the augmentation ideal in weight `w` and degree `n`.
    ///
    /// Free presentations enumerate monomials in the recentered generators
    /// `x - t(x)`, returned expanded in the original generators. Unless every
    /// generator has positive weight, `cap` must bound the monomial length.
    pub fn basis_in_bidegree(&self, w: i64, n: i64, cap: Option<usize>) -> Result<Vec<Element>, DgaError> {
        match &self.presentation {
            Presentation::Free(f) => {
                let max_len = match cap {
                    Some(c) => c,
                    None => {
                        if let Some(g) = f.gens.iter().find(|g| g.weight <= 0) {
                            return Err(DgaError::InfiniteBasis(g.name.clone(), g.weight));
                        }
                        w.max(0) as usize
                    }
                };
                let images: Vec<Poly> = (0..f.gens.len()).map(|i| Poly::generator(i).sub(&Poly::constant(f.aug[i].clone()))).collect();
                Ok(f.monomials(Some(w), Some(n), 1, max_len)
                    .into_iter()
                    .map(|m| Element::Poly(Poly::term(Rat::one(), m).substitute(&images, &f.odd)))
                    .collect())
            }
            Presentation::StructConst(s) => Ok(s
                .basis
                .iter()
                .enumerate()
                .filter(|(i, b)| *i != s.unit && b.weight == w && b.degree == n)
                .map(|(i, _)| {
                    let mut v = SparseVec::unit(i);
                    if !s.aug[i].is_zero() {
                        v = v.sub(&SparseVec::unit(s.unit).scale(&s.aug[i]));
                    }
                    Element::Vector(v)
                })
                .collect()),
        }
    }

    /// The augmentation-ideal bases in every bidegree of the given ranges.
    pub fn aug_ideal_basis(
        &self,
        weights: std::ops::RangeInclusive<i64>,
        degrees: std::ops::RangeInclusive<i64>,
        cap: Option<usize>,
    ) -> Result<AugIdealBasis, DgaError> {
        let mut pieces = BTreeMap::new();
        for w in weights {
            for n in degrees.clone() {
                let b = self.basis_in_bidegree(w, n, cap)?;
                if !b.is_empty() {
                    pieces.insert((w, n), b);
                }
            }
        }
        Ok(AugIdealBasis { pieces })
    }

    /// The whole algebra in weight `w` (all degrees, unit included) as a
    /// complex, with the element behind every basis vector.
    pub fn weight_piece(&self, w: i64) -> Result<WeightPiece, DgaError> {
        let mut by_degree: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
        match &self.presentation {
            Presentation::Free(f) => {
                if !f.is_adams_positive() {
                    let g = f.gens.iter().find(|g| g.weight <= 0).unwrap();
                    return Err(DgaError::InfiniteBasis(g.name.clone(), g.weight));
                }
                if w >= 0 {
                    for m in f.monomials(Some(w), None, 0, w as usize) {
                        by_degree.entry(f.monomial_degree(&m)).or_default().push(Element::Poly(Poly::term(Rat::one(), m)));
                    }
                }
            }
            Presentation::StructConst(s) => {
                for (i, b) in s.basis.iter().enumerate() {
                    if b.weight == w {
                        by_degree.entry(b.degree).or_default().push(Element::Vector(SparseVec::unit(i)));
                    }
                }
            }
        }
        WeightPiece::assemble(self, w, by_degree)
    }
}

fn format_combination(v: &SparseVec, names: &[String], unit: Option<usize>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if Some(i) == unit {
            s.push_str(&a.to_string());
        } else if a.is_one() {
            s.push_str(&names[i]);
        } else {
            s.push_str(&format!("{a}*{}", names[i]));
        }
    }
    s
}

/// Bases of the augmentation ideal keyed by `(weight, degree)`.
#[derive(Clone, Debug, Default)]
pub struct AugIdealBasis {
    pub pieces: BTreeMap<(i64, i64), Vec<Element>>,
}

/// A weight piece of an algebra as a complex of vector spaces.
#[derive(Clone, Debug)]
pub struct WeightPiece {
    pub weight: i64,
    pub complex: Complex,
    elements: BTreeMap<i64, Vec<Element>>,
}

impl WeightPiece {
    fn assemble(a: &AugmentedDGA, w: i64, by_degree: BTreeMap<i64, Vec<Element>>) -> Result<WeightPiece, DgaError> {
        if by_degree.is_empty() {
            return Ok(WeightPiece { weight: w, complex: Complex::zero(), elements: by_degree });
        }
        let lo = *by_degree.keys().next().unwrap();
        let hi = *by_degree.keys().next_back().unwrap();
        let mut basis = Vec::new();
        let mut diffs = Vec::new();
        let empty = Vec::new();
        for n in lo..=hi {
            let els = by_degree.get(&n).unwrap_or(&empty);
            basis.push(els.iter().map(|e| Label::name(a.format_element(e))).collect());
            if n < hi {
                let target = by_degree.get(&(n + 1)).unwrap_or(&empty);
                let cols = els.iter().map(|e| coordinates(target, &a.differential(e)?)).collect::<Result<Vec<_>, _>>()?;
                diffs.push(SparseMatrix::from_columns(target.len(), cols));
            }
        }
        Ok(WeightPiece { weight: w, complex: Complex::from_parts(lo, basis, diffs), elements: by_degree })
    }

    pub fn elements(&self, n: i64) -> &[Element] {
        self.elements.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Coordinates of `e` in the degree-`n` basis of this piece.
    pub fn coordinates(&self, n: i64, e: &Element) -> Result<SparseVec, DgaError> {
        coordinates(self.elements(n), e)
    }
}

/// Coordinates of `e` with respect to a list of monomials or basis vectors.
fn coordinates(basis: &[Element], e: &Element) -> Result<SparseVec, DgaError> {
    let mut out = Vec::new();
    match e {
        Element::Poly(p) => {
            let index: HashMap<&Monomial, usize> = basis
                .iter()
                .enumerate()
                .filter_map(|(i, b)| match b {
                    Element::Poly(q) => q.terms().next().map(|(m, _)| (m, i)),
                    _ => None,
                })
                .collect();
            for (m, c) in p.terms() {
                let i = index.get(m).ok_or_else(|| DgaError::UnknownLabel("term outside the piece".into()))?;
                out.push((*i, c.clone()));
            }
        }
        Element::Vector(v) => {
            let index: HashMap<usize, usize> = basis
                .iter()
                .enumerate()
                .filter_map(|(i, b)| match b {
                    Element::Vector(u) => u.leading().map(|(k, _)| (k, i)),
                    _ => None,
                })
                .collect();
            for (k, c) in v.iter() {
                let i = index.get(&k).ok_or_else(|| DgaError::UnknownLabel("term outside the piece".into()))?;
                out.push((*i, c.clone()));
            }
        }
    }
    Ok(SparseVec::from_entries(out))
}

/// Incremental construction of a structure-constant algebra by names.
///
/// Products not given are zero, except that `b·a` defaults to
/// `(-1)^{|a||b|} a·b` when only `a·b` is given, and products with the unit
/// default to the unit law.
#[derive(Clone, Debug, Default)]
pub struct StructBuilder {
    name: String,
    unit: Option<String>,
    elements: Vec<(String, i64, i64, Rat)>,
    products: Vec<(String, String, Vec<(String, Rat)>)>,
    diffs: Vec<(String, Vec<(String, Rat)>)>,
    mixed_tate: bool,
}

impl StructBuilder {
    pub fn new(name: impl Into<String>) -> StructBuilder {
        StructBuilder { name: name.into(), ..Default::default() }
    }

    /// Declares the unit: a basis element of degree 0, weight 0, augmentation 1.
    pub fn unit(&mut self, name: &str) -> &mut Self {
        self.unit = Some(name.to_string());
        self.elements.push((name.to_string(), 0, 0, Rat::one()));
        self
    }

    pub fn element(&mut self, name: &str, degree: i64, weight: i64, aug: Rat) -> &mut Self {
        self.elements.push((name.to_string(), degree, weight, aug));
        self
    }

    pub fn set_unit(&mut self, name: &str) -> &mut Self {
        self.unit = Some(name.to_string());
        self
    }

    pub fn set_augmentation(&mut self, name: &str, value: Rat) -> &mut Self {
        if let Some(e) = self.elements.iter_mut().find(|e| e.0 == name) {
            e.3 = value;
        }
        self
    }

    pub fn product(&mut self, a: &str, b: &str, terms: Vec<(String, Rat)>) -> &mut Self {
        self.products.push((a.to_string(), b.to_string(), terms));
        self
    }

    pub fn differential(&mut self, a: &str, terms: Vec<(String, Rat)>) -> &mut Self {
        self.diffs.push((a.to_string(), terms));
        self
    }

    pub fn mixed_tate(&mut self, flag: bool) -> &mut Self {
        self.mixed_tate = flag;
        self
    }

    pub fn build(&self) -> Result<AugmentedDGA, DgaError> {
        let mut index = HashMap::new();
        for (i, (name, ..)) in self.elements.iter().enumerate() {
            if !is_identifier(name) && name != "1" {
                return Err(DgaError::Malformed(format!("`{name}` is not a valid name")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(DgaError::DuplicateName(name.clone()));
            }
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| DgaError::UnknownName(n.to_string()));
        let unit = lookup(self.unit.as_deref().ok_or(DgaError::MissingUnit)?)?;
        let basis: Vec<BasisElement> =
            self.elements.iter().map(|(name, d, w, _)| BasisElement { name: name.clone(), degree: *d, weight: *w }).collect();
        if basis[unit].degree != 0 || basis[unit].weight != 0 {
            return Err(DgaError::BadUnit(basis[unit].name.clone()));
        }
        let n = basis.len();
        let to_vec = |terms: &[(String, Rat)]| -> Result<SparseVec, DgaError> {
            let entries = terms.iter().map(|(k, c)| Ok((lookup(k)?, c.clone()))).collect::<Result<Vec<_>, DgaError>>()?;
            Ok(SparseVec::from_entries(entries))
        };
        let mut mul: Vec<Vec<Option<SparseVec>>> = vec![vec![None; n]; n];
        for (a, b, terms) in &self.products {
            let (i, j) = (lookup(a)?, lookup(b)?);
            if mul[i][j].is_some() {
                return Err(DgaError::DuplicateProduct(a.clone(), b.clone()));
            }
            mul[i][j] = Some(to_vec(terms)?);
        }
        let explicit = mul.clone();
        for i in 0..n {
            for j in 0..n {
                if explicit[i][j].is_none() {
                    if let Some(v) = &explicit[j][i] {
                        mul[i][j] = Some(v.scale(&Rat::sign(basis[i].degree * basis[j].degree)));
                    }
                }
            }
        }
        for i in 0..n {
            if mul[unit][i].is_none() {
                mul[unit][i] = Some(SparseVec::unit(i));
            }
            if mul[i][unit].is_none() {
                mul[i][unit] = Some(SparseVec::unit(i));
            }
        }
        let mul = mul.into_iter().map(|row| row.into_iter().map(Option::unwrap_or_default).collect()).collect();
        let mut cols = vec![SparseVec::new(); n];
        for (a, terms) in &self.diffs {
            let i = lookup(a)?;
            if !cols[i].is_zero() {
                return Err(DgaError::Malformed(format!("differential of `{a}` given twice")));
            }
            cols[i] = to_vec(terms)?;
        }
        let aug = self.elements.iter().map(|e| e.3.clone()).collect();
        Ok(AugmentedDGA {
            name: self.name.clone(),
            mixed_tate: self.mixed_tate,
            presentation: Presentation::StructConst(StructConst { basis, unit, aug, mul, diff: SparseMatrix::from_columns(n, cols) }),
        })
    }
}
