use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use super::{AugmentedDGA, DgaError, Element, Monomial, Poly, Presentation};
use crate::complexes::Label;
use crate::exactlin::{Rat, SparseVec};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// How the letters of the bar construction are selected and graded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LetterGrading {
    /// Letters graded by weight, which must be at least one; weights up to the bound.
    Weight(i64),
    /// Free presentations with linear differential: letters graded by
    /// monomial length, up to the bound.
    MonomialLength(usize),
    /// Every basis element of the augmentation ideal (structure constants only);
    /// each letter has grade one.
    All,
}

/// A finite basis of the augmentation ideal `Ā` with its differential and
/// multiplication: the alphabet of bar words.
///
/// Letters are recentered elements `x - t(x)`, ordered by grade, then weight,
/// degree and name. Products are recorded only when the grades of the two
/// factors sum to at most the bound.
#[derive(Clone, Debug)]
pub struct LetterTable {
    id: u64,
    grading: LetterGrading,
    labels: Vec<Label>,
    degree: Vec<i64>,
    weight: Vec<i64>,
    grade: Vec<usize>,
    d: Vec<SparseVec>,
    mul: Vec<Vec<Option<SparseVec>>>,
    elements: Vec<Element>,
}

impl LetterTable {
    pub fn build(a: &AugmentedDGA, grading: LetterGrading) -> Result<LetterTable, DgaError> {
        let mut t = match a.presentation() {
            Presentation::Free(f) => {
                let rec = f.recentered();
                let monomials: Vec<Monomial> = match grading {
                    LetterGrading::Weight(w) => {
                        if let Some(g) = f.generators().iter().find(|g| g.weight < 1) {
                            return Err(DgaError::Unsupported(format!(
                                "a weight bound needs every generator in weight >= 1, but `{}` has weight {}",
                                g.name, g.weight
                            )));
                        }
                        (1..=w.max(0)).flat_map(|k| rec.monomials(Some(k), None, 1, k as usize)).collect()
                    }
                    LetterGrading::MonomialLength(n) => {
                        for (g, p) in rec.generators().iter().zip(rec.differentials()) {
                            if p.terms().any(|(m, _)| m.length() != 1) {
                                return Err(DgaError::Unsupported(format!(
                                    "a monomial-length cap needs a linear differential, but d({}) is not linear; give a weight bound instead",
                                    g.name
                                )));
                            }
                        }
                        (1..=n).flat_map(|k| rec.monomials(None, None, k, k)).collect()
                    }
                    LetterGrading::All => {
                        return Err(DgaError::Unsupported("free presentations need a weight bound or a monomial-length cap".into()))
                    }
                };
                let grade = |m: &Monomial| match grading {
                    LetterGrading::Weight(_) => rec.monomial_weight(m) as usize,
                    _ => m.length(),
                };
                let mut order: Vec<(usize, i64, i64, Vec<&str>, Monomial)> = monomials
                    .iter()
                    .map(|m| (grade(m), rec.monomial_weight(m), rec.monomial_degree(m), m.name_sequence(rec.names()), m.clone()))
                    .collect();
                order.sort();
                let monomials: Vec<Monomial> = order.into_iter().map(|x| x.4).collect();
                let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let to_letters =
                    |p: &Poly| -> SparseVec { SparseVec::from_entries(p.terms().map(|(m, c)| (index[m], c.clone())).collect::<Vec<_>>()) };
                let d: Vec<SparseVec> = monomials.iter().map(|m| to_letters(&rec.d_monomial(m))).collect();
                let images: Vec<Poly> = (0..f.generators().len())
                    .map(|i| Poly::generator(i).sub(&Poly::constant(f.augmentation_values()[i].clone())))
                    .collect();
                let grades: Vec<usize> = monomials.iter().map(grade).collect();
                let bound = bound_of(grading);
                let mul = (0..monomials.len())
                    .map(|i| {
                        (0..monomials.len())
                            .map(|j| {
                                (grades[i] + grades[j] <= bound).then(|| match monomials[i].mul(&monomials[j], rec.odd()) {
                                    Some((neg, m)) => {
                                        SparseVec::from_entries(vec![(index[&m], if neg { Rat::from_int(-1) } else { Rat::one() })])
                                    }
                                    None => SparseVec::new(),
                                })
                            })
                            .collect()
                    })
                    .collect();
                LetterTable {
                    id: 0,
                    grading,
                    labels: monomials.iter().map(|m| Label::name(m.display(rec.names()))).collect(),
                    degree: monomials.iter().map(|m| rec.monomial_degree(m)).collect(),
                    weight: monomials.iter().map(|m| rec.monomial_weight(m)).collect(),
                    grade: grades,
                    d,
                    mul,
                    elements: monomials
                        .iter()
                        .map(|m| Element::Poly(Poly::term(Rat::one(), m.clone()).substitute(&images, f.odd())))
                        .collect(),
                }
            }
            Presentation::StructConst(s) => {
                let u = s.unit_index();
                let b = s.basis();
                let mut keep: Vec<usize> = match grading {
                    LetterGrading::Weight(w) => {
                        if let Some((_, e)) = b.iter().enumerate().find(|(i, e)| *i != u && e.weight < 1) {
                            return Err(DgaError::Unsupported(format!(
                                "a weight bound needs the augmentation ideal in weights >= 1, but `{}` has weight {}",
                                e.name, e.weight
                            )));
                        }
                        (0..b.len()).filter(|&i| i != u && b[i].weight <= w).collect()
                    }
                    LetterGrading::All => (0..b.len()).filter(|&i| i != u).collect(),
                    LetterGrading::MonomialLength(_) => {
                        return Err(DgaError::Unsupported("structure-constant algebras take a word-length cap or a weight bound".into()))
                    }
                };
                keep.sort_by_key(|&i| (b[i].weight, b[i].degree, b[i].name.clone()));
                let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(p, &i)| (i, p)).collect();
                let grades: Vec<usize> =
                    keep.iter().map(|&i| if let LetterGrading::Weight(_) = grading { b[i].weight as usize } else { 1 }).collect();
                // drop the unit coordinate: it is determined by the augmentation
                let project = |v: &SparseVec| -> SparseVec {
                    SparseVec::from_entries(v.iter().filter_map(|(k, c)| pos.get(&k).map(|&p| (p, c.clone()))).collect::<Vec<_>>())
                };
                let t = s.augmentation_values();
                let bound = bound_of(grading);
                let mul = keep
                    .iter()
                    .enumerate()
                    .map(|(p, &i)| {
                        keep.iter()
                            .enumerate()
                            .map(|(q, &j)| {
                                (grades[p] + grades[q] <= bound || grading == LetterGrading::All).then(|| {
                                    let mut v = s.product(i, j).clone();
                                    v = v.sub(&SparseVec::unit(i).scale(&t[j])).sub(&SparseVec::unit(j).scale(&t[i]));
                                    project(&v)
                                })
                            })
                            .collect()
                    })
                    .collect();
                LetterTable {
                    id: 0,
                    grading,
                    labels: keep
                        .iter()
                        .map(|&i| {
                            let c = &t[i];
                            Label::name(if c.is_zero() {
                                b[i].name.clone()
                            } else if c.is_negative() {
                                format!("({}+{})", b[i].name, c.abs())
                            } else {
                                format!("({}-{c})", b[i].name)
                            })
                        })
                        .collect(),
                    degree: keep.iter().map(|&i| b[i].degree).collect(),
                    weight: keep.iter().map(|&i| b[i].weight).collect(),
                    grade: grades,
                    d: keep.iter().map(|&i| project(s.differential().column(i))).collect(),
                    mul,
                    elements: keep.iter().map(|&i| Element::Vector(SparseVec::unit(i).sub(&SparseVec::unit(u).scale(&t[i])))).collect(),
                }
            }
        };
        t.id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        Ok(t)
    }

    /// Identifies the table; bar words remember which table they were built over.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn grading(&self) -> LetterGrading {
        self.grading
    }

    /// The bound on total grade of a word, if the grading is bounded.
    pub fn bound(&self) -> Option<usize> {
        match self.grading {
            LetterGrading::All => None,
            g => Some(bound_of(g)),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degree[i]
    }

    /// `|a| - 1`.
    pub fn suspended_degree(&self, i: usize) -> i64 {
        self.degree[i] - 1
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weight[i]
    }

    pub fn grade(&self, i: usize) -> usize {
        self.grade[i]
    }

    pub fn d(&self, i: usize) -> &SparseVec {
        &self.d[i]
    }

    /// `a_i · a_j` in letters, or `None` beyond the grade bound.
    pub fn mul(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.mul[i][j].as_ref()
    }

    /// The letter as an element of the algebra.
    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn suspended_degree_range(&self) -> Option<(i64, i64)> {
        let lo = (0..self.len()).map(|i| self.suspended_degree(i)).min()?;
        let hi = (0..self.len()).map(|i| self.suspended_degree(i)).max()?;
        Some((lo, hi))
    }
}

fn bound_of(g: LetterGrading) -> usize {
    match g {
        LetterGrading::Weight(w) => w.max(0) as usize,
        LetterGrading::MonomialLength(n) => n,
        LetterGrading::All => usize::MAX,
    }
}
