use std::collections::BTreeMap;

use super::{HopfAlgebra, HopfError, HopfParts};
use crate::bar::{antipode_of, deconcatenation, shuffle_elements, BarComplex, BarElement, BarWord};
use crate::complexes::{cohomology, Cohomology};
use crate::dga::LetterGrading;
use crate::exactlin::{Rat, SparseMatrix, SparseVec};

/// H⁰ of one bar piece: its cohomology and the offset of its classes in the
/// global basis (`None` for pieces above the weight bound).
struct PieceH0 {
    h: Cohomology,
    offset: Option<usize>,
}

/// The degree-zero cohomology of `b`, restricted to weights at most
/// `weight_bound`, as a commutative Hopf algebra.
///
/// Basis elements are the chosen cocycle representatives of each
/// `(weight, grade)` piece in order. Products, coproducts and the antipode
/// are computed on representatives and reduced modulo boundaries. With a
/// word-length cap, degree 0 must be cap-stable; letters of suspended degree
/// 0 then cannot occur, so degree 0 holds only the empty word and every
/// product stays within the cap.
pub fn coarse_moduli(b: &BarComplex, weight_bound: i64) -> Result<HopfAlgebra, HopfError> {
    if let Some((lo, hi)) = b.window() {
        if lo > 0 || hi < 0 {
            return Err(HopfError::Unsupported(format!("the bar complex was built on the window [{lo}, {hi}], which omits degree 0")));
        }
    }
    if !b.stability().is_stable(0) {
        return Err(HopfError::Unstable(format!(
            "degree 0 is not stable at word-length cap {}; raise the cap",
            b.wordlength_cap().unwrap_or(0)
        )));
    }
    let t = b.letters();
    let grade_bound = match t.grading() {
        LetterGrading::Weight(w) => Some(w.min(weight_bound).max(0) as usize),
        LetterGrading::MonomialLength(n) => Some(n),
        LetterGrading::All => None,
    };

    let mut h0: BTreeMap<(i64, usize), PieceH0> = BTreeMap::new();
    let mut basis: Vec<((i64, usize), SparseVec)> = Vec::new();
    for p in b.pieces() {
        let (lo, hi) = p.complex().window();
        if !(lo..=hi).contains(&0) {
            continue;
        }
        let h = cohomology(p.complex(), 0)?;
        let key = (p.weight(), p.grade());
        let included = p.weight() <= weight_bound && grade_bound.is_none_or(|g| p.grade() <= g);
        let offset = included.then_some(basis.len());
        if included {
            basis.extend(h.representatives().iter().map(|r| (key, r.clone())));
        }
        h0.insert(key, PieceH0 { h, offset });
    }
    let n = basis.len();
    let rep = |k: usize| -> BarElement { b.piece(basis[k].0 .0, basis[k].0 .1).expect("piece").element(0, &basis[k].1) };

    // π: degree-0 cochains of a piece → global coordinates
    let project = |x: &BarElement| -> Result<SparseVec, HopfError> {
        let mut out = SparseVec::new();
        let mut by_piece: BTreeMap<(i64, usize), BarElement> = BTreeMap::new();
        for (w, c) in x.terms() {
            let p = b.piece_of(w).ok_or_else(|| HopfError::Unsupported(format!("word {w} lies outside the computed pieces")))?;
            by_piece.entry((p.weight(), p.grade())).or_insert_with(BarElement::zero).add_term(w.clone(), c.clone());
        }
        for (key, part) in by_piece {
            let (_, v) = b.piece(key.0, key.1).expect("piece").vector(&part)?;
            let coords = match h0.get(&key) {
                Some(ph) => ph.h.class_of(&v).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>(),
                None => Vec::new(),
            };
            if coords.is_empty() {
                continue;
            }
            let off = h0[&key].offset.ok_or_else(|| {
                HopfError::Unsupported(format!("a structure map reaches weight {} beyond the bound {weight_bound}", key.0))
            })?;
            out = out.add(&SparseVec::from_entries(coords.into_iter().map(|(i, c)| (off + i, c)).collect()));
        }
        Ok(out)
    };

    let mut mul = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i..n {
            let ((wi, gi), (wj, gj)) = (basis[i].0, basis[j].0);
            let (w, g) = (wi + wj, gi + gj);
            if w > weight_bound || grade_bound.is_some_and(|gb| g > gb) {
                continue;
            }
            let v = project(&shuffle_elements(t, &rep(i), &rep(j))?)?;
            mul[i][j] = Some(v.clone());
            mul[j][i] = Some(v);
        }
    }

    let mut comul = Vec::with_capacity(n);
    let mut counit = Vec::with_capacity(n);
    let mut antipode = Vec::with_capacity(n);
    for k in 0..n {
        let r = rep(k);
        let mut terms: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        let mut pairs: BTreeMap<(BarWord, BarWord), Rat> = BTreeMap::new();
        for (w, c) in r.terms() {
            for ((u, v), d) in deconcatenation(t, w)?.terms() {
                if u.degree() == 0 && v.degree() == 0 {
                    let e = pairs.entry((u.clone(), v.clone())).or_insert_with(Rat::zero);
                    *e += c * d;
                }
            }
        }
        let mut cache: BTreeMap<BarWord, SparseVec> = BTreeMap::new();
        let mut pi = |w: &BarWord| -> Result<SparseVec, HopfError> {
            if let Some(v) = cache.get(w) {
                return Ok(v.clone());
            }
            let v = project(&BarElement::word(w.clone()))?;
            cache.insert(w.clone(), v.clone());
            Ok(v)
        };
        for ((u, v), c) in pairs {
            if c.is_zero() {
                continue;
            }
            let (pu, pv) = (pi(&u)?, pi(&v)?);
            for (a, x) in pu.iter() {
                for (bb, y) in pv.iter() {
                    *terms.entry((a, bb)).or_insert_with(Rat::zero) += &(&c * x) * y;
                }
            }
        }
        comul.push(terms.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, bb), c)| (a, bb, c)).collect());
        counit.push(r.coefficient(&BarWord::empty(t)));
        antipode.push(project(&antipode_of(t, &r)?)?);
    }

    let unit = project(&BarElement::word(BarWord::empty(t)))?;
    let labels: Vec<String> = (0..n).map(|k| format!("h{k}")).collect();
    let descriptions = (0..n).map(|k| rep(k).display(t)).collect();
    let name = match t.grading() {
        LetterGrading::Weight(_) => format!("H0 of the weight-graded bar construction of {}", b.algebra().name()),
        _ => format!("H0 of the bar construction of {}", b.algebra().name()),
    };
    HopfAlgebra::new(HopfParts {
        name,
        labels,
        descriptions,
        weights: basis.iter().map(|((w, _), _)| *w).collect(),
        grades: basis.iter().map(|((_, g), _)| *g).collect(),
        bound: grade_bound,
        mul,
        comul,
        counit,
        antipode: SparseMatrix::from_columns(n, antipode),
        unit,
    })
}
