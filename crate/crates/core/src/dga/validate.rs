use std::fmt;

use super::{AugmentedDGA, FreeGC, Poly, Presentation, StructConst};
use crate::exactlin::{Rat, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantKind {
    GradedCommutativity,
    Leibniz,
    DSquared,
    Augmentation,
    Weight,
    Degree,
    Associativity,
    UnitLaw,
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvariantKind::GradedCommutativity => "graded-commutativity",
            InvariantKind::Leibniz => "leibniz",
            InvariantKind::DSquared => "d-squared",
            InvariantKind::Augmentation => "augmentation",
            InvariantKind::Weight => "weight",
            InvariantKind::Degree => "degree",
            InvariantKind::Associativity => "associativity",
            InvariantKind::UnitLaw => "unit",
        };
        f.write_str(s)
    }
}

/// A failed invariant with the generators or basis elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: InvariantKind,
    pub witness: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.kind, self.witness.join(", "), self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: InvariantKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: InvariantKind, witness: &[&str], detail: impl Into<String>) {
        self.violations.push(Violation { kind, witness: witness.iter().map(|s| s.to_string()).collect(), detail: detail.into() });
    }
}

pub fn validate(a: &AugmentedDGA) -> ValidationReport {
    let mut r = ValidationReport::default();
    match a.presentation() {
        Presentation::Free(f) => validate_free(f, &mut r),
        Presentation::StructConst(s) => validate_struct(s, &mut r),
    }
    r
}

fn validate_free(f: &FreeGC, r: &mut ValidationReport) {
    let names = f.names();
    for (i, g) in f.generators().iter().enumerate() {
        let dg = &f.differentials()[i];
        for (m, _) in dg.terms() {
            let n = f.monomial_degree(m);
            if n != g.degree + 1 {
                r.push(
                    InvariantKind::Degree,
                    &[&g.name],
                    format!("d({}) has a term {} of degree {n}, expected {}", g.name, m.display(names), g.degree + 1),
                );
            }
            let w = f.monomial_weight(m);
            if w != g.weight {
                r.push(
                    InvariantKind::Weight,
                    &[&g.name],
                    format!("d({}) has a term {} of weight {w}, expected {}", g.name, m.display(names), g.weight),
                );
            }
        }
        let dd = f.d(dg);
        if !dd.is_zero() {
            r.push(InvariantKind::DSquared, &[&g.name], format!("d(d({})) = {}", g.name, dd.display(names)));
        }
        let t = &f.augmentation_values()[i];
        if !t.is_zero() && (g.degree != 0 || g.weight != 0) {
            r.push(
                InvariantKind::Augmentation,
                &[&g.name],
                format!("t({}) = {t} but {} has degree {} and weight {}", g.name, g.name, g.degree, g.weight),
            );
        }
        let td = f.augment(dg);
        if !td.is_zero() {
            r.push(InvariantKind::Augmentation, &[&g.name], format!("t(d({})) = {td}", g.name));
        }
    }
    let n = f.generators().len();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (Poly::generator(i), Poly::generator(j));
            let lhs = f.d(&f.mul(&x, &y));
            let s = Rat::sign(f.generators()[i].degree);
            let rhs = f.mul(&f.d(&x), &y).add(&f.mul(&x, &f.d(&y)).scale(&s));
            if lhs != rhs {
                r.push(InvariantKind::Leibniz, &[&names[i], &names[j]], "d(xy) differs from d(x)y ± x d(y)");
            }
        }
    }
}

fn validate_struct(s: &StructConst, r: &mut ValidationReport) {
    let b = s.basis();
    let n = b.len();
    let u = s.unit_index();
    let name = |i: usize| b[i].name.as_str();
    let show = |v: &SparseVec| super::format_combination(v, &b.iter().map(|e| e.name.clone()).collect::<Vec<_>>(), Some(u));

    if !s.augmentation_values()[u].is_one() {
        r.push(InvariantKind::Augmentation, &[name(u)], format!("t({}) = {}, expected 1", name(u), s.augmentation_values()[u]));
    }
    for i in 0..n {
        for (p, q) in [(u, i), (i, u)] {
            if *s.product(p, q) != SparseVec::unit(i) {
                r.push(InvariantKind::UnitLaw, &[name(p), name(q)], format!("{}*{} = {}", name(p), name(q), show(s.product(p, q))));
            }
        }
    }
    for i in 0..n {
        let t = &s.augmentation_values()[i];
        if !t.is_zero() && (b[i].degree != 0 || b[i].weight != 0) {
            r.push(
                InvariantKind::Augmentation,
                &[name(i)],
                format!("t({}) = {t} but it has degree {} and weight {}", name(i), b[i].degree, b[i].weight),
            );
        }
        let di = s.differential().column(i);
        for (k, _) in di.iter() {
            if b[k].degree != b[i].degree + 1 {
                r.push(InvariantKind::Degree, &[name(i)], format!("d({}) involves {} of degree {}", name(i), name(k), b[k].degree));
            }
            if b[k].weight != b[i].weight {
                r.push(InvariantKind::Weight, &[name(i)], format!("d({}) involves {} of weight {}", name(i), name(k), b[k].weight));
            }
        }
        let dd = s.differential().mul_vec(di);
        if !dd.is_zero() {
            r.push(InvariantKind::DSquared, &[name(i)], format!("d(d({})) = {}", name(i), show(&dd)));
        }
        let td = s.augment(di);
        if !td.is_zero() {
            r.push(InvariantKind::Augmentation, &[name(i)], format!("t(d({})) = {td}", name(i)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let p = s.product(i, j);
            for (k, _) in p.iter() {
                if b[k].degree != b[i].degree + b[j].degree {
                    r.push(
                        InvariantKind::Degree,
                        &[name(i), name(j)],
                        format!("{}*{} involves {} of degree {}", name(i), name(j), name(k), b[k].degree),
                    );
                }
                if b[k].weight != b[i].weight + b[j].weight {
                    r.push(
                        InvariantKind::Weight,
                        &[name(i), name(j)],
                        format!("{}*{} involves {} of weight {}", name(i), name(j), name(k), b[k].weight),
                    );
                }
            }
            if i <= j {
                let other = s.product(j, i).scale(&Rat::sign(b[i].degree * b[j].degree));
                if *p != other {
                    r.push(
                        InvariantKind::GradedCommutativity,
                        &[name(i), name(j)],
                        format!("{}*{} = {} but the graded-commutative rule requires {}", name(i), name(j), show(p), show(&other)),
                    );
                }
            }
            let t = s.augment(p);
            let tt = &s.augmentation_values()[i] * &s.augmentation_values()[j];
            if t != tt {
                r.push(InvariantKind::Augmentation, &[name(i), name(j)], format!("t({}*{}) = {t}, expected {tt}", name(i), name(j)));
            }
            let (ei, ej) = (SparseVec::unit(i), SparseVec::unit(j));
            let lhs = s.differential().mul_vec(p);
            let rhs =
                s.mul(&s.differential().mul_vec(&ei), &ej).add(&s.mul(&ei, &s.differential().mul_vec(&ej)).scale(&Rat::sign(b[i].degree)));
            if lhs != rhs {
                r.push(
                    InvariantKind::Leibniz,
                    &[name(i), name(j)],
                    format!("d({}*{}) = {} but the Leibniz rule gives {}", name(i), name(j), show(&lhs), show(&rhs)),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = s.product(i, j);
            for k in 0..n {
                let ek = SparseVec::unit(k);
                let left = s.mul(ij, &ek);
                let right = s.mul(&SparseVec::unit(i), s.product(j, k));
                if left != right {
                    r.push(
                        InvariantKind::Associativity,
                        &[name(i), name(j), name(k)],
                        format!(
                            "({a}*{b})*{c} = {} but {a}*({b}*{c}) = {}",
                            show(&left),
                            show(&right),
                            a = name(i),
                            b = name(j),
                            c = name(k)
                        ),
                    );
                }
            }
        }
    }
}
