//! Commutative Hopf algebras given by structure constants: the degree-zero
//! cohomology of the bar construction, finite group fixtures, axiom checks
//! and points with values in split étale algebras.

mod coarse;
mod points;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::bar::BarError;
use crate::complexes::ComplexError;
use crate::exactlin::{Rat, SparseMatrix, SparseVec};

pub use coarse::coarse_moduli;
pub use points::{characters, group_points, GroupPoints, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("H^0 is not stable under the word-length cap: {0}")]
    Unstable(String),
    #[error("malformed structure constants: {0}")]
    Shape(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("the group scheme has positive dimension {dimension}; its points over a field are infinite")]
    InfiniteVariety { dimension: usize },
    #[error("the Hopf algebra is truncated at grade {0}; points need the full multiplication")]
    Truncated(usize),
    #[error("the target is not split étale: {0}")]
    NotSplit(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Raw data for [`HopfAlgebra::new`].
#[derive(Clone, Debug)]
pub struct HopfParts {
    pub name: String,
    pub labels: Vec<String>,
    /// A description of each basis element, e.g. its cycle representative.
    pub descriptions: Vec<String>,
    pub weights: Vec<i64>,
    pub grades: Vec<usize>,
    /// Products and coproducts are known only where grades add up to at most the bound.
    pub bound: Option<usize>,
    /// `mul[i][j] = b_i b_j`, `None` beyond the bound.
    pub mul: Vec<Vec<Option<SparseVec>>>,
    /// `Δ b_k = Σ c (b_i ⊗ b_j)` as `(i, j, c)`.
    pub comul: Vec<Vec<(usize, usize, Rat)>>,
    pub counit: Vec<Rat>,
    /// Column `k` is `S(b_k)`.
    pub antipode: SparseMatrix,
    pub unit: SparseVec,
}

/// A commutative Hopf algebra over ℚ on a finite (possibly grade-truncated) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfAlgebra {
    name: String,
    labels: Vec<String>,
    descriptions: Vec<String>,
    weights: Vec<i64>,
    grades: Vec<usize>,
    bound: Option<usize>,
    mul: Vec<Vec<Option<SparseVec>>>,
    comul: Vec<BTreeMap<(usize, usize), Rat>>,
    counit: Vec<Rat>,
    antipode: SparseMatrix,
    unit: SparseVec,
}

/// An element of `H ⊗ H`.
pub type Tensor2 = BTreeMap<(usize, usize), Rat>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, Rat>, k: K, c: Rat) {
    if c.is_zero() {
        return;
    }
    let slot = m.entry(k).or_insert_with(Rat::zero);
    *slot += c;
}

fn clean<K: Ord>(mut m: BTreeMap<K, Rat>) -> BTreeMap<K, Rat> {
    m.retain(|_, v| !v.is_zero());
    m
}

impl HopfAlgebra {
    pub fn new(p: HopfParts) -> Result<HopfAlgebra, HopfError> {
        let n = p.labels.len();
        let bad = |what: &str| Err(HopfError::Shape(format!("{what} does not match a basis of size {n}")));
        if p.weights.len() != n || p.grades.len() != n {
            return bad("weights or grades");
        }
        if p.mul.len() != n || p.mul.iter().any(|r| r.len() != n) {
            return bad("the multiplication table");
        }
        if p.comul.len() != n || p.counit.len() != n {
            return bad("the coproduct or counit");
        }
        if p.antipode.nrows() != n || p.antipode.ncols() != n {
            return bad("the antipode");
        }
        let out_of_range = |v: &SparseVec| v.max_index().is_some_and(|i| i >= n);
        if p.mul.iter().flatten().flatten().any(out_of_range) || out_of_range(&p.unit) {
            return bad("a product or the unit");
        }
        if p.comul.iter().flatten().any(|(i, j, _)| *i >= n || *j >= n) {
            return bad("a coproduct term");
        }
        let descriptions = if p.descriptions.len() == n { p.descriptions } else { p.labels.clone() };
        let comul = p
            .comul
            .into_iter()
            .map(|terms| {
                let mut m = BTreeMap::new();
                for (i, j, c) in terms {
                    add_to(&mut m, (i, j), c);
                }
                clean(m)
            })
            .collect();
        Ok(HopfAlgebra {
            name: p.name,
            labels: p.labels,
            descriptions,
            weights: p.weights,
            grades: p.grades,
            bound: p.bound,
            mul: p.mul,
            comul,
            counit: p.counit,
            antipode: p.antipode,
            unit: p.unit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn description(&self, i: usize) -> &str {
        &self.descriptions[i]
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn grade(&self, i: usize) -> usize {
        self.grades[i]
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn product(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.mul[i][j].as_ref()
    }

    pub fn coproduct(&self, k: usize) -> &Tensor2 {
        &self.comul[k]
    }

    pub fn counit(&self) -> &[Rat] {
        &self.counit
    }

    pub fn antipode(&self) -> &SparseMatrix {
        &self.antipode
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    /// `u v`, or `None` if a needed product lies beyond the bound.
    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> Option<SparseVec> {
        let mut out = SparseVec::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                out = out.axpy(&(a * b), self.product(i, j)?);
            }
        }
        Some(out)
    }

    pub fn apply_counit(&self, u: &SparseVec) -> Rat {
        u.iter().map(|(i, c)| c * &self.counit[i]).sum()
    }

    pub fn comul_vec(&self, u: &SparseVec) -> Tensor2 {
        let mut out = BTreeMap::new();
        for (k, c) in u.iter() {
            for (&(i, j), d) in &self.comul[k] {
                add_to(&mut out, (i, j), c * d);
            }
        }
        clean(out)
    }

    /// Product in `H ⊗ H` (everything sits in degree 0, so no signs).
    pub fn mul_tensor(&self, x: &Tensor2, y: &Tensor2) -> Option<Tensor2> {
        let mut out = BTreeMap::new();
        for (&(a, b), p) in x {
            for (&(c, d), q) in y {
                let ac = self.product(a, c)?;
                let bd = self.product(b, d)?;
                for (i, r) in ac.iter() {
                    for (j, s) in bd.iter() {
                        add_to(&mut out, (i, j), &(&(p * q) * r) * s);
                    }
                }
            }
        }
        Some(clean(out))
    }
}

impl fmt::Display for HopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dimension {}", self.name, self.dim())?;
        if let Some(b) = self.bound {
            write!(f, ", truncated at grade {b}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HopfAxiom {
    Unit,
    Commutativity,
    Associativity,
    Coassociativity,
    Counit,
    Bialgebra,
    Antipode,
    Grading,
}

impl fmt::Display for HopfAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HopfAxiom::Unit => "unit",
            HopfAxiom::Commutativity => "commutativity",
            HopfAxiom::Associativity => "associativity",
            HopfAxiom::Coassociativity => "coassociativity",
            HopfAxiom::Counit => "counit",
            HopfAxiom::Bialgebra => "bialgebra",
            HopfAxiom::Antipode => "antipode",
            HopfAxiom::Grading => "grading",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfViolation {
    pub axiom: HopfAxiom,
    pub witness: Vec<String>,
}

impl fmt::Display for HopfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at [{}]", self.axiom, self.witness.join(", "))
    }
}

/// Outcome of [`hopf_validate`]: identities checked, identities skipped
/// because they reach beyond the bound, and failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<HopfViolation>,
}

impl HopfReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: HopfAxiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// Checks every Hopf axiom as an exact identity wherever both sides are
/// within the bound.
pub fn hopf_validate(h: &HopfAlgebra) -> HopfReport {
    let n = h.dim();
    let mut r = HopfReport::default();
    let names = |ix: &[usize]| ix.iter().map(|&i| h.labels[i].clone()).collect::<Vec<_>>();
    let check = |r: &mut HopfReport, ok: Option<bool>, axiom: HopfAxiom, ix: &[usize]| match ok {
        None => r.skipped += 1,
        Some(true) => r.checked += 1,
        Some(false) => {
            r.checked += 1;
            r.violations.push(HopfViolation { axiom, witness: names(ix) });
        }
    };
    let basis = |i: usize| SparseVec::unit(i);
    let u = h.unit.clone();

    check(&mut r, Some(h.apply_counit(&u).is_one()), HopfAxiom::Unit, &[]);
    let uu: Tensor2 =
        clean(u.iter().flat_map(|(i, a)| u.iter().map(move |(j, b)| ((i, j), a * b))).fold(BTreeMap::new(), |mut m, (k, c)| {
            add_to(&mut m, k, c);
            m
        }));
    check(&mut r, Some(h.comul_vec(&u) == uu), HopfAxiom::Unit, &[]);
    for i in 0..n {
        let ok = h.mul(&u, &basis(i)).map(|x| x == basis(i)).zip(h.mul(&basis(i), &u).map(|x| x == basis(i))).map(|(a, b)| a && b);
        check(&mut r, ok, HopfAxiom::Unit, &[i]);
    }

    // grading: structure constants balance weights and grades
    for i in 0..n {
        let ok_counit = h.counit[i].is_zero() || (h.weights[i] == 0 && h.grades[i] == 0);
        let ok_comul =
            h.comul[i].keys().all(|&(a, b)| h.weights[a] + h.weights[b] == h.weights[i] && h.grades[a] + h.grades[b] == h.grades[i]);
        let ok_s = h.antipode.column(i).iter().all(|(k, _)| h.weights[k] == h.weights[i] && h.grades[k] == h.grades[i]);
        check(&mut r, Some(ok_counit && ok_comul && ok_s), HopfAxiom::Grading, &[i]);
        for j in 0..n {
            if let Some(p) = h.product(i, j) {
                let ok = p.iter().all(|(k, _)| h.weights[k] == h.weights[i] + h.weights[j] && h.grades[k] == h.grades[i] + h.grades[j]);
                check(&mut r, Some(ok), HopfAxiom::Grading, &[i, j]);
            }
        }
    }

    for i in 0..n {
        for j in i..n {
            let ok = h.product(i, j).zip(h.product(j, i)).map(|(a, b)| a == b);
            check(&mut r, ok, HopfAxiom::Commutativity, &[i, j]);
        }
    }

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ok = (|| {
                    let l = h.mul(h.product(i, j)?, &basis(k))?;
                    let rr = h.mul(&basis(i), h.product(j, k)?)?;
                    Some(l == rr)
                })();
                check(&mut r, ok, HopfAxiom::Associativity, &[i, j, k]);
            }
        }
    }

    for k in 0..n {
        let d = &h.comul[k];
        let mut left: BTreeMap<(usize, usize, usize), Rat> = BTreeMap::new();
        let mut right: BTreeMap<(usize, usize, usize), Rat> = BTreeMap::new();
        for (&(a, b), c) in d {
            for (&(p, q), e) in &h.comul[a] {
                add_to(&mut left, (p, q, b), c * e);
            }
            for (&(p, q), e) in &h.comul[b] {
                add_to(&mut right, (a, p, q), c * e);
            }
        }
        check(&mut r, Some(clean(left) == clean(right)), HopfAxiom::Coassociativity, &[k]);

        let mut l = SparseVec::new();
        let mut rr = SparseVec::new();
        for (&(a, b), c) in d {
            l = l.axpy(&(c * &h.counit[a]), &basis(b));
            rr = rr.axpy(&(c * &h.counit[b]), &basis(a));
        }
        check(&mut r, Some(l == basis(k) && rr == basis(k)), HopfAxiom::Counit, &[k]);

        let expected = u.scale(&h.counit[k]);
        let ok = (|| {
            let mut l = SparseVec::new();
            let mut rr = SparseVec::new();
            for (&(a, b), c) in d {
                l = l.axpy(c, &h.mul(h.antipode.column(a), &basis(b))?);
                rr = rr.axpy(c, &h.mul(&basis(a), h.antipode.column(b))?);
            }
            Some(l == expected && rr == expected)
        })();
        check(&mut r, ok, HopfAxiom::Antipode, &[k]);
    }

    for i in 0..n {
        for j in 0..n {
            let ok = (|| {
                let p = h.product(i, j)?;
                let lhs = h.comul_vec(p);
                let rhs = h.mul_tensor(&h.comul[i], &h.comul[j])?;
                let counit = h.apply_counit(p) == &h.counit[i] * &h.counit[j];
                Some(lhs == rhs && counit)
            })();
            check(&mut r, ok, HopfAxiom::Bialgebra, &[i, j]);
        }
    }
    r
}

/// The Hopf algebra of ℚ-valued functions on a finite group given by its
/// multiplication table, on the basis of indicator functions `d0, d1, …`.
pub fn finite_group_hopf(table: &[Vec<usize>]) -> Result<HopfAlgebra, HopfError> {
    let n = table.len();
    if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(HopfError::NotAGroup("the table must be square with entries below its size".into()));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(HopfError::NotAGroup(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
                }
            }
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
        .ok_or_else(|| HopfError::NotAGroup("no identity element".into()))?;
    let inverse = (0..n)
        .map(|g| (0..n).find(|&h| table[g][h] == e && table[h][g] == e).ok_or_else(|| HopfError::NotAGroup(format!("{g} has no inverse"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mul = (0..n).map(|i| (0..n).map(|j| Some(if i == j { SparseVec::unit(i) } else { SparseVec::new() })).collect()).collect();
    let mut comul = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            comul[table[a][b]].push((a, b, Rat::one()));
        }
    }
    HopfAlgebra::new(HopfParts {
        name: format!("functions on a group of order {n}"),
        labels: (0..n).map(|g| format!("d{g}")).collect(),
        descriptions: Vec::new(),
        weights: vec![0; n],
        grades: vec![0; n],
        bound: None,
        mul,
        comul,
        counit: (0..n).map(|g| if g == e { Rat::one() } else { Rat::zero() }).collect(),
        antipode: SparseMatrix::from_columns(n, inverse.iter().map(|&h| SparseVec::unit(h)).collect()),
        unit: SparseVec::from_entries((0..n).map(|g| (g, Rat::one())).collect()),
    })
}

/// `ℚ[u]` truncated at degree `bound`, `u` primitive of weight `weight`, on
/// the basis `u^0, …, u^bound`.
pub fn polynomial_hopf(weight: i64, bound: usize) -> HopfAlgebra {
    let n = bound + 1;
    let binom = |n: usize, k: usize| -> Rat {
        (0..k).fold(Rat::one(), |acc, i| &(&acc * &Rat::from_int((n - i) as i64)) / &Rat::from_int(i as i64 + 1))
    };
    let mul = (0..n).map(|i| (0..n).map(|j| (i + j <= bound).then(|| SparseVec::unit(i + j))).collect()).collect();
    let comul = (0..n).map(|k| (0..=k).map(|i| (i, k - i, binom(k, i))).collect()).collect();
    HopfAlgebra::new(HopfParts {
        name: "Q[u]".into(),
        labels: (0..n).map(|k| format!("u^{k}")).collect(),
        descriptions: Vec::new(),
        weights: (0..n).map(|k| weight * k as i64).collect(),
        grades: (0..n).collect(),
        bound: Some(bound),
        mul,
        comul,
        counit: (0..n).map(|k| if k == 0 { Rat::one() } else { Rat::zero() }).collect(),
        antipode: SparseMatrix::from_columns(n, (0..n).map(|k| SparseVec::unit(k).scale(&Rat::sign(k as i64))).collect()),
        unit: SparseVec::unit(0),
    })
    .expect("well-formed polynomial Hopf algebra")
}

/// Whether the linear map `phi: g → h` (columns are images of the basis of
/// `g`) is bijective and preserves every structure map within both bounds.
pub fn is_hopf_isomorphism(g: &HopfAlgebra, h: &HopfAlgebra, phi: &SparseMatrix) -> bool {
    let n = g.dim();
    if phi.ncols() != n || phi.nrows() != h.dim() || crate::exactlin::rank(phi) != n || h.dim() != n {
        return false;
    }
    let img = |v: &SparseVec| phi.mul_vec(v);
    let img2 = |t: &Tensor2| -> Tensor2 {
        let mut out = BTreeMap::new();
        for (&(a, b), c) in t {
            for (i, p) in phi.column(a).iter() {
                for (j, q) in phi.column(b).iter() {
                    add_to(&mut out, (i, j), &(c * p) * q);
                }
            }
        }
        clean(out)
    };
    if img(g.unit()) != *h.unit() {
        return false;
    }
    for i in 0..n {
        let e = SparseVec::unit(i);
        if h.apply_counit(&img(&e)) != g.counit()[i] {
            return false;
        }
        if h.comul_vec(&img(&e)) != img2(g.coproduct(i)) {
            return false;
        }
        if img(g.antipode().column(i)) != h.antipode().mul_vec(&img(&e)) {
            return false;
        }
        for j in 0..n {
            if let (Some(p), Some(q)) = (g.product(i, j), h.mul(&img(&e), phi.column(j))) {
                if img(p) != q {
                    return false;
                }
            }
        }
    }
    true
}
