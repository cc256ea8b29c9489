use std::collections::BTreeMap;
use std::fmt;

use super::BarError;
use crate::dga::LetterTable;
use crate::exactlin::Rat;

/// A word `[a1|...|an]` over the letters of a [`LetterTable`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarWord {
    origin: u64,
    letters: Vec<u32>,
    degree: i64,
    weight: i64,
}

impl BarWord {
    pub fn empty(t: &LetterTable) -> BarWord {
        BarWord { origin: t.id(), letters: Vec::new(), degree: 0, weight: 0 }
    }

    pub fn new(t: &LetterTable, letters: Vec<u32>) -> Result<BarWord, BarError> {
        if let Some(&l) = letters.iter().find(|&&l| l as usize >= t.len()) {
            return Err(BarError::ForeignWord(format!("letter {l} is not in an alphabet of size {}", t.len())));
        }
        Ok(BarWord::from_letters(t, letters))
    }

    pub(crate) fn from_letters(t: &LetterTable, letters: Vec<u32>) -> BarWord {
        let degree = letters.iter().map(|&l| t.suspended_degree(l as usize)).sum();
        let weight = letters.iter().map(|&l| t.weight(l as usize)).sum();
        BarWord { origin: t.id(), letters, degree, weight }
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `Σ (|a_i| - 1)`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn origin(&self) -> u64 {
        self.origin
    }

    pub fn display(&self, t: &LetterTable) -> String {
        let parts: Vec<String> = self.letters.iter().map(|&l| t.label(l as usize).to_string()).collect();
        format!("[{}]", parts.join("|"))
    }
}

/// A finite ℚ-linear combination of bar words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BarElement {
    terms: BTreeMap<BarWord, Rat>,
}

impl BarElement {
    pub fn zero() -> BarElement {
        BarElement::default()
    }

    pub fn word(w: BarWord) -> BarElement {
        let mut e = BarElement::zero();
        e.add_term(w, Rat::one());
        e
    }

    pub fn add_term(&mut self, w: BarWord, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BarWord, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &BarWord) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> BarElement {
        let mut out = BarElement::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &BarElement) -> BarElement {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn display(&self, t: &LetterTable) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                s.push_str(&a.to_string());
            }
            s.push_str(&w.display(t));
        }
        s
    }
}

impl fmt::Display for BarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| format!("#{l}")).collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

/// A finite combination of `u ⊗ v` with `u, v` bar words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<(BarWord, BarWord), Rat>,
}

impl TensorElement {
    pub fn zero() -> TensorElement {
        TensorElement::default()
    }

    pub fn add_term(&mut self, a: BarWord, b: BarWord, c: Rat) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BarWord, BarWord), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v * c);
        }
        out
    }
}

fn check(t: &LetterTable, w: &BarWord) -> Result<(), BarError> {
    if w.origin != t.id() {
        Err(BarError::ForeignWord(format!("word {w} was built over a different algebra")))
    } else {
        Ok(())
    }
}

/// Signed shuffles of two letter sequences, Koszul signs on suspended degrees.
pub(crate) fn shuffle_letters(t: &LetterTable, u: &[u32], v: &[u32]) -> Vec<(Vec<u32>, bool)> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    // suffix sums of suspended degrees of u
    let mut rest = vec![0i64; u.len() + 1];
    for i in (0..u.len()).rev() {
        rest[i] = rest[i + 1] + t.suspended_degree(u[i] as usize);
    }
    shuffle_rec(t, u, v, 0, 0, &rest, false, &mut buf, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn shuffle_rec(
    t: &LetterTable,
    u: &[u32],
    v: &[u32],
    i: usize,
    j: usize,
    rest: &[i64],
    neg: bool,
    buf: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, bool)>,
) {
    if i == u.len() {
        let mut w = buf.clone();
        w.extend_from_slice(&v[j..]);
        out.push((w, neg));
        return;
    }
    if j == v.len() {
        let mut w = buf.clone();
        w.extend_from_slice(&u[i..]);
        out.push((w, neg));
        return;
    }
    buf.push(u[i]);
    shuffle_rec(t, u, v, i + 1, j, rest, neg, buf, out);
    buf.pop();
    // v[j] moves left past the remaining letters u[i..]
    let flip = (t.suspended_degree(v[j] as usize) * rest[i]).rem_euclid(2) == 1;
    buf.push(v[j]);
    shuffle_rec(t, u, v, i, j + 1, rest, neg ^ flip, buf, out);
    buf.pop();
}

/// The bar differential on a letter sequence.
///
/// `d[a1|...|an] = -Σ (-1)^{ε_{i-1}} [..|da_i|..] + Σ (-1)^{ε_i} [..|a_i a_{i+1}|..]`
/// with `ε_i = Σ_{j≤i} (|a_j| - 1)`. Panics if a product lies beyond the
/// grade bound of the table, which cannot happen for words within the bound.
pub(crate) fn d_letters(t: &LetterTable, w: &[u32]) -> Vec<(Vec<u32>, Rat)> {
    let mut out = Vec::new();
    let mut eps = 0i64;
    for i in 0..w.len() {
        let before = eps;
        eps += t.suspended_degree(w[i] as usize);
        let s_int = -Rat::sign(before);
        for (k, c) in t.d(w[i] as usize).iter() {
            let mut nw = w.to_vec();
            nw[i] = k as u32;
            out.push((nw, &s_int * c));
        }
        if i + 1 < w.len() {
            let prod = t.mul(w[i] as usize, w[i + 1] as usize).expect("product within the grade bound");
            let s_mul = Rat::sign(eps);
            for (k, c) in prod.iter() {
                let mut nw = Vec::with_capacity(w.len() - 1);
                nw.extend_from_slice(&w[..i]);
                nw.push(k as u32);
                nw.extend_from_slice(&w[i + 2..]);
                out.push((nw, &s_mul * c));
            }
        }
    }
    out
}

fn collect(t: &LetterTable, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> BarElement {
    let mut e = BarElement::zero();
    for (w, c) in terms {
        e.add_term(BarWord::from_letters(t, w), c);
    }
    e
}

fn check_bound(t: &LetterTable, letters: &[u32]) -> Result<(), BarError> {
    if let Some(b) = t.bound() {
        let g: usize = letters.iter().map(|&l| t.grade(l as usize)).sum();
        if g > b {
            return Err(BarError::BeyondBound { grade: g, bound: b });
        }
    }
    Ok(())
}

/// The bar differential of a word.
pub fn differential(t: &LetterTable, u: &BarWord) -> Result<BarElement, BarError> {
    check(t, u)?;
    check_bound(t, &u.letters)?;
    Ok(collect(t, d_letters(t, &u.letters)))
}

pub fn differential_of(t: &LetterTable, x: &BarElement) -> Result<BarElement, BarError> {
    let mut out = BarElement::zero();
    for (w, c) in x.terms() {
        out = out.add(&differential(t, w)?.scale(c));
    }
    Ok(out)
}

/// The shuffle product `u · v`.
pub fn shuffle_product(t: &LetterTable, u: &BarWord, v: &BarWord) -> Result<BarElement, BarError> {
    check(t, u)?;
    check(t, v)?;
    Ok(collect(
        t,
        shuffle_letters(t, &u.letters, &v.letters).into_iter().map(|(w, neg)| (w, if neg { Rat::from_int(-1) } else { Rat::one() })),
    ))
}

pub fn shuffle_elements(t: &LetterTable, x: &BarElement, y: &BarElement) -> Result<BarElement, BarError> {
    let mut out = BarElement::zero();
    for (u, a) in x.terms() {
        for (v, b) in y.terms() {
            out = out.add(&shuffle_product(t, u, v)?.scale(&(a * b)));
        }
    }
    Ok(out)
}

/// `Δ[a1|...|an] = Σ_i [a1|...|ai] ⊗ [a_{i+1}|...|an]`.
pub fn deconcatenation(t: &LetterTable, u: &BarWord) -> Result<TensorElement, BarError> {
    check(t, u)?;
    let mut out = TensorElement::zero();
    for i in 0..=u.len() {
        out.add_term(BarWord::from_letters(t, u.letters[..i].to_vec()), BarWord::from_letters(t, u.letters[i..].to_vec()), Rat::one());
    }
    Ok(out)
}

pub fn coproduct_of(t: &LetterTable, x: &BarElement) -> Result<TensorElement, BarError> {
    let mut out = TensorElement::zero();
    for (w, c) in x.terms() {
        out = out.add(&deconcatenation(t, w)?.scale(c));
    }
    Ok(out)
}

/// Projection onto the empty word.
pub fn counit(x: &BarElement) -> Rat {
    x.terms().find(|(w, _)| w.is_empty()).map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
}

/// `S[a1|...|an] = (-1)^n κ [an|...|a1]`, `κ` the Koszul sign of the reversal.
pub fn antipode(t: &LetterTable, u: &BarWord) -> Result<BarElement, BarError> {
    check(t, u)?;
    let s: Vec<i64> = u.letters.iter().map(|&l| t.suspended_degree(l as usize)).collect();
    let mut k = u.len() as i64;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            k += s[i] * s[j];
        }
    }
    let mut rev = u.letters.clone();
    rev.reverse();
    Ok(collect(t, [(rev, Rat::sign(k))]))
}

pub fn antipode_of(t: &LetterTable, x: &BarElement) -> Result<BarElement, BarError> {
    let mut out = BarElement::zero();
    for (w, c) in x.terms() {
        out = out.add(&antipode(t, w)?.scale(c));
    }
    Ok(out)
}

/// Product on `B ⊗ B`: `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac ⊗ bd`.
pub fn tensor_product(t: &LetterTable, x: &TensorElement, y: &TensorElement) -> Result<TensorElement, BarError> {
    let mut out = TensorElement::zero();
    for ((a, b), p) in x.terms() {
        for ((c, d), q) in y.terms() {
            let sign = Rat::sign(b.degree() * c.degree());
            let ac = shuffle_product(t, a, c)?;
            let bd = shuffle_product(t, b, d)?;
            let coef = &(&sign * p) * q;
            for (u, r) in ac.terms() {
                for (v, s) in bd.terms() {
                    out.add_term(u.clone(), v.clone(), &(&coef * r) * s);
                }
            }
        }
    }
    Ok(out)
}

/// `(d ⊗ 1 + 1 ⊗ d)` with the Koszul sign on the second factor.
pub fn tensor_differential(t: &LetterTable, x: &TensorElement) -> Result<TensorElement, BarError> {
    let mut out = TensorElement::zero();
    for ((a, b), c) in x.terms() {
        for (u, r) in differential(t, a)?.terms() {
            out.add_term(u.clone(), b.clone(), c * r);
        }
        let s = Rat::sign(a.degree());
        for (v, r) in differential(t, b)?.terms() {
            out.add_term(a.clone(), v.clone(), &(c * r) * &s);
        }
    }
    Ok(out)
}

/// Applies `f ⊗ 1` or `1 ⊗ f` for an operation on words of degree zero.
pub fn apply_left(
    x: &TensorElement,
    f: impl Fn(&BarWord) -> Result<TensorElement, BarError>,
) -> Result<BTreeMap<(BarWord, BarWord, BarWord), Rat>, BarError> {
    let mut out: BTreeMap<(BarWord, BarWord, BarWord), Rat> = BTreeMap::new();
    for ((a, b), c) in x.terms() {
        for ((p, q), r) in f(a)?.terms() {
            *out.entry((p.clone(), q.clone(), b.clone())).or_insert_with(Rat::zero) += c * r;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

pub fn apply_right(
    x: &TensorElement,
    f: impl Fn(&BarWord) -> Result<TensorElement, BarError>,
) -> Result<BTreeMap<(BarWord, BarWord, BarWord), Rat>, BarError> {
    let mut out: BTreeMap<(BarWord, BarWord, BarWord), Rat> = BTreeMap::new();
    for ((a, b), c) in x.terms() {
        for ((p, q), r) in f(b)?.terms() {
            *out.entry((a.clone(), p.clone(), q.clone())).or_insert_with(Rat::zero) += c * r;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}
