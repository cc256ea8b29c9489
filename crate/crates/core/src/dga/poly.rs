use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::exactlin::Rat;

/// A monomial in the generators of a free graded-commutative algebra, as an
/// exponent vector with trailing zeros trimmed. The generators are multiplied
/// in declaration order, which fixes the sign of the monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn generator(i: usize) -> Monomial {
        Monomial::power(i, 1)
    }

    pub fn power(i: usize, e: u32) -> Monomial {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial::from_exponents(v)
    }

    pub fn from_exponents(mut v: Vec<u32>) -> Monomial {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors, with multiplicity.
    pub fn length(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Largest generator index occurring, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn linear_form(&self, values: &[i64]) -> i64 {
        self.0.iter().zip(values).map(|(&e, &v)| e as i64 * v).sum()
    }

    /// `self · other` as `±monomial`, or `None` when an odd generator repeats.
    pub fn mul(&self, other: &Monomial, odd: &[bool]) -> Option<(bool, Monomial)> {
        let n = self.0.len().max(other.0.len());
        let mut exps = vec![0u32; n];
        let mut negative = false;
        // odd generators of `self` with index above the current one, counted as
        // each odd factor of `other` moves left past them
        let mut odd_in_self_above: usize = (0..self.0.len()).filter(|&i| odd[i] && self.0[i] > 0).count();
        for (i, e) in exps.iter_mut().enumerate() {
            let a = self.exponent(i);
            let b = other.exponent(i);
            if odd[i] {
                if a > 0 && b > 0 {
                    return None;
                }
                if a > 0 {
                    odd_in_self_above -= 1;
                }
                if b > 0 && odd_in_self_above % 2 == 1 {
                    negative = !negative;
                }
            }
            *e = a + b;
        }
        Some((negative, Monomial::from_exponents(exps)))
    }

    /// Expanded factor names, used for ordering.
    pub fn name_sequence<'a>(&self, names: &'a [String]) -> Vec<&'a str> {
        let mut out = Vec::with_capacity(self.length());
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                out.push(names[i].as_str());
            }
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{e}", names[i])),
            }
        }
        parts.join("*")
    }
}

/// A polynomial in the generators of a free graded-commutative algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::term(c, Monomial::one())
    }

    pub fn generator(i: usize) -> Poly {
        Poly::term(Rat::one(), Monomial::generator(i))
    }

    pub fn term(c: Rat, m: Monomial) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_generator).max()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Poly, odd: &[bool]) -> Poly {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = m1.mul(m2, odd) {
                    let c = c1 * c2;
                    p.add_term(m, if neg { -c } else { c });
                }
            }
        }
        p
    }

    /// Substitutes `x_i ↦ images[i]` into every monomial, in generator order.
    pub fn substitute(&self, images: &[Poly], odd: &[bool]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&images[i], odd);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                let _ = write!(s, "{a}");
            } else if a.is_one() {
                s.push_str(&m.display(names));
            } else {
                let _ = write!(s, "{a}*{}", m.display(names));
            }
        }
        s
    }
}
