use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{assemble, bar_complex, BarBound, BarError, Stability};
use crate::complexes::{cohomology_table, Complex, Label};
use crate::dga::{validate, AugmentedDGA, StructConst};
use crate::exactlin::Rat;

/// Largest total basis of the Moore complex the oracle will build.
pub const ORACLE_LIMIT: usize = 200_000;

/// Cohomology of the three models in one stable bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub weight: i64,
    pub degree: i64,
    pub moore: usize,
    pub normalized: usize,
    pub bar: usize,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.moore == self.normalized && self.normalized == self.bar
    }
}

/// The un-normalized two-sided bar construction `k ⊗ A^{⊗•} ⊗ k`, its
/// normalization, and the reduced bar complex, compared in every degree that
/// is stable for all three at the given level cap.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub levels: usize,
    pub rows: Vec<OracleRow>,
    moore: BTreeMap<i64, Complex>,
    stability: Stability,
}

impl OracleReport {
    pub fn matches(&self) -> bool {
        self.rows.iter().all(OracleRow::agrees)
    }

    /// Moore complex pieces by weight.
    pub fn moore(&self) -> &BTreeMap<i64, Complex> {
        &self.moore
    }

    pub fn stability(&self) -> Stability {
        self.stability
    }
}

pub fn comonadic_oracle(a: &AugmentedDGA, levels: usize, window: Option<(i64, i64)>) -> Result<OracleReport, BarError> {
    let report = validate(a);
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(BarError::InvalidAlgebra(lines.join("; ")));
    }
    let s = a.as_struct().ok_or_else(|| BarError::Unsupported("the comonadic oracle needs a structure-constant algebra".into()))?;
    let b = s.basis().len();
    let mut size = 0usize;
    let mut level_size = 1usize;
    for _ in 0..=levels {
        size = size.saturating_add(level_size);
        level_size = level_size.saturating_mul(b);
    }
    if size > ORACLE_LIMIT {
        return Err(BarError::TooLarge { what: format!("the Moore complex at level {levels}"), size, limit: ORACLE_LIMIT });
    }
    let smin = s.basis().iter().map(|e| e.degree - 1).min().unwrap_or(-1);
    let smax = s.basis().iter().map(|e| e.degree - 1).max().unwrap_or(-1);
    let stability = Stability::from_letter_range(levels, Some((smin, smax)));

    let moore = simplicial_pieces(s, levels, false);
    let normalized = simplicial_pieces(s, levels, true);
    let bar = bar_complex(a, None, BarBound::WordLength(levels))?;
    let bar_stab = bar.stability();

    let table = |pieces: &BTreeMap<i64, Complex>| -> BTreeMap<(i64, i64), usize> {
        pieces.iter().flat_map(|(&w, c)| cohomology_table(c).into_iter().map(move |(n, d)| ((w, n), d))).collect()
    };
    let mt = table(&moore);
    let nt = table(&normalized);
    let bt: BTreeMap<(i64, i64), usize> = bar.raw_table().into_iter().map(|((w, _, n), d)| ((w, n), d)).collect();

    let mut keys: Vec<(i64, i64)> = mt.keys().chain(nt.keys()).chain(bt.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let rows = keys
        .into_iter()
        .filter(|&(_, n)| stability.is_stable(n) && bar_stab.is_stable(n) && window.is_none_or(|(lo, hi)| (lo..=hi).contains(&n)))
        .map(|(w, n)| OracleRow {
            weight: w,
            degree: n,
            moore: mt.get(&(w, n)).copied().unwrap_or(0),
            normalized: nt.get(&(w, n)).copied().unwrap_or(0),
            bar: bt.get(&(w, n)).copied().unwrap_or(0),
        })
        .filter(|r| r.moore + r.normalized + r.bar > 0)
        .collect();
    Ok(OracleReport { levels, rows, moore, stability })
}

/// Levels `0..=levels` of `k ⊗ A^{⊗L} ⊗ k` with total differential
/// `δ + (-1)^L ∂`, `δ = Σ (-1)^i d_i`. With `normalized`, words containing
/// the unit are dropped (the quotient by degeneracies).
fn simplicial_pieces(s: &StructConst, levels: usize, normalized: bool) -> BTreeMap<i64, Complex> {
    let basis = s.basis();
    let u = s.unit_index();
    let alphabet: Vec<usize> = (0..basis.len()).filter(|&i| !(normalized && i == u)).collect();
    let mut words: BTreeMap<i64, BTreeMap<i64, Vec<Vec<usize>>>> = BTreeMap::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for level in 0..=levels {
        for w in &frontier {
            let weight = w.iter().map(|&i| basis[i].weight).sum();
            let degree = w.iter().map(|&i| basis[i].degree).sum::<i64>() - level as i64;
            words.entry(weight).or_default().entry(degree).or_default().push(w.clone());
        }
        if level < levels {
            frontier = frontier.iter().flat_map(|w| alphabet.iter().map(move |&i| [w.as_slice(), &[i]].concat())).collect();
        }
    }
    let t = s.augmentation_values();
    let keep = |w: &Vec<usize>| !(normalized && w.contains(&u));
    let d = |w: &Vec<usize>| -> Vec<(Vec<usize>, Rat)> {
        let l = w.len();
        let mut out = Vec::new();
        // internal differential, Koszul signs, scaled by (-1)^L
        let mut before = 0i64;
        for i in 0..l {
            let sign = Rat::sign(before + l as i64);
            for (k, c) in s.differential().column(w[i]).iter() {
                let mut nw = w.clone();
                nw[i] = k;
                out.push((nw, &sign * c));
            }
            before += basis[w[i]].degree;
        }
        if l > 0 {
            if !t[w[0]].is_zero() {
                out.push((w[1..].to_vec(), t[w[0]].clone()));
            }
            for i in 1..l {
                let sign = Rat::sign(i as i64);
                for (k, c) in s.product(w[i - 1], w[i]).iter() {
                    let nw = [&w[..i - 1], &[k], &w[i + 1..]].concat();
                    out.push((nw, &sign * c));
                }
            }
            if !t[w[l - 1]].is_zero() {
                out.push((w[..l - 1].to_vec(), &Rat::sign(l as i64) * &t[w[l - 1]]));
            }
        }
        out.retain(|(v, _)| keep(v));
        out
    };
    let label = |w: &Vec<usize>| Label::Word(w.iter().map(|&i| Label::name(basis[i].name.clone())).collect());
    words
        .into_par_iter()
        .map(|(weight, by_degree)| {
            let lo = *by_degree.keys().next().expect("nonempty piece");
            let hi = *by_degree.keys().next_back().expect("nonempty piece");
            (weight, assemble(&by_degree, (lo, hi), (false, false), label, d))
        })
        .collect()
}
