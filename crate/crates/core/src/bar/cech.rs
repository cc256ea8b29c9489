use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{bar_complex, collapse, BarBound, BarError, Stability, TableRow, MAX_WORDS};
use crate::complexes::{cohomology_table, direct_sum, tensor, Complex};
use crate::dga::{AugmentedDGA, LetterGrading};

/// Level `n` of the Čech nerve of `Spec k → Spec A`, modelled as `B(A)^{⊗n}`.
#[derive(Clone, Debug)]
pub struct CechLevel {
    level: usize,
    window: Option<(i64, i64)>,
    pieces: BTreeMap<(i64, usize), Complex>,
    stability: Stability,
}

pub fn cech_level(a: &AugmentedDGA, n: usize, window: Option<(i64, i64)>, bound: BarBound) -> Result<CechLevel, BarError> {
    let bar = bar_complex(a, None, bound)?;
    let grade_bound = bar.letters().bound().filter(|_| bar.letters().grading() != LetterGrading::All);
    let base: Vec<((i64, usize), Complex)> = bar.pieces().map(|p| ((p.weight(), p.grade()), p.complex().clone())).collect();
    let mut level: BTreeMap<(i64, usize), Complex> = BTreeMap::from([((0, 0), Complex::unit())]);
    for _ in 0..n {
        let pairs: Vec<((i64, usize), &Complex, &Complex)> = level
            .iter()
            .flat_map(|(&(w1, g1), c1)| {
                base.iter()
                    .filter(move |((_, g2), _)| grade_bound.is_none_or(|b| g1 + g2 <= b))
                    .map(move |((w2, g2), c2)| ((w1 + w2, g1 + g2), c1, c2))
            })
            .collect();
        let size: usize = pairs.iter().map(|(_, a, b)| a.total_dim() * b.total_dim()).sum();
        if size > MAX_WORDS {
            return Err(BarError::TooLarge { what: format!("Čech level {n}"), size, limit: MAX_WORDS });
        }
        let products: Vec<((i64, usize), Complex)> =
            pairs.into_par_iter().map(|(k, a, b)| tensor(a, b).map(|c| (k, c))).collect::<Result<_, _>>()?;
        let mut next: BTreeMap<(i64, usize), Complex> = BTreeMap::new();
        for (k, c) in products {
            let merged = match next.remove(&k) {
                None => c,
                Some(prev) => direct_sum(&prev, &c)?,
            };
            next.insert(k, merged);
        }
        level = next;
    }
    Ok(CechLevel { level: n, window, pieces: level, stability: bar.stability() })
}

impl CechLevel {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn stability(&self) -> Stability {
        self.stability
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&(i64, usize), &Complex)> {
        self.pieces.iter()
    }

    pub fn raw_table(&self) -> BTreeMap<(i64, usize, i64), usize> {
        let rows: Vec<Vec<((i64, usize, i64), usize)>> = self
            .pieces
            .par_iter()
            .map(|(&(w, g), c)| {
                cohomology_table(c)
                    .into_iter()
                    .filter(|(n, d)| *d > 0 && self.window.is_none_or(|(lo, hi)| (lo..=hi).contains(n)))
                    .map(|(n, d)| ((w, g, n), d))
                    .collect()
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    pub fn table(&self) -> Vec<TableRow> {
        collapse(&self.raw_table(), &self.stability)
    }

    pub fn total_complex(&self) -> Result<Complex, BarError> {
        let mut acc: Option<Complex> = None;
        for c in self.pieces.values() {
            acc = Some(match acc {
                None => c.clone(),
                Some(prev) => direct_sum(&prev, c)?,
            });
        }
        Ok(acc.unwrap_or_else(Complex::zero))
    }
}
