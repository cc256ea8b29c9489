//! Small deterministic and randomized inputs shared by tests, benches and the
//! acceptance suite.
//!
//! Random complexes are generated together with their cohomology: a direct sum
//! of one-dimensional classes and contractible pairs `ℚ --1--> ℚ`, scrambled by
//! random changes of basis. The known dimensions serve as an oracle that does
//! not go through any elimination code.

use std::collections::BTreeMap;

use rand::Rng;

use crate::complexes::{Complex, Label};
use crate::dga::{AugmentedDGA, Generator, StructBuilder};
use crate::exactlin::{Rat, SparseMatrix};

fn random_small_rat<R: Rng>(rng: &mut R) -> Rat {
    let n = rng.gen_range(-3..=3);
    let d = rng.gen_range(1..=2);
    Rat::new(n, d)
}

/// A random bounded complex on `[lo, hi]` and its cohomology table.
pub fn random_complex<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_piece: usize) -> (Complex, BTreeMap<i64, usize>) {
    assert!(lo <= hi);
    let len = (hi - lo + 1) as usize;
    let h: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_piece)).collect();
    // pairs[k]: contractible pieces from degree lo+k to lo+k+1
    let pairs: Vec<usize> = (0..len).map(|k| if k + 1 < len { rng.gen_range(0..=max_piece) } else { 0 }).collect();

    // Canonical layout per degree: [classes | sources of pairs | targets of pairs]
    let dims: Vec<usize> = (0..len).map(|k| h[k] + pairs[k] + if k > 0 { pairs[k - 1] } else { 0 }).collect();
    let mut mats: Vec<Vec<Vec<Rat>>> = (0..len.saturating_sub(1))
        .map(|k| {
            let mut m = vec![vec![Rat::zero(); dims[k]]; dims[k + 1]];
            for i in 0..pairs[k] {
                m[h[k + 1] + pairs[k + 1] + i][h[k] + i] = Rat::one();
            }
            m
        })
        .collect();

    // Scramble: d^k ← P_{k+1} d^k P_k^{-1} via random elementary operations.
    for k in 0..len {
        let n = dims[k];
        if n < 2 {
            continue;
        }
        for _ in 0..(2 * n) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let c = random_small_rat(rng);
            // P = I + c E_ij acting on degree k: rows of d^{k-1}, columns of d^k.
            if k > 0 {
                let m = &mut mats[k - 1];
                let row_j = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(&row_j) {
                    *x = &*x + &(&c * y);
                }
            }
            if k + 1 < len {
                // right-multiply by P^{-1} = I - c E_ij: column j -= c * column i
                let m = &mut mats[k];
                for row in m.iter_mut() {
                    let v = &row[i] * &c;
                    row[j] = &row[j] - &v;
                }
            }
        }
    }

    let basis = (0..len).map(|k| (0..dims[k]).map(|i| Label::Name(format!("c{}_{i}", lo + k as i64))).collect()).collect();
    let diffs = mats
        .iter()
        .enumerate()
        .map(|(k, m)| if dims[k + 1] == 0 || dims[k] == 0 { SparseMatrix::zero(dims[k + 1], dims[k]) } else { SparseMatrix::from_dense(m) })
        .collect();
    let table = (0..len).map(|k| (lo + k as i64, h[k])).collect();
    (Complex::from_parts(lo, basis, diffs), table)
}

/// `ℚ`, augmented by the identity.
pub fn unit_algebra() -> AugmentedDGA {
    AugmentedDGA::free("unit", Vec::new(), Vec::new(), Vec::new()).expect("unit algebra")
}

/// `k[x]` with `|x| = 0`, `dx = 0`, `t(x) = 0`, weight `wt`.
pub fn polynomial(wt: i64) -> AugmentedDGA {
    AugmentedDGA::free("k[x]", vec![Generator::new("x", 0, wt)], vec![Default::default()], vec![Rat::zero()]).expect("k[x]")
}

/// The exterior algebra `Λ(e)` with `|e| = 1`, weight `wt`.
pub fn exterior(wt: i64) -> AugmentedDGA {
    AugmentedDGA::free("Lambda(e)", vec![Generator::new("e", 1, wt)], vec![Default::default()], vec![Rat::zero()]).expect("Λ(e)")
}

/// `ℚ ⊕ ℚe ⊕ ℚf` with `|e| = |f| = 1`, weights 1 and 2, and all products of `e, f` zero.
pub fn two_generator_mixed_tate() -> AugmentedDGA {
    let mut b = StructBuilder::new("Q+Qe+Qf");
    b.unit("1");
    b.element("e", 1, 1, Rat::zero());
    b.element("f", 1, 2, Rat::zero());
    b.build().expect("square-zero algebra").with_mixed_tate(true)
}

/// Free graded-commutative on `e` (weight 1) and `f` (weight 2), both degree 1.
pub fn exterior_pair() -> AugmentedDGA {
    AugmentedDGA::free(
        "Lambda(e,f)",
        vec![Generator::new("e", 1, 1), Generator::new("f", 1, 2)],
        vec![Default::default(), Default::default()],
        vec![Rat::zero(), Rat::zero()],
    )
    .expect("Λ(e,f)")
}

/// The truncated polynomial algebra `k[x]/(x^n)` with `|x| = 0`, as structure constants.
pub fn truncated_polynomial(n: usize) -> AugmentedDGA {
    assert!(n >= 1);
    let mut b = StructBuilder::new(format!("k[x]/(x^{n})"));
    b.unit("1");
    for k in 1..n {
        let name = if k == 1 { "x".to_string() } else { format!("x{k}") };
        b.element(&name, 0, 0, Rat::zero());
    }
    let name = |k: usize| {
        if k == 0 {
            "1".to_string()
        } else if k == 1 {
            "x".to_string()
        } else {
            format!("x{k}")
        }
    };
    for i in 1..n {
        for j in 1..n {
            if i + j < n {
                b.product(&name(i), &name(j), vec![(name(i + j), Rat::one())]);
            }
        }
    }
    b.build().expect("truncated polynomial")
}

/// The dual numbers `k[x]/(x²)`.
pub fn dual_numbers() -> AugmentedDGA {
    truncated_polynomial(2)
}

/// A three-dimensional algebra with nonzero differential: basis `1, a, b`,
/// `|a| = -1`, `|b| = 0`, `da = b`, all products of `a, b` zero. Its
/// augmentation ideal is acyclic.
pub fn acyclic_ideal_algebra() -> AugmentedDGA {
    let mut b = StructBuilder::new("acyclic");
    b.unit("1");
    b.element("a", -1, 0, Rat::zero());
    b.element("b", 0, 0, Rat::zero());
    b.differential("a", vec![("b".to_string(), Rat::one())]);
    b.build().expect("acyclic ideal algebra")
}

/// Multiplication table of the cyclic group of order `n`.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Multiplication table of the symmetric group on `n` letters. Elements are
/// permutations in lexicographic order, so `0` is the identity, and
/// `table[a][b]` is the composite `a ∘ b`.
pub fn symmetric_group_table(n: usize) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..n).filter(|x| !p.contains(x)).map(|x| [p.as_slice(), &[x]].concat()).collect::<Vec<_>>())
            .collect();
    }
    perms.sort();
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
    perms.iter().map(|a| perms.iter().map(|b| index(&b.iter().map(|&i| a[i]).collect::<Vec<_>>())).collect()).collect()
}
