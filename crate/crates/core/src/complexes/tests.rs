use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures::random_complex;

fn two_term(c: i64) -> Complex {
    Complex::from_parts(0, vec![vec![Label::name("a")], vec![Label::name("b")]], vec![SparseMatrix::from_ints(&[&[c]])])
}

fn table_of(c: &Complex) -> BTreeMap<i64, usize> {
    cohomology_table(c).into_iter().filter(|(_, d)| *d > 0).collect()
}

fn nonzero(t: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    t.iter().filter(|(_, d)| **d > 0).map(|(k, v)| (*k, *v)).collect()
}

#[test]
fn check_examples() {
    assert!(check_complex(&Complex::zero()).is_valid());
    assert!(check_complex(&two_term(1)).is_valid());
    let bad = Complex::from_parts(
        0,
        vec![vec![Label::name("a")], vec![Label::name("b")], vec![Label::name("c")]],
        vec![SparseMatrix::from_ints(&[&[1]]), SparseMatrix::from_ints(&[&[1]])],
    );
    let report = check_complex(&bad);
    assert_eq!(report.flagged_degrees(), vec![0]);
    let misshapen = Complex::from_parts(0, vec![vec![Label::name("a")], vec![]], vec![SparseMatrix::from_ints(&[&[1]])]);
    assert!(matches!(check_complex(&misshapen).violations[0], (0, ComplexViolation::Shape { .. })));
}

#[test]
fn cohomology_examples() {
    let exact = two_term(1);
    assert_eq!(cohomology(&exact, 0).unwrap().dim(), 0);
    assert_eq!(cohomology(&exact, 1).unwrap().dim(), 0);
    let split = two_term(0);
    assert_eq!(cohomology(&split, 0).unwrap().dim(), 1);
    assert_eq!(cohomology(&split, 1).unwrap().dim(), 1);
    assert_eq!(cohomology_dim(&split, 1).unwrap(), 1);
}

#[test]
fn open_window_is_enforced() {
    let c = two_term(0).with_open_ends(true, true);
    assert!(matches!(cohomology(&c, 0), Err(ComplexError::WindowViolation { .. })));
    assert!(cohomology_table(&c).is_empty());
    let c = Complex::from_parts(
        0,
        vec![vec![Label::name("a")], vec![Label::name("b")], vec![Label::name("c")]],
        vec![SparseMatrix::zero(1, 1), SparseMatrix::zero(1, 1)],
    )
    .with_open_ends(true, true);
    assert_eq!(cohomology_dim(&c, 1).unwrap(), 1);
}

#[test]
fn representatives_are_cycles_and_classes_are_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (c, expected) = random_complex(&mut rng, -2, 2, 2);
        for n in -2..=2 {
            let h = cohomology(&c, n).unwrap();
            assert_eq!(h.dim(), expected[&n]);
            for (i, z) in h.representatives().iter().enumerate() {
                assert!(c.differential(n).mul_vec(z).is_zero());
                let coords = h.class_of(z);
                for (j, x) in coords.iter().enumerate() {
                    assert_eq!(*x, if i == j { Rat::one() } else { Rat::zero() });
                }
            }
            for b in c.differential(n - 1).columns() {
                assert!(h.class_of(b).iter().all(Rat::is_zero));
            }
        }
    }
}

#[test]
fn shift_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (c, _) = random_complex(&mut rng, -1, 2, 2);
    assert_eq!(shift(&c, 0), c);
    assert_eq!(shift(&shift(&c, 2), 3), shift(&c, 5));
    assert_eq!(shift(&shift(&c, -1), 1), c);
    assert!(check_complex(&shift(&c, 3)).is_valid());
}

#[test]
fn tensor_with_unit_is_identity_up_to_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (c, _) = random_complex(&mut rng, -1, 1, 2);
    let t = tensor(&Complex::unit(), &c).unwrap();
    assert_eq!(t.window(), c.window());
    for n in -1..=1 {
        assert_eq!(t.dim(n), c.dim(n));
    }
    for n in -1..1 {
        assert_eq!(t.differential(n), c.differential(n));
    }
}

#[test]
fn braiding_is_a_chain_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let (a, _) = random_complex(&mut rng, -1, 1, 2);
        let (b, _) = random_complex(&mut rng, 0, 2, 2);
        let br = braiding(&a, &b).unwrap();
        assert!(is_quasi_iso(&br).unwrap());
    }
}

#[test]
fn truncation_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (c, expected) = random_complex(&mut rng, -3, 0, 2);
    // already concentrated in degrees ≤ 0
    assert_eq!(table_of(&truncate_leq(&c, 0).unwrap()), nonzero(&expected));
    for n in -3..=0 {
        let heart = truncate_geq(&truncate_leq(&c, n).unwrap(), n).unwrap();
        let t = table_of(&heart);
        let want: BTreeMap<i64, usize> = [(n, expected[&n])].into_iter().filter(|(_, d)| *d > 0).collect();
        assert_eq!(t, want);
    }
}

#[test]
fn truncation_inclusion_is_quasi_iso_exactly_when_nothing_is_lost() {
    // τ≤n c → c is the inclusion Z^n ⊂ C^n in degree n.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let (c, expected) = random_complex(&mut rng, 0, 2, 2);
        let n = 1;
        let t = truncate_leq(&c, n).unwrap();
        let cycles = Subspace::span(c.dim(n), kernel_basis(&c.differential(n)));
        let mut comps = BTreeMap::new();
        comps.insert(0, SparseMatrix::identity(c.dim(0)));
        comps.insert(1, SparseMatrix::from_columns(c.dim(1), cycles.basis().to_vec()));
        let inc = ChainMap::new(t, c.clone(), comps).unwrap();
        assert_eq!(is_quasi_iso(&inc).unwrap(), expected[&2] == 0);
    }
}

#[test]
fn cone_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (a, ha) = random_complex(&mut rng, -1, 1, 2);
    let (b, hb) = random_complex(&mut rng, 0, 2, 2);
    assert!(table_of(&cone(&ChainMap::identity(&a)).unwrap()).is_empty());
    let z = cone(&ChainMap::zero(&a, &b)).unwrap();
    let t = cohomology_table(&z);
    for (n, d) in t {
        let want = ha.get(&(n + 1)).copied().unwrap_or(0) + hb.get(&n).copied().unwrap_or(0);
        assert_eq!(d, want, "degree {n}");
    }
    assert!(is_quasi_iso(&ChainMap::identity(&a)).unwrap());
    if ha.values().any(|&d| d > 0) {
        assert!(!is_quasi_iso(&ChainMap::zero(&a, &a)).unwrap());
    }
}

#[test]
fn invalid_chain_map_is_rejected() {
    let c = two_term(1);
    let mut comps = BTreeMap::new();
    comps.insert(0, SparseMatrix::identity(1));
    assert!(matches!(ChainMap::new(c.clone(), c, comps), Err(ComplexError::InvalidChainMap(_))));
}

/// `λ·id + (d h + h d)` for a random degree `-1` map `h`.
fn homotopic_to_scalar(rng: &mut ChaCha8Rng, c: &Complex, lambda: i64) -> ChainMap {
    let (lo, hi) = c.window();
    let h: BTreeMap<i64, SparseMatrix> = (lo..=hi)
        .map(|n| {
            let rows = c.dim(n - 1);
            let cols = c.dim(n);
            let trip = (0..rows)
                .flat_map(|i| (0..cols).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, Rat::from_int(rng.gen_range(-2..=2))))
                .collect::<Vec<_>>();
            (n, SparseMatrix::from_triplets(rows, cols, trip))
        })
        .collect();
    let get = |n: i64| h.get(&n).cloned().unwrap_or_else(|| SparseMatrix::zero(c.dim(n - 1), c.dim(n)));
    let comps = (lo..=hi)
        .map(|n| {
            let dh = c.differential(n - 1).compose(&get(n));
            let hd = get(n + 1).compose(&c.differential(n));
            (n, SparseMatrix::identity(c.dim(n)).scale(&Rat::from_int(lambda)).add(&dh).add(&hd))
        })
        .collect();
    ChainMap::new(c.clone(), c.clone(), comps).unwrap()
}

#[test]
fn long_exact_sequence_rank_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for lambda in [0, 1, 3] {
        let (c, hc) = random_complex(&mut rng, -1, 1, 2);
        let f = homotopic_to_scalar(&mut rng, &c, lambda);
        let t = cohomology_table(&cone(&f).unwrap());
        for (n, d) in t {
            let want = if lambda == 0 { hc.get(&(n + 1)).copied().unwrap_or(0) + hc.get(&n).copied().unwrap_or(0) } else { 0 };
            assert_eq!(d, want);
        }
        assert_eq!(is_quasi_iso(&f).unwrap(), lambda != 0 || hc.values().all(|&d| d == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dim_splits_into_kernel_and_rank(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, expected) = random_complex(&mut rng, -2, 2, 3);
        prop_assert!(check_complex(&c).is_valid());
        for n in -2..=2 {
            let k = kernel_basis(&c.differential(n)).len();
            prop_assert_eq!(c.dim(n), k + rank(&c.differential(n)));
        }
        prop_assert_eq!(cohomology_table(&c), expected);
    }

    #[test]
    fn shift_translates_cohomology(seed in any::<u64>(), m in -3i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, expected) = random_complex(&mut rng, -1, 2, 2);
        let s = shift(&c, m);
        for (n, d) in cohomology_table(&s) {
            prop_assert_eq!(d, expected[&(n + m)]);
        }
    }

    #[test]
    fn kunneth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, ha) = random_complex(&mut rng, -1, 1, 2);
        let (b, hb) = random_complex(&mut rng, -1, 2, 2);
        let t = tensor(&a, &b).unwrap();
        prop_assert!(check_complex(&t).is_valid());
        for (n, d) in cohomology_table(&t) {
            let want: usize = ha.iter().map(|(p, x)| x * hb.get(&(n - p)).copied().unwrap_or(0)).sum();
            prop_assert_eq!(d, want);
        }
    }

    #[test]
    fn truncations_keep_the_right_window(seed in any::<u64>(), m in -2i64..=2, len in 0i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, expected) = random_complex(&mut rng, -2, 2, 2);
        let n = (m + len).min(2);
        let t = truncate_geq(&truncate_leq(&c, n).unwrap(), m).unwrap();
        prop_assert!(check_complex(&t).is_valid());
        let got = table_of(&t);
        let want: BTreeMap<i64, usize> = expected.iter().filter(|(k, d)| **k >= m && **k <= n && **d > 0).map(|(k, d)| (*k, *d)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn cone_euler_characteristic(seed in any::<u64>(), lambda in 0i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = random_complex(&mut rng, -1, 1, 2);
        let f = homotopic_to_scalar(&mut rng, &c, lambda);
        let k = cone(&f).unwrap();
        prop_assert_eq!(k.euler_characteristic(), c.euler_characteristic() - c.euler_characteristic());
        let (b, _) = random_complex(&mut rng, 0, 2, 2);
        let z = cone(&ChainMap::zero(&c, &b)).unwrap();
        prop_assert_eq!(z.euler_characteristic(), b.euler_characteristic() - c.euler_characteristic());
    }
}
