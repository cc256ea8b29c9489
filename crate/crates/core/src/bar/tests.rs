use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dga::{Generator, Poly, StructBuilder};
use crate::fixtures::*;

fn rows(v: &[(i64, i64, usize)]) -> Vec<TableRow> {
    v.iter().map(|&(weight, degree, dim)| TableRow { weight, degree, dim }).collect()
}

/// `k × k`: basis `1, y` with `y² = y`, augmented by `t(y) = 1`.
fn idempotent() -> AugmentedDGA {
    let mut b = StructBuilder::new("k x k");
    b.unit("1");
    b.element("y", 0, 0, Rat::one());
    b.product("y", "y", vec![("y".to_string(), Rat::one())]);
    b.build().unwrap()
}

/// `k[x]` augmented at `x = 2`.
fn shifted_line() -> AugmentedDGA {
    AugmentedDGA::free("k[x]", vec![Generator::new("x", 0, 0)], vec![Poly::zero()], vec![Rat::from_int(2)]).unwrap()
}

/// Free on `x, y, z` of degree 1 in weights 1, 1, 2 with `dz = xy`.
fn heisenberg() -> AugmentedDGA {
    let xy = Poly::generator(0).mul(&Poly::generator(1), &[true, true, true]);
    AugmentedDGA::free(
        "heis",
        vec![Generator::new("x", 1, 1), Generator::new("y", 1, 1), Generator::new("z", 1, 2)],
        vec![Poly::zero(), Poly::zero(), xy],
        vec![Rat::zero(), Rat::zero(), Rat::zero()],
    )
    .unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, t: &LetterTable, max_len: usize, budget: usize) -> Vec<u32> {
    let len = rng.gen_range(0..=max_len);
    let mut w = Vec::new();
    let mut g = 0;
    for _ in 0..len {
        let l = rng.gen_range(0..t.len());
        let lg = if t.bound().is_some() { t.grade(l) } else { 0 };
        if g + lg <= budget {
            g += lg;
            w.push(l as u32);
        }
    }
    w
}

fn tables() -> Vec<LetterTable> {
    let mk = |a: AugmentedDGA, b: BarBound| letter_table(&a, b).unwrap();
    vec![
        mk(exterior_pair(), BarBound::Weight(6)),
        mk(heisenberg(), BarBound::Weight(6)),
        mk(polynomial(0), BarBound::WordLength(6)),
        mk(shifted_line(), BarBound::WordLength(6)),
        mk(dual_numbers(), BarBound::WordLength(6)),
        mk(truncated_polynomial(4), BarBound::WordLength(6)),
        mk(acyclic_ideal_algebra(), BarBound::WordLength(6)),
        mk(idempotent(), BarBound::WordLength(6)),
    ]
}

fn w(t: &LetterTable, letters: Vec<u32>) -> BarWord {
    BarWord::new(t, letters).unwrap()
}

#[test]
fn trivial_algebra_gives_trivial_bar() {
    let b = bar_complex(&unit_algebra(), None, BarBound::Weight(3)).unwrap();
    assert_eq!(b.table(), rows(&[(0, 0, 1)]));
    let b = bar_complex(&unit_algebra(), None, BarBound::WordLength(4)).unwrap();
    assert_eq!(b.table(), rows(&[(0, 0, 1)]));
}

#[test]
fn polynomial_tor_is_exterior() {
    // Tor over k[x]: the resolution 0 → A → A → k gives ℚ in degrees 0 and -1.
    let b = bar_complex(&polynomial(0), None, BarBound::WordLength(5)).unwrap();
    assert_eq!(b.table(), rows(&[(0, -1, 1), (0, 0, 1)]));
    assert_eq!(b.stability(), Stability::Exact);
    let b = bar_complex(&polynomial(1), None, BarBound::Weight(5)).unwrap();
    assert_eq!(b.table(), rows(&[(0, 0, 1), (1, -1, 1)]));
    let b = bar_complex(&shifted_line(), None, BarBound::WordLength(4)).unwrap();
    assert_eq!(b.table(), rows(&[(0, -1, 1), (0, 0, 1)]));
}

#[test]
fn dual_numbers_tor_is_periodic() {
    let b = bar_complex(&dual_numbers(), None, BarBound::WordLength(5)).unwrap();
    assert_eq!(b.table(), rows(&[(0, -4, 1), (0, -3, 1), (0, -2, 1), (0, -1, 1), (0, 0, 1)]));
    assert!(b.unstable_degrees().contains(&-5));
    assert!(!b.stability().is_stable(-5));
    assert_eq!(b.wordlength_cap(), Some(5));
}

#[test]
fn truncated_polynomial_tor() {
    // Tor over k[x]/(x^n) is ℚ in every degree ≤ 0 (periodic resolution of period 2).
    let b = bar_complex(&truncated_polynomial(4), None, BarBound::WordLength(6)).unwrap();
    let t = b.table();
    assert!(!t.is_empty());
    for r in &t {
        assert_eq!(r.dim, 1, "{r:?}");
    }
    assert_eq!(t.iter().map(|r| r.degree).collect::<Vec<_>>(), (-(t.len() as i64) + 1..=0).collect::<Vec<_>>());
}

#[test]
fn exterior_tor_is_polynomial() {
    let b = bar_complex(&exterior(1), None, BarBound::Weight(4)).unwrap();
    assert_eq!(b.table(), rows(&[(0, 0, 1), (1, 0, 1), (2, 0, 1), (3, 0, 1), (4, 0, 1)]));
}

fn partitions_into_one_two(w: i64) -> usize {
    (0..=w / 2).count()
}

#[test]
fn two_generator_weights_match_partition_count() {
    let b = bar_complex(&exterior_pair(), None, BarBound::Weight(6)).unwrap();
    let t = b.table();
    for r in &t {
        assert_eq!(r.degree, 0, "{r:?}");
    }
    let dims: Vec<usize> = t.iter().map(|r| r.dim).collect();
    let expected: Vec<usize> = (0..=6).map(partitions_into_one_two).collect();
    assert_eq!(dims, expected);
    assert_eq!(&dims[..5], &[1, 1, 2, 2, 3]);
}

#[test]
fn acyclic_ideal_has_trivial_bar() {
    let b = bar_complex(&acyclic_ideal_algebra(), None, BarBound::WordLength(4)).unwrap();
    assert!(b.stability().is_stable(0));
    for r in b.table() {
        assert_eq!((r.weight, r.degree, r.dim), (0, 0, 1));
    }
}

#[test]
fn differential_squares_to_zero_on_pieces() {
    let algebras: Vec<(AugmentedDGA, BarBound)> = vec![
        (exterior_pair(), BarBound::Weight(6)),
        (heisenberg(), BarBound::Weight(5)),
        (polynomial(0), BarBound::WordLength(5)),
        (truncated_polynomial(3), BarBound::WordLength(5)),
        (acyclic_ideal_algebra(), BarBound::WordLength(4)),
        (idempotent(), BarBound::WordLength(4)),
    ];
    for (a, bound) in algebras {
        let b = bar_complex(&a, None, bound).unwrap();
        for p in b.pieces() {
            assert!(crate::complexes::check_complex(p.complex()).is_valid(), "{} piece ({}, {})", a.name(), p.weight(), p.grade());
        }
    }
}

#[test]
fn differential_squares_to_zero_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX);
        for _ in 0..60 {
            let u = w(&t, random_word(&mut rng, &t, 4, budget));
            let du = differential(&t, &u).unwrap();
            assert!(differential_of(&t, &du).unwrap().is_zero(), "d² ≠ 0 on {}", u.display(&t));
        }
    }
}

#[test]
fn shuffle_examples() {
    let t = letter_table(&exterior(1), BarBound::Weight(3)).unwrap();
    let e = w(&t, vec![0]);
    let p = shuffle_product(&t, &e, &e).unwrap();
    assert_eq!(p.coefficient(&w(&t, vec![0, 0])), Rat::from_int(2));
    assert_eq!(p.len(), 1);
    let t = letter_table(&polynomial(0), BarBound::WordLength(3)).unwrap();
    let x = w(&t, vec![0]);
    assert!(shuffle_product(&t, &x, &x).unwrap().is_zero());
    let empty = BarWord::empty(&t);
    assert_eq!(shuffle_product(&t, &empty, &x).unwrap(), BarElement::word(x.clone()));
}

#[test]
fn coproduct_and_antipode_examples() {
    let t = letter_table(&dual_numbers(), BarBound::WordLength(3)).unwrap();
    let empty = BarWord::empty(&t);
    let a = w(&t, vec![0]);
    let d = deconcatenation(&t, &empty).unwrap();
    assert_eq!(d.terms().collect::<Vec<_>>(), vec![(&(empty.clone(), empty.clone()), &Rat::one())]);
    let d = deconcatenation(&t, &a).unwrap();
    assert_eq!(d.terms().count(), 2);
    assert_eq!(antipode(&t, &empty).unwrap(), BarElement::word(empty.clone()));
    assert_eq!(antipode(&t, &a).unwrap(), BarElement::word(a.clone()).scale(&Rat::from_int(-1)));
}

#[test]
fn shuffle_is_graded_commutative_and_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX);
        for _ in 0..40 {
            let u = w(&t, random_word(&mut rng, &t, 2, budget / 2));
            let v = w(&t, random_word(&mut rng, &t, 2, budget / 2));
            let uv = shuffle_product(&t, &u, &v).unwrap();
            let vu = shuffle_product(&t, &v, &u).unwrap();
            assert_eq!(uv, vu.scale(&Rat::sign(u.degree() * v.degree())));
            let lhs = differential_of(&t, &uv).unwrap();
            let du = differential(&t, &u).unwrap();
            let dv = differential(&t, &v).unwrap();
            let rhs = shuffle_elements(&t, &du, &BarElement::word(v.clone()))
                .unwrap()
                .add(&shuffle_elements(&t, &BarElement::word(u.clone()), &dv).unwrap().scale(&Rat::sign(u.degree())));
            assert_eq!(lhs, rhs, "Leibniz fails on {} · {}", u.display(&t), v.display(&t));
        }
    }
}

#[test]
fn shuffle_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX) / 3;
        for _ in 0..20 {
            let [u, v, x] = [0; 3].map(|_| BarElement::word(w(&t, random_word(&mut rng, &t, 2, budget))));
            let l = shuffle_elements(&t, &shuffle_elements(&t, &u, &v).unwrap(), &x).unwrap();
            let r = shuffle_elements(&t, &u, &shuffle_elements(&t, &v, &x).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }
}

#[test]
fn bialgebra_and_coassociativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX);
        for _ in 0..30 {
            let u = w(&t, random_word(&mut rng, &t, 2, budget / 2));
            let v = w(&t, random_word(&mut rng, &t, 2, budget / 2));
            let lhs = coproduct_of(&t, &shuffle_product(&t, &u, &v).unwrap()).unwrap();
            let rhs = tensor_product(&t, &deconcatenation(&t, &u).unwrap(), &deconcatenation(&t, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "bialgebra fails on {} · {}", u.display(&t), v.display(&t));

            let x = w(&t, random_word(&mut rng, &t, 4, budget));
            let dx = deconcatenation(&t, &x).unwrap();
            let l = apply_left(&dx, |a| deconcatenation(&t, a)).unwrap();
            let r = apply_right(&dx, |a| deconcatenation(&t, a)).unwrap();
            assert_eq!(l, r);
        }
    }
}

#[test]
fn coproduct_and_antipode_are_chain_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX);
        for _ in 0..30 {
            let x = w(&t, random_word(&mut rng, &t, 4, budget));
            let lhs = coproduct_of(&t, &differential(&t, &x).unwrap()).unwrap();
            let rhs = tensor_differential(&t, &deconcatenation(&t, &x).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "Δ is not a chain map on {}", x.display(&t));
            let ls = antipode_of(&t, &differential(&t, &x).unwrap()).unwrap();
            let rs = differential_of(&t, &antipode(&t, &x).unwrap()).unwrap();
            assert_eq!(ls, rs, "S is not a chain map on {}", x.display(&t));
        }
    }
}

#[test]
fn antipode_satisfies_convolution_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX);
        for _ in 0..30 {
            let x = w(&t, random_word(&mut rng, &t, 4, budget));
            let mut left = BarElement::zero();
            let mut right = BarElement::zero();
            for ((a, b), c) in deconcatenation(&t, &x).unwrap().terms() {
                let sa = antipode(&t, a).unwrap();
                left = left.add(&shuffle_elements(&t, &sa, &BarElement::word(b.clone())).unwrap().scale(c));
                let sb = antipode(&t, b).unwrap();
                right = right.add(&shuffle_elements(&t, &BarElement::word(a.clone()), &sb).unwrap().scale(c));
            }
            let expected = if x.is_empty() { BarElement::word(x.clone()) } else { BarElement::zero() };
            assert_eq!(left, expected, "S * id on {}", x.display(&t));
            assert_eq!(right, expected, "id * S on {}", x.display(&t));
        }
    }
}

#[test]
fn operations_preserve_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for t in tables() {
        let budget = t.bound().unwrap_or(usize::MAX);
        for _ in 0..30 {
            let u = w(&t, random_word(&mut rng, &t, 2, budget / 2));
            let v = w(&t, random_word(&mut rng, &t, 2, budget / 2));
            let total = u.weight() + v.weight();
            assert!(shuffle_product(&t, &u, &v).unwrap().terms().all(|(x, _)| x.weight() == total));
            assert!(differential(&t, &u).unwrap().terms().all(|(x, _)| x.weight() == u.weight()));
            assert!(antipode(&t, &u).unwrap().terms().all(|(x, _)| x.weight() == u.weight()));
            assert!(deconcatenation(&t, &u).unwrap().terms().all(|((a, b), _)| a.weight() + b.weight() == u.weight()));
        }
    }
}

#[test]
fn words_from_different_algebras_are_rejected() {
    let t1 = letter_table(&dual_numbers(), BarBound::WordLength(2)).unwrap();
    let t2 = letter_table(&dual_numbers(), BarBound::WordLength(2)).unwrap();
    let a = w(&t1, vec![0]);
    let b = w(&t2, vec![0]);
    assert!(matches!(shuffle_product(&t1, &a, &b), Err(BarError::ForeignWord(_))));
    assert!(matches!(BarWord::new(&t1, vec![7]), Err(BarError::ForeignWord(_))));
}

#[test]
fn refusals() {
    assert!(matches!(bar_complex(&polynomial(0), None, BarBound::Weight(3)), Err(BarError::Dga(_))));
    assert!(matches!(bar_complex(&heisenberg(), None, BarBound::WordLength(3)), Err(BarError::Dga(_))));
    assert!(matches!(bar_complex(&dual_numbers(), Some((1, 0)), BarBound::WordLength(3)), Err(BarError::BadBound(_))));
    assert!(matches!(bar_complex(&polynomial(1), None, BarBound::Weight(-1)), Err(BarError::BadBound(_))));
    let bad = AugmentedDGA::free("bad", vec![Generator::new("x", 1, 1)], vec![Poly::generator(0)], vec![Rat::zero()]).unwrap();
    assert!(matches!(bar_complex(&bad, None, BarBound::Weight(2)), Err(BarError::InvalidAlgebra(_))));
}

#[test]
fn window_restricts_degrees() {
    let full = bar_complex(&dual_numbers(), None, BarBound::WordLength(5)).unwrap();
    let win = bar_complex(&dual_numbers(), Some((-2, 0)), BarBound::WordLength(5)).unwrap();
    let expected: Vec<TableRow> = full.table().into_iter().filter(|r| r.degree >= -2).collect();
    assert_eq!(win.table(), expected);
    assert!(win.size() < full.size());
}

#[test]
fn tables_are_deterministic() {
    let a = bar_complex(&heisenberg(), None, BarBound::Weight(6)).unwrap();
    let b = bar_complex(&heisenberg(), None, BarBound::Weight(6)).unwrap();
    assert_eq!(a.raw_table(), b.raw_table());
    for (p, q) in a.pieces().zip(b.pieces()) {
        assert_eq!(p.complex(), q.complex());
    }
}

#[test]
fn heisenberg_bar_cohomology() {
    let b = bar_complex(&heisenberg(), None, BarBound::Weight(2)).unwrap();
    let t: BTreeMap<(i64, i64), usize> = b.table().into_iter().map(|r| ((r.weight, r.degree), r.dim)).collect();
    assert_eq!(t.get(&(1, 0)), Some(&2));
    // weight 2, degree 0: words [x|x],[x|y],[y|x],[y|y],[z]; d: [x|y] ↦ [xy], [y|x] ↦ -[xy], [z] ↦ -[xy]
    assert_eq!(t.get(&(2, 0)), Some(&4));
    assert_eq!(t.get(&(2, 1)), None);
}

#[test]
fn cech_levels() {
    let a = polynomial(0);
    let bound = BarBound::WordLength(4);
    let l0 = cech_level(&a, 0, None, bound).unwrap();
    assert_eq!(l0.table(), rows(&[(0, 0, 1)]));
    let l1 = cech_level(&a, 1, None, bound).unwrap();
    let b = bar_complex(&a, None, bound).unwrap();
    assert_eq!(l1.raw_table(), b.raw_table());
    let l2 = cech_level(&a, 2, None, bound).unwrap();
    // Künneth: convolve the level-one table with itself within the grade bound
    let raw1 = l1.raw_table();
    let mut conv: BTreeMap<(i64, usize, i64), usize> = BTreeMap::new();
    for (&(w1, g1, n1), &d1) in &raw1 {
        for (&(w2, g2, n2), &d2) in &raw1 {
            if g1 + g2 <= 4 {
                *conv.entry((w1 + w2, g1 + g2, n1 + n2)).or_default() += d1 * d2;
            }
        }
    }
    assert_eq!(l2.raw_table(), conv);
    assert_eq!(l2.table(), rows(&[(0, -2, 1), (0, -1, 2), (0, 0, 1)]));
}

#[test]
fn cech_kunneth_for_dual_numbers() {
    let a = dual_numbers();
    let bound = BarBound::WordLength(4);
    let l1 = cech_level(&a, 1, None, bound).unwrap();
    let l3 = cech_level(&a, 3, None, bound).unwrap();
    let t1: BTreeMap<i64, usize> = l1.table().into_iter().map(|r| (r.degree, r.dim)).collect();
    let mut conv: BTreeMap<i64, usize> = BTreeMap::from([(0, 1)]);
    for _ in 0..3 {
        let mut next = BTreeMap::new();
        for (&p, &dp) in &conv {
            for (&q, &dq) in &t1 {
                *next.entry(p + q).or_default() += dp * dq;
            }
        }
        conv = next;
    }
    let t3: BTreeMap<i64, usize> = l3.table().into_iter().map(|r| (r.degree, r.dim)).collect();
    for (n, d) in &t3 {
        assert_eq!(conv.get(n), Some(d), "degree {n}");
    }
    assert_eq!(t3.keys().copied().collect::<Vec<_>>(), (-3..=0).collect::<Vec<_>>());
}

#[test]
fn oracle_agrees_with_bar() {
    let r = comonadic_oracle(&dual_numbers(), 4, None).unwrap();
    assert!(r.matches(), "{:?}", r.rows);
    assert_eq!(r.rows.iter().map(|r| r.degree).collect::<Vec<_>>(), vec![-3, -2, -1, 0]);
    for a in [unit_algebra_struct(), truncated_polynomial(3), acyclic_ideal_algebra(), idempotent()] {
        let r = comonadic_oracle(&a, 4, None).unwrap();
        assert!(r.matches(), "{}: {:?}", a.name(), r.rows);
        assert!(r.rows.iter().any(|r| r.degree == 0));
    }
    let unit = comonadic_oracle(&unit_algebra_struct(), 4, None).unwrap();
    assert_eq!(unit.rows, vec![OracleRow { weight: 0, degree: 0, moore: 1, normalized: 1, bar: 1 }]);
    for c in unit.moore().values() {
        assert!(crate::complexes::check_complex(c).is_valid());
    }
}

fn unit_algebra_struct() -> AugmentedDGA {
    let mut b = StructBuilder::new("Q");
    b.unit("1");
    b.build().unwrap()
}

#[test]
fn oracle_refuses_free_and_large_inputs() {
    assert!(matches!(comonadic_oracle(&polynomial(0), 3, None), Err(BarError::Unsupported(_))));
    assert!(matches!(comonadic_oracle(&truncated_polynomial(6), 12, None), Err(BarError::TooLarge { .. })));
}

#[test]
fn element_coordinates_round_trip() {
    let b = bar_complex(&exterior_pair(), None, BarBound::Weight(4)).unwrap();
    let p = b.piece(3, 3).unwrap();
    for (i, word) in p.words(0).iter().enumerate() {
        let (n, v) = p.vector(&BarElement::word(word.clone())).unwrap();
        assert_eq!(n, 0);
        assert_eq!(v, SparseVec::unit(i));
        assert_eq!(p.element(0, &v), BarElement::word(word.clone()));
    }
    assert_eq!(b.piece_of(&p.words(0)[0]).map(|q| q.weight()), Some(3));
}
