use super::*;
use crate::bar::{bar_complex, shuffle_product, BarBound, BarElement, BarWord};
use crate::dga::{StructBuilder, StructConst};
use crate::fixtures::*;

/// ℚ as a target algebra.
fn rationals() -> StructConst {
    let mut b = StructBuilder::new("Q");
    b.unit("1");
    b.build().unwrap().as_struct().unwrap().clone()
}

/// ℚ × ℚ with idempotents `p`, `1 - p`.
fn split_pair() -> StructConst {
    let mut b = StructBuilder::new("QxQ");
    b.unit("1");
    b.element("p", 0, 0, Rat::one());
    b.product("p", "p", vec![("p".into(), Rat::one())]);
    b.build().unwrap().as_struct().unwrap().clone()
}

/// ℚ(i) as a ℚ-algebra: not split.
fn gaussian() -> StructConst {
    let mut b = StructBuilder::new("Q(i)");
    b.unit("1");
    b.element("i", 0, 0, Rat::zero());
    b.product("i", "i", vec![("1".into(), Rat::from_int(-1))]);
    b.build().unwrap().as_struct().unwrap().clone()
}

#[test]
fn group_fixtures_validate() {
    for table in [cyclic_group_table(1), cyclic_group_table(2), cyclic_group_table(5), symmetric_group_table(3)] {
        let h = finite_group_hopf(&table).unwrap();
        assert_eq!(h.dim(), table.len());
        let r = hopf_validate(&h);
        assert!(r.passes(), "{:?}", r.violations);
        assert_eq!(r.skipped, 0);
    }
    assert_eq!(symmetric_group_table(3).len(), 6);
}

#[test]
fn cyclic_two_by_hand() {
    let h = finite_group_hopf(&cyclic_group_table(2)).unwrap();
    let one = |i, j| Tensor2::from([((i, j), Rat::one())]);
    let mut d1 = one(0, 1);
    d1.insert((1, 0), Rat::one());
    let mut d0 = one(0, 0);
    d0.insert((1, 1), Rat::one());
    assert_eq!(h.coproduct(0), &d0);
    assert_eq!(h.coproduct(1), &d1);
    // e₁ + e₂ and e₁ - e₂ are group-like
    for s in [1, -1] {
        let g = SparseVec::from_entries(vec![(0, Rat::one()), (1, Rat::from_int(s))]);
        let mut expect = Tensor2::new();
        for (i, a) in g.iter() {
            for (j, b) in g.iter() {
                expect.insert((i, j), a * b);
            }
        }
        assert_eq!(h.comul_vec(&g), expect);
        assert!(h.apply_counit(&g).is_one());
    }
    assert_eq!(h.unit(), &SparseVec::from_entries(vec![(0, Rat::one()), (1, Rat::one())]));
}

#[test]
fn not_a_group() {
    assert!(matches!(finite_group_hopf(&[vec![0, 1], vec![1, 1]]), Err(HopfError::NotAGroup(_))));
    assert!(matches!(finite_group_hopf(&[vec![1, 0], vec![0, 0]]), Err(HopfError::NotAGroup(_))));
    assert!(matches!(finite_group_hopf(&[vec![0, 1]]), Err(HopfError::NotAGroup(_))));
    assert!(matches!(finite_group_hopf(&[]), Err(HopfError::NotAGroup(_))));
}

#[test]
fn points_recover_groups() {
    for table in [cyclic_group_table(1), cyclic_group_table(4), symmetric_group_table(3)] {
        let h = finite_group_hopf(&table).unwrap();
        let g = group_points(&h, &rationals()).unwrap();
        assert_eq!(g.len(), table.len());
        assert_eq!(g.law, table);
        assert_eq!(g.identity, 0);
        for (a, &b) in g.inverse.iter().enumerate() {
            assert_eq!(table[a][b], 0);
        }
    }
}

#[test]
fn points_in_a_split_target() {
    let h = finite_group_hopf(&cyclic_group_table(2)).unwrap();
    let g = group_points(&h, &split_pair()).unwrap();
    assert_eq!(g.len(), 4);
    // (ℤ/2)² as pairs: the law is componentwise
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(g.law[a][b], ((a >> 1) ^ (b >> 1)) << 1 | ((a & 1) ^ (b & 1)));
        }
    }
    for p in &g.points {
        assert_eq!(p.image.ncols(), 2);
        assert_eq!(p.image.mul_vec(h.unit()), SparseVec::unit(0));
    }
    assert!(matches!(group_points(&h, &gaussian()), Err(HopfError::NotSplit(_))));
}

#[test]
fn polynomial_hopf_is_infinite() {
    let h = polynomial_hopf(1, 4);
    let r = hopf_validate(&h);
    assert!(r.passes(), "{:?}", r.violations);
    assert!(r.skipped > 0);
    assert_eq!(group_points(&h, &rationals()), Err(HopfError::InfiniteVariety { dimension: 1 }));
}

#[test]
fn non_coassociative_input_fails() {
    // Δx = x⊗x + 1⊗x
    let h = HopfAlgebra::new(HopfParts {
        name: "broken".into(),
        labels: vec!["1".into(), "x".into()],
        descriptions: Vec::new(),
        weights: vec![0, 0],
        grades: vec![0, 0],
        bound: None,
        mul: vec![vec![Some(SparseVec::unit(0)), Some(SparseVec::unit(1))], vec![Some(SparseVec::unit(1)), Some(SparseVec::unit(1))]],
        comul: vec![vec![(0, 0, Rat::one())], vec![(1, 1, Rat::one()), (0, 1, Rat::one())]],
        counit: vec![Rat::one(), Rat::one()],
        antipode: SparseMatrix::identity(2),
        unit: SparseVec::unit(0),
    })
    .unwrap();
    let r = hopf_validate(&h);
    assert!(r.has(HopfAxiom::Coassociativity));
    assert!(r.violations.iter().any(|v| v.axiom == HopfAxiom::Coassociativity && v.witness == ["x"]));
}

#[test]
fn malformed_parts_are_rejected() {
    let h = polynomial_hopf(1, 2);
    let mut p = HopfParts {
        name: "bad".into(),
        labels: vec!["1".into()],
        descriptions: Vec::new(),
        weights: vec![0],
        grades: vec![0],
        bound: None,
        mul: vec![vec![Some(SparseVec::unit(3))]],
        comul: vec![vec![]],
        counit: vec![Rat::one()],
        antipode: SparseMatrix::identity(1),
        unit: SparseVec::unit(0),
    };
    assert!(matches!(HopfAlgebra::new(p.clone()), Err(HopfError::Shape(_))));
    p.mul = vec![vec![Some(SparseVec::unit(0))]];
    p.antipode = h.antipode().clone();
    assert!(matches!(HopfAlgebra::new(p), Err(HopfError::Shape(_))));
}

/// `1, x, x², …, xⁿ` for the basis element `x = h_k`.
fn powers(h: &HopfAlgebra, k: usize, n: usize) -> Vec<SparseVec> {
    let mut out = vec![h.unit().clone()];
    for i in 1..=n {
        let next = h.mul(&out[i - 1], &SparseVec::unit(k)).unwrap();
        out.push(next);
    }
    out
}

#[test]
fn coarse_unit_is_trivial() {
    let b = bar_complex(&unit_algebra(), None, BarBound::Weight(3)).unwrap();
    let h = coarse_moduli(&b, 3).unwrap();
    assert_eq!(h.dim(), 1);
    assert!(hopf_validate(&h).passes());
    let g = group_points(&h, &rationals()).unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(g.law, vec![vec![0]]);
}

#[test]
fn coarse_exterior_is_polynomial() {
    let a = exterior(1);
    let b = bar_complex(&a, None, BarBound::Weight(3)).unwrap();
    let e = BarWord::new(b.letters(), vec![0]).unwrap();
    let ee = BarWord::new(b.letters(), vec![0, 0]).unwrap();
    let mut two_ee = BarElement::zero();
    two_ee.add_term(ee, Rat::from_int(2));
    assert_eq!(shuffle_product(b.letters(), &e, &e).unwrap(), two_ee);

    let h = coarse_moduli(&b, 3).unwrap();
    assert_eq!(h.dim(), 4);
    assert_eq!((0..4).map(|k| h.weight(k)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    let r = hopf_validate(&h);
    assert!(r.passes(), "{:?}", r.violations);
    let mut cols = powers(&h, 1, 3);
    let p = polynomial_hopf(1, 3);
    assert!(is_hopf_isomorphism(&p, &h, &SparseMatrix::from_columns(4, cols.clone())));
    cols.swap(2, 3);
    assert!(!is_hopf_isomorphism(&p, &h, &SparseMatrix::from_columns(4, cols)));
    // a smaller weight bound truncates the basis
    assert_eq!(coarse_moduli(&b, 1).unwrap().dim(), 2);
}

#[test]
fn coarse_polynomial_loses_negative_classes() {
    let b = bar_complex(&polynomial(0), None, BarBound::WordLength(4)).unwrap();
    let h = coarse_moduli(&b, 0).unwrap();
    assert_eq!(h.dim(), 1);
    assert!(hopf_validate(&h).passes());
    let d = bar_complex(&dual_numbers(), None, BarBound::WordLength(5)).unwrap();
    let h = coarse_moduli(&d, 0).unwrap();
    assert_eq!(h.dim(), 1);
    assert!(hopf_validate(&h).passes());
}

#[test]
fn coarse_two_generators() {
    let b = bar_complex(&exterior_pair(), None, BarBound::Weight(4)).unwrap();
    let h = coarse_moduli(&b, 4).unwrap();
    let r = hopf_validate(&h);
    assert!(r.passes(), "{:?}", r.violations);
    let mut dims = [0usize; 5];
    for k in 0..h.dim() {
        dims[h.weight(k) as usize] += 1;
    }
    assert_eq!(dims, [1, 1, 2, 2, 3]);
    assert!(matches!(group_points(&h, &rationals()), Err(HopfError::InfiniteVariety { dimension: 2 })));
}

#[test]
fn coarse_refuses_unstable_degree_zero() {
    let mut s = StructBuilder::new("exterior");
    s.unit("1");
    s.element("e", 1, 1, Rat::zero());
    let a = s.build().unwrap();
    let b = bar_complex(&a, None, BarBound::WordLength(3)).unwrap();
    assert!(matches!(coarse_moduli(&b, 3), Err(HopfError::Unstable(_))));
    let b = bar_complex(&a, None, BarBound::Weight(3)).unwrap();
    let h = coarse_moduli(&b, 3).unwrap();
    assert!(is_hopf_isomorphism(&polynomial_hopf(1, 3), &h, &SparseMatrix::from_columns(4, powers(&h, 1, 3))));
    let w = bar_complex(&exterior(1), Some((1, 2)), BarBound::Weight(2)).unwrap();
    assert!(matches!(coarse_moduli(&w, 2), Err(HopfError::Unsupported(_))));
}
