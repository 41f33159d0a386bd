use fwforge_core::fseries::{nc_binomial_power, CentralSeries, ScalarFn};
use fwforge_core::ncalg::{
    int, parse_expr, rat, AbstractExpr, BracketExpr, Budget, Generator, Monomial, Parity, Word,
};
use num::BigRational;
use proptest::prelude::*;

fn letter(odd: bool) -> Generator {
    if odd {
        Generator::O
    } else {
        Generator::E
    }
}

fn monomial() -> impl Strategy<Value = (Monomial, BigRational)> {
    (
        any::<bool>(),
        prop::collection::vec(any::<bool>(), 0..4),
        -2i32..3,
        -6i64..7,
        1i64..5,
    )
        .prop_map(|(beta, letters, m_exp, n, d)| {
            let w = Word::from_letters(letters.into_iter().map(letter));
            (Monomial::new(beta, w, m_exp), rat(n, d))
        })
}

fn expr() -> impl Strategy<Value = AbstractExpr> {
    prop::collection::vec(monomial(), 0..5).prop_map(AbstractExpr::from_terms)
}

fn atom() -> impl Strategy<Value = BracketExpr> {
    prop_oneof![
        Just(BracketExpr::e()),
        Just(BracketExpr::o()),
        Just(BracketExpr::Beta),
        (-2i32..3).prop_map(BracketExpr::MassPower),
        (-3i64..4, 1i64..4).prop_map(|(n, d)| BracketExpr::scalar(rat(n, d))),
    ]
}

/// Trees without sums: every node has a definite β-parity.
fn unmixed_tree() -> impl Strategy<Value = BracketExpr> {
    atom().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(BracketExpr::product),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BracketExpr::comm(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| BracketExpr::acomm(a, b)),
        ]
    })
}

fn tree() -> impl Strategy<Value = BracketExpr> {
    atom().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(BracketExpr::Sum),
            prop::collection::vec(inner.clone(), 1..3).prop_map(BracketExpr::product),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BracketExpr::comm(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| BracketExpr::acomm(a, b)),
        ]
    })
}

const WIDE: Budget = Budget::UNBOUNDED;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn commutator_is_difference_of_products(a in expr(), b in expr()) {
        let lhs = a.commutator(&b, &WIDE);
        let rhs = &a.mul_budget(&b, &WIDE) - &b.mul_budget(&a, &WIDE);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn anticommutator_is_sum_of_products(a in expr(), b in expr()) {
        let lhs = a.anticommutator(&b, &WIDE);
        let rhs = &a.mul_budget(&b, &WIDE) + &b.mul_budget(&a, &WIDE);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_associative(a in expr(), b in expr(), c in expr()) {
        let l = a.mul_budget(&b, &WIDE).mul_budget(&c, &WIDE);
        let r = a.mul_budget(&b.mul_budget(&c, &WIDE), &WIDE);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn product_distributes(a in expr(), b in expr(), c in expr()) {
        let l = a.mul_budget(&(&b + &c), &WIDE);
        let r = &a.mul_budget(&b, &WIDE) + &a.mul_budget(&c, &WIDE);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn adjoint_is_involutive_antihomomorphism(a in expr(), b in expr()) {
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        let l = a.mul_budget(&b, &WIDE).adjoint();
        let r = b.adjoint().mul_budget(&a.adjoint(), &WIDE);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn truncation_is_an_ideal(a in expr(), b in expr(), len in 0usize..6, ec in 0usize..3) {
        let budget = Budget::new(len, ec);
        let l = a.mul_budget(&b, &budget);
        let r = a.mul_budget(&b, &WIDE).truncate(&budget);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn sum_construction_order_is_irrelevant(x in tree(), y in tree(), z in tree()) {
        let b = Budget::new(8, 4);
        let flat = BracketExpr::Sum(vec![x.clone(), y.clone(), z.clone()]).expand(&b).unwrap();
        let rev = BracketExpr::Sum(vec![z.clone(), y.clone(), x.clone()]).expand(&b).unwrap();
        let nested = BracketExpr::Sum(vec![BracketExpr::Sum(vec![x, y]), z]).expand(&b).unwrap();
        prop_assert_eq!(&flat, &rev);
        prop_assert_eq!(flat.terms(), nested.terms());
    }

    #[test]
    fn product_association_is_irrelevant(x in tree(), y in tree(), z in tree()) {
        let b = Budget::new(8, 4);
        let left = BracketExpr::product(vec![BracketExpr::product(vec![x.clone(), y.clone()]), z.clone()]);
        let right = BracketExpr::product(vec![x.clone(), BracketExpr::product(vec![y.clone(), z.clone()])]);
        let flat = BracketExpr::product(vec![x, y, z]);
        let l = left.expand(&b).unwrap();
        prop_assert_eq!(&l, &right.expand(&b).unwrap());
        prop_assert_eq!(l.terms(), flat.expand(&b).unwrap().terms());
    }

    #[test]
    fn parity_is_multiplicative(s in unmixed_tree(), t in unmixed_tree()) {
        let b = Budget::new(10, 5);
        let ps = s.parity_and_order().parity;
        let pt = t.parity_and_order().parity;
        prop_assert_ne!(ps, Parity::Mixed);
        let prod = BracketExpr::product(vec![s, t]);
        let p = prod.parity_and_order().parity;
        let expect = if ps == pt { Parity::Even } else { Parity::Odd };
        prop_assert_eq!(p, expect);
        let x = prod.expand(&b).unwrap();
        let odd = p == Parity::Odd;
        prop_assert!(x.iter().all(|(m, _)| m.word.is_odd() == odd));
    }

    #[test]
    fn canonical_text_round_trips(a in expr()) {
        let text = a.format();
        let back = parse_expr(&text).unwrap().expand(&WIDE).unwrap();
        prop_assert_eq!(back, a);
    }
}

/// Homogeneous `Σ c_i ε^{a_i} m^{d − a_i}` with positive weights.
fn homogeneous_fn() -> impl Strategy<Value = ScalarFn> {
    (0i32..3, prop::collection::vec((-2i32..3, 1i64..6, 1i64..4), 1..4)).prop_map(|(d, parts)| {
        parts
            .into_iter()
            .map(|(a, n, q)| {
                ScalarFn::Const(rat(n, q))
                    .mul(ScalarFn::Eps.pow(a))
                    .mul(ScalarFn::Mass.pow(d - a))
            })
            .reduce(ScalarFn::add)
            .expect("at least one part")
    })
}

fn nc_small() -> impl Strategy<Value = AbstractExpr> {
    prop::collection::vec(
        (any::<bool>(), prop::collection::vec(any::<bool>(), 1..4), -4i64..5, 1i64..4),
        1..4,
    )
    .prop_map(|ts| {
        AbstractExpr::from_terms(ts.into_iter().map(|(beta, letters, n, d)| {
            let len = letters.len() as i32;
            let w = Word::from_letters(letters.into_iter().map(letter));
            (Monomial::new(beta, w, -len), rat(n, d))
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn central_product_matches_product_of_series(f in homogeneous_fn(), g in homogeneous_fn(), k in 1usize..6) {
        let l = f.expand(k).unwrap().mul(&g.expand(k).unwrap());
        let r = f.clone().mul(g).expand(k).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn central_inverse(f in homogeneous_fn(), k in 1usize..6) {
        let inv = f.clone().inv().expand(k).unwrap();
        let one = CentralSeries::constant(int(1), k);
        prop_assert_eq!(inv.mul(&f.expand(k).unwrap()), one);
    }

    #[test]
    fn central_square_root(f in homogeneous_fn(), k in 1usize..6) {
        let sq = f.clone().mul(f);
        let root = sq.expand(k).unwrap().sqrt().unwrap();
        prop_assert_eq!(root.mul(&root), sq.expand(k).unwrap());
    }

    #[test]
    fn noncommutative_square_root(x in nc_small(), len in 1usize..6, ec in 0usize..3) {
        let b = Budget::new(len, ec);
        let half = nc_binomial_power(&x, &rat(1, 2), &b).unwrap();
        let one_plus_x = (&AbstractExpr::one() + &x).truncate(&b);
        prop_assert_eq!(half.mul_budget(&half, &b), one_plus_x);
        let inv = nc_binomial_power(&x, &rat(-1, 2), &b).unwrap();
        prop_assert_eq!(inv.mul_budget(&half, &b), AbstractExpr::one());
    }

    #[test]
    fn binomial_power_preserves_homogeneity(x in nc_small(), q in -3i64..4, len in 1usize..7) {
        let b = Budget::new(len, 3);
        let y = nc_binomial_power(&x, &rat(q, 2), &b).unwrap();
        prop_assert!(y.iter().all(|(m, _)| m.degree() == 0));
    }
}

#[test]
fn grading_matches_keep_and_drop_list() {
    let ledger: [(&str, u32); 13] = [
        ("comm(O, comm(O,E))", 1),
        ("comm(pow(O,2), comm(O,E))", 2),
        ("comm(pow(O,2), comm(pow(O,2),E))", 2),
        ("comm(comm(O,E),E)", 2),
        ("pow(comm(O,E),2)", 2),
        ("pow(comm(pow(O,2),E),2)", 2),
        ("acomm(pow(O,2), pow(comm(O,E),2))", 2),
        ("acomm(pow(O,2), comm(comm(pow(O,2),E),E))", 2),
        ("comm(O, comm(O, comm(comm(pow(O,2),E),E)))", 3),
        ("comm(comm(O, comm(O, comm(pow(O,2),E))), E)", 3),
        ("comm(pow(O,2), comm(O, comm(comm(O,E),E)))", 3),
        ("comm(O, comm(comm(comm(O,E),E),E))", 3),
        ("comm(pow(O,2), comm(pow(O,2), comm(O, comm(O,E))))", 3),
    ];
    for (text, order) in ledger {
        let g = parse_expr(text).unwrap().parity_and_order();
        assert_eq!(g.order, Some(order), "{text}");
    }
}

#[test]
fn second_order_bracket_rewrite() {
    let b = Budget::new(6, 3);
    let x = |s: &str| parse_expr(s).unwrap().expand(&b).unwrap();
    let lhs = x("beta*acomm(O, comm(comm(O,E),E))");
    let rhs = &x("beta*comm(comm(pow(O,2),E),E)") - &x("2*beta*pow(comm(O,E),2)");
    assert_eq!(lhs, rhs);
}
