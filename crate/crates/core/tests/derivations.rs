use fwforge_core::comparator::{diff_report, BracketBasis, ClassStatus};
use fwforge_core::eriksen::{compare_with_published, EriksenPipeline};
use fwforge_core::ncalg::{parse_expr, rat, AbstractExpr, BracketExpr, Budget, Monomial, Word};
use fwforge_core::report::Status;
use fwforge_core::stepwise::{self, derive_second_step, expand_static, practical_hamiltonian};
use fwforge_core::targets::Target;
use proptest::prelude::*;

fn expand(text: &str, b: &Budget) -> AbstractExpr {
    parse_expr(text).unwrap().expand(b).unwrap()
}

#[test]
fn eriksen_properties_hold_at_several_budgets() {
    for b in [Budget::new(4, 2), Budget::new(6, 2), Budget::new(8, 3)] {
        let p = EriksenPipeline::run(&b).unwrap();
        for c in p.properties() {
            assert_eq!(c.status, Status::Pass, "{b}: {}", c.identity);
        }
    }
}

#[test]
fn published_commutator_form_differs_only_in_beta_m5_class() {
    let b = Budget::new(8, 3);
    let h = EriksenPipeline::run(&b).unwrap().h_fw;
    let checks = compare_with_published(&h, &b).unwrap();
    let inside = &checks[0];
    assert_eq!(inside.status, Status::Fail);
    let classes: Vec<(usize, usize)> = inside.residual_classes.iter().map(|r| (r.e, r.o)).collect();
    assert_eq!(classes, vec![(2, 4)]);
    assert_eq!(checks[2].status, Status::Pass, "re-fitted weights");

    // The mismatch written in brackets.
    let published = Target::Eriksen.bracket().expand(&b).unwrap();
    let delta = expand(
        "m^-5*beta*(-9/256*pow(comm(pow(O,2),E),2) \
         + 9/512*comm(comm(O, comm(O, comm(pow(O,2),E))), E) \
         - 9/512*comm(pow(O,2), comm(O, comm(comm(O,E),E))))",
        &b,
    );
    assert_eq!((&h - &published).class(2, 4), delta);
}

#[test]
fn published_weights_that_match_exactly() {
    let b = Budget::new(8, 3);
    let h = EriksenPipeline::run(&b).unwrap().h_fw;
    let coeff = |beta: bool, w: &str, m: i32| h.coeff(&Monomial::new(beta, Word::parse(w).unwrap(), m));
    // β O⁸: −5/128 m⁻⁷
    assert_eq!(coeff(true, "OOOOOOOO", -7), rat(-5, 128));
    // first anticommutator leading weight −8/128 · 2 on O O E
    assert_eq!(coeff(false, "OOE", -2), rat(-1, 8));
    // 1/16 m⁻³ β{O,[[O,E],E]}: coefficient of β O O E E
    assert_eq!(coeff(true, "OOEE", -3), rat(1, 16));
}

#[test]
fn practical_form_is_a_subset_of_the_iterative_form() {
    let b = Budget::new(8, 3);
    let full = expand_static(&b).unwrap();
    let practical = practical_hamiltonian(&b).unwrap();
    let rest = expand(
        "1/64*acomm(epsfun(k13), comm(pow(O,2), comm(pow(O,2),E))) \
         - 1/16*beta*acomm(epsfun(inv_eps3), pow(comm(O,E),2)) \
         + 1/64*beta*acomm(epsfun(inv_eps5), pow(comm(pow(O,2),E),2))",
        &b,
    );
    assert_eq!(full, &practical + &rest);
    assert_eq!(practical, expand("beta*epsfun(eps) + E - 1/8*acomm(epsfun(inv_eps_epsm), comm(O, comm(O,E)))", &b));
}

#[test]
fn iterative_form_reduces_to_classical_result() {
    let b = Budget::new(8, 3);
    let h = expand_static(&b).unwrap();
    let classical = Target::Classical.bracket().expand(&b).unwrap();
    assert_eq!(h.inverse_mass_truncate(3), classical);
    assert!(h.is_even());
    assert_eq!(h.adjoint(), h);
}

#[test]
fn stepwise_report() {
    let r = stepwise::derive_report(&Budget::new(8, 3)).unwrap();
    assert!(r.passed(), "{}", r.to_text());
    let rest = r.check("iterative H_FW - printed expansion, remaining classes").unwrap();
    let classes: Vec<(usize, usize)> = rest.residual_classes.iter().map(|c| (c.e, c.o)).collect();
    assert_eq!(classes, vec![(2, 4), (2, 6)]);
    let b = Budget::new(8, 3);
    let printed = Target::IterativeExpanded.bracket().expand(&b).unwrap();
    let delta = (&expand_static(&b).unwrap() - &printed).class(2, 4);
    assert_eq!(delta, expand("3/32*m^-5*beta*acomm(pow(O,2), pow(comm(O,E),2))", &b));
}

#[test]
fn direct_and_iterative_agree_through_first_order() {
    let b = Budget::new(8, 3);
    let eriksen = EriksenPipeline::run(&b).unwrap().h_fw;
    let iterative = expand_static(&b).unwrap();
    let report = diff_report(&eriksen, &iterative, &b);
    for o in [0, 2, 4, 6, 8] {
        assert_eq!(report.class(0, o).map(|c| c.status), Some(ClassStatus::Identical), "(0,{o})");
    }
    assert_eq!(report.class(1, 2).unwrap().status, ClassStatus::Identical);
    assert!(report.differences_at_least(2));
    assert!(report.classes.iter().any(|c| c.status == ClassStatus::Differs));

    let e = BracketExpr::e;
    let o2 = BracketExpr::o2;
    let c14 = report.class(1, 4).unwrap();
    assert_eq!(c14.basis_terms.len(), 1);
    assert_eq!(c14.basis_terms[0].bracket_text, BracketExpr::comm(o2(), BracketExpr::comm(o2(), e())).to_string());
    assert_eq!((c14.basis_terms[0].coeff.as_str(), c14.basis_terms[0].m_exp), ("-1/32", -4));
    let c22 = report.class(2, 2).unwrap();
    assert_eq!(c22.basis_terms.len(), 1);
    let text = format!("beta*{}", BracketExpr::comm(BracketExpr::comm(o2(), e()), e()));
    assert_eq!(c22.basis_terms[0].bracket_text, text);
    assert_eq!((c22.basis_terms[0].coeff.as_str(), c22.basis_terms[0].m_exp), ("1/16", -3));
}

#[test]
fn second_step_agrees_with_iterative_form_through_second_order() {
    let (_, r) = derive_second_step(&Budget::new(8, 3)).unwrap();
    for c in &r.checks {
        assert_eq!(c.status, Status::Pass, "{}", c.identity);
    }
}

#[test]
fn diff_report_reconstructs_and_is_idempotent() {
    let b = Budget::new(8, 3);
    let eriksen = EriksenPipeline::run(&b).unwrap().h_fw;
    let iterative = expand_static(&b).unwrap();
    let report = diff_report(&eriksen, &iterative, &b);
    let mut basis = BracketBasis::empty(&b);
    for c in &report.classes {
        if c.e + c.o > 0 {
            basis.ensure(c.e, c.o);
        }
        let rebuilt = basis.reconstruct(&c.projection);
        assert_eq!(rebuilt, c.difference, "({}, {})", c.e, c.o);
        let again = basis.project(&rebuilt);
        assert_eq!(again, c.projection);
    }
    let json = serde_json::to_value(&report).unwrap();
    let first = &json["classes"][0];
    for key in ["e", "o", "status", "hbar_order_min", "basis_terms", "residual"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    assert!(json["budget"].get("max_word_len").is_some());
}

fn class_expr() -> impl Strategy<Value = AbstractExpr> {
    prop::collection::vec(
        (any::<bool>(), prop::collection::vec(any::<bool>(), 1..6), -3i32..1, -4i64..5, 1i64..4),
        1..5,
    )
    .prop_map(|ts| {
        AbstractExpr::from_terms(ts.into_iter().map(|(beta, letters, m, n, d)| {
            let w = Word::from_letters(letters.into_iter().map(|odd| {
                if odd {
                    fwforge_core::ncalg::Generator::O
                } else {
                    fwforge_core::ncalg::Generator::E
                }
            }));
            (Monomial::new(beta, w, m), rat(n, d))
        }))
    })
    .prop_map(|x| x.truncate(&Budget::new(5, 2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_reconstructs_random_input(x in class_expr()) {
        let mut basis = BracketBasis::empty(&Budget::new(5, 2));
        let p = basis.project(&x);
        let rebuilt = basis.reconstruct(&p);
        prop_assert_eq!(&rebuilt, &x);
        prop_assert_eq!(basis.project(&rebuilt), p);
    }
}
