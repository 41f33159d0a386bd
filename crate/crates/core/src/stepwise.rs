//! The iterative ("step-by-step") FW transformation with `F = E`.

use crate::comparator::{BracketBasis, Projection};
use crate::ncalg::{parse_expr, AbstractExpr, BracketExpr, Budget, ExpandError};
use crate::report::{Check, CheckReport};
use crate::targets::Target;

/// Structured iterative Hamiltonian and its expansion at one budget.
#[derive(Clone, Debug)]
pub struct StepwiseHamiltonian {
    pub structured: BracketExpr,
    pub expanded: AbstractExpr,
}

/// Structured iterative Hamiltonian and its word expansion.
pub fn iterative_hamiltonian(budget: &Budget) -> Result<StepwiseHamiltonian, ExpandError> {
    let structured = Target::Iterative.bracket();
    let expanded = structured.expand(budget)?;
    Ok(StepwiseHamiltonian { structured, expanded })
}

pub fn expand_static(budget: &Budget) -> Result<AbstractExpr, ExpandError> {
    Ok(iterative_hamiltonian(budget)?.expanded)
}

/// Practical Hamiltonian: zeroth plus first order only.
pub fn practical_hamiltonian(budget: &Budget) -> Result<AbstractExpr, ExpandError> {
    Target::Practical.bracket().expand(budget)
}

/// Classes on which the expanded iterative Hamiltonian must equal the printed expansion.
pub fn printed_expansion_exact(e: usize, o: usize) -> bool {
    matches!((e, o), (0, _) if o <= 8) || (e == 1 && o <= 6) || (e, o) == (2, 2)
}

/// Even and odd operators after the first step.
#[derive(Clone, Debug)]
pub struct FirstStepOperators {
    pub e_prime: BracketExpr,
    pub o_prime: BracketExpr,
}

pub fn first_step_operators() -> FirstStepOperators {
    let e_prime = parse_expr(
        "E - 1/2*comm(epsfun(fact_plus), comm(epsfun(fact_plus), E)) \
         + 1/2*comm(beta*O*epsfun(inv_sqrt2), comm(beta*O*epsfun(inv_sqrt2), E))",
    )
    .expect("first-step even operator parses");
    let o_prime = parse_expr(
        "beta*O*epsfun(inv_sqrt2)*E*epsfun(fact_plus) - epsfun(fact_plus)*E*beta*O*epsfun(inv_sqrt2)",
    )
    .expect("first-step odd operator parses");
    FirstStepOperators { e_prime, o_prime }
}

/// Outcome of the direct second-step expansion.
#[derive(Clone, Debug)]
pub struct SecondStepReport {
    /// `direct − expandStatic(iterative)`.
    pub difference: AbstractExpr,
    pub projection: Projection,
    pub checks: Vec<Check>,
}

/// `deriveSecondStep`: `βε + E′ + ¼β{1/ε, O′²}` expanded directly.
pub fn derive_second_step(budget: &Budget) -> Result<(AbstractExpr, SecondStepReport), ExpandError> {
    let ops = first_step_operators();
    let b = budget;
    let e_prime = ops.e_prime.expand(b)?;
    let o_prime = ops.o_prime.expand(b)?;
    let beta_eps = parse_expr("beta*epsfun(eps)").expect("parses").expand(b)?;
    let inv_eps = parse_expr("epsfun(inv_eps)").expect("parses").expand(b)?;
    let o2 = o_prime.mul_budget(&o_prime, b);
    let tail = AbstractExpr::beta()
        .mul_budget(&inv_eps.anticommutator(&o2, b), b)
        .scale(&crate::ncalg::rat(1, 4));
    let direct = &(&beta_eps + &e_prime) + &tail;

    let iterative = expand_static(b)?;
    let difference = &direct - &iterative;
    let mut basis = BracketBasis::empty(b);
    let projection = basis.project(&difference);

    let zeroth = difference.filter(|m| m.word.e_count() == 0);
    let first = difference.filter(|m| m.word.e_count() == 1);
    let mut first_basis = BracketBasis::empty(b);
    let first_proj = first_basis.project(&first);
    let second = difference.filter(|m| m.word.e_count() == 2);
    let mut second_basis = BracketBasis::empty(b);
    let second_proj = second_basis.project(&second);

    let checks = vec![
        Check::flag("E' even", e_prime.is_even()),
        Check::flag("O' odd", o_prime.is_odd()),
        Check::vanishing("second step minus iterative, e = 0", &zeroth),
        Check::flag(
            "second step minus iterative, e = 1, is of order >= 3",
            first_proj.min_order().is_none_or(|k| k >= 3) && first_proj.residual.is_zero(),
        ),
        Check::flag(
            "second step minus iterative, e = 2, is of order >= 3",
            second_proj.min_order().is_none_or(|k| k >= 3) && second_proj.residual.is_zero(),
        ),
        Check::vanishing("second step unexplained residual", &projection.residual),
    ];
    Ok((
        direct,
        SecondStepReport {
            difference,
            projection,
            checks,
        },
    ))
}

/// `derive stepwise`: structural checks plus comparison with the printed forms.
pub fn derive_report(budget: &Budget) -> Result<CheckReport, ExpandError> {
    let b = budget;
    let h = expand_static(b)?;
    let printed = Target::IterativeExpanded.bracket().expand(b)?;
    let diff = &h - &printed;
    let exact = diff.filter(|m| {
        let (e, o) = m.word.class();
        printed_expansion_exact(e, o)
    });
    let rest = &diff - &exact;
    let mut basis = BracketBasis::empty(b);
    let rest_proj = basis.project(&rest);

    let practical = practical_hamiltonian(b)?;
    let beyond_first = &h - &practical;
    let beyond_proj = basis.project(&beyond_first);

    let classical = Target::Classical.bracket().expand(b)?;

    let mut report = CheckReport::new("derive stepwise", Some(*b));
    report.extend([
        Check::flag("iterative H_FW even", h.is_even()),
        Check::equality("iterative H_FW self-adjoint", &h.adjoint(), &h),
        Check::vanishing("iterative H_FW = printed expansion on exact classes", &exact),
        Check::vanishing("iterative H_FW - printed expansion, remaining classes", &rest).report_only(),
        Check::flag(
            "remaining-class delta projects onto order-2 brackets with zero residual",
            rest_proj.residual.is_zero() && rest_proj.terms.iter().all(|t| t.order >= 2),
        ),
        Check::flag(
            "iterative minus practical form is of order >= 2",
            beyond_proj.residual.is_zero() && beyond_proj.min_order().is_none_or(|k| k >= 2),
        ),
        Check::equality(
            "iterative H_FW truncated at m^-3 = classical FW",
            &h.inverse_mass_truncate(3),
            &classical,
        ),
    ]);
    Ok(report)
}
