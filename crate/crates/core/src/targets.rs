//! Published Hamiltonians encoded in the expression mini-language.
//!
//! Every target is kept as source text so it can be printed, re-parsed, and
//! diffed verbatim. `F` is instantiated as `E` throughout (static fields).

use crate::ncalg::{parse_expr, BracketExpr};

const EPS_SERIES: &str =
    "beta*(m + 1/2*m^-1*pow(O,2) - 1/8*m^-3*pow(O,4) + 1/16*m^-5*pow(O,6) - 5/128*m^-7*pow(O,8))";

const FIRST_ACOMM: &str =
    "1/128*m^-6*acomm(8*m^4 - 6*m^2*pow(O,2) + 5*pow(O,4), comm(O, comm(O, E)))";

const A22: &str = "1/16*m^-3*beta*acomm(O, comm(comm(O,E),E))";

const A24_KEPT: &str = "24*acomm(pow(O,2), pow(comm(O,E),2)) \
     - 11*pow(comm(pow(O,2),E),2) \
     - 14*acomm(pow(O,2), comm(comm(pow(O,2),E),E))";

const A24_THIRD_ORDER: &str = "- 4*comm(O, comm(O, comm(comm(pow(O,2),E),E))) \
     + 9/2*comm(comm(O, comm(O, comm(pow(O,2),E))), E) \
     + 5/2*comm(pow(O,2), comm(O, comm(comm(O,E),E)))";

const A24_VERIFIED: &str = "24*acomm(pow(O,2), pow(comm(O,E),2)) \
     - 20*pow(comm(pow(O,2),E),2) \
     - 14*acomm(pow(O,2), comm(comm(pow(O,2),E),E)) \
     - 4*comm(O, comm(O, comm(comm(pow(O,2),E),E))) \
     + 9*comm(comm(O, comm(O, comm(pow(O,2),E))), E) \
     - 2*comm(pow(O,2), comm(O, comm(comm(O,E),E)))";

/// A named published expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Direct-method Hamiltonian written via multiple commutators.
    Eriksen,
    /// The commutator form with the `β m^-5` weights re-fitted to the exact transform.
    EriksenCorrected,
    /// The published form with the third-order brackets discarded.
    EriksenSecondOrder,
    /// Iterative-method Hamiltonian with ε-function coefficients.
    Iterative,
    /// The iterative Hamiltonian expanded in relativistic corrections, as printed.
    IterativeExpanded,
    /// Classical FW result through `m^-3`.
    Classical,
    /// Zeroth plus first order of the iterative Hamiltonian.
    Practical,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::Eriksen,
        Target::EriksenCorrected,
        Target::EriksenSecondOrder,
        Target::Iterative,
        Target::IterativeExpanded,
        Target::Classical,
        Target::Practical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Eriksen => "eriksen",
            Target::EriksenCorrected => "eriksen_corrected",
            Target::EriksenSecondOrder => "eriksen_second_order",
            Target::Iterative => "iterative",
            Target::IterativeExpanded => "iterative_expanded",
            Target::Classical => "classical",
            Target::Practical => "practical",
        }
    }

    pub fn from_name(name: &str) -> Option<Target> {
        Target::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn source(self) -> String {
        match self {
            Target::Eriksen => format!(
                "{EPS_SERIES} + E - {FIRST_ACOMM} \
                 + 1/512*m^-6*acomm(2*m^2 - pow(O,2), comm(pow(O,2), comm(pow(O,2), E))) \
                 + {A22} \
                 - 1/32*m^-4*comm(O, comm(comm(comm(O,E),E),E)) \
                 + 11/1024*m^-6*comm(pow(O,2), comm(pow(O,2), comm(O, comm(O,E)))) \
                 + 1/256*m^-5*beta*({A24_KEPT} {A24_THIRD_ORDER})"
            ),
            Target::EriksenCorrected => format!(
                "{EPS_SERIES} + E - {FIRST_ACOMM} \
                 + 1/512*m^-6*acomm(2*m^2 - pow(O,2), comm(pow(O,2), comm(pow(O,2), E))) \
                 + {A22} \
                 - 1/32*m^-4*comm(O, comm(comm(comm(O,E),E),E)) \
                 + 11/1024*m^-6*comm(pow(O,2), comm(pow(O,2), comm(O, comm(O,E)))) \
                 + 1/256*m^-5*beta*({A24_VERIFIED})"
            ),
            Target::EriksenSecondOrder => format!(
                "{EPS_SERIES} + E - {FIRST_ACOMM} \
                 + 1/512*m^-6*acomm(2*m^2 - pow(O,2), comm(pow(O,2), comm(pow(O,2), E))) \
                 + {A22} \
                 + 1/256*m^-5*beta*({A24_KEPT})"
            ),
            Target::Iterative => "beta*epsfun(eps) + E \
                 - 1/8*acomm(epsfun(inv_eps_epsm), comm(O, comm(O,E))) \
                 + 1/64*acomm(epsfun(k13), comm(pow(O,2), comm(pow(O,2),E))) \
                 - 1/16*beta*acomm(epsfun(inv_eps3), pow(comm(O,E),2)) \
                 + 1/64*beta*acomm(epsfun(inv_eps5), pow(comm(pow(O,2),E),2))"
                .to_string(),
            Target::IterativeExpanded => format!(
                "{EPS_SERIES} + E - {FIRST_ACOMM} \
                 + 1/512*m^-6*acomm(10*m^2 - 19*pow(O,2), comm(pow(O,2), comm(pow(O,2), E))) \
                 - 1/8*m^-3*beta*pow(comm(O,E),2) \
                 + 1/32*m^-5*beta*pow(comm(pow(O,2),E),2)"
            ),
            Target::Classical => "beta*(m + 1/2*m^-1*pow(O,2) - 1/8*m^-3*pow(O,4)) + E \
                 - 1/8*m^-2*comm(O, comm(O,E)) \
                 - 1/8*m^-3*beta*pow(comm(O,E),2)"
                .to_string(),
            Target::Practical => {
                "beta*epsfun(eps) + E - 1/8*acomm(epsfun(inv_eps_epsm), comm(O, comm(O,E)))".to_string()
            }
        }
    }

    pub fn bracket(self) -> BracketExpr {
        parse_expr(&self.source()).expect("built-in target parses")
    }
}
