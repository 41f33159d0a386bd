//! Operator relations between the odd and even Sakata–Taketani parts.

use serde::Serialize;

use crate::model::{Params, Particle, Representation, SakataTaketani, SpectralModel};
use crate::ops::{self, anticommutator, commutator, max_abs, mul, re, restrict, scale, sub, Op};

/// Landau indices excluded from the top of the basis before comparing.
pub const MARGIN: usize = 8;
pub const TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub lhs_max: f64,
    pub rhs_max: f64,
    pub max_difference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqrelReport {
    pub params: Params,
    #[serde(rename = "N")]
    pub n: usize,
    pub checks: Vec<RelationCheck>,
}

impl EqrelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = format!(
            "eqrel N = {} m = {} hbar = {} e = {} B = {} g = {}\n",
            self.n, p.m, p.hbar, p.e, p.b, p.g
        );
        for c in &self.checks {
            s += &format!(
                "  [{}] {}  |lhs| = {:.3e}  |rhs| = {:.3e}  diff = {:.3e}  tol = {:.3e}\n",
                if c.passed { "pass" } else { "FAIL" },
                c.relation,
                c.lhs_max,
                c.rhs_max,
                c.max_difference,
                c.tolerance
            );
        }
        s
    }
}

/// Checks the four relations on the block of Landau indices below `N − MARGIN`.
pub fn eqrel_check(params: &Params, levels: usize) -> Result<EqrelReport, crate::model::ModelError> {
    let model = SpectralModel::new(Particle::Spin1, Representation::Original, *params, levels);
    model.validate()?;
    let st = SakataTaketani::new(&model);
    let keep = |i: usize| model.landau_index(i) + MARGIN < levels;
    let inner = |a: &Op| restrict(a, keep);

    let p = params;
    let (o, e) = (&st.odd, &st.even);
    let o2 = mul(o, o);
    let c_oe = commutator(o, e);
    let double = commutator(&c_oe, e);
    let outer = anticommutator(o, &double);
    let square = mul(&c_oe, &c_oe);

    let eh2 = (p.e * p.hbar).powi(2);
    let c1 = eh2 * (p.g - 1.0) * (p.g - 2.0) / (2.0 * p.m * p.m);
    let c2 = eh2 * eh2 * ((p.g - 1.0) * (p.g - 2.0)).powi(2) / p.m.powi(4);
    let sb2 = mul(&st.s_b, &st.s_b);
    let b2_sb2 = scale(&sb2, re(p.b * p.b));

    let norm_o = max_abs(&inner(o));
    let norm_e = max_abs(&inner(e));
    let rows = [
        (
            "[O^2, E] = 0",
            commutator(&o2, e),
            ops::zero(o.nrows()),
            max_abs(&inner(&o2)) * norm_e,
        ),
        (
            "[O, E] = rho_1 e^2 hbar^2 (g-1)(g-2)/(2m^2) (S.B)^2",
            c_oe.clone(),
            scale(&mul(&st.rho1, &sb2), re(c1)),
            norm_o * norm_e,
        ),
        (
            "{O, [[O, E], E]} = -e^4 hbar^4 (g-1)^2 (g-2)^2/(2m^4) B^2 (S.B)^2",
            outer,
            scale(&b2_sb2, re(-c2 / 2.0)),
            norm_o * norm_o * norm_e * norm_e,
        ),
        (
            "([O, E])^2 = e^4 hbar^4 (g-1)^2 (g-2)^2/(4m^4) B^2 (S.B)^2",
            square,
            scale(&b2_sb2, re(c2 / 4.0)),
            norm_o * norm_o * norm_e * norm_e,
        ),
    ];
    let checks = rows
        .into_iter()
        .map(|(name, lhs, rhs, scale_norm)| {
            let (lhs, rhs) = (inner(&lhs), inner(&rhs));
            let diff = max_abs(&sub(&lhs, &rhs));
            let tolerance = TOLERANCE * scale_norm;
            RelationCheck {
                relation: name.to_string(),
                lhs_max: max_abs(&lhs),
                rhs_max: max_abs(&rhs),
                max_difference: diff,
                tolerance,
                passed: diff <= tolerance,
            }
        })
        .collect();
    Ok(EqrelReport {
        params: *params,
        n: levels,
        checks,
    })
}
