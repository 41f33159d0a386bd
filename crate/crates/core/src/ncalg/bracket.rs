use std::fmt;

use num::{BigRational, One, Signed};
use thiserror::Error;

use super::expr::{AbstractExpr, Budget};
use super::word::Generator;
use crate::fseries::{EpsilonFunctionSpec, SeriesError};

/// Structured expression before flattening to words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BracketExpr {
    Generator(Generator),
    Beta,
    MassPower(i32),
    Scalar(BigRational),
    Sum(Vec<BracketExpr>),
    Product(Vec<BracketExpr>),
    Commutator(Box<BracketExpr>, Box<BracketExpr>),
    Anticommutator(Box<BracketExpr>, Box<BracketExpr>),
    EpsilonFunction(EpsilonFunctionSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    fn xor(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Mixed, _) | (_, Parity::Mixed) => Parity::Mixed,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

/// β-parity and nominal ℏ-order of a bracket tree.
///
/// `order` is `None` exactly when the parity is mixed somewhere in the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grade {
    pub parity: Parity,
    pub order: Option<u32>,
}

impl Grade {
    const MIXED: Grade = Grade {
        parity: Parity::Mixed,
        order: None,
    };

    fn even(order: u32) -> Grade {
        Grade {
            parity: Parity::Even,
            order: Some(order),
        }
    }
}

/// Hard cap on intermediate term counts during expansion.
pub const DEFAULT_TERM_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("term budget exceeded at node {path}: {terms} terms (cap {cap})")]
    BudgetOverflow {
        path: String,
        terms: usize,
        cap: usize,
    },
    #[error("epsilon function at node {path}: {source}")]
    Series {
        path: String,
        #[source]
        source: SeriesError,
    },
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("root/{}", parts.join("/"))
    }
}

impl BracketExpr {
    pub fn e() -> BracketExpr {
        BracketExpr::Generator(Generator::E)
    }

    pub fn o() -> BracketExpr {
        BracketExpr::Generator(Generator::O)
    }

    /// `O²` as a product node.
    pub fn o2() -> BracketExpr {
        BracketExpr::Product(vec![BracketExpr::o(), BracketExpr::o()])
    }

    pub fn comm(a: BracketExpr, b: BracketExpr) -> BracketExpr {
        BracketExpr::Commutator(Box::new(a), Box::new(b))
    }

    pub fn acomm(a: BracketExpr, b: BracketExpr) -> BracketExpr {
        BracketExpr::Anticommutator(Box::new(a), Box::new(b))
    }

    pub fn product(factors: Vec<BracketExpr>) -> BracketExpr {
        BracketExpr::Product(factors)
    }

    pub fn pow(base: BracketExpr, n: usize) -> BracketExpr {
        BracketExpr::Product(vec![base; n])
    }

    pub fn scalar(c: BigRational) -> BracketExpr {
        BracketExpr::Scalar(c)
    }

    /// `c · self`, folding into an existing product node.
    pub fn scaled(self, c: BigRational) -> BracketExpr {
        match self {
            BracketExpr::Product(mut fs) => {
                fs.insert(0, BracketExpr::Scalar(c));
                BracketExpr::Product(fs)
            }
            other => BracketExpr::Product(vec![BracketExpr::Scalar(c), other]),
        }
    }

    pub fn expand(&self, budget: &Budget) -> Result<AbstractExpr, ExpandError> {
        self.expand_capped(budget, DEFAULT_TERM_CAP)
    }

    /// `expandBracket` with an explicit cap on intermediate term counts.
    pub fn expand_capped(&self, budget: &Budget, cap: usize) -> Result<AbstractExpr, ExpandError> {
        let mut path = Vec::new();
        self.expand_at(budget, cap, &mut path)
    }

    fn expand_at(
        &self,
        budget: &Budget,
        cap: usize,
        path: &mut Vec<usize>,
    ) -> Result<AbstractExpr, ExpandError> {
        let out = match self {
            BracketExpr::Generator(g) => AbstractExpr::generator(*g).truncate(budget),
            BracketExpr::Beta => AbstractExpr::beta(),
            BracketExpr::MassPower(k) => AbstractExpr::mass_power(*k),
            BracketExpr::Scalar(c) => AbstractExpr::scalar(c.clone()),
            BracketExpr::EpsilonFunction(spec) => spec
                .expand(budget.series_order())
                .map_err(|source| ExpandError::Series {
                    path: path_string(path),
                    source,
                })?
                .to_abstract(budget),
            BracketExpr::Sum(children) => {
                let mut acc = AbstractExpr::zero();
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    let v = c.expand_at(budget, cap, path)?;
                    path.pop();
                    acc += &v;
                }
                acc
            }
            BracketExpr::Product(children) => {
                let mut acc = AbstractExpr::one();
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    let v = c.expand_at(budget, cap, path)?;
                    path.pop();
                    acc = acc.mul_budget(&v, budget);
                    check_cap(&acc, cap, path)?;
                }
                acc
            }
            BracketExpr::Commutator(a, b) | BracketExpr::Anticommutator(a, b) => {
                path.push(0);
                let x = a.expand_at(budget, cap, path)?;
                path.pop();
                path.push(1);
                let y = b.expand_at(budget, cap, path)?;
                path.pop();
                if matches!(self, BracketExpr::Commutator(..)) {
                    x.commutator(&y, budget)
                } else {
                    x.anticommutator(&y, budget)
                }
            }
        };
        check_cap(&out, cap, path)?;
        Ok(out)
    }

    /// β-parity and nominal ℏ-order.
    ///
    /// Generators, β, mass powers, scalars and ε-functions carry order 0;
    /// products and anticommutators add their children's orders; a commutator
    /// adds one more unless both arguments are odd. A sum takes the smallest
    /// order of its children and is only graded when they share a parity.
    pub fn parity_and_order(&self) -> Grade {
        match self {
            BracketExpr::Generator(g) => Grade {
                parity: if g.is_odd() { Parity::Odd } else { Parity::Even },
                order: Some(0),
            },
            BracketExpr::Beta
            | BracketExpr::MassPower(_)
            | BracketExpr::Scalar(_)
            | BracketExpr::EpsilonFunction(_) => Grade::even(0),
            BracketExpr::Sum(children) => {
                let grades: Vec<Grade> = children.iter().map(|c| c.parity_and_order()).collect();
                let Some(first) = grades.first() else {
                    return Grade::even(0);
                };
                if grades
                    .iter()
                    .any(|g| g.parity == Parity::Mixed || g.parity != first.parity)
                {
                    return Grade::MIXED;
                }
                Grade {
                    parity: first.parity,
                    order: grades.iter().filter_map(|g| g.order).min(),
                }
            }
            BracketExpr::Product(children) => {
                let mut acc = Grade::even(0);
                for c in children {
                    let g = c.parity_and_order();
                    acc.parity = acc.parity.xor(g.parity);
                    if acc.parity == Parity::Mixed {
                        return Grade::MIXED;
                    }
                    acc.order = Some(acc.order.unwrap_or(0) + g.order.unwrap_or(0));
                }
                acc
            }
            BracketExpr::Commutator(a, b) | BracketExpr::Anticommutator(a, b) => {
                let ga = a.parity_and_order();
                let gb = b.parity_and_order();
                let parity = ga.parity.xor(gb.parity);
                if parity == Parity::Mixed {
                    return Grade::MIXED;
                }
                let (oa, ob) = (ga.order.unwrap_or(0), gb.order.unwrap_or(0));
                let bump = match self {
                    BracketExpr::Commutator(..)
                        if !(ga.parity == Parity::Odd && gb.parity == Parity::Odd) =>
                    {
                        1
                    }
                    _ => 0,
                };
                Grade {
                    parity,
                    order: Some(oa + ob + bump),
                }
            }
        }
    }

    /// Number of `E` and `O` leaves, for monomial brackets.
    pub fn letter_counts(&self) -> (usize, usize) {
        match self {
            BracketExpr::Generator(Generator::E) => (1, 0),
            BracketExpr::Generator(Generator::O) => (0, 1),
            BracketExpr::Product(cs) | BracketExpr::Sum(cs) => cs.iter().fold((0, 0), |acc, c| {
                let (e, o) = c.letter_counts();
                (acc.0 + e, acc.1 + o)
            }),
            BracketExpr::Commutator(a, b) | BracketExpr::Anticommutator(a, b) => {
                let (e1, o1) = a.letter_counts();
                let (e2, o2) = b.letter_counts();
                (e1 + e2, o1 + o2)
            }
            _ => (0, 0),
        }
    }

    fn is_negative_scalar(&self) -> bool {
        matches!(self, BracketExpr::Scalar(c) if c.is_negative())
    }
}

fn check_cap(e: &AbstractExpr, cap: usize, path: &[usize]) -> Result<(), ExpandError> {
    if e.len() > cap {
        Err(ExpandError::BudgetOverflow {
            path: path_string(path),
            terms: e.len(),
            cap,
        })
    } else {
        Ok(())
    }
}

fn fmt_factor(f: &mut fmt::Formatter<'_>, e: &BracketExpr) -> fmt::Result {
    match e {
        BracketExpr::Sum(cs) if cs.len() > 1 => write!(f, "({e})"),
        BracketExpr::Scalar(c) if c.is_negative() => write!(f, "({c})"),
        _ => write!(f, "{e}"),
    }
}

/// Mini-language text; the output parses back to an equal expansion.
impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Generator(g) => f.write_str(g.symbol()),
            BracketExpr::Beta => f.write_str("beta"),
            BracketExpr::MassPower(k) => write!(f, "m^{k}"),
            BracketExpr::Scalar(c) => write!(f, "{c}"),
            BracketExpr::EpsilonFunction(s) => write!(f, "epsfun({})", s.name),
            BracketExpr::Commutator(a, b) => write!(f, "comm({a},{b})"),
            BracketExpr::Anticommutator(a, b) => write!(f, "acomm({a},{b})"),
            BracketExpr::Sum(cs) => {
                if cs.is_empty() {
                    return f.write_str("0");
                }
                for (i, c) in cs.iter().enumerate() {
                    let negated = match c {
                        BracketExpr::Product(fs) if fs.first().is_some_and(|x| x.is_negative_scalar()) => {
                            let BracketExpr::Scalar(s) = &fs[0] else { unreachable!() };
                            Some((s.abs(), &fs[1..]))
                        }
                        _ => None,
                    };
                    match negated {
                        Some((s, rest)) => {
                            f.write_str(if i == 0 { "-" } else { " - " })?;
                            let mut parts: Vec<BracketExpr> = Vec::new();
                            if !s.is_one() || rest.is_empty() {
                                parts.push(BracketExpr::Scalar(s));
                            }
                            parts.extend(rest.iter().cloned());
                            if parts.len() == 1 {
                                fmt_factor(f, &parts[0])?;
                            } else {
                                write!(f, "{}", BracketExpr::Product(parts))?;
                            }
                        }
                        None => {
                            if i > 0 {
                                f.write_str(" + ")?;
                            }
                            if c.is_negative_scalar() {
                                write!(f, "({c})")?;
                            } else {
                                write!(f, "{c}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
            BracketExpr::Product(fs) => {
                if fs.is_empty() {
                    return f.write_str("1");
                }
                if fs.len() > 1 && fs.iter().all(|x| x == &fs[0]) {
                    return write!(f, "pow({},{})", fs[0], fs.len());
                }
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    fmt_factor(f, x)?;
                }
                Ok(())
            }
        }
    }
}
