//! Dirac matrices tensored with a normal-ordered algebra of momenta and field
//! functions.
//!
//! Every product is rewritten immediately so that field functions stand left
//! of momenta, using `p_i f = f p_i − iℏ ∂_i f` and, in a uniform magnetic
//! field, `π_i π_j = π_j π_i + ieℏ ε_ijk B_k`. Each rewrite carries one `ℏ`.

pub mod checks;
pub mod dirac;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigRational, One};
use serde::Serialize;

pub use checks::{
    derive_electrostatic, gamma_identity_checks, verify_commutator, ConcreteCheck, ConcreteReport,
};
pub use dirac::{format_gauss, gauss, gauss_rat, Gauss, Mat4};

use dirac::{levi_civita, AXES};

/// Central symbols carried by a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Charge,
    Hbar,
    MuPrime,
    G,
    Mass,
    Ex,
    Ey,
    Ez,
    Bx,
    By,
    Bz,
}

impl Sym {
    pub const ALL: [Sym; 11] = [
        Sym::Charge,
        Sym::Hbar,
        Sym::MuPrime,
        Sym::G,
        Sym::Mass,
        Sym::Ex,
        Sym::Ey,
        Sym::Ez,
        Sym::Bx,
        Sym::By,
        Sym::Bz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sym::Charge => "e",
            Sym::Hbar => "hbar",
            Sym::MuPrime => "mu'",
            Sym::G => "g",
            Sym::Mass => "m",
            Sym::Ex => "E_x",
            Sym::Ey => "E_y",
            Sym::Ez => "E_z",
            Sym::Bx => "B_x",
            Sym::By => "B_y",
            Sym::Bz => "B_z",
        }
    }

    pub fn e_field(axis: usize) -> Sym {
        [Sym::Ex, Sym::Ey, Sym::Ez][axis]
    }

    pub fn b_field(axis: usize) -> Sym {
        [Sym::Bx, Sym::By, Sym::Bz][axis]
    }
}

/// Integer exponents over [`Sym::ALL`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalars(pub [i32; 11]);

impl Scalars {
    pub fn of(sym: Sym, power: i32) -> Scalars {
        let mut s = Scalars::default();
        s.0[sym as usize] = power;
        s
    }

    pub fn get(&self, sym: Sym) -> i32 {
        self.0[sym as usize]
    }

    pub fn hbar(&self) -> i32 {
        self.get(Sym::Hbar)
    }

    pub fn times(&self, rhs: &Scalars) -> Scalars {
        Scalars(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl fmt::Display for Scalars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Sym::ALL
            .iter()
            .filter(|s| self.get(**s) != 0)
            .map(|s| match self.get(*s) {
                1 => s.name().to_string(),
                k => format!("{}^{}", s.name(), k),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// How momenta and the potential behave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Commuting `p_i` and an arbitrary potential `Φ(r)`.
    Electrostatic,
    /// Commuting `p_i` and a constant `Φ`: every derivative vanishes.
    ConstantPotential,
    /// Kinetic momenta `π_i` in constant `E`, `B`: `∂_iΦ = −E_i`, higher derivatives vanish.
    UniformField,
}

/// Field functions (sorted derivative multi-indices of `Φ`) followed by
/// momenta (sorted axis indices).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpMono {
    pub fields: Vec<[u8; 3]>,
    pub moms: Vec<u8>,
}

impl OpMono {
    pub fn degree(&self) -> usize {
        self.moms.len()
    }

    pub fn format(&self, mode: Mode) -> String {
        let mut parts: Vec<String> = self
            .fields
            .iter()
            .map(|a| {
                let sub: String = (0..3).flat_map(|k| std::iter::repeat_n(AXES[k], a[k] as usize)).collect();
                if sub.is_empty() {
                    "Phi".to_string()
                } else {
                    format!("Phi_{sub}")
                }
            })
            .collect();
        let p = if mode == Mode::UniformField { "pi" } else { "p" };
        let mut k = 0;
        while k < self.moms.len() {
            let axis = self.moms[k];
            let run = self.moms[k..].iter().take_while(|&&a| a == axis).count();
            parts.push(match run {
                1 => format!("{p}_{}", AXES[axis as usize]),
                n => format!("{p}_{}^{n}", AXES[axis as usize]),
            });
            k += run;
        }
        parts.join("*")
    }
}

/// One factor of an ordered product passed to [`normal_order`].
#[derive(Clone, Debug)]
pub enum Factor {
    Number(Gauss),
    Scalar(Sym, i32),
    Matrix(Mat4),
    Momentum(u8),
    /// `∂^α Φ`.
    Field([u8; 3]),
}

type Key = (Scalars, OpMono);

/// A canonical sum of `scalars ⊗ operator monomial ⊗ 4×4 matrix` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteExpr {
    mode: Mode,
    terms: BTreeMap<Key, Mat4>,
}

/// One basis component of a term, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcreteTerm {
    pub matrix: String,
    pub coeff: String,
    pub scalars: String,
    pub operator: String,
    pub hbar: i32,
}

impl fmt::Display for ConcreteTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rest: Vec<&str> = [&self.scalars, &self.matrix, &self.operator]
            .iter()
            .map(|s| s.as_str())
            .filter(|s| !s.is_empty() && *s != "1")
            .collect();
        let coeff = match (self.coeff.as_str(), rest.is_empty()) {
            ("1", false) => String::new(),
            ("-1", false) => "-".to_string(),
            (c, _) => format!("{c} "),
        };
        write!(f, "{}{}", coeff, rest.join(" "))
    }
}

impl ConcreteExpr {
    pub fn zero(mode: Mode) -> ConcreteExpr {
        ConcreteExpr {
            mode,
            terms: BTreeMap::new(),
        }
    }

    fn single(mode: Mode, scalars: Scalars, op: OpMono, m: Mat4) -> ConcreteExpr {
        let mut x = ConcreteExpr::zero(mode);
        x.add_term(scalars, op, m);
        x
    }

    pub fn number(mode: Mode, c: Gauss) -> ConcreteExpr {
        ConcreteExpr::single(mode, Scalars::default(), OpMono::default(), Mat4::identity().scale(&c))
    }

    pub fn one(mode: Mode) -> ConcreteExpr {
        ConcreteExpr::number(mode, Gauss::one())
    }

    pub fn matrix(mode: Mode, m: Mat4) -> ConcreteExpr {
        ConcreteExpr::single(mode, Scalars::default(), OpMono::default(), m)
    }

    pub fn symbol(mode: Mode, sym: Sym, power: i32) -> ConcreteExpr {
        ConcreteExpr::single(mode, Scalars::of(sym, power), OpMono::default(), Mat4::identity())
    }

    /// `p_i`, or `π_i` in uniform-field mode.
    pub fn momentum(mode: Mode, axis: usize) -> ConcreteExpr {
        let op = OpMono {
            fields: vec![],
            moms: vec![axis as u8],
        };
        ConcreteExpr::single(mode, Scalars::default(), op, Mat4::identity())
    }

    /// `∂^α Φ`, reduced according to the mode.
    pub fn potential_derivative(mode: Mode, alpha: [u8; 3]) -> ConcreteExpr {
        let order: u8 = alpha.iter().sum();
        match (mode, order) {
            (_, 0) | (Mode::Electrostatic, _) => {
                let op = OpMono {
                    fields: vec![alpha],
                    moms: vec![],
                };
                ConcreteExpr::single(mode, Scalars::default(), op, Mat4::identity())
            }
            (Mode::UniformField, 1) => {
                let axis = alpha.iter().position(|&a| a == 1).expect("first derivative");
                -&ConcreteExpr::symbol(mode, Sym::e_field(axis), 1)
            }
            _ => ConcreteExpr::zero(mode),
        }
    }

    pub fn potential(mode: Mode) -> ConcreteExpr {
        ConcreteExpr::potential_derivative(mode, [0, 0, 0])
    }

    /// `E_i = −∂_iΦ`.
    pub fn electric_field(mode: Mode, axis: usize) -> ConcreteExpr {
        let mut alpha = [0u8; 3];
        alpha[axis] = 1;
        -&ConcreteExpr::potential_derivative(mode, alpha)
    }

    /// `B_i`, a central symbol.
    pub fn magnetic_field(mode: Mode, axis: usize) -> ConcreteExpr {
        ConcreteExpr::symbol(mode, Sym::b_field(axis), 1)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalars, &OpMono, &Mat4)> {
        self.terms.iter().map(|((s, o), m)| (s, o, m))
    }

    pub fn add_term(&mut self, scalars: Scalars, op: OpMono, m: Mat4) {
        let key = (scalars, op);
        let sum = match self.terms.remove(&key) {
            Some(prev) => &prev + &m,
            None => m,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &Gauss) -> ConcreteExpr {
        let mut out = ConcreteExpr::zero(self.mode);
        for ((s, o), m) in &self.terms {
            out.add_term(*s, o.clone(), m.scale(c));
        }
        out
    }

    pub fn scale_rat(&self, c: &BigRational) -> ConcreteExpr {
        self.scale(&gauss_rat(c.clone()))
    }

    pub fn commutator(&self, rhs: &ConcreteExpr) -> ConcreteExpr {
        &(self * rhs) - &(rhs * self)
    }

    pub fn anticommutator(&self, rhs: &ConcreteExpr) -> ConcreteExpr {
        &(self * rhs) + &(rhs * self)
    }

    pub fn filter<F: Fn(&Scalars, &OpMono) -> bool>(&self, keep: F) -> ConcreteExpr {
        let mut out = ConcreteExpr::zero(self.mode);
        for ((s, o), m) in &self.terms {
            if keep(s, o) {
                out.add_term(*s, o.clone(), m.clone());
            }
        }
        out
    }

    /// Terms with at most `max` powers of `ℏ`.
    pub fn hbar_truncate(&self, max: i32) -> ConcreteExpr {
        self.filter(|s, _| s.hbar() <= max)
    }

    /// `(ℏ ≤ max, ℏ > max)`.
    pub fn hbar_split(&self, max: i32) -> (ConcreteExpr, ConcreteExpr) {
        (self.hbar_truncate(max), self.filter(|s, _| s.hbar() > max))
    }

    pub fn min_hbar(&self) -> Option<i32> {
        self.terms.keys().map(|(s, _)| s.hbar()).min()
    }

    pub fn max_hbar(&self) -> Option<i32> {
        self.terms.keys().map(|(s, _)| s.hbar()).max()
    }

    /// Every term as an ordered factor list, field functions left of momenta.
    pub fn to_factor_words(&self) -> Vec<Vec<Factor>> {
        self.terms
            .iter()
            .map(|((s, o), m)| {
                let mut w = vec![Factor::Matrix(m.clone())];
                w.extend(
                    Sym::ALL
                        .iter()
                        .filter(|sym| s.get(**sym) != 0)
                        .map(|sym| Factor::Scalar(*sym, s.get(*sym))),
                );
                w.extend(o.fields.iter().map(|a| Factor::Field(*a)));
                w.extend(o.moms.iter().map(|&i| Factor::Momentum(i)));
                w
            })
            .collect()
    }

    /// Canonical components against the Dirac basis.
    pub fn components(&self) -> Vec<ConcreteTerm> {
        self.terms
            .iter()
            .flat_map(|((s, o), m)| {
                m.components().into_iter().map(move |(label, c)| ConcreteTerm {
                    matrix: label.to_string(),
                    coeff: format_gauss(&c),
                    scalars: s.to_string(),
                    operator: o.format(self.mode),
                    hbar: s.hbar(),
                })
            })
            .collect()
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.components().iter().map(|t| t.to_string()).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ConcreteExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

/// Product of factors in the given order, returned in canonical form.
pub fn normal_order(mode: Mode, factors: &[Factor]) -> ConcreteExpr {
    factors.iter().fold(ConcreteExpr::one(mode), |acc, f| {
        let x = match f {
            Factor::Number(c) => ConcreteExpr::number(mode, c.clone()),
            Factor::Scalar(s, k) => ConcreteExpr::symbol(mode, *s, *k),
            Factor::Matrix(m) => ConcreteExpr::matrix(mode, m.clone()),
            Factor::Momentum(i) => ConcreteExpr::momentum(mode, *i as usize),
            Factor::Field(a) => ConcreteExpr::potential_derivative(mode, *a),
        };
        &acc * &x
    })
}

struct Partial {
    coeff: Gauss,
    scalars: Scalars,
    fields: Vec<[u8; 3]>,
    moms: Vec<u8>,
}

/// `π_i · P` for a sorted momentum list `P`, as sorted lists.
fn insert_momentum(mode: Mode, i: u8, p: &[u8]) -> Vec<(Gauss, Scalars, Vec<u8>)> {
    match p.first() {
        Some(&j) if j < i && mode == Mode::UniformField => {
            // π_i π_j rest = π_j (π_i rest) + ieℏ ε_ijk B_k rest
            let mut out: Vec<(Gauss, Scalars, Vec<u8>)> = insert_momentum(mode, i, &p[1..])
                .into_iter()
                .map(|(c, s, mut w)| {
                    w.insert(0, j);
                    (c, s, w)
                })
                .collect();
            let k = 3 - i as usize - j as usize;
            let eps = levi_civita(i as usize, j as usize, k);
            let s = Scalars::of(Sym::Charge, 1)
                .times(&Scalars::of(Sym::Hbar, 1))
                .times(&Scalars::of(Sym::b_field(k), 1));
            out.push((gauss(0, eps), s, p[1..].to_vec()));
            out
        }
        _ => {
            let mut w = p.to_vec();
            let at = w.partition_point(|&a| a <= i);
            w.insert(at, i);
            vec![(Gauss::one(), Scalars::default(), w)]
        }
    }
}

/// `∂_i` of a product of field functions, by Leibniz.
fn differentiate(mode: Mode, i: u8, fields: &[[u8; 3]]) -> Vec<(Gauss, Scalars, Vec<[u8; 3]>)> {
    let mut out = Vec::new();
    for k in 0..fields.len() {
        let mut alpha = fields[k];
        alpha[i as usize] += 1;
        let order: u8 = alpha.iter().sum();
        let mut rest: Vec<[u8; 3]> = fields.to_vec();
        match (mode, order) {
            (Mode::Electrostatic, _) => {
                rest[k] = alpha;
                rest.sort();
                out.push((Gauss::one(), Scalars::default(), rest));
            }
            (Mode::UniformField, 1) => {
                rest.remove(k);
                out.push((gauss(-1, 0), Scalars::of(Sym::e_field(i as usize), 1), rest));
            }
            _ => {}
        }
    }
    out
}

/// `a · b` for operator monomials, as canonical terms.
fn op_product(mode: Mode, a: &OpMono, b: &OpMono) -> Vec<Partial> {
    let mut state = vec![Partial {
        coeff: Gauss::one(),
        scalars: Scalars::default(),
        fields: b.fields.clone(),
        moms: b.moms.clone(),
    }];
    for &i in a.moms.iter().rev() {
        let mut next = Vec::new();
        for t in state {
            for (c, s, w) in insert_momentum(mode, i, &t.moms) {
                next.push(Partial {
                    coeff: &t.coeff * &c,
                    scalars: t.scalars.times(&s),
                    fields: t.fields.clone(),
                    moms: w,
                });
            }
            // −iℏ ∂_i F
            for (c, s, f) in differentiate(mode, i, &t.fields) {
                next.push(Partial {
                    coeff: &t.coeff * &c * gauss(0, -1),
                    scalars: t.scalars.times(&s).times(&Scalars::of(Sym::Hbar, 1)),
                    fields: f,
                    moms: t.moms.clone(),
                });
            }
        }
        state = next;
    }
    for t in &mut state {
        t.fields.extend_from_slice(&a.fields);
        t.fields.sort();
    }
    state
}

impl Add for &ConcreteExpr {
    type Output = ConcreteExpr;
    fn add(self, rhs: &ConcreteExpr) -> ConcreteExpr {
        let mut out = self.clone();
        for ((s, o), m) in &rhs.terms {
            out.add_term(*s, o.clone(), m.clone());
        }
        out
    }
}

impl Sub for &ConcreteExpr {
    type Output = ConcreteExpr;
    fn sub(self, rhs: &ConcreteExpr) -> ConcreteExpr {
        self + &(-rhs)
    }
}

impl Neg for &ConcreteExpr {
    type Output = ConcreteExpr;
    fn neg(self) -> ConcreteExpr {
        self.scale(&gauss(-1, 0))
    }
}

impl Mul for &ConcreteExpr {
    type Output = ConcreteExpr;
    fn mul(self, rhs: &ConcreteExpr) -> ConcreteExpr {
        assert_eq!(self.mode, rhs.mode, "mixed concretizer modes");
        let mut out = ConcreteExpr::zero(self.mode);
        for ((s1, o1), m1) in &self.terms {
            for ((s2, o2), m2) in &rhs.terms {
                let m = m1 * m2;
                if m.is_zero() {
                    continue;
                }
                let s = s1.times(s2);
                for t in op_product(self.mode, o1, o2) {
                    out.add_term(
                        s.times(&t.scalars),
                        OpMono {
                            fields: t.fields,
                            moms: t.moms,
                        },
                        m.scale(&t.coeff),
                    );
                }
            }
        }
        out
    }
}

/// `Σ_i a_i b_i` with the left operand first.
pub fn dot<F, G>(a: F, b: G) -> ConcreteExpr
where
    F: Fn(usize) -> ConcreteExpr,
    G: Fn(usize) -> ConcreteExpr,
{
    let terms: Vec<ConcreteExpr> = (0..3).map(|i| &a(i) * &b(i)).collect();
    let mode = terms[0].mode();
    terms.iter().fold(ConcreteExpr::zero(mode), |acc, t| &acc + t)
}

/// `Σ_k c_k (a × b)_k` with the `a` factor left of the `b` factor.
pub fn triple<C, F, G>(c: C, a: F, b: G) -> ConcreteExpr
where
    C: Fn(usize) -> ConcreteExpr,
    F: Fn(usize) -> ConcreteExpr,
    G: Fn(usize) -> ConcreteExpr,
{
    let mut out: Option<ConcreteExpr> = None;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let eps = levi_civita(k, i, j);
                if eps == 0 {
                    continue;
                }
                let t = (&(&c(k) * &a(i)) * &b(j)).scale(&gauss(eps, 0));
                out = Some(match out {
                    Some(acc) => &acc + &t,
                    None => t,
                });
            }
        }
    }
    out.expect("three axes")
}
