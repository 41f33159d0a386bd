//! Truncated series in the central variable `x = O²/m²`.
//!
//! Functions of `ε = √(m² + O²)` commute with `O`, so they are expanded as
//! commutative series `m^d · Σ c_k x^k` and only turned into words (`O^{2k}`)
//! when they enter the free algebra. The binomial series `(1 + X)^q` for a
//! noncommuting `X` lives here as well.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::ncalg::{AbstractExpr, Budget, Generator, Monomial, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("singular series: leading coefficient vanishes in `{0}`")]
    Singular(String),
    #[error("square root of `{0}` is not rational at x = 0")]
    IrrationalRoot(String),
    #[error("sum of terms with different mass dimensions ({0} vs {1})")]
    InhomogeneousSum(i32, i32),
    #[error("binomial series argument has a constant term")]
    ConstantTerm,
    #[error("unknown epsilon function `{0}`")]
    UnknownFunction(String),
}

/// `m^m_offset · Σ_{k ≤ order} coeffs[k] · x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSeries {
    coeffs: Vec<BigRational>,
    m_offset: i32,
}

/// `C(q, k) = q (q-1) ... (q-k+1) / k!`.
pub fn binomial_coefficient(q: &BigRational, k: usize) -> BigRational {
    let mut c = BigRational::one();
    for j in 0..k {
        let j = BigRational::from_integer(BigInt::from(j));
        c = c * (q - &j) / (&j + BigRational::one());
    }
    c
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl CentralSeries {
    pub fn new(mut coeffs: Vec<BigRational>, order: usize, m_offset: i32) -> CentralSeries {
        coeffs.resize(order + 1, BigRational::zero());
        CentralSeries { coeffs, m_offset }
    }

    pub fn constant(c: BigRational, order: usize) -> CentralSeries {
        CentralSeries::new(vec![c], order, 0)
    }

    /// `m^k`.
    pub fn mass(k: i32, order: usize) -> CentralSeries {
        CentralSeries::new(vec![BigRational::one()], order, k)
    }

    /// `(1 + x)^q` through `x^order`.
    pub fn binomial(q: &BigRational, order: usize) -> CentralSeries {
        CentralSeries::new(
            (0..=order).map(|k| binomial_coefficient(q, k)).collect(),
            order,
            0,
        )
    }

    /// `ε = m (1 + x)^{1/2}`.
    pub fn epsilon(order: usize) -> CentralSeries {
        let mut s = CentralSeries::binomial(&BigRational::new(1.into(), 2.into()), order);
        s.m_offset = 1;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn m_offset(&self) -> i32 {
        self.m_offset
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, rhs: &CentralSeries) -> Result<CentralSeries, SeriesError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.m_offset != rhs.m_offset {
            return Err(SeriesError::InhomogeneousSum(self.m_offset, rhs.m_offset));
        }
        let order = self.order().min(rhs.order());
        Ok(CentralSeries::new(
            (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
            order,
            self.m_offset,
        ))
    }

    pub fn neg(&self) -> CentralSeries {
        CentralSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            m_offset: self.m_offset,
        }
    }

    pub fn scale(&self, c: &BigRational) -> CentralSeries {
        CentralSeries {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
            m_offset: self.m_offset,
        }
    }

    pub fn mul(&self, rhs: &CentralSeries) -> CentralSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        CentralSeries::new(out, order, self.m_offset + rhs.m_offset)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Multiplicative inverse; requires a nonzero constant coefficient.
    pub fn invert(&self) -> Result<CentralSeries, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::Singular(self.to_string()));
        }
        let inv0 = a0.recip();
        let order = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut s = BigRational::zero();
            for k in 1..=n {
                s += &self.coeffs[k] * &out[n - k];
            }
            out.push(-(s * &inv0));
        }
        Ok(CentralSeries::new(out, order, -self.m_offset))
    }

    /// `self^q` for rational `q`, computed as `c0^q m^(d q) (1 + y)^q` with the
    /// binomial series composed with `y = self / c0 - 1`.
    ///
    /// `c0^q` and `d q` must be rational/integral; only integer `q` and
    /// perfect-square roots are supported.
    pub fn pow_rational(&self, q: &BigRational) -> Result<CentralSeries, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::Singular(self.to_string()));
        }
        let (lead, offset) = if q.is_integer() {
            let n = q.to_integer();
            let n: i32 = n
                .try_into()
                .map_err(|_| SeriesError::IrrationalRoot(self.to_string()))?;
            (pow_int(a0, n), self.m_offset * n)
        } else if *q.denom() == BigInt::from(2) {
            let root = rational_sqrt(a0).ok_or_else(|| SeriesError::IrrationalRoot(self.to_string()))?;
            if self.m_offset % 2 != 0 {
                return Err(SeriesError::IrrationalRoot(self.to_string()));
            }
            let n: i32 = q
                .numer()
                .try_into()
                .map_err(|_| SeriesError::IrrationalRoot(self.to_string()))?;
            (pow_int(&root, n), self.m_offset / 2 * n)
        } else {
            return Err(SeriesError::IrrationalRoot(self.to_string()));
        };
        let order = self.order();
        let inv0 = a0.recip();
        let y = CentralSeries::new(
            std::iter::once(BigRational::zero())
                .chain(self.coeffs[1..].iter().map(|c| c * &inv0))
                .collect(),
            order,
            0,
        );
        let mut acc = CentralSeries::constant(BigRational::zero(), order);
        let mut y_pow = CentralSeries::constant(BigRational::one(), order);
        for k in 0..=order {
            let term = y_pow.scale(&binomial_coefficient(q, k));
            acc = acc.add(&term).expect("dimensionless terms");
            y_pow = y_pow.mul(&y);
        }
        acc.m_offset = offset;
        Ok(acc.scale(&lead))
    }

    pub fn sqrt(&self) -> Result<CentralSeries, SeriesError> {
        self.pow_rational(&BigRational::new(1.into(), 2.into()))
    }

    /// The series as an element of the free algebra:
    /// `Σ c_k m^(d - 2k) O^(2k)`, truncated to `budget`.
    pub fn to_abstract(&self, budget: &Budget) -> AbstractExpr {
        AbstractExpr::from_terms(self.coeffs.iter().enumerate().filter_map(|(k, c)| {
            let word = Word::power(Generator::O, 2 * k);
            budget.admits(&word).then(|| {
                (
                    Monomial::new(false, word, self.m_offset - 2 * k as i32),
                    c.clone(),
                )
            })
        }))
    }
}

fn pow_int(a: &BigRational, n: i32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..n.unsigned_abs() {
        r *= a;
    }
    if n < 0 {
        r.recip()
    } else {
        r
    }
}

impl fmt::Display for CentralSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m^{} (", self.m_offset)?;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} x")?,
                _ => write!(f, "{c} x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str(")")
    }
}

/// A rational expression in the commuting symbols `ε` and `m`, with square
/// roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarFn {
    Eps,
    Mass,
    Const(BigRational),
    Add(Box<ScalarFn>, Box<ScalarFn>),
    Mul(Box<ScalarFn>, Box<ScalarFn>),
    Inv(Box<ScalarFn>),
    Pow(Box<ScalarFn>, i32),
    Sqrt(Box<ScalarFn>),
}

impl ScalarFn {
    pub fn int(n: i64) -> ScalarFn {
        ScalarFn::Const(BigRational::from_integer(n.into()))
    }

    pub fn add(self, rhs: ScalarFn) -> ScalarFn {
        ScalarFn::Add(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: ScalarFn) -> ScalarFn {
        ScalarFn::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: ScalarFn) -> ScalarFn {
        self.mul(rhs.inv())
    }

    pub fn inv(self) -> ScalarFn {
        ScalarFn::Inv(Box::new(self))
    }

    pub fn pow(self, n: i32) -> ScalarFn {
        ScalarFn::Pow(Box::new(self), n)
    }

    pub fn sqrt(self) -> ScalarFn {
        ScalarFn::Sqrt(Box::new(self))
    }

    /// Expands through `x^order` by substituting `ε = m (1 + x)^{1/2}`.
    pub fn expand(&self, order: usize) -> Result<CentralSeries, SeriesError> {
        Ok(match self {
            ScalarFn::Eps => CentralSeries::epsilon(order),
            ScalarFn::Mass => CentralSeries::mass(1, order),
            ScalarFn::Const(c) => CentralSeries::constant(c.clone(), order),
            ScalarFn::Add(a, b) => a.expand(order)?.add(&b.expand(order)?)?,
            ScalarFn::Mul(a, b) => a.expand(order)?.mul(&b.expand(order)?),
            ScalarFn::Inv(a) => a
                .expand(order)?
                .invert()
                .map_err(|_| SeriesError::Singular(a.to_string()))?,
            ScalarFn::Pow(a, n) => {
                let s = a.expand(order)?;
                if *n >= 0 {
                    let mut acc = CentralSeries::constant(BigRational::one(), order);
                    for _ in 0..*n {
                        acc = acc.mul(&s);
                    }
                    acc
                } else {
                    s.pow_rational(&BigRational::from_integer((*n).into()))
                        .map_err(|_| SeriesError::Singular(a.to_string()))?
                }
            }
            ScalarFn::Sqrt(a) => a.expand(order)?.sqrt().map_err(|e| match e {
                SeriesError::IrrationalRoot(_) => SeriesError::IrrationalRoot(a.to_string()),
                SeriesError::Singular(_) => SeriesError::Singular(a.to_string()),
                other => other,
            })?,
        })
    }

    /// Numerical value at given `ε`, `m`.
    pub fn eval(&self, eps: f64, m: f64) -> f64 {
        use num::ToPrimitive;
        match self {
            ScalarFn::Eps => eps,
            ScalarFn::Mass => m,
            ScalarFn::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            ScalarFn::Add(a, b) => a.eval(eps, m) + b.eval(eps, m),
            ScalarFn::Mul(a, b) => a.eval(eps, m) * b.eval(eps, m),
            ScalarFn::Inv(a) => 1.0 / a.eval(eps, m),
            ScalarFn::Pow(a, n) => a.eval(eps, m).powi(*n),
            ScalarFn::Sqrt(a) => a.eval(eps, m).sqrt(),
        }
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Eps => f.write_str("eps"),
            ScalarFn::Mass => f.write_str("m"),
            ScalarFn::Const(c) => write!(f, "{c}"),
            ScalarFn::Add(a, b) => write!(f, "({a} + {b})"),
            ScalarFn::Mul(a, b) => write!(f, "{a}*{b}"),
            ScalarFn::Inv(a) => write!(f, "1/({a})"),
            ScalarFn::Pow(a, n) => write!(f, "({a})^{n}"),
            ScalarFn::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

/// A named function of `ε` usable inside bracket expressions as `epsfun(NAME)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsilonFunctionSpec {
    pub name: String,
    pub expr: ScalarFn,
}

impl EpsilonFunctionSpec {
    pub fn new(name: &str, expr: ScalarFn) -> EpsilonFunctionSpec {
        EpsilonFunctionSpec {
            name: name.to_string(),
            expr,
        }
    }

    pub fn expand(&self, order: usize) -> Result<CentralSeries, SeriesError> {
        self.expr.expand(order)
    }

    /// Looks the name up in the built-in registry.
    pub fn named(name: &str) -> Result<EpsilonFunctionSpec, SeriesError> {
        registry()
            .into_iter()
            .find(|s| s.name == name)
            .ok_or_else(|| SeriesError::UnknownFunction(name.to_string()))
    }
}

/// The built-in ε-functions.
pub fn registry() -> Vec<EpsilonFunctionSpec> {
    use ScalarFn::{Eps, Mass};
    let eps_plus_m = || Eps.add(Mass);
    // 2ε(ε+m)
    let two_eps_epsm = || ScalarFn::int(2).mul(Eps).mul(eps_plus_m());
    vec![
        EpsilonFunctionSpec::new("eps", Eps),
        EpsilonFunctionSpec::new("inv_eps", Eps.inv()),
        EpsilonFunctionSpec::new("inv_eps_epsm", Eps.mul(eps_plus_m()).inv()),
        EpsilonFunctionSpec::new(
            "k13",
            ScalarFn::int(2)
                .mul(Eps.pow(2))
                .add(ScalarFn::int(2).mul(Eps).mul(Mass))
                .add(Mass.pow(2))
                .div(Eps.pow(4).mul(eps_plus_m().pow(2))),
        ),
        EpsilonFunctionSpec::new("inv_eps3", Eps.pow(-3)),
        EpsilonFunctionSpec::new("inv_eps5", Eps.pow(-5)),
        EpsilonFunctionSpec::new("inv_sqrt2", two_eps_epsm().sqrt().inv()),
        EpsilonFunctionSpec::new("fact_plus", eps_plus_m().div(two_eps_epsm().sqrt())),
    ]
}

/// `centralExpand`: the registry function `spec` through `x^order`.
pub fn central_expand(spec: &EpsilonFunctionSpec, order: usize) -> Result<CentralSeries, SeriesError> {
    spec.expand(order)
}

/// `(1 + X)^q = Σ_k C(q, k) X^k` for noncommuting `X` without constant term,
/// truncated to `budget`. The sum is finite: every word of `X` has at least
/// one letter, so `X^k` vanishes once `k > max_word_len`.
pub fn nc_binomial_power(
    x: &AbstractExpr,
    q: &BigRational,
    budget: &Budget,
) -> Result<AbstractExpr, SeriesError> {
    if x.iter().any(|(m, _)| m.word.is_empty()) {
        return Err(SeriesError::ConstantTerm);
    }
    let x = x.truncate(budget);
    let mut acc = AbstractExpr::one();
    let mut x_pow = AbstractExpr::one();
    for k in 1..=budget.max_word_len {
        x_pow = x_pow.mul_budget(&x, budget);
        if x_pow.is_zero() {
            break;
        }
        acc += &x_pow.scale(&binomial_coefficient(q, k));
    }
    Ok(acc)
}
