use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use super::word::{Generator, Word};

/// Truncation bound applied after every product: words longer than
/// `max_word_len` or with more than `max_e_count` letters `E` are dropped.
///
/// Both conditions define two-sided ideals of the free algebra, so truncating
/// at every product node keeps all retained coefficients exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Budget {
    pub max_word_len: usize,
    pub max_e_count: usize,
}

impl Budget {
    pub const UNBOUNDED: Budget = Budget {
        max_word_len: super::word::MAX_WORD_LEN,
        max_e_count: super::word::MAX_WORD_LEN,
    };

    pub fn new(max_word_len: usize, max_e_count: usize) -> Budget {
        Budget {
            max_word_len,
            max_e_count,
        }
    }

    pub fn admits(&self, w: &Word) -> bool {
        w.len() <= self.max_word_len && w.e_count() <= self.max_e_count
    }

    fn admits_pair(&self, a: &Word, b: &Word) -> bool {
        a.len() + b.len() <= self.max_word_len && a.e_count() + b.e_count() <= self.max_e_count
    }

    /// Default truncation order for commutative ε-series: each power of
    /// `x = O²/m²` carries two letters.
    pub fn series_order(&self) -> usize {
        self.max_word_len.div_ceil(2)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.max_word_len, self.max_e_count)
    }
}

/// `β^beta · m^m_exp · word`, with β always normalized to the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub beta: bool,
    pub word: Word,
    pub m_exp: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        beta: false,
        word: Word::EMPTY,
        m_exp: 0,
    };

    pub fn new(beta: bool, word: Word, m_exp: i32) -> Monomial {
        Monomial { beta, word, m_exp }
    }

    /// Product of two monomials with its sign.
    ///
    /// Moving the right factor's β leftward past the left word picks up
    /// `(-1)^(oCount)`.
    pub fn mul(&self, rhs: &Monomial) -> (bool, Monomial) {
        let negate = rhs.beta && self.word.is_odd();
        (
            negate,
            Monomial {
                beta: self.beta ^ rhs.beta,
                word: self.word.concat(rhs.word),
                m_exp: self.m_exp + rhs.m_exp,
            },
        )
    }

    /// Adjoint: the word is reversed and β moved back to the front.
    pub fn adjoint(&self) -> (bool, Monomial) {
        (
            self.beta && self.word.is_odd(),
            Monomial {
                beta: self.beta,
                word: self.word.reversed(),
                m_exp: self.m_exp,
            },
        )
    }

    /// `wordLen + mExp`, the mass dimension of the monomial.
    pub fn degree(&self) -> i64 {
        self.word.len() as i64 + self.m_exp as i64
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m^{}", self.m_exp)?;
        if self.beta {
            f.write_str(" beta")?;
        }
        if !self.word.is_empty() {
            write!(f, " {}", self.word)?;
        }
        Ok(())
    }
}

/// One term of an [`AbstractExpr`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractTerm {
    pub coeff: BigRational,
    pub monomial: Monomial,
}

/// A canonical element of the graded free algebra over `{E, O}` with
/// central `m^±1` and the involutive β.
///
/// Terms are keyed by `(beta, word, m_exp)` and kept in that order; zero
/// coefficients are never stored, so equal expressions compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbstractExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl AbstractExpr {
    pub fn zero() -> AbstractExpr {
        AbstractExpr::default()
    }

    pub fn one() -> AbstractExpr {
        AbstractExpr::monomial(BigRational::one(), Monomial::ONE)
    }

    pub fn monomial(coeff: BigRational, m: Monomial) -> AbstractExpr {
        let mut e = AbstractExpr::zero();
        e.add_term(m, coeff);
        e
    }

    pub fn scalar(c: BigRational) -> AbstractExpr {
        AbstractExpr::monomial(c, Monomial::ONE)
    }

    pub fn generator(g: Generator) -> AbstractExpr {
        AbstractExpr::monomial(BigRational::one(), Monomial::new(false, Word::letter(g), 0))
    }

    pub fn beta() -> AbstractExpr {
        AbstractExpr::monomial(BigRational::one(), Monomial::new(true, Word::EMPTY, 0))
    }

    pub fn mass_power(k: i32) -> AbstractExpr {
        AbstractExpr::monomial(BigRational::one(), Monomial::new(false, Word::EMPTY, k))
    }

    /// `β m + E + O`.
    pub fn dirac_hamiltonian() -> AbstractExpr {
        let mut h = AbstractExpr::monomial(BigRational::one(), Monomial::new(true, Word::EMPTY, 1));
        h += &AbstractExpr::generator(Generator::E);
        h += &AbstractExpr::generator(Generator::O);
        h
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> AbstractExpr {
        let mut e = AbstractExpr::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> Vec<AbstractTerm> {
        self.terms
            .iter()
            .map(|(m, c)| AbstractTerm {
                coeff: c.clone(),
                monomial: *m,
            })
            .collect()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> AbstractExpr {
        if c.is_zero() {
            return AbstractExpr::zero();
        }
        AbstractExpr {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Multiplies every term by `m^k`.
    pub fn shift_mass(&self, k: i32) -> AbstractExpr {
        AbstractExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    (
                        Monomial {
                            m_exp: m.m_exp + k,
                            ..*m
                        },
                        v.clone(),
                    )
                })
                .collect(),
        }
    }

    /// `β · self`.
    pub fn beta_left(&self) -> AbstractExpr {
        AbstractExpr::beta().mul_budget(self, &Budget::UNBOUNDED)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> AbstractExpr {
        AbstractExpr {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, budget: &Budget) -> AbstractExpr {
        self.filter(|m| budget.admits(&m.word))
    }

    /// Product truncated to `budget`; pairs whose concatenation would leave
    /// the budget are skipped before multiplying coefficients.
    pub fn mul_budget(&self, rhs: &AbstractExpr, budget: &Budget) -> AbstractExpr {
        let mut out = AbstractExpr::zero();
        for (ma, ca) in &self.terms {
            if !budget.admits(&ma.word) {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                if !budget.admits_pair(&ma.word, &mb.word) {
                    continue;
                }
                let (negate, m) = ma.mul(mb);
                let c = ca * cb;
                out.add_term(m, if negate { -c } else { c });
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &AbstractExpr, budget: &Budget) -> AbstractExpr {
        self.mul_budget(rhs, budget) - rhs.mul_budget(self, budget)
    }

    pub fn anticommutator(&self, rhs: &AbstractExpr, budget: &Budget) -> AbstractExpr {
        self.mul_budget(rhs, budget) + rhs.mul_budget(self, budget)
    }

    pub fn pow_budget(&self, n: u32, budget: &Budget) -> AbstractExpr {
        let mut acc = AbstractExpr::one().truncate(budget);
        for _ in 0..n {
            acc = acc.mul_budget(self, budget);
        }
        acc
    }

    /// Adjoint with `E`, `O`, `β`, `m` self-adjoint: every word is reversed.
    pub fn adjoint(&self) -> AbstractExpr {
        let mut out = AbstractExpr::zero();
        for (m, c) in &self.terms {
            let (negate, am) = m.adjoint();
            out.add_term(am, if negate { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Partition by `(E-count, O-count)`.
    pub fn classify(&self) -> BTreeMap<(usize, usize), AbstractExpr> {
        let mut out: BTreeMap<(usize, usize), AbstractExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.word.class())
                .or_default()
                .terms
                .insert(*m, c.clone());
        }
        out
    }

    pub fn class(&self, e: usize, o: usize) -> AbstractExpr {
        self.filter(|m| m.word.class() == (e, o))
    }

    /// `true` when every term has an even number of `O` letters.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| !m.word.is_odd())
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.word.is_odd())
    }

    pub fn is_self_adjoint(&self) -> bool {
        &self.adjoint() == self
    }

    /// The common value of `wordLen + mExp`, if all terms share one.
    /// The zero expression is homogeneous of every degree and returns `None`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Keeps terms with `m_exp >= -k_max`.
    pub fn inverse_mass_truncate(&self, k_max: i32) -> AbstractExpr {
        self.filter(|m| m.m_exp >= -k_max)
    }

    pub fn constant_term(&self) -> Option<&BigRational> {
        self.terms
            .iter()
            .find(|(m, _)| m.word.is_empty() && !m.beta)
            .map(|(_, c)| c)
    }

    pub fn min_word_len(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.word.len()).min()
    }

    /// Canonical text: `<coeff> m^<k> [beta] <letters>` joined by ` + ` / ` - `.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AbstractExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            write!(f, "{} {}", c.abs(), m)?;
        }
        Ok(())
    }
}

impl fmt::Display for AbstractTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.coeff, self.monomial)
    }
}

impl std::ops::AddAssign<&AbstractExpr> for AbstractExpr {
    fn add_assign(&mut self, rhs: &AbstractExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl std::ops::SubAssign<&AbstractExpr> for AbstractExpr {
    fn sub_assign(&mut self, rhs: &AbstractExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for AbstractExpr {
    type Output = AbstractExpr;
    fn add(mut self, rhs: AbstractExpr) -> AbstractExpr {
        self += &rhs;
        self
    }
}

impl Add<&AbstractExpr> for &AbstractExpr {
    type Output = AbstractExpr;
    fn add(self, rhs: &AbstractExpr) -> AbstractExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for AbstractExpr {
    type Output = AbstractExpr;
    fn sub(mut self, rhs: AbstractExpr) -> AbstractExpr {
        self -= &rhs;
        self
    }
}

impl Sub<&AbstractExpr> for &AbstractExpr {
    type Output = AbstractExpr;
    fn sub(self, rhs: &AbstractExpr) -> AbstractExpr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for AbstractExpr {
    type Output = AbstractExpr;
    fn neg(self) -> AbstractExpr {
        AbstractExpr {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul<&AbstractExpr> for &AbstractExpr {
    type Output = AbstractExpr;
    /// Untruncated product; panics if a word would exceed 64 letters.
    fn mul(self, rhs: &AbstractExpr) -> AbstractExpr {
        self.mul_budget(rhs, &Budget::UNBOUNDED)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn word_expr(pairs: &[(i64, &str)]) -> AbstractExpr {
        AbstractExpr::from_terms(
            pairs
                .iter()
                .map(|(c, s)| (Monomial::new(false, w(s), 0), int(*c))),
        )
    }

    fn e() -> AbstractExpr {
        AbstractExpr::generator(Generator::E)
    }

    fn o() -> AbstractExpr {
        AbstractExpr::generator(Generator::O)
    }

    #[test]
    fn beta_anticommutes_with_odd_word() {
        let bo = AbstractExpr::beta().mul_budget(&o(), &Budget::UNBOUNDED);
        let be = AbstractExpr::beta().mul_budget(&e(), &Budget::UNBOUNDED);
        let prod = &bo * &be;
        assert_eq!(
            prod,
            AbstractExpr::monomial(int(-1), Monomial::new(false, w("OE"), 0))
        );
    }

    #[test]
    fn beta_squared_is_one() {
        let a = AbstractExpr::monomial(int(1), Monomial::new(true, Word::EMPTY, 1));
        let b = AbstractExpr::monomial(int(1), Monomial::new(true, Word::EMPTY, -1));
        assert_eq!(&a * &b, AbstractExpr::one());
    }

    #[test]
    fn square_of_sum_distributes() {
        let s = e() + o();
        let sq = &s * &s;
        assert_eq!(sq, word_expr(&[(1, "EE"), (1, "EO"), (1, "OE"), (1, "OO")]));
    }

    #[test]
    fn bracket_examples() {
        let b = Budget::UNBOUNDED;
        assert!(e().commutator(&e(), &b).is_zero());
        let oe = o().commutator(&e(), &b);
        let ooe = o().commutator(&oe, &b);
        assert_eq!(ooe, word_expr(&[(1, "OOE"), (-2, "OEO"), (1, "EOO")]));
        let a22 = o().anticommutator(&oe.commutator(&e(), &b), &b);
        assert_eq!(
            a22,
            word_expr(&[
                (1, "OOEE"),
                (-2, "OEOE"),
                (2, "OEEO"),
                (-2, "EOEO"),
                (1, "EEOO")
            ])
        );
        let classes = a22.classify();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[&(2, 2)].len(), 5);
    }

    #[test]
    fn adjoint_examples() {
        let b = Budget::UNBOUNDED;
        assert_eq!(word_expr(&[(1, "OE")]).adjoint(), word_expr(&[(1, "EO")]));
        let c = o().commutator(&e(), &b);
        assert_eq!(c.adjoint(), -c.clone());
        let c2 = &c * &c;
        assert_eq!(c2.adjoint(), c2);
        // β O E: reversal gives E O β = -β E O.
        let boe = AbstractExpr::monomial(int(1), Monomial::new(true, w("OE"), 0));
        assert_eq!(
            boe.adjoint(),
            AbstractExpr::monomial(int(-1), Monomial::new(true, w("EO"), 0))
        );
    }

    #[test]
    fn classify_examples() {
        let h = AbstractExpr::dirac_hamiltonian();
        let c = h.classify();
        assert_eq!(c.len(), 3);
        assert_eq!(
            c[&(0, 0)],
            AbstractExpr::monomial(int(1), Monomial::new(true, Word::EMPTY, 1))
        );
        assert_eq!(c[&(1, 0)], e());
        assert_eq!(c[&(0, 1)], o());
        assert!(AbstractExpr::zero().classify().is_empty());
    }

    #[test]
    fn truncation_drops_long_and_e_heavy_words() {
        let s = e() + o();
        let cube = s.pow_budget(3, &Budget::new(3, 1));
        // Words of length 3 with at most one E: OOO, EOO, OEO, OOE.
        assert_eq!(cube.len(), 4);
        assert!(cube.iter().all(|(m, _)| m.word.e_count() <= 1));
    }

    #[test]
    fn format_canonical() {
        let x = AbstractExpr::from_terms([
            (Monomial::new(true, w("OO"), -1), rat(1, 2)),
            (Monomial::new(false, w("E"), 0), int(1)),
            (Monomial::new(true, Word::EMPTY, 1), int(1)),
            (Monomial::new(true, w("OOOO"), -3), rat(-1, 8)),
        ]);
        assert_eq!(
            x.format(),
            "1 m^0 E + 1 m^1 beta + 1/2 m^-1 beta O O - 1/8 m^-3 beta O O O O"
        );
        assert_eq!(AbstractExpr::zero().format(), "0");
    }

    #[test]
    fn mass_truncation() {
        let x = AbstractExpr::from_terms([
            (Monomial::new(true, Word::EMPTY, 1), int(1)),
            (Monomial::new(true, w("OO"), -1), rat(1, 2)),
            (Monomial::new(true, w("OOOO"), -3), rat(-1, 8)),
        ]);
        assert_eq!(x.inverse_mass_truncate(0).len(), 1);
        assert_eq!(x.inverse_mass_truncate(1).len(), 2);
        assert_eq!(x.inverse_mass_truncate(3), x);
    }
}
