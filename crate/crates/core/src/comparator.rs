//! Term-by-term comparison of two Hamiltonians in a bracket basis.
//!
//! For each letter class `(e, o)` a basis of bracket monomials is grown from
//! the atoms `E`, `O`, `O²` by commutators, anticommutators and products of
//! lower-class basis elements. Candidates are admitted highest ℏ-order first,
//! so the span of kept elements of order `>= k` equals the span of *all*
//! bracket monomials of order `>= k`. A projection onto this basis is unique,
//! and the smallest order carrying a nonzero coefficient is the true minimum
//! ℏ-order of the projected word sum.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num::{BigRational, Zero};
use serde::Serialize;

use crate::ncalg::{parse_expr, AbstractExpr, BracketExpr, Budget, Generator, Monomial, Word};

/// Brackets that appear in the published formulas, preferred when orders tie.
const PREFERRED: &[&str] = &[
    "comm(O,comm(O,E))",
    "comm(pow(O,2),E)",
    "comm(pow(O,2),comm(pow(O,2),E))",
    "comm(pow(O,2),comm(O,E))",
    "comm(comm(O,E),E)",
    "comm(comm(pow(O,2),E),E)",
    "pow(comm(O,E),2)",
    "pow(comm(pow(O,2),E),2)",
    "acomm(pow(O,2),pow(comm(O,E),2))",
    "acomm(pow(O,2),comm(comm(pow(O,2),E),E))",
    "acomm(pow(O,2),comm(pow(O,2),comm(pow(O,2),E)))",
    "acomm(pow(O,2),comm(O,comm(O,E)))",
    "comm(pow(O,2),comm(pow(O,2),comm(O,comm(O,E))))",
    "comm(O,comm(comm(comm(O,E),E),E))",
    "comm(O,comm(O,comm(comm(pow(O,2),E),E)))",
    "comm(comm(O,comm(O,comm(pow(O,2),E))),E)",
    "comm(pow(O,2),comm(O,comm(comm(O,E),E)))",
];

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub bracket: BracketExpr,
    pub text: String,
    pub order: u32,
    pub class: (usize, usize),
    pub expansion: AbstractExpr,
}

/// A dependent candidate written in terms of kept elements of the same class.
#[derive(Clone, Debug)]
pub struct Dependency {
    pub text: String,
    pub order: u32,
    /// `(index into the class basis, coefficient)`.
    pub combination: Vec<(usize, BigRational)>,
}

/// Exact row-echelon form with each row tracked as a combination of kept elements.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>, Vec<BigRational>)>,
    kept: usize,
}

impl Echelon {
    /// Reduces `v`; returns the residual and the coefficients over kept elements.
    fn reduce(&self, mut v: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut coeffs = vec![BigRational::zero(); self.kept];
        for (pivot, row, combo) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = &v[*pivot] / &row[*pivot];
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
            for (c, t) in coeffs.iter_mut().zip(combo) {
                if !t.is_zero() {
                    *c += &f * t;
                }
            }
        }
        (v, coeffs)
    }

    /// Admits `v` when independent. On rejection returns its combination.
    fn admit(&mut self, v: Vec<BigRational>) -> Result<(), Vec<BigRational>> {
        let (residual, coeffs) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !x.is_zero()) else {
            return Err(coeffs);
        };
        let k = self.kept;
        self.kept += 1;
        for (_, _, combo) in self.rows.iter_mut() {
            combo.push(BigRational::zero());
        }
        let mut combo: Vec<BigRational> = coeffs.into_iter().map(|c| -c).collect();
        combo.push(BigRational::from_integer(1.into()));
        debug_assert_eq!(combo.len(), k + 1);
        self.rows.push((pivot, residual, combo));
        Ok(())
    }

    fn full_rank(&self, dim: usize) -> bool {
        self.kept == dim
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassBasis {
    pub words: Vec<Word>,
    pub elements: Vec<BasisElement>,
    pub dependencies: Vec<Dependency>,
    echelon: Echelon,
}

impl ClassBasis {
    fn index(&self) -> HashMap<Word, usize> {
        self.words.iter().enumerate().map(|(i, w)| (*w, i)).collect()
    }

    /// Coefficient vector of a β-free, mass-free word sum in this class.
    fn vector(&self, x: &AbstractExpr) -> Vec<BigRational> {
        let idx = self.index();
        let mut v = vec![BigRational::zero(); self.words.len()];
        for (m, c) in x.iter() {
            v[idx[&m.word]] += c;
        }
        v
    }
}

/// `BracketBasis`, grown lazily class by class.
#[derive(Clone, Debug)]
pub struct BracketBasis {
    pub budget: Budget,
    classes: BTreeMap<(usize, usize), ClassBasis>,
}

fn class_words(e: usize, o: usize) -> Vec<Word> {
    let n = e + o;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << n) {
        if bits.count_ones() as usize == o {
            out.push(Word::from_letters((0..n).map(|i| {
                if (bits >> (n - 1 - i)) & 1 == 1 {
                    Generator::O
                } else {
                    Generator::E
                }
            })));
        }
    }
    out.sort();
    out
}

fn flat_product(a: &BracketExpr, b: &BracketExpr) -> BracketExpr {
    let mut fs = Vec::new();
    for x in [a, b] {
        match x {
            BracketExpr::Product(inner) => fs.extend(inner.iter().cloned()),
            other => fs.push(other.clone()),
        }
    }
    BracketExpr::Product(fs)
}

impl BracketBasis {
    /// `buildBasis`: every class admitted by `budget`, excluding the empty word.
    pub fn build(budget: &Budget) -> BracketBasis {
        let mut b = BracketBasis::empty(budget);
        for len in 1..=budget.max_word_len {
            for e in 0..=len.min(budget.max_e_count) {
                b.ensure(e, len - e);
            }
        }
        b
    }

    /// A basis whose classes are built on first use.
    pub fn empty(budget: &Budget) -> BracketBasis {
        BracketBasis {
            budget: *budget,
            classes: BTreeMap::new(),
        }
    }

    pub fn class(&self, e: usize, o: usize) -> Option<&ClassBasis> {
        self.classes.get(&(e, o))
    }

    pub fn classes(&self) -> impl Iterator<Item = (&(usize, usize), &ClassBasis)> {
        self.classes.iter()
    }

    pub fn elements(&self) -> impl Iterator<Item = &BasisElement> {
        self.classes.values().flat_map(|c| c.elements.iter())
    }

    pub fn find(&self, text: &str) -> Option<&BasisElement> {
        self.elements().find(|x| x.text == text)
    }

    pub fn dependency(&self, text: &str) -> Option<(&ClassBasis, &Dependency)> {
        self.classes
            .values()
            .find_map(|c| c.dependencies.iter().find(|d| d.text == text).map(|d| (c, d)))
    }

    pub fn ensure(&mut self, e: usize, o: usize) -> &ClassBasis {
        if !self.classes.contains_key(&(e, o)) {
            let cb = self.grow(e, o);
            self.classes.insert((e, o), cb);
        }
        &self.classes[&(e, o)]
    }

    fn grow(&mut self, e: usize, o: usize) -> ClassBasis {
        let n = e + o;
        assert!(n >= 1, "the empty class has no bracket basis");
        let mut candidates: Vec<BracketExpr> = Vec::new();
        match (e, o) {
            (1, 0) => candidates.push(BracketExpr::e()),
            (0, 1) => candidates.push(BracketExpr::o()),
            _ => {}
        }
        if (e, o) == (0, 2) {
            candidates.push(BracketExpr::o2());
        }
        for text in PREFERRED {
            let b = parse_expr(text).expect("preferred bracket parses");
            if b.letter_counts() == (e, o) {
                candidates.push(b);
            }
        }
        let mut splits = Vec::new();
        for e1 in 0..=e {
            for o1 in 0..=o {
                let (e2, o2) = (e - e1, o - o1);
                if e1 + o1 == 0 || e2 + o2 == 0 {
                    continue;
                }
                splits.push(((e1, o1), (e2, o2)));
            }
        }
        for (c1, c2) in &splits {
            self.ensure(c1.0, c1.1);
            self.ensure(c2.0, c2.1);
        }
        for (c1, c2) in &splits {
            let a_list = &self.classes[c1].elements;
            let b_list = &self.classes[c2].elements;
            for (i, a) in a_list.iter().enumerate() {
                for (j, b) in b_list.iter().enumerate() {
                    candidates.push(flat_product(&a.bracket, &b.bracket));
                    if c1 < c2 || (c1 == c2 && i < j) {
                        candidates.push(BracketExpr::comm(a.bracket.clone(), b.bracket.clone()));
                    }
                    if c1 < c2 || (c1 == c2 && i <= j) {
                        candidates.push(BracketExpr::acomm(a.bracket.clone(), b.bracket.clone()));
                    }
                }
            }
        }

        let preferred_rank = |t: &str| PREFERRED.iter().position(|p| *p == t).unwrap_or(usize::MAX);
        let mut seen = HashSet::new();
        let mut graded: Vec<(u32, usize, String, BracketExpr)> = candidates
            .into_iter()
            .filter_map(|b| {
                let text = b.to_string();
                if !seen.insert(text.clone()) {
                    return None;
                }
                let order = b.parity_and_order().order.expect("monomial brackets are graded");
                Some((order, preferred_rank(&text), text, b))
            })
            .collect();
        graded.sort_by(|x, y| {
            y.0.cmp(&x.0)
                .then(x.1.cmp(&y.1))
                .then(x.2.len().cmp(&y.2.len()))
                .then(x.2.cmp(&y.2))
        });

        let mut cb = ClassBasis {
            words: class_words(e, o),
            ..ClassBasis::default()
        };
        let dim = cb.words.len();
        for (order, _, text, bracket) in graded {
            if cb.echelon.full_rank(dim) {
                break;
            }
            let expansion = bracket
                .expand(&Budget::UNBOUNDED)
                .expect("monomial brackets expand without overflow");
            let v = cb.vector(&expansion);
            match cb.echelon.admit(v) {
                Ok(()) => cb.elements.push(BasisElement {
                    bracket,
                    text,
                    order,
                    class: (e, o),
                    expansion,
                }),
                Err(coeffs) => {
                    let combination = coeffs
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect();
                    cb.dependencies.push(Dependency {
                        text,
                        order,
                        combination,
                    });
                }
            }
        }
        cb
    }

    /// `project`: exact coefficients of `x` over the basis, plus the residual.
    ///
    /// Terms are grouped by `(class, β, m-power)`; each group is a word vector
    /// in its class and is solved independently.
    pub fn project(&mut self, x: &AbstractExpr) -> Projection {
        let mut groups: BTreeMap<((usize, usize), bool, i32), AbstractExpr> = BTreeMap::new();
        for (m, c) in x.iter() {
            groups
                .entry((m.word.class(), m.beta, m.m_exp))
                .or_default()
                .add_term(Monomial::new(false, m.word, 0), c.clone());
        }
        let mut terms = Vec::new();
        let mut residual = AbstractExpr::zero();
        for ((class, beta, m_exp), words) in groups {
            if class == (0, 0) {
                residual.add_term(Monomial::new(beta, Word::EMPTY, m_exp), words.coeff(&Monomial::ONE));
                continue;
            }
            let cb = self.ensure(class.0, class.1);
            let (rest, coeffs) = cb.echelon.reduce(cb.vector(&words));
            for (k, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    let el = &cb.elements[k];
                    terms.push(ProjectedTerm {
                        class,
                        beta,
                        m_exp,
                        text: el.text.clone(),
                        order: el.order,
                        coeff: c,
                    });
                }
            }
            for (i, c) in rest.into_iter().enumerate() {
                if !c.is_zero() {
                    residual.add_term(Monomial::new(beta, cb.words[i], m_exp), c);
                }
            }
        }
        Projection { terms, residual }
    }

    /// `Σ coeff · β^b m^k · expansion` over projected terms.
    pub fn reconstruct(&self, p: &Projection) -> AbstractExpr {
        let mut out = p.residual.clone();
        for t in &p.terms {
            let el = self
                .class(t.class.0, t.class.1)
                .and_then(|cb| cb.elements.iter().find(|e| e.text == t.text))
                .expect("projected element belongs to the basis");
            let mut piece = el.expansion.shift_mass(t.m_exp).scale(&t.coeff);
            if t.beta {
                piece = AbstractExpr::beta().mul_budget(&piece, &Budget::UNBOUNDED);
            }
            out += &piece;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedTerm {
    pub class: (usize, usize),
    pub beta: bool,
    pub m_exp: i32,
    pub text: String,
    pub order: u32,
    pub coeff: BigRational,
}

impl ProjectedTerm {
    pub fn bracket_text(&self) -> String {
        if self.beta {
            format!("beta*{}", self.text)
        } else {
            self.text.clone()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Projection {
    pub terms: Vec<ProjectedTerm>,
    pub residual: AbstractExpr,
}

impl Projection {
    pub fn min_order(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.order).min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassStatus {
    Identical,
    Differs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisTermReport {
    pub bracket_text: String,
    pub coeff: String,
    pub m_exp: i32,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDiff {
    pub e: usize,
    pub o: usize,
    pub status: ClassStatus,
    pub hbar_order_min: Option<u32>,
    pub basis_terms: Vec<BasisTermReport>,
    pub residual: Vec<String>,
    #[serde(skip)]
    pub difference: AbstractExpr,
    #[serde(skip)]
    pub projection: Projection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub budget: Budget,
    pub classes: Vec<ClassDiff>,
}

impl DiffReport {
    pub fn class(&self, e: usize, o: usize) -> Option<&ClassDiff> {
        self.classes.iter().find(|c| (c.e, c.o) == (e, o))
    }

    /// Every nonzero difference has minimum ℏ-order of at least `k`.
    pub fn differences_at_least(&self, k: u32) -> bool {
        self.classes
            .iter()
            .filter(|c| c.status == ClassStatus::Differs)
            .all(|c| c.hbar_order_min.is_some_and(|o| o >= k) && c.residual.is_empty())
    }

    /// Plain-text table, one row per class.
    pub fn to_text(&self, left: &str, right: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{left} - {right} at budget {}", self.budget);
        let _ = writeln!(s, "{:>6}  {:<10}  {:>9}  leading brackets", "class", "status", "min order");
        for c in &self.classes {
            let order = c.hbar_order_min.map_or("-".to_string(), |o| o.to_string());
            let status = match c.status {
                ClassStatus::Identical => "identical",
                ClassStatus::Differs => "differs",
            };
            let _ = writeln!(s, "{:>6}  {:<10}  {:>9}  ", format!("({},{})", c.e, c.o), status, order);
            for t in &c.basis_terms {
                let _ = writeln!(s, "{:>32} m^{} {}  [order {}]", t.coeff, t.m_exp, t.bracket_text, t.order);
            }
            for r in &c.residual {
                let _ = writeln!(s, "{:>32} (unexplained)", r);
            }
        }
        s
    }
}

/// `diffReport`: classes present in either operand, differences projected.
pub fn diff_report(left: &AbstractExpr, right: &AbstractExpr, budget: &Budget) -> DiffReport {
    let mut basis = BracketBasis::empty(budget);
    diff_report_with(&mut basis, left, right)
}

pub fn diff_report_with(basis: &mut BracketBasis, left: &AbstractExpr, right: &AbstractExpr) -> DiffReport {
    let lc = left.classify();
    let rc = right.classify();
    let keys: std::collections::BTreeSet<(usize, usize)> = lc.keys().chain(rc.keys()).copied().collect();
    let mut classes = Vec::new();
    for (e, o) in keys {
        let zero = AbstractExpr::zero();
        let difference = lc.get(&(e, o)).unwrap_or(&zero) - rc.get(&(e, o)).unwrap_or(&zero);
        let projection = basis.project(&difference);
        classes.push(ClassDiff {
            e,
            o,
            status: if difference.is_zero() {
                ClassStatus::Identical
            } else {
                ClassStatus::Differs
            },
            hbar_order_min: projection.min_order(),
            basis_terms: projection
                .terms
                .iter()
                .map(|t| BasisTermReport {
                    bracket_text: t.bracket_text(),
                    coeff: t.coeff.to_string(),
                    m_exp: t.m_exp,
                    order: t.order,
                })
                .collect(),
            residual: projection.residual.terms().iter().map(|t| t.to_string()).collect(),
            difference,
            projection,
        });
    }
    DiffReport {
        budget: basis.budget,
        classes,
    }
}
