//! Standard-representation Dirac matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num::{BigRational, Complex, One, Zero};

/// `a + bi` with exact rational parts.
pub type Gauss = Complex<BigRational>;

pub fn gauss(re: i64, im: i64) -> Gauss {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

pub fn gauss_rat(r: BigRational) -> Gauss {
    Complex::new(r, BigRational::zero())
}

pub fn format_gauss(z: &Gauss) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) if z.im.is_one() => "i".into(),
        (true, false) if z.im == -BigRational::one() => "-i".into(),
        (true, false) => format!("{}i", z.im),
        (false, false) => {
            let sign = if z.im < BigRational::zero() { "-" } else { "+" };
            format!("({} {} {}i)", z.re, sign, num::abs(z.im.clone()))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat4(pub [[Gauss; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Mat4 {
        Mat4(std::array::from_fn(|_| std::array::from_fn(|_| Gauss::zero())))
    }

    pub fn identity() -> Mat4 {
        Mat4::from_fn(|i, j| if i == j { Gauss::one() } else { Gauss::zero() })
    }

    pub fn from_fn<F: Fn(usize, usize) -> Gauss>(f: F) -> Mat4 {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    /// Entries given as `(re, im)` integer pairs, row-major.
    pub fn from_ints(rows: [[(i64, i64); 4]; 4]) -> Mat4 {
        Mat4::from_fn(|i, j| gauss(rows[i][j].0, rows[i][j].1))
    }

    /// `[[a, b], [c, d]]` from 2×2 blocks.
    pub fn blocks(a: &[[Gauss; 2]; 2], b: &[[Gauss; 2]; 2], c: &[[Gauss; 2]; 2], d: &[[Gauss; 2]; 2]) -> Mat4 {
        Mat4::from_fn(|i, j| {
            let blk = match (i < 2, j < 2) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[i % 2][j % 2].clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Gauss) -> Mat4 {
        Mat4::from_fn(|i, j| &self.0[i][j] * c)
    }

    pub fn dagger(&self) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> Gauss {
        (0..4).fold(Gauss::zero(), |acc, i| acc + &self.0[i][i])
    }

    pub fn commutator(&self, rhs: &Mat4) -> Mat4 {
        &(self * rhs) - &(rhs * self)
    }

    pub fn anticommutator(&self, rhs: &Mat4) -> Mat4 {
        &(self * rhs) + &(rhs * self)
    }

    /// Coefficients against [`basis`]; exact because the basis is orthogonal
    /// under `tr(A†B)` with norm 4.
    pub fn decompose(&self) -> [Gauss; 16] {
        let quarter = gauss_rat(BigRational::new(1.into(), 4.into()));
        std::array::from_fn(|k| (&basis()[k].1.dagger() * self).trace() * &quarter)
    }

    pub fn recompose(coeffs: &[Gauss; 16]) -> Mat4 {
        basis()
            .iter()
            .zip(coeffs)
            .fold(Mat4::zero(), |acc, ((_, b), c)| &acc + &b.scale(c))
    }

    /// Nonzero basis components as `(label, coefficient)`.
    pub fn components(&self) -> Vec<(&'static str, Gauss)> {
        self.decompose()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (basis()[k].0, c))
            .collect()
    }
}

impl Add for &Mat4 {
    type Output = Mat4;
    fn add(self, rhs: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| &self.0[i][j] + &rhs.0[i][j])
    }
}

impl Sub for &Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| &self.0[i][j] - &rhs.0[i][j])
    }
}

impl Neg for &Mat4 {
    type Output = Mat4;
    fn neg(self) -> Mat4 {
        Mat4::from_fn(|i, j| -self.0[i][j].clone())
    }
}

impl Mul for &Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| (0..4).fold(Gauss::zero(), |acc, k| acc + &self.0[i][k] * &rhs.0[k][j]))
    }
}

impl fmt::Display for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components()
            .iter()
            .map(|(l, c)| format!("{} {}", format_gauss(c), l))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn pauli(k: usize) -> [[Gauss; 2]; 2] {
    let z = || gauss(0, 0);
    match k {
        0 => [[z(), gauss(1, 0)], [gauss(1, 0), z()]],
        1 => [[z(), gauss(0, -1)], [gauss(0, 1), z()]],
        _ => [[gauss(1, 0), z()], [z(), gauss(-1, 0)]],
    }
}

fn zero2() -> [[Gauss; 2]; 2] {
    [[gauss(0, 0), gauss(0, 0)], [gauss(0, 0), gauss(0, 0)]]
}

fn unit2(s: i64) -> [[Gauss; 2]; 2] {
    [[gauss(s, 0), gauss(0, 0)], [gauss(0, 0), gauss(s, 0)]]
}

pub fn identity() -> Mat4 {
    Mat4::identity()
}

pub fn beta() -> Mat4 {
    Mat4::blocks(&unit2(1), &zero2(), &zero2(), &unit2(-1))
}

pub fn alpha(k: usize) -> Mat4 {
    Mat4::blocks(&zero2(), &pauli(k), &pauli(k), &zero2())
}

pub fn sigma(k: usize) -> Mat4 {
    Mat4::blocks(&pauli(k), &zero2(), &zero2(), &pauli(k))
}

/// `Π = βΣ`.
pub fn pi(k: usize) -> Mat4 {
    &beta() * &sigma(k)
}

/// `γ^k = βα_k`.
pub fn gamma(k: usize) -> Mat4 {
    &beta() * &alpha(k)
}

/// `γ⁵ = −iγ⁰γ¹γ²γ³`, which in this representation is `−[[0, 1], [1, 0]]`.
pub fn gamma5() -> Mat4 {
    let g = &(&(&beta() * &gamma(0)) * &gamma(1)) * &gamma(2);
    g.scale(&gauss(0, -1))
}

pub const AXES: [&str; 3] = ["x", "y", "z"];

/// The fixed 16-element reduction basis with display labels.
pub fn basis() -> &'static [(&'static str, Mat4); 16] {
    static BASIS: OnceLock<[(&'static str, Mat4); 16]> = OnceLock::new();
    BASIS.get_or_init(|| {
        [
            ("1", identity()),
            ("beta", beta()),
            ("gamma5", gamma5()),
            ("beta*gamma5", &beta() * &gamma5()),
            ("alpha_x", alpha(0)),
            ("alpha_y", alpha(1)),
            ("alpha_z", alpha(2)),
            ("Sigma_x", sigma(0)),
            ("Sigma_y", sigma(1)),
            ("Sigma_z", sigma(2)),
            ("Pi_x", pi(0)),
            ("Pi_y", pi(1)),
            ("Pi_z", pi(2)),
            ("gamma_x", gamma(0)),
            ("gamma_y", gamma(1)),
            ("gamma_z", gamma(2)),
        ]
    })
}

/// Levi-Civita symbol on axis indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}
