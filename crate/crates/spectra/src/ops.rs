//! Sparse complex operators on the truncated (Landau ⊗ internal) basis.

use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num::complex::Complex64;
use num::Zero;

pub type C = Complex64;
pub type Op = CsrMatrix<C>;

pub const I: C = C::new(0.0, 1.0);

pub fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Builds an `n × n` operator, summing duplicate entries and dropping exact zeros.
pub fn from_triplets(n: usize, entries: impl IntoIterator<Item = (usize, usize, C)>) -> Op {
    let mut coo = CooMatrix::new(n, n);
    for (i, j, v) in entries {
        if !v.is_zero() {
            coo.push(i, j, v);
        }
    }
    let summed = CsrMatrix::from(&coo);
    if summed.values().iter().all(|v| !v.is_zero()) {
        return summed;
    }
    let mut kept = CooMatrix::new(n, n);
    for (i, j, v) in summed.triplet_iter() {
        if !v.is_zero() {
            kept.push(i, j, *v);
        }
    }
    CsrMatrix::from(&kept)
}

pub fn zero(n: usize) -> Op {
    CsrMatrix::zeros(n, n)
}

pub fn identity(n: usize) -> Op {
    diagonal((0..n).map(|_| re(1.0)))
}

pub fn diagonal(values: impl IntoIterator<Item = C>) -> Op {
    let values: Vec<C> = values.into_iter().collect();
    let n = values.len();
    from_triplets(n, values.into_iter().enumerate().map(|(i, v)| (i, i, v)))
}

/// Small dense matrix given row by row.
pub fn dense<const K: usize>(rows: [[C; K]; K]) -> Op {
    from_triplets(
        K,
        rows.iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, *v))),
    )
}

pub fn triplets(a: &Op) -> impl Iterator<Item = (usize, usize, C)> + '_ {
    a.triplet_iter().map(|(i, j, v)| (i, j, *v))
}

/// Kronecker product `a ⊗ b`; the index of `a` is the slow one.
pub fn kron(a: &Op, b: &Op) -> Op {
    let nb = b.nrows();
    let n = a.nrows() * nb;
    let mut entries = Vec::with_capacity(a.nnz() * b.nnz());
    for (i, j, x) in triplets(a) {
        for (k, l, y) in triplets(b) {
            entries.push((i * nb + k, j * nb + l, x * y));
        }
    }
    from_triplets(n, entries)
}

pub fn adjoint(a: &Op) -> Op {
    from_triplets(a.nrows(), triplets(a).map(|(i, j, v)| (j, i, v.conj())))
}

pub fn scale(a: &Op, c: C) -> Op {
    from_triplets(a.nrows(), triplets(a).map(|(i, j, v)| (i, j, v * c)))
}

pub fn add(a: &Op, b: &Op) -> Op {
    from_triplets(a.nrows(), triplets(a).chain(triplets(b)))
}

pub fn sub(a: &Op, b: &Op) -> Op {
    from_triplets(a.nrows(), triplets(a).chain(triplets(b).map(|(i, j, v)| (i, j, -v))))
}

pub fn mul(a: &Op, b: &Op) -> Op {
    let p = a * b;
    from_triplets(p.nrows(), triplets(&p))
}

pub fn sum(n: usize, terms: &[Op]) -> Op {
    from_triplets(n, terms.iter().flat_map(triplets))
}

pub fn commutator(a: &Op, b: &Op) -> Op {
    sub(&mul(a, b), &mul(b, a))
}

pub fn anticommutator(a: &Op, b: &Op) -> Op {
    add(&mul(a, b), &mul(b, a))
}

/// Largest entry modulus.
pub fn max_abs(a: &Op) -> f64 {
    a.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `max |A − A†| / max |A|`, zero for the zero operator.
pub fn hermiticity_defect(a: &Op) -> f64 {
    let scale = max_abs(a);
    if scale == 0.0 {
        return 0.0;
    }
    max_abs(&sub(a, &adjoint(a))) / scale
}

/// Restriction to rows and columns whose index satisfies `keep`.
pub fn restrict(a: &Op, keep: impl Fn(usize) -> bool) -> Op {
    from_triplets(a.nrows(), triplets(a).filter(|(i, j, _)| keep(*i) && keep(*j)))
}

/// Ladder operators for the transverse kinetic momentum in a field along z.
///
/// With `κ = sign(eB)` and `a = (π_x + iκπ_y)/√(2|e|ℏB)`, the kinetic
/// momenta are `π_x = s(a + a†)` and `π_y = −iκ s(a − a†)` with
/// `s = √(|e|ℏB/2)`, and `π² = |e|ℏB(2a†a + 1)`.
#[derive(Clone, Copy, Debug)]
pub struct Landau {
    pub levels: usize,
    pub kappa: f64,
    /// `|e|ℏB`.
    pub quantum: f64,
}

impl Landau {
    pub fn new(levels: usize, e: f64, hbar: f64, b: f64) -> Landau {
        let kappa = if e * b < 0.0 { -1.0 } else { 1.0 };
        Landau {
            levels,
            kappa,
            quantum: (e * hbar * b).abs(),
        }
    }

    pub fn lowering(&self) -> Op {
        from_triplets(
            self.levels,
            (1..self.levels).map(|n| (n - 1, n, re((n as f64).sqrt()))),
        )
    }

    fn s(&self) -> f64 {
        (self.quantum / 2.0).sqrt()
    }

    pub fn pi_x(&self) -> Op {
        let a = self.lowering();
        scale(&add(&a, &adjoint(&a)), re(self.s()))
    }

    pub fn pi_y(&self) -> Op {
        let a = self.lowering();
        scale(&sub(&a, &adjoint(&a)), -I * self.kappa * self.s())
    }

    /// Exact diagonal `π²`, free of truncation error at the top level.
    pub fn pi_sq(&self) -> Op {
        diagonal((0..self.levels).map(|n| re(self.quantum * (2 * n + 1) as f64)))
    }
}

/// Pauli matrices, index 0 to 2 for x, y, z.
pub fn pauli(k: usize) -> Op {
    let (o, l) = (C::zero(), re(1.0));
    match k {
        0 => dense([[o, l], [l, o]]),
        1 => dense([[o, -I], [I, o]]),
        _ => dense([[l, o], [o, -l]]),
    }
}

/// Spin-1 matrices in the `S_z` eigenbasis ordered `+1, 0, −1`.
pub fn spin1(k: usize) -> Op {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (o, h) = (C::zero(), re(r));
    match k {
        0 => dense([[o, h, o], [h, o, h], [o, h, o]]),
        1 => dense([[o, -I * r, o], [I * r, o, -I * r], [o, I * r, o]]),
        _ => diagonal([re(1.0), C::zero(), re(-1.0)]),
    }
}

/// Dirac matrices in the standard representation, index `(block, spin)`.
pub mod dirac {
    use super::*;

    pub fn beta() -> Op {
        kron(&pauli(2), &identity(2))
    }

    pub fn alpha(k: usize) -> Op {
        kron(&pauli(0), &pauli(k))
    }

    pub fn sigma(k: usize) -> Op {
        kron(&identity(2), &pauli(k))
    }
}
