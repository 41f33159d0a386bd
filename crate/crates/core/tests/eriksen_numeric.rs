//! Independent numerical check of the exact Eriksen expansion.
//!
//! `E` and `O` become random real symmetric block matrices with `β = diag(1, −1)`.
//! `U H U†` is built from matrix square roots for complex `(s, t)` on a circle,
//! and the `s^e t^o` Taylor coefficient is extracted by a discrete contour
//! average. It must equal the engine's `(e, o)` class evaluated on the same matrices.

use std::f64::consts::PI;

use fwforge_core::eriksen::eriksen_hamiltonian;
use fwforge_core::ncalg::{AbstractExpr, Budget, Generator};
use fwforge_core::targets::Target;
use nalgebra::{Complex, DMatrix};
use num::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type C = Complex<f64>;
type M = DMatrix<C>;

const HALF: usize = 3;
const DIM: usize = 2 * HALF;
const MASS: f64 = 1.0;
const GRID: usize = 24;
const RADIUS: f64 = 0.25;

struct Setup {
    beta: DMatrix<f64>,
    e: DMatrix<f64>,
    o: DMatrix<f64>,
}

impl Setup {
    fn random(seed: u64) -> Setup {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut sym = |n: usize| {
            let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-0.5..0.5));
            (&a + a.transpose()) * 0.5
        };
        let (a, b) = (sym(HALF), sym(HALF));
        let mut rng2 = StdRng::seed_from_u64(seed ^ 0x5eed);
        let c = DMatrix::<f64>::from_fn(HALF, HALF, |_, _| rng2.gen_range(-0.5..0.5));
        let mut e = DMatrix::zeros(DIM, DIM);
        let mut o = DMatrix::zeros(DIM, DIM);
        e.view_mut((0, 0), (HALF, HALF)).copy_from(&a);
        e.view_mut((HALF, HALF), (HALF, HALF)).copy_from(&b);
        o.view_mut((0, HALF), (HALF, HALF)).copy_from(&c);
        o.view_mut((HALF, 0), (HALF, HALF)).copy_from(&c.transpose());
        let beta = DMatrix::from_fn(DIM, DIM, |i, j| match (i == j, i < HALF) {
            (false, _) => 0.0,
            (true, true) => 1.0,
            (true, false) => -1.0,
        });
        Setup { beta, e, o }
    }

    /// Value of an abstract expression with `E`, `O`, `β`, `m` substituted.
    fn evaluate(&self, x: &AbstractExpr) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(DIM, DIM);
        for (mono, c) in x.iter() {
            let mut w = DMatrix::<f64>::identity(DIM, DIM);
            if mono.beta {
                w = &self.beta * w;
            }
            for g in mono.word.letters() {
                w = match g {
                    Generator::E => w * &self.e,
                    Generator::O => w * &self.o,
                };
            }
            out += w * (c.to_f64().unwrap() * MASS.powi(mono.m_exp));
        }
        out
    }
}

fn complexify(a: &DMatrix<f64>) -> M {
    a.map(|x| C::new(x, 0.0))
}

/// `(A^{1/2}, A^{-1/2})` by the Denman–Beavers iteration.
fn sqrt_pair(a: &M) -> (M, M) {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = M::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().expect("invertible iterate");
        let zi = z.clone().try_inverse().expect("invertible iterate");
        let y1 = (&y + zi).scale(0.5);
        let z1 = (&z + yi).scale(0.5);
        let delta = (&y1 - &y).norm();
        y = y1;
        z = z1;
        if delta < 1e-15 * y.norm() {
            break;
        }
    }
    (y, z)
}

/// `U H U^T` for `H = βm + sE + tO`; the transpose continues `U†` off the real axis.
fn transformed(setup: &Setup, s: C, t: C) -> M {
    let n = DIM;
    let one = M::identity(n, n);
    let beta = complexify(&setup.beta);
    let h = beta.scale(MASS) + complexify(&setup.e) * s + complexify(&setup.o) * t;
    let (_, inv_root) = sqrt_pair(&(&h * &h));
    let lambda = &h * inv_root;
    let bl = &beta * &lambda;
    let lb = &lambda * &beta;
    let k = &one + (&bl + &lb - one.scale(2.0)).scale(0.25);
    let (_, k_inv_root) = sqrt_pair(&k);
    let u = (&one + &bl) * k_inv_root * C::new(0.5, 0.0);
    &u * h * u.transpose()
}

/// Taylor coefficients `c[e][o]` of the transformed Hamiltonian in `(s, t)`.
fn taylor_grid(setup: &Setup, e_max: usize, o_max: usize) -> Vec<Vec<DMatrix<f64>>> {
    let node = |k: usize| C::from_polar(RADIUS, 2.0 * PI * k as f64 / GRID as f64);
    let values: Vec<Vec<M>> = (0..GRID)
        .map(|j| (0..GRID).map(|k| transformed(setup, node(j), node(k))).collect())
        .collect();
    (0..=e_max)
        .map(|e| {
            (0..=o_max)
                .map(|o| {
                    let mut acc = M::zeros(DIM, DIM);
                    for j in 0..GRID {
                        for k in 0..GRID {
                            let w = node(j).powi(-(e as i32)) * node(k).powi(-(o as i32));
                            acc += &values[j][k] * w;
                        }
                    }
                    let c = acc / C::new((GRID * GRID) as f64, 0.0);
                    assert!(c.map(|z| z.im.abs()).max() < 1e-10, "coefficient should be real");
                    c.map(|z| z.re)
                })
                .collect()
        })
        .collect()
}

fn relative(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(a.norm()).max(1e-300)
}

#[test]
fn exact_expansion_matches_matrix_transform() {
    let budget = Budget::new(8, 3);
    let h_fw = eriksen_hamiltonian(&budget).unwrap();
    let classes = h_fw.classify();
    for seed in [7u64, 19] {
        let setup = Setup::random(seed);
        let grid = taylor_grid(&setup, 3, 8);
        for e in 0..=3 {
            for o in 0..=8 {
                if e + o > 8 || e + o == 0 {
                    continue;
                }
                let oracle = &grid[e][o];
                let engine = classes
                    .get(&(e, o))
                    .map(|x| setup.evaluate(x))
                    .unwrap_or_else(|| DMatrix::zeros(DIM, DIM));
                // Rounding in the contour average grows like RADIUS^-(e+o).
                let tol = 1e-14 * RADIUS.powi(-((e + o) as i32));
                let err = (&engine - oracle).norm();
                assert!(err < tol, "seed {seed} class ({e}, {o}): error {err:e}, tolerance {tol:e}");
            }
        }
    }
}

#[test]
fn beta_m5_weights_decided_by_matrix_transform() {
    let budget = Budget::new(8, 3);
    let setup = Setup::random(31);
    let grid = taylor_grid(&setup, 2, 4);
    let oracle = &grid[2][4];
    let class = |t: Target| setup.evaluate(&t.bracket().expand(&budget).unwrap().class(2, 4));
    let published = relative(&class(Target::Eriksen), oracle);
    let corrected = relative(&class(Target::EriksenCorrected), oracle);
    assert!(corrected < 1e-8, "re-fitted weights: {corrected:e}");
    assert!(published > 1e-2, "published weights unexpectedly agree: {published:e}");
}
