//! Closed-form Landau spectra at zero longitudinal momentum.

use crate::model::{Params, Particle, SpectralModel};

/// One closed-form level `sign · E(n, λ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub n: usize,
    pub lambda: i32,
    pub sign: i32,
    pub value: f64,
}

/// Spin-0: `√(m² + (2n+1)|e|ℏB)`.
pub fn spin0(p: &Params, n: usize) -> f64 {
    (p.m * p.m + (2 * n + 1) as f64 * (p.e * p.hbar * p.b).abs()).sqrt()
}

/// Spin-1/2: `√(m² + (2n+1)|e|ℏB − λeℏB) − λμ′B`.
pub fn spin12(p: &Params, n: usize, lambda: i32) -> Option<f64> {
    let l = lambda as f64;
    let ebh = p.e * p.hbar * p.b;
    let r = p.m * p.m + (2 * n + 1) as f64 * ebh.abs() - l * ebh;
    (r > 0.0).then(|| r.sqrt() - l * p.mu_prime_half() * p.b)
}

/// Spin-1: `√(m² + (2n+1)|e|ℏB − 2λeℏB) − λeℏ(g−2)B/2m`; exact for `g = 2`.
pub fn spin1(p: &Params, n: usize, lambda: i32) -> Option<f64> {
    let l = lambda as f64;
    let ebh = p.e * p.hbar * p.b;
    let r = p.m * p.m + (2 * n + 1) as f64 * ebh.abs() - 2.0 * l * ebh;
    (r > 0.0).then(|| r.sqrt() - l * p.amm_spin1() * p.b)
}

/// Every closed-form level with `n < levels`, both energy signs, sorted by value.
pub fn levels(model: &SpectralModel) -> Vec<Level> {
    let p = &model.params;
    let mut out = Vec::new();
    for n in 0..model.levels {
        let per_lambda: Vec<(i32, Option<f64>)> = match model.particle {
            Particle::Spin0 => vec![(0, Some(spin0(p, n)))],
            Particle::Spin12 => [-1, 1].iter().map(|&l| (l, spin12(p, n, l))).collect(),
            Particle::Spin1 => [-1, 0, 1].iter().map(|&l| (l, spin1(p, n, l))).collect(),
        };
        for (lambda, value) in per_lambda {
            if let Some(v) = value {
                for sign in [1, -1] {
                    out.push(Level {
                        n,
                        lambda,
                        sign,
                        value: sign as f64 * v,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    out
}

/// Nearest closed-form level to `x`; ties go to the lower `n`.
pub fn nearest(levels: &[Level], x: f64) -> Option<Level> {
    let k = levels.partition_point(|l| l.value < x);
    let lo = k.saturating_sub(2);
    let hi = (k + 2).min(levels.len());
    levels[lo..hi]
        .iter()
        .copied()
        .min_by(|a, b| {
            let (da, db) = ((a.value - x).abs(), (b.value - x).abs());
            da.total_cmp(&db).then(a.n.cmp(&b.n))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin12_ground_state_is_rest_mass() {
        let p = Params {
            b: 0.5,
            ..Params::default()
        };
        assert_eq!(spin12(&p, 0, 1), Some(1.0));
    }

    #[test]
    fn nearest_prefers_closest() {
        let p = Params::default();
        let m = SpectralModel::new(Particle::Spin0, crate::model::Representation::Fw, p, 8);
        let ls = levels(&m);
        let l = nearest(&ls, spin0(&p, 3) + 1e-9).unwrap();
        assert_eq!((l.n, l.sign), (3, 1));
    }
}
