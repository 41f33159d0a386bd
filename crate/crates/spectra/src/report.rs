//! Diagonalization reports, closed-form matching and parameter scans.

use serde::Serialize;

use crate::closed_form::{self, Level};
use crate::eigen::{eigenpairs, Eigenpair};
use crate::model::{ModelError, Params, Particle, Representation, SpectralModel};
use crate::ops::{self, hermiticity_defect, Op};

/// Eigenvector weight allowed on the top Landau indices of an interior state.
pub const EDGE_WEIGHT: f64 = 1e-8;
/// Relative residual above which an interior eigenvalue counts as unmatched.
pub const MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("only {found} interior eigenvalues at N = {levels}, {needed} needed; increase N")]
    InsufficientInterior { needed: usize, found: usize, levels: usize },
    #[error("scan needs at least two positive points spanning a decade")]
    BadScan,
}

/// Diagonalized model with the interior mask.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub model: SpectralModel,
    pub pairs: Vec<Eigenpair>,
    pub interior: Vec<bool>,
    pub hermiticity_defect: f64,
}

impl Spectrum {
    pub fn solve(model: &SpectralModel) -> Result<Spectrum, SpectraError> {
        let h = model.build()?;
        Ok(Spectrum::from_matrix(model, &h))
    }

    pub fn from_matrix(model: &SpectralModel, h: &Op) -> Spectrum {
        let defect = hermiticity_defect(h);
        let mut pairs = eigenpairs(h, model.is_hermitian_form() && defect < 1e-12);
        pairs.sort_by(|a, b| a.value.re.total_cmp(&b.value.re));
        let top = model.levels - model.edge_width();
        let interior = pairs
            .iter()
            .map(|p| {
                let w: f64 = p
                    .vector
                    .iter()
                    .filter(|(i, _)| model.landau_index(*i) >= top)
                    .map(|(_, c)| c.norm_sqr())
                    .sum();
                w < EDGE_WEIGHT
            })
            .collect();
        Spectrum {
            model: *model,
            pairs,
            interior,
            hermiticity_defect: defect,
        }
    }

    /// Real parts of the interior eigenvalues, ascending.
    pub fn interior_values(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .zip(&self.interior)
            .filter(|(_, &k)| k)
            .map(|(p, _)| p.value.re)
            .collect()
    }

    pub fn max_interior_imag(&self) -> f64 {
        self.pairs
            .iter()
            .zip(&self.interior)
            .filter(|(_, &k)| k)
            .map(|(p, _)| p.value.im.abs())
            .fold(0.0, f64::max)
    }

    /// Lowest `count` positive interior eigenvalues.
    pub fn lowest_positive(&self, count: usize) -> Result<Vec<f64>, SpectraError> {
        let v: Vec<f64> = self.interior_values().into_iter().filter(|x| *x > 0.0).take(count).collect();
        if v.len() < count {
            return Err(SpectraError::InsufficientInterior {
                needed: count,
                found: v.len(),
                levels: self.model.levels,
            });
        }
        Ok(v)
    }

    fn expectation(&self, op: &Op, pair: &Eigenpair) -> f64 {
        let mut dense = vec![ops::C::new(0.0, 0.0); op.nrows()];
        for (i, c) in &pair.vector {
            dense[*i] = *c;
        }
        let mut acc = ops::C::new(0.0, 0.0);
        for (i, c) in &pair.vector {
            let row = op.row(*i);
            for (&j, v) in row.col_indices().iter().zip(row.values()) {
                acc += c.conj() * v * dense[j];
            }
        }
        acc.re
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenEntry {
    pub value: f64,
    pub imag_abs: f64,
    pub interior: bool,
    pub matched_n: Option<usize>,
    pub matched_lambda: Option<i32>,
    pub matched_sign: Option<i32>,
    /// Absolute distance to the matched closed-form level.
    pub residual: Option<f64>,
    pub relative_residual: Option<f64>,
    /// `⟨Σ_z⟩` or `⟨S_z⟩` of the eigenvector.
    pub spin_z: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Scan {
    pub x_label: String,
    pub x_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted_slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub model: SpectralModel,
    #[serde(rename = "N")]
    pub n: usize,
    pub hermiticity_defect: f64,
    pub max_imag_abs: f64,
    pub interior_count: usize,
    pub max_residual: f64,
    pub max_relative_residual: f64,
    /// Interior eigenvalues with no closed-form level within the match tolerance.
    pub unmatched: Vec<f64>,
    pub eigenvalues: Vec<EigenEntry>,
    pub scan: Option<Scan>,
}

impl SpectralReport {
    pub fn interior(&self) -> impl Iterator<Item = &EigenEntry> {
        self.eigenvalues.iter().filter(|e| e.interior)
    }

    pub fn to_text(&self) -> String {
        let m = &self.model;
        let mut s = format!(
            "spectra {:?}/{:?} N = {} m = {} hbar = {} e = {} B = {} g = {}\n",
            m.particle, m.representation, self.n, m.params.m, m.params.hbar, m.params.e, m.params.b, m.params.g
        );
        s += &format!(
            "  interior eigenvalues: {}  max residual: {:.3e}  max relative residual: {:.3e}\n",
            self.interior_count, self.max_residual, self.max_relative_residual
        );
        s += &format!(
            "  max |Im| (interior): {:.3e}  hermiticity defect: {:.3e}  unmatched: {}\n",
            self.max_imag_abs,
            self.hermiticity_defect,
            self.unmatched.len()
        );
        if let Some(scan) = &self.scan {
            s += &format!("  scan over {} (fitted slope {:.4})\n", scan.x_label, scan.fitted_slope);
            for (x, r) in scan.x_values.iter().zip(&scan.residuals) {
                s += &format!("    {x:.6e}  {r:.6e}\n");
            }
        }
        s
    }
}

/// Diagonalizes and matches every interior eigenvalue to the nearest closed-form level.
pub fn compare_closed_form(model: &SpectralModel) -> Result<SpectralReport, SpectraError> {
    let spec = Spectrum::solve(model)?;
    Ok(report_from(&spec))
}

pub fn report_from(spec: &Spectrum) -> SpectralReport {
    let model = &spec.model;
    let table = closed_form::levels(model);
    let spin = model.spin_z();
    let mut entries = Vec::with_capacity(spec.pairs.len());
    let mut unmatched = Vec::new();
    let (mut max_res, mut max_rel) = (0.0f64, 0.0f64);
    for (pair, &interior) in spec.pairs.iter().zip(&spec.interior) {
        let x = pair.value.re;
        let hit: Option<Level> = if interior { closed_form::nearest(&table, x) } else { None };
        let residual = hit.map(|l| (x - l.value).abs());
        let relative = hit.map(|l| (x - l.value).abs() / l.value.abs().max(f64::MIN_POSITIVE));
        if let (Some(r), Some(q)) = (residual, relative) {
            max_res = max_res.max(r);
            max_rel = max_rel.max(q);
        }
        if interior && relative.is_none_or(|q| q > MATCH_TOLERANCE) {
            unmatched.push(x);
        }
        entries.push(EigenEntry {
            value: x,
            imag_abs: pair.value.im.abs(),
            interior,
            matched_n: hit.map(|l| l.n),
            matched_lambda: hit.map(|l| l.lambda),
            matched_sign: hit.map(|l| l.sign),
            residual,
            relative_residual: relative,
            spin_z: spin.as_ref().map(|s| spec.expectation(s, pair)),
        });
    }
    SpectralReport {
        model: *model,
        n: model.levels,
        hermiticity_defect: spec.hermiticity_defect,
        max_imag_abs: spec.max_interior_imag(),
        interior_count: spec.interior.iter().filter(|k| **k).count(),
        max_residual: max_res,
        max_relative_residual: max_rel,
        unmatched,
        eigenvalues: entries,
        scan: None,
    }
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive points.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    num / den
}

/// Geometric grid of `points` values from `from` to `to`.
pub fn log_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![from];
    }
    let (a, b) = (from.ln(), to.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

fn check_scan(xs: &[f64]) -> Result<(), SpectraError> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(0.0, f64::max);
    if xs.len() < 2 || !(lo > 0.0) || hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(SpectraError::BadScan);
    }
    Ok(())
}

/// Number of lowest positive interior levels used by the scans.
pub const SCAN_LEVELS: usize = 12;

/// Residual of the Sakata–Taketani spectrum against the first-order AMM formula.
///
/// `params.g` is ignored; each point sets `g = 2 + x`. The residual at a
/// point is the largest distance between one of the lowest `count` positive
/// interior eigenvalues and its nearest closed-form level.
pub fn amm_linearity_scan(
    params: &Params,
    g_minus_2: &[f64],
    levels: usize,
    count: usize,
) -> Result<SpectralReport, SpectraError> {
    check_scan(g_minus_2)?;
    let mut residuals = Vec::with_capacity(g_minus_2.len());
    let mut last = None;
    for &x in g_minus_2 {
        let p = Params { g: 2.0 + x, ..*params };
        let model = SpectralModel::new(Particle::Spin1, Representation::Original, p, levels);
        let spec = Spectrum::solve(&model)?;
        let lowest = spec.lowest_positive(count)?;
        let table = closed_form::levels(&model);
        let r = lowest
            .iter()
            .map(|&e| closed_form::nearest(&table, e).map_or(f64::INFINITY, |l| (e - l.value).abs()))
            .fold(0.0, f64::max);
        residuals.push(r);
        last = Some(spec);
    }
    let mut report = report_from(&last.expect("scan is non-empty"));
    report.scan = Some(Scan {
        x_label: "g - 2".into(),
        fitted_slope: fit_slope(g_minus_2, &residuals),
        x_values: g_minus_2.to_vec(),
        residuals,
    });
    Ok(report)
}

/// Residual of the second-order spin-1 FW spectrum against the Sakata–Taketani spectrum.
///
/// `params.b` is ignored; each point sets the field so that `|e|B = x`.
pub fn eqprf_residual_scan(
    params: &Params,
    e_b: &[f64],
    levels: usize,
    count: usize,
) -> Result<SpectralReport, SpectraError> {
    check_scan(e_b)?;
    let mut residuals = Vec::with_capacity(e_b.len());
    let mut last = None;
    for &x in e_b {
        let p = Params {
            b: x / params.e.abs(),
            ..*params
        };
        let st = Spectrum::solve(&SpectralModel::new(Particle::Spin1, Representation::Original, p, levels))?;
        let fw = Spectrum::solve(&SpectralModel::new(Particle::Spin1, Representation::FwEqprf, p, levels))?;
        let reference = st.lowest_positive(count)?;
        let candidates = fw.interior_values();
        let r = reference
            .iter()
            .map(|&e| candidates.iter().map(|c| (c - e).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        residuals.push(r);
        last = Some(fw);
    }
    let mut report = report_from(&last.expect("scan is non-empty"));
    report.scan = Some(Scan {
        x_label: "|e|B".into(),
        fitted_slope: fit_slope(e_b, &residuals),
        x_values: e_b.to_vec(),
        residuals,
    });
    Ok(report)
}

/// Largest distance from an interior eigenvalue of `a` to the interior spectrum of `b`.
///
/// Only eigenvalues of `a` below the smallest magnitude among `b`'s edge
/// states are compared, since the two bases lose different states at the edge.
pub fn spectral_distance(a: &Spectrum, b: &Spectrum) -> f64 {
    let bv = b.interior_values();
    let reach = b
        .pairs
        .iter()
        .zip(&b.interior)
        .filter(|(_, &k)| !k)
        .map(|(p, _)| p.value.re.abs())
        .fold(f64::INFINITY, f64::min);
    a.interior_values()
        .iter()
        .filter(|x| x.abs() < reach)
        .map(|x| {
            let k = bv.partition_point(|y| y < x);
            let lo = k.saturating_sub(1);
            bv[lo..(k + 1).min(bv.len())]
                .iter()
                .map(|y| (x - y).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = log_grid(1e-3, 1e-1, 7);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        assert!((fit_slope(&xs, &ys) - 2.0).abs() < 1e-12);
        assert!((xs[6] - 1e-1).abs() < 1e-15);
    }

    #[test]
    fn free_particle_at_rest() {
        let p = Params { b: 0.0, ..Params::default() };
        let r = compare_closed_form(&SpectralModel::new(Particle::Spin0, Representation::Fw, p, 8)).unwrap();
        assert!(r.eigenvalues.iter().all(|e| (e.value.abs() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn scan_must_span_a_decade() {
        assert_eq!(
            amm_linearity_scan(&Params::default(), &[0.01, 0.05], 16, 2).unwrap_err(),
            SpectraError::BadScan
        );
    }
}
