//! Model definitions and matrix construction.

use serde::{Deserialize, Serialize};

use crate::eigen::hermitian_function;
use crate::ops::{self, dirac, kron, mul, re, scale, spin1, sum, Landau, Op, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Particle {
    Spin0,
    Spin12,
    Spin1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// Dirac–Pauli for spin 1/2, Sakata–Taketani for spin 1.
    Original,
    Fw,
    /// Spin-1 FW Hamiltonian with the second-order AMM corrections.
    FwEqprf,
}

/// Physical parameters. The field points along z and the longitudinal momentum is zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub m: f64,
    pub hbar: f64,
    /// Signed charge.
    pub e: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub g: f64,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            m: 1.0,
            hbar: 1.0,
            e: 1.0,
            b: 0.1,
            g: 2.0,
        }
    }
}

impl Params {
    /// Spin-1/2 anomalous moment `μ′ = (g − 2)eℏ/4m`.
    pub fn mu_prime_half(&self) -> f64 {
        (self.g - 2.0) * self.e * self.hbar / (4.0 * self.m)
    }

    /// Spin-1 anomalous coupling `eℏ(g − 2)/2m`.
    pub fn amm_spin1(&self) -> f64 {
        self.e * self.hbar * (self.g - 2.0) / (2.0 * self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    pub particle: Particle,
    pub representation: Representation,
    #[serde(flatten)]
    pub params: Params,
    /// Number of Landau levels kept.
    #[serde(rename = "N")]
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("operand under a square root is not positive (minimum eigenvalue {0:e})")]
    NonPositiveOperand(f64),
}

impl SpectralModel {
    pub fn new(particle: Particle, representation: Representation, params: Params, levels: usize) -> SpectralModel {
        SpectralModel {
            particle,
            representation,
            params,
            levels,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let p = &self.params;
        let bad = |s: &str| Err(ModelError::Invalid(s.to_string()));
        if !(p.b >= 0.0) || !p.b.is_finite() {
            return bad("field B must be finite and >= 0");
        }
        if self.levels < 8 {
            return bad("at least 8 Landau levels are required");
        }
        if !(p.m > 0.0) || !(p.hbar > 0.0) || !p.e.is_finite() || !p.g.is_finite() {
            return bad("m and hbar must be positive, e and g finite");
        }
        match (self.particle, self.representation) {
            (Particle::Spin0, Representation::Original) => {
                bad("the spin-0 original representation is not implemented")
            }
            (Particle::Spin0 | Particle::Spin12, Representation::FwEqprf) => {
                bad("fw_eqprf is only defined for spin 1")
            }
            _ => Ok(()),
        }
    }

    /// Internal (non-orbital) dimension.
    pub fn internal_dim(&self) -> usize {
        match self.particle {
            Particle::Spin0 => 2,
            Particle::Spin12 => 4,
            Particle::Spin1 => 6,
        }
    }

    pub fn dim(&self) -> usize {
        self.levels * self.internal_dim()
    }

    /// Landau index of a basis state.
    pub fn landau_index(&self, state: usize) -> usize {
        state / self.internal_dim()
    }

    /// Number of top Landau indices an interior eigenvector must avoid.
    pub fn edge_width(&self) -> usize {
        match self.particle {
            Particle::Spin1 => 4,
            _ => 2,
        }
    }

    pub fn landau(&self) -> Landau {
        let p = &self.params;
        Landau::new(self.levels, p.e, p.hbar, p.b)
    }

    /// Internal spin projection along the field (`Σ_z` or `S_z`), absent for spin 0.
    pub fn spin_z(&self) -> Option<Op> {
        let internal = match self.particle {
            Particle::Spin0 => return None,
            Particle::Spin12 => dirac::sigma(2),
            Particle::Spin1 => kron(&ops::identity(2), &spin1(2)),
        };
        Some(kron(&ops::identity(self.levels), &internal))
    }

    pub fn is_hermitian_form(&self) -> bool {
        !(self.particle == Particle::Spin1 && self.representation == Representation::Original)
    }

    pub fn build(&self) -> Result<Op, ModelError> {
        self.validate()?;
        match (self.particle, self.representation) {
            (Particle::Spin0, _) => self.spin0_fw(),
            (Particle::Spin12, Representation::Original) => Ok(self.spin12_original()),
            (Particle::Spin12, _) => self.spin12_fw(),
            (Particle::Spin1, Representation::Original) => Ok(SakataTaketani::new(self).hamiltonian()),
            (Particle::Spin1, Representation::Fw) => self.spin1_fw(),
            (Particle::Spin1, Representation::FwEqprf) => self.spin1_eqprf(),
        }
    }

    fn lift(&self, orbital: &Op, internal: &Op) -> Op {
        kron(orbital, internal)
    }

    fn sqrt(op: &Op) -> Result<Op, ModelError> {
        hermitian_function(op, f64::sqrt, |x| x > 0.0).map_err(ModelError::NonPositiveOperand)
    }

    /// `β√(m² + π²)`.
    fn spin0_fw(&self) -> Result<Op, ModelError> {
        let p = &self.params;
        let l = self.landau();
        let n = self.levels;
        let radicand = self.lift(
            &ops::add(&l.pi_sq(), &scale(&ops::identity(n), re(p.m * p.m))),
            &ops::identity(2),
        );
        let beta = self.lift(&ops::identity(n), &ops::pauli(2));
        Ok(mul(&beta, &Self::sqrt(&radicand)?))
    }

    /// `βm + α·π − μ′βΣ_z B`.
    fn spin12_original(&self) -> Op {
        let p = &self.params;
        let l = self.landau();
        let id = ops::identity(self.levels);
        let beta = dirac::beta();
        let beta_sigma = mul(&beta, &dirac::sigma(2));
        sum(
            self.dim(),
            &[
                self.lift(&id, &scale(&beta, re(p.m))),
                self.lift(&l.pi_x(), &dirac::alpha(0)),
                self.lift(&l.pi_y(), &dirac::alpha(1)),
                self.lift(&id, &scale(&beta_sigma, re(-p.mu_prime_half() * p.b))),
            ],
        )
    }

    /// `β√(m² + π² − eℏBΣ_z) − μ′βΣ_z B`.
    fn spin12_fw(&self) -> Result<Op, ModelError> {
        let p = &self.params;
        let l = self.landau();
        let n = self.levels;
        let id = ops::identity(n);
        let radicand = sum(
            self.dim(),
            &[
                self.lift(&l.pi_sq(), &ops::identity(4)),
                self.lift(&id, &scale(&ops::identity(4), re(p.m * p.m))),
                self.lift(&id, &scale(&dirac::sigma(2), re(-p.e * p.hbar * p.b))),
            ],
        );
        let beta = self.lift(&id, &dirac::beta());
        let beta_sigma = mul(&dirac::beta(), &dirac::sigma(2));
        Ok(ops::add(
            &mul(&beta, &Self::sqrt(&radicand)?),
            &self.lift(&id, &scale(&beta_sigma, re(-p.mu_prime_half() * p.b))),
        ))
    }

    /// `ρ₃√(m² + π² − 2eℏS_z B) − ρ₃(eℏ(g − 2)/2m)S_z B`.
    fn spin1_fw(&self) -> Result<Op, ModelError> {
        let p = &self.params;
        let s = Spin1Parts::new(self);
        let ebh = p.e * p.hbar * p.b;
        let radicand = sum(
            self.dim(),
            &[
                s.pi_sq.clone(),
                scale(&s.one, re(p.m * p.m)),
                scale(&s.sz, re(-2.0 * ebh)),
            ],
        );
        let root = Self::sqrt(&radicand)?;
        Ok(ops::add(
            &mul(&s.rho3, &root),
            &mul(&s.rho3, &scale(&s.sz, re(-p.amm_spin1() * p.b))),
        ))
    }

    /// Spin-1 FW Hamiltonian including the second-order AMM corrections.
    fn spin1_eqprf(&self) -> Result<Op, ModelError> {
        let p = &self.params;
        let s = Spin1Parts::new(self);
        let (m, b) = (p.m, p.b);
        let ebh = p.e * p.hbar * b;
        let sb = scale(&s.sz, re(b));
        let sb2 = mul(&sb, &sb);
        let radicand = sum(
            self.dim(),
            &[
                s.pi_sq.clone(),
                scale(&s.one, re(m * m)),
                scale(&s.sz, re(-2.0 * ebh)),
                scale(&sb2, re(-(p.e * p.hbar).powi(2) * p.g * (p.g - 2.0) / (4.0 * m * m))),
            ],
        );
        let eps = Self::sqrt(&radicand)?;
        let weight = hermitian_function(&radicand, |x| {
            let r = x.sqrt();
            1.0 / (r * (r + m))
        }, |x| x > 0.0)
        .map_err(ModelError::NonPositiveOperand)?;
        // S·(π × B) = B(S_x π_y − S_y π_x) for B along z.
        let s_pi = ops::add(&mul(&s.sx, &s.pi_x), &mul(&s.sy, &s.pi_y));
        let s_cross = scale(&ops::sub(&mul(&s.sx, &s.pi_y), &mul(&s.sy, &s.pi_x)), re(b));
        let inner = sum(
            self.dim(),
            &[
                scale(&mul(&s_pi, &s_pi), re(b * b)),
                scale(&mul(&s_cross, &s_cross), re(-1.0)),
                scale(&sb, re(-p.e * p.hbar * (p.g - 1.0) * b * b)),
            ],
        );
        let coeff = (p.e * p.hbar).powi(2) * (p.g - 1.0) * (p.g - 2.0) / (16.0 * m.powi(3));
        let correction = scale(&ops::anticommutator(&weight, &inner), re(coeff));
        let body = sum(
            self.dim(),
            &[eps, scale(&sb, re(-p.amm_spin1())), correction],
        );
        Ok(mul(&s.rho3, &body))
    }
}

/// Spin-1 building blocks on the full space; the internal index is `ρ ⊗ S`.
pub(crate) struct Spin1Parts {
    pub one: Op,
    pub rho3: Op,
    pub sx: Op,
    pub sy: Op,
    pub sz: Op,
    pub pi_x: Op,
    pub pi_y: Op,
    pub pi_sq: Op,
}

impl Spin1Parts {
    pub fn new(model: &SpectralModel) -> Spin1Parts {
        let l = model.landau();
        let n = model.levels;
        let id_n = ops::identity(n);
        let id6 = ops::identity(6);
        let spin = |k| kron(&id_n, &kron(&ops::identity(2), &spin1(k)));
        Spin1Parts {
            one: ops::identity(6 * n),
            rho3: kron(&id_n, &kron(&ops::pauli(2), &ops::identity(3))),
            sx: spin(0),
            sy: spin(1),
            sz: spin(2),
            pi_x: kron(&l.pi_x(), &id6),
            pi_y: kron(&l.pi_y(), &id6),
            pi_sq: kron(&l.pi_sq(), &id6),
        }
    }

    /// `ρ_k ⊗ 1₃` on the full space.
    pub fn rho(&self, k: usize, levels: usize) -> Op {
        kron(&ops::identity(levels), &kron(&ops::pauli(k), &ops::identity(3)))
    }
}

/// Sakata–Taketani operators `H = ρ₃M + ℰ + O`.
pub struct SakataTaketani {
    pub mass: Op,
    pub even: Op,
    pub odd: Op,
    pub rho3: Op,
    pub rho1: Op,
    /// `S·B`.
    pub s_b: Op,
}

impl SakataTaketani {
    pub fn new(model: &SpectralModel) -> SakataTaketani {
        let p = &model.params;
        let s = Spin1Parts::new(model);
        let m = p.m;
        let n6 = model.dim();
        let s_b = scale(&s.sz, re(p.b));
        let s_pi = ops::add(&mul(&s.sx, &s.pi_x), &mul(&s.sy, &s.pi_y));
        let mass = sum(
            n6,
            &[
                scale(&s.one, re(m)),
                scale(&s.pi_sq, re(1.0 / (2.0 * m))),
                scale(&s_b, re(-p.e * p.hbar / m)),
            ],
        );
        let k = p.amm_spin1();
        let even = scale(&mul(&s.rho3, &s_b), re(-k));
        let bracket = sum(
            n6,
            &[
                scale(&s.pi_sq, re(1.0 / (2.0 * m))),
                scale(&mul(&s_pi, &s_pi), re(-1.0 / m)),
                scale(&s_b, re(k)),
            ],
        );
        let i_rho2 = scale(&s.rho(1, model.levels), I);
        let odd = mul(&i_rho2, &bracket);
        SakataTaketani {
            mass,
            even,
            odd,
            rho1: s.rho(0, model.levels),
            rho3: s.rho3,
            s_b,
        }
    }

    pub fn hamiltonian(&self) -> Op {
        let n = self.mass.nrows();
        sum(n, &[mul(&self.rho3, &self.mass), self.even.clone(), self.odd.clone()])
    }
}
