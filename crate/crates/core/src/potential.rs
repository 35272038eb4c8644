//! Radial potential families and their high-order Taylor data.
//!
//! Two families carry the physics: the spiked harmonic oscillator
//! V(q) = (q^2 + a q^-b)/2 and the truncated Coulomb potential
//! V(q) = -(q^2 + c^2)^-1/2. The pure oscillator and pure Coulomb
//! limits are kept as separate kinds because exactness tests lean on
//! their closed-form spectra.
//!
//! Derivatives are produced as scaled Taylor coefficients
//! t_n = V^(n)(q0)/n!, accumulated multiplicatively so that orders in
//! the tens stay far away from factorial overflow.

use crate::error::{Error, Result};

/// Hard cap on the jet order; beyond this the caller is asking for trouble.
pub const MAX_JET_ORDER: usize = 64;

/// How reported energies are scaled relative to the internal
/// -u''/2 + [l(l+1)/(2q^2) + V]u = Eu form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleConvention {
    /// Report the internal eigenvalue as-is.
    #[default]
    HalfKinetic,
    /// Report twice the internal eigenvalue (benchmark tables for the
    /// spiked oscillator are tabulated against -d^2/dq^2 + ...).
    Doubled,
}

impl ScaleConvention {
    pub fn factor(self) -> f64 {
        match self {
            ScaleConvention::HalfKinetic => 1.0,
            ScaleConvention::Doubled => 2.0,
        }
    }
}

/// Potential family tag plus parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    /// V(q) = (q^2 + a q^-b)/2, a >= 0, b > 0.
    SpikedHo { strength: f64, exponent: f64 },
    /// V(q) = -(q^2 + c^2)^-1/2, c >= 0.
    TruncatedCoulomb { truncation: f64 },
    /// V(q) = q^2/2.
    PureHo,
    /// V(q) = -1/q.
    PureCoulomb,
}

/// A radial potential with a reporting convention attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialModel {
    kind: PotentialKind,
    convention: ScaleConvention,
}

impl PotentialModel {
    /// Spiked harmonic oscillator (q^2 + a q^-b)/2.
    ///
    /// a = 0 is accepted as the oscillator limit used by exactness tests.
    pub fn spiked_ho(strength: f64, exponent: f64) -> Result<Self> {
        if !strength.is_finite() || strength < 0.0 {
            return Err(Error::Validation(format!(
                "spiked oscillator strength a must be finite and >= 0, got {strength}"
            )));
        }
        if !exponent.is_finite() || exponent <= 0.0 {
            return Err(Error::Validation(format!(
                "spiked oscillator exponent b must be finite and > 0, got {exponent}"
            )));
        }
        Ok(Self {
            kind: PotentialKind::SpikedHo { strength, exponent },
            convention: ScaleConvention::HalfKinetic,
        })
    }

    /// Truncated Coulomb -(q^2 + c^2)^-1/2.
    ///
    /// c = 0 is accepted as the pure Coulomb limit used by exactness tests.
    pub fn truncated_coulomb(truncation: f64) -> Result<Self> {
        if !truncation.is_finite() || truncation < 0.0 {
            return Err(Error::Validation(format!(
                "truncation length c must be finite and >= 0, got {truncation}"
            )));
        }
        Ok(Self {
            kind: PotentialKind::TruncatedCoulomb { truncation },
            convention: ScaleConvention::HalfKinetic,
        })
    }

    /// Pure harmonic oscillator q^2/2.
    pub fn pure_ho() -> Self {
        Self {
            kind: PotentialKind::PureHo,
            convention: ScaleConvention::HalfKinetic,
        }
    }

    /// Pure Coulomb -1/q.
    pub fn pure_coulomb() -> Self {
        Self {
            kind: PotentialKind::PureCoulomb,
            convention: ScaleConvention::HalfKinetic,
        }
    }

    pub fn with_convention(mut self, convention: ScaleConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn convention(&self) -> ScaleConvention {
        self.convention
    }

    /// Multiplier applied to reported energies.
    pub fn convention_factor(&self) -> f64 {
        self.convention.factor()
    }

    /// Short machine-readable family name.
    pub fn family_name(&self) -> &'static str {
        match self.kind {
            PotentialKind::SpikedHo { .. } => "spiked",
            PotentialKind::TruncatedCoulomb { .. } => "tcoulomb",
            PotentialKind::PureHo => "ho",
            PotentialKind::PureCoulomb => "coulomb",
        }
    }

    /// V(q).
    pub fn eval_value(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::Domain(format!(
                "potential evaluated at nonpositive q = {q}"
            )));
        }
        Ok(match self.kind {
            PotentialKind::SpikedHo { strength, exponent } => {
                0.5 * (q * q + strength * q.powf(-exponent))
            }
            PotentialKind::TruncatedCoulomb { truncation } => {
                -1.0 / (q * q + truncation * truncation).sqrt()
            }
            PotentialKind::PureHo => 0.5 * q * q,
            PotentialKind::PureCoulomb => -1.0 / q,
        })
    }

    /// Scaled Taylor coefficients t_n = V^(n)(q0)/n!, n = 0..=order.
    pub fn taylor_jet(&self, q0: f64, order: usize) -> Result<TaylorJet> {
        if !(q0 > 0.0) || !q0.is_finite() {
            return Err(Error::Domain(format!(
                "Taylor jet requested at nonpositive q0 = {q0}"
            )));
        }
        if order > MAX_JET_ORDER {
            return Err(Error::Capacity(format!(
                "jet order {order} exceeds cap {MAX_JET_ORDER}"
            )));
        }
        let coeffs = match self.kind {
            PotentialKind::SpikedHo { strength, exponent } => {
                let mut t = quadratic_jet(q0, order, 0.5);
                if strength > 0.0 {
                    let core = inverse_power_jet(q0, exponent, order);
                    for (tn, cn) in t.iter_mut().zip(core.iter()) {
                        *tn += 0.5 * strength * cn;
                    }
                }
                t
            }
            PotentialKind::TruncatedCoulomb { truncation } => {
                softened_coulomb_jet(q0, truncation, order)
            }
            PotentialKind::PureHo => quadratic_jet(q0, order, 0.5),
            PotentialKind::PureCoulomb => softened_coulomb_jet(q0, 0.0, order),
        };
        debug_assert!(coeffs.iter().all(|t| t.is_finite()));
        Ok(TaylorJet { point: q0, coeffs })
    }

    /// Lower edge of the region where V'(q) > 0 (bound-state search domain).
    ///
    /// For the spiked oscillator this is (ab/2)^(1/(b+2)); the harmonic
    /// frequency radicand is automatically positive above it. The Coulomb
    /// family has V' > 0 everywhere.
    pub fn admissible_lower_bound(&self) -> f64 {
        match self.kind {
            PotentialKind::SpikedHo { strength, exponent } if strength > 0.0 => {
                (0.5 * strength * exponent).powf(1.0 / (exponent + 2.0))
            }
            _ => 0.0,
        }
    }
}

/// Scaled Taylor coefficients of V about a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    point: f64,
    coeffs: Vec<f64>,
}

impl TaylorJet {
    pub fn point(&self) -> f64 {
        self.point
    }

    /// Highest order carried, i.e. coeffs are t_0..=t_order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// t_n = V^(n)(point)/n!.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// V(point).
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// V'(point).
    pub fn deriv1(&self) -> f64 {
        self.coeffs[1]
    }

    /// V''(point).
    pub fn deriv2(&self) -> f64 {
        2.0 * self.coeffs[2]
    }

    /// Evaluate the truncated Taylor polynomial at point + h.
    pub fn eval_offset(&self, h: f64) -> f64 {
        let mut acc = 0.0;
        for &t in self.coeffs.iter().rev() {
            acc = acc * h + t;
        }
        acc
    }
}

/// Jet of s*q^2: (s q0^2, 2 s q0, s, 0, ...).
fn quadratic_jet(q0: f64, order: usize, s: f64) -> Vec<f64> {
    let mut t = vec![0.0; order + 1];
    t[0] = s * q0 * q0;
    if order >= 1 {
        t[1] = 2.0 * s * q0;
    }
    if order >= 2 {
        t[2] = s;
    }
    t
}

/// Scaled jet of q^-b via the falling-product ladder
/// t_{n} = t_{n-1} * (-(b + n - 1)/n) / q0.
fn inverse_power_jet(q0: f64, b: f64, order: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(order + 1);
    let mut cur = q0.powf(-b);
    t.push(cur);
    for n in 1..=order {
        cur *= -(b + n as f64 - 1.0) / (n as f64 * q0);
        t.push(cur);
    }
    t
}

/// Scaled jet of -(q^2+c^2)^-1/2 from the identity (q^2+c^2) V' + q V = 0,
/// differentiated n times:
///   (q^2+c^2)(n+1) t_{n+1} + (2n+1) q t_n + n t_{n-1} = 0.
/// Exact recurrence; no finite differences anywhere.
fn softened_coulomb_jet(q0: f64, c: f64, order: usize) -> Vec<f64> {
    let s = q0 * q0 + c * c;
    let mut t = Vec::with_capacity(order + 1);
    t.push(-1.0 / s.sqrt());
    if order >= 1 {
        // V' = q (q^2+c^2)^-3/2 = -q V / s.
        t.push(-q0 * t[0] / s);
    }
    for n in 1..order {
        let next = -((2 * n + 1) as f64 * q0 * t[n] + n as f64 * t[n - 1]) / ((n + 1) as f64 * s);
        t.push(next);
    }
    t
}
