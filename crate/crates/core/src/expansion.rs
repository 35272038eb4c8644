//! Expansion-point determination.
//!
//! The expansion is organized around the radius q0 minimizing the
//! leading (classical) energy term, the harmonic frequency w of
//! fluctuations about it, and the shift beta that kills the next-order
//! correction. All three are tied together by one scalar root-finding
//! problem in q0:
//!
//!   F(q0) = sqrt(q0^3 V'(q0)) - ell + beta(q0) = 0,
//!   beta(q0) = -(1/2 + (n_r + 1/2) w(q0)),
//!   w(q0)^2 = 3 + q0 V''(q0)/V'(q0).
//!
//! Bisection over the admissible domain (V' > 0) is authoritative;
//! robustness is preferred over iteration count.

use crate::error::{Error, Result};
use crate::potential::{PotentialModel, TaylorJet};

/// Default relative tolerance for the q0 solve.
pub const DEFAULT_Q0_TOL: f64 = 1e-12;

/// Relative width at which bisection of F stops.
const BISECT_REL: f64 = 1e-13;

/// Panels in the multiple-root scan.
const SCAN_PANELS: usize = 64;

/// Geometric bracket-growth cap.
const BRACKET_CAP: f64 = 1e6;

/// Solved expansion bundle (q0, w, beta, lbar, Q) plus the leading term.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionPoint {
    /// Radius of the classical minimum.
    pub q0: f64,
    /// Harmonic frequency of fluctuations about q0.
    pub w: f64,
    /// Quantum-number shift.
    pub beta: f64,
    /// Shifted quantum number ell - beta (the large parameter).
    pub lbar: f64,
    /// Potential scale constant, fixed to lbar^2.
    pub big_q: f64,
    /// Angular quantum number. Integer for physical three-dimensional
    /// states; real values support effective-centrifugal reductions.
    pub ell: f64,
    /// Radial node count requested (only 0 is accepted downstream).
    pub n_r: u32,
    /// Leading energy coefficient E^(-2) = 1/(2 q0^2) + V(q0)/Q.
    pub e_minus2: f64,
    /// Roots of F rejected by the minimal-leading-energy policy.
    pub rejected_roots: Vec<f64>,
}

impl ExpansionPoint {
    /// E^(-1) as defined by the shift criterion; vanishes by construction.
    pub fn e_minus1(&self) -> f64 {
        ((2.0 * self.beta + 1.0) / 2.0 + (self.n_r as f64 + 0.5) * self.w) / (self.q0 * self.q0)
    }
}

/// Harmonic frequency sqrt(3 + q0 V''/V') from a jet at q0.
pub fn frequency_w(jet: &TaylorJet) -> Result<f64> {
    let v1 = jet.deriv1();
    if v1 == 0.0 {
        return Err(Error::SingularPoint(format!(
            "V'({}) = 0; frequency undefined",
            jet.point()
        )));
    }
    let radicand = 3.0 + jet.point() * jet.deriv2() / v1;
    if radicand <= 0.0 {
        return Err(Error::NoHarmonicMinimum(format!(
            "3 + q0 V''/V' = {radicand} <= 0 at q0 = {}",
            jet.point()
        )));
    }
    Ok(radicand.sqrt())
}

/// Leading energy term lbar^2 E^(-2) = lbar^2/(2 q0^2) + V(q0).
///
/// This is the energy of a classical circular orbit of angular momentum
/// lbar at radius q0; everything above it is quantum fluctuation.
pub fn leading_energy(pt: &ExpansionPoint, model: &PotentialModel) -> Result<f64> {
    Ok(pt.lbar * pt.lbar / (2.0 * pt.q0 * pt.q0) + model.eval_value(pt.q0)?)
}

/// One evaluation of F(q0); None where the point is inadmissible.
fn shoot_f(model: &PotentialModel, ell: f64, n_r: u32, q0: f64) -> Option<f64> {
    let jet = model.taylor_jet(q0, 2).ok()?;
    let v1 = jet.deriv1();
    if v1 <= 0.0 {
        return None;
    }
    let w = frequency_w(&jet).ok()?;
    let beta = -(0.5 + (n_r as f64 + 0.5) * w);
    Some((q0 * q0 * q0 * v1).sqrt() - ell + beta)
}

/// E^(-2) at a candidate root (with Q = q0^3 V' evaluated there).
fn e_minus2_at(model: &PotentialModel, q0: f64) -> Option<f64> {
    let jet = model.taylor_jet(q0, 2).ok()?;
    let big_q = q0 * q0 * q0 * jet.deriv1();
    if big_q <= 0.0 {
        return None;
    }
    Some(1.0 / (2.0 * q0 * q0) + jet.value() / big_q)
}

fn bisect_root(
    model: &PotentialModel,
    ell: f64,
    n_r: u32,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
) -> f64 {
    let mut sign_lo = f_lo.signum();
    while (hi - lo) > BISECT_REL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        match shoot_f(model, ell, n_r, mid) {
            Some(fm) if fm.signum() == sign_lo => {
                lo = mid;
                sign_lo = fm.signum();
            }
            Some(_) => hi = mid,
            // Inadmissible interior point: shrink toward the upper end,
            // which was admissible by construction.
            None => lo = mid,
        }
    }
    0.5 * (lo + hi)
}

/// Solve the expansion-point equation for a model and quantum numbers.
///
/// `ell` is the (possibly effective, hence real) angular quantum number.
/// Among multiple roots the one minimizing E^(-2) is kept; the admissible
/// domain guarantees positive curvature there.
pub fn solve_q0(model: &PotentialModel, ell: f64, n_r: u32, tol: f64) -> Result<ExpansionPoint> {
    if !(ell >= 0.0) || !ell.is_finite() {
        return Err(Error::Validation(format!(
            "angular quantum number must be finite and >= 0, got {ell}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }

    let q_edge = model.admissible_lower_bound();
    let lo0 = if q_edge > 0.0 {
        q_edge * (1.0 + 1e-9)
    } else {
        1e-8
    };

    // Walk the lower edge up until F is defined there.
    let mut lo = lo0;
    let mut f_lo = shoot_f(model, ell, n_r, lo);
    let mut guard = 0;
    while f_lo.is_none() {
        lo *= 1.5;
        guard += 1;
        if guard > 200 || lo > BRACKET_CAP {
            return Err(Error::NoHarmonicMinimum(format!(
                "frequency undefined over the whole admissible domain of {}",
                model.family_name()
            )));
        }
        f_lo = shoot_f(model, ell, n_r, lo);
    }

    // Grow the upper end geometrically until F changes sign.
    let mut hi = (lo * 2.0).max(1.0);
    let mut f_hi = shoot_f(model, ell, n_r, hi);
    while f_hi.is_none_or(|f| f.signum() == f_lo.unwrap().signum()) {
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return Err(Error::NoBoundState(format!(
                "no sign change of the expansion-point equation below q0 = {BRACKET_CAP:.1e}"
            )));
        }
        f_hi = shoot_f(model, ell, n_r, hi);
    }

    // Scan a log grid for every sign change in [lo, hi].
    let mut roots: Vec<f64> = Vec::new();
    let log_lo = lo.ln();
    let log_hi = hi.ln();
    let mut prev_q = lo;
    let mut prev_f = f_lo.unwrap();
    for i in 1..=SCAN_PANELS {
        let q = (log_lo + (log_hi - log_lo) * i as f64 / SCAN_PANELS as f64).exp();
        let Some(f) = shoot_f(model, ell, n_r, q) else {
            continue;
        };
        if f.signum() != prev_f.signum() {
            roots.push(bisect_root(model, ell, n_r, prev_q, q, prev_f));
        }
        prev_q = q;
        prev_f = f;
    }
    if roots.is_empty() {
        return Err(Error::NoBoundState(
            "sign change lost during panel scan".into(),
        ));
    }

    // Keep the root with minimal leading energy coefficient.
    let mut best = roots[0];
    let mut best_e = e_minus2_at(model, best).unwrap_or(f64::INFINITY);
    for &r in &roots[1..] {
        let e = e_minus2_at(model, r).unwrap_or(f64::INFINITY);
        if e < best_e {
            best = r;
            best_e = e;
        }
    }
    let rejected: Vec<f64> = roots.iter().copied().filter(|&r| r != best).collect();

    // Newton polish. Bisection is authoritative; a couple of guarded
    // Newton steps shave the last digits, which matters because the
    // high-order corrections are sensitive to q0.
    let mut q0 = best;
    for _ in 0..3 {
        let Some(f) = shoot_f(model, ell, n_r, q0) else {
            break;
        };
        let d = 1e-7 * q0;
        let (Some(fp), Some(fm)) = (
            shoot_f(model, ell, n_r, q0 + d),
            shoot_f(model, ell, n_r, q0 - d),
        ) else {
            break;
        };
        let slope = (fp - fm) / (2.0 * d);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let step = f / slope;
        let cand = q0 - step;
        if !(cand > q_edge) || !cand.is_finite() {
            break;
        }
        match shoot_f(model, ell, n_r, cand) {
            Some(fc) if fc.abs() <= f.abs() => q0 = cand,
            _ => break,
        }
        if step.abs() < 1e-15 * q0 {
            break;
        }
    }
    let jet = model.taylor_jet(q0, 2)?;
    let w = frequency_w(&jet)?;
    let beta = -(0.5 + (n_r as f64 + 0.5) * w);
    let lbar = ell - beta;
    let big_q = lbar * lbar;
    let e_minus2 = 1.0 / (2.0 * q0 * q0) + jet.value() / big_q;

    let pt = ExpansionPoint {
        q0,
        w,
        beta,
        lbar,
        big_q,
        ell,
        n_r,
        e_minus2,
        rejected_roots: rejected,
    };

    // Post-solve invariants.
    if !(pt.lbar > 0.0) {
        return Err(Error::InternalConsistency(format!(
            "lbar = {} not positive after solve",
            pt.lbar
        )));
    }
    let eq21 = (q0 * q0 * q0 * jet.deriv1()).sqrt();
    if (pt.lbar - eq21).abs() > 10.0 * tol.max(BISECT_REL) * pt.lbar {
        return Err(Error::InternalConsistency(format!(
            "expansion-point residual |lbar - sqrt(q0^3 V')| = {} above tolerance",
            (pt.lbar - eq21).abs()
        )));
    }
    if pt.e_minus1().abs() > 1e-12 * w / (q0 * q0) {
        return Err(Error::InternalConsistency(format!(
            "E^(-1) = {} did not vanish",
            pt.e_minus1()
        )));
    }
    Ok(pt)
}
