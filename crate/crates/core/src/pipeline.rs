//! End-to-end solve: expansion point -> recursion -> series assembly ->
//! rational resummation -> optional shooting cross-check.

use crate::error::{Error, Result};
use crate::expansion::{leading_energy, solve_q0};
use crate::potential::PotentialModel;
use crate::riccati::{EnergySeries, RiccatiState, DEFAULT_MAX_CORRECTION};
use crate::shooting::{solve_bound_state, RadialGrid, ShootingResult, DEFAULT_SHOOT_TOL};

/// Truncation order of the reported plain series sum.
pub const DEFAULT_SUM_ORDER: usize = 4;

/// What to solve and how hard to check it.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRequest {
    pub model: PotentialModel,
    /// Angular quantum number (real values allowed for effective-l runs).
    pub ell: f64,
    pub n_r: u32,
    /// Truncation order K of the reported series sum.
    pub sum_order: usize,
    /// Number of correction coefficients computed (>= every Pade need).
    pub series_depth: usize,
    /// Rational resummations to evaluate, as (numerator, denominator)
    /// degrees.
    pub pade: Vec<(usize, usize)>,
    /// Expansion-point solve tolerance.
    pub tol: f64,
    /// Run the direct-integration oracle as well.
    pub oracle: bool,
    /// Oracle bisection tolerance.
    pub oracle_tol: f64,
}

impl SolveRequest {
    pub fn new(model: PotentialModel, ell: f64) -> Self {
        Self {
            model,
            ell,
            n_r: 0,
            sum_order: DEFAULT_SUM_ORDER,
            series_depth: DEFAULT_MAX_CORRECTION,
            pade: vec![(3, 3), (3, 4)],
            tol: crate::expansion::DEFAULT_Q0_TOL,
            oracle: false,
            oracle_tol: DEFAULT_SHOOT_TOL,
        }
    }

    pub fn with_oracle(mut self, on: bool) -> Self {
        self.oracle = on;
        self
    }
}

/// One evaluated resummation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadeOutcome {
    pub n: usize,
    pub m: usize,
    /// Resummed total energy (reporting convention applied). When the
    /// table was degenerate this is the truncated-sum fallback.
    pub energy: f64,
    /// True when the rational fit failed and the fallback was used.
    pub degenerate: bool,
    /// 1-norm condition estimate of the denominator system.
    pub condition: f64,
}

/// Full pipeline result.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub q0: f64,
    pub w: f64,
    pub beta: f64,
    pub lbar: f64,
    /// Classical leading term lbar^2 E^(-2), reporting convention applied.
    pub leading: f64,
    /// Correction coefficients E^(0)..E^(depth), internal units.
    pub corrections: Vec<f64>,
    /// Truncated series total through `sum_order`, convention applied.
    pub e_sum: f64,
    pub pade: Vec<PadeOutcome>,
    pub oracle: Option<ShootingResult>,
    /// Index of the smallest series term (asymptotic truncation hint).
    pub smallest_term_index: usize,
    /// Expansion-point roots rejected by the minimum-energy policy.
    pub rejected_roots: Vec<f64>,
}

impl SolveOutcome {
    /// Resummation value by degrees, if it was requested.
    pub fn pade_energy(&self, n: usize, m: usize) -> Option<&PadeOutcome> {
        self.pade.iter().find(|p| p.n == n && p.m == m)
    }
}

/// Run the whole pipeline for one state.
pub fn run_solve(req: &SolveRequest) -> Result<SolveOutcome> {
    let depth = req
        .series_depth
        .max(req.sum_order)
        .max(req.pade.iter().map(|(n, m)| n + m).max().unwrap_or(0));
    let pt = solve_q0(&req.model, req.ell, req.n_r, req.tol)?;
    let rejected_roots = pt.rejected_roots.clone();
    let leading_internal = leading_energy(&pt, &req.model)?;
    let (q0, w, beta, lbar) = (pt.q0, pt.w, pt.beta, pt.lbar);

    let mut state = RiccatiState::new(&req.model, pt, depth)?;
    let series = state.energy_corrections(depth)?;
    let e_sum = series.assembled(req.sum_order);

    let mut pade = Vec::with_capacity(req.pade.len());
    for &(n, m) in &req.pade {
        pade.push(evaluate_pade(&series, n, m)?);
    }

    let oracle = if req.oracle {
        Some(run_oracle(
            &req.model,
            req.ell,
            req.n_r,
            e_sum,
            req.oracle_tol,
        )?)
    } else {
        None
    };

    Ok(SolveOutcome {
        q0,
        w,
        beta,
        lbar,
        leading: req.model.convention_factor() * leading_internal,
        corrections: series.corrections.clone(),
        e_sum,
        pade,
        oracle,
        smallest_term_index: series.smallest_term_index(),
        rejected_roots,
    })
}

fn evaluate_pade(series: &EnergySeries, n: usize, m: usize) -> Result<PadeOutcome> {
    match crate::pade::fit_pade(&series.corrections, n, m) {
        Ok(p) => {
            let x = 1.0 / series.lbar;
            let energy = series.convention_factor
                * (series.lbar * series.lbar * series.e_minus2 + p.eval(x));
            Ok(PadeOutcome {
                n,
                m,
                energy,
                degenerate: false,
                condition: p.condition_estimate(),
            })
        }
        Err(Error::DegenerateTable { condition, .. }) => Ok(PadeOutcome {
            n,
            m,
            energy: series.assembled(n + m),
            degenerate: true,
            condition,
        }),
        Err(e) => Err(e),
    }
}

/// Direct-integration cross-check seeded by the series total.
pub fn run_oracle(
    model: &PotentialModel,
    ell: f64,
    n_r: u32,
    e_estimate: f64,
    tol: f64,
) -> Result<ShootingResult> {
    if ell.fract() != 0.0 {
        return Err(Error::Validation(format!(
            "the integration oracle needs an integer angular momentum, got {ell}"
        )));
    }
    let l = ell as u32;
    let factor = model.convention_factor();
    let e_internal = e_estimate / factor;
    let grid = RadialGrid::automatic(model, l, e_internal)?;
    let half_width = 0.08 * e_estimate.abs() + 1e-3 * factor;
    solve_bound_state(
        model,
        l,
        n_r as usize,
        &grid,
        (e_estimate - half_width, e_estimate + half_width),
        tol,
    )
}
