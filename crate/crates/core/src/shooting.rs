//! Direct numerical integration oracle for the radial equation.
//!
//! Numerov propagation of -u''/2 + [l(l+1)/(2q^2) + V(q)]u = Eu on a
//! uniform grid, with eigenvalues isolated by Sturm node counting: the
//! number of interior zeros of the outward solution equals the number of
//! box eigenvalues below E, so bisecting the predicate "count > n_r"
//! converges to the n_r-th level without sign conventions or matching
//! poles. The log-derivative mismatch at the outermost classical turning
//! point is evaluated at the converged energy as an independent residual
//! check.
//!
//! Hard singular cores (a q^-b spikes) are started deep in the inner
//! forbidden region with a WKB-ratio seed; soft potentials start near
//! the origin on the regular power-law branch u ~ q^(l+1).

use crate::error::{Error, Result};
use crate::potential::{PotentialKind, PotentialModel};

/// Default grid resolution.
pub const DEFAULT_STEPS: usize = 200_000;

/// Ceiling applied when the core-stability bound asks for more steps.
const MAX_STEPS: usize = 1_300_000;

/// Minimum steps accepted for a hand-built grid.
const MIN_STEPS: usize = 1_000;

/// WKB action accumulated beyond the outer turning point.
const OUTER_ACTION: f64 = 18.0;

/// Stability bound on kappa * h at the inner edge of a singular core.
const CORE_KAPPA_H: f64 = 0.25;

/// Default energy tolerance of the bisection.
pub const DEFAULT_SHOOT_TOL: f64 = 1e-9;

/// Uniform radial grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    q_min: f64,
    q_max: f64,
    steps: usize,
}

impl RadialGrid {
    pub fn new(q_min: f64, q_max: f64, steps: usize) -> Result<Self> {
        if !(q_min > 0.0) || !(q_max > q_min) || !q_max.is_finite() {
            return Err(Error::Validation(format!(
                "grid needs 0 < q_min < q_max, got [{q_min}, {q_max}]"
            )));
        }
        if steps < MIN_STEPS {
            return Err(Error::Validation(format!(
                "grid needs at least {MIN_STEPS} steps, got {steps}"
            )));
        }
        Ok(Self {
            q_min,
            q_max,
            steps,
        })
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn h(&self) -> f64 {
        (self.q_max - self.q_min) / self.steps as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.h()
    }

    /// Build a grid adapted to a model, angular momentum and an energy
    /// estimate (internal half-kinetic units).
    ///
    /// The outer edge sits OUTER_ACTION WKB units beyond the outer
    /// turning point. For singular cores the inner edge is pushed into
    /// the forbidden region until the boundary-leakage estimate
    /// q^2 kappa exp(-2A) is negligible, the step count is raised (capped)
    /// to keep kappa*h small there, and the edge is pulled back out if
    /// the cap would leave the recursion unstable.
    pub fn automatic(model: &PotentialModel, l: u32, e_hint: f64) -> Result<Self> {
        let lfac = (l * (l + 1)) as f64;
        let v_eff =
            |q: f64| -> f64 { model.eval_value(q).unwrap_or(f64::INFINITY) + lfac / (2.0 * q * q) };

        // Effective-potential minimum on a coarse log grid.
        let mut q_vmin = 1.0;
        let mut v_min = f64::INFINITY;
        for i in 0..=600 {
            let q = 10f64.powf(-4.0 + 9.0 * i as f64 / 600.0);
            let v = v_eff(q);
            if v < v_min {
                v_min = v;
                q_vmin = q;
            }
        }
        let e = if e_hint > v_min {
            e_hint
        } else {
            v_min + 0.05 * v_min.abs().max(1.0)
        };

        // Outer turning point, then extend by WKB action.
        let mut q_out = q_vmin;
        while v_eff(q_out) < e {
            q_out *= 1.02;
            if q_out > 1e8 {
                return Err(Error::Domain(
                    "no outer classical turning point found".into(),
                ));
            }
        }
        let mut q_max = q_out;
        let mut action = 0.0;
        while action < OUTER_ACTION && q_max < 1e8 {
            let dq = (0.002 * q_out).max(1e-6);
            let kappa = (2.0 * (v_eff(q_max) - e)).max(0.0).sqrt();
            action += kappa * dq;
            q_max += dq;
        }
        q_max *= 1.02;

        let spiked_core = matches!(
            model.kind(),
            PotentialKind::SpikedHo { strength, .. } if strength > 0.0
        );
        let mut steps = DEFAULT_STEPS;
        let mut q_min;
        if spiked_core {
            // Inner turning point of the core.
            let mut q_in = q_vmin;
            while v_eff(q_in) < e && q_in > 1e-12 {
                q_in *= 0.98;
            }
            // March inward until the leakage estimate is negligible.
            let target = 1e-10 * e.abs().max(1.0);
            let kappa_at = |q: f64| -> f64 { (2.0 * (v_eff(q) - e)).max(0.0).sqrt() };
            let mut q = q_in;
            let mut a_acc = 0.0;
            for _ in 0..40_000 {
                let q_next = q * 0.9995;
                a_acc += kappa_at(0.5 * (q + q_next)) * (q - q_next);
                q = q_next;
                let crit = q * q * kappa_at(q) * (-2.0 * a_acc).exp();
                if crit < target || a_acc > 60.0 {
                    break;
                }
            }
            q_min = q;
            // Stability: kappa*h <= CORE_KAPPA_H at the inner edge, with
            // the step count capped; pull q_min back out if needed.
            for _ in 0..6 {
                let kappa_edge = kappa_at(q_min);
                if kappa_edge <= 0.0 {
                    break;
                }
                let needed = ((q_max - q_min) * kappa_edge / CORE_KAPPA_H).ceil() as usize;
                steps = needed.clamp(DEFAULT_STEPS, MAX_STEPS);
                let h = (q_max - q_min) / steps as f64;
                if kappa_edge * h <= CORE_KAPPA_H * 1.0001 {
                    break;
                }
                // Find the radius where kappa drops to the stable bound.
                let kappa_limit = CORE_KAPPA_H / h;
                while kappa_at(q_min) > kappa_limit && q_min < q_in {
                    q_min *= 1.01;
                }
            }
        } else {
            // Regular start near the origin on the power-law branch, kept
            // a few steps away from the centrifugal singularity.
            q_min = 1e-6 * q_out;
            for _ in 0..4 {
                let h = (q_max - q_min) / steps as f64;
                let floor = 2.0 * h * (lfac + 1.0).sqrt();
                q_min = q_min.max(floor.min(0.05 * q_out));
            }
        }
        RadialGrid::new(q_min, q_max, steps.max(MIN_STEPS))
    }
}

/// Converged shooting solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    /// Eigenvalue in the model's reporting convention.
    pub energy: f64,
    /// Interior node count of the converged eigenfunction.
    pub nodes: usize,
    /// Bisection iterations spent.
    pub iterations: usize,
    /// Normalized log-derivative mismatch at the outer turning point.
    pub matching_residual: f64,
}

/// Energy-independent part of the Numerov coefficient:
/// table[i] = l(l+1)/q_i^2 + 2 V(q_i), so f_i(E) = table[i] - 2E.
struct FTable {
    h: f64,
    vals: Vec<f64>,
    wkb_start: bool,
    power: i32,
    q_min: f64,
    /// First-order small-q coefficient of the regular branch,
    /// u ~ q^(l+1) (1 + alpha q): alpha = -Z/(l+1) for V ~ -Z/q cores.
    alpha: f64,
}

impl FTable {
    fn build(model: &PotentialModel, l: u32, grid: &RadialGrid) -> Result<Self> {
        let lfac = (l * (l + 1)) as f64;
        let n = grid.steps;
        let mut vals = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let q = grid.point(i);
            let v = model.eval_value(q)?;
            if !v.is_finite() {
                return Err(Error::Domain(format!(
                    "potential not finite on the grid at q = {q}"
                )));
            }
            vals.push(lfac / (q * q) + 2.0 * v);
        }
        let q_min = grid.q_min();
        let v0 = model.eval_value(q_min)?;
        Ok(Self {
            h: grid.h(),
            vals,
            wkb_start: model.admissible_lower_bound() > 0.0,
            power: (l + 1) as i32,
            q_min,
            alpha: q_min * v0 / (l + 1) as f64,
        })
    }

    #[inline]
    fn f(&self, i: usize, e: f64) -> f64 {
        self.vals[i] - 2.0 * e
    }

    fn len(&self) -> usize {
        self.vals.len()
    }
}

struct Sweep {
    nodes: usize,
    values: Option<Vec<f64>>,
}

/// Outward Numerov sweep; counts interior sign changes. Renormalization
/// on overflow risk keeps all stored values mutually comparable.
fn sweep_outward(table: &FTable, e: f64, keep: bool) -> Sweep {
    let n = table.len() - 1;
    let h = table.h;
    let h2_12 = h * h / 12.0;

    let f0 = table.f(0, e);
    let f1 = table.f(1, e);
    let (mut u_prev, mut u_cur) = if table.wkb_start && f0 > 0.0 {
        let kappa = (f0.max(0.0).sqrt() + f1.max(0.0).sqrt()) / 2.0;
        let seed = 1e-120;
        (seed, seed * (kappa * h).exp())
    } else {
        let q0 = table.q_min;
        let q1 = table.q_min + h;
        (
            q0.powi(table.power) * (1.0 + table.alpha * q0),
            q1.powi(table.power) * (1.0 + table.alpha * q1),
        )
    };

    let mut values = if keep {
        let mut v = Vec::with_capacity(n + 1);
        v.push(u_prev);
        v.push(u_cur);
        Some(v)
    } else {
        None
    };

    let mut nodes = 0usize;
    let mut last_sign = if u_cur != 0.0 { u_cur } else { u_prev }.signum();
    let mut f_prev = f0;
    let mut f_cur = f1;

    for i in 2..=n {
        let f_next = table.f(i, e);
        let u_next = (2.0 * (1.0 + 5.0 * h2_12 * f_cur) * u_cur - (1.0 - h2_12 * f_prev) * u_prev)
            / (1.0 - h2_12 * f_next);
        u_prev = u_cur;
        u_cur = u_next;
        f_prev = f_cur;
        f_cur = f_next;

        if u_cur != 0.0 {
            let s = u_cur.signum();
            if s != last_sign && i < n {
                nodes += 1;
            }
            last_sign = s;
        }
        if u_cur.abs() > 1e250 {
            u_cur *= 1e-250;
            u_prev *= 1e-250;
            if let Some(v) = values.as_mut() {
                for x in v.iter_mut() {
                    *x *= 1e-250;
                }
            }
        }
        if let Some(v) = values.as_mut() {
            v.push(u_cur);
        }
    }
    Sweep { nodes, values }
}

/// Inward Numerov sweep from the outer edge; returns u at grid indices
/// stop-1, stop, stop+1 (consistently scaled). Requires 2 <= stop <= n-2.
fn sweep_inward(table: &FTable, e: f64, stop: usize) -> [f64; 3] {
    let n = table.len() - 1;
    let h = table.h;
    let h2_12 = h * h / 12.0;

    let f_n = table.f(n, e);
    let f_n1 = table.f(n - 1, e);
    let kappa = (f_n.max(0.0).sqrt() + f_n1.max(0.0).sqrt()) / 2.0;
    let mut u_outer = 1e-120f64;
    let mut u_cur = u_outer * (kappa * h).exp();
    let mut f_outer = f_n;
    let mut f_cur = f_n1;

    let mut window = [0.0f64; 3];
    let record = |idx: usize, u: f64, win: &mut [f64; 3]| {
        if idx + 1 >= stop && idx <= stop + 1 {
            win[idx + 1 - stop] = u;
        }
    };
    record(n, u_outer, &mut window);
    record(n - 1, u_cur, &mut window);

    let mut i = n - 1;
    while i > stop - 1 {
        let f_next = table.f(i - 1, e);
        let u_next = (2.0 * (1.0 + 5.0 * h2_12 * f_cur) * u_cur
            - (1.0 - h2_12 * f_outer) * u_outer)
            / (1.0 - h2_12 * f_next);
        u_outer = u_cur;
        u_cur = u_next;
        f_outer = f_cur;
        f_cur = f_next;
        if u_cur.abs() > 1e250 {
            u_cur *= 1e-250;
            u_outer *= 1e-250;
            for w in window.iter_mut() {
                *w *= 1e-250;
            }
        }
        i -= 1;
        record(i, u_cur, &mut window);
    }
    window
}

/// Solve for the bound state with n_r radial nodes.
///
/// `e_bracket` is given in the model's reporting convention and is
/// widened geometrically when it does not straddle the level.
pub fn solve_bound_state(
    model: &PotentialModel,
    l: u32,
    n_r: usize,
    grid: &RadialGrid,
    e_bracket: (f64, f64),
    tol: f64,
) -> Result<ShootingResult> {
    if !(tol > 0.0) {
        return Err(Error::Validation(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let table = FTable::build(model, l, grid)?;
    let factor = model.convention_factor();
    let mut lo = e_bracket.0.min(e_bracket.1) / factor;
    let mut hi = e_bracket.0.max(e_bracket.1) / factor;
    if lo == hi {
        let pad = 0.05 * lo.abs().max(1.0);
        lo -= pad;
        hi += pad;
    }

    let count = |e: f64| sweep_outward(&table, e, false).nodes;

    // Widen until the node count straddles n_r.
    let mut guard = 0;
    while count(lo) > n_r {
        let width = (hi - lo).max(0.1 * lo.abs().max(1.0));
        lo -= width;
        guard += 1;
        if guard > 120 {
            return Err(Error::NoEigenvalueInBracket(format!(
                "lower edge never reached node count <= {n_r}"
            )));
        }
    }
    guard = 0;
    while count(hi) <= n_r {
        let width = (hi - lo).max(0.1 * hi.abs().max(1.0));
        hi += width;
        guard += 1;
        if guard > 120 {
            return Err(Error::NoEigenvalueInBracket(format!(
                "upper edge never exceeded node count {n_r}"
            )));
        }
    }

    // Bisection on the Sturm predicate.
    let mut iterations = 0usize;
    while hi - lo > tol * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if count(mid) > n_r {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > 400 {
            break;
        }
    }
    let e = 0.5 * (lo + hi);

    let nodes = count(lo);
    if nodes != n_r {
        return Err(Error::NoEigenvalueInBracket(format!(
            "bracket converged onto node count {nodes} instead of {n_r}"
        )));
    }
    let matching_residual = matching_mismatch(&table, e).unwrap_or(f64::NAN);

    Ok(ShootingResult {
        energy: factor * e,
        nodes,
        iterations,
        matching_residual,
    })
}

/// Normalized log-derivative mismatch of the outward and inward sweeps at
/// the outermost classical turning point.
fn matching_mismatch(table: &FTable, e: f64) -> Option<f64> {
    let n = table.len() - 1;
    let mut m = 0usize;
    for i in (1..n).rev() {
        if table.f(i, e) <= 0.0 {
            m = i;
            break;
        }
    }
    if m < 2 || m + 2 > n {
        return None;
    }
    let u = sweep_outward(table, e, true).values?;
    if u[m] == 0.0 {
        return None;
    }
    let lam_out = (u[m + 1] - u[m - 1]) / (2.0 * table.h * u[m]);
    let win = sweep_inward(table, e, m);
    if win[1] == 0.0 {
        return None;
    }
    let lam_in = (win[2] - win[0]) / (2.0 * table.h * win[1]);
    Some((lam_out - lam_in).abs() / (lam_out.abs() + lam_in.abs() + 1.0))
}

/// Outward eigenfunction samples at a given internal energy, normalized
/// to unit maximum amplitude. Reliable through the classically allowed
/// region; the far tail is dominated by the growing solution.
pub fn eigenfunction(
    model: &PotentialModel,
    l: u32,
    e_internal: f64,
    grid: &RadialGrid,
) -> Result<Vec<f64>> {
    let table = FTable::build(model, l, grid)?;
    let mut u = sweep_outward(&table, e_internal, true)
        .values
        .expect("requested values");
    let peak = u.iter().fold(0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 && peak.is_finite() {
        for v in u.iter_mut() {
            *v /= peak;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::ScaleConvention;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol,
            "expected {a} ~ {b} within {tol} (diff {})",
            (a - b).abs()
        );
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(0.0, 1.0, 5000).is_err());
        assert!(RadialGrid::new(2.0, 1.0, 5000).is_err());
        assert!(RadialGrid::new(0.1, 1.0, 10).is_err());
        let g = RadialGrid::new(0.5, 1.5, 1000).unwrap();
        assert_close(g.h(), 1e-3, 1e-15);
    }

    #[test]
    fn pure_ho_ground_state() {
        let m = PotentialModel::pure_ho();
        let grid = RadialGrid::automatic(&m, 0, 1.5).unwrap();
        let r = solve_bound_state(&m, 0, 0, &grid, (1.0, 2.0), 1e-10).unwrap();
        assert_close(r.energy, 1.5, 1e-9);
        assert_eq!(r.nodes, 0);
        assert!(r.matching_residual < 1e-5, "{}", r.matching_residual);
    }

    #[test]
    fn pure_ho_excited_states_by_node_count() {
        let m = PotentialModel::pure_ho();
        for (l, n_r, want) in [(0u32, 1usize, 3.5f64), (1, 0, 2.5), (2, 1, 5.5)] {
            let grid = RadialGrid::automatic(&m, l, want).unwrap();
            let r = solve_bound_state(&m, l, n_r, &grid, (want - 0.8, want + 0.8), 1e-9).unwrap();
            assert_close(r.energy, want, 1e-8);
            assert_eq!(r.nodes, n_r);
        }
    }

    #[test]
    fn hydrogen_ground_state() {
        let m = PotentialModel::pure_coulomb();
        let grid = RadialGrid::automatic(&m, 0, -0.5).unwrap();
        let r = solve_bound_state(&m, 0, 0, &grid, (-0.7, -0.3), 1e-10).unwrap();
        assert_close(r.energy, -0.5, 1e-8);
        assert_eq!(r.nodes, 0);
    }

    #[test]
    fn hydrogen_2p_state() {
        let m = PotentialModel::pure_coulomb();
        let grid = RadialGrid::automatic(&m, 1, -0.125).unwrap();
        let r = solve_bound_state(&m, 1, 0, &grid, (-0.2, -0.05), 1e-10).unwrap();
        assert_close(r.energy, -0.125, 1e-8);
    }

    /// Halving h shrinks the eigenvalue error by about 2^4.
    #[test]
    fn numerov_fourth_order_convergence() {
        let m = PotentialModel::pure_ho();
        let err_at = |steps: usize| -> f64 {
            let grid = RadialGrid::new(1e-8, 12.0, steps).unwrap();
            let r = solve_bound_state(&m, 0, 0, &grid, (1.2, 1.8), 1e-13).unwrap();
            (r.energy - 1.5).abs()
        };
        let e1 = err_at(1000);
        let e2 = err_at(2000);
        let ratio = e1 / e2;
        assert!(
            (10.0..24.0).contains(&ratio),
            "convergence ratio {ratio} not ~16 (errors {e1:.3e}, {e2:.3e})"
        );
    }

    /// Doubled-convention reporting and the exact b = 2 collapse.
    #[test]
    fn spiked_b2_exact_value() {
        let m = PotentialModel::spiked_ho(1000.0, 2.0)
            .unwrap()
            .with_convention(ScaleConvention::Doubled);
        let grid = RadialGrid::automatic(&m, 0, 65.2534584 / 2.0).unwrap();
        let r = solve_bound_state(&m, 0, 0, &grid, (60.0, 70.0), 1e-10).unwrap();
        assert_close(r.energy, 65.2534584, 1e-6);
    }

    #[test]
    fn bracket_auto_widens() {
        let m = PotentialModel::pure_ho();
        let grid = RadialGrid::automatic(&m, 0, 1.5).unwrap();
        let r = solve_bound_state(&m, 0, 0, &grid, (8.0, 9.0), 1e-9).unwrap();
        assert_close(r.energy, 1.5, 1e-8);
    }

    #[test]
    fn truncated_coulomb_sample() {
        // Frozen against the published DNI benchmark for c = 10, 1s.
        let m = PotentialModel::truncated_coulomb(10.0).unwrap();
        let grid = RadialGrid::automatic(&m, 0, -0.0637).unwrap();
        let r = solve_bound_state(&m, 0, 0, &grid, (-0.08, -0.05), 1e-10).unwrap();
        assert_close(r.energy, -0.0637389, 2.5e-7);
    }
}
