//! Rational resummation of the energy correction series.
//!
//! The truncated series in 1/lbar can be slowly convergent or outright
//! asymptotic; fitting an [N/M] rational function that reproduces the
//! series through order N+M and evaluating it at 1/lbar recovers several
//! digits. Denominator coefficients come from the standard M x M Toeplitz
//! system solved by row-pivoted elimination; the tables are tiny (M <= 4)
//! so no refinement is attempted, but an explicit condition estimate
//! guards against near-singular fits.

use crate::error::{Error, Result};
use crate::riccati::EnergySeries;

/// Condition-number estimate above which a fit is declared degenerate.
const CONDITION_LIMIT: f64 = 1e12;

/// Relative tolerance for the expansion-match invariant.
const MATCH_REL: f64 = 1e-9;

/// [N/M] rational function with unit denominator constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    /// Numerator coefficients p_0..p_N.
    num: Vec<f64>,
    /// Denominator coefficients 1, q_1..q_M.
    den: Vec<f64>,
    /// 1-norm condition estimate of the denominator system.
    condition: f64,
}

impl PadeApproximant {
    pub fn numerator(&self) -> &[f64] {
        &self.num
    }

    pub fn denominator(&self) -> &[f64] {
        &self.den
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.num.len() - 1, self.den.len() - 1)
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.num, x) / horner(&self.den, x)
    }

    /// Maclaurin coefficients of num/den through the given order.
    pub fn expansion(&self, through: usize) -> Vec<f64> {
        let mut s = Vec::with_capacity(through + 1);
        for i in 0..=through {
            let mut v = self.num.get(i).copied().unwrap_or(0.0);
            for j in 1..=i.min(self.den.len() - 1) {
                v -= self.den[j] * s[i - j];
            }
            s.push(v);
        }
        s
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Fit the [N/M] approximant to series coefficients c_0..c_{N+M}.
///
/// An identically-zero series yields the zero approximant. A singular or
/// ill-conditioned denominator system is reported as a degenerate table;
/// callers are expected to fall back to the truncated sum.
pub fn fit_pade(series: &[f64], n: usize, m: usize) -> Result<PadeApproximant> {
    if series.len() < n + m + 1 {
        return Err(Error::Validation(format!(
            "series carries {} coefficients, [{}par{}] needs {}",
            series.len(),
            n,
            m,
            n + m + 1
        )));
    }
    if series.iter().any(|c| !c.is_finite()) {
        return Err(Error::Validation(
            "series coefficients must be finite".into(),
        ));
    }
    let scale = series[..=n + m].iter().fold(0f64, |s, c| s.max(c.abs()));
    if scale == 0.0 {
        return Ok(PadeApproximant {
            num: vec![0.0; n + 1],
            den: vec![1.0],
            condition: 1.0,
        });
    }

    let c = |i: isize| -> f64 {
        if i < 0 {
            0.0
        } else {
            series[i as usize]
        }
    };

    // Toeplitz system for q_1..q_M:
    //   sum_j q_j c_{n-j+i} = -c_{n+i},  i = 1..M.
    let mut den = vec![1.0];
    let mut condition = 1.0;
    if m > 0 {
        let mut a = vec![vec![0.0; m]; m];
        let mut rhs = vec![0.0; m];
        for i in 1..=m {
            for j in 1..=m {
                a[i - 1][j - 1] = c(n as isize - j as isize + i as isize);
            }
            rhs[i - 1] = -c((n + i) as isize);
        }
        if a.iter().flatten().all(|v| *v == 0.0) && rhs.iter().all(|v| *v == 0.0) {
            // Series already terminates: the rational function is the
            // plain numerator polynomial.
            den.extend(std::iter::repeat_n(0.0, m));
        } else {
            let (q, cond) = solve_dense(&a, &rhs).ok_or_else(|| Error::DegenerateTable {
                reason: "singular denominator system".into(),
                condition: f64::INFINITY,
                residual: f64::NAN,
            })?;
            condition = cond;
            if !cond.is_finite() || cond > CONDITION_LIMIT {
                return Err(Error::DegenerateTable {
                    reason: "denominator system ill-conditioned".into(),
                    condition: cond,
                    residual: f64::NAN,
                });
            }
            den.extend(q);
        }
    }

    // Numerator by convolution.
    let mut num = vec![0.0; n + 1];
    for (i, slot) in num.iter_mut().enumerate() {
        let mut v = 0.0;
        for (j, &qj) in den.iter().enumerate().take(i + 1) {
            v += qj * c(i as isize - j as isize);
        }
        *slot = v;
    }

    let p = PadeApproximant {
        num,
        den,
        condition,
    };

    // Expansion-match invariant: reproduce the input through order N+M.
    let expansion = p.expansion(n + m);
    let residual = expansion
        .iter()
        .zip(series.iter())
        .fold(0f64, |r, (a, b)| r.max((a - b).abs()));
    if residual > MATCH_REL * scale {
        return Err(Error::DegenerateTable {
            reason: "fit does not reproduce the input series".into(),
            condition,
            residual,
        });
    }
    Ok(p)
}

/// Row-pivoted Gaussian elimination; returns the solution and a 1-norm
/// condition estimate (via the explicit inverse; systems here are <= 4x4).
fn solve_dense(a: &[Vec<f64>], rhs: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = rhs.len();
    // Augment with the identity to extract the inverse for the estimate.
    let mut aug = vec![vec![0.0; 2 * n + 1]; n];
    for i in 0..n {
        aug[i][..n].copy_from_slice(&a[i]);
        aug[i][n] = rhs[i];
        aug[i][n + 1 + i] = 1.0;
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| aug[r1][col].abs().partial_cmp(&aug[r2][col].abs()).unwrap())?;
        if aug[pivot_row][col] == 0.0 {
            return None;
        }
        aug.swap(col, pivot_row);
        let pivot = aug[col][col];
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = aug[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..(2 * n + 1) {
                aug[row][k] -= factor * aug[col][k];
            }
        }
    }
    let x: Vec<f64> = (0..n).map(|i| aug[i][n] / aug[i][i]).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    // ||A||_1 * ||A^-1||_1.
    let norm_a = (0..n)
        .map(|j| (0..n).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0f64, f64::max);
    let norm_inv = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| (aug[i][n + 1 + j] / aug[i][i]).abs())
                .sum::<f64>()
        })
        .fold(0f64, f64::max);
    Some((x, norm_a * norm_inv))
}

/// Resummed total energy: convention * [lbar^2 E^(-2) + P_N^M(1/lbar)].
///
/// [N, M] means numerator degree N, denominator degree M; [N, N+1] is the
/// lower-bound member of the Stieltjes pair. Degenerate tables propagate;
/// callers fall back to the truncated sum.
pub fn resummed_energy(series: &EnergySeries, n: usize, m: usize) -> Result<f64> {
    let p = fit_pade(&series.corrections, n, m)?;
    let x = 1.0 / series.lbar;
    Ok(series.convention_factor * (series.lbar * series.lbar * series.e_minus2 + p.eval(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        let scale = a.abs().max(b.abs()).max(1.0);
        assert!(
            (a - b).abs() <= tol * scale,
            "expected {a} ~ {b} (diff {})",
            (a - b).abs()
        );
    }

    #[test]
    fn geometric_series_is_recovered_exactly() {
        let p = fit_pade(&[1.0, 1.0, 1.0], 1, 1).unwrap();
        assert_eq!(p.numerator(), &[1.0, 0.0]);
        assert_eq!(p.denominator(), &[1.0, -1.0]);
        assert_close(p.eval(0.5), 2.0, 1e-14);
    }

    #[test]
    fn constant_series() {
        let p = fit_pade(&[1.0, 0.0, 0.0, 0.0, 0.0], 2, 2).unwrap();
        for x in [-0.5, 0.0, 0.3, 0.9] {
            assert_close(p.eval(x), 1.0, 1e-12);
        }
    }

    /// [3/3] of exp truncated at 7 terms against the classical closed form
    /// (120 + 60x + 12x^2 + x^3)/(120 - 60x + 12x^2 - x^3).
    #[test]
    fn exponential_pade_33() {
        let mut series = [0.0; 7];
        let mut fact = 1.0;
        for (k, slot) in series.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *slot = 1.0 / fact;
        }
        let p = fit_pade(&series, 3, 3).unwrap();
        let closed = |x: f64| {
            (120.0 + 60.0 * x + 12.0 * x * x + x * x * x)
                / (120.0 - 60.0 * x + 12.0 * x * x - x * x * x)
        };
        assert_close(p.eval(1.0), closed(1.0), 1e-12);
        assert!((p.eval(1.0) - 1f64.exp()).abs() < 3e-5);
    }

    #[test]
    fn expansion_match_invariant() {
        let series = [2.0, -0.7, 0.31, -0.113, 0.047, -0.019, 0.008, -0.0031];
        let p = fit_pade(&series, 3, 4).unwrap();
        let exp = p.expansion(7);
        for (a, b) in exp.iter().zip(series.iter()) {
            assert_close(*a, *b, 1e-9);
        }
    }

    #[test]
    fn zero_series_yields_zero_without_error() {
        let p = fit_pade(&[0.0; 7], 3, 3).unwrap();
        assert_close(p.eval(0.37), 0.0, 1e-15);
    }

    #[test]
    fn degenerate_series_reported() {
        // c_{n+i} rows collinear: [1, x, x^2, ...] with x fixed makes the
        // 2x2 Toeplitz block singular beyond the geometric rank.
        let err = fit_pade(&[1.0, 2.0, 4.0, 8.0, 16.0], 2, 2);
        assert!(matches!(err, Err(Error::DegenerateTable { .. })), "{err:?}");
    }

    #[test]
    fn short_series_rejected() {
        assert!(matches!(
            fit_pade(&[1.0, 2.0], 3, 3),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn resummed_energy_zero_series_is_leading_term() {
        let series = EnergySeries {
            e_minus2: 2.0 / 3.0,
            corrections: vec![0.0; 8],
            lbar: 1.5,
            convention_factor: 1.0,
        };
        assert_close(resummed_energy(&series, 3, 3).unwrap(), 1.5, 1e-14);
        assert_close(resummed_energy(&series, 3, 4).unwrap(), 1.5, 1e-14);
    }
}
