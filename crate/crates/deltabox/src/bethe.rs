//! Exact levels of the undisplaced contact interaction (`c = 0`).
//!
//! At zero displacement the two interaction lines coincide on the box
//! diagonal and act as a single contact of twice the coupling. In
//! center-of-mass-like coordinates each bosonic level decouples into two
//! one-dimensional transcendental equations
//!
//! ```text
//! q = 2 arctan(g / q) + pi * offset
//! ```
//!
//! solved once with `offset = n + m` for the total quasi-momentum `K` and
//! once with `offset = n - m` for the relative one, `Delta`. The energy is
//! `(K^2 + Delta^2) / 2`. Fermionic states vanish on the diagonal and do not
//! feel the interaction at all, so their levels stay at the non-interacting
//! values for every coupling.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Width at which bisection stops before the final Newton polish.
const BISECTION_WIDTH: f64 = 1e-13;

/// Residual target for the solved quasi-momentum equations.
const ROOT_TOL: f64 = 1e-12;

/// One exact bosonic level at `c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetheLevel {
    pub n: u32,
    pub m: u32,
    /// Total quasi-momentum, in `(pi (n + m), pi (n + m + 1))` for `g > 0`.
    pub k: f64,
    /// Relative quasi-momentum, in `(pi (n - m), pi (n - m + 1))` for
    /// `g > 0`.
    pub delta: f64,
    pub energy: f64,
}

/// Solves `q = 2 arctan(g / q) + pi * offset` for the unique root in
/// `(pi * offset, pi * (offset + 1)]`.
///
/// The root is bracketed analytically: the left-hand side minus the
/// right-hand side is strictly increasing in `q` and changes sign across the
/// interval. Bisection runs to a fixed width, one Newton step polishes, and
/// the result must satisfy `|f(q)| <= tol`. At `g = 0` the root degenerates
/// to the lower endpoint and is returned analytically.
pub fn solve_quasimomentum(offset: u32, g: f64, tol: f64) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "coupling must be non-negative, got {g}"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let base = PI * f64::from(offset);
    if g == 0.0 {
        return Ok(base);
    }
    // f(0) = -pi through atan(+inf), so the offset = 0 bracket needs no
    // special casing.
    let f = |q: f64| q - 2.0 * (g / q).atan() - base;
    let mut lo = base;
    let mut hi = base + PI;
    if f(hi) < 0.0 {
        // Unreachable for finite g; guard against misuse of the bracket.
        return Err(Error::Numeric(format!(
            "no sign change on the bracket ({lo}, {hi}] for g = {g}"
        )));
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut q = 0.5 * (lo + hi);
    let derivative = 1.0 + 2.0 * g / (q * q + g * g);
    q -= f(q) / derivative;
    let residual = f(q).abs();
    if residual > tol {
        return Err(Error::NoConvergence {
            iterations: 1,
            residual,
            tolerance: tol,
        });
    }
    Ok(q)
}

/// Exact bosonic level `(n, m)` at coupling `g >= 0`.
pub fn bosonic_level(n: u32, m: u32, g: f64) -> Result<BetheLevel> {
    if !(n >= m && m >= 1) {
        return Err(Error::InvalidArgument(format!(
            "bosonic indices must satisfy n >= m >= 1, got ({n}, {m})"
        )));
    }
    let k = solve_quasimomentum(n + m, g, ROOT_TOL)?;
    let delta = solve_quasimomentum(n - m, g, ROOT_TOL)?;
    Ok(BetheLevel {
        n,
        m,
        k,
        delta,
        energy: 0.5 * (k * k + delta * delta),
    })
}

/// Exact fermionic level `(n, m)`: the non-interacting energy
/// `pi^2 (n^2 + m^2)`, independent of the coupling.
pub fn fermionic_level(n: u32, m: u32) -> Result<f64> {
    if !(n > m && m >= 1) {
        return Err(Error::InvalidArgument(format!(
            "fermionic indices must satisfy n > m >= 1, got ({n}, {m})"
        )));
    }
    Ok(PI * PI * f64::from(n * n + m * m))
}

/// Analytic coupling limits of a bosonic level: the non-interacting value at
/// `g = 0` and the free-fermion-like value `pi^2 ((n+1)^2 + m^2)` at
/// `g -> infinity`. Every finite-coupling level lies strictly between them.
pub fn bosonic_level_limit_check(n: u32, m: u32) -> Result<(f64, f64)> {
    if !(n >= m && m >= 1) {
        return Err(Error::InvalidArgument(format!(
            "bosonic indices must satisfy n >= m >= 1, got ({n}, {m})"
        )));
    }
    let low = PI * PI * f64::from(n * n + m * m);
    let high = PI * PI * f64::from((n + 1) * (n + 1) + m * m);
    Ok((low, high))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_coupling_returns_bracket_endpoint_exactly() {
        assert_eq!(solve_quasimomentum(2, 0.0, 1e-12).unwrap(), 2.0 * PI);
        assert_eq!(solve_quasimomentum(0, 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn huge_coupling_approaches_upper_endpoint() {
        let q = solve_quasimomentum(2, 1e12, 1e-12).unwrap();
        assert_abs_diff_eq!(q, 3.0 * PI, epsilon = 1e-5);
    }

    #[test]
    fn roots_stay_in_their_brackets() {
        for offset in [0u32, 1, 2, 5, 40] {
            for g in [1e-6, 0.1, 1.0, 20.0, 1e4] {
                let q = solve_quasimomentum(offset, g, 1e-12).unwrap();
                let base = PI * f64::from(offset);
                assert!(q > base && q <= base + PI, "offset={offset} g={g} q={q}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(solve_quasimomentum(1, -1.0, 1e-12).is_err());
        assert!(solve_quasimomentum(1, f64::NAN, 1e-12).is_err());
        assert!(solve_quasimomentum(1, 1.0, 0.0).is_err());
        assert!(bosonic_level(1, 2, 1.0).is_err());
        assert!(bosonic_level(1, 0, 1.0).is_err());
        assert!(fermionic_level(2, 2).is_err());
        assert!(fermionic_level(1, 2).is_err());
    }

    #[test]
    fn tabulated_ground_state_energies() {
        // Reference energies known to five published decimals (the last
        // digit is truncated, not rounded, so compare with a window).
        assert_abs_diff_eq!(bosonic_level(1, 1, 1.0).unwrap().energy, 22.53213, epsilon = 1e-5);
        assert_abs_diff_eq!(
            bosonic_level(1, 1, 20.0).unwrap().energy,
            41.16319,
            epsilon = 1e-5
        );
        assert_abs_diff_eq!(
            bosonic_level(1, 1, 100.0).unwrap().energy,
            47.43657,
            epsilon = 1e-5
        );
        assert_abs_diff_eq!(bosonic_level(2, 1, 1.0).unwrap().energy, 53.13085, epsilon = 1e-5);
        assert_abs_diff_eq!(
            bosonic_level(2, 1, 20.0).unwrap().energy,
            82.75898,
            epsilon = 1e-5
        );
        assert_abs_diff_eq!(
            bosonic_level(2, 1, 100.0).unwrap().energy,
            94.87942,
            epsilon = 1e-5
        );
    }

    #[test]
    fn noninteracting_level_is_exact() {
        let level = bosonic_level(1, 1, 0.0).unwrap();
        assert_eq!(level.energy, 0.5 * (2.0 * PI) * (2.0 * PI));
        assert_eq!(level.k, 2.0 * PI);
        assert_eq!(level.delta, 0.0);
    }

    #[test]
    fn fermionic_levels_are_pure_squares() {
        assert_eq!(fermionic_level(2, 1).unwrap(), PI * PI * 5.0);
        assert_eq!(fermionic_level(3, 1).unwrap(), PI * PI * 10.0);
        assert_eq!(fermionic_level(3, 2).unwrap(), PI * PI * 13.0);
    }

    #[test]
    fn energy_identity_holds_exactly() {
        for (n, m, g) in [(1, 1, 3.0), (4, 2, 17.5), (5, 5, 0.25)] {
            let level = bosonic_level(n, m, g).unwrap();
            assert_eq!(level.energy, 0.5 * (level.k * level.k + level.delta * level.delta));
        }
    }

    #[test]
    fn limits_bracket_every_finite_coupling() {
        for (n, m) in [(1u32, 1u32), (2, 1), (3, 3), (6, 2)] {
            let (low, high) = bosonic_level_limit_check(n, m).unwrap();
            assert_abs_diff_eq!(
                bosonic_level(n, m, 1e-8).unwrap().energy,
                low,
                epsilon = 1e-6
            );
            // The approach to the stiff limit is first order in 1/g with
            // slope 4 * energy, so that is the attainable window at finite g.
            let g = 1e8;
            assert_abs_diff_eq!(
                bosonic_level(n, m, g).unwrap().energy,
                high,
                epsilon = 5.0 * high / g
            );
            for g in [0.01, 1.0, 100.0] {
                let e = bosonic_level(n, m, g).unwrap().energy;
                assert!(e > low && e < high);
            }
        }
    }

    #[test]
    fn expected_limit_values() {
        let (low, high) = bosonic_level_limit_check(1, 1).unwrap();
        assert_eq!(low, PI * PI * 2.0);
        assert_eq!(high, PI * PI * 5.0);
        let (low, high) = bosonic_level_limit_check(2, 1).unwrap();
        assert_eq!(low, PI * PI * 5.0);
        assert_eq!(high, PI * PI * 10.0);
    }

    #[test]
    fn energies_increase_with_coupling() {
        let mut last = bosonic_level(1, 1, 0.0).unwrap().energy;
        for g in [0.1, 1.0, 10.0, 100.0, 1000.0] {
            let e = bosonic_level(1, 1, g).unwrap().energy;
            assert!(e > last, "not increasing at g={g}");
            last = e;
        }
    }
}
