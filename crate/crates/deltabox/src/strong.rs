//! Exact solutions of the infinite-coupling limit in the outside region.
//!
//! At infinite coupling the interaction lines `x2 - x1 = +-c` become hard
//! walls. The two outer wedges of the box are right triangles with leg
//! `a = 1 - c`; separation of variables solves them exactly, with
//! free-fermion-like levels `pi^2 (n^2 + m^2) / a^2`. A triangle solution is
//! carried back into the box as a pair of one-wedge pieces, and their
//! symmetric and antisymmetric combinations are simultaneous exchange and
//! reflection eigenstates. Both combinations share one energy, which makes
//! every outside level doubly degenerate across one bosonic and one
//! fermionic sector of opposite parity.
//!
//! The strip between the walls has no closed-form solution; its levels come
//! from the eigensolver at large finite coupling, and [`exclusion_boundary`]
//! locates the displacement where the lowest strip level crosses below the
//! lowest outside level.

use crate::eigen::lowest_eigenpairs;
use crate::error::{Error, Result};
use crate::matrix::assemble_hamiltonian;
use crate::model::{enumerate_basis, Exchange, ModelParams, Parity, Sector};
use std::f64::consts::PI;

/// One exact level of the triangular wedge with legs `a = 1 - c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleState {
    pub n: u32,
    pub m: u32,
    /// Leg length `1 - c`.
    pub a: f64,
    /// `pi^2 (n^2 + m^2) / a^2`.
    pub energy: f64,
}

impl TriangleState {
    /// Requires `n > m >= 1` and `0 <= c < 1`; at `c = 1` the wedge has zero
    /// width.
    pub fn new(n: u32, m: u32, c: f64) -> Result<Self> {
        if !(n > m && m >= 1) {
            return Err(Error::InvalidArgument(format!(
                "triangle indices must satisfy n > m >= 1, got ({n}, {m})"
            )));
        }
        if !(0.0..1.0).contains(&c) {
            return Err(Error::InvalidArgument(format!(
                "displacement must lie in [0, 1), got {c}"
            )));
        }
        let a = 1.0 - c;
        Ok(Self {
            n,
            m,
            a,
            energy: PI * PI * f64::from(n * n + m * m) / (a * a),
        })
    }

    pub fn displacement(&self) -> f64 {
        1.0 - self.a
    }
}

/// Which outer wedge a snippet lives in: `I` is the upper wedge
/// `x2 - x1 >= c`, `III` the lower one `x1 - x2 >= c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    I,
    III,
}

/// How the two snippets are combined in [`outside_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    Sym,
    Antisym,
}

/// Normalized antisymmetric two-mode solution of the triangle `0 <= u <= v
/// <= a`, evaluated by its closed form (which extends antisymmetrically to
/// the whole square).
pub fn triangle_eigenfunction(state: &TriangleState, u: f64, v: f64) -> f64 {
    let a = state.a;
    let kn = PI * f64::from(state.n) / a;
    let km = PI * f64::from(state.m) / a;
    (2.0 / a) * ((kn * u).sin() * (km * v).sin() - (km * u).sin() * (kn * v).sin())
}

/// One-wedge piece of a triangle solution, expressed in the box
/// coordinates. Each region's piece vanishes identically outside its wedge,
/// and exchanging the particles maps one piece onto the other:
/// region III evaluates as the exchange image of region I.
pub fn snippet_eval(region: Region, state: &TriangleState, c: f64, x1: f64, x2: f64) -> f64 {
    match region {
        Region::I => {
            if x2 - x1 >= c {
                triangle_eigenfunction(state, x1, x2 - c)
            } else {
                0.0
            }
        }
        Region::III => {
            if x1 - x2 >= c {
                triangle_eigenfunction(state, x2, x1 - c)
            } else {
                0.0
            }
        }
    }
}

/// Normalized symmetric or antisymmetric combination of the two snippets.
/// The symmetric one is exchange-even with reflection parity
/// `-(-1)^(n+m)`; the antisymmetric one is exchange-odd with parity
/// `+(-1)^(n+m)`.
pub fn outside_state(
    combination: Combination,
    state: &TriangleState,
    c: f64,
    x1: f64,
    x2: f64,
) -> f64 {
    let upper = snippet_eval(Region::I, state, c, x1, x2);
    let lower = snippet_eval(Region::III, state, c, x1, x2);
    match combination {
        Combination::Sym => (upper + lower) / std::f64::consts::SQRT_2,
        Combination::Antisym => (upper - lower) / std::f64::consts::SQRT_2,
    }
}

/// Reflection parity carried by a combination built on `(n, m)`.
pub fn combination_parity(combination: Combination, n: u32, m: u32) -> Parity {
    let even_sum = (n + m) % 2 == 0;
    match (combination, even_sum) {
        (Combination::Sym, true) | (Combination::Antisym, false) => Parity::Odd,
        (Combination::Sym, false) | (Combination::Antisym, true) => Parity::Even,
    }
}

/// One doubly degenerate outside level with its two sector labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutsideLevel {
    pub triangle: TriangleState,
    /// Sector of the symmetric (exchange-even) combination.
    pub bosonic: Sector,
    /// Sector of the antisymmetric (exchange-odd) combination.
    pub fermionic: Sector,
}

impl OutsideLevel {
    fn new(triangle: TriangleState) -> Self {
        let (n, m) = (triangle.n, triangle.m);
        Self {
            triangle,
            bosonic: Sector::new(
                Exchange::Bosonic,
                combination_parity(Combination::Sym, n, m),
            ),
            fermionic: Sector::new(
                Exchange::Fermionic,
                combination_parity(Combination::Antisym, n, m),
            ),
        }
    }

    pub fn energy(&self) -> f64 {
        self.triangle.energy
    }
}

/// All outside levels with energy up to `e_max`, ascending; ties are ordered
/// by their index pair.
pub fn outside_spectrum(c: f64, e_max: f64) -> Result<Vec<OutsideLevel>> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "displacement must lie in [0, 1), got {c}"
        )));
    }
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy cutoff must be positive and finite, got {e_max}"
        )));
    }
    let a = 1.0 - c;
    let cap = e_max * a * a / (PI * PI);
    let mut levels = Vec::new();
    let n_top = cap.sqrt().floor() as u32 + 1;
    for n in 2..=n_top {
        for m in 1..n {
            if f64::from(n * n + m * m) <= cap {
                levels.push(OutsideLevel::new(TriangleState::new(n, m, c)?));
            }
        }
    }
    levels.sort_by_key(|l| (l.triangle.n * l.triangle.n + l.triangle.m * l.triangle.m, l.triangle.n));
    Ok(levels)
}

/// Lowest outside energy whose degenerate pair covers `sector`.
pub fn outside_ground_energy(sector: Sector, c: f64) -> Result<f64> {
    // The lowest candidates are (2,1) for odd index sum and (3,1) for even;
    // a cutoff of 15 pi^2 / a^2 covers both.
    let a = 1.0 - c;
    let spectrum = outside_spectrum(c, PI * PI * 15.0 / (a * a))?;
    spectrum
        .iter()
        .find(|l| l.bosonic == sector || l.fermionic == sector)
        .map(OutsideLevel::energy)
        .ok_or_else(|| Error::Numeric("outside level scan cutoff too low".into()))
}

/// Mean of `|ed - analytic| / |analytic|` over paired values.
pub fn mean_relative_error(ed_values: &[f64], analytic_values: &[f64]) -> Result<f64> {
    if ed_values.len() != analytic_values.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            ed_values.len(),
            analytic_values.len()
        )));
    }
    if ed_values.is_empty() {
        return Err(Error::InvalidArgument("empty value lists".into()));
    }
    if analytic_values.iter().any(|&a| a == 0.0) {
        return Err(Error::InvalidArgument(
            "analytic reference values must be nonzero".into(),
        ));
    }
    let sum: f64 = ed_values
        .iter()
        .zip(analytic_values)
        .map(|(e, a)| (e - a).abs() / a.abs())
        .sum();
    Ok(sum / ed_values.len() as f64)
}

/// Displacement at which the lowest strip level (from large-coupling
/// diagonalization) crosses below the lowest outside level of `sector`,
/// located by bisection of the energy difference on `[c_lo, c_hi]`.
///
/// Requires the bracket to straddle the crossing: at `c_lo` the spectrum
/// bottom must be outside levels only, at `c_hi` a strip level must sit
/// below them. `tol` is the eigensolver residual tolerance; large couplings
/// push the matrix norm up and need a looser value than the default.
pub fn exclusion_boundary(
    sector: Sector,
    g: f64,
    n_max: u32,
    c_lo: f64,
    c_hi: f64,
    tol_c: f64,
    tol: f64,
) -> Result<f64> {
    if !(0.0 <= c_lo && c_lo < c_hi && c_hi < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "bracket must satisfy 0 <= c_lo < c_hi < 1, got [{c_lo}, {c_hi}]"
        )));
    }
    if !(tol_c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bracket tolerance must be positive, got {tol_c}"
        )));
    }
    let f = |c: f64| -> Result<f64> { crossing_gap(sector, g, n_max, c, tol) };
    let mut lo = c_lo;
    let mut hi = c_hi;
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Numeric(format!(
            "bracket does not straddle the crossing: gap({lo}) = {f_lo:.3e}, gap({hi}) = {f_hi:.3e}"
        )));
    }
    while hi - lo > tol_c {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Signed gap `e_out_ground - e_strip_ground` at one displacement; negative
/// while the outside levels own the spectrum bottom (exclusion regime).
fn crossing_gap(sector: Sector, g: f64, n_max: u32, c: f64, tol: f64) -> Result<f64> {
    const LEVELS: usize = 8;
    // A strip level counts as such when it matches no outside energy within
    // this relative window.
    const MATCH_WINDOW: f64 = 0.02;
    let out_ground = outside_ground_energy(sector, c)?;
    let basis = enumerate_basis(sector, n_max)?;
    let h = assemble_hamiltonian(&basis, ModelParams::new(g, c)?);
    let solution = lowest_eigenpairs(&h, LEVELS.min(basis.len()), tol)?;
    let a = 1.0 - c;
    let top = solution.eigenvalues.last().copied().unwrap_or(out_ground);
    let outside: Vec<f64> = outside_spectrum(c, top / (1.0 - MATCH_WINDOW) + PI * PI / (a * a))?
        .into_iter()
        .filter(|l| l.bosonic == sector || l.fermionic == sector)
        .map(|l| l.energy())
        .collect();
    let strip_ground = solution.eigenvalues.iter().copied().find(|&e| {
        outside
            .iter()
            .all(|&o| (e - o).abs() > MATCH_WINDOW * o)
    });
    match strip_ground {
        Some(e) => Ok(out_ground - e),
        // Every resolved level matches an outside energy: deep exclusion.
        None => Ok(-1.0),
    }
}
