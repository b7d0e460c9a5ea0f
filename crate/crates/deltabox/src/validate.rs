//! End-to-end checks of the published reference numbers and contracts.
//!
//! Each criterion function reproduces one quantitative claim with every
//! tolerance pinned in code, returns a [`CriterionReport`] with one line per
//! sub-check, and never weakens a bound to pass: a report with
//! `passed == false` carries the measured numbers that show how far the
//! implementation lands from the stated target.

use crate::bethe::{bosonic_level, fermionic_level};
use crate::dark::{enumerate_dark_states, verify_dark, RationalC};
use crate::eigen::{lowest_eigenpairs, EigenSolution, DEFAULT_TOL};
use crate::error::Result;
use crate::matrix::{
    assemble_hamiltonian, potential_element, potential_element_for_labels,
    quadrature_potential_element,
};
use crate::model::{enumerate_basis, BasisPair, Exchange, ModelParams, Sector};
use crate::strong::outside_ground_energy;
use crate::wavefunction::region_weights;
use std::f64::consts::PI;

/// Basis cutoff for the desk-scale diagonalization runs.
pub const ED_NMAX: u32 = 120;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    /// One line per sub-check, each carrying the measured value.
    pub lines: Vec<String>,
}

impl CriterionReport {
    fn new(index: usize, name: &'static str) -> Self {
        Self {
            index,
            name,
            passed: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.lines
            .push(format!("{} {detail}", if ok { "  ok " } else { "FAIL " }));
    }

    pub fn summary_line(&self) -> String {
        format!(
            "criterion {} ({}): {}",
            self.index,
            self.name,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Reference ground energies at coincident lines, bosonic-even sector, as
/// `(g, energy)`, truncated to five decimals in the source table.
const BETHE_EVEN: [(f64, f64); 3] = [(1.0, 22.53213), (20.0, 41.16319), (100.0, 47.43657)];
/// Bosonic-odd counterparts.
const BETHE_ODD: [(f64, f64); 3] = [(1.0, 53.13085), (20.0, 82.75898), (100.0, 94.87942)];

fn bos_even() -> Sector {
    Sector::from_signs(1, 1).unwrap()
}

fn sector_levels(sector: Sector, g: f64, c: f64, n_max: u32, k: usize) -> Result<EigenSolution> {
    sector_levels_tol(sector, g, c, n_max, k, DEFAULT_TOL)
}

fn sector_levels_tol(
    sector: Sector,
    g: f64,
    c: f64,
    n_max: u32,
    k: usize,
    tol: f64,
) -> Result<EigenSolution> {
    let basis = enumerate_basis(sector, n_max)?;
    let h = assemble_hamiltonian(&basis, ModelParams::new(g, c)?);
    lowest_eigenpairs(&h, k, tol)
}

/// Exact-solution reference energies: six bosonic ground values to five
/// decimals, fermionic grounds bit-exact.
pub fn criterion_1() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(1, "Bethe reference energies");
    for (sector, table, pair) in [
        ("(+1,+1)", BETHE_EVEN, (1u32, 1u32)),
        ("(+1,-1)", BETHE_ODD, (2, 1)),
    ] {
        for (g, target) in table {
            let level = bosonic_level(pair.0, pair.1, g)?;
            let diff = (level.energy - target).abs();
            report.check(
                diff < 1e-5,
                format!("{sector} g={g}: |{:.7} - {target}| = {diff:.3e} < 1e-5", level.energy),
            );
        }
    }
    let five = fermionic_level(2, 1)?;
    let ten = fermionic_level(3, 1)?;
    report.check(five == PI * PI * 5.0, format!("(-1,-1) ground = {five} exactly 5 pi^2"));
    report.check(ten == PI * PI * 10.0, format!("(-1,+1) ground = {ten} exactly 10 pi^2"));
    Ok(report)
}

/// Diagonalization against the exact solution at coincident lines. Bosonic
/// bounds: 1e-4 relative at g=1, 2.5e-3 at g=20 and g=100; fermionic levels
/// must be non-interacting to 1e-9 relative.
pub fn criterion_2() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(2, "diagonalization against exact energies");
    for (label, sigma_pi, pair) in [("(+1,+1)", (1, 1), (1u32, 1u32)), ("(+1,-1)", (1, -1), (2, 1))] {
        let sector = Sector::from_signs(sigma_pi.0, sigma_pi.1)?;
        for g in [1.0, 20.0, 100.0] {
            let exact = bosonic_level(pair.0, pair.1, g)?.energy;
            let ed = sector_levels(sector, g, 0.0, ED_NMAX, 1)?.eigenvalues[0];
            let rel = ((ed - exact) / exact).abs();
            let bound = if g == 1.0 { 1e-4 } else { 2.5e-3 };
            report.check(
                rel <= bound,
                format!("{label} g={g}: ED {ed:.6} vs exact {exact:.6}, rel {rel:.3e} <= {bound:.1e}"),
            );
        }
    }
    for (label, sigma_pi, norm2) in [("(-1,-1)", (-1, -1), 5.0), ("(-1,+1)", (-1, 1), 10.0)] {
        let sector = Sector::from_signs(sigma_pi.0, sigma_pi.1)?;
        for g in [1.0, 20.0, 100.0] {
            let exact = PI * PI * norm2;
            let ed = sector_levels(sector, g, 0.0, ED_NMAX, 1)?.eigenvalues[0];
            let rel = ((ed - exact) / exact).abs();
            report.check(
                rel <= 1e-9,
                format!("{label} g={g}: rel {rel:.3e} <= 1e-9"),
            );
        }
    }
    Ok(report)
}

/// Catalog of the lowest blind state per sector at the three reference
/// displacements, with decoupling residuals.
pub fn criterion_3() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(3, "dark catalog");
    let rows: [(RationalC, (i32, i32), (u32, u32), u64); 4] = [
        (RationalC::new(1, 2)?, (1, 1), (2, 1), 20),
        (RationalC::new(1, 2)?, (-1, 1), (3, 1), 40),
        (RationalC::new(1, 3)?, (1, -1), (4, 2), 45),
        (RationalC::new(2, 3)?, (-1, -1), (2, 1), 45),
    ];
    for (c, (sigma, pi), primitive, norm2) in rows {
        let sector = Sector::from_signs(sigma, pi)?;
        let states = enumerate_dark_states(c, 50.0 * PI * PI)?;
        match states.iter().find(|s| s.sector == sector) {
            Some(state) => {
                let matches = (state.n, state.m) == primitive && state.norm2() == norm2;
                report.check(
                    matches,
                    format!(
                        "c={c} ({sigma:+},{pi:+}): lowest ({}, {}) at {} pi^2, expected {:?} at {norm2}",
                        state.n, state.m, state.norm2(), primitive
                    ),
                );
                let residual = verify_dark(c, state.box_n, state.box_m, sector, 60)?;
                report.check(
                    residual <= 1e-12,
                    format!("c={c} ({sigma:+},{pi:+}): decoupling residual {residual:.3e} <= 1e-12"),
                );
            }
            None => report.check(false, format!("c={c} ({sigma:+},{pi:+}): no state found")),
        }
    }
    Ok(report)
}

/// Coupling-independence of the blind level at half displacement, plus the
/// monotonic approach of the two levels beneath it.
pub fn criterion_4() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(4, "dark flatness");
    let target = PI * PI * 20.0;
    let mut below = [Vec::new(), Vec::new()];
    for g in [0.0, 1.0, 20.0, 100.0] {
        let solution = sector_levels(bos_even(), g, 0.5, ED_NMAX, 8)?;
        let values = &solution.eigenvalues;
        let nearest = (0..values.len())
            .min_by(|&i, &j| {
                (values[i] - target)
                    .abs()
                    .total_cmp(&(values[j] - target).abs())
            })
            .unwrap();
        let rel = ((values[nearest] - target) / target).abs();
        report.check(
            rel <= 1e-8,
            format!("g={g}: nearest {:.10} vs 20 pi^2, rel {rel:.3e} <= 1e-8", values[nearest]),
        );
        if nearest < 2 {
            report.check(false, format!("g={g}: blind level has no two levels below"));
            continue;
        }
        below[0].push(values[nearest - 1]);
        below[1].push(values[nearest - 2]);
    }
    for (which, series) in below.iter().enumerate() {
        let monotone = series.windows(2).all(|w| w[1] > w[0]);
        report.check(
            monotone,
            format!(
                "level {} below the blind one increases with g: {:?}",
                which + 1,
                series.iter().map(|v| (v / (PI * PI) * 1e4).round() / 1e4).collect::<Vec<_>>()
            ),
        );
    }
    Ok(report)
}

/// Closed-form matrix elements against adaptive line quadrature over
/// stratified random samples, exact selection-rule zeros, and label-swap
/// invariance.
pub fn criterion_5() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(5, "matrix-element oracle");
    let mut rng = Lcg(0x5eed_cafe_f00d_0001);
    let mut worst_quad = 0.0f64;
    let mut worst_swap = 0.0f64;
    let mut samples = 0usize;
    // Strata pin the five closed-form branches: generic frequencies, equal
    // frequencies, one zero on either side, and both zero (diagonal
    // elements exercise it through the difference patterns).
    for stratum in 0..5 {
        for rep in 0..44 {
            let exchange = if rep % 2 == 0 {
                Exchange::Bosonic
            } else {
                Exchange::Fermionic
            };
            let (pair, pair_p) = sample_pairs(&mut rng, exchange, stratum);
            let sector = Sector::from_signs(
                match exchange {
                    Exchange::Bosonic => 1,
                    Exchange::Fermionic => -1,
                },
                if (pair.n + pair.m) % 2 == 0 { 1 } else { -1 },
            )?;
            let c = match rep % 4 {
                0 => 0.0,
                1 => 0.5,
                2 => 1.0,
                _ => rng.unit(),
            };
            let closed = potential_element(pair, pair_p, sector, c)?;
            let quad = quadrature_potential_element(pair, pair_p, sector, c, 1e-12)?;
            worst_quad = worst_quad.max((closed - quad).abs());
            let swapped = potential_element_for_labels(
                BasisPair { n: pair.m, m: pair.n },
                BasisPair { n: pair_p.m, m: pair_p.n },
                sector,
                c,
            )?;
            worst_swap = worst_swap.max((closed - swapped).abs());
            samples += 1;
        }
    }
    report.check(
        samples >= 200,
        format!("{samples} stratified samples >= 200"),
    );
    report.check(
        worst_quad <= 1e-10,
        format!("worst |closed - quadrature| = {worst_quad:.3e} <= 1e-10"),
    );
    report.check(
        worst_swap <= 1e-12,
        format!("worst label-swap difference = {worst_swap:.3e} <= 1e-12"),
    );
    let mut zeros_exact = true;
    for rep in 0..50 {
        let exchange = if rep % 2 == 0 {
            Exchange::Bosonic
        } else {
            Exchange::Fermionic
        };
        let (pair, mut pair_p) = sample_pairs(&mut rng, exchange, 4);
        // Force an odd index sum across bra and ket.
        if (pair.n + pair.m + pair_p.n + pair_p.m) % 2 == 0 {
            pair_p.n += 1;
        }
        let sector = Sector::from_signs(
            match exchange {
                Exchange::Bosonic => 1,
                Exchange::Fermionic => -1,
            },
            if (pair.n + pair.m) % 2 == 0 { 1 } else { -1 },
        )?;
        let closed = potential_element(pair, pair_p, sector, rng.unit())?;
        zeros_exact &= closed == 0.0;
    }
    report.check(zeros_exact, "odd-sum elements are exact 0.0".to_string());
    Ok(report)
}

/// Strong-coupling sector grounds against the exact wedge energies over 20
/// displacements inside each sector's exclusion regime.
pub fn criterion_6() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(6, "strong-coupling benchmark");
    let grids: [((i32, i32), [f64; 5]); 4] = [
        ((1, 1), [0.02, 0.065, 0.11, 0.155, 0.20]),
        ((1, -1), [0.02, 0.0475, 0.075, 0.1025, 0.13]),
        ((-1, 1), [0.02, 0.085, 0.15, 0.215, 0.28]),
        ((-1, -1), [0.02, 0.085, 0.15, 0.215, 0.28]),
    ];
    // At g = 1e4 the assembled matrix norm reaches ~1e8, so the roundoff
    // floor on any residual is ~2e-8 and the default bound cannot be met.
    // A residual r moves a Ritz value by at most r^2 / gap, far below the
    // 5e-3 claim being tested, so the solver tolerance is opened to 1e-8.
    let stiff_tol = 1e-8;
    let mut errors = Vec::with_capacity(20);
    for ((sigma, pi), cs) in grids {
        let sector = Sector::from_signs(sigma, pi)?;
        for c in cs {
            let analytic = outside_ground_energy(sector, c)?;
            let ed = sector_levels_tol(sector, 1e4, c, ED_NMAX, 1, stiff_tol)?.eigenvalues[0];
            let rel = ((ed - analytic) / analytic).abs();
            report.lines.push(format!(
                "  ok  ({sigma:+},{pi:+}) c={c}: ED {ed:.4} vs wedge {analytic:.4}, rel {rel:.3e}"
            ));
            errors.push(rel);
        }
    }
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    report.check(
        errors.len() >= 20 && mean <= 5e-3,
        format!("mean relative error over {} displacements = {mean:.3e} <= 5e-3", errors.len()),
    );
    Ok(report)
}

/// Degenerate-parameter identities: wall-coincident lines kill the coupling
/// exactly, zero coupling reproduces the sorted free spectrum, and the
/// infinite-coupling roots land on the shifted free energies.
pub fn criterion_7() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(7, "limit identities");
    let basis = enumerate_basis(bos_even(), 40)?;
    let h = assemble_hamiltonian(&basis, ModelParams::new(123.0, 1.0)?);
    let mut potential_zero = true;
    for i in 0..h.n() {
        for j in 0..h.n() {
            let expected = if i == j { basis.pairs[i].energy() } else { 0.0 };
            potential_zero &= h.entries[(i, j)] == expected;
        }
    }
    report.check(potential_zero, "c=1 assembly is exactly kinetic".to_string());

    let free = sector_levels(bos_even(), 0.0, 0.3, 40, 10)?;
    let exact = free
        .eigenvalues
        .iter()
        .zip(&basis.pairs)
        .all(|(ed, pair)| *ed == pair.energy());
    report.check(exact, "g=0 spectrum equals sorted pi^2 (n^2 + m^2) exactly".to_string());

    for (n, m) in [(1u32, 1u32), (2, 1), (2, 2), (3, 1)] {
        let level = bosonic_level(n, m, 1e8)?;
        let limit = PI * PI * f64::from((n + 1) * (n + 1) + m * m);
        let diff = (level.energy - limit).abs();
        report.check(
            diff <= 1e-5,
            format!("({n},{m}) at g=1e8: |{:.8} - {limit:.8}| = {diff:.3e} <= 1e-5", level.energy),
        );
    }
    Ok(report)
}

/// Localization of the bosonic-even ground state: weight leaves a narrow
/// strip, fills a wide one, and a near-wall displacement leaves the free
/// ground state intact.
pub fn criterion_8() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(8, "localization weights");
    let n_max = 60;
    let resolution = 201;
    let basis = enumerate_basis(bos_even(), n_max)?;

    let weights = |g: f64, c: f64| -> Result<(f64, f64)> {
        let solution = sector_levels(bos_even(), g, c, n_max, 1)?;
        region_weights(solution.eigenvectors[0].as_slice(), &basis, c, resolution)
    };
    let (_, out_free) = weights(0.0, 0.1)?;
    let (_, out_pushed) = weights(100.0, 0.1)?;
    report.check(
        out_pushed > out_free,
        format!("c=0.1: p_out {out_pushed:.4} at g=100 > {out_free:.4} at g=0"),
    );
    let (in_free, _) = weights(0.0, 0.5)?;
    let (in_pulled, _) = weights(100.0, 0.5)?;
    report.check(
        in_pulled > in_free,
        format!("c=0.5: p_in {in_pulled:.4} at g=100 > {in_free:.4} at g=0"),
    );

    let pinned = sector_levels(bos_even(), 100.0, 0.9, n_max, 1)?;
    let idx = basis.index_of(1, 1).unwrap();
    let overlap2 = pinned.eigenvectors[0][idx] * pinned.eigenvectors[0][idx];
    report.check(
        overlap2 > 0.99,
        format!("c=0.9: overlap^2 with the free ground state = {overlap2:.6} > 0.99"),
    );
    Ok(report)
}

/// Solver results against an independent full decomposition, residual
/// bounds included.
pub fn criterion_9() -> Result<CriterionReport> {
    let mut report = CriterionReport::new(9, "eigensolver contract");
    let cases: [((i32, i32), u32, f64, f64, usize); 3] = [
        ((1, 1), 30, 7.3, 0.37, 8),
        ((-1, 1), 25, 55.0, 0.18, 6),
        ((1, -1), 20, 0.0, 0.5, 5),
    ];
    for ((sigma, pi), n_max, g, c, k) in cases {
        let sector = Sector::from_signs(sigma, pi)?;
        let basis = enumerate_basis(sector, n_max)?;
        let h = assemble_hamiltonian(&basis, ModelParams::new(g, c)?);
        assert!(h.n() <= 500);
        let solution = lowest_eigenpairs(&h, k, DEFAULT_TOL)?;
        let mut reference: Vec<f64> = h.entries.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        let worst_rel = solution
            .eigenvalues
            .iter()
            .zip(&reference)
            .map(|(ours, re)| ((ours - re) / re).abs())
            .fold(0.0f64, f64::max);
        report.check(
            worst_rel <= 1e-9,
            format!("({sigma:+},{pi:+}) N={}: worst deviation from full decomposition {worst_rel:.3e} <= 1e-9", h.n()),
        );
        let residuals_ok = solution
            .eigenvalues
            .iter()
            .zip(&solution.residuals)
            .all(|(value, res)| *res <= DEFAULT_TOL * (1.0 + value.abs()));
        report.check(
            residuals_ok,
            format!("({sigma:+},{pi:+}) N={}: all residual bounds satisfied", h.n()),
        );
    }
    Ok(report)
}

/// Runs every criterion in order. Heavy: the diagonalization-based entries
/// take tens of minutes at the pinned cutoff.
pub fn run_all() -> Result<Vec<CriterionReport>> {
    Ok(vec![
        criterion_1()?,
        criterion_2()?,
        criterion_3()?,
        criterion_4()?,
        criterion_5()?,
        criterion_6()?,
        criterion_7()?,
        criterion_8()?,
        criterion_9()?,
    ])
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    fn below(&mut self, n: u32) -> u32 {
        (self.next() >> 33) as u32 % n
    }

    fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Draws an ordered same-parity pair of pairs whose index differences pin
/// one closed-form stratum each: 0 diagonal (zero and doubled frequencies),
/// 1 equal bra and ket first indices, 2 equal second indices, 3 equal index
/// shifts (matched frequencies), 4 generic. Every shift is even, so bra and
/// ket always share reflection parity.
fn sample_pairs(rng: &mut Lcg, exchange: Exchange, stratum: usize) -> (BasisPair, BasisPair) {
    let strict = exchange == Exchange::Fermionic;
    loop {
        let n = 1 + rng.below(11);
        let m = 1 + rng.below(n);
        if strict && n == m {
            continue;
        }
        let pair = BasisPair { n, m };
        let candidate = match stratum {
            0 => pair,
            1 => {
                // Same n; move m by 2 while keeping the ordering valid.
                let top = if strict { n - 1 } else { n };
                if m + 2 <= top {
                    BasisPair { n, m: m + 2 }
                } else if m >= 3 {
                    BasisPair { n, m: m - 2 }
                } else {
                    continue;
                }
            }
            2 => BasisPair { n: n + 2 * (1 + rng.below(3)), m },
            3 => {
                let shift = 2 * (1 + rng.below(3));
                BasisPair { n: n + shift, m: m + shift }
            }
            _ => {
                let np = 1 + rng.below(13);
                let mp = 1 + rng.below(np);
                if (np + mp) % 2 != (n + m) % 2 || (strict && np == mp) {
                    continue;
                }
                BasisPair { n: np, m: mp }
            }
        };
        return (pair, candidate);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for report in [
            criterion_1().unwrap(),
            criterion_3().unwrap(),
            criterion_5().unwrap(),
            criterion_9().unwrap(),
        ] {
            assert!(report.passed, "{}\n{}", report.summary_line(), report.lines.join("\n"));
        }
    }

    #[test]
    fn report_lines_carry_measurements() {
        let report = criterion_1().unwrap();
        assert_eq!(report.index, 1);
        assert!(report.lines.len() >= 8);
        assert!(report.summary_line().contains("PASS"));
    }
}
