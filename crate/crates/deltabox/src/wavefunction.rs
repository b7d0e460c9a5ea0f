//! Real-space evaluation of expansion vectors and strip/outside weights.
//!
//! An eigenvector of the truncated Hamiltonian is a coefficient vector over
//! symmetrized products of sine orbitals. Sampling the state on a uniform
//! grid reduces to two small matrix products: with `S[n][i] = phi_n(x_i)`
//! and a coefficient matrix `W` folding in the exchange symmetrization,
//! the grid is `S^T W S`. Every grid point is a fixed-order dot product, so
//! repeated evaluation is bit-identical.

use crate::error::{Error, Result};
use crate::model::Basis;
use nalgebra::DMatrix;
use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

/// A state sampled on the uniform `resolution x resolution` grid over the
/// unit square, endpoints included. Row index follows `x1`, column index
/// `x2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    resolution: usize,
    values: Vec<f64>,
}

impl WavefunctionGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Grid coordinate of index `i`, `i / (resolution - 1)`.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 / (self.resolution - 1) as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.resolution + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row-major `x1, x2, value` lines at 12 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "x1,x2,value")?;
        for i in 0..self.resolution {
            for j in 0..self.resolution {
                writeln!(
                    out,
                    "{:.11e},{:.11e},{:.11e}",
                    self.coordinate(i),
                    self.coordinate(j),
                    self.value(i, j)
                )?;
            }
        }
        Ok(())
    }

    /// JSON object `{"resolution": r, "values": [[..], ..]}` with
    /// round-trip float precision.
    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        write!(out, "{{\"resolution\": {}, \"values\": [", self.resolution)?;
        for i in 0..self.resolution {
            if i > 0 {
                write!(out, ", ")?;
            }
            write!(out, "[")?;
            for j in 0..self.resolution {
                if j > 0 {
                    write!(out, ", ")?;
                }
                write!(out, "{:.16e}", self.value(i, j))?;
            }
            write!(out, "]")?;
        }
        writeln!(out, "]}}")
    }
}

/// Samples `sum_k coeffs[k] psi_k(x1, x2)` on the uniform grid.
pub fn eval_wavefunction(
    coeffs: &[f64],
    basis: &Basis,
    resolution: usize,
) -> Result<WavefunctionGrid> {
    if coeffs.len() != basis.len() {
        return Err(Error::InvalidArgument(format!(
            "coefficient length {} does not match basis size {}",
            coeffs.len(),
            basis.len()
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least the two endpoints per axis, got resolution {resolution}"
        )));
    }
    let n_max = basis.n_max as usize;
    let sigma = f64::from(basis.sector.sigma());
    // Orbital-space image of the coefficient vector: w[n-1][m-1] multiplies
    // phi_n(x1) phi_m(x2).
    let mut w = DMatrix::<f64>::zeros(n_max, n_max);
    for (pair, &coeff) in basis.pairs.iter().zip(coeffs) {
        let (r, c) = (pair.n as usize - 1, pair.m as usize - 1);
        if r == c {
            w[(r, c)] += coeff;
        } else {
            w[(r, c)] += coeff / SQRT_2;
            w[(c, r)] += sigma * coeff / SQRT_2;
        }
    }
    let mut samples = DMatrix::<f64>::zeros(n_max, resolution);
    for i in 0..resolution {
        let x = i as f64 / (resolution - 1) as f64;
        for n in 1..=n_max {
            samples[(n - 1, i)] = SQRT_2 * (n as f64 * PI * x).sin();
        }
    }
    let grid = samples.transpose() * w * samples;
    Ok(WavefunctionGrid {
        resolution,
        values: grid.transpose().as_slice().to_vec(),
    })
}

/// Probability weights of the strip `|x2 - x1| < c` and its complement,
/// by per-cell trapezoidal quadrature of the squared grid; each cell is
/// assigned by its center, so `c = 0` gives an exact zero strip weight and
/// `c = 1` an exact zero outside weight. The two weights sum to the
/// whole-square quadrature, which is 1 up to grid discretization error.
pub fn region_weights(
    coeffs: &[f64],
    basis: &Basis,
    c: f64,
    resolution: usize,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "displacement must lie in [0, 1], got {c}"
        )));
    }
    let norm2: f64 = coeffs.iter().map(|v| v * v).sum();
    if (norm2 - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "coefficient vector must be normalized, got squared norm {norm2}"
        )));
    }
    let grid = eval_wavefunction(coeffs, basis, resolution)?;
    let h = 1.0 / (resolution - 1) as f64;
    let mut inside = 0.0;
    let mut total = 0.0;
    for i in 0..resolution - 1 {
        for j in 0..resolution - 1 {
            let cell = 0.25
                * h
                * h
                * (square(grid.value(i, j))
                    + square(grid.value(i + 1, j))
                    + square(grid.value(i, j + 1))
                    + square(grid.value(i + 1, j + 1)));
            total += cell;
            let center_gap = (i as f64 - j as f64) * h;
            if center_gap.abs() < c {
                inside += cell;
            }
        }
    }
    Ok((inside, total - inside))
}

fn square(v: f64) -> f64 {
    v * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{lowest_eigenpairs, DEFAULT_TOL};
    use crate::matrix::assemble_hamiltonian;
    use crate::model::{enumerate_basis, eval_basis_function, ModelParams, Sector};
    use approx::assert_abs_diff_eq;

    fn bos_even() -> Sector {
        Sector::from_signs(1, 1).unwrap()
    }

    fn ground_coeffs(g: f64, c: f64, n_max: u32) -> (crate::model::Basis, Vec<f64>) {
        let basis = enumerate_basis(bos_even(), n_max).unwrap();
        let h = assemble_hamiltonian(&basis, ModelParams::new(g, c).unwrap());
        let solution = lowest_eigenpairs(&h, 1, DEFAULT_TOL).unwrap();
        (basis, solution.eigenvectors[0].as_slice().to_vec())
    }

    #[test]
    fn single_mode_grid_is_a_product_of_sines() {
        let basis = enumerate_basis(bos_even(), 2).unwrap();
        assert_eq!(basis.len(), 1);
        let grid = eval_wavefunction(&[1.0], &basis, 41).unwrap();
        for i in 0..41 {
            for j in 0..41 {
                let x1 = grid.coordinate(i);
                let x2 = grid.coordinate(j);
                let expected = 2.0 * (PI * x1).sin() * (PI * x2).sin();
                assert_abs_diff_eq!(grid.value(i, j), expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn zero_vector_gives_a_zero_grid() {
        let basis = enumerate_basis(bos_even(), 10).unwrap();
        let grid = eval_wavefunction(&vec![0.0; basis.len()], &basis, 21).unwrap();
        assert!(grid.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grid_matches_direct_superposition() {
        let basis = enumerate_basis(Sector::from_signs(-1, -1).unwrap(), 8).unwrap();
        let coeffs: Vec<f64> = (0..basis.len())
            .map(|k| ((k + 1) as f64 * 0.37).sin())
            .collect();
        let grid = eval_wavefunction(&coeffs, &basis, 17).unwrap();
        for (i, j) in [(3, 11), (8, 2), (14, 14), (0, 9), (16, 5)] {
            let x1 = grid.coordinate(i);
            let x2 = grid.coordinate(j);
            let direct: f64 = basis
                .pairs
                .iter()
                .zip(&coeffs)
                .map(|(p, w)| w * eval_basis_function(*p, basis.sector, x1, x2).unwrap())
                .sum();
            assert_abs_diff_eq!(grid.value(i, j), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn boundaries_obey_dirichlet_conditions() {
        let (basis, coeffs) = ground_coeffs(25.0, 0.3, 20);
        let grid = eval_wavefunction(&coeffs, &basis, 51).unwrap();
        for k in 0..51 {
            assert_eq!(grid.value(0, k), 0.0);
            assert_eq!(grid.value(k, 0), 0.0);
            assert!(grid.value(50, k).abs() <= 1e-10);
            assert!(grid.value(k, 50).abs() <= 1e-10);
        }
    }

    #[test]
    fn rejects_mismatched_lengths_and_tiny_grids() {
        let basis = enumerate_basis(bos_even(), 10).unwrap();
        assert!(eval_wavefunction(&[1.0], &basis, 21).is_err());
        assert!(eval_wavefunction(&vec![0.0; basis.len()], &basis, 1).is_err());
        assert!(region_weights(&vec![0.0; basis.len()], &basis, 0.5, 21).is_err());
        let mut unit = vec![0.0; basis.len()];
        unit[0] = 1.0;
        assert!(region_weights(&unit, &basis, 1.5, 21).is_err());
    }

    #[test]
    fn weights_sum_to_the_square_quadrature() {
        let (basis, coeffs) = ground_coeffs(12.0, 0.25, 24);
        let (p_in, p_out) = region_weights(&coeffs, &basis, 0.25, 201).unwrap();
        assert_abs_diff_eq!(p_in + p_out, 1.0, epsilon = 2e-3);
        assert!(p_in > 0.0 && p_out > 0.0);
    }

    #[test]
    fn degenerate_strips_are_exact() {
        let basis = enumerate_basis(bos_even(), 12).unwrap();
        let mut unit = vec![0.0; basis.len()];
        unit[0] = 1.0;
        let (p_in, _) = region_weights(&unit, &basis, 0.0, 101).unwrap();
        assert_eq!(p_in, 0.0);
        let (_, p_out) = region_weights(&unit, &basis, 1.0, 101).unwrap();
        assert_eq!(p_out, 0.0);
    }

    #[test]
    fn repulsion_pushes_the_ground_state_across_the_strip() {
        // Same comparisons as the qualitative localization checks: weight
        // leaves a narrow strip and fills a wide one as coupling grows.
        let (basis0, free) = ground_coeffs(0.0, 0.1, 30);
        let (basis1, pushed) = ground_coeffs(100.0, 0.1, 30);
        let (_, p_out_free) = region_weights(&free, &basis0, 0.1, 201).unwrap();
        let (_, p_out_pushed) = region_weights(&pushed, &basis1, 0.1, 201).unwrap();
        assert!(p_out_pushed > p_out_free);

        let (_, free_wide) = ground_coeffs(0.0, 0.5, 30);
        let (_, pulled) = ground_coeffs(100.0, 0.5, 30);
        let (p_in_free, _) = region_weights(&free_wide, &basis0, 0.5, 201).unwrap();
        let (p_in_pulled, _) = region_weights(&pulled, &basis1, 0.5, 201).unwrap();
        assert!(p_in_pulled > p_in_free);
    }

    #[test]
    fn strong_coupling_peak_sits_outside_a_narrow_strip() {
        let (basis, coeffs) = ground_coeffs(100.0, 0.1, 30);
        let grid = eval_wavefunction(&coeffs, &basis, 101).unwrap();
        let mut best = (0usize, 0usize, 0.0f64);
        for i in 0..101 {
            for j in 0..101 {
                if grid.value(i, j).abs() > best.2 {
                    best = (i, j, grid.value(i, j).abs());
                }
            }
        }
        let gap = grid.coordinate(best.0) - grid.coordinate(best.1);
        assert!(gap.abs() >= 0.1, "peak at gap {gap}");
    }

    #[test]
    fn serialization_is_deterministic_and_shaped() {
        let basis = enumerate_basis(bos_even(), 2).unwrap();
        let grid = eval_wavefunction(&[1.0], &basis, 5).unwrap();
        let mut csv1 = Vec::new();
        let mut csv2 = Vec::new();
        grid.write_csv(&mut csv1).unwrap();
        grid.write_csv(&mut csv2).unwrap();
        assert_eq!(csv1, csv2);
        let text = String::from_utf8(csv1).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 25);
        assert_eq!(lines[0], "x1,x2,value");
        assert!(lines[1].starts_with("0.00000000000e0,0.00000000000e0,"));

        let mut json = Vec::new();
        grid.write_json(&mut json).unwrap();
        let text = String::from_utf8(json).unwrap();
        assert!(text.starts_with("{\"resolution\": 5, \"values\": [["));
        assert_eq!(text.matches('[').count(), 6);
    }
}
