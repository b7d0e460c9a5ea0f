//! States that are blind to the interaction at rational displacement.
//!
//! A symmetrized box state couples to the contact lines only through its
//! values on them. When `c = p/q` in lowest terms, the state built on
//! `(N, M) = (uq, vq)` satisfies, on the line `x2 = x1 + c`,
//!
//! ```text
//! phi_N(x) phi_M(x + c) + sigma phi_M(x) phi_N(x + c)
//!     = phi_N(x) phi_M(x) ((-1)^(vp) + sigma (-1)^(up)),
//! ```
//!
//! so exactly one exchange symmetry kills it: `sigma = +1` when `p (u - v)`
//! is odd and `sigma = -1` otherwise. Such a state decouples from every
//! matrix element, stays an eigenstate at every coupling, and keeps the
//! energy `pi^2 (N^2 + M^2)` exactly.
//!
//! In terms of the outer-wedge levels of [`crate::strong`], the box indices
//! are the image of a wedge pair `(n, m)` under `N = n / (1 - c)`, which is
//! integral exactly when `q - p` divides `n` and `m`. Scaling a solution by
//! an integer `j` preserves integrality, so each primitive pair carries an
//! infinite tower `(jN, jM)` with energies `j^2` times the base. The
//! energy always coincides with a doubly degenerate wedge level, making
//! every such state part of an exact triple degeneracy in the strong
//! coupling limit; the converse fails, since a wedge level can meet a box
//! level through a sum-of-squares accident without the divisibility
//! condition.

use crate::eigen::{lowest_eigenpairs, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::matrix::{assemble_hamiltonian, potential_element};
use crate::model::{enumerate_basis, BasisPair, Exchange, ModelParams, Parity, Sector};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Reduced fraction `p/q` with `0 <= p/q < 1`, the only displacements at
/// which the blindness condition is well posed. `0/1` is admitted and
/// stands for coincident contact lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalC {
    p: u32,
    q: u32,
}

impl RationalC {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if q == 0 || p >= q {
            return Err(Error::InvalidArgument(format!(
                "displacement fraction must satisfy 0 <= p/q < 1, got {p}/{q}"
            )));
        }
        let reduced = if p == 0 { q == 1 } else { gcd(p, q) == 1 };
        if !reduced {
            return Err(Error::InvalidArgument(format!(
                "displacement fraction must be in lowest terms, got {p}/{q}"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn numerator(&self) -> u32 {
        self.p
    }

    pub fn denominator(&self) -> u32 {
        self.q
    }

    /// Divisor `q - p` in the integrality condition; also the wedge leg
    /// `1 - c` expressed in units of `1/q`.
    pub fn gap(&self) -> u32 {
        self.q - self.p
    }

    pub fn value(&self) -> f64 {
        f64::from(self.p) / f64::from(self.q)
    }
}

impl PartialOrd for RationalC {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalC {
    fn cmp(&self, other: &Self) -> Ordering {
        (u64::from(self.p) * u64::from(other.q)).cmp(&(u64::from(other.p) * u64::from(self.q)))
    }
}

impl fmt::Display for RationalC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalC {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidArgument(format!("expected a fraction p/q, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::InvalidArgument(format!("bad fraction part {t:?}: {e}")))
        };
        Self::new(parse(p)?, parse(q)?)
    }
}

/// One interaction-blind level: tower member `j` over the primitive wedge
/// pair `(n, m)`, realized as the box state `(box_n, box_m)` in `sector`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkState {
    pub c: RationalC,
    /// Primitive wedge pair, `n > m >= 1`, both divisible by `c.gap()`.
    pub n: u32,
    pub m: u32,
    /// Tower index, `>= 1`.
    pub j: u32,
    /// Box quantum numbers `j n / (1 - c)` and `j m / (1 - c)`.
    pub box_n: u32,
    pub box_m: u32,
    pub sector: Sector,
}

impl DarkState {
    fn from_box_pair(c: RationalC, box_n: u32, box_m: u32) -> Self {
        debug_assert!(box_n > box_m && box_m >= 1);
        debug_assert!(box_n % c.q == 0 && box_m % c.q == 0);
        let d = c.gap();
        let j = gcd(box_n, box_m) / c.q;
        Self {
            c,
            n: d * (box_n / c.q) / j,
            m: d * (box_m / c.q) / j,
            j,
            box_n,
            box_m,
            sector: dark_sector(c, box_n, box_m),
        }
    }

    /// `box_n^2 + box_m^2`, the energy in units of `pi^2`, exact.
    pub fn norm2(&self) -> u64 {
        u64::from(self.box_n) * u64::from(self.box_n) + u64::from(self.box_m) * u64::from(self.box_m)
    }

    pub fn energy(&self) -> f64 {
        PI * PI * self.norm2() as f64
    }

    /// Wedge indices of this tower member, `(j n, j m)`.
    pub fn wedge_indices(&self) -> (u32, u32) {
        (self.j * self.n, self.j * self.m)
    }
}

/// Sector in which the box state `(box_n, box_m)` is blind, from the sign
/// that cancels its values on the contact lines: bosonic exactly when
/// `p (box_n - box_m) / q` is odd, with reflection parity
/// `(-1)^(box_n + box_m)`.
pub fn dark_sector(c: RationalC, box_n: u32, box_m: u32) -> Sector {
    debug_assert!(box_n % c.q == 0 && box_m % c.q == 0);
    let steps = u64::from(c.p) * u64::from((box_n - box_m) / c.q);
    let exchange = if steps % 2 == 1 {
        Exchange::Bosonic
    } else {
        Exchange::Fermionic
    };
    let parity = if (box_n + box_m) % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    Sector::new(exchange, parity)
}

/// All blind states with energy at most `e_max`, ascending, ties broken by
/// box indices.
pub fn enumerate_dark_states(c: RationalC, e_max: f64) -> Result<Vec<DarkState>> {
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy cutoff must be positive and finite, got {e_max}"
        )));
    }
    let q = u64::from(c.q);
    let mut states = Vec::new();
    let mut a = 2u32;
    while PI * PI * (q * q * u64::from(a) * u64::from(a)) as f64 <= e_max {
        for b in 1..a {
            let norm2 = q * q * (u64::from(a) * u64::from(a) + u64::from(b) * u64::from(b));
            if PI * PI * norm2 as f64 <= e_max {
                states.push(DarkState::from_box_pair(c, a * c.q, b * c.q));
            }
        }
        a += 1;
    }
    states.sort_by_key(|s| (s.norm2(), s.box_n, s.box_m));
    Ok(states)
}

/// Blind states for every reduced fraction with denominator at most
/// `q_max`, keyed by displacement.
pub fn dark_distribution(q_max: u32, e_max: f64) -> Result<BTreeMap<RationalC, Vec<DarkState>>> {
    if q_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "denominator bound must be at least 2, got {q_max}"
        )));
    }
    let mut map = BTreeMap::new();
    for q in 2..=q_max {
        for p in 1..q {
            if gcd(p, q) == 1 {
                let c = RationalC::new(p, q)?;
                map.insert(c, enumerate_dark_states(c, e_max)?);
            }
        }
    }
    Ok(map)
}

/// Tower members `j = 1..=j_max` over the primitive pair of `state`.
/// The blind exchange symmetry may alternate along the tower: the sign
/// criterion scales its odd/even test with `j`.
pub fn tower(state: &DarkState, j_max: u32) -> Result<Vec<DarkState>> {
    if j_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "tower length must be at least 1, got {j_max}"
        )));
    }
    Ok((1..=j_max)
        .map(|j| DarkState::from_box_pair(state.c, j * state.box_n / state.j, j * state.box_m / state.j))
        .collect())
}

/// Largest coupling magnitude, per unit strength, between the box state
/// `(box_n, box_m)` and any basis state of its sector up to `n_max`. Blind
/// states return closed-form roundoff; anything else returns an order-one
/// matrix element.
pub fn verify_dark(
    c: RationalC,
    box_n: u32,
    box_m: u32,
    sector: Sector,
    n_max: u32,
) -> Result<f64> {
    let basis = enumerate_basis(sector, n_max)?;
    let candidate = BasisPair {
        n: box_n,
        m: box_m,
    };
    if basis.index_of(box_n, box_m).is_none() {
        return Err(Error::InvalidArgument(format!(
            "({box_n}, {box_m}) is not a basis pair of the {sector} sector at n_max = {n_max}"
        )));
    }
    let mut worst = 0.0f64;
    for pair in &basis.pairs {
        let element = potential_element(*pair, candidate, sector, c.value())?;
        worst = worst.max(element.abs());
    }
    Ok(worst)
}

/// For each coupling in `g_list`, the sector eigenvalue nearest the blind
/// energy of `state`. Blindness means all returned values equal the exact
/// energy to solver accuracy, independent of coupling.
pub fn dark_flatness_probe(
    state: &DarkState,
    g_list: &[f64],
    n_max: u32,
) -> Result<Vec<f64>> {
    let basis = enumerate_basis(state.sector, n_max)?;
    let target = state.energy();
    if basis.index_of(state.box_n, state.box_m).is_none() {
        return Err(Error::InvalidArgument(format!(
            "blind state ({}, {}) lies outside the basis at n_max = {n_max}",
            state.box_n, state.box_m
        )));
    }
    // Repulsive couplings only push levels up, so the levels that can sit
    // at or below the blind energy are those already below it at g = 0.
    let below = basis
        .pairs
        .iter()
        .filter(|p| p.norm2() <= state.norm2())
        .count();
    let k = (below + 3).min(basis.len());
    let mut probes = Vec::with_capacity(g_list.len());
    for &g in g_list {
        let h = assemble_hamiltonian(&basis, ModelParams::new(g, state.c.value())?);
        let solution = lowest_eigenpairs(&h, k, DEFAULT_TOL)?;
        let nearest = solution
            .eigenvalues
            .iter()
            .copied()
            .min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()))
            .ok_or_else(|| Error::Numeric("empty eigenvalue list".into()))?;
        probes.push(nearest);
    }
    Ok(probes)
}

/// Non-interacting levels of a sector up to `e_max`, grouped by energy so
/// sum-of-squares coincidences appear as multi-pair groups.
pub fn noninteracting_spectrum(sector: Sector, e_max: f64) -> Result<Vec<(f64, Vec<BasisPair>)>> {
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy cutoff must be positive and finite, got {e_max}"
        )));
    }
    let n_top = (e_max / (PI * PI)).sqrt().ceil() as u32 + 1;
    let basis = enumerate_basis(sector, 2 * n_top)?;
    let mut groups: BTreeMap<u64, Vec<BasisPair>> = BTreeMap::new();
    for pair in &basis.pairs {
        if pair.energy() <= e_max {
            groups.entry(pair.norm2()).or_default().push(*pair);
        }
    }
    Ok(groups
        .into_iter()
        .map(|(norm2, pairs)| (PI * PI * norm2 as f64, pairs))
        .collect())
}

/// Energies where a doubly degenerate wedge level exactly meets a
/// non-interacting box level, each flagged by whether the divisibility
/// condition holds there (`true`) or the meeting is a sum-of-squares
/// accident (`false`). Matching is exact integer arithmetic: a wedge pair
/// `(n, m)` at `c = p/q` has energy `pi^2 q^2 (n^2 + m^2) / (q - p)^2`.
pub fn triple_degeneracy_scan(c: RationalC, e_max: f64) -> Result<Vec<(f64, bool)>> {
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy cutoff must be positive and finite, got {e_max}"
        )));
    }
    let d = u64::from(c.gap());
    let q = u64::from(c.q);
    let mut hits: BTreeMap<u64, bool> = BTreeMap::new();
    let mut n = 2u64;
    while PI * PI * (q * q * (n * n + 1)) as f64 <= e_max * (d * d) as f64 {
        for m in 1..n {
            let wedge2 = n * n + m * m;
            let scaled = q * q * wedge2;
            if PI * PI * scaled as f64 > e_max * (d * d) as f64 {
                continue;
            }
            if scaled % (d * d) != 0 {
                continue;
            }
            let box_norm2 = scaled / (d * d);
            let divisible = n % d == 0 && m % d == 0;
            if divisible || is_sum_of_two_positive_squares(box_norm2) {
                hits.entry(box_norm2)
                    .and_modify(|dark| *dark |= divisible)
                    .or_insert(divisible);
            }
        }
        n += 1;
    }
    Ok(hits
        .into_iter()
        .map(|(norm2, dark)| (PI * PI * norm2 as f64, dark))
        .collect())
}

fn is_sum_of_two_positive_squares(k: u64) -> bool {
    let mut a = 1u64;
    while 2 * a * a <= k {
        let rest = k - a * a;
        let b = (rest as f64).sqrt().round() as u64;
        if b * b == rest {
            return true;
        }
        a += 1;
    }
    false
}

fn gcd(a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eval_basis_function;

    fn frac(p: u32, q: u32) -> RationalC {
        RationalC::new(p, q).unwrap()
    }

    fn sector(sigma: i32, pi: i32) -> Sector {
        Sector::from_signs(sigma, pi).unwrap()
    }

    #[test]
    fn fraction_validation_and_parsing() {
        assert!(RationalC::new(1, 2).is_ok());
        assert!(RationalC::new(0, 1).is_ok());
        assert!(RationalC::new(2, 4).is_err());
        assert!(RationalC::new(0, 2).is_err());
        assert!(RationalC::new(3, 3).is_err());
        assert!(RationalC::new(5, 3).is_err());
        assert!(RationalC::new(1, 0).is_err());
        assert_eq!("2/3".parse::<RationalC>().unwrap(), frac(2, 3));
        assert_eq!(" 1 / 2 ".parse::<RationalC>().unwrap(), frac(1, 2));
        assert!("0.5".parse::<RationalC>().is_err());
        assert!("4/6".parse::<RationalC>().is_err());
        assert_eq!(frac(2, 3).to_string(), "2/3");
        assert!(frac(1, 3) < frac(2, 5));
        assert_eq!(frac(1, 2).gap(), 1);
        assert_eq!(frac(1, 3).gap(), 2);
    }

    #[test]
    fn lowest_entries_per_sector_match_the_reference_table() {
        let half = enumerate_dark_states(frac(1, 2), 50.0 * PI * PI).unwrap();
        let lowest = |list: &[DarkState], s: Sector| {
            list.iter().find(|d| d.sector == s).copied().unwrap()
        };

        let bos_even = lowest(&half, sector(1, 1));
        assert_eq!((bos_even.n, bos_even.m, bos_even.j), (2, 1, 1));
        assert_eq!((bos_even.box_n, bos_even.box_m), (4, 2));
        assert_eq!(bos_even.norm2(), 20);

        let fermi_even = lowest(&half, sector(-1, 1));
        assert_eq!((fermi_even.n, fermi_even.m, fermi_even.j), (3, 1, 1));
        assert_eq!(fermi_even.norm2(), 40);

        let third = enumerate_dark_states(frac(1, 3), 50.0 * PI * PI).unwrap();
        let bos_odd = lowest(&third, sector(1, -1));
        assert_eq!((bos_odd.n, bos_odd.m, bos_odd.j), (4, 2, 1));
        assert_eq!((bos_odd.box_n, bos_odd.box_m), (6, 3));
        assert_eq!(bos_odd.norm2(), 45);

        let two_thirds = enumerate_dark_states(frac(2, 3), 50.0 * PI * PI).unwrap();
        let fermi_odd = lowest(&two_thirds, sector(-1, -1));
        assert_eq!((fermi_odd.n, fermi_odd.m, fermi_odd.j), (2, 1, 1));
        assert_eq!((fermi_odd.box_n, fermi_odd.box_m), (6, 3));
        assert_eq!(fermi_odd.norm2(), 45);
    }

    #[test]
    fn enumeration_matches_brute_force_line_vanishing() {
        // A state is blind exactly when it vanishes on both contact lines;
        // sample the lines densely and compare memberships up to box
        // indices of 30.
        for c in [frac(1, 2), frac(1, 3), frac(2, 3), frac(2, 5)] {
            let e_max = PI * PI * 900.0;
            let listed: Vec<(u32, u32, Sector)> = enumerate_dark_states(c, e_max)
                .unwrap()
                .into_iter()
                .filter(|s| s.box_n <= 30 && s.box_m <= 30)
                .map(|s| (s.box_n, s.box_m, s.sector))
                .collect();
            let mut brute = Vec::new();
            for n in 2u32..=30 {
                for m in 1..n {
                    if u64::from(n) * u64::from(n) + u64::from(m) * u64::from(m)
                        > (e_max / (PI * PI)) as u64
                    {
                        continue;
                    }
                    for s in Sector::ALL {
                        if !s.admits(n, m) {
                            continue;
                        }
                        let pair = BasisPair { n, m };
                        let mut peak = 0.0f64;
                        for i in 0..400 {
                            let x = (i as f64 + 0.5) / 400.0 * (1.0 - c.value());
                            let on_line =
                                eval_basis_function(pair, s, x, x + c.value()).unwrap();
                            peak = peak.max(on_line.abs());
                        }
                        if peak < 1e-10 {
                            brute.push((n, m, s));
                        }
                    }
                }
            }
            brute.sort_by_key(|(n, m, s)| {
                (
                    u64::from(*n) * u64::from(*n) + u64::from(*m) * u64::from(*m),
                    *n,
                    *m,
                    s.sigma(),
                )
            });
            let mut listed_sorted = listed.clone();
            listed_sorted.sort_by_key(|(n, m, s)| {
                (
                    u64::from(*n) * u64::from(*n) + u64::from(*m) * u64::from(*m),
                    *n,
                    *m,
                    s.sigma(),
                )
            });
            assert_eq!(listed_sorted, brute, "membership mismatch at c = {c}");
            assert!(!listed_sorted.is_empty());
        }
    }

    #[test]
    fn energy_identity_holds_exactly() {
        for c in [frac(1, 2), frac(1, 3), frac(3, 5)] {
            for state in enumerate_dark_states(c, 4000.0).unwrap() {
                let d = u64::from(c.gap());
                let (jn, jm) = state.wedge_indices();
                let wedge2 = u64::from(jn) * u64::from(jn) + u64::from(jm) * u64::from(jm);
                // pi^2 (N^2 + M^2) and pi^2 j^2 (n^2 + m^2) / (1 - c)^2 as
                // exact integers times pi^2.
                assert_eq!(state.norm2() * d * d, wedge2 * u64::from(c.q) * u64::from(c.q));
                assert!(state.n % c.gap() == 0 && state.m % c.gap() == 0);
                assert_eq!(state.energy(), PI * PI * state.norm2() as f64);
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_closed_under_towers() {
        let e_max = 3000.0;
        for c in [frac(1, 2), frac(1, 3), frac(2, 5)] {
            let states = enumerate_dark_states(c, e_max).unwrap();
            for w in states.windows(2) {
                assert!(
                    (w[0].norm2(), w[0].box_n) <= (w[1].norm2(), w[1].box_n),
                    "ordering broken at c = {c}"
                );
            }
            let keys: Vec<(u32, u32)> = states.iter().map(|s| (s.box_n, s.box_m)).collect();
            for state in &states {
                for member in tower(state, 4).unwrap() {
                    if member.energy() <= e_max {
                        assert!(
                            keys.contains(&(member.box_n, member.box_m)),
                            "tower member ({}, {}) missing at c = {c}",
                            member.box_n,
                            member.box_m
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tower_scales_energies_and_tracks_the_sign_criterion() {
        let half = enumerate_dark_states(frac(1, 2), 25.0 * PI * PI).unwrap();
        let primitive = half[0];
        let members = tower(&primitive, 3).unwrap();
        assert_eq!(members[0], primitive);
        assert_eq!(members[1].norm2(), 4 * primitive.norm2());
        assert_eq!(members[2].norm2(), 9 * primitive.norm2());
        assert_eq!((members[1].box_n, members[1].box_m), (8, 4));
        assert_eq!(members[1].wedge_indices(), (4, 2));
        // p (u - v) = j at c = 1/2 over (2, 1), so the blind exchange
        // symmetry alternates with j.
        assert_eq!(members[0].sector, sector(1, 1));
        assert_eq!(members[1].sector, sector(-1, 1));
        assert_eq!(members[2].sector, sector(1, 1));
        // At c = 2/5 the factor p = 2 keeps the test even for every j.
        let fifth = enumerate_dark_states(frac(2, 5), 2200.0).unwrap();
        for member in tower(&fifth[0], 3).unwrap() {
            assert_eq!(member.sector.exchange, Exchange::Fermionic);
        }
    }

    #[test]
    fn every_enumerated_state_is_numerically_dark() {
        for c in [frac(1, 2), frac(1, 3), frac(2, 3)] {
            for state in enumerate_dark_states(c, 700.0).unwrap() {
                let worst = verify_dark(c, state.box_n, state.box_m, state.sector, 25).unwrap();
                assert!(
                    worst <= 1e-12,
                    "coupling {worst:.3e} at c = {c}, state ({}, {})",
                    state.box_n,
                    state.box_m
                );
            }
        }
    }

    #[test]
    fn wrong_symmetrization_is_not_dark() {
        // (4, 2) at c = 1/2 is blind only in the bosonic sector; the
        // bosonic (2, 2) state carries no blindness at all.
        let worst = verify_dark(frac(1, 2), 2, 2, sector(1, 1), 20).unwrap();
        assert!(worst > 0.01, "got {worst:.3e}");
        let fermionic_partner = verify_dark(frac(1, 2), 6, 2, sector(-1, 1), 20).unwrap();
        assert!(fermionic_partner <= 1e-12);
        let bosonic_partner = verify_dark(frac(1, 2), 6, 2, sector(1, 1), 20).unwrap();
        assert!(bosonic_partner > 0.01, "got {bosonic_partner:.3e}");
    }

    #[test]
    fn coincident_lines_leave_all_fermionic_states_dark() {
        let zero = frac(0, 1);
        for (n, m) in [(2u32, 1u32), (3, 2), (4, 1), (5, 2)] {
            let s = sector(-1, if (n + m) % 2 == 0 { 1 } else { -1 });
            let worst = verify_dark(zero, n, m, s, 20).unwrap();
            assert!(worst <= 1e-12, "({n}, {m}) coupled at {worst:.3e}");
        }
        let states = enumerate_dark_states(zero, 200.0).unwrap();
        assert!(!states.is_empty());
        for state in states {
            assert_eq!(state.sector.exchange, Exchange::Fermionic);
            assert_eq!((state.box_n, state.box_m), state.wedge_indices());
        }
    }

    #[test]
    fn verify_dark_rejects_pairs_outside_the_basis() {
        // Wrong parity for the sector, and a cutoff that excludes the pair.
        assert!(verify_dark(frac(1, 2), 4, 3, sector(-1, 1), 20).is_err());
        assert!(verify_dark(frac(1, 2), 4, 2, sector(1, 1), 3).is_err());
    }

    #[test]
    fn flatness_probe_pins_the_blind_eigenvalue() {
        let half = enumerate_dark_states(frac(1, 2), 25.0 * PI * PI).unwrap();
        let state = half[0];
        let target = state.energy();
        let probes = dark_flatness_probe(&state, &[0.0, 1.0, 20.0, 100.0], 30).unwrap();
        for value in &probes {
            assert!(
                ((value - target) / target).abs() <= 1e-8,
                "probe {value} vs {target}"
            );
        }
    }

    #[test]
    fn approaching_levels_build_the_triple_degeneracy() {
        // At strong coupling two more levels of the same sector close in on
        // the blind energy from below.
        let half = enumerate_dark_states(frac(1, 2), 25.0 * PI * PI).unwrap();
        let state = half[0];
        let basis = enumerate_basis(state.sector, 30).unwrap();
        let h = assemble_hamiltonian(&basis, ModelParams::new(100.0, 0.5).unwrap());
        let solution = lowest_eigenpairs(&h, 8, DEFAULT_TOL).unwrap();
        let target = state.energy();
        let close_below = solution
            .eigenvalues
            .iter()
            .filter(|&&e| e < target - 1e-6 && e >= 0.85 * target)
            .count();
        assert!(close_below >= 2, "only {close_below} levels approaching");
    }

    #[test]
    fn distribution_covers_exactly_the_reduced_fractions() {
        let map = dark_distribution(2, 200.0 * PI * PI).unwrap();
        assert_eq!(map.keys().copied().collect::<Vec<_>>(), vec![frac(1, 2)]);
        let map = dark_distribution(4, 50.0 * PI * PI).unwrap();
        let keys: Vec<RationalC> = map.keys().copied().collect();
        assert_eq!(
            keys,
            vec![
                frac(1, 4),
                frac(1, 3),
                frac(1, 2),
                frac(2, 3),
                frac(3, 4)
            ]
        );
        for (c, states) in &map {
            for s in states {
                assert!(s.n % c.gap() == 0 && s.m % c.gap() == 0);
            }
        }
    }

    #[test]
    fn distribution_at_half_contains_the_expected_primitives() {
        let map = dark_distribution(2, 200.0 * PI * PI).unwrap();
        let half = &map[&frac(1, 2)];
        let members: Vec<(u32, u32, u32)> = half.iter().map(|s| (s.n, s.m, s.j)).collect();
        for expected in [
            (2, 1, 1),
            (3, 1, 1),
            (3, 2, 1),
            (4, 1, 1),
            (4, 3, 1),
            (2, 1, 2),
        ] {
            assert!(members.contains(&expected), "{expected:?} missing");
        }
    }

    #[test]
    fn noninteracting_groups_expose_pythagorean_degeneracy() {
        let groups = noninteracting_spectrum(sector(1, 1), 60.0 * PI * PI).unwrap();
        let fifty = groups
            .iter()
            .find(|(e, _)| (e - 50.0 * PI * PI).abs() < 1e-9)
            .expect("level at 50 pi^2");
        let pairs: Vec<(u32, u32)> = fifty.1.iter().map(|p| (p.n, p.m)).collect();
        assert_eq!(pairs, vec![(5, 5), (7, 1)]);

        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for (energy, pairs) in &groups {
            assert!(*energy <= 60.0 * PI * PI);
            for p in pairs {
                assert!(seen.insert((p.n, p.m)), "duplicate pair {p:?}");
                count += 1;
            }
        }
        // Brute-force histogram over the same cutoff.
        let mut expected = 0;
        for n in 1u32..=8 {
            for m in 1..=n {
                if (n * n + m * m) <= 60 && (n + m) % 2 == 0 {
                    expected += 1;
                }
            }
        }
        assert_eq!(count, expected);
    }

    #[test]
    fn scan_flags_divisible_coincidences_as_dark() {
        let hits = triple_degeneracy_scan(frac(1, 2), 100.0 * PI * PI).unwrap();
        let twenty = hits
            .iter()
            .find(|(e, _)| (e - 20.0 * PI * PI).abs() < 1e-9)
            .expect("coincidence at 20 pi^2");
        assert!(twenty.1);
        // Every wedge level is blind at c = 1/2, so nothing is accidental.
        assert!(hits.iter().all(|(_, dark)| *dark));
    }

    #[test]
    fn scan_separates_accidental_coincidences() {
        // At c = 2/7 the wedge pair (7, 1) meets the box level (7, 7) at
        // 98 pi^2 without the divisibility condition: purely accidental.
        // The wedge pairs (11, 2) and (10, 5) share 245 pi^2, but (10, 5)
        // is divisible, so the level still hosts a blind state.
        let hits = triple_degeneracy_scan(frac(2, 7), 260.0 * PI * PI).unwrap();
        let at = |k: f64| {
            hits.iter()
                .find(|(e, _)| (e - k * PI * PI).abs() < 1e-9)
                .unwrap_or_else(|| panic!("no coincidence at {k} pi^2"))
                .1
        };
        assert!(!at(98.0));
        assert!(at(245.0));
    }
}
