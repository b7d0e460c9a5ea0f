//! Model parameters, symmetry sectors, and the truncated two-particle basis.
//!
//! Positions live on the unit interval with hard walls, so the one-particle
//! orbitals are `phi_n(x) = sqrt(2) sin(n pi x)` with energy `(n pi)^2`. The
//! Hamiltonian commutes with particle exchange and with reflection about the
//! box center, which splits the problem into four independent sectors.

use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::fmt;

/// Physical parameters: coupling strength `g` and interaction displacement
/// `c`, both dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g: f64,
    pub c: f64,
}

impl ModelParams {
    /// Requires finite `g` and `0 <= c <= 1`; the interaction lines
    /// `|x2 - x1| = c` leave the box otherwise.
    pub fn new(g: f64, c: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coupling must be finite, got {g}"
            )));
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidArgument(format!(
                "displacement must lie in [0, 1], got {c}"
            )));
        }
        Ok(Self { g, c })
    }
}

/// Behaviour of the two-particle state under exchange of the particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exchange {
    Bosonic,
    Fermionic,
}

impl Exchange {
    /// Exchange eigenvalue: `+1` bosonic, `-1` fermionic.
    pub fn sigma(self) -> i32 {
        match self {
            Exchange::Bosonic => 1,
            Exchange::Fermionic => -1,
        }
    }
}

/// Behaviour under reflection of both coordinates about the box center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity eigenvalue: `+1` even, `-1` odd.
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// One of the four symmetry sectors of the two-particle problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sector {
    pub exchange: Exchange,
    pub parity: Parity,
}

impl Sector {
    /// All four sectors, in a fixed reporting order.
    pub const ALL: [Sector; 4] = [
        Sector {
            exchange: Exchange::Bosonic,
            parity: Parity::Even,
        },
        Sector {
            exchange: Exchange::Bosonic,
            parity: Parity::Odd,
        },
        Sector {
            exchange: Exchange::Fermionic,
            parity: Parity::Even,
        },
        Sector {
            exchange: Exchange::Fermionic,
            parity: Parity::Odd,
        },
    ];

    pub fn new(exchange: Exchange, parity: Parity) -> Self {
        Self { exchange, parity }
    }

    /// Builds a sector from the eigenvalue pair `(sigma, pi)`, each `+1` or
    /// `-1`.
    pub fn from_signs(sigma: i32, pi: i32) -> Result<Self> {
        let exchange = match sigma {
            1 => Exchange::Bosonic,
            -1 => Exchange::Fermionic,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "exchange sign must be +1 or -1, got {other}"
                )))
            }
        };
        let parity = match pi {
            1 => Parity::Even,
            -1 => Parity::Odd,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "parity sign must be +1 or -1, got {other}"
                )))
            }
        };
        Ok(Self { exchange, parity })
    }

    pub fn sigma(self) -> i32 {
        self.exchange.sigma()
    }

    pub fn pi(self) -> i32 {
        self.parity.sign()
    }

    /// Whether the index pair `(n, m)` labels a state of this sector: both
    /// indices positive, non-degenerate ordering for fermions, and parity
    /// `(-1)^(n + m)` matching the sector.
    pub fn admits(self, n: u32, m: u32) -> bool {
        if n == 0 || m == 0 {
            return false;
        }
        let ordered = match self.exchange {
            Exchange::Bosonic => n >= m,
            Exchange::Fermionic => n > m,
        };
        let pair_parity = if (n + m) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        ordered && pair_parity == self.parity
    }

    pub fn label(self) -> &'static str {
        match (self.exchange, self.parity) {
            (Exchange::Bosonic, Parity::Even) => "bosonic-even",
            (Exchange::Bosonic, Parity::Odd) => "bosonic-odd",
            (Exchange::Fermionic, Parity::Even) => "fermionic-even",
            (Exchange::Fermionic, Parity::Odd) => "fermionic-odd",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Ordered pair of one-particle indices labelling a symmetrized product
/// state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisPair {
    pub n: u32,
    pub m: u32,
}

impl BasisPair {
    /// Integer part of the non-interacting energy, `n^2 + m^2`.
    pub fn norm2(self) -> u64 {
        u64::from(self.n) * u64::from(self.n) + u64::from(self.m) * u64::from(self.m)
    }

    /// Non-interacting energy `pi^2 (n^2 + m^2)`.
    pub fn energy(self) -> f64 {
        PI * PI * self.norm2() as f64
    }
}

/// Energy-truncated basis of one symmetry sector: all admitted pairs with
/// `n^2 + m^2 <= n_max^2`, sorted by non-interacting energy and then
/// lexicographically.
#[derive(Debug, Clone)]
pub struct Basis {
    pub sector: Sector,
    pub n_max: u32,
    pub pairs: Vec<BasisPair>,
}

/// Enumerates the truncated basis of `sector`. Fails if the cutoff is so
/// small that the sector contains no states at all.
pub fn enumerate_basis(sector: Sector, n_max: u32) -> Result<Basis> {
    let cap = u64::from(n_max) * u64::from(n_max);
    let mut pairs = Vec::new();
    for n in 1..=n_max {
        for m in 1..=n {
            let pair = BasisPair { n, m };
            if pair.norm2() <= cap && sector.admits(n, m) {
                pairs.push(pair);
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "cutoff n_max = {n_max} admits no states in the {sector} sector"
        )));
    }
    pairs.sort_by_key(|p| (p.norm2(), p.n, p.m));
    Ok(Basis {
        sector,
        n_max,
        pairs,
    })
}

impl Basis {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Position of the pair `(n, m)` in the sorted pair list, if present.
    pub fn index_of(&self, n: u32, m: u32) -> Option<usize> {
        let key = (BasisPair { n, m }.norm2(), n, m);
        self.pairs
            .binary_search_by_key(&key, |p| (p.norm2(), p.n, p.m))
            .ok()
    }
}

/// One-particle orbital `sqrt(2) sin(n pi x)`.
pub(crate) fn phi(n: u32, x: f64) -> f64 {
    std::f64::consts::SQRT_2 * (f64::from(n) * PI * x).sin()
}

/// Evaluates the normalized symmetrized product state `(n, m)` of `sector`
/// at `(x1, x2)`. Both coordinates must lie in the box and the pair must be
/// admitted by the sector.
pub fn eval_basis_function(pair: BasisPair, sector: Sector, x1: f64, x2: f64) -> Result<f64> {
    if !sector.admits(pair.n, pair.m) {
        return Err(Error::InvalidArgument(format!(
            "pair ({}, {}) does not belong to the {sector} sector",
            pair.n, pair.m
        )));
    }
    if !((0.0..=1.0).contains(&x1) && (0.0..=1.0).contains(&x2)) {
        return Err(Error::InvalidArgument(format!(
            "coordinates must lie in [0, 1], got ({x1}, {x2})"
        )));
    }
    let sigma = f64::from(sector.sigma());
    let direct = phi(pair.n, x1) * phi(pair.m, x2);
    let exchanged = phi(pair.m, x1) * phi(pair.n, x2);
    let norm = if pair.n == pair.m { 2.0 } else { std::f64::consts::SQRT_2 };
    Ok((direct + sigma * exchanged) / norm)
}
