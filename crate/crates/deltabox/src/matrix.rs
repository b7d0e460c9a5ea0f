//! Closed-form matrix elements of the displaced contact interaction and
//! assembly of the sector Hamiltonians.
//!
//! The interaction acts on the two lines `x2 - x1 = +c` and `x2 - x1 = -c`.
//! Every matrix element reduces to line integrals of products of four sine
//! orbitals, which collapse to the primitive
//!
//! ```text
//! T(p, q, +) = integral over [0, 1-c] of cos(p pi x) cos(q pi (x + c)) dx
//! T(p, q, -) = integral over [c, 1]   of cos(p pi x) cos(q pi (x - c)) dx
//! ```
//!
//! evaluated here in closed form. All potential elements are reported per
//! unit coupling; the assembled Hamiltonian scales them by `g` and adds the
//! kinetic diagonal.

use crate::error::{Error, Result};
use crate::model::{Basis, BasisPair, Exchange, ModelParams, Sector};
use crate::quad::adaptive_simpson;
use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::io;

/// Which of the two interaction lines `x2 - x1 = +c` or `x2 - x1 = -c` the
/// integral runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSign {
    Plus,
    Minus,
}

/// Arguments of the primitive line integral [`t_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TArgs {
    pub p: i32,
    pub q: i32,
    pub sign: DeltaSign,
    pub c: f64,
}

/// Closed form of the primitive line integral for integer frequencies.
///
/// The value is even in `p` and in `q` separately. The five analytic cases
/// (`p = q = 0`, `p = 0`, `q = 0`, `|p| = |q|`, and the generic one) are
/// dispatched on exact integer equality, so structural zeros come out as
/// exact `0.0`: for `c = 1` both integration domains are empty, and for odd
/// `p + q` the two line signs give exactly opposite values.
pub fn t_integral(args: TArgs) -> f64 {
    let TArgs { p, q, sign, c } = args;
    debug_assert!((0.0..=1.0).contains(&c), "displacement out of range: {c}");
    if c == 1.0 {
        return 0.0;
    }
    let p = p.unsigned_abs();
    let q = q.unsigned_abs();
    let l = 1.0 - c;
    // tau = (-1)^(p + q) carries all the integer-endpoint trigonometry.
    let tau = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
    let sp = (f64::from(p) * PI * c).sin();
    let sq = (f64::from(q) * PI * c).sin();
    match (p, q) {
        (0, 0) => l,
        (0, _) => match sign {
            DeltaSign::Plus => -sq / (f64::from(q) * PI),
            DeltaSign::Minus => -tau * sq / (f64::from(q) * PI),
        },
        (_, 0) => match sign {
            DeltaSign::Plus => -tau * sp / (f64::from(p) * PI),
            DeltaSign::Minus => -sp / (f64::from(p) * PI),
        },
        _ if p == q => {
            let q = f64::from(q);
            0.5 * (l * (q * PI * c).cos() - sq / (q * PI))
        }
        _ => {
            let pf = f64::from(p);
            let qf = f64::from(q);
            let denom = PI * (pf - qf) * (pf + qf);
            match sign {
                DeltaSign::Plus => (qf * sq - tau * pf * sp) / denom,
                DeltaSign::Minus => (tau * qf * sq - pf * sp) / denom,
            }
        }
    }
}

/// The same line integral for arbitrary real frequencies, without any
/// integer simplification. Each degenerate case of [`t_integral`] is the
/// limit of this function, which is what the unit tests check; the integer
/// path exists so that structural zeros are exact rather than `1e-16` noise.
pub fn t_general(p: f64, q: f64, sign: DeltaSign, c: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&c), "displacement out of range: {c}");
    let l = 1.0 - c;
    // Product-to-sum in the integrand: half the sum of two single cosines
    // with frequencies p -+ q and phase offsets fixed by the line sign.
    let (phi_diff, phi_sum) = match sign {
        DeltaSign::Plus => (-q * PI * c, q * PI * c),
        DeltaSign::Minus => (p * PI * c, p * PI * c),
    };
    0.5 * (segment(p - q, phi_diff, l) + segment(p + q, phi_sum, l))
}

/// `integral over [0, l] of cos(a pi x + phi) dx`, with the `a = 0` limit.
fn segment(a: f64, phi: f64, l: f64) -> f64 {
    if a == 0.0 {
        l * phi.cos()
    } else {
        ((a * PI * l + phi).sin() - phi.sin()) / (a * PI)
    }
}

/// Four-term cosine combination produced by a product of two sine pairs:
/// orbitals `n, n_p` meet on the undisplaced coordinate and `m, m_p` on the
/// displaced one.
pub fn s_element(n: u32, n_p: u32, m: u32, m_p: u32, sign: DeltaSign, c: f64) -> f64 {
    s_from(&DirectT { c }, n as i32, n_p as i32, m as i32, m_p as i32, sign)
}

/// Matrix element of the two displaced contact lines between normalized
/// sector states, per unit coupling.
///
/// Index pairs must satisfy the exchange ordering of `sector`. Pairs of
/// opposite reflection parity never couple: the two line signs cancel
/// exactly and the element is an exact `0.0`.
pub fn potential_element(
    pair: BasisPair,
    pair_p: BasisPair,
    sector: Sector,
    c: f64,
) -> Result<f64> {
    check_ordering(pair, sector)?;
    check_ordering(pair_p, sector)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "displacement must lie in [0, 1], got {c}"
        )));
    }
    Ok(element_from(
        &DirectT { c },
        pair,
        pair_p,
        f64::from(sector.sigma()),
    ))
}

/// The four-pattern combination behind [`potential_element`], defined for
/// arbitrary index labels. The symmetrized state does not care which of its
/// two indices is written first, and this formula inherits that: swapping
/// both bra and ket labels reproduces the same value up to summation
/// roundoff. Exposed so that label-swap invariance can be checked directly.
pub fn potential_element_for_labels(
    pair: BasisPair,
    pair_p: BasisPair,
    sector: Sector,
    c: f64,
) -> Result<f64> {
    if pair.m < 1 || pair_p.m < 1 || pair.n < 1 || pair_p.n < 1 {
        return Err(Error::InvalidArgument(
            "index labels must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "displacement must lie in [0, 1], got {c}"
        )));
    }
    Ok(element_from(
        &DirectT { c },
        pair,
        pair_p,
        f64::from(sector.sigma()),
    ))
}

/// Same matrix element through an independent route: adaptive quadrature of
/// the basis-function products along the two interaction lines. Used to
/// cross-check the closed forms; never called during assembly.
pub fn quadrature_potential_element(
    pair: BasisPair,
    pair_p: BasisPair,
    sector: Sector,
    c: f64,
    tol: f64,
) -> Result<f64> {
    use crate::model::eval_basis_function;
    check_ordering(pair, sector)?;
    check_ordering(pair_p, sector)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "displacement must lie in [0, 1], got {c}"
        )));
    }
    if c == 1.0 {
        return Ok(0.0);
    }
    let product = |x1: f64, x2: f64| {
        eval_basis_function(pair, sector, x1, x2).unwrap()
            * eval_basis_function(pair_p, sector, x1, x2).unwrap()
    };
    let upper = adaptive_simpson(|x| product(x, x + c), 0.0, 1.0 - c, 0.5 * tol)?;
    let lower = adaptive_simpson(|x| product(x, x - c), c, 1.0, 0.5 * tol)?;
    Ok(upper.value + lower.value)
}

fn check_ordering(pair: BasisPair, sector: Sector) -> Result<()> {
    let ok = pair.m >= 1
        && match sector.exchange {
            Exchange::Bosonic => pair.n >= pair.m,
            Exchange::Fermionic => pair.n > pair.m,
        };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "pair ({}, {}) violates the {} exchange ordering",
            pair.n, pair.m, sector
        )))
    }
}

/// Source of primitive line integrals at fixed `c`: either direct closed-form
/// evaluation or a precomputed lookup table. Both routes call [`t_integral`],
/// so they agree bit for bit.
trait TSource {
    fn t(&self, p: i32, q: i32, sign: DeltaSign) -> f64;
}

struct DirectT {
    c: f64,
}

impl TSource for DirectT {
    fn t(&self, p: i32, q: i32, sign: DeltaSign) -> f64 {
        t_integral(TArgs {
            p,
            q,
            sign,
            c: self.c,
        })
    }
}

/// Dense table of `T(p, q, s)` for `0 <= p, q <= 2 n_max`, exploiting the
/// evenness in both frequencies.
struct TTable {
    stride: usize,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

impl TTable {
    fn build(n_max: u32, c: f64) -> Self {
        let stride = 2 * n_max as usize + 1;
        let mut plus = vec![0.0; stride * stride];
        let mut minus = vec![0.0; stride * stride];
        for p in 0..stride {
            for q in 0..stride {
                let args = |sign| TArgs {
                    p: p as i32,
                    q: q as i32,
                    sign,
                    c,
                };
                plus[p * stride + q] = t_integral(args(DeltaSign::Plus));
                minus[p * stride + q] = t_integral(args(DeltaSign::Minus));
            }
        }
        Self {
            stride,
            plus,
            minus,
        }
    }
}

impl TSource for TTable {
    fn t(&self, p: i32, q: i32, sign: DeltaSign) -> f64 {
        let idx = p.unsigned_abs() as usize * self.stride + q.unsigned_abs() as usize;
        match sign {
            DeltaSign::Plus => self.plus[idx],
            DeltaSign::Minus => self.minus[idx],
        }
    }
}

/// Sum of the four cosine integrals for one orbital pattern and one line.
fn s_from<T: TSource>(src: &T, a: i32, a_p: i32, b: i32, b_p: i32, sign: DeltaSign) -> f64 {
    src.t(a - a_p, b - b_p, sign) - src.t(a - a_p, b + b_p, sign)
        - src.t(a + a_p, b - b_p, sign)
        + src.t(a + a_p, b + b_p, sign)
}

/// Potential element per unit coupling, written against any `TSource`. The
/// four patterns come from expanding the two symmetrized products; exchange
/// cross terms carry one factor of the exchange sign.
fn element_from<T: TSource>(src: &T, pair: BasisPair, pair_p: BasisPair, sigma: f64) -> f64 {
    let (n, m) = (pair.n as i32, pair.m as i32);
    let (np, mp) = (pair_p.n as i32, pair_p.m as i32);
    if (n + m + np + mp) % 2 == 1 {
        // Opposite reflection parity: the two line signs cancel exactly.
        return 0.0;
    }
    let both = |a: i32, a_p: i32, b: i32, b_p: i32| {
        s_from(src, a, a_p, b, b_p, DeltaSign::Plus) + s_from(src, a, a_p, b, b_p, DeltaSign::Minus)
    };
    let tot = both(n, np, m, mp)
        + sigma * both(n, mp, m, np)
        + sigma * both(m, np, n, mp)
        + both(m, mp, n, np);
    let d: f64 = if pair.n == pair.m { 2.0 } else { 1.0 };
    let d_p: f64 = if pair_p.n == pair_p.m { 2.0 } else { 1.0 };
    tot / (2.0 * (d * d_p).sqrt())
}

/// Dense symmetric Hamiltonian of one sector at fixed parameters.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub basis: Basis,
    pub params: ModelParams,
    pub entries: DMatrix<f64>,
}

impl HamiltonianMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Writes the upper triangle as `i j value` lines after a header that
    /// records the assembly parameters. Values carry full f64 precision.
    pub fn write_dump<W: io::Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(
            w,
            "# N={} n_max={} sigma={:+} pi={:+} g={:.16e} c={:.16e}",
            self.n(),
            self.basis.n_max,
            self.basis.sector.sigma(),
            self.basis.sector.pi(),
            self.params.g,
            self.params.c,
        )?;
        for i in 0..self.n() {
            for j in i..self.n() {
                writeln!(w, "{} {} {:.16e}", i, j, self.entries[(i, j)])?;
            }
        }
        Ok(())
    }
}

/// Assembles the dense sector Hamiltonian: kinetic diagonal plus `g` times
/// the potential elements. A lookup table over all reachable frequency
/// combinations makes each element a handful of table reads, and the matrix
/// is filled from its upper triangle so it is symmetric by construction.
pub fn assemble_hamiltonian(basis: &Basis, params: ModelParams) -> HamiltonianMatrix {
    let n = basis.len();
    let mut entries = DMatrix::zeros(n, n);
    if params.g != 0.0 {
        let table = TTable::build(basis.n_max, params.c);
        let sigma = f64::from(basis.sector.sigma());
        for i in 0..n {
            for j in i..n {
                let v = params.g * element_from(&table, basis.pairs[i], basis.pairs[j], sigma);
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
    }
    for i in 0..n {
        entries[(i, i)] += basis.pairs[i].energy();
    }
    HamiltonianMatrix {
        basis: basis.clone(),
        params,
        entries,
    }
}
