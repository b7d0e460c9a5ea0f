//! Adaptive quadrature, used as the independent cross-check for every
//! closed-form integral in the crate.

use crate::error::{Error, Result};

/// Result of an adaptive integration: the value, an a-posteriori error
/// estimate, and the number of integrand evaluations spent.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// Deepest bisection level before a subinterval is accepted as-is. With the
/// interval width halving per level this is far below the f64 resolution
/// limit, so hitting it means the integrand is effectively non-smooth.
const MAX_DEPTH: u32 = 48;

/// Hard cap on integrand evaluations, to bound runtime on hostile inputs.
const MAX_EVALS: usize = 4_000_000;

/// Irrational fraction (inverse golden ratio) at which the interval is split
/// before dyadic refinement starts. With a rational split, a periodic
/// integrand whose period divides the panel width is sampled only at its
/// extrema and the refinement sees a spurious zero error; an irrational
/// split keeps every later midpoint off any rational lattice.
const SPLIT: f64 = 0.618_033_988_749_894_9;

/// Integrates `f` over `[a, b]` by adaptive Simpson bisection with Richardson
/// extrapolation, refining until the accumulated error estimate is below
/// `tol`.
///
/// Requires `a <= b` and `tol > 0`. Fails with [`Error::Numeric`] if the
/// integrand returns a non-finite value, and with [`Error::NoConvergence`] if
/// the evaluation budget runs out before the tolerance is met.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must satisfy a <= b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evals: 0,
        });
    }

    let mut ctx = Context {
        f,
        evals: 0,
        error: 0.0,
        budget_hit: false,
    };
    let s = a + (b - a) * SPLIT;
    let mut value = 0.0;
    for (lo, hi) in [(a, s), (s, b)] {
        let flo = ctx.eval(lo)?;
        let fmid = ctx.eval(0.5 * (lo + hi))?;
        let fhi = ctx.eval(hi)?;
        let whole = simpson(lo, hi, flo, fmid, fhi);
        value += ctx.refine(lo, hi, flo, fmid, fhi, whole, 0.5 * tol, 0)?;
    }

    if ctx.budget_hit && ctx.error > tol {
        return Err(Error::NoConvergence {
            iterations: ctx.evals,
            residual: ctx.error,
            tolerance: tol,
        });
    }
    Ok(Quadrature {
        value,
        error: ctx.error,
        evals: ctx.evals,
    })
}

struct Context<F> {
    f: F,
    evals: usize,
    error: f64,
    budget_hit: bool,
}

impl<F: Fn(f64) -> f64> Context<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evals += 1;
        let y = (self.f)(x);
        if !y.is_finite() {
            return Err(Error::Numeric(format!(
                "integrand returned {y} at x = {x}"
            )));
        }
        Ok(y)
    }

    /// Accepts the current panel or splits it, returning the panel's
    /// contribution and accumulating its error estimate.
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let flm = self.eval(0.5 * (a + m))?;
        let frm = self.eval(0.5 * (m + b))?;
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        // One bisection gains a factor 16 for Simpson, so delta/15 estimates
        // the error of the refined sum.
        let estimate = delta.abs() / 15.0;
        let out_of_budget = self.evals >= MAX_EVALS;
        if estimate <= tol || depth >= MAX_DEPTH || out_of_budget {
            self.error += estimate;
            self.budget_hit |= estimate > tol;
            return Ok(left + right + delta / 15.0);
        }
        let half = 0.5 * tol;
        let l = self.refine(a, m, fa, flm, fm, left, half, depth + 1)?;
        let r = self.refine(m, b, fm, frm, fb, right, half, depth + 1)?;
        Ok(l + r)
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}
