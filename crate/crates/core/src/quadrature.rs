//! One-dimensional adaptive quadrature and the closed-form integrals built on
//! Gaussian weights.
//!
//! [`Integrator`] runs a globally adaptive Gauss–Kronrod 7/15 scheme: the
//! panel with the largest error estimate is halved until the summed estimate
//! meets the tolerance or the evaluation budget is spent. Infinite endpoints
//! are folded onto a finite parameter interval first:
//!
//! * `(-∞, ∞)`: `x = s·t / (1 - t²)`, `t ∈ (-1, 1)`
//! * `[a, ∞)`: `x = a + s·t / (1 - t)`, `t ∈ [0, 1)`
//! * `(-∞, b]`: `x = b - s·t / (1 - t)`, `t ∈ [0, 1)`
//!
//! with a length scale `s` (default 1, see [`Integrator::with_scale`]).
//!
//! Kronrod nodes are interior, so the mapped endpoints are never evaluated.
//! Results are bit-for-bit reproducible for identical inputs.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Default evaluation budget per integral.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

#[allow(clippy::excessive_precision)]
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
#[allow(clippy::excessive_precision)]
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const EVALS_PER_PANEL: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances and budget for [`Integrator::integrate`].
///
/// The integral is accepted once the summed error estimate is at most
/// `max(abs_tol, rel_tol·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    abs_tol: f64,
    rel_tol: f64,
    max_evaluations: usize,
    scale: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            scale: 1.0,
        }
    }
}

impl Integrator {
    /// Absolute tolerance only, default budget.
    pub fn new(abs_tol: f64) -> Self {
        Integrator {
            abs_tol,
            ..Integrator::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    /// Length scale `s` of the infinite-interval maps (`x = s·t/(1 − t²)` and
    /// so on). Setting it near the integrand's width keeps the mass away
    /// from the mapped endpoints.
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_evaluations(&self) -> usize {
        self.max_evaluations
    }

    fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t >= 0.0;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::Domain("tolerance must be positive and finite"));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Domain("mapping scale must be positive and finite"));
        }
        if self.max_evaluations < EVALS_PER_PANEL {
            return Err(Error::Domain("evaluation budget below one Gauss-Kronrod panel"));
        }
        Ok(())
    }

    /// Integrates `f` over `[lo, hi]`; either endpoint may be infinite.
    /// Reversed bounds give the negated integral.
    pub fn integrate<F>(&self, mut f: F, lo: f64, hi: f64) -> Result<QuadratureResult>
    where
        F: FnMut(f64) -> f64,
    {
        self.validate()?;
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Domain("integration bound is NaN"));
        }
        if lo == hi {
            if lo.is_infinite() {
                return Err(Error::Domain("empty infinite interval"));
            }
            return Ok(QuadratureResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                evaluations: 1,
            });
        }
        if lo > hi {
            return self.integrate(f, hi, lo).map(|r| QuadratureResult {
                value: -r.value,
                ..r
            });
        }

        let scale = self.scale;
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => self.adapt(&mut f, lo, hi),
            (false, false) => self.adapt_mapped(
                |t: f64| {
                    let d = 1.0 - t * t;
                    if d <= 0.0 {
                        return Ok(0.0);
                    }
                    let x = scale * t / d;
                    let jac = scale * (1.0 + t * t) / (d * d);
                    mapped(&mut f, x, jac)
                },
                -1.0,
                1.0,
            ),
            (true, false) => self.adapt_mapped(
                |t: f64| {
                    let d = 1.0 - t;
                    if d <= 0.0 {
                        return Ok(0.0);
                    }
                    mapped(&mut f, lo + scale * t / d, scale / (d * d))
                },
                0.0,
                1.0,
            ),
            (false, true) => self.adapt_mapped(
                |t: f64| {
                    let d = 1.0 - t;
                    if d <= 0.0 {
                        return Ok(0.0);
                    }
                    mapped(&mut f, hi - scale * t / d, scale / (d * d))
                },
                0.0,
                1.0,
            ),
        }
    }

    fn adapt_mapped<G: FnMut(f64) -> core::result::Result<f64, f64>>(&self, g: G, a: f64, b: f64) -> Result<QuadratureResult> {
        self.adapt(&mut Mapped(g), a, b)
    }

    fn adapt<G: Integrand>(&self, g: &mut G, a: f64, b: f64) -> Result<QuadratureResult> {
        let first = gauss_kronrod(g, a, b)?;
        let mut evaluations = EVALS_PER_PANEL;
        let mut value = first.value;
        let mut error = first.error;
        let mut heap = BinaryHeap::new();
        let mut frozen: Vec<Panel> = Vec::new();
        heap.push(first);

        loop {
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                return Ok(finish(&heap, &frozen, evaluations));
            }
            if evaluations + 2 * EVALS_PER_PANEL > self.max_evaluations {
                return Err(Error::Convergence {
                    best: finish(&heap, &frozen, evaluations),
                });
            }
            let Some(worst) = heap.pop() else {
                return Err(Error::Convergence {
                    best: finish(&heap, &frozen, evaluations),
                });
            };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                frozen.push(worst);
                continue;
            }
            let left = gauss_kronrod(g, worst.a, mid)?;
            let right = gauss_kronrod(g, mid, worst.b)?;
            evaluations += 2 * EVALS_PER_PANEL;
            value += left.value + right.value - worst.value;
            error = (error + left.error + right.error - worst.error).max(0.0);
            heap.push(left);
            heap.push(right);
        }
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol` with the
/// default evaluation budget.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    Integrator::new(tol).integrate(f, lo, hi)
}

/// Iterated integral of `f(x, y, z)` over all of ℝ³, composed from three
/// nested one-dimensional integrals (z innermost).
///
/// The reported error estimate is that of the outermost integral. Inner
/// integrals share the integrator's settings except for the absolute
/// tolerance, which is divided by the length scale once per level (`tol/s`
/// for the plane, `tol/s²` for the line) so that an inner error integrated
/// over a width of order `s` stays within `tol`.
pub fn integrate_r3<F>(integrator: &Integrator, f: F) -> Result<QuadratureResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let s = integrator.scale;
    let plane_integrator = Integrator {
        abs_tol: integrator.abs_tol / s,
        ..*integrator
    };
    let line_integrator = Integrator {
        abs_tol: integrator.abs_tol / (s * s),
        ..*integrator
    };
    let mut inner_error: Option<Error> = None;
    let mut inner_evaluations = 0usize;
    let outer = integrator.integrate(
        |x| {
            if inner_error.is_some() {
                return 0.0;
            }
            let plane = plane_integrator.integrate(
                |y| {
                    if inner_error.is_some() {
                        return 0.0;
                    }
                    match line_integrator.integrate(|z| f(x, y, z), f64::NEG_INFINITY, f64::INFINITY) {
                        Ok(r) => {
                            inner_evaluations += r.evaluations;
                            r.value
                        }
                        Err(e) => {
                            inner_error = Some(e);
                            0.0
                        }
                    }
                },
                f64::NEG_INFINITY,
                f64::INFINITY,
            );
            match plane {
                Ok(r) => {
                    inner_evaluations += r.evaluations;
                    r.value
                }
                Err(e) => {
                    inner_error.get_or_insert(e);
                    0.0
                }
            }
        },
        f64::NEG_INFINITY,
        f64::INFINITY,
    )?;
    if let Some(e) = inner_error {
        return Err(e);
    }
    Ok(QuadratureResult {
        evaluations: outer.evaluations + inner_evaluations,
        ..outer
    })
}

/// `∫ x^{2n} e^{-c x²} dx` over the real line, `sqrt(π/c)·(2n−1)!!/(2c)^n`.
///
/// The ratio `(2n−1)!!/(2c)^n` is accumulated as a running product so large
/// `n` or extreme `c` do not overflow intermediate terms. `n` is capped at 100.
pub fn gaussian_moment(n: u32, c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain("gaussian_moment requires c > 0"));
    }
    if n > 100 {
        return Err(Error::Domain("gaussian_moment order is capped at 100"));
    }
    let mut value = libm::sqrt(PI / c);
    for k in 1..=n {
        value *= f64::from(2 * k - 1) / (2.0 * c);
    }
    Ok(value)
}

/// `k!! = k·(k−2)·(k−4)···`, with `0!! = (−1)!! = 1`. Arguments above 199
/// (the `(2n−1)!!` needed for `n = 100`) are rejected.
pub fn double_factorial(k: u32) -> Result<f64> {
    if k > 199 {
        return Err(Error::Domain("double factorial argument is capped at 199"));
    }
    let mut acc = 1.0;
    let mut j = k;
    while j > 1 {
        acc *= f64::from(j);
        j -= 2;
    }
    Ok(acc)
}

/// Regularized upper incomplete gamma `Q(3/2, λ) = Γ(3/2, λ)/Γ(3/2)`,
/// evaluated as `erfc(√λ) + 2·sqrt(λ/π)·e^{−λ}`.
///
/// This is the fraction of Maxwell–Boltzmann molecules whose kinetic energy
/// exceeds `λ·kT`.
pub fn q_gamma_3half(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::Domain("q_gamma_3half requires lambda >= 0"));
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let root = libm::sqrt(lambda);
    Ok(libm::erfc(root) + 2.0 * root / libm::sqrt(PI) * libm::exp(-lambda))
}

/// Regularized lower incomplete gamma `P(3/2, z) = 1 − Q(3/2, z)`.
///
/// Below `z = 2` the power series is summed directly, which keeps full
/// relative accuracy as `z → 0` where `1 − Q` would cancel.
pub fn p_gamma_3half(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::Domain("p_gamma_3half requires z >= 0"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z >= 2.0 {
        return Ok(1.0 - q_gamma_3half(z)?);
    }
    // P(a, z) = z^a e^{-z} / Γ(a+1) · Σ_k z^k / ((a+1)…(a+k)), a = 3/2.
    let gamma_5_2 = 0.75 * libm::sqrt(PI);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut denom = 1.5;
    for _ in 0..200 {
        denom += 1.0;
        term *= z / denom;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    Ok(z * libm::sqrt(z) * libm::exp(-z) / gamma_5_2 * sum)
}

trait Integrand {
    /// `Err(x)` flags a non-finite value at `x`.
    fn eval(&mut self, x: f64) -> core::result::Result<f64, f64>;
}

impl<F: FnMut(f64) -> f64> Integrand for F {
    fn eval(&mut self, x: f64) -> core::result::Result<f64, f64> {
        let y = self(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(x)
        }
    }
}

/// Change-of-variables closures report the non-finite point in the original
/// coordinate themselves.
struct Mapped<G>(G);

impl<G: FnMut(f64) -> core::result::Result<f64, f64>> Integrand for Mapped<G> {
    fn eval(&mut self, t: f64) -> core::result::Result<f64, f64> {
        (self.0)(t)
    }
}

fn mapped<F: FnMut(f64) -> f64>(f: &mut F, x: f64, jac: f64) -> core::result::Result<f64, f64> {
    let y = f(x);
    if !y.is_finite() {
        return Err(x);
    }
    if y == 0.0 || !jac.is_finite() {
        return Ok(0.0);
    }
    let v = y * jac;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(x)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<G: Integrand>(g: &mut G, a: f64, b: f64) -> Result<Panel> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |g: &mut G, x: f64| g.eval(x).map_err(|at| Error::NonFinite { at });

    let f_centre = eval(g, centre)?;
    let mut kronrod = KRONROD_WEIGHTS[7] * f_centre;
    let mut gauss = GAUSS_WEIGHTS[3] * f_centre;
    let mut abs_sum = kronrod.abs();
    for (j, (&node, &weight)) in KRONROD_NODES[..7].iter().zip(&KRONROD_WEIGHTS[..7]).enumerate() {
        let dx = half * node;
        let f1 = eval(g, centre - dx)?;
        let f2 = eval(g, centre + dx)?;
        kronrod += weight * (f1 + f2);
        abs_sum += weight * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * (f1 + f2);
        }
    }
    let width = half.abs();
    let value = kronrod * half;
    let roundoff = 50.0 * f64::EPSILON * abs_sum * width;
    let error = ((kronrod - gauss) * half).abs().max(roundoff);
    Ok(Panel { a, b, value, error })
}

fn finish(heap: &BinaryHeap<Panel>, frozen: &[Panel], evaluations: usize) -> QuadratureResult {
    let mut panels: Vec<Panel> = heap.iter().chain(frozen).copied().collect();
    panels.sort_unstable_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let abs_error_estimate = panels.iter().map(|p| p.error).sum();
    QuadratureResult {
        value,
        abs_error_estimate,
        evaluations,
    }
}
