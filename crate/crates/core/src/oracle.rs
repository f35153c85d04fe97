//! Reference values of `K` and `L` by direct quadrature of
//!
//! ```text
//! K(x, y) = (1/sqrt(pi)) * int_0^inf e^(-t^2/4) e^(-y t) cos(x t) dt
//! L(x, y) = (1/sqrt(pi)) * int_0^inf e^(-t^2/4) e^(-y t) sin(x t) dt
//! ```
//!
//! The improper integral is truncated at `t_upper` (tail below
//! `e^(-t_upper^2/4)`, about `1e-174` at the default of 40) and integrated
//! with adaptive Gauss-Kronrod 7/15 bisection. Each interval must meet
//! `abs_tol * len / t_upper`, so the accepted local errors sum to at most
//! `abs_tol`. A fixed composite Gauss-Legendre rule is provided as an
//! independent cross-check.

// Rule tables keep their published digits.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::pseudo_voigt::{ComplexArgument, FaddeevaValue, FRAC_1_SQRT_PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub t_upper: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            t_upper: 40.0,
            abs_tol: 1e-10,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(t_upper: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            t_upper,
            abs_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_upper >= 40.0 && self.t_upper.is_finite()) {
            return Err(Error::domain(format!(
                "t_upper must be finite and at least 40, got {}",
                self.t_upper
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol <= 1e-9) {
            return Err(Error::domain(format!(
                "abs_tol must lie in (0, 1e-9], got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Result of an adaptive integration, already scaled by `1/sqrt(pi)` when
/// returned from the `*_estimate` functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

// Kronrod 15-point abscissae (descending, last is the centre) and weights,
// with the embedded 7-point Gauss weights for xgk[1], xgk[3], xgk[5], xgk[7].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

// 5-point Gauss-Legendre on [-1, 1].
const GL5_X: [f64; 3] = [
    0.0,
    0.538_469_310_105_683_091_036_314_420_700_208,
    0.906_179_845_938_663_992_797_626_878_299_393,
];
const GL5_W: [f64; 3] = [
    0.568_888_888_888_888_888_888_888_888_888_889,
    0.478_628_670_499_366_468_041_291_514_835_638,
    0.236_926_885_056_189_087_514_264_040_719_917,
];

/// Returns (Kronrod estimate, |Kronrod - Gauss|).
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive bisection on `[a, b]` until each interval meets `abs_tol * len / (b - a)`.
///
/// On running out of subdivisions the error carries the best estimate so far
/// (accepted pieces plus the pending intervals' Kronrod values).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> std::result::Result<QuadratureEstimate, QuadratureEstimate> {
    let width = b - a;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut subdivisions = 0;
    let mut evaluations = 15;

    // LIFO with the right half pushed first keeps the traversal left to right.
    let first = gauss_kronrod_15(&f, a, b);
    let mut pending = vec![(a, b, first.0, first.1)];
    while let Some((lo, hi, est, err)) = pending.pop() {
        let budget = abs_tol * (hi - lo) / width;
        let mid = 0.5 * (lo + hi);
        if err <= budget || mid <= lo || mid >= hi {
            value += est;
            error += err;
            continue;
        }
        if subdivisions == max_subdivisions {
            pending.push((lo, hi, est, err));
            let rest: f64 = pending.iter().map(|p| p.2).sum();
            let rest_err: f64 = pending.iter().map(|p| p.3).sum();
            return Err(QuadratureEstimate {
                value: value + rest,
                abs_error: error + rest_err,
                subdivisions,
                evaluations,
            });
        }
        subdivisions += 1;
        evaluations += 30;
        let left = gauss_kronrod_15(&f, lo, mid);
        let right = gauss_kronrod_15(&f, mid, hi);
        pending.push((mid, hi, right.0, right.1));
        pending.push((lo, mid, left.0, left.1));
    }
    Ok(QuadratureEstimate {
        value,
        abs_error: error,
        subdivisions,
        evaluations,
    })
}

/// Composite 5-point Gauss-Legendre rule over `panels` equal panels.
pub fn integrate_fixed_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let half = 0.5 * h;
    let mut total = 0.0;
    for i in 0..panels {
        let centre = a + (i as f64 + 0.5) * h;
        let mut panel = GL5_W[0] * f(centre);
        for k in 1..3 {
            let dx = half * GL5_X[k];
            panel += GL5_W[k] * (f(centre - dx) + f(centre + dx));
        }
        total += panel * half;
    }
    total
}

/// Which trigonometric factor the integrand carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Cos,
    Sin,
}

fn integrand(arg: ComplexArgument, part: Part) -> impl Fn(f64) -> f64 {
    let (x, y) = (arg.x(), arg.y());
    move |t: f64| {
        let envelope = (-0.25 * t * t - y * t).exp();
        match part {
            Part::Cos => envelope * (x * t).cos(),
            Part::Sin => envelope * (x * t).sin(),
        }
    }
}

fn reference_estimate(
    arg: ComplexArgument,
    cfg: &QuadratureConfig,
    part: Part,
) -> Result<QuadratureEstimate> {
    cfg.validate()?;
    // The 1/sqrt(pi) prefactor is applied afterwards, so integrate to sqrt(pi) * abs_tol.
    let raw_tol = cfg.abs_tol / FRAC_1_SQRT_PI;
    let scale = |e: QuadratureEstimate| QuadratureEstimate {
        value: FRAC_1_SQRT_PI * e.value,
        abs_error: FRAC_1_SQRT_PI * e.abs_error,
        ..e
    };
    integrate_adaptive(
        integrand(arg, part),
        0.0,
        cfg.t_upper,
        raw_tol,
        cfg.max_subdivisions,
    )
    .map(scale)
    .map_err(|best| {
        let best = scale(best);
        Error::Quadrature {
            x: arg.x(),
            y: arg.y(),
            estimate: best.value,
            achieved_error: best.abs_error,
        }
    })
}

/// `K_ref` with its error estimate and work counters.
pub fn k_reference_estimate(
    arg: ComplexArgument,
    cfg: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    reference_estimate(arg, cfg, Part::Cos)
}

/// `L_ref` with its error estimate and work counters.
pub fn l_reference_estimate(
    arg: ComplexArgument,
    cfg: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    reference_estimate(arg, cfg, Part::Sin)
}

/// Reference Voigt function `K(x, y)`.
pub fn k_reference(arg: ComplexArgument, cfg: &QuadratureConfig) -> Result<f64> {
    k_reference_estimate(arg, cfg).map(|e| e.value)
}

/// Reference `L(x, y)`.
pub fn l_reference(arg: ComplexArgument, cfg: &QuadratureConfig) -> Result<f64> {
    l_reference_estimate(arg, cfg).map(|e| e.value)
}

/// Reference `w(x + iy) = K + iL`.
pub fn w_reference(arg: ComplexArgument, cfg: &QuadratureConfig) -> Result<FaddeevaValue> {
    Ok(FaddeevaValue {
        re: k_reference(arg, cfg)?,
        im: l_reference(arg, cfg)?,
    })
}

/// Default panel count of the fixed-rule cross-check.
pub const CROSS_CHECK_PANELS: usize = 10_000;

/// `(K, L)` from the fixed composite rule on `[0, t_upper]`; no error control.
pub fn w_reference_fixed(arg: ComplexArgument, t_upper: f64, panels: usize) -> FaddeevaValue {
    FaddeevaValue {
        re: FRAC_1_SQRT_PI
            * integrate_fixed_panels(integrand(arg, Part::Cos), 0.0, t_upper, panels),
        im: FRAC_1_SQRT_PI
            * integrate_fixed_panels(integrand(arg, Part::Sin), 0.0, t_upper, panels),
    }
}
