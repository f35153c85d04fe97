//! Rational approximations of the Voigt function `K`, the companion `L` and
//! `w = K + iL`, obtained by transforming the two-term kernel expansion in
//! closed form.
//!
//! With `a = y + gamma`, `b = 2y + gamma`:
//!
//! ```text
//! K ~ (1/sqrt(pi)) * ( a / (x^2 + a^2) + 4 gamma (b^2 - 4x^2) / (4x^2 + b^2)^2 )
//! L ~ (x/sqrt(pi)) * ( 1 / (x^2 + a^2) + 16 gamma b / (4x^2 + b^2)^2 )
//! ```
//!
//! Every denominator contains `gamma^2 > 0`, so both are regular on `y >= 0`.

use std::f64::consts::FRAC_2_SQRT_PI;

use crate::error::{Error, Result};

pub(crate) const FRAC_1_SQRT_PI: f64 = FRAC_2_SQRT_PI * 0.5;

pub const DEFAULT_GAMMA: f64 = 2.75;

/// A point `z = x + iy` in the closed upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArgument {
    x: f64,
    y: f64,
}

impl ComplexArgument {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!(
                "x and y must be finite, got ({x}, {y})"
            )));
        }
        if y < 0.0 {
            return Err(Error::domain(format!("y must be non-negative, got {y}")));
        }
        Ok(ComplexArgument { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoVoigtParams {
    gamma: f64,
}

impl PseudoVoigtParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::domain(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        Ok(PseudoVoigtParams { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for PseudoVoigtParams {
    fn default() -> Self {
        PseudoVoigtParams {
            gamma: DEFAULT_GAMMA,
        }
    }
}

/// `w = re + i im`, i.e. `(K, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaddeevaValue {
    pub re: f64,
    pub im: f64,
}

impl FaddeevaValue {
    pub fn component(&self, c: Component) -> f64 {
        match c {
            Component::Re => self.re,
            Component::Im => self.im,
        }
    }
}

/// Real (`K`) or imaginary (`L`) part of `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Re,
    Im,
}

// Evaluation order is fixed here and shared by every entry point, so the
// single-component functions and `faddeeva_approx` agree to the last bit.
struct Shared {
    x: f64,
    x2: f64,
    a: f64,
    b: f64,
    b2: f64,
    inv_d1: f64,
    inv_d2sq: f64,
    gamma: f64,
}

impl Shared {
    #[inline]
    fn new(arg: ComplexArgument, p: PseudoVoigtParams) -> Self {
        let gamma = p.gamma;
        let x = arg.x;
        let x2 = x * x;
        let a = arg.y + gamma;
        let b = 2.0 * arg.y + gamma;
        let b2 = b * b;
        let d1 = x2 + a * a;
        let d2 = 4.0 * x2 + b2;
        Shared {
            x,
            x2,
            a,
            b,
            b2,
            inv_d1: 1.0 / d1,
            inv_d2sq: 1.0 / (d2 * d2),
            gamma,
        }
    }

    #[inline]
    fn k(&self) -> f64 {
        FRAC_1_SQRT_PI
            * (self.a * self.inv_d1 + 4.0 * self.gamma * (self.b2 - 4.0 * self.x2) * self.inv_d2sq)
    }

    #[inline]
    fn l(&self) -> f64 {
        (self.x * FRAC_1_SQRT_PI) * (self.inv_d1 + 16.0 * self.gamma * self.b * self.inv_d2sq)
    }
}

/// Pseudo-Voigt approximation of `K(x, y)`.
pub fn voigt_k_approx(arg: ComplexArgument, p: PseudoVoigtParams) -> f64 {
    Shared::new(arg, p).k()
}

/// Rational approximation of `L(x, y)`.
pub fn voigt_l_approx(arg: ComplexArgument, p: PseudoVoigtParams) -> f64 {
    Shared::new(arg, p).l()
}

/// Both components from one set of shared subexpressions.
pub fn faddeeva_approx(arg: ComplexArgument, p: PseudoVoigtParams) -> FaddeevaValue {
    let s = Shared::new(arg, p);
    FaddeevaValue {
        re: s.k(),
        im: s.l(),
    }
}
