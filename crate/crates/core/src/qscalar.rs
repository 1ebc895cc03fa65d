//! Scalar arithmetic at the root of unity `q = exp(i pi / N)`.
//!
//! Exponents are always applied literally: `q^x = exp(i pi x / N)` for any
//! complex `x`, never through a logarithm of `q`, so there is no branch choice.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar of the ground field.
pub type Scalar = Complex64;

pub const DEFAULT_EPS_ABS: f64 = 1e-9;
pub const DEFAULT_EPS_REL: f64 = 1e-9;

/// The order parameter `N`, the root `q = e^{i pi / N}` and the comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootContext {
    n: usize,
    q: Scalar,
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl RootContext {
    /// Context with the default tolerances. Rejects `N < 2`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_tolerances(n, DEFAULT_EPS_ABS, DEFAULT_EPS_REL)
    }

    pub fn with_tolerances(n: usize, eps_abs: f64, eps_rel: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        let q = Scalar::from_polar(1.0, PI / n as f64);
        Ok(Self {
            n,
            q,
            eps_abs,
            eps_rel,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> Scalar {
        self.q
    }

    /// `q^x = exp(i pi x / N)`.
    pub fn q_pow(&self, x: Scalar) -> Scalar {
        (Scalar::i() * PI * x / self.n as f64).exp()
    }

    /// `q^x` for a real exponent.
    pub fn q_pow_re(&self, x: f64) -> Scalar {
        Scalar::from_polar(1.0, PI * x / self.n as f64)
    }

    /// The bracket `{a} = q^a - q^{-a}`.
    pub fn qbracket(&self, a: Scalar) -> Scalar {
        self.q_pow(a) - self.q_pow(-a)
    }

    /// The quantum number `[a] = {a} / {1}`.
    pub fn qnumber(&self, a: Scalar) -> Scalar {
        self.qbracket(a) / self.qbracket(Scalar::new(1.0, 0.0))
    }

    /// `{n}! = {n}{n-1}...{1}`, with `{0}! = 1`.
    ///
    /// Only defined for `n < N`: `{N} = 0`, so larger factorials vanish and are
    /// never needed by the R-matrix sum.
    pub fn qbracket_factorial(&self, n: usize) -> Result<Scalar> {
        if n >= self.n {
            return Err(Error::Range {
                what: "bracket factorial",
                index: n,
                bound: self.n,
            });
        }
        Ok((1..=n)
            .map(|k| self.qbracket(Scalar::new(k as f64, 0.0)))
            .product())
    }

    /// `|a - b| <= eps_abs + eps_rel * max(|a|, |b|)`.
    pub fn approx_eq(&self, a: Scalar, b: Scalar) -> bool {
        (a - b).norm() <= self.eps_abs + self.eps_rel * a.norm().max(b.norm())
    }

    /// Composite tolerance at magnitude `scale`.
    pub fn tolerance_at(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale
    }
}

/// Relative distance `|a - b| / max(|a|, |b|)`, falling back to the absolute
/// distance when both are below `floor`.
pub fn relative_residual(a: Scalar, b: Scalar, floor: f64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale <= floor {
        (a - b).norm()
    } else {
        (a - b).norm() / scale
    }
}

pub(crate) fn ensure_finite(z: Scalar, what: &'static str) -> Result<Scalar> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}
