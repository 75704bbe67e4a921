//! Special functions used by the multipliers and their asymptotics.

pub mod gamma;
pub mod hypergeometric;
pub mod legendre;
pub mod oscillatory;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Dimension;

pub use gamma::{complex_gamma, ln_gamma, pochhammer};
pub use hypergeometric::hypergeometric_2f1;
pub use legendre::{legendre_p, legendre_p_hypergeometric};
pub use oscillatory::oscillatory_j;

/// Margin kept above the lower limit `Re α > (1-n)/2`.
pub const ORDER_MARGIN: f64 = 1e-6;

/// The analytic order `α` of the fractional means, tied to a dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexOrder {
    alpha: Complex64,
    dim: Dimension,
}

impl ComplexOrder {
    pub fn new(alpha: Complex64, dim: Dimension) -> Result<Self> {
        let floor = (1.0 - dim.n() as f64) / 2.0 + ORDER_MARGIN;
        if !(alpha.re > floor) || !alpha.im.is_finite() {
            return Err(Error::Domain(format!(
                "order α = {alpha} needs Re α > {floor} in dimension {}",
                dim.n()
            )));
        }
        Ok(Self { alpha, dim })
    }

    pub fn real(alpha: f64, dim: Dimension) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), dim)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim.n()
    }

    /// Same dimension, conjugated order.
    pub fn conj(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            dim: self.dim,
        }
    }

    /// `μ = α + (n-2)/2`, the order of the associated Legendre function.
    pub fn legendre_order(&self) -> Complex64 {
        self.alpha + (self.n() as f64 - 2.0) / 2.0
    }
}
