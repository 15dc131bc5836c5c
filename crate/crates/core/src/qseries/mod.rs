//! Truncated formal power series over the rationals.
//!
//! A [`QSeries`] of order `n` carries exactly the coefficients of
//! `q^0..=q^n`; everything from `q^{n+1}` on is unknown. Binary operations
//! return the smaller of the two input orders and never pad.

mod poly_series;
mod series;
mod special;

pub use poly_series::PolySeries;
pub use series::QSeries;
pub use special::{arcsin2_series, refinement_lhs, sin_series};

use std::fmt;

use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("exp requires a zero constant term")]
    ExpConstantTerm,
    #[error("log requires constant term 1")]
    LogConstantTerm,
    #[error("composition requires the inner series to have zero constant term")]
    ComposeConstantTerm,
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
}

/// Outcome of comparing two independently computed series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheck {
    pub name: String,
    pub order: usize,
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub power: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl SeriesCheck {
    /// Compare `lhs` and `rhs` up to their shared order.
    pub fn compare(name: impl Into<String>, lhs: &QSeries, rhs: &QSeries) -> Self {
        let order = lhs.order().min(rhs.order());
        let mismatch = lhs.first_mismatch(rhs).map(|power| Mismatch {
            power,
            lhs: lhs.coeff(power).clone(),
            rhs: rhs.coeff(power).clone(),
        });
        Self {
            name: name.into(),
            order,
            mismatch,
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for SeriesCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "{}: ExactMatch (order {})", self.name, self.order),
            Some(m) => write!(
                f,
                "{}: Mismatch at q^{} (lhs {}, rhs {})",
                self.name, m.power, m.lhs, m.rhs
            ),
        }
    }
}
