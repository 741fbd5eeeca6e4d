//! Weight vectors produced by the solvers.

use std::fmt;

use crate::error::{Error, Result};
use crate::scale::ScaleName;

/// Which solver produced a weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Llsm,
    Em,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Llsm => f.write_str("LLSM"),
            Method::Em => f.write_str("EM"),
        }
    }
}

/// A strictly positive weight per alternative, normalized to sum 1 and
/// tagged with the producing method and scale.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    method: Method,
    scale: ScaleName,
}

impl WeightVector {
    pub fn new(values: Vec<f64>, method: Method, scale: ScaleName) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Degenerate("empty weight vector".into()));
        }
        if values.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::Degenerate(
                "weights must be positive and finite".into(),
            ));
        }
        let sum: f64 = values.iter().sum();
        let values = values.into_iter().map(|w| w / sum).collect();
        Ok(WeightVector {
            values,
            method,
            scale,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn scale(&self) -> &ScaleName {
        &self.scale
    }

    /// Label used in outputs, e.g. "A-LLSM" or "C-EM".
    pub fn label(&self) -> String {
        format!("{}-{}", self.scale, self.method)
    }
}
