//! Quantities of interest: weighted sums of projected point displacements.

use serde::{Deserialize, Serialize};

use crate::error::{PorodeError, Result};
use crate::tensor::Vec2;

/// One term `w · dᵀ u(x̂)` of a functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalTerm {
    /// Evaluation point `x̂`.
    pub point: Vec2,
    /// Unit projection direction `d`.
    pub direction: Vec2,
    /// Weight `w`.
    pub weight: f64,
}

/// Functional `Ψ(u) = Σ w · dᵀ u(x̂)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Functional {
    /// Terms of the sum.
    pub terms: Vec<FunctionalTerm>,
}

impl Functional {
    /// Validated constructor: directions must be unit vectors and all values
    /// finite.
    pub fn new(terms: Vec<FunctionalTerm>) -> Result<Self> {
        let f = Functional { terms };
        f.validate()?;
        Ok(f)
    }

    /// Single-term functional.
    pub fn point_displacement(point: Vec2, direction: Vec2, weight: f64) -> Result<Self> {
        Functional::new(vec![FunctionalTerm {
            point,
            direction,
            weight,
        }])
    }

    /// Checks unit directions and finiteness.
    pub fn validate(&self) -> Result<()> {
        for (k, t) in self.terms.iter().enumerate() {
            if !(t.point.iter().all(|v| v.is_finite()) && t.weight.is_finite()) {
                return Err(PorodeError::validation(format!(
                    "functional term {k} is not finite"
                )));
            }
            if (t.direction.norm() - 1.0).abs() > 1e-9 {
                return Err(PorodeError::validation(format!(
                    "functional term {k} direction ({}, {}) is not a unit vector",
                    t.direction.x, t.direction.y
                )));
            }
        }
        Ok(())
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Functional {
            terms: self
                .terms
                .iter()
                .map(|t| FunctionalTerm {
                    weight: t.weight * factor,
                    ..*t
                })
                .collect(),
        }
    }

    /// Evaluation points.
    pub fn points(&self) -> Vec<Vec2> {
        self.terms.iter().map(|t| t.point).collect()
    }
}
