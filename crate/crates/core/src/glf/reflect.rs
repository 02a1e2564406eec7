use super::ops::{apply_tempered, Side, TemperedOperator};
use super::GLFExpansion;
use crate::error::Result;

/// The function y ↦ u(−y), supported on y ≤ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflected {
    pub inner: GLFExpansion,
}

pub fn reflect(u: &GLFExpansion) -> Reflected {
    Reflected { inner: u.clone() }
}

impl Reflected {
    /// Value at y; zero for y > 0.
    pub fn eval(&self, y: f64) -> f64 {
        if y > 0.0 {
            0.0
        } else {
            self.inner.eval(-y)
        }
    }

    /// Reflecting again recovers the original expansion.
    pub fn reflect(&self) -> GLFExpansion {
        self.inner.clone()
    }

    /// Applies an operator to the reflection: a left operator on the reflection is the
    /// right operator on the original, reflected, and vice versa.
    pub fn apply(&self, op: &TemperedOperator) -> Result<Reflected> {
        let swapped = TemperedOperator {
            side: match op.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            ..*op
        };
        Ok(Reflected { inner: apply_tempered(&swapped, &self.inner)? })
    }
}
