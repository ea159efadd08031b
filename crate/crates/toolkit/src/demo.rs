//! Worked example: two needle states whose `E_A` lengths rule out a local
//! channel on B taking one to the other.

use std::fmt;

use qse_core::families::{noisy_needle_example, tilted_needle_example};
use qse_core::steering::{ellipsoid_size, steering_ellipsoid};
use qse_core::Side;

use crate::error::{Result, ToolkitError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeedleDemo {
    pub delta: f64,
    /// `l(E_A)` of the noisy needle state.
    pub l1: f64,
    /// `l(E_A)` of the tilted needle state.
    pub l2: f64,
}

impl NeedleDemo {
    pub fn expected_l1(&self) -> f64 {
        std::f64::consts::SQRT_2 * (1.0 - self.delta)
    }

    pub fn expected_l2(&self) -> f64 {
        std::f64::consts::SQRT_2
    }

    /// A channel on B can only shrink `E_A`, so a longer target is out of reach.
    pub fn forward_impossible(&self) -> bool {
        self.l1 < self.l2
    }
}

pub fn needle_demo(delta: f64) -> Result<NeedleDemo> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(ToolkitError::Usage(format!("delta {delta} must lie in [0, 1]")));
    }
    let length = |s| ellipsoid_size(&steering_ellipsoid(&s, Side::A)).length;
    Ok(NeedleDemo {
        delta,
        l1: length(noisy_needle_example(delta)?),
        l2: length(tilted_needle_example(delta)?),
    })
}

impl fmt::Display for NeedleDemo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "delta = {}", self.delta)?;
        writeln!(f, "l(E_A^1) = {:.12}  (expected sqrt(2)(1-delta) = {:.12})", self.l1, self.expected_l1())?;
        writeln!(f, "l(E_A^2) = {:.12}  (expected sqrt(2) = {:.12})", self.l2, self.expected_l2())?;
        if self.forward_impossible() {
            write!(
                f,
                "rho1 -> rho2: impossible; the state rho1 can not be transformed to rho2 by local operations on B (l(E_A^1) < l(E_A^2))"
            )
        } else {
            write!(f, "rho1 -> rho2: not excluded by the length criterion")
        }
    }
}
