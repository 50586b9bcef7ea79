//! Concrete ordered abelian groups, their order-preserving automorphisms,
//! and the displacement equation solver.

mod automorphism;
mod descriptor;
mod element;
mod half;
pub mod intlin;
pub mod json;
mod solve;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

pub use automorphism::{Hull, IntMatrix, LinearHom, OagAutomorphism, Triangular};
pub use descriptor::OagDescriptor;
pub use element::{in_localized, OagElement};
pub use half::HalfElement;
pub use solve::{is_solution, solve_displacement, Family, Kernel, SolutionSet};

use crate::error::Result;

/// Orientation sign of an affine map of a linear tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply(self, x: &OagElement) -> OagElement {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => x.neg(),
        }
    }

    pub fn apply_half(self, x: &HalfElement) -> HalfElement {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => x.neg(),
        }
    }

    pub(crate) fn apply_rational(self, q: &BigRational) -> BigRational {
        match self {
            Sign::Plus => q.clone(),
            Sign::Minus => -q,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Group law of Λ.
pub fn add(x: &OagElement, y: &OagElement) -> Result<OagElement> {
    x.try_add(y)
}

/// Total order of Λ.
pub fn cmp(x: &OagElement, y: &OagElement) -> Result<Ordering> {
    x.try_cmp(y)
}

/// Apply an automorphism.
pub fn apply_aut(alpha: &OagAutomorphism, x: &OagElement) -> Result<OagElement> {
    alpha.apply(x)
}

pub fn compose_aut(a: &OagAutomorphism, b: &OagAutomorphism) -> Result<OagAutomorphism> {
    a.compose(b)
}

pub fn invert_aut(a: &OagAutomorphism) -> Result<OagAutomorphism> {
    a.inverse()
}
