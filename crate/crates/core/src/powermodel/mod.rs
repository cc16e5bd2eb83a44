//! Base-station supply power models.
//!
//! Three models of increasing detail:
//!
//! * [`affine`]: consumption grows linearly with RF output; a sleep mode
//!   draws a constant.
//! * [`parameterized`]: closed-form full-load power per antenna count.
//! * [`component`]: PA, RF, baseband, conversion and cooling breakdown.

pub mod affine;
pub mod component;
pub mod curve;
pub mod parameterized;

pub use affine::{affine_supply, AffineParams};
pub use component::{component_supply, BasebandRow, ComponentParams, PowerBreakdown};
pub use curve::{EfficiencyCurve, LossCurve, PiecewiseLinear};
pub use parameterized::{parameterized_supply, ParameterizedParams};
