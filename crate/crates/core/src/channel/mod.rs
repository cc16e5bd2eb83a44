//! Channel generation for a single-cell downlink.

mod frame;
mod geometry;
mod scenario;

pub use frame::{Eigenmodes, FrameChannels};
pub use geometry::{path_gain, path_loss_db, UserDrop};
pub use scenario::{Fading, Scenario};
