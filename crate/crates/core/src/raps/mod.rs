//! Second stage of the OFDMA allocator: from continuous time shares to a
//! concrete schedule with per-block transmit powers.

mod allocate;
mod assign;
mod quantize;
mod waterfill;

pub use allocate::{allocate_frame, frame_supply, FrameAllocation};
pub use assign::assign_subcarriers;
pub use quantize::{quantize, split_over_slots, BlockCounts};
pub use waterfill::{water_fill, SubChannel, WaterFilling};
