//! Trajectory-invariant point clouds from sampled signals.

mod delay;
mod pca;
mod tangent;

pub use delay::{delay_embed, ChannelReducer, DelayConfig};
pub use pca::{jacobi_eigen, pca_project};
pub use tangent::tangent_map;
