//! Sub-Riemannian geometry of the real Heisenberg group, in floating point.

mod optimize;
mod path;
mod volume;

pub use optimize::{
    cc_distance_between, cc_distance_estimate, comparability_band, dilation_scaling_check, endpoint_error,
    planar_lower_bound, CcEstimate, CcOptions, ComparabilityBand, RELATIVE_TOLERANCE,
};
pub use path::{HorizontalPath, RealPoint};
pub use volume::{ball_volume_scaling, box_quasinorm, translation_jacobian, translation_jacobian_check, Side, VolumeEstimate};
