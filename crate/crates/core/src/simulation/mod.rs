//! Ground-truth phantoms and the blur + noise degradation pipeline.

mod degrade;
mod image;
mod phantom;

pub use degrade::{degrade, DegradationSpec};
pub use image::ImageGrid;
pub use phantom::{shepp_logan, shepp_logan_variant, Ellipse, PhantomVariant};
