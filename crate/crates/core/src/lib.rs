pub mod bodies;
pub mod ellipsoid;
pub mod error;
pub mod lp;
pub mod polyapprox;
pub mod polynorm;
pub mod sdprelax;
pub mod socone;
pub mod softapprox;
pub mod numerics;

pub use error::{Error, Result};
