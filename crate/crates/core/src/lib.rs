pub mod cli;
pub mod error;
pub mod grid;
pub mod group;
pub mod hypersurface;
pub mod jet;
pub mod lorentz;
pub mod minimality;
pub mod spaceforms;
pub mod spheres;
pub mod surface;

pub use error::{Error, Result};
