pub use circframe_core as core;

pub mod bench;
pub mod io;
pub mod render;
