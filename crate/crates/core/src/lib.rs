#![no_std]
extern crate alloc;

pub mod astar;
pub mod embed;
pub mod env;
pub mod frame;
pub mod geom;
pub mod pipeline;
pub mod router;
pub mod schema;
