//! Spectral toolkit for high-girth regular graphs.

pub mod families;
pub mod glue;
pub mod graph;
pub mod io;
pub mod localize;
pub mod seed;
pub mod spectral;
pub mod tree;
