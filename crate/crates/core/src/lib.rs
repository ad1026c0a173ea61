pub mod cli;
pub mod cone_engine;
pub mod exactnum;
pub mod json;
pub mod ns_lattice;
pub mod witnesses;
