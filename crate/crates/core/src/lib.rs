pub mod certificate;
pub mod coloring;
pub mod embedding;
pub mod error;
pub mod lattice;
pub mod poset;
pub mod search;
pub mod symmetry;
pub mod interval;
pub mod bounds;
pub mod lubell;
pub mod constructions;
pub mod diamond;
pub mod cli;
