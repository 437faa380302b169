pub mod graph;
pub mod stabilizer;
pub mod fusion;
pub mod orbit;
pub mod tablebase;
pub mod query;
pub mod bounds;
pub mod codes;
