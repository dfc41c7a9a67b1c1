pub mod automaton;
pub mod datagen;
pub mod eval;
pub mod formula;
pub mod harness;
pub mod manifest;
pub mod sat;
pub mod trace;
