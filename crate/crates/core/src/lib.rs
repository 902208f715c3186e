pub mod arith;
pub mod autkn;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod family;
pub mod formulas;
pub mod gf;
pub mod group;
pub mod hermitian;
pub mod mlgroup;
