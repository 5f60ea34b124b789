pub mod field;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod sequence;
pub mod hankel;
pub mod bms;
pub mod sfglm;
pub mod rank_solver;
pub mod compare;
pub mod bench;
