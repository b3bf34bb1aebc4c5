pub mod api;
pub mod btree;
pub mod fusion;
pub mod harness;
pub mod int_map;
pub mod sampling;
pub mod word_ops;
pub mod yfast;
