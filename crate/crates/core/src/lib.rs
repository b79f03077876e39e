pub mod bitvec;
pub mod ccrev;
pub mod clique;
pub mod dimacs;
pub mod encode;
pub mod keypad;
pub mod maze;
pub mod sat;
pub mod search;
pub mod wires;
