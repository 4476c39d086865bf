pub mod bounds;
pub mod cli;
pub mod linalg;
pub mod measures;
pub mod numfmt;
pub mod state_spec;
pub mod states;
pub mod verify;
