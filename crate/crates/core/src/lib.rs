pub mod build3;
pub mod cli;
pub mod numfield;
pub mod orbit;
pub mod spinemoves;
pub mod surf;
pub mod track;
