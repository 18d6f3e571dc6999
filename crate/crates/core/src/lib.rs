pub mod error;
pub mod iterative;
pub mod linalg;
pub mod measures;
pub mod nystrom;
pub mod rules;
pub mod symtrid;
