pub mod bgalois;
pub mod fpalg;
pub mod format;
pub mod freealg;
pub mod matrix;
pub mod rewrite;
pub mod scalars;
pub mod sl2rep;
pub mod structure;
