pub mod error;
pub mod field;
pub mod graded;
pub mod interval;
pub mod linalg;
pub mod matrix;
pub mod pres_pers_mod;
pub mod complexify;
pub mod pres_hom;
pub mod oracle;
pub mod random;
pub mod tower;
pub mod cosheaf_tower;
pub mod simplicial;
pub mod sheaf;
pub mod poset;
pub mod io;
pub mod cli;
