pub mod analysis;
pub mod criteria;
pub mod decomp;
pub mod error;
pub mod fef;
pub mod io;
pub mod qla;
pub mod scan;
pub mod states;
pub mod witness;
pub mod suite;
