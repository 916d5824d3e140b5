pub mod ffield;
pub mod polyring;
pub mod laurent;
pub mod contfrac;
pub mod hyperq;
