//! Tor and Ext: over `R` through Čech complexes, over `A_1` through cyclic
//! presentations, and the duality of the Koszul resolution of `R`.

mod cyclic;
mod free;
mod tor_r;

pub use cyclic::{dual_presentation, ext_a1, relation_matrix, sharp, tor_a1, A1Module, CyclicPresentation, Side};
pub use free::{dual_of_r_check, FreeComplex};
pub use tor_r::{de_rham_instance, evidence_suite, ext_evidence_items, hm_of_tor, hm_of_tor_report, n_nu, tor_r, TorReport};
