//! Quantum roots of Kac-Moody root systems and the affine Bruhat order on
//! the Weyl semi-group `W⁺`.
//!
//! * [`cartan`]: generalized Cartan matrices, Dynkin diagrams, standard types.
//! * [`datum`]: root data, coweights, Tits cone certification.
//! * [`weyl`]: Weyl group elements, length, Bruhat order.
//! * [`roots`]: real roots, reflections, inversion sets.
//! * [`quantum`]: quantum roots, Dynkin sequences and their classification.
//! * [`affine`]: affine Bruhat order, covers, co-covers and intervals.

pub mod affine;
pub mod cartan;
pub mod datum;
pub mod quantum;
pub mod roots;
pub mod weyl;

pub use cartan::{CartanError, DynkinDiagram, Family, Gcm, StandardType};
pub use datum::{ConeCertificate, Coweight, DatumError, Membership, RootDatum};
pub use roots::RealRoot;
pub use weyl::WeylElement;
