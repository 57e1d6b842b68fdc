//! Galois groups inside `W_{2g}`: group machinery and maximality certificates.

pub mod cert;
pub mod group;
pub mod lattice;

pub use cert::{
    frobenius_cycle_type, maximality_certificate, maximality_certificate_cached, some_trace_is_zero, trace_is_zero,
    tuple_certificate, tuple_certificate_cached,
    GaloisCertificate, RejectReason, Verdict, Witness, DEFAULT_ELL_BUDGET,
};
pub use group::{
    class_key_string, decomposition_check, parse_class_key, orbit_count, w2g_enumerate, CycleSign, SignedCycleType, W2gGroup,
};
pub use lattice::SubgroupLattice;
