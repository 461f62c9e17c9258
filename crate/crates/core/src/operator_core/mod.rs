//! Tensor-product operator algebra over spins, paired local fermions and
//! truncated boson modes.

mod composite;
mod local;
mod op;
mod space;
pub mod sparse;

pub use composite::{
    is_physical_state, physical_projector, radiation_field, spin_from_fermions, CompositeModelOps, FieldParams,
};
pub use local::{
    boson, boson_matrix, embed, embed_matrix, fermion, fermion_basis, fermion_matrix, pauli, pauli_matrix, BosonOp,
    Ladder, Level, Pauli,
};
pub use op::SparseOp;
pub use space::{
    build_space, build_space_with_cap, lattice_site, HilbertSpec, SiteKind, Space, SpaceHandle,
    DEFAULT_DIMENSION_CAP,
};
pub use sparse::CsrMatrix;
