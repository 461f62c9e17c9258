//! Heisenberg-picture generators of the dissipative laser model and of the
//! stochastic limits of the boson- and fermion-reservoir Hamiltonians.

mod builders;
mod kossakowski;
mod params;
mod superop;

pub use builders::{
    as_matter_block, as_radiation_block, build_as_blocks, build_as_generator, build_dhlsl_blocks,
    build_dhlsl_generator, build_hlsl_blocks, build_hlsl_generator, spin_mapped_reduction, spin_spec_of,
    GeneratorBlocks,
};
pub use kossakowski::{kossakowski_check, KossakowskiReport};
pub use params::{ASParams, AtomRates, DHLParams, HLParams};
pub use superop::{Picture, Provenance, Superoperator, SuperopSummary, BINARY_MAGIC, DENSE_ANALYSIS_CAP};

#[cfg(test)]
mod tests;
