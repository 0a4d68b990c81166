//! Exact diagonalization of the SYK model and the periodic Ising chain.

mod ising;
mod spectral;
mod syk;

pub use ising::{
    build_ising_hamiltonian, momentum_sector, momentum_sectors, translate, translate_vector,
    IsingHamiltonian, IsingSpec, MomentumSector, MAX_SPINS,
};
pub use spectral::{
    band_center_eigenstates, eigenstate_pair_distances, gaussian_dos_fit, pair_trace_distances,
    Eigenpair, PairDistanceRow, Selection,
};
pub use syk::{
    build_syk_even_sector, build_syk_hamiltonian, even_parity_sector, even_sector_index,
    even_sector_state, majorana_operator, parity_of, SykSpec, MAX_MAJORANA, MAX_MAJORANA_FULL,
};
