//! Special functions: log-gamma, conical functions and the spectral weight Φ_k.

pub mod conical;
pub mod gamma;
pub mod spectral;

pub use conical::{assoc_conical_u, assoc_conical_u_all, conical_p, conical_p_complex, ConicalQuad};
pub use gamma::log_gamma;
pub use spectral::{ln_phi_k, phi_k, phi_k_inversion, phi_k_product, IrrepIndex, SpectralPoint};
