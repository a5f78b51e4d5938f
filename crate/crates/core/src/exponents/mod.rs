//! Exact arithmetic over extended exponents and the closed-form exponent
//! formulas and admissibility predicates built on top of it.

mod classify;
mod formulas;
mod rat;
mod xexp;

pub use classify::{
    blowup_exponent, blowup_exponents_rect, boundary_b, conj, hl_admissible,
    hl_admissible_reversed, region_label, Classification, Constraint, RegionLabel,
};
pub use formulas::{anisotropic_ok, bh_hl_admissible, inclusion_exponent, sharp_tuple, rp_exponent};
pub use rat::Rat;
pub use xexp::{xexp, XExp};
