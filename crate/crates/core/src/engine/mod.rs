//! Orbifold Euler characteristics of Milnor fibres for `(f, G⋊S)`, the BHHT
//! dual pair, and an oracle evaluating the defining sum directly.

mod checks;
pub mod cyclotomic;
mod fixed;
mod instance;
mod oracle;
mod pipeline;

pub use checks::{cycle_kernel, proposition_checks, PropositionCheck};
pub use cyclotomic::Cyclotomic;
pub use fixed::{
    commute_by_shift, fixed_space, fixed_space_within, open_torus_euler, restrict_to_fixed,
    stratum_euler, torus_euler, FixedComponent, FixedSpace, RestrictedPolynomial, RestrictedTerm,
    SymElement,
};
pub use instance::{cyclic_generator, Instance};
pub use oracle::{
    chi_i_pair_definitional, orbifold_euler_bruteforce, semidirect_elements, BruteForce,
    DEFAULT_ORACLE_CAP,
};
pub use pipeline::{
    chi_i_pair, chi_i_sigma_one, isotropy_group, point_orbifold_euler, reduced_orbifold_euler,
    verify_duality, DualityVerdict, EulerReport, OrbitContribution, Rational,
};

pub fn bhht_dual(inst: &Instance) -> crate::error::Result<Instance> {
    inst.bhht_dual()
}
