//! Gaussian continuous-variable open-system dynamics.
//!
//! Quadratic GKSL generators acting on N-mode Gaussian states: positivity
//! and complete-positivity certification, partial transposition and the
//! entanglement-generation criterion, logarithmic negativity, exact and
//! adaptive propagation, and Newtonian / classical-noise gravity models
//! of two released masses.
//!
//! ```
//! use cv_gksl::prelude::*;
//!
//! let scn = GravityScenario::reference(ModelKind::Td).with_r0(5e-4);
//! let gen = build_generator(&scn).unwrap();
//! let verdict = entanglement_generating(&gen, Tolerance::Relative(1e-10)).unwrap();
//! assert_eq!(verdict, Verdict::Generating);
//! ```

pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod gravity;
pub mod io;
pub mod lindblad;
pub mod linalg;
pub mod partial_transpose;
pub mod propagator;
pub mod sampling;
pub mod symplectic;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::entanglement::{log_negativity, log_negativity_oracle, ppt_separable, TwoModeBlocks};
    pub use crate::error::{Error, Result};
    pub use crate::gravity::{
        build_generator, critical_r0, critical_ratio, naive_kossakowski, newton_coupling,
        td_coupling, td_kossakowski, GravityScenario, ModelKind, UnitSystem,
    };
    pub use crate::lindblad::{
        covariance_rhs, in_diffusive_class, is_completely_positive, mean_rhs,
        positivity_equals_cp_check, violation_witness, DiffusiveClassSpec, GaussianGenerator,
        ViolationWitness,
    };
    pub use crate::linalg::{CMat, RMat, RVec, Tolerance};
    pub use crate::partial_transpose::{
        entanglement_generating, pt_generator, pt_state, split_bipartite, BipartiteSplit,
        ReflectionTheta, Verdict,
    };
    pub use crate::propagator::{
        en_trajectory, evolve, evolve_exact, evolve_rk, Method, PropagationPlan, RkTolerances,
    };
    pub use crate::symplectic::{
        build_omega, is_symplectic, symplectic_conjugate_state, symplectic_eigenvalues,
        uncertainty_ok, GaussianState, SymplecticForm, SymplecticMatrix,
    };
}
