//! Quadratic GKSL generators and their positivity structure.
//!
//! A generator is the pair `(H, κ)`: the covariance obeys
//! `V̇ = A V + V Aᵀ + D` with drift `A = Ω H − Ω Im κ` and diffusion
//! `D = Ωᵀ Re κ Ω`. The mean obeys `ṁ = A m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitize, imag_part, kron, max_abs, max_abs_c, min_hermitian_eigenpair,
    min_hermitian_eigenvalue, real_part, symmetrize, to_complex, CMat, CVec, RMat, RVec,
    Tolerance,
};
use crate::propagator::{evolve_rk, Method, PropagationPlan, RkTolerances};
use crate::symplectic::{
    modes_of, omega, uncertainty_margin, GaussianState, SymplecticMatrix,
};

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianGenerator {
    hamiltonian: RMat,
    kossakowski: CMat,
}

impl GaussianGenerator {
    /// Symmetrizes `H` and hermitizes `κ`.
    pub fn new(hamiltonian: RMat, kossakowski: CMat) -> Result<Self> {
        if !hamiltonian.is_square() || !kossakowski.is_square() {
            return Err(Error::InvalidDimension("generator matrices must be square".into()));
        }
        modes_of(hamiltonian.nrows())?;
        if hamiltonian.nrows() != kossakowski.nrows() {
            return Err(Error::InvalidDimension(format!(
                "hamiltonian is {0}x{0} but kossakowski is {1}x{1}",
                hamiltonian.nrows(),
                kossakowski.nrows()
            )));
        }
        if hamiltonian.iter().any(|x| !x.is_finite())
            || kossakowski.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidInput("generator contains non-finite entries".into()));
        }
        Ok(Self { hamiltonian: symmetrize(&hamiltonian), kossakowski: hermitize(&kossakowski) })
    }

    pub fn real(hamiltonian: RMat, kossakowski: RMat) -> Result<Self> {
        Self::new(hamiltonian, to_complex(&kossakowski))
    }

    pub fn zero(n: usize) -> Self {
        Self { hamiltonian: RMat::zeros(2 * n, 2 * n), kossakowski: CMat::zeros(2 * n, 2 * n) }
    }

    pub fn hamiltonian(&self) -> &RMat {
        &self.hamiltonian
    }

    pub fn kossakowski(&self) -> &CMat {
        &self.kossakowski
    }

    pub fn mode_count(&self) -> usize {
        self.hamiltonian.nrows() / 2
    }

    /// `A = Ω H − Ω Im κ`.
    pub fn drift(&self) -> RMat {
        let om = omega(self.mode_count());
        &om * (&self.hamiltonian - imag_part(&self.kossakowski))
    }

    /// `D = Ωᵀ Re κ Ω`.
    pub fn diffusion(&self) -> RMat {
        let om = omega(self.mode_count());
        symmetrize(&(om.transpose() * real_part(&self.kossakowski) * &om))
    }

    /// Largest entry magnitude of `H` and `κ`.
    pub fn scale(&self) -> f64 {
        max_abs(&self.hamiltonian).max(max_abs_c(&self.kossakowski))
    }
}

/// `κ ⪰ 0` within `tol`.
pub fn is_completely_positive(gen: &GaussianGenerator, tol: impl Into<Tolerance>) -> bool {
    let k = gen.kossakowski();
    min_hermitian_eigenvalue(k) >= -tol.into().resolve(max_abs_c(k))
}

/// `κ = Sᵀ (κ_N ⊗ τ) S`, with `S = I` when no conjugation is given.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffusiveClassSpec {
    reduced: CMat,
    conjugation: Option<SymplecticMatrix>,
}

impl DiffusiveClassSpec {
    pub fn new(reduced: CMat, conjugation: Option<SymplecticMatrix>) -> Result<Self> {
        if !reduced.is_square() || reduced.nrows() == 0 {
            return Err(Error::InvalidDimension("reduced matrix must be square and nonempty".into()));
        }
        if let Some(s) = &conjugation {
            if s.mode_count() != reduced.nrows() {
                return Err(Error::InvalidDimension(
                    "conjugating matrix and reduced matrix disagree on the mode count".into(),
                ));
            }
        }
        Ok(Self { reduced: hermitize(&reduced), conjugation })
    }

    pub fn plain(reduced: CMat) -> Result<Self> {
        Self::new(reduced, None)
    }

    pub fn reduced(&self) -> &CMat {
        &self.reduced
    }

    pub fn conjugation(&self) -> Option<&SymplecticMatrix> {
        self.conjugation.as_ref()
    }

    pub fn mode_count(&self) -> usize {
        self.reduced.nrows()
    }

    /// The full `2N × 2N` Kossakowski matrix.
    pub fn expand(&self) -> CMat {
        let plain = kron(&self.reduced, &tau());
        match &self.conjugation {
            None => plain,
            Some(s) => {
                let sc = to_complex(s.matrix());
                hermitize(&(sc.transpose() * plain * sc))
            }
        }
    }

    /// Covariance of `S⁻¹ (I/2) S⁻ᵀ`, the state the witness is built for.
    pub fn witness_initial_state(&self) -> GaussianState {
        let vac = GaussianState::vacuum(self.mode_count());
        match &self.conjugation {
            None => vac,
            Some(s) => crate::symplectic::symplectic_conjugate_state(&vac, s)
                .expect("mode counts checked on construction"),
        }
    }
}

/// τ = [[1, 0], [0, 0]].
pub(crate) fn tau() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    )
}

/// Reads `κ_N` off a plain-form `κ`; `None` if any momentum entry exceeds `tol`.
fn plain_reduced(k: &CMat, tol: f64) -> Option<CMat> {
    let dim = k.nrows();
    for i in 0..dim {
        for j in 0..dim {
            if (i % 2 == 1 || j % 2 == 1) && k[(i, j)].norm() > tol {
                return None;
            }
        }
    }
    let n = dim / 2;
    Some(CMat::from_fn(n, n, |a, b| k[(2 * a, 2 * b)]))
}

/// Tests membership in the diffusive class `Sᵀ(κ_N ⊗ τ)S`.
///
/// With `s` given, `κ` is conjugated to `S⁻ᵀ κ S⁻¹` and the plain pattern is
/// tested on the result.
pub fn in_diffusive_class(
    gen: &GaussianGenerator,
    s: Option<&SymplecticMatrix>,
    tol: impl Into<Tolerance>,
) -> Result<Option<DiffusiveClassSpec>> {
    let k = gen.kossakowski();
    let tol = tol.into();
    let candidate = match s {
        None => k.clone(),
        Some(s) => {
            if s.matrix().nrows() != k.nrows() {
                return Err(Error::InvalidDimension(
                    "conjugating matrix does not match the generator".into(),
                ));
            }
            let sinv = to_complex(s.inverse().matrix());
            hermitize(&(sinv.transpose() * k * sinv))
        }
    };
    let threshold = tol.resolve(max_abs_c(&candidate));
    Ok(plain_reduced(&candidate, threshold).map(|reduced| DiffusiveClassSpec {
        reduced,
        conjugation: s.cloned(),
    }))
}

/// `V̇ = A V + V Aᵀ + D`, symmetrized.
pub fn covariance_rhs(gen: &GaussianGenerator, cov: &RMat) -> Result<RMat> {
    if cov.shape() != gen.hamiltonian().shape() {
        return Err(Error::InvalidDimension(format!(
            "covariance is {}x{} but the generator acts on {} modes",
            cov.nrows(),
            cov.ncols(),
            gen.mode_count()
        )));
    }
    let a = gen.drift();
    let av = &a * cov;
    Ok(symmetrize(&(&av + av.transpose() + gen.diffusion())))
}

/// `ṁ = A m`.
pub fn mean_rhs(gen: &GaussianGenerator, mean: &RVec) -> Result<RVec> {
    if mean.len() != gen.hamiltonian().nrows() {
        return Err(Error::InvalidDimension(format!(
            "mean has length {} but the generator acts on {} modes",
            mean.len(),
            gen.mode_count()
        )));
    }
    Ok(gen.drift() * mean)
}

/// Certificate that a diffusive-class generator breaks positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationWitness {
    /// Unit eigenvector of `κ_N` for its smallest eigenvalue.
    pub v: CVec,
    /// `a = v*`.
    pub a: CVec,
    /// `⊕ (a_n, i a_n)`, mapped by `Sᵀ` for conjugated specs.
    pub u: CVec,
    /// `u† V̇|₀ u = λ_min(κ_N)`.
    pub value: f64,
}

/// Builds the short-time witness when `κ_N` has an eigenvalue below
/// `−1e-10 (1 + |κ_N|_max)`.
///
/// For a conjugated spec the vector `u` refers to the original frame and the
/// matching initial state is [`DiffusiveClassSpec::witness_initial_state`].
pub fn violation_witness(spec: &DiffusiveClassSpec) -> Option<ViolationWitness> {
    let (lambda, v) = min_hermitian_eigenpair(spec.reduced());
    if lambda >= -Tolerance::default().resolve(max_abs_c(spec.reduced())) {
        return None;
    }
    let a = v.map(|z| z.conj());
    let n = a.len();
    let mut u = CVec::zeros(2 * n);
    for k in 0..n {
        u[2 * k] = a[k];
        u[2 * k + 1] = Complex64::new(0.0, 1.0) * a[k];
    }
    if let Some(s) = spec.conjugation() {
        u = to_complex(s.matrix()).transpose() * u;
    }
    Some(ViolationWitness { v, a, u, value: lambda })
}

/// `u† M u` for Hermitian `M`; the real part.
pub fn quadratic_form(u: &CVec, m: &CMat) -> f64 {
    (u.adjoint() * m * u)[(0, 0)].re
}

/// Outcome of the positivity versus complete-positivity comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    /// Analytic `u† V̇|₀ u`, if a witness exists.
    pub witness_value: Option<f64>,
    /// Time actually used after the ε-halving scan.
    pub epsilon: f64,
    /// `λ_min(V_ε + iΩ/2)`.
    pub min_eigenvalue: f64,
    /// `u† (V_ε + iΩ/2) u`, if a witness exists.
    pub witness_form: Option<f64>,
    pub uncertainty_violated: bool,
}

impl PositivityReport {
    /// Numerical and analytic verdicts coincide.
    pub fn agrees(&self) -> bool {
        self.witness_value.is_some() == self.uncertainty_violated
    }
}

const EPS_HALVINGS: usize = 60;

/// Integrates from the witness state for a short time ε and compares the
/// resulting uncertainty verdict with the analytic witness.
///
/// ε is halved until the first-order term `ε·value` dominates the observed
/// residual by a factor of 10.
pub fn positivity_equals_cp_check(
    gen: &GaussianGenerator,
    spec: &DiffusiveClassSpec,
    epsilon: f64,
    tol: impl Into<Tolerance>,
) -> Result<PositivityReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!("ε must be positive, got {epsilon}")));
    }
    if gen.mode_count() != spec.mode_count() {
        return Err(Error::InvalidDimension("generator and class spec sizes differ".into()));
    }
    let tol = tol.into();
    let n = gen.mode_count();
    let init = spec.witness_initial_state();
    let half_omega = to_complex(&omega(n)) * Complex64::new(0.0, 0.5);
    let witness = violation_witness(spec);

    let evolve = |eps: f64| -> Result<RMat> {
        let plan = PropagationPlan::new(Method::AdaptiveRk, vec![eps])?
            .with_tolerances(RkTolerances { abs: 1e-14, rel: 1e-13 });
        let out = evolve_rk(gen, &init, &plan)?;
        Ok(out.into_iter().next().expect("one output time").into_parts().1)
    };

    let mut eps = epsilon;
    let mut cov = evolve(eps)?;
    let mut form = None;
    if let Some(w) = &witness {
        for _ in 0..EPS_HALVINGS {
            let f = quadratic_form(&w.u, &(to_complex(&cov) + &half_omega));
            let linear = eps * w.value;
            let residual = f - linear;
            form = Some(f);
            if linear.abs() > 10.0 * residual.abs() {
                break;
            }
            eps *= 0.5;
            cov = evolve(eps)?;
        }
    }
    let min_eigenvalue = uncertainty_margin(&cov)?;
    let threshold = tol.resolve(max_abs(&cov));
    Ok(PositivityReport {
        witness_value: witness.map(|w| w.value),
        epsilon: eps,
        min_eigenvalue,
        witness_form: form,
        uncertainty_violated: min_eigenvalue < -threshold,
    })
}
