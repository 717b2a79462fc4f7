//! Partial transposition of two-mode states and generators, and the
//! entanglement-generation criterion for diffusive generators.
//!
//! On covariances, transposing mode 2 is the momentum reflection
//! `P = diag(1, 1, 1, −1)`. On Kossakowski matrices it appears as
//! `Θ = Ω P Ωᵀ = diag(1, 1, −1, 1)`. The two are tied together by
//! `A^PT = P A P` and `D^PT = P D P` for drift and diffusion.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::GaussianGenerator;
use crate::linalg::{
    imag_part, max_abs, min_hermitian_eigenvalue, real_part, CMat, RMat, RVec, Tolerance,
};
use crate::symplectic::GaussianState;

/// `Θ = diag(1, 1, −1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ReflectionTheta;

impl ReflectionTheta {
    pub fn matrix(&self) -> RMat {
        RMat::from_diagonal(&RVec::from_vec(vec![1.0, 1.0, -1.0, 1.0]))
    }
}

/// `P = diag(1, 1, 1, −1)`, the reflection acting on states.
pub fn state_reflection() -> RMat {
    RMat::from_diagonal(&RVec::from_vec(vec![1.0, 1.0, 1.0, -1.0]))
}

/// Blocks of a two-mode generator.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteSplit {
    pub kappa1: CMat,
    pub kappa2: CMat,
    pub kappa12: CMat,
    /// Block-diagonal local Hamiltonian `H11 ⊕ H22`.
    pub h_local: RMat,
    /// Interaction block `H12`.
    pub h: RMat,
}

fn require_two_modes(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::InvalidDimension(format!("expected two modes, got {n}")));
    }
    Ok(())
}

pub fn split_bipartite(gen: &GaussianGenerator) -> Result<BipartiteSplit> {
    require_two_modes(gen.mode_count())?;
    let k = gen.kossakowski();
    let hm = gen.hamiltonian();
    let mut h_local = RMat::zeros(4, 4);
    h_local.view_mut((0, 0), (2, 2)).copy_from(&hm.view((0, 0), (2, 2)));
    h_local.view_mut((2, 2), (2, 2)).copy_from(&hm.view((2, 2), (2, 2)));
    Ok(BipartiteSplit {
        kappa1: k.view((0, 0), (2, 2)).into_owned(),
        kappa2: k.view((2, 2), (2, 2)).into_owned(),
        kappa12: k.view((0, 2), (2, 2)).into_owned(),
        h_local,
        h: hm.view((0, 2), (2, 2)).into_owned(),
    })
}

impl BipartiteSplit {
    pub fn reassemble(&self) -> Result<GaussianGenerator> {
        let mut hm = self.h_local.clone();
        hm.view_mut((0, 2), (2, 2)).copy_from(&self.h);
        hm.view_mut((2, 0), (2, 2)).copy_from(&self.h.transpose());
        let mut k = CMat::zeros(4, 4);
        k.view_mut((0, 0), (2, 2)).copy_from(&self.kappa1);
        k.view_mut((2, 2), (2, 2)).copy_from(&self.kappa2);
        k.view_mut((0, 2), (2, 2)).copy_from(&self.kappa12);
        k.view_mut((2, 0), (2, 2)).copy_from(&self.kappa12.adjoint());
        GaussianGenerator::new(hm, k)
    }
}

pub fn pt_state(state: &GaussianState) -> Result<GaussianState> {
    require_two_modes(state.mode_count())?;
    Ok(state.transformed(&state_reflection()))
}

/// Partially transposed generator.
///
/// `κ^PT = Θ [[κ1, Re κ12 + i h], [(Re κ12 + i h)†, κ2ᵀ]] Θ`. The
/// imaginary part of `κ12` moves into the Hamiltonian as the interaction
/// block `Im κ12 · θ` with `θ = diag(−1, 1)`; the local blocks become
/// `H11` and `−π H22 π` with `π = diag(1, −1)`.
pub fn pt_generator(gen: &GaussianGenerator) -> Result<GaussianGenerator> {
    let sp = split_bipartite(gen)?;
    let theta2 = Matrix2::new(-1.0, 0.0, 0.0, 1.0);
    let theta = ReflectionTheta.matrix();
    let i = Complex64::new(0.0, 1.0);

    let mut inner = CMat::zeros(4, 4);
    let off = sp.kappa12.map(|z| Complex64::new(z.re, 0.0)) + sp.h.map(|x| i * x);
    inner.view_mut((0, 0), (2, 2)).copy_from(&sp.kappa1);
    inner.view_mut((0, 2), (2, 2)).copy_from(&off);
    inner.view_mut((2, 0), (2, 2)).copy_from(&off.adjoint());
    inner.view_mut((2, 2), (2, 2)).copy_from(&sp.kappa2.transpose());
    let th_c = theta.map(|x| Complex64::new(x, 0.0));
    let kappa_pt = &th_c * inner * &th_c;

    let im12 = imag_part(&sp.kappa12);
    let theta_dyn = RMat::from_row_slice(2, 2, theta2.as_slice());
    let h12 = &im12 * &theta_dyn;
    let pi = RMat::from_diagonal(&RVec::from_vec(vec![1.0, -1.0]));
    let h22 = -(&pi * sp.h_local.view((2, 2), (2, 2)) * &pi);
    let mut hm = RMat::zeros(4, 4);
    hm.view_mut((0, 0), (2, 2)).copy_from(&sp.h_local.view((0, 0), (2, 2)));
    hm.view_mut((2, 2), (2, 2)).copy_from(&h22);
    hm.view_mut((0, 2), (2, 2)).copy_from(&h12);
    hm.view_mut((2, 0), (2, 2)).copy_from(&h12.transpose());
    GaussianGenerator::new(hm, kappa_pt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Generating,
    NonGenerating,
    /// `κ^PT` is outside the diffusive class. `kappa_pt_psd` is the
    /// sufficient separability-preservation test, reported as advisory.
    Undecidable { kappa_pt_psd: bool },
}

/// Quantities behind a criterion verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub verdict: Verdict,
    /// `Re κ_N` of the generator, when it is in the class.
    pub re_kappa_n: Option<Matrix2<f64>>,
    /// Position coupling `c = h_xx`.
    pub c: f64,
    /// `det Re κ_N`.
    pub det: Option<f64>,
}

/// Decides whether a two-mode generator can create entanglement from a
/// product Gaussian state.
///
/// Inside the class (all momentum entries of `κ^PT` vanish) the reduced
/// matrix of `κ^PT` is `[[a, −(k + ic)], [−(k − ic), d]]`, so the verdict is
/// "generating" iff `a < −tol`, `d < −tol` or `det Re κ_N − c² < −tol·s`,
/// where `s` is the entry scale. Ties count as non-generating.
pub fn entanglement_report(gen: &GaussianGenerator, tol: impl Into<Tolerance>) -> Result<CriterionReport> {
    let sp = split_bipartite(gen)?;
    let tol = tol.into();
    let kpt = pt_generator(gen)?.kossakowski().clone();
    let scale = max_abs(&real_part(&kpt)).max(max_abs(&imag_part(&kpt)));
    let entry_tol = tol.resolve(scale);
    let c = sp.h[(0, 0)];

    let mut in_class = true;
    for r in 0..4 {
        for col in 0..4 {
            if (r % 2 == 1 || col % 2 == 1) && kpt[(r, col)].norm() > entry_tol {
                in_class = false;
            }
        }
    }
    if !in_class {
        let psd = min_hermitian_eigenvalue(&kpt) >= -entry_tol;
        return Ok(CriterionReport {
            verdict: Verdict::Undecidable { kappa_pt_psd: psd },
            re_kappa_n: None,
            c,
            det: None,
        });
    }
    let k = gen.kossakowski();
    let re_n = Matrix2::new(k[(0, 0)].re, k[(0, 2)].re, k[(2, 0)].re, k[(2, 2)].re);
    let det = crate::linalg::det2m(&re_n);
    let gap = det - c * c;
    let generating =
        re_n[(0, 0)] < -entry_tol || re_n[(1, 1)] < -entry_tol || gap < -entry_tol * scale;
    Ok(CriterionReport {
        verdict: if generating { Verdict::Generating } else { Verdict::NonGenerating },
        re_kappa_n: Some(re_n),
        c,
        det: Some(det),
    })
}

pub fn entanglement_generating(gen: &GaussianGenerator, tol: impl Into<Tolerance>) -> Result<Verdict> {
    Ok(entanglement_report(gen, tol)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, max_abs_c, to_complex};
    use crate::sampling::{random_hermitian, random_symmetric, two_mode_squeezed};
    use crate::symplectic::omega;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cr(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn class_gen(kn: [f64; 4], c: f64) -> GaussianGenerator {
        let kn = CMat::from_row_slice(2, 2, &kn.map(cr));
        let tau = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        let mut h = RMat::zeros(4, 4);
        h[(1, 1)] = 1.0;
        h[(3, 3)] = 1.0;
        h[(0, 2)] = c;
        h[(2, 0)] = c;
        GaussianGenerator::new(h, kron(&kn, &tau)).unwrap()
    }

    #[test]
    fn split_examples() {
        let g = class_gen([1.0, -1.0, -1.0, 1.0], 0.0);
        let sp = split_bipartite(&g).unwrap();
        let tau = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        assert_eq!(sp.kappa1, tau);
        assert_eq!(sp.kappa2, tau);
        assert_eq!(sp.kappa12, -tau);

        let hc = GaussianGenerator::real(
            {
                let mut h = RMat::zeros(4, 4);
                h[(0, 2)] = 0.3;
                h[(2, 0)] = 0.3;
                h
            },
            RMat::zeros(4, 4),
        )
        .unwrap();
        let sp = split_bipartite(&hc).unwrap();
        assert_eq!(sp.h, RMat::from_row_slice(2, 2, &[0.3, 0.0, 0.0, 0.0]));

        let z = split_bipartite(&GaussianGenerator::zero(2)).unwrap();
        assert_eq!(max_abs_c(&z.kappa1) + max_abs(&z.h) + max_abs(&z.h_local), 0.0);
        assert!(split_bipartite(&GaussianGenerator::zero(3)).is_err());
    }

    #[test]
    fn pt_state_examples() {
        let vac = GaussianState::vacuum(2);
        assert_eq!(pt_state(&vac).unwrap(), vac);
        let tms = two_mode_squeezed(0.4);
        let twice = pt_state(&pt_state(&tms).unwrap()).unwrap();
        assert_eq!(twice, tms);
        let pt = pt_state(&tms).unwrap();
        let (v, w) = (tms.cov(), pt.cov());
        assert_eq!(w[(0, 2)], v[(0, 2)]);
        assert_eq!(w[(1, 3)], -v[(1, 3)]);
        assert_eq!(w[(3, 3)], v[(3, 3)]);
    }

    #[test]
    fn pt_generator_position_block() {
        let (a, k, d, c) = (0.9, 0.4, 1.3, 0.25);
        let g = class_gen([a, k, k, d], c);
        let pt = pt_generator(&g).unwrap();
        let kp = pt.kossakowski();
        assert_eq!(kp[(0, 0)], cr(a));
        assert_eq!(kp[(2, 2)], cr(d));
        assert_eq!(kp[(0, 2)], Complex64::new(-k, -c));
        for r in 0..4 {
            for col in 0..4 {
                if r % 2 == 1 || col % 2 == 1 {
                    assert_eq!(kp[(r, col)], cr(0.0));
                }
            }
        }
        // same determinant as Re κ_N + c [[0, 1], [1, 0]]
        let det_pt = a * d - (k * k + c * c);
        let alt = Matrix2::new(a, k + c, k + c, d);
        let alt2 = Matrix2::new(a, k - c, k - c, d);
        assert!((det_pt - (a * d - k * k - c * c)).abs() < 1e-15);
        assert!(crate::linalg::det2m(&alt).min(crate::linalg::det2m(&alt2)) <= det_pt);
    }

    #[test]
    fn pt_generator_diagonal_and_zero() {
        let mut k = RMat::zeros(4, 4);
        k[(2, 2)] = 0.5;
        k[(3, 3)] = 0.7;
        k[(2, 3)] = 0.2;
        k[(3, 2)] = 0.2;
        let mut kc = to_complex(&k);
        kc[(2, 3)] = Complex64::new(0.2, 0.1);
        kc[(3, 2)] = Complex64::new(0.2, -0.1);
        let g = GaussianGenerator::new(RMat::zeros(4, 4), kc.clone()).unwrap();
        let pt = pt_generator(&g).unwrap();
        let kp = pt.kossakowski();
        assert_eq!(kp[(2, 2)], kc[(2, 2)]);
        assert_eq!(kp[(3, 3)], kc[(3, 3)]);
        assert_eq!(kp[(2, 3)], -kc[(3, 2)]);
        assert_eq!(kp[(3, 2)], -kc[(2, 3)]);

        let z = pt_generator(&GaussianGenerator::zero(2)).unwrap();
        assert_eq!(z, GaussianGenerator::zero(2));
    }

    #[test]
    fn criterion_examples() {
        for g in [1e-3, 1.0, 5e4] {
            let gen = class_gen([g, -g, -g, g], 0.2 * g);
            assert_eq!(entanglement_generating(&gen, Tolerance::default()).unwrap(), Verdict::Generating);
        }
        let gen = class_gen([0.4, 0.1, 0.1, 0.6], 0.0);
        assert_eq!(entanglement_generating(&gen, Tolerance::default()).unwrap(), Verdict::NonGenerating);
        // tie: det = c²
        let gen = class_gen([1.0, 0.0, 0.0, 1.0], 1.0);
        assert_eq!(entanglement_generating(&gen, Tolerance::default()).unwrap(), Verdict::NonGenerating);

        let mut mom = RMat::zeros(4, 4);
        mom[(1, 1)] = 1.0;
        let out = GaussianGenerator::real(RMat::zeros(4, 4), mom).unwrap();
        assert_eq!(
            entanglement_generating(&out, Tolerance::default()).unwrap(),
            Verdict::Undecidable { kappa_pt_psd: true }
        );
    }

    fn drift_diffusion_commute(g: &GaussianGenerator) -> (f64, f64) {
        let p = state_reflection();
        let pt = pt_generator(g).unwrap();
        let da = max_abs(&(pt.drift() - &p * g.drift() * &p));
        let dd = max_abs(&(pt.diffusion() - &p * g.diffusion() * &p));
        (da, dd)
    }

    #[test]
    fn theta_relates_to_state_reflection() {
        let om = omega(2);
        let t = ReflectionTheta.matrix();
        assert_eq!(&om * state_reflection() * om.transpose(), t);
        assert_eq!(&t * &t, RMat::identity(4, 4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn pt_is_reflection_of_flow(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = GaussianGenerator::new(random_symmetric(4, &mut rng), random_hermitian(4, &mut rng)).unwrap();
            let (da, dd) = drift_diffusion_commute(&g);
            prop_assert!(da < 1e-14 && dd < 1e-14, "{} {}", da, dd);
        }

        #[test]
        fn pt_is_involution(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = GaussianGenerator::new(random_symmetric(4, &mut rng), random_hermitian(4, &mut rng)).unwrap();
            let back = pt_generator(&pt_generator(&g).unwrap()).unwrap();
            prop_assert!(max_abs(&(back.hamiltonian() - g.hamiltonian())) < 1e-15);
            prop_assert!(max_abs_c(&(back.kossakowski() - g.kossakowski())) < 1e-15);
        }

        #[test]
        fn split_round_trip(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = GaussianGenerator::new(random_symmetric(4, &mut rng), random_hermitian(4, &mut rng)).unwrap();
            prop_assert_eq!(split_bipartite(&g).unwrap().reassemble().unwrap(), g);
        }
    }
}
