//! Two trapped masses released to interact gravitationally: Newtonian,
//! naive classical-noise and Tilloy–Diósi (smeared) models, reduced to
//! dimensionless Gaussian generators.
//!
//! Units: lengths in `x0 = √(ħ/mω)`, momenta in `p0 = √(ħmω)`, time in
//! `1/ω`. A coupling `K x1 x2` becomes `c = K/(mω²)` and a Kossakowski
//! entry `κ` becomes `κ/(mω²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::GaussianGenerator;
use crate::linalg::{kron, to_complex, RMat};

pub const G_NEWTON: f64 = 6.674_30e-11;
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Newton,
    Naive,
    Td,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Newton => "newton",
            ModelKind::Naive => "naive",
            ModelKind::Td => "td",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityScenario {
    pub mass_kg: f64,
    pub distance_m: f64,
    /// Angular trap frequency in rad/s.
    pub omega: f64,
    pub r0_m: Option<f64>,
    pub model: ModelKind,
    pub g: f64,
    pub hbar: f64,
}

impl GravityScenario {
    /// ω = 1e5 s⁻¹, m = 1e-7 kg, d = 3e-4 m.
    pub fn reference(model: ModelKind) -> Self {
        Self {
            mass_kg: 1e-7,
            distance_m: 3e-4,
            omega: 1e5,
            r0_m: match model {
                ModelKind::Td => Some(5e-4),
                _ => None,
            },
            model,
            g: G_NEWTON,
            hbar: HBAR,
        }
    }

    pub fn with_model(mut self, model: ModelKind) -> Self {
        self.model = model;
        self
    }

    pub fn with_r0(mut self, r0_m: f64) -> Self {
        self.r0_m = Some(r0_m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("mass_kg", self.mass_kg)?;
        positive("distance_m", self.distance_m)?;
        positive("trap frequency", self.omega)?;
        positive("G", self.g)?;
        positive("hbar", self.hbar)?;
        match (self.model, self.r0_m) {
            (ModelKind::Td, None) => Err(Error::Config("td model needs r0_m".into())),
            (_, Some(r0)) => positive("r0_m", r0),
            _ => Ok(()),
        }
    }

    pub fn units(&self) -> UnitSystem {
        UnitSystem::new(self.mass_kg, self.omega, self.hbar)
    }

    /// `mω²`, the spring constant that makes couplings dimensionless.
    pub fn stiffness(&self) -> f64 {
        self.mass_kg * self.omega * self.omega
    }

    fn r0(&self) -> Result<f64> {
        match self.r0_m {
            Some(r) if r > 0.0 && r.is_finite() => Ok(r),
            Some(r) => Err(Error::InvalidInput(format!("R0 must be positive, got {r}"))),
            None => Err(Error::InvalidInput("scenario has no R0".into())),
        }
    }

    /// `d / R0`.
    pub fn ratio(&self) -> Result<f64> {
        Ok(self.distance_m / self.r0()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    pub x0: f64,
    pub p0: f64,
    pub t0: f64,
}

impl UnitSystem {
    pub fn new(mass_kg: f64, omega: f64, hbar: f64) -> Self {
        Self {
            x0: (hbar / (mass_kg * omega)).sqrt(),
            p0: (hbar * mass_kg * omega).sqrt(),
            t0: 1.0 / omega,
        }
    }
}

/// `K = 2Gm²/d³`.
pub fn newton_coupling(scn: &GravityScenario) -> f64 {
    2.0 * scn.g * scn.mass_kg * scn.mass_kg / scn.distance_m.powi(3)
}

/// `(x³/4√π) e^{−x²/4} (4/x² + 1) − erf(x/2)`.
///
/// Below `x = 1` the alternating series
/// `(1/√π) Σ_{n≥1} (−1/4)ⁿ n(1−2n) / ((2n+1) n!) x^{2n+1}` is used, since
/// the closed form cancels to `x³/(12√π)` at small `x`.
pub fn td_bracket(x: f64) -> f64 {
    if x <= 1.0 {
        let x2 = x * x;
        let mut sum = 0.0;
        // term_n = (−x²/4)ⁿ / n! · x
        let mut power = x;
        for n in 1..60 {
            power *= -x2 / (4.0 * n as f64);
            let nf = n as f64;
            let t = power * nf * (1.0 - 2.0 * nf) / (2.0 * nf + 1.0);
            sum += t;
            if t.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum / PI.sqrt()
    } else {
        x.powi(3) / (4.0 * PI.sqrt()) * (-x * x / 4.0).exp() * (4.0 / (x * x) + 1.0)
            - libm::erf(x / 2.0)
    }
}

/// `κ11^TD / K = x³/(12√π)`.
pub fn td_local_coefficient(x: f64) -> f64 {
    x.powi(3) / (12.0 * PI.sqrt())
}

/// `κ11 / K^TD` as a function of `x = d/R0`.
pub fn td_ratio(x: f64) -> f64 {
    td_local_coefficient(x) / td_bracket(x)
}

/// `K^TD = K · bracket(d/R0)`, sign as printed.
pub fn td_coupling(scn: &GravityScenario) -> Result<f64> {
    Ok(newton_coupling(scn) * td_bracket(scn.ratio()?))
}

/// `[[κ11, K^TD], [K^TD, κ11]]` in kg·s⁻².
pub fn td_kossakowski(scn: &GravityScenario) -> Result<[[f64; 2]; 2]> {
    let x = scn.ratio()?;
    let k = newton_coupling(scn);
    let k11 = k * td_local_coefficient(x);
    let k12 = k * td_bracket(x);
    Ok([[k11, k12], [k12, k11]])
}

/// `g [[1, −1], [−1, 1]]` with `g = f′(d)² = Gm²/(4d³)`.
pub fn naive_kossakowski(scn: &GravityScenario) -> [[f64; 2]; 2] {
    let g = scn.g * scn.mass_kg * scn.mass_kg / (4.0 * scn.distance_m.powi(3));
    [[g, -g], [-g, g]]
}

/// Effective `x1 x2` coupling in kg·s⁻².
pub fn effective_coupling(scn: &GravityScenario) -> Result<f64> {
    match scn.model {
        ModelKind::Newton | ModelKind::Naive => Ok(newton_coupling(scn)),
        ModelKind::Td => td_coupling(scn),
    }
}

/// Reduced Kossakowski matrix in kg·s⁻² (zero for Newton).
pub fn reduced_kossakowski(scn: &GravityScenario) -> Result<[[f64; 2]; 2]> {
    match scn.model {
        ModelKind::Newton => Ok([[0.0; 2]; 2]),
        ModelKind::Naive => Ok(naive_kossakowski(scn)),
        ModelKind::Td => td_kossakowski(scn),
    }
}

/// Ratio above which the quadratic expansion is flagged.
pub const GUARD_WARN: f64 = 1e-2;
/// Ratio above which it is refused (ten times the warning level).
pub const GUARD_FAIL: f64 = 1e-1;

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeReport {
    /// `K/(mω²)`.
    pub coupling_ratio: f64,
    /// `Δx_t / min(d, R0)` for free spreading from the trap ground state.
    pub spread_ratio: Option<f64>,
    pub warnings: Vec<String>,
    pub hard_failure: Option<String>,
}

/// Free-particle position spread after `t` seconds from the trap ground state.
pub fn free_spread(scn: &GravityScenario, t_s: f64) -> f64 {
    let tau = scn.omega * t_s;
    scn.units().x0 * ((1.0 + tau * tau) / 2.0).sqrt()
}

/// Checks `K/(mω²) ≪ 1` and, if `t_max_s` is given, `Δx_t ≪ min(d, R0)`.
pub fn regime_report(scn: &GravityScenario, t_max_s: Option<f64>) -> Result<RegimeReport> {
    scn.validate()?;
    let coupling_ratio = effective_coupling(scn)?.abs().max(newton_coupling(scn)) / scn.stiffness();
    let mut warnings = Vec::new();
    let mut hard_failure = None;
    let mut check = |name: &str, r: f64| {
        if r > GUARD_FAIL {
            hard_failure.get_or_insert_with(|| format!("{name} = {r:.3e} exceeds {GUARD_FAIL:e}"));
        } else if r > GUARD_WARN {
            warnings.push(format!("{name} = {r:.3e} exceeds {GUARD_WARN:e}"));
        }
    };
    check("K/(m w^2)", coupling_ratio);
    let spread_ratio = t_max_s.map(|t| {
        let limit = match scn.model {
            ModelKind::Td => scn.distance_m.min(scn.r0_m.unwrap_or(f64::INFINITY)),
            _ => scn.distance_m,
        };
        free_spread(scn, t) / limit
    });
    if let Some(r) = spread_ratio {
        check("dx_t/min(d, R0)", r);
    }
    Ok(RegimeReport { coupling_ratio, spread_ratio, warnings, hard_failure })
}

/// Dimensionless two-mode generator for the scenario.
///
/// `H` has kinetic entries 1 on `p1²`, `p2²`, the coupling `c` on `x1 x2` and
/// the local terms `−c` on `x1²`, `x2²`; `κ = (κ_N/(mω²)) ⊗ τ`.
pub fn build_generator(scn: &GravityScenario) -> Result<GaussianGenerator> {
    let report = regime_report(scn, None)?;
    if let Some(msg) = report.hard_failure {
        return Err(Error::RegimeGuard(msg));
    }
    let s = scn.stiffness();
    let c = effective_coupling(scn)? / s;
    #[rustfmt::skip]
    let h = RMat::from_row_slice(4, 4, &[
        -c, 0.0, c, 0.0,
        0.0, 1.0, 0.0, 0.0,
        c, 0.0, -c, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ]);
    let kn = reduced_kossakowski(scn)?;
    let kn = RMat::from_row_slice(2, 2, &[kn[0][0] / s, kn[0][1] / s, kn[1][0] / s, kn[1][1] / s]);
    let tau = RMat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    GaussianGenerator::new(h, to_complex(&kron(&kn, &tau)))
}

const RATIO_BRACKET: (f64, f64) = (0.1, 2.0);

/// `d/R0` at which `(κ11/K^TD)² = 2`.
///
/// Bisection on `1/(144π) − 2 (bracket(x)/x³)²`, which is free of the pole
/// where the bracket changes sign.
pub fn critical_ratio() -> Result<f64> {
    let f = |x: f64| {
        let q = td_bracket(x) / x.powi(3);
        1.0 / (144.0 * PI) - 2.0 * q * q
    };
    let (mut lo, mut hi) = RATIO_BRACKET;
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::Internal(format!(
            "critical ratio not bracketed: f({lo}) = {flo:e}, f({hi}) = {fhi:e}"
        )));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `R0` for which the model can entangle at separation `d`.
pub fn critical_r0(d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidInput(format!("distance must be positive, got {d}")));
    }
    Ok(d / critical_ratio()?)
}

/// Best experimental lower bound on `R0` quoted for comparison, in metres.
pub const R0_EXPERIMENTAL_BOUND: f64 = 4e-10;

/// Orders of magnitude between `critical_r0(d)` and the experimental bound.
pub fn orders_above_bound(d: f64) -> Result<f64> {
    Ok((critical_r0(d)? / R0_EXPERIMENTAL_BOUND).log10())
}

/// Closed-form negativity for the Newtonian flow from the product vacuum.
///
/// The centre of mass is a free particle and the relative coordinate an
/// inverted oscillator with `s = √(2c)`. With `T = S_cm⁻¹ S_rel` the
/// negativity is `log₂ σ_max(T)`.
pub fn newton_log_negativity(c: f64, tau: f64) -> f64 {
    if c <= 0.0 || tau <= 0.0 {
        return 0.0;
    }
    let s = (2.0 * c).sqrt();
    let u = s * tau;
    let (sh, ch) = (u.sinh(), u.cosh());
    let half = (0.5 * u).sinh();
    let chm1 = 2.0 * half * half;
    // sinh(u)/u − cosh(u) = −Σ 2k u^{2k} / (2k+1)!
    let sinhc_minus_cosh = if u < 0.5 {
        let u2 = u * u;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..30 {
            let kf = k as f64;
            term *= u2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let t = 2.0 * kf * term;
            sum += t;
            if t < 1e-18 * sum {
                break;
            }
        }
        -sum
    } else {
        sh / u - ch
    };
    let t11m1 = chm1 - u * sh;
    let t12 = tau * sinhc_minus_cosh;
    let t21 = s * sh;
    let t22m1 = chm1;
    // ‖T‖_F² − 2 with T11, T22 near 1 handled through T − 1
    let f_minus_2 = t11m1 * (t11m1 + 2.0) + t22m1 * (t22m1 + 2.0) + t12 * t12 + t21 * t21;
    let f = f_minus_2 + 2.0;
    let sigma_sq = 0.5 * (f + (f_minus_2 * (f + 2.0)).max(0.0).sqrt());
    0.5 * sigma_sq.log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial_transpose::{entanglement_generating, Verdict};
    use crate::linalg::{min_hermitian_eigenvalue, Tolerance};
    use num_complex::Complex64;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn td_at(x: f64) -> GravityScenario {
        GravityScenario::reference(ModelKind::Td).with_r0(3e-4 / x)
    }

    #[test]
    fn newton_coupling_values() {
        let scn = GravityScenario::reference(ModelKind::Newton);
        let k = newton_coupling(&scn);
        assert!(rel(k, 4.943_925_925_925_926e-14) < 1e-12);
        let mut doubled = scn;
        doubled.g *= 2.0;
        assert!(rel(newton_coupling(&doubled), 2.0 * k) < 1e-15);
        let r = regime_report(&scn, None).unwrap();
        assert!(rel(r.coupling_ratio, 4.943_925_925_925_926e-17) < 1e-12);
        assert!(r.warnings.is_empty() && r.hard_failure.is_none());
    }

    #[test]
    fn bracket_values() {
        // 40-digit reference values
        let cases = [
            (0.6, 8.595_557_986_273_444e-3),
            (0.8, 1.776_280_761_477_037e-2),
            (1.0, 2.873_923_402_160_646e-2),
            (1.2, 3.853_454_943_093_241e-2),
        ];
        for (x, b) in cases {
            assert!(rel(td_bracket(x), b) < 1e-13, "x = {x}: {} vs {b}", td_bracket(x));
        }
        // the two branches agree across the switch
        let below = td_bracket(1.0);
        let x = 1.0_f64;
        let closed = x.powi(3) / (4.0 * PI.sqrt()) * (-x * x / 4.0).exp() * (4.0 / (x * x) + 1.0)
            - libm::erf(x / 2.0);
        assert!(rel(below, closed) < 1e-13);
        for x in [1e-3, 1e-2, 0.05] {
            assert!(rel(td_bracket(x), td_local_coefficient(x)) < x * x);
        }
    }

    #[test]
    fn ratio_values() {
        assert!(rel(td_ratio(0.6), 1.181_472_165_050_501) < 1e-12);
        assert!(rel(td_ratio(1.0), 1.635_944_736_510_121) < 1e-12);
        assert!(td_ratio(0.6) < 2f64.sqrt() && td_ratio(1.0) > 2f64.sqrt());
        assert!((td_ratio(1e-4) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn naive_values() {
        let scn = GravityScenario::reference(ModelKind::Naive);
        let k = naive_kossakowski(&scn);
        assert!(rel(k[0][0], 6.179_907_407_407_407e-15) < 1e-12);
        assert_eq!(k[0][0] * k[1][1] - k[0][1] * k[1][0], 0.0);
        let mut far = scn;
        far.distance_m *= 2.0;
        assert!(rel(naive_kossakowski(&far)[0][0], k[0][0] / 8.0) < 1e-14);
    }

    #[test]
    fn critical_values() {
        let x = critical_ratio().unwrap();
        assert!((x - 0.850_872_256_263_158).abs() < 1e-9, "{x}");
        let r = critical_r0(3e-4).unwrap();
        assert!(rel(r, 3.525_793_652_240_271e-4) < 1e-8);
        assert!(rel(critical_r0(6e-4).unwrap(), 2.0 * r) < 1e-14);
        assert!(orders_above_bound(3e-4).unwrap() > 5.9);
        assert!(critical_r0(0.0).is_err());
    }

    #[test]
    fn generator_layout() {
        let scn = GravityScenario::reference(ModelKind::Newton);
        let g = build_generator(&scn).unwrap();
        let c = newton_coupling(&scn) * scn.units().x0.powi(2) / (scn.hbar * scn.omega);
        assert!(rel(g.hamiltonian()[(0, 2)], c) < 1e-12);
        assert_eq!(g.hamiltonian()[(0, 0)], -g.hamiltonian()[(0, 2)]);
        assert_eq!(g.kossakowski().iter().map(|z| z.norm()).sum::<f64>(), 0.0);
        let u = scn.units();
        assert!(rel(u.x0 * u.p0, scn.hbar) < 1e-15);
    }

    #[test]
    fn td_verdicts() {
        let tol = Tolerance::Relative(1e-10);
        let v = |x| entanglement_generating(&build_generator(&td_at(x)).unwrap(), tol).unwrap();
        assert_eq!(v(0.6), Verdict::Generating);
        assert_eq!(v(0.8), Verdict::Generating);
        assert_eq!(v(1.0), Verdict::NonGenerating);
        assert_eq!(v(1.2), Verdict::NonGenerating);
        let naive = build_generator(&GravityScenario::reference(ModelKind::Naive)).unwrap();
        assert_eq!(entanglement_generating(&naive, tol).unwrap(), Verdict::Generating);
    }

    #[test]
    fn td_is_cp_across_scales() {
        for i in 0..=80 {
            let x = 10f64.powf(-3.0 + 4.0 * i as f64 / 80.0);
            let k = td_kossakowski(&td_at(x)).unwrap();
            let m = crate::linalg::CMat::from_fn(2, 2, |r, c| Complex64::new(k[r][c], 0.0));
            assert!(k[0][0] >= 0.0);
            assert!(min_hermitian_eigenvalue(&m) >= -1e-12 * k[0][0].abs().max(k[0][1].abs()), "x = {x}");
        }
    }

    #[test]
    fn verdict_flips_once() {
        let tol = Tolerance::Relative(1e-10);
        let xc = critical_ratio().unwrap();
        let mut flips = 0;
        let mut prev = None;
        for i in 0..200 {
            let x = 0.1 + 1.9 * i as f64 / 199.0;
            let v = entanglement_generating(&build_generator(&td_at(x)).unwrap(), tol).unwrap();
            assert_eq!(v == Verdict::Generating, x < xc, "x = {x}");
            if prev.is_some_and(|p| p != v) {
                flips += 1;
            }
            prev = Some(v);
        }
        assert_eq!(flips, 1);
    }

    #[test]
    fn newton_closed_form_values() {
        let scn = GravityScenario::reference(ModelKind::Newton);
        let c = newton_coupling(&scn) / scn.stiffness();
        for (t, e) in [(0.5, 0.002_972), (1.0, 0.023_774), (10.0, 5.044)] {
            let got = newton_log_negativity(c, scn.omega * t);
            assert!(rel(got, e) < 2e-3, "t = {t}: {got}");
        }
    }
}
