//! Equal-time and two-time correlation functions: initial-condition
//! contributions, stationary noise kernels F/H/J, high-temperature limits,
//! effective temperatures, and finite-time transient noise integrals.
//!
//! Closed forms hold for strictly Ohmic baths; each is the residue evaluation
//! of its defining frequency integral (resonance poles of the damped
//! denominator plus the Matsubara poles of the Bose factor) and is
//! cross-checked against direct quadrature.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::{self, BromwichEvaluator, LaplaceMatrix};
use crate::model::{BathSpec, CutoffFamily, NormalModeBasis};
use crate::quad::{self, QuadTol};

const CZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which correlator a series holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrKind {
    QqPlusPlus,
    QqMinusMinus,
    QqPlusMinus,
    PpPlusPlus,
    PpMinusMinus,
    PpPlusMinus,
}

impl CorrKind {
    pub fn label(self) -> &'static str {
        match self {
            CorrKind::QqPlusPlus => "qq_pp",
            CorrKind::QqMinusMinus => "qq_mm",
            CorrKind::QqPlusMinus => "qq_pm",
            CorrKind::PpPlusPlus => "pp_pp",
            CorrKind::PpMinusMinus => "pp_mm",
            CorrKind::PpPlusMinus => "pp_pm",
        }
    }

    pub fn is_momentum(self) -> bool {
        matches!(
            self,
            CorrKind::PpPlusPlus | CorrKind::PpMinusMinus | CorrKind::PpPlusMinus
        )
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "qq_pp" => CorrKind::QqPlusPlus,
            "qq_mm" => CorrKind::QqMinusMinus,
            "qq_pm" => CorrKind::QqPlusMinus,
            "pp_pp" => CorrKind::PpPlusPlus,
            "pp_mm" => CorrKind::PpMinusMinus,
            "pp_pm" => CorrKind::PpPlusMinus,
            _ => return None,
        })
    }
}

/// Which physical contribution a series holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    InitialCondition,
    Noise,
    Total,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::InitialCondition => "initial",
            Source::Noise => "noise",
            Source::Total => "total",
        }
    }
}

/// A correlator sampled on a time (or time-difference) grid.
#[derive(Clone, Debug)]
pub struct CorrelationSeries {
    pub tau: Vec<f64>,
    pub values: Vec<Complex64>,
    pub kind: CorrKind,
    pub source: Source,
}

/// Position (F/J based) or momentum (H based / −d²/dτ²) correlators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Position,
    Momentum,
}

fn require_strict(bath: &BathSpec, what: &str) -> Result<()> {
    if bath.cutoff != CutoffFamily::StrictOhmic {
        return Err(Error::Domain(format!(
            "{what} closed form is the strict-Ohmic stationary kernel; \
             use the quadrature module for finite bandwidths"
        )));
    }
    Ok(())
}

/// Bose function continued to complex frequency.
fn bose_c(z: Complex64, temperature: f64) -> Complex64 {
    1.0 / ((z / temperature).exp() - 1.0)
}

/// coth at a complex argument, overflow-guarded.
fn coth_c(z: Complex64) -> Complex64 {
    if z.re.abs() > 350.0 {
        Complex64::new(z.re.signum(), 0.0)
    } else {
        let e = (2.0 * z).exp();
        (e + 1.0) / (e - 1.0)
    }
}

/// Matsubara summation: stop once the next term falls below 1e-12 of the
/// partial sum and l has passed the thermal guard 2 + 2πTτ.
fn matsubara_sum<F: Fn(f64) -> Complex64>(
    temperature: f64,
    tau: f64,
    term: F,
) -> Result<Complex64> {
    let guard = (2.0 + 2.0 * PI * temperature * tau).min(1e6) as usize;
    let mut sum = CZERO;
    for l in 1..2_000_000usize {
        let y = 2.0 * PI * l as f64 * temperature;
        let t = term(y);
        sum += t;
        if t == CZERO || (l > guard && t.norm() < 1e-12 * sum.norm().max(1e-300)) {
            return Ok(sum);
        }
    }
    Err(Error::Numerics(format!(
        "Matsubara series did not converge; partial sum {sum}"
    )))
}

// ---------------------------------------------------------------------------
// Initial-condition coherences
// ---------------------------------------------------------------------------

/// Strong-coupling (Δ=0) initial-state coherence
/// ⟨q₊(t)q₋(t)⟩₀ = (sin2ψ/4W)[(Ġ₁²+W²G₁²) − (Ġ₂²+W²G₂²)]
/// for the factorized normal-mode ground state. The one-bath case (γ₂ = 0)
/// tends to the constant −sin2ψ/4W at long times.
pub fn coherence_initial_strong(w: f64, psi: f64, gamma1: f64, gamma2: f64, t: f64) -> f64 {
    let bracket = |gamma: f64| {
        let g = greens::damped_sinc(gamma, w * w, t);
        let gd = greens::damped_sinc_deriv(gamma, w * w, t);
        gd * gd + w * w * g * g
    };
    (2.0 * psi).sin() / (4.0 * w) * (bracket(gamma1) - bracket(gamma2))
}

/// Weak-coupling initial-state coherence (leading order in Γ±/Ω±).
///
/// Derived from 𝔾_weak with the verified off-diagonal coefficient
/// κ = (γ₂−γ₁)sin2ψ/(4WΔ):
/// C₀(t) = κ{ ½E₊E₋[(1+r)c₊s₋ − (1+1/r)c₋s₊]
///          + (i/2)(E₊²+E₋²) − (i/2)E₊E₋[2c₊c₋ + (r+1/r)s₊s₋] },
/// with E± = e^{−Γ±t/2}, r = Ω₋/Ω₊. Interference beats of period 2π/Δ,
/// damped on the scale 2/(Γ₊+Γ₋).
pub fn coherence_initial_weak(
    w: f64,
    delta: f64,
    psi: f64,
    gamma1: f64,
    gamma2: f64,
    t: f64,
) -> Complex64 {
    let (gp, gm) = greens::weak_rates(psi, gamma1, gamma2);
    let (op, om) = (w - 0.5 * delta, w + 0.5 * delta);
    let (ep, em) = ((-0.5 * gp * t).exp(), (-0.5 * gm * t).exp());
    let (sp, cp) = (op * t).sin_cos();
    let (sm, cm) = (om * t).sin_cos();
    let r = om / op;
    let kappa = greens::weak_off_coefficient(w, delta, psi, gamma1, gamma2);
    let re = 0.5 * ep * em * ((1.0 + r) * cp * sm - (1.0 + 1.0 / r) * cm * sp);
    let im = 0.5 * (ep * ep + em * em) - 0.5 * ep * em * (2.0 * cp * cm + (r + 1.0 / r) * sp * sm);
    kappa * Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// F and H: strong-coupling stationary kernels
// ---------------------------------------------------------------------------

/// W₁ = √(W² − γ²/4), continued through overdamping.
fn resonance_w1(w: f64, gamma: f64) -> Complex64 {
    Complex64::new(w * w - 0.25 * gamma * gamma, 0.0).sqrt()
}

/// Stationary coordinate kernel
/// F(τ) = ∫ dω/π σ(ω)n(ω)e^{iωτ} / [(ω²−W²)² + (ωγ)²], strict Ohmic.
///
/// T > 0 uses the residue closed form: resonance poles at ±W₁ + iγ/2 give
/// F^(a) = [(coth₊−1)e^{μ₊τ} + (coth₋+1)e^{μ₋τ}]/(4W₁) with
/// coth± = coth[(W₁ ± iγ/2)/2T], μ± = −γ/2 ± iW₁, plus the Matsubara series
/// F^(b). T = 0 is evaluated by quadrature. Negative τ by Hermitian symmetry.
pub fn f_function(bath: &BathSpec, w: f64, tau: f64) -> Result<Complex64> {
    require_strict(bath, "F")?;
    if tau < 0.0 {
        return Ok(f_function(bath, w, -tau)?.conj());
    }
    if bath.gamma == 0.0 {
        return Err(Error::Domain(
            "F has an undamped resonance at gamma = 0; the stationary state needs gamma > 0".into(),
        ));
    }
    if bath.temperature == 0.0 {
        return quadrature::f_by_quadrature(bath.gamma, w, 0.0, tau, QuadTol::default());
    }
    let (g, t_temp) = (bath.gamma, bath.temperature);
    let w1 = resonance_w1(w, g);
    let mu_p = Complex64::new(-0.5 * g, 0.0) + I * w1;
    let mu_m = Complex64::new(-0.5 * g, 0.0) - I * w1;
    let coth_p = coth_c((w1 + I * (0.5 * g)) / (2.0 * t_temp));
    let coth_m = coth_c((w1 - I * (0.5 * g)) / (2.0 * t_temp));
    let fa =
        ((coth_p - 1.0) * (mu_p * tau).exp() + (coth_m + 1.0) * (mu_m * tau).exp()) / (4.0 * w1);
    let fb = matsubara_sum(t_temp, tau, |y| {
        let den = (y * y + w * w).powi(2) - (y * g).powi(2);
        Complex64::new(-2.0 * g * y * t_temp * (-y * tau).exp() / den, 0.0)
    })?;
    Ok(fa + fb)
}

/// High-temperature limit of F:
/// F(τ) ≈ (T/W²) e^{−γτ/2} [cos W₁τ + (γ/2W₁) sin W₁τ].
pub fn f_high_t(bath: &BathSpec, w: f64, tau: f64) -> f64 {
    let g = bath.gamma;
    let w1 = (w * w - 0.25 * g * g).sqrt();
    bath.temperature / (w * w)
        * (-0.5 * g * tau).exp()
        * ((w1 * tau).cos() + 0.5 * g / w1 * (w1 * tau).sin())
}

/// Stationary momentum kernel H(τ) = −d²F/dτ², strict Ohmic.
///
/// τ > 0: analytic second derivative of the residue form plus the Matsubara
/// series. τ = 0 diverges logarithmically with the bandwidth: rejected for
/// the strict-Ohmic sentinel; a sharp-cutoff bath returns the exact finite-Λ
/// zero-temperature value plus the thermal remainder.
pub fn h_function(bath: &BathSpec, w: f64, tau: f64) -> Result<Complex64> {
    if tau < 0.0 {
        return Ok(h_function(bath, w, -tau)?.conj());
    }
    if bath.gamma == 0.0 {
        return Ok(CZERO);
    }
    if tau == 0.0 {
        return match bath.cutoff {
            CutoffFamily::StrictOhmic => Err(Error::Domain(
                "H(0) diverges logarithmically with the bandwidth; supply a finite-Λ bath or \
                 evaluate at τ ≥ 1/Λ"
                    .into(),
            )),
            CutoffFamily::SharpCutoff => h_coincidence_sharp(bath, w),
            CutoffFamily::Drude => Err(Error::Domain(
                "H(0) closed form covers the sharp cutoff; use quadrature for Drude".into(),
            )),
        };
    }
    require_strict(bath, "H(τ>0)")?;
    if bath.temperature == 0.0 {
        return quadrature::h_by_quadrature(bath.gamma, w, 0.0, tau, QuadTol::default());
    }
    let (g, t_temp) = (bath.gamma, bath.temperature);
    let w1 = resonance_w1(w, g);
    let mu_p = Complex64::new(-0.5 * g, 0.0) + I * w1;
    let mu_m = Complex64::new(-0.5 * g, 0.0) - I * w1;
    let coth_p = coth_c((w1 + I * (0.5 * g)) / (2.0 * t_temp));
    let coth_m = coth_c((w1 - I * (0.5 * g)) / (2.0 * t_temp));
    let ha = -((coth_p - 1.0) * mu_p * mu_p * (mu_p * tau).exp()
        + (coth_m + 1.0) * mu_m * mu_m * (mu_m * tau).exp())
        / (4.0 * w1);
    let hb = matsubara_sum(t_temp, tau, |y| {
        let den = (y * y + w * w).powi(2) - (y * g).powi(2);
        Complex64::new(2.0 * g * y.powi(3) * t_temp * (-y * tau).exp() / den, 0.0)
    })?;
    Ok(ha + hb)
}

/// Exact finite-Λ coincidence value H(0) for a sharp cutoff:
/// (γ/π)∫₀^Λ ω³/D dω in closed form (partial fractions in ω²) plus the
/// exponentially convergent thermal remainder. Carries the (γ/π)ln(Λ/W)
/// bandwidth divergence.
fn h_coincidence_sharp(bath: &BathSpec, w: f64) -> Result<Complex64> {
    let (g, lam, t_temp) = (bath.gamma, bath.lambda_cut, bath.temperature);
    // roots of u² + u(γ²−2W²) + W⁴ with u = ω²
    let half = Complex64::new(0.5 * (2.0 * w * w - g * g), 0.0);
    let disc = Complex64::new(
        (g * g - 2.0 * w * w) * (g * g - 2.0 * w * w) - 4.0 * w.powi(4),
        0.0,
    )
    .sqrt();
    let u_p = half + 0.5 * disc;
    let u_m = half - 0.5 * disc;
    let l2 = Complex64::new(lam * lam, 0.0);
    let zero_t = (g / (2.0 * PI))
        * (u_p * ((l2 - u_p) / (-u_p)).ln() - u_m * ((l2 - u_m) / (-u_m)).ln())
        / (u_p - u_m);
    if zero_t.im.abs() > 1e-9 * zero_t.re.abs().max(1.0) {
        return Err(Error::Numerics(format!(
            "H(0) closed form lost realness: {zero_t}"
        )));
    }
    let mut value = zero_t.re;
    if t_temp > 0.0 {
        let f = |om: f64| {
            let d = (om * om - w * w).powi(2) + (om * g).powi(2);
            let n = 1.0 / (om / t_temp).exp_m1();
            Complex64::new(g / PI * om.powi(3) * 2.0 * n / d, 0.0)
        };
        let upper = lam.min(60.0 * t_temp + 10.0 * w);
        value += quad::adaptive(&f, 1e-12, upper, QuadTol::default())?.re;
    }
    Ok(Complex64::new(value, 0.0))
}

// ---------------------------------------------------------------------------
// J: weak-coupling stationary kernels
// ---------------------------------------------------------------------------

/// Renormalized weak-coupling mode data: Ω± = W ∓ Δ/2 and the rates Γ±.
#[derive(Clone, Copy, Debug)]
pub struct WeakModes {
    pub w: f64,
    pub delta: f64,
    pub psi: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
}

impl WeakModes {
    pub fn new(w: f64, delta: f64, psi: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let omega_plus = w - 0.5 * delta;
        let omega_minus = w + 0.5 * delta;
        if omega_plus <= 0.0 || omega_minus <= 0.0 {
            return Err(Error::Invalid(format!(
                "weak modes need positive frequencies, got Ω± = ({omega_plus}, {omega_minus})"
            )));
        }
        if delta == 0.0 {
            return Err(Error::Invalid(
                "weak-coupling closed forms need nonzero detuning; use the Δ=0 regime".into(),
            ));
        }
        let (gamma_plus, gamma_minus) = greens::weak_rates(psi, gamma1, gamma2);
        Ok(WeakModes {
            w,
            delta,
            psi,
            gamma1,
            gamma2,
            omega_plus,
            omega_minus,
            gamma_plus,
            gamma_minus,
        })
    }

    /// max(γ)/min(Ω₊, |Δ|): above ≈0.2 the expansion leaves its domain.
    pub fn validity_ratio(&self) -> f64 {
        greens::weak_validity_ratio(self.w, self.delta, self.gamma1, self.gamma2)
    }
}

/// Which J family to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModePair {
    PlusPlus,
    MinusMinus,
    PlusMinus,
}

/// Denominator data (A, Ω_a, B, Ω_b) of
/// f(ω) = (ω − iA)² − Ω_a², g(ω) = (ω + iB)² − Ω_b².
fn j_factors(modes: &WeakModes, pair: ModePair) -> (f64, f64, f64, f64) {
    let (gp2, gm2) = (0.5 * modes.gamma_plus, 0.5 * modes.gamma_minus);
    match pair {
        ModePair::PlusPlus => (gp2, modes.omega_plus, gp2, modes.omega_plus),
        ModePair::MinusMinus => (gm2, modes.omega_minus, gm2, modes.omega_minus),
        ModePair::PlusMinus => (gp2, modes.omega_plus, gm2, modes.omega_minus),
    }
}

fn j_closed_form(
    bath: &BathSpec,
    modes: &WeakModes,
    pair: ModePair,
    tau: f64,
    deriv2: bool,
) -> Result<Complex64> {
    let (a, om_a, b, om_b) = j_factors(modes, pair);
    let (g, t_temp) = (bath.gamma, bath.temperature);
    // exact residues at the upper f-poles ±Ω_a + iA
    let mut value = CZERO;
    for sign in [1.0f64, -1.0] {
        let p = Complex64::new(sign * om_a, a);
        let fp = Complex64::new(2.0 * sign * om_a, 0.0);
        let gp = (p + I * b) * (p + I * b) - om_b * om_b;
        let mut term = 2.0 * I * g * p * (I * p * tau).exp() * bose_c(p, t_temp) / (fp * gp);
        if deriv2 {
            term *= p * p;
        }
        value += term;
    }
    value += matsubara_sum(t_temp, tau, |y| {
        let den = ((y - a) * (y - a) + om_a * om_a) * ((y + b) * (y + b) + om_b * om_b);
        let base = -2.0 * g * y * t_temp * (-y * tau).exp() / den;
        Complex64::new(if deriv2 { -y * y * base } else { base }, 0.0)
    })?;
    Ok(value)
}

/// Weak-coupling stationary kernel
/// J^{(j)}_{αβ}(τ) = ∫ dω/π ω e^{iωτ} γ_j n_j(ω) / [f(ω)g(ω)].
///
/// Exact residue sum over the exactly-factored resonance poles plus the
/// Matsubara series; reduces to the leading-order closed forms for
/// Γ± ≪ Ω±. T = 0 by quadrature; negative τ by Hermitian symmetry.
pub fn j_function(
    bath: &BathSpec,
    modes: &WeakModes,
    pair: ModePair,
    tau: f64,
) -> Result<Complex64> {
    require_strict(bath, "J")?;
    if tau < 0.0 {
        return Ok(j_function(bath, modes, pair, -tau)?.conj());
    }
    if bath.gamma == 0.0 {
        return Ok(CZERO);
    }
    if bath.temperature == 0.0 {
        let (a, om_a, b, om_b) = j_factors(modes, pair);
        return quadrature::j_by_quadrature(
            bath.gamma,
            0.0,
            a,
            om_a,
            b,
            om_b,
            tau,
            QuadTol::default(),
        );
    }
    j_closed_form(bath, modes, pair, tau, false)
}

/// −d²/dτ² of [`j_function`], the momentum-sector kernel.
pub fn j_function_d2(
    bath: &BathSpec,
    modes: &WeakModes,
    pair: ModePair,
    tau: f64,
) -> Result<Complex64> {
    require_strict(bath, "J''")?;
    if tau < 0.0 {
        return Ok(j_function_d2(bath, modes, pair, -tau)?.conj());
    }
    if bath.gamma == 0.0 {
        return Ok(CZERO);
    }
    if tau == 0.0 {
        return Err(Error::Domain(
            "momentum correlators at τ = 0 are bandwidth-divergent; coincidence limit is τ ≳ 1/Λ"
                .into(),
        ));
    }
    if bath.temperature == 0.0 {
        return Err(Error::Domain(
            "J'' closed form needs T > 0; use quadrature at T = 0".into(),
        ));
    }
    j_closed_form(bath, modes, pair, tau, true)
}

// ---------------------------------------------------------------------------
// Stationary series assembly
// ---------------------------------------------------------------------------

fn angle_weights(psi: f64) -> (f64, f64, f64) {
    let (sn, cs) = psi.sin_cos();
    (cs * cs, sn * sn, cs * sn)
}

/// Strong-coupling (Δ=0) stationary correlators on a τ grid:
/// [⟨⟨x₊x₊⟩⟩, ⟨⟨x₋x₋⟩⟩, ⟨⟨x₊x₋⟩⟩] with x = q (F-based) or p (H-based).
pub fn stationary_strong(
    w: f64,
    psi: f64,
    bath1: &BathSpec,
    bath2: &BathSpec,
    taus: &[f64],
    part: Part,
) -> Result<[CorrelationSeries; 3]> {
    let (c2, s2, cs) = angle_weights(psi);
    let eval = |bath: &BathSpec, tau: f64| match part {
        Part::Position => f_function(bath, w, tau),
        Part::Momentum => h_function(bath, w, tau),
    };
    let mut pp = Vec::with_capacity(taus.len());
    let mut mm = Vec::with_capacity(taus.len());
    let mut pm = Vec::with_capacity(taus.len());
    for &tau in taus {
        let k1 = eval(bath1, tau)?;
        let k2 = eval(bath2, tau)?;
        pp.push(c2 * k1 + s2 * k2);
        mm.push(s2 * k1 + c2 * k2);
        pm.push(cs * (k1 - k2));
    }
    Ok(pack_series(taus, pp, mm, pm, part))
}

/// Weak-coupling stationary correlators on a τ grid (J-based).
pub fn stationary_weak(
    modes: &WeakModes,
    bath1: &BathSpec,
    bath2: &BathSpec,
    taus: &[f64],
    part: Part,
) -> Result<[CorrelationSeries; 3]> {
    let (c2, s2, cs) = angle_weights(modes.psi);
    let eval = |bath: &BathSpec, pair: ModePair, tau: f64| match part {
        Part::Position => j_function(bath, modes, pair, tau),
        Part::Momentum => j_function_d2(bath, modes, pair, tau),
    };
    let mut pp = Vec::with_capacity(taus.len());
    let mut mm = Vec::with_capacity(taus.len());
    let mut pm = Vec::with_capacity(taus.len());
    for &tau in taus {
        pp.push(
            c2 * eval(bath1, ModePair::PlusPlus, tau)? + s2 * eval(bath2, ModePair::PlusPlus, tau)?,
        );
        mm.push(
            s2 * eval(bath1, ModePair::MinusMinus, tau)?
                + c2 * eval(bath2, ModePair::MinusMinus, tau)?,
        );
        pm.push(
            cs * (eval(bath1, ModePair::PlusMinus, tau)? - eval(bath2, ModePair::PlusMinus, tau)?),
        );
    }
    Ok(pack_series(taus, pp, mm, pm, part))
}

fn pack_series(
    taus: &[f64],
    pp: Vec<Complex64>,
    mm: Vec<Complex64>,
    pm: Vec<Complex64>,
    part: Part,
) -> [CorrelationSeries; 3] {
    let kinds = match part {
        Part::Position => [
            CorrKind::QqPlusPlus,
            CorrKind::QqMinusMinus,
            CorrKind::QqPlusMinus,
        ],
        Part::Momentum => [
            CorrKind::PpPlusPlus,
            CorrKind::PpMinusMinus,
            CorrKind::PpPlusMinus,
        ],
    };
    [
        CorrelationSeries {
            tau: taus.to_vec(),
            values: pp,
            kind: kinds[0],
            source: Source::Noise,
        },
        CorrelationSeries {
            tau: taus.to_vec(),
            values: mm,
            kind: kinds[1],
            source: Source::Noise,
        },
        CorrelationSeries {
            tau: taus.to_vec(),
            values: pm,
            kind: kinds[2],
            source: Source::Noise,
        },
    ]
}

// ---------------------------------------------------------------------------
// High-temperature limits and effective temperatures
// ---------------------------------------------------------------------------

/// Effective equipartition temperatures
/// T^eff_± = (cos²ψ T₁ + sin²ψ T₂, sin²ψ T₁ + cos²ψ T₂).
pub fn effective_temperatures(psi: f64, t1: f64, t2: f64) -> (f64, f64) {
    let (c2, s2, _) = angle_weights(psi);
    (c2 * t1 + s2 * t2, s2 * t1 + c2 * t2)
}

/// High-T strong-coupling equal-time stationary values:
/// (⟨⟨q₊²⟩⟩, ⟨⟨q₋²⟩⟩, ⟨⟨q₊q₋⟩⟩) =
/// ([c²T₁+s²T₂]/W², [s²T₁+c²T₂]/W², sin2ψ(T₁−T₂)/2W²).
pub fn stationary_strong_high_t(psi: f64, w: f64, t1: f64, t2: f64) -> (f64, f64, f64) {
    let (tp, tm) = effective_temperatures(psi, t1, t2);
    let w2 = w * w;
    (tp / w2, tm / w2, (2.0 * psi).sin() * (t1 - t2) / (2.0 * w2))
}

/// High-T weak-coupling equal-time stationary values:
/// ⟨⟨q₊²⟩⟩ ≈ [c²T₁γ₁+s²T₂γ₂]/(Ω₊²Γ₊), ⟨⟨q₋²⟩⟩ ≈ [s²T₁γ₁+c²T₂γ₂]/(Ω₋²Γ₋),
/// ⟨⟨q₊q₋⟩⟩ ≈ cosψ sinψ [(γ₁+γ₂)/2(WΔ)²][T₁γ₁ − T₂γ₂].
pub fn stationary_weak_high_t(modes: &WeakModes, t1: f64, t2: f64) -> (f64, f64, f64) {
    let (c2, s2, cs) = angle_weights(modes.psi);
    let (g1, g2) = (modes.gamma1, modes.gamma2);
    let qq_pp = (c2 * t1 * g1 + s2 * t2 * g2) / (modes.omega_plus.powi(2) * modes.gamma_plus);
    let qq_mm = (s2 * t1 * g1 + c2 * t2 * g2) / (modes.omega_minus.powi(2) * modes.gamma_minus);
    let wd = modes.w * modes.delta;
    let qq_pm = cs * (g1 + g2) / (2.0 * wd * wd) * (t1 * g1 - t2 * g2);
    (qq_pp, qq_mm, qq_pm)
}

/// Equilibrium (T₁=T₂=T) high-T weak-coupling coherence
/// ⟨⟨q₊q₋⟩⟩ ≈ cosψ sinψ (T/W²)(γ₁²−γ₂²)/(2Δ²).
pub fn equilibrium_weak_coherence_high_t(modes: &WeakModes, temperature: f64) -> f64 {
    let (_, _, cs) = angle_weights(modes.psi);
    cs * temperature / (modes.w * modes.w) * (modes.gamma1.powi(2) - modes.gamma2.powi(2))
        / (2.0 * modes.delta * modes.delta)
}

// ---------------------------------------------------------------------------
// Finite-time transient noise (Δ = 0)
// ---------------------------------------------------------------------------

/// How the Δ=0 bath-basis Green's functions G_j entering the finite-time
/// noise integrals are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreensBackend {
    /// Strict-Ohmic closed forms e^{−γt/2} sin(W₁t)/W₁ (the noise integral
    /// itself is always cut off at the bath's Λ).
    StrictClosedForm,
    /// Scalar numerical Bromwich inversion with the bath's actual cutoff
    /// family, so the transient describes the finite-bandwidth theory the
    /// discretized-bath oracle simulates.
    FiniteBandwidth,
}

/// Sampled scalar Green's function on a uniform fine grid (four sub-samples
/// per Filon panel), backed by a tabulated Bromwich entry for off-grid values.
struct GreensTable {
    sweep: quad::FilonSweep,
    table: greens::BromwichTable,
}

impl GreensTable {
    fn build(w: f64, bath: &BathSpec, t_max: f64, h: f64, tol: QuadTol) -> Result<Self> {
        // scalar g_j(s) = 1/(s² + W² + δΩ_j + Σ̃_j(s)) as the ψ=0, Δ=0 matrix
        // problem with a decoupled second bath
        let basis = NormalModeBasis::from_renormalized(w, 0.0, 0.0)?;
        let dummy = BathSpec::strict_ohmic(0.0, bath.lambda_cut, 0.0)?;
        let mat = LaplaceMatrix::new(&basis, bath, &dummy);
        let evaluator = BromwichEvaluator::new(mat, tol)?;
        let table = evaluator.tabulate_entry(0, 0, t_max)?;
        let n = 4 * ((t_max / (4.0 * h)).ceil() as usize + 1) + 1;
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            samples.push(table.greens(k as f64 * h));
        }
        Ok(GreensTable {
            sweep: quad::FilonSweep::new(&samples, h),
            table,
        })
    }
}

/// One evaluated transient point of the Δ=0 equal-time correlators.
#[derive(Clone, Copy, Debug)]
pub struct TransientPoint {
    pub t: f64,
    /// Initial-condition contribution to ⟨q₊q₋⟩ (ground-state preparation).
    pub initial: f64,
    /// Noise contribution to ⟨q₊q₋⟩.
    pub noise: f64,
    /// Noise contributions to ⟨q₊²⟩ and ⟨q₋²⟩.
    pub noise_diag: (f64, f64),
}

impl TransientPoint {
    pub fn total(&self) -> f64 {
        self.initial + self.noise
    }
}

/// Finite-time noise integrals of the Δ=0 equal-time correlators,
/// ⟨⟨q_α(t)q_β(t)⟩⟩_ξ = Σ_j (angle weights) (1/π)∫₀^{Λ_j} σ_j(ν)
/// coth(ν/2T_j) |Φ_j(ν,t)|² dν, Φ_j(ν,t) = ∫₀ᵗ G_j(u) e^{iνu} du,
/// plus the matching initial-condition coherence.
pub struct TransientNoise {
    w: f64,
    psi: f64,
    bath1: BathSpec,
    bath2: BathSpec,
    backend: GreensBackend,
    tables: [Option<GreensTable>; 2],
}

impl TransientNoise {
    pub fn new(
        w: f64,
        psi: f64,
        bath1: &BathSpec,
        bath2: &BathSpec,
        backend: GreensBackend,
        t_max: f64,
        tol: QuadTol,
    ) -> Result<Self> {
        let tables = match backend {
            GreensBackend::StrictClosedForm => [None, None],
            GreensBackend::FiniteBandwidth => {
                let h = (0.01 / w.max(1e-12)).min(0.25 / bath1.lambda_cut.max(bath2.lambda_cut));
                // an uncoupled bath has the exact undamped G = sin(Wt)/W with
                // no bandwidth correction, so it needs no table
                let build = |bath: &BathSpec| -> Result<Option<GreensTable>> {
                    if bath.gamma == 0.0 {
                        Ok(None)
                    } else {
                        Ok(Some(GreensTable::build(w, bath, t_max, h, tol)?))
                    }
                };
                [build(bath1)?, build(bath2)?]
            }
        };
        Ok(TransientNoise {
            w,
            psi,
            bath1: *bath1,
            bath2: *bath2,
            backend,
            tables,
        })
    }

    /// Φ_j(ν, t) for the strict closed-form backend (elementary integral of
    /// the damped sinusoid against e^{iνu}).
    fn phi_strict(&self, bath: &BathSpec, nu: f64, t: f64) -> Complex64 {
        let g = bath.gamma;
        let w1c = resonance_w1(self.w, g);
        let zp = Complex64::new(-0.5 * g, nu) + I * w1c;
        let zm = Complex64::new(-0.5 * g, nu) - I * w1c;
        // ∫₀ᵗ e^{zu} du with a series guard at the undamped resonance z → 0
        let ramp = |z: Complex64| {
            if (z * t).norm() < 1e-8 {
                t * (1.0 + 0.5 * z * t)
            } else {
                ((z * t).exp() - 1.0) / z
            }
        };
        (ramp(zp) - ramp(zm)) / (2.0 * I * w1c)
    }

    fn bath_weight(&self, bath: &BathSpec, nu: f64) -> f64 {
        let sigma = crate::spectral::spectral_density(bath, nu);
        let coth = if bath.temperature == 0.0 {
            1.0
        } else {
            1.0 / (0.5 * nu / bath.temperature).tanh()
        };
        sigma * coth
    }

    /// ν-quadrature grid resolving the resonance widths and the e^{iνt_max}
    /// oscillation of Φ: composite 4-point Gauss panels on [0, Λ].
    #[allow(clippy::excessive_precision)]
    fn nu_grid(&self, t_max: f64) -> Vec<(f64, f64)> {
        const GX: [f64; 4] = [
            -0.8611363115940526,
            -0.3399810435848563,
            0.3399810435848563,
            0.8611363115940526,
        ];
        const GW: [f64; 4] = [
            0.3478548451374538,
            0.6521451548625461,
            0.6521451548625461,
            0.3478548451374538,
        ];
        let lam = self.bath1.lambda_cut.max(self.bath2.lambda_cut);
        let res_width = self.bath1.gamma.min(self.bath2.gamma).max(0.02 * self.w) / 6.0;
        let osc_width = if t_max > 0.0 {
            2.0 * PI / (8.0 * t_max)
        } else {
            f64::INFINITY
        };
        let dnu = res_width.min(osc_width).min(lam / 64.0);
        let n_panels = (lam / dnu).ceil() as usize;
        let mut grid = Vec::with_capacity(4 * n_panels);
        for k in 0..n_panels {
            let a = lam * k as f64 / n_panels as f64;
            let b = lam * (k + 1) as f64 / n_panels as f64;
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, wt) in GX.iter().zip(GW.iter()) {
                grid.push((mid + half * x, wt * half));
            }
        }
        grid
    }

    fn accumulate(
        &self,
        acc: &mut [f64; 3],
        nu: f64,
        weight: f64,
        phi1: Complex64,
        phi2: Complex64,
    ) {
        let (c2, s2, cs) = angle_weights(self.psi);
        let w1 = self.bath_weight(&self.bath1, nu) * phi1.norm_sqr();
        let w2 = self.bath_weight(&self.bath2, nu) * phi2.norm_sqr();
        let scale = weight / PI;
        acc[0] += scale * cs * (w1 - w2);
        acc[1] += scale * (c2 * w1 + s2 * w2);
        acc[2] += scale * (s2 * w1 + c2 * w2);
    }

    fn initial_at(&self, t: f64) -> f64 {
        match self.backend {
            GreensBackend::StrictClosedForm => {
                coherence_initial_strong(self.w, self.psi, self.bath1.gamma, self.bath2.gamma, t)
            }
            GreensBackend::FiniteBandwidth => {
                let bracket = |j: usize, gamma: f64| match &self.tables[j] {
                    Some(tbl) => {
                        let (g, gd) = (tbl.table.greens(t), tbl.table.greens_deriv(t));
                        gd * gd + self.w * self.w * g * g
                    }
                    None => {
                        let g = greens::damped_sinc(gamma, self.w * self.w, t);
                        let gd = greens::damped_sinc_deriv(gamma, self.w * self.w, t);
                        gd * gd + self.w * self.w * g * g
                    }
                };
                (2.0 * self.psi).sin() / (4.0 * self.w)
                    * (bracket(0, self.bath1.gamma) - bracket(1, self.bath2.gamma))
            }
        }
    }

    /// Evaluate the transient correlators at the given (ascending) times.
    pub fn series(&self, times: &[f64]) -> Result<Vec<TransientPoint>> {
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Invalid(
                "transient series needs ascending times".into(),
            ));
        }
        let t_max = times.last().copied().unwrap_or(0.0);
        let grid = self.nu_grid(t_max);
        let mut acc = vec![[0.0f64; 3]; times.len()];
        match self.backend {
            GreensBackend::StrictClosedForm => {
                for &(nu, wt) in &grid {
                    for (i, &t) in times.iter().enumerate() {
                        let phi1 = self.phi_strict(&self.bath1, nu, t);
                        let phi2 = self.phi_strict(&self.bath2, nu, t);
                        self.accumulate(&mut acc[i], nu, wt, phi1, phi2);
                    }
                }
            }
            GreensBackend::FiniteBandwidth => {
                // one cumulative Filon sweep over the sampled G panels per ν;
                // an uncoupled bath uses its exact undamped Φ instead
                let phi_of = |j: usize, bath: &BathSpec, nu: f64| -> Vec<Complex64> {
                    match &self.tables[j] {
                        Some(tbl) => {
                            let panel = tbl.sweep.panel_width();
                            let checkpoints: Vec<(usize, f64)> = times
                                .iter()
                                .map(|&t| {
                                    let k = (t / panel).floor() as usize;
                                    (k, (t - k as f64 * panel) / panel)
                                })
                                .collect();
                            tbl.sweep.transform(nu, &checkpoints)
                        }
                        None => times
                            .iter()
                            .map(|&t| self.phi_strict(bath, nu, t))
                            .collect(),
                    }
                };
                for &(nu, wt) in &grid {
                    let phi1 = phi_of(0, &self.bath1, nu);
                    let phi2 = phi_of(1, &self.bath2, nu);
                    for i in 0..times.len() {
                        self.accumulate(&mut acc[i], nu, wt, phi1[i], phi2[i]);
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(times.len());
        for (i, &t) in times.iter().enumerate() {
            out.push(TransientPoint {
                t,
                initial: self.initial_at(t),
                noise: acc[i][0],
                noise_diag: (acc[i][1], acc[i][2]),
            });
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Direct-quadrature evaluators (independent of the residue closed forms)
// ---------------------------------------------------------------------------

/// Direct numerical integration of the defining frequency integrals of F, H
/// and J, from the vacuum/thermal split of the Bose factor plus Filon
/// quadrature with inverse-power tails. These never touch the residue route:
/// they are the T = 0 evaluation path and the oracle the closed forms are
/// validated against.
pub mod quadrature {
    use super::*;

    fn thermal_upper(temperature: f64, scale: f64) -> f64 {
        60.0 * temperature + 10.0 * scale
    }

    /// F(τ) = (γ/π)∫₀^∞ (ω/D)[e^{−iωτ} + 2n(ω)cos ωτ] dω,
    /// D = (ω²−W²)² + ω²γ².
    pub fn f_by_quadrature(
        gamma: f64,
        w: f64,
        temperature: f64,
        tau: f64,
        tol: QuadTol,
    ) -> Result<Complex64> {
        let d = move |om: f64| (om * om - w * w).powi(2) + (om * gamma).powi(2);
        let vac = move |om: f64| Complex64::new(gamma / PI * om / d(om), 0.0);
        let x_split = 12.0 * w.max(gamma);
        let tails = [
            (3.0, Complex64::new(gamma / PI, 0.0)),
            (
                5.0,
                Complex64::new(gamma / PI * (2.0 * w * w - gamma * gamma), 0.0),
            ),
        ];
        let mut value = quad::oscillatory_semi_infinite(&vac, 0.0, -tau, x_split, &tails, tol)?;
        if temperature > 0.0 {
            let th = move |om: f64| {
                let n = 1.0 / (om / temperature).exp_m1();
                Complex64::new(2.0 * gamma / PI * om * n / d(om), 0.0)
            };
            let upper = thermal_upper(temperature, w);
            value += 0.5
                * (quad::oscillatory(&th, 1e-13, upper, tau, tol)?
                    + quad::oscillatory(&th, 1e-13, upper, -tau, tol)?);
        }
        Ok(value)
    }

    /// H(τ) = (γ/π)∫₀^∞ (ω³/D)[e^{−iωτ} + 2n(ω)cos ωτ] dω, τ > 0.
    pub fn h_by_quadrature(
        gamma: f64,
        w: f64,
        temperature: f64,
        tau: f64,
        tol: QuadTol,
    ) -> Result<Complex64> {
        if tau <= 0.0 {
            return Err(Error::Domain(
                "strict-Ohmic H by quadrature needs τ > 0 (log divergence at coincidence)".into(),
            ));
        }
        let d = move |om: f64| (om * om - w * w).powi(2) + (om * gamma).powi(2);
        let vac = move |om: f64| Complex64::new(gamma / PI * om.powi(3) / d(om), 0.0);
        let x_split = 12.0 * w.max(gamma);
        // ω³/D = 1/ω + (2W²−γ²)/ω³ + O(ω⁻⁵)
        let tails = [
            (1.0, Complex64::new(gamma / PI, 0.0)),
            (
                3.0,
                Complex64::new(gamma / PI * (2.0 * w * w - gamma * gamma), 0.0),
            ),
        ];
        let mut value = quad::oscillatory_semi_infinite(&vac, 0.0, -tau, x_split, &tails, tol)?;
        if temperature > 0.0 {
            let th = move |om: f64| {
                let n = 1.0 / (om / temperature).exp_m1();
                Complex64::new(2.0 * gamma / PI * om.powi(3) * n / d(om), 0.0)
            };
            let upper = thermal_upper(temperature, w);
            value += 0.5
                * (quad::oscillatory(&th, 1e-13, upper, tau, tol)?
                    + quad::oscillatory(&th, 1e-13, upper, -tau, tol)?);
        }
        Ok(value)
    }

    /// J(τ) = (γ/π)∫ ω e^{iωτ} n(ω)/[f(ω)g(ω)] dω with
    /// f = (ω−iA)²−Ω_a², g = (ω+iB)²−Ω_b².
    #[allow(clippy::too_many_arguments)]
    pub fn j_by_quadrature(
        gamma: f64,
        temperature: f64,
        a: f64,
        om_a: f64,
        b: f64,
        om_b: f64,
        tau: f64,
        tol: QuadTol,
    ) -> Result<Complex64> {
        let f_at = move |om: Complex64| (om - I * a) * (om - I * a) - om_a * om_a;
        let g_at = move |om: Complex64| (om + I * b) * (om + I * b) - om_b * om_b;
        // vacuum part: (γ/π)∫₀^∞ ω e^{−iωτ}/(f(−ω)g(−ω)) dω
        let vac = move |om: f64| {
            let z = Complex64::new(-om, 0.0);
            gamma / PI * om / (f_at(z) * g_at(z))
        };
        let x_split = 12.0 * om_a.max(om_b).max(a).max(b);
        // ω/(f(−ω)g(−ω)) = ω⁻³ − 2i(A−B)ω⁻⁴ + O(ω⁻⁵)
        let tails = [
            (3.0, Complex64::new(gamma / PI, 0.0)),
            (4.0, Complex64::new(0.0, -2.0 * (a - b) * gamma / PI)),
        ];
        let mut value = quad::oscillatory_semi_infinite(&vac, 0.0, -tau, x_split, &tails, tol)?;
        if temperature > 0.0 {
            let th_p = move |om: f64| {
                let z = Complex64::new(om, 0.0);
                let n = 1.0 / (om / temperature).exp_m1();
                gamma / PI * om * n / (f_at(z) * g_at(z))
            };
            let th_m = move |om: f64| {
                let z = Complex64::new(-om, 0.0);
                let n = 1.0 / (om / temperature).exp_m1();
                gamma / PI * om * n / (f_at(z) * g_at(z))
            };
            let upper = thermal_upper(temperature, om_a.max(om_b));
            value += quad::oscillatory(&th_p, 1e-13, upper, tau, tol)?;
            value += quad::oscillatory(&th_m, 1e-13, upper, -tau, tol)?;
        }
        Ok(value)
    }
}
