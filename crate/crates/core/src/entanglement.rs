//! Perturbative early-time growth of bath-mediated coherence between the
//! normal modes, for both baths at zero temperature.
//!
//! The second-order interaction-picture state gives the coherence
//! ⟨Ψ(t)|q₊(t)q₋(t)|Ψ(t)⟩ as double time integrals of the bath-difference
//! vacuum kernel against free-oscillator phases, plus the first-order
//! counterterm cross term δΩ₊₋. Everything is exactly linear in (σ₁ − σ₂).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit;
use crate::model::BathSpec;
use crate::quad::{self, QuadTol};

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

fn require_cold(bath: &BathSpec) -> Result<()> {
    if bath.temperature != 0.0 {
        return Err(Error::Invalid(
            "the perturbative coherence is derived for both baths at T = 0".into(),
        ));
    }
    Ok(())
}

/// ∫₀^Λ ω e^{−iωδ} dω, series-protected near δ = 0.
fn ramp_transform(lam: f64, delta: f64) -> Complex64 {
    let theta = lam * delta;
    if theta.abs() < 0.5 {
        // Λ² Σ_n (−iθ)^n / (n!(n+2))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term / 2.0;
        for n in 1..28 {
            term *= Complex64::new(0.0, -theta) / n as f64;
            sum += term / (n + 2) as f64;
        }
        sum * lam * lam
    } else {
        let b = Complex64::new(0.0, -delta);
        (b * lam).exp() * (lam / b - 1.0 / (b * b)) + 1.0 / (b * b)
    }
}

/// Vacuum bath-difference kernel ⟨b₊(t₁) b₋(t₂)⟩ at dt = t₁ − t₂:
/// K(dt) = (sinψ cosψ/π)[γ₁∫₀^{Λ₁} − γ₂∫₀^{Λ₂}] ω e^{−iω·dt} dω.
///
/// Vanishes identically for σ₁ ≡ σ₂ and at ψ ∈ {0, π/2};
/// K(0) = (γ₁Λ₁² − γ₂Λ₂²) sinψ cosψ / 2π.
pub fn bath_difference_kernel(
    bath1: &BathSpec,
    bath2: &BathSpec,
    psi: f64,
    dt: f64,
) -> Result<Complex64> {
    require_cold(bath1)?;
    require_cold(bath2)?;
    let (sn, cs) = psi.sin_cos();
    Ok(sn * cs / PI
        * (bath1.gamma * ramp_transform(bath1.lambda_cut, dt)
            - bath2.gamma * ramp_transform(bath2.lambda_cut, dt)))
}

/// E₁(x; t) = ∫₀ᵗ e^{ixu} du.
fn e1(x: f64, t: f64) -> Complex64 {
    if x.abs() * t < 1e-8 {
        Complex64::new(t, 0.5 * x * t * t)
    } else {
        ((Complex64::new(0.0, x * t)).exp() - 1.0) / Complex64::new(0.0, x)
    }
}

/// D₂(a, b; t) = ∫₀ᵗ dt₂ e^{iat₂} ∫₀^{t₂} dt₁ e^{ibt₁}.
fn d2(a: f64, b: f64, t: f64) -> Complex64 {
    if b.abs() * t < 1e-8 {
        // inner integral ≈ t₂(1 + ibt₂/2)
        if a.abs() * t < 1e-8 {
            return Complex64::new(0.5 * t * t, (a + b) * t * t * t / 6.0);
        }
        let ia = Complex64::new(0.0, a);
        let eat = (ia * t).exp();
        let base = t * eat / ia - (eat - 1.0) / (ia * ia);
        let corr = Complex64::new(0.0, 0.5 * b)
            * (t * t * eat / ia - 2.0 * t * eat / (ia * ia) + 2.0 * (eat - 1.0) / (ia * ia * ia));
        return base + corr;
    }
    (e1(a + b, t) - e1(a, t)) / Complex64::new(0.0, b)
}

/// The two pieces of the second-order coherence.
#[derive(Clone, Copy, Debug)]
pub struct CoherenceParts {
    /// Bath-mediated double time integral of the vacuum difference kernel
    /// (the entangling contribution of the second-order state).
    pub bath_mediated: f64,
    /// First-order cross term of the counterterm matrix δΩ₊₋, cancelling the
    /// bandwidth-divergent part of the bath-mediated piece.
    pub counterterm: f64,
}

impl CoherenceParts {
    pub fn total(&self) -> f64 {
        self.bath_mediated + self.counterterm
    }
}

/// Second-order coherence ⟨Ψ(t)|q₊(t)q₋(t)|Ψ(t)⟩ split into its pieces.
///
/// Per-bath frequency integrals (the result is exactly linear in each σ_j):
///   A(t) = −e^{−i(Ω₊+Ω₋)t}/(4Ω₊Ω₋) Σ_j ±(sinψcosψ/π) γ_j ∫₀^{Λ_j} ω
///          [D₂(Ω₋−ω, Ω₊+ω) + D₂(Ω₊−ω, Ω₋+ω)] dω,
///   C(t) = +e^{i(Ω₊−Ω₋)t}/(4Ω₊Ω₋) Σ_j ±(…) γ_j ∫₀^{Λ_j} ω
///          E₁(−Ω₊−ω) E₁(Ω₋+ω) dω,
/// bath_mediated = 2Re A + 2Re C, and
/// counterterm = −δΩ₊₋ sin²(W̄t)/(2Ω₊Ω₋W̄), W̄ = (Ω₊+Ω₋)/2.
pub fn second_order_coherence_parts(
    w: f64,
    delta: f64,
    psi: f64,
    bath1: &BathSpec,
    bath2: &BathSpec,
    t: f64,
) -> Result<CoherenceParts> {
    require_cold(bath1)?;
    require_cold(bath2)?;
    let (op, om) = (w - 0.5 * delta, w + 0.5 * delta);
    if op <= 0.0 || om <= 0.0 {
        return Err(Error::Invalid(
            "need positive renormalized frequencies".into(),
        ));
    }
    let (sn, cs) = psi.sin_cos();
    let tol = QuadTol {
        abs: 1e-12,
        rel: 1e-10,
    };
    let mut acc_a = CZERO;
    let mut acc_c = CZERO;
    for (bath, sign) in [(bath1, 1.0), (bath2, -1.0)] {
        if bath.gamma == 0.0 {
            continue;
        }
        let fa =
            |omega: f64| omega * (d2(om - omega, op + omega, t) + d2(op - omega, om + omega, t));
        let fc = |omega: f64| omega * e1(-op - omega, t) * e1(om + omega, t);
        let pref = sign * sn * cs / PI * bath.gamma;
        acc_a += pref * quad::adaptive(&fa, 0.0, bath.lambda_cut, tol)?;
        acc_c += pref * quad::adaptive(&fc, 0.0, bath.lambda_cut, tol)?;
    }
    let phase_a = Complex64::new(0.0, -(op + om) * t).exp();
    let phase_c = Complex64::new(0.0, (op - om) * t).exp();
    let term_a = -phase_a / (4.0 * op * om) * acc_a;
    let term_c = phase_c / (4.0 * op * om) * acc_c;
    let bath_mediated = 2.0 * (term_a + term_c).re;

    let d_pm =
        cs * sn * 2.0 / PI * (bath1.gamma * bath1.lambda_cut - bath2.gamma * bath2.lambda_cut);
    let wbar = 0.5 * (op + om);
    let counterterm = -d_pm * (wbar * t).sin().powi(2) / (2.0 * op * om * wbar);
    Ok(CoherenceParts {
        bath_mediated,
        counterterm,
    })
}

/// Total second-order coherence (bath-mediated plus counterterm cross term).
/// Real up to round-off; returned as complex for uniformity with the other
/// coherence evaluators.
pub fn second_order_coherence(
    w: f64,
    delta: f64,
    psi: f64,
    bath1: &BathSpec,
    bath2: &BathSpec,
    t: f64,
) -> Result<Complex64> {
    let parts = second_order_coherence_parts(w, delta, psi, bath1, bath2, t)?;
    Ok(Complex64::new(parts.total(), 0.0))
}

/// Second-order coherence on a time grid with its early-time power-law fit.
#[derive(Clone, Debug)]
pub struct PerturbativeCoherence {
    pub t_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Fitted exponent of |coherence| ∝ t^p over the grid.
    pub growth_exponent: f64,
}

/// Evaluate [`second_order_coherence`] on a grid and fit the growth exponent.
pub fn perturbative_growth(
    w: f64,
    delta: f64,
    psi: f64,
    bath1: &BathSpec,
    bath2: &BathSpec,
    t_grid: &[f64],
) -> Result<PerturbativeCoherence> {
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        values.push(second_order_coherence(w, delta, psi, bath1, bath2, t)?);
    }
    let mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let growth_exponent = if mags.iter().all(|&m| m > 0.0) {
        fit::power_fit(t_grid, &mags).0
    } else {
        f64::NAN
    };
    Ok(PerturbativeCoherence {
        t_grid: t_grid.to_vec(),
        values,
        growth_exponent,
    })
}
