//! Spectral densities, complex self-energies χ(ω), Bose occupation, and the
//! thermal noise kernel of each bath.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{BathSpec, CutoffFamily};
use crate::quad::{self, QuadTol};

/// Complex self-energy χ(ω) split into real (Lamb shift) and imaginary
/// (spectral density) parts, both in squared-frequency units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfEnergy {
    pub re: f64,
    pub im: f64,
}

/// Spectral density σ(ω) = Im χ(ω). Odd in ω for every family.
pub fn spectral_density(bath: &BathSpec, omega: f64) -> f64 {
    let g = bath.gamma;
    let lam = bath.lambda_cut;
    match bath.cutoff {
        CutoffFamily::SharpCutoff => {
            if omega.abs() < lam {
                g * omega
            } else {
                0.0
            }
        }
        CutoffFamily::Drude => g * omega * lam * lam / (lam * lam + omega * omega),
        CutoffFamily::StrictOhmic => g * omega,
    }
}

/// Self-energy χ(ω) on the real-frequency axis.
///
/// Sharp cutoff requires |ω| < Λ (the Kramers-Kronig log diverges at |ω| = Λ).
pub fn self_energy(bath: &BathSpec, omega: f64) -> Result<SelfEnergy> {
    let g = bath.gamma;
    let lam = bath.lambda_cut;
    match bath.cutoff {
        CutoffFamily::SharpCutoff => {
            if omega.abs() >= lam {
                return Err(Error::Domain(format!(
                    "sharp-cutoff self-energy needs |omega| < lambda_cut ({lam}), got {omega}"
                )));
            }
            let re = -2.0 * g * lam / PI
                - omega * g / PI * ((lam - omega).abs() / (lam + omega).abs()).ln();
            Ok(SelfEnergy { re, im: g * omega })
        }
        CutoffFamily::Drude => {
            let den = lam * lam + omega * omega;
            Ok(SelfEnergy {
                re: -g * lam * lam * lam / den,
                im: g * omega * lam * lam / den,
            })
        }
        CutoffFamily::StrictOhmic => Ok(SelfEnergy {
            re: -2.0 * g * lam / PI,
            im: g * omega,
        }),
    }
}

/// Laplace-domain self-energy Σ̃(s) = −(1/π)∫ σ(ω′)/(ω′ + is) dω′ continued
/// to complex s. On the contour s = iω + 0⁺ this reduces to χ(ω).
pub fn self_energy_laplace(bath: &BathSpec, s: Complex64) -> Complex64 {
    let g = bath.gamma;
    let lam = bath.lambda_cut;
    match bath.cutoff {
        CutoffFamily::StrictOhmic => g * s - Complex64::new(2.0 * g * lam / PI, 0.0),
        CutoffFamily::Drude => -g * lam * lam / (lam + s),
        CutoffFamily::SharpCutoff => {
            // −(γ/π) [2Λ − i s ln((Λ + is)/(is − Λ))]; step off the branch
            // points s = ±iΛ where the log diverges (G itself tends to 0)
            let mut s = s;
            let is0 = Complex64::new(0.0, 1.0) * s;
            if (is0 - lam).norm() < 1e-13 * lam || (is0 + lam).norm() < 1e-13 * lam {
                s += Complex64::new(1e-12 * lam, 0.0);
            }
            let is = Complex64::new(0.0, 1.0) * s;
            let log = ((lam + is) / (is - lam)).ln();
            let mut val =
                -(g / PI) * (Complex64::new(2.0 * lam, 0.0) - Complex64::new(0.0, 1.0) * s * log);
            // the bath continuum cuts the imaginary axis on |Im s| < Λ; for
            // Re s < 0 continue analytically onto the resonance sheet so pole
            // finding and residue circles see a single-valued function
            if s.re < 0.0 && s.im.abs() < lam {
                val += 2.0 * g * s;
            }
            val
        }
    }
}

/// d Σ̃/ds, used by the pole Newton iteration.
pub fn self_energy_laplace_deriv(bath: &BathSpec, s: Complex64) -> Complex64 {
    let g = bath.gamma;
    let lam = bath.lambda_cut;
    match bath.cutoff {
        CutoffFamily::StrictOhmic => Complex64::new(g, 0.0),
        CutoffFamily::Drude => g * lam * lam / ((lam + s) * (lam + s)),
        CutoffFamily::SharpCutoff => {
            let h = 1e-7 * (1.0 + s.norm());
            (self_energy_laplace(bath, s + h) - self_energy_laplace(bath, s - h)) / (2.0 * h)
        }
    }
}

/// Bose occupation n(ω) = 1/(e^{ω/T} − 1); at T = 0 the limit −Θ(−ω).
///
/// ω = 0 with T > 0 is a pole and rejected.
pub fn occupation(temperature: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::Domain("occupation has a pole at omega = 0".into()));
    }
    if temperature == 0.0 {
        return Ok(if omega < 0.0 { -1.0 } else { 0.0 });
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// σ(ω)n(ω), continuous through ω = 0 (value γT there).
fn sigma_n(bath: &BathSpec, omega: f64) -> f64 {
    if omega == 0.0 {
        return bath.gamma * bath.temperature;
    }
    spectral_density(bath, omega) * occupation(bath.temperature, omega).unwrap()
}

/// Thermal noise kernel ⟨⟨ξ(t+dt) ξ(t)⟩⟩ = (1/π) ∫ σ(ω) n(ω) e^{iω·dt} dω.
pub fn noise_kernel(bath: &BathSpec, dt: f64) -> Result<Complex64> {
    noise_kernel_with_tol(bath, dt, QuadTol::default())
}

/// [`noise_kernel`] with explicit quadrature tolerances.
pub fn noise_kernel_with_tol(bath: &BathSpec, dt: f64, tol: QuadTol) -> Result<Complex64> {
    if bath.gamma == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let lam = bath.lambda_cut;
    let t_temp = bath.temperature;
    match bath.cutoff {
        CutoffFamily::SharpCutoff => {
            let f = |w: f64| Complex64::new(sigma_n(bath, w) / PI, 0.0);
            // split at 0 where n switches branch
            let lo = quad::oscillatory(&f, -lam, 0.0, dt, tol)?;
            let hi = quad::oscillatory(&f, 0.0, lam, dt, tol)?;
            Ok(lo + hi)
        }
        CutoffFamily::Drude => {
            if dt == 0.0 && t_temp >= 0.0 {
                return Err(Error::Domain(
                    "Drude noise kernel diverges logarithmically at dt = 0; \
                     evaluate at |dt| > 0 or use a sharp cutoff"
                        .into(),
                ));
            }
            // vacuum part has a 1/ω oscillatory tail: σ(ω)(−Θ(−ω)) ~ γΛ²/ω
            let g = bath.gamma;
            let f = |w: f64| Complex64::new(sigma_n(bath, w) / PI, 0.0);
            let x_split = (20.0 * lam).max(40.0 * t_temp);
            let tail2 = Complex64::new(-g * lam * lam / PI, 0.0);
            // ∫_{-∞}^{X}: mirror to ω → −ω so the tail helper applies
            let fm = |w: f64| Complex64::new(sigma_n(bath, -w) / PI, 0.0);
            let lo = quad::oscillatory_semi_infinite(&fm, 0.0, -dt, x_split, &[(1.0, tail2)], tol)?;
            let hi = quad::oscillatory_semi_infinite(
                &f,
                0.0,
                dt,
                x_split,
                &[], // exponentially damped by n(ω) for ω > 0
                tol,
            )?;
            Ok(lo + hi)
        }
        CutoffFamily::StrictOhmic => Err(Error::Domain(
            "strict-Ohmic noise kernel is bandwidth-divergent; use a finite cutoff family".into(),
        )),
    }
}
