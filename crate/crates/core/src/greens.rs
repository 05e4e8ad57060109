//! Laplace-domain matrix G(s) and time-domain Green's functions 𝔾(t) of the
//! coupled Langevin equations, in closed form where a regime permits and by
//! numerical Bromwich inversion in general.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{BathSpec, Mat2, NormalModeBasis};
use crate::quad::{self, QuadTol};
use crate::spectral::{self_energy_laplace, self_energy_laplace_deriv};

/// 2×2 complex matrix, row-major.
pub type CMat2 = [[Complex64; 2]; 2];

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

fn cmat_zero() -> CMat2 {
    [[CZERO; 2]; 2]
}

/// Internal scalars of the Laplace-domain inverse propagator at one point s.
#[derive(Clone, Copy, Debug)]
pub struct LaplaceScalars {
    pub w2_plus: Complex64,
    pub w2_minus: Complex64,
    pub theta2: Complex64,
    pub m2: Complex64,
    pub rho: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Evaluator of the 2×2 Laplace-domain matrix G(s) for two renormalized
/// normal modes coupled to two baths through the angle ψ.
#[derive(Clone, Debug)]
pub struct LaplaceMatrix {
    om2_plus: f64,
    om2_minus: f64,
    psi: f64,
    bath1: BathSpec,
    bath2: BathSpec,
    shift1: f64,
    shift2: f64,
}

impl LaplaceMatrix {
    /// Standard construction: counterterms δΩ_j = 2γ_jΛ_j/π per bath, with the
    /// basis frequencies read as the renormalized Ω_{R±}.
    pub fn new(basis: &NormalModeBasis, bath1: &BathSpec, bath2: &BathSpec) -> Self {
        Self::with_shifts(
            basis,
            bath1,
            bath2,
            bath1.counterterm(),
            bath2.counterterm(),
        )
    }

    /// Construction with explicit counterterm shifts (testing and
    /// renormalization studies).
    pub fn with_shifts(
        basis: &NormalModeBasis,
        bath1: &BathSpec,
        bath2: &BathSpec,
        shift1: f64,
        shift2: f64,
    ) -> Self {
        LaplaceMatrix {
            om2_plus: basis.omega_plus * basis.omega_plus,
            om2_minus: basis.omega_minus * basis.omega_minus,
            psi: basis.psi_angle,
            bath1: *bath1,
            bath2: *bath2,
            shift1,
            shift2,
        }
    }

    /// Renormalized per-bath kernels δΩ_j + Σ̃_j(s).
    fn bath_kernels(&self, s: Complex64) -> (Complex64, Complex64) {
        (
            self.shift1 + self_energy_laplace(&self.bath1, s),
            self.shift2 + self_energy_laplace(&self.bath2, s),
        )
    }

    /// Scalars (W±², Θ², M², ρ, α, β) at s.
    pub fn scalars(&self, s: Complex64) -> LaplaceScalars {
        let (k1, k2) = self.bath_kernels(s);
        let (sn, cs) = self.psi.sin_cos();
        let (c2, s2) = (cs * cs, sn * sn);
        let w2_plus = self.om2_plus + c2 * k1 + s2 * k2;
        let w2_minus = self.om2_minus + s2 * k1 + c2 * k2;
        let theta2 = cs * sn * (k1 - k2);
        let m2 = s * s + 0.5 * (w2_plus + w2_minus);
        let diff = w2_minus - w2_plus;
        let rho = (diff * diff + 4.0 * theta2 * theta2).sqrt();
        let (alpha, beta) = if rho.norm() > 0.0 {
            (diff / rho, 2.0 * theta2 / rho)
        } else {
            (CZERO, CZERO)
        };
        LaplaceScalars {
            w2_plus,
            w2_minus,
            theta2,
            m2,
            rho,
            alpha,
            beta,
        }
    }

    /// G⁻¹(s).
    pub fn inv_eval(&self, s: Complex64) -> CMat2 {
        let sc = self.scalars(s);
        [
            [s * s + sc.w2_plus, sc.theta2],
            [sc.theta2, s * s + sc.w2_minus],
        ]
    }

    /// G(s) through the projector decomposition; falls back to direct 2×2
    /// inversion where ρ(s) is too small to define α, β.
    pub fn eval(&self, s: Complex64) -> CMat2 {
        let sc = self.scalars(s);
        let scale = sc.m2.norm() + sc.w2_plus.norm() + sc.w2_minus.norm();
        if sc.rho.norm() <= 1e-13 * scale {
            // degenerate: direct inversion of G⁻¹
            let m = self.inv_eval(s);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            return [
                [m[1][1] / det, -m[0][1] / det],
                [-m[1][0] / det, m[0][0] / det],
            ];
        }
        let half_rho = 0.5 * sc.rho;
        let d_plus = sc.m2 - half_rho;
        let d_minus = sc.m2 + half_rho;
        let (a, b) = (sc.alpha, sc.beta);
        // ½(1±R)/(M² ∓ ρ/2) with R = [[α, −β], [−β, −α]]
        let mut g = cmat_zero();
        g[0][0] = 0.5 * ((1.0 + a) / d_plus + (1.0 - a) / d_minus);
        g[1][1] = 0.5 * ((1.0 - a) / d_plus + (1.0 + a) / d_minus);
        let off = 0.5 * (-b / d_plus + b / d_minus);
        g[0][1] = off;
        g[1][0] = off;
        g
    }

    /// det G⁻¹(s).
    pub fn det_inv(&self, s: Complex64) -> Complex64 {
        let m = self.inv_eval(s);
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// d/ds det G⁻¹(s).
    pub fn det_inv_deriv(&self, s: Complex64) -> Complex64 {
        let m = self.inv_eval(s);
        let dk1 = self_energy_laplace_deriv(&self.bath1, s);
        let dk2 = self_energy_laplace_deriv(&self.bath2, s);
        let (sn, cs) = self.psi.sin_cos();
        let (c2, s2) = (cs * cs, sn * sn);
        let d00 = 2.0 * s + c2 * dk1 + s2 * dk2;
        let d11 = 2.0 * s + s2 * dk1 + c2 * dk2;
        let d01 = cs * sn * (dk1 - dk2);
        d00 * m[1][1] + m[0][0] * d11 - 2.0 * m[0][1] * d01
    }

    fn scale(&self) -> f64 {
        let freq = self.om2_plus.max(self.om2_minus).sqrt();
        freq.max(self.bath1.gamma).max(self.bath2.gamma)
    }

    fn is_rational(&self) -> bool {
        use crate::model::CutoffFamily::*;
        !matches!(self.bath1.cutoff, SharpCutoff) && !matches!(self.bath2.cutoff, SharpCutoff)
    }

    /// Degree of det G⁻¹ as a polynomial (after clearing Drude denominators).
    fn poly_degree(&self) -> usize {
        use crate::model::CutoffFamily::*;
        let extra = |b: &BathSpec| usize::from(matches!(b.cutoff, Drude));
        4 + extra(&self.bath1) + extra(&self.bath2)
    }

    /// All roots of det G⁻¹ for the rational cutoff families, via sampling at
    /// scaled roots of unity and a companion-matrix eigensolve.
    fn polynomial_roots(&self) -> Result<Vec<Complex64>> {
        use crate::model::CutoffFamily::Drude;
        let deg = self.poly_degree();
        let n = deg + 1;
        let sigma = self
            .scale()
            .max(if self.bath1.cutoff == Drude {
                self.bath1.lambda_cut
            } else {
                0.0
            })
            .max(if self.bath2.cutoff == Drude {
                self.bath2.lambda_cut
            } else {
                0.0
            });
        let cleared = |s: Complex64| {
            let mut v = self.det_inv(s);
            if self.bath1.cutoff == Drude {
                v *= self.bath1.lambda_cut + s;
            }
            if self.bath2.cutoff == Drude {
                v *= self.bath2.lambda_cut + s;
            }
            v
        };
        // DFT inversion of the Vandermonde system at s_j = σ e^{2πij/n}
        let mut coeffs = vec![CZERO; n];
        let samples: Vec<Complex64> = (0..n)
            .map(|j| cleared(sigma * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)))
            .collect();
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = CZERO;
            for (j, v) in samples.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64);
            }
            *c = acc / n as f64 / sigma.powi(k as i32);
        }
        let lead = coeffs[deg];
        if lead.norm() < 1e-10 {
            return Err(Error::Numerics(
                "degenerate leading coefficient in pole scan".into(),
            ));
        }
        // companion matrix of the monic polynomial
        let mut comp = nalgebra::DMatrix::<f64>::zeros(deg, deg);
        for k in 0..deg {
            let c = coeffs[k] / lead;
            comp[(k, deg - 1)] = -c.re;
            if k > 0 {
                comp[(k, k - 1)] = 1.0;
            }
        }
        // fill the subdiagonal for row 0 handled above; rows already set
        let eig = comp.complex_eigenvalues();
        Ok(eig.iter().map(|z| Complex64::new(z.re, z.im)).collect())
    }

    fn newton_root(&self, seed: Complex64) -> Option<Complex64> {
        let mut s = seed;
        let tol = 1e-13 * (1.0 + self.scale());
        let det_scale = (1.0 + self.scale()).powi(4);
        for _ in 0..200 {
            let f = self.det_inv(s);
            // the seed may already sit on a (possibly multiple) root
            if f.norm() < 1e-14 * det_scale {
                return Some(s);
            }
            let df = self.det_inv_deriv(s);
            if df.norm() == 0.0 {
                return None;
            }
            let step = f / df;
            s -= step;
            if !s.re.is_finite() || !s.im.is_finite() {
                return None;
            }
            if step.norm() < tol {
                return Some(s);
            }
        }
        None
    }

    /// Root scan of det G⁻¹: companion-matrix roots for the rational cutoff
    /// families; Newton iterations seeded at the undamped poles ±iΩ_{R±} plus
    /// a positive real-axis sign sweep for the sharp cutoff.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let scale = self.scale();
        if self.is_rational() {
            let mut roots = self.polynomial_roots()?;
            // drop the cleared Drude bath poles at s = −Λ
            use crate::model::CutoffFamily::Drude;
            for b in [&self.bath1, &self.bath2] {
                if b.cutoff == Drude {
                    if let Some(idx) = roots
                        .iter()
                        .position(|r| (r + b.lambda_cut).norm() < 1e-6 * (scale + b.lambda_cut))
                    {
                        roots.swap_remove(idx);
                    }
                }
            }
            return Ok(roots);
        }
        let mut roots: Vec<Complex64> = Vec::new();
        let op = self.om2_plus.sqrt();
        let om = self.om2_minus.sqrt();
        let seeds = [
            Complex64::new(0.0, op),
            Complex64::new(0.0, -op),
            Complex64::new(0.0, om),
            Complex64::new(0.0, -om),
        ];
        for seed in seeds {
            if let Some(r) = self.newton_root(seed) {
                if !roots.iter().any(|q| (q - r).norm() < 1e-8 * scale.max(1.0)) {
                    roots.push(r);
                }
            }
        }
        // tachyonic instabilities show up as real positive roots
        let xs: Vec<f64> = (0..200).map(|i| scale * 1e-3 * (1.07f64).powi(i)).collect();
        let mut prev = self.det_inv(Complex64::new(xs[0], 0.0)).re;
        for pair in xs.windows(2) {
            let val = self.det_inv(Complex64::new(pair[1], 0.0)).re;
            if prev.signum() != val.signum() {
                if let Some(r) = self.newton_root(Complex64::new(0.5 * (pair[0] + pair[1]), 0.0)) {
                    if !roots.iter().any(|q| (q - r).norm() < 1e-8 * scale.max(1.0)) {
                        roots.push(r);
                    }
                }
            }
            prev = val;
        }
        Ok(roots)
    }
}

/// Branch-safe e^{−γt/2} sin(W_eff t)/W_eff with W_eff² = w2 − γ²/4, continued
/// through critical damping (sinh branch for w2 < γ²/4).
pub fn damped_sinc(gamma: f64, w2: f64, t: f64) -> f64 {
    let disc = w2 - 0.25 * gamma * gamma;
    let env = (-0.5 * gamma * t).exp();
    let x2 = disc * t * t;
    if x2.abs() < 1e-6 {
        // sin(xt)/x ≈ t(1 − x²t²/6 + x⁴t⁴/120)
        env * t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else if disc > 0.0 {
        let w = disc.sqrt();
        env * (w * t).sin() / w
    } else {
        let k = (-disc).sqrt();
        env * (k * t).sinh() / k
    }
}

/// d/dt of [`damped_sinc`].
pub fn damped_sinc_deriv(gamma: f64, w2: f64, t: f64) -> f64 {
    let disc = w2 - 0.25 * gamma * gamma;
    let env = (-0.5 * gamma * t).exp();
    let x2 = disc * t * t;
    let cos_part = if x2.abs() < 1e-6 {
        env * (1.0 - x2 / 2.0 + x2 * x2 / 24.0)
    } else if disc > 0.0 {
        env * (disc.sqrt() * t).cos()
    } else {
        env * ((-disc).sqrt() * t).cosh()
    };
    cos_part - 0.5 * gamma * damped_sinc(gamma, w2, t)
}

/// Reflection matrix R(ψ) = [[cos 2ψ, sin 2ψ], [sin 2ψ, −cos 2ψ]].
fn reflection(psi: f64) -> Mat2 {
    let (s2, c2) = (2.0 * psi).sin_cos();
    [[c2, s2], [s2, -c2]]
}

/// Strong-coupling Δ=0 Green's function
/// 𝔾(t) = ½(G₁+G₂)·1 + ½(G₁−G₂)·R(ψ), G_i = e^{−γ_i t/2} sin(W_i t)/W_i.
pub fn greens_strong_delta0(w: f64, psi: f64, gamma1: f64, gamma2: f64, t: f64) -> Mat2 {
    let g1 = damped_sinc(gamma1, w * w, t);
    let g2 = damped_sinc(gamma2, w * w, t);
    assemble_delta0(g1, g2, psi)
}

/// Time derivative of [`greens_strong_delta0`].
pub fn greens_strong_delta0_deriv(w: f64, psi: f64, gamma1: f64, gamma2: f64, t: f64) -> Mat2 {
    let g1 = damped_sinc_deriv(gamma1, w * w, t);
    let g2 = damped_sinc_deriv(gamma2, w * w, t);
    assemble_delta0(g1, g2, psi)
}

fn assemble_delta0(g1: f64, g2: f64, psi: f64) -> Mat2 {
    let r = reflection(psi);
    let half_sum = 0.5 * (g1 + g2);
    let half_diff = 0.5 * (g1 - g2);
    [
        [half_sum + half_diff * r[0][0], half_diff * r[0][1]],
        [half_diff * r[1][0], half_sum + half_diff * r[1][1]],
    ]
}

/// One-bath case (γ₂ = 0, Δ = 0): one damped and one undamped mode.
pub fn greens_one_bath(w: f64, psi: f64, gamma1: f64, t: f64) -> Mat2 {
    greens_strong_delta0(w, psi, gamma1, 0.0, t)
}

/// Weak-coupling damping rates Γ_± = γ₁cos²ψ + γ₂sin²ψ, γ₂cos²ψ + γ₁sin²ψ.
pub fn weak_rates(psi: f64, gamma1: f64, gamma2: f64) -> (f64, f64) {
    let (sn, cs) = psi.sin_cos();
    (
        gamma1 * cs * cs + gamma2 * sn * sn,
        gamma2 * cs * cs + gamma1 * sn * sn,
    )
}

/// Weak-coupling interference kernel
/// h(t) = e^{−Γ₊t/2} cos(Ω₊t) − e^{−Γ₋t/2} cos(Ω₋t).
pub fn weak_h(w: f64, delta: f64, psi: f64, gamma1: f64, gamma2: f64, t: f64) -> f64 {
    let (gp, gm) = weak_rates(psi, gamma1, gamma2);
    let (op, om) = (w - 0.5 * delta, w + 0.5 * delta);
    (-0.5 * gp * t).exp() * (op * t).cos() - (-0.5 * gm * t).exp() * (om * t).cos()
}

/// Leading-order weak-coupling Green's function (Γ_± ≪ Ω_±, |Δ|):
/// 𝔾 = diag(g₊, g₋) + [(γ₂−γ₁) sin2ψ/(4WΔ)] h(t) · offdiag(1, 1).
///
/// The off-diagonal coefficient (γ₂−γ₁)sin2ψ/(4WΔ) comes from the residue
/// evaluation of the exact G₀₁(s) = −Θ²(s)/(d₊d₋) at the four resonance
/// poles, cross-checked against the Bromwich inversion.
pub fn greens_weak(w: f64, delta: f64, psi: f64, gamma1: f64, gamma2: f64, t: f64) -> Mat2 {
    let (gp, gm) = weak_rates(psi, gamma1, gamma2);
    let (op, om) = (w - 0.5 * delta, w + 0.5 * delta);
    let gplus = (-0.5 * gp * t).exp() * (op * t).sin() / op;
    let gminus = (-0.5 * gm * t).exp() * (om * t).sin() / om;
    let kappa = weak_off_coefficient(w, delta, psi, gamma1, gamma2);
    let off = kappa * weak_h(w, delta, psi, gamma1, gamma2, t);
    [[gplus, off], [off, gminus]]
}

/// Coefficient of h(t) on the off-diagonal of the weak-coupling 𝔾.
pub fn weak_off_coefficient(w: f64, delta: f64, psi: f64, gamma1: f64, gamma2: f64) -> f64 {
    (gamma2 - gamma1) * (2.0 * psi).sin() / (4.0 * w * delta)
}

/// Time derivative of [`greens_weak`].
pub fn greens_weak_deriv(w: f64, delta: f64, psi: f64, gamma1: f64, gamma2: f64, t: f64) -> Mat2 {
    let (gp, gm) = weak_rates(psi, gamma1, gamma2);
    let (op, om) = (w - 0.5 * delta, w + 0.5 * delta);
    let ep = (-0.5 * gp * t).exp();
    let em = (-0.5 * gm * t).exp();
    let dgp = ep * ((op * t).cos() - 0.5 * gp / op * (op * t).sin());
    let dgm = em * ((om * t).cos() - 0.5 * gm / om * (om * t).sin());
    let dh = ep * (-0.5 * gp * (op * t).cos() - op * (op * t).sin())
        - em * (-0.5 * gm * (om * t).cos() - om * (om * t).sin());
    let kappa = weak_off_coefficient(w, delta, psi, gamma1, gamma2);
    [[dgp, kappa * dh], [kappa * dh, dgm]]
}

/// Validity ratio of the weak-coupling expansion, max(γ)/min(Ω₊, |Δ|).
/// Values above 0.2 leave the expansion's domain.
pub fn weak_validity_ratio(w: f64, delta: f64, gamma1: f64, gamma2: f64) -> f64 {
    let gmax = gamma1.max(gamma2);
    gmax / (w - 0.5 * delta.abs()).min(delta.abs())
}

/// Numerical Bromwich inversion of a [`LaplaceMatrix`].
///
/// 𝔾(t) = ∫ dω/2π e^{iωt} G(iω + 0⁺). Near-axis pole pairs are removed and
/// transformed analytically; the 1/s², 1/s³ large-s behaviour is captured by a
/// shifted-rational subtraction so the remaining quadrature integrand decays
/// like ω⁻⁴.
pub struct BromwichEvaluator {
    mat: LaplaceMatrix,
    /// Subtracted pole pairs: (s_k in the upper half plane, residue matrix).
    pairs: Vec<(Complex64, CMat2)>,
    /// Shifted-rational coefficients e₁, e₂, e₃ (real matrices) over (s+μ)ᵏ.
    e1: Mat2,
    e2: Mat2,
    e3: Mat2,
    mu: f64,
    x_max: f64,
    breakpoints: Vec<f64>,
    tol: QuadTol,
    /// All det roots found by the stability scan.
    pub poles: Vec<Complex64>,
}

impl BromwichEvaluator {
    /// Subtracted near-axis pole pairs (upper-half pole, residue matrix).
    #[doc(hidden)]
    pub fn debug_pairs(&self) -> &[(Complex64, CMat2)] {
        &self.pairs
    }
}

fn cmat_scale_add(acc: &mut CMat2, m: &CMat2, f: Complex64) {
    for i in 0..2 {
        for j in 0..2 {
            acc[i][j] += m[i][j] * f;
        }
    }
}

impl BromwichEvaluator {
    pub fn new(mat: LaplaceMatrix, tol: QuadTol) -> Result<Self> {
        let scale = mat.scale();
        let poles = mat.poles()?;
        let pos_tol = 1e-9 * scale.max(1.0);
        if let Some(bad) = poles.iter().find(|p| p.re > pos_tol) {
            return Err(Error::Unstable(format!(
                "det G⁻¹ has a root at {bad} with positive real part"
            )));
        }
        // subtract pole pairs hugging the imaginary axis
        let axis_eps = 1e-4 * scale.max(1.0);
        let mut pairs: Vec<(Complex64, CMat2)> = Vec::new();
        for &p in poles.iter().filter(|p| p.re.abs() < axis_eps && p.im > 0.0) {
            let r = 1e-3 * scale.max(1.0);
            let m_pts = 16;
            let mut res = cmat_zero();
            for k in 0..m_pts {
                let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m_pts as f64);
                let g = mat.eval(p + r * phase);
                cmat_scale_add(&mut res, &g, phase * (r / m_pts as f64));
            }
            pairs.push((p, res));
        }
        // large-s model of G − Σ pairs: d₁/s + d₂/s² + d₃/s³
        let mut d1 = [[0.0f64; 2]; 2];
        let mut d2 = [[1.0, 0.0], [0.0, 1.0]];
        let mut d3 = [[0.0f64; 2]; 2];
        {
            use crate::model::CutoffFamily::StrictOhmic;
            // strict-Ohmic renormalized kernel contributes γs ⇒ −A/s³
            let a1 = if mat.bath1.cutoff == StrictOhmic {
                mat.bath1.gamma
            } else {
                0.0
            };
            let a2 = if mat.bath2.cutoff == StrictOhmic {
                mat.bath2.gamma
            } else {
                0.0
            };
            let (sn, cs) = mat.psi.sin_cos();
            let a = [
                [cs * cs * a1 + sn * sn * a2, cs * sn * (a1 - a2)],
                [cs * sn * (a1 - a2), sn * sn * a1 + cs * cs * a2],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    d3[i][j] -= a[i][j];
                }
            }
        }
        for (p, r) in &pairs {
            for i in 0..2 {
                for j in 0..2 {
                    d1[i][j] -= 2.0 * r[i][j].re;
                    d2[i][j] -= 2.0 * (p * r[i][j]).re;
                    d3[i][j] -= 2.0 * (p * p * r[i][j]).re;
                }
            }
        }
        let mu = scale.max(1e-3);
        let mut e1 = [[0.0f64; 2]; 2];
        let mut e2 = [[0.0f64; 2]; 2];
        let mut e3 = [[0.0f64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                e1[i][j] = d1[i][j];
                e2[i][j] = mu * d1[i][j] + d2[i][j];
                e3[i][j] = mu * mu * d1[i][j] + 2.0 * mu * d2[i][j] + d3[i][j];
            }
        }
        let lam_eff = |b: &BathSpec| match b.cutoff {
            crate::model::CutoffFamily::StrictOhmic => 0.0,
            _ => b.lambda_cut,
        };
        let x_max = 50.0
            * scale
                .max(lam_eff(&mat.bath1))
                .max(lam_eff(&mat.bath2))
                .max(1.0);
        let mut breakpoints: Vec<f64> = vec![0.0];
        for b in [&mat.bath1, &mat.bath2] {
            if b.cutoff == crate::model::CutoffFamily::SharpCutoff && b.lambda_cut < x_max {
                breakpoints.push(b.lambda_cut);
            }
        }
        breakpoints.push(mat.om2_plus.sqrt());
        breakpoints.push(mat.om2_minus.sqrt());
        breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Ok(BromwichEvaluator {
            mat,
            pairs,
            e1,
            e2,
            e3,
            mu,
            x_max,
            breakpoints,
            tol,
            poles,
        })
    }

    /// Quadrature integrand: G(iω) minus pole pairs and the shifted-rational
    /// large-s model.
    #[doc(hidden)]
    pub fn remainder(&self, omega: f64) -> CMat2 {
        // the pole is removed analytically, so the integrand is smooth there;
        // step off the exact 0/0 point and average to keep evaluation finite
        let h_guard = 1e-7 * (1.0 + self.mat.scale());
        if self
            .pairs
            .iter()
            .any(|(p, _)| (omega - p.im).abs().min((omega + p.im).abs()) < h_guard)
        {
            let a = self.remainder(omega + 2.0 * h_guard);
            let b = self.remainder(omega - 2.0 * h_guard);
            let mut avg = cmat_zero();
            for (i, row) in avg.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = 0.5 * (a[i][j] + b[i][j]);
                }
            }
            return avg;
        }
        let s = Complex64::new(0.0, omega);
        let mut rem = self.mat.eval(s);
        for (p, r) in &self.pairs {
            let f_up = 1.0 / (s - p);
            let f_dn = 1.0 / (s - p.conj());
            for i in 0..2 {
                for j in 0..2 {
                    rem[i][j] -= r[i][j] * f_up + r[i][j].conj() * f_dn;
                }
            }
        }
        let smu = s + self.mu;
        let inv1 = 1.0 / smu;
        let inv2 = inv1 * inv1;
        let inv3 = inv2 * inv1;
        for (i, row) in rem.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v -= self.e1[i][j] * inv1 + self.e2[i][j] * inv2 + self.e3[i][j] * inv3;
            }
        }
        rem
    }

    #[allow(clippy::needless_range_loop)] // (i, j) drive both closure and output
    fn quadrature(&self, t: f64, with_omega_factor: bool) -> Result<CMat2> {
        let mut out = cmat_zero();
        for i in 0..2 {
            for j in 0..=i {
                let f = |w: f64| {
                    let r = self.remainder(w)[i][j];
                    if with_omega_factor {
                        Complex64::new(0.0, w) * r
                    } else {
                        r
                    }
                };
                let mut acc = CZERO;
                let mut edges = self.breakpoints.clone();
                edges.push(self.x_max);
                for seg in edges.windows(2) {
                    acc += quad::oscillatory(&f, seg[0], seg[1], t, self.tol)?;
                }
                // two-term inverse-power tail fitted at X and 0.7X
                let p = if with_omega_factor { 3.0 } else { 4.0 };
                let (x, y) = (self.x_max, 0.7 * self.x_max);
                let fx = f(x) * x.powf(p);
                let fy = f(y) * y.powf(p);
                let c_next = (fy - fx) / (1.0 / y - 1.0 / x);
                let c_lead = fx - c_next / x;
                if t > 0.0 {
                    acc += c_lead * quad::oscillatory_tail_inv_power(x, t, p)
                        + c_next * quad::oscillatory_tail_inv_power(x, t, p + 1.0);
                } else {
                    acc += c_lead * quad::power_tail(x, p) + c_next * quad::power_tail(x, p + 1.0);
                }
                out[i][j] = acc;
                out[j][i] = acc;
            }
        }
        Ok(out)
    }

    fn assemble(&self, t: f64, derivative: bool) -> Result<Mat2> {
        let quad_part = self.quadrature(t, derivative)?;
        let emt = (-self.mu * t).exp();
        let mut out = [[0.0f64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                // shifted-rational analytic part
                let e_part = if derivative {
                    self.e1[i][j] * (-self.mu) * emt
                        + self.e2[i][j] * (1.0 - self.mu * t) * emt
                        + self.e3[i][j] * (t - 0.5 * self.mu * t * t) * emt
                } else {
                    (self.e1[i][j] + self.e2[i][j] * t + 0.5 * self.e3[i][j] * t * t) * emt
                };
                // pole pairs
                let mut p_part = 0.0;
                for (p, r) in &self.pairs {
                    let f = r[i][j] * (p * t).exp();
                    p_part += 2.0 * if derivative { (p * f).re } else { f.re };
                }
                // the ω < 0 half is the conjugate of the ω > 0 half, so the
                // inversion is Re(∫₀^X …)/π and exactly real by construction
                out[i][j] = e_part + p_part + quad_part[i][j].re / PI;
            }
        }
        Ok(out)
    }

    /// 𝔾(t) for t ≥ 0.
    pub fn greens(&self, t: f64) -> Result<Mat2> {
        self.assemble(t, false)
    }

    /// d𝔾/dt.
    pub fn greens_deriv(&self, t: f64) -> Result<Mat2> {
        self.assemble(t, true)
    }

    /// Precompute a fixed panelization of one matrix entry's remainder
    /// integrand, refined at the reference phase `t_ref`, for evaluating
    /// 𝔾_{ij}(t) and its derivative at many t ≤ t_ref cheaply.
    pub fn tabulate_entry(&self, i: usize, j: usize, t_ref: f64) -> Result<BromwichTable> {
        let f = |w: f64| self.remainder(w)[i][j];
        let mut all_edges: Vec<f64> = Vec::new();
        let mut edges_in = self.breakpoints.clone();
        edges_in.push(self.x_max);
        for seg in edges_in.windows(2) {
            let e = quad::adaptive_edges(&f, seg[0], seg[1], t_ref.max(1.0), self.tol)?;
            all_edges.extend_from_slice(&e);
        }
        all_edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
        all_edges.dedup();
        let mut panels = Vec::with_capacity(all_edges.len() - 1);
        for seg in all_edges.windows(2) {
            let (a, h) = (seg[0], seg[1] - seg[0]);
            let nodes: [f64; 5] = std::array::from_fn(|k| a + h * k as f64 / 4.0);
            let samples: [Complex64; 5] = std::array::from_fn(|k| f(nodes[k]));
            panels.push(TablePanel {
                a,
                h,
                nodes,
                samples,
            });
        }
        let pairs = self.pairs.iter().map(|(p, r)| (*p, r[i][j])).collect();
        Ok(BromwichTable {
            panels,
            pairs,
            e1: self.e1[i][j],
            e2: self.e2[i][j],
            e3: self.e3[i][j],
            mu: self.mu,
            x_max: self.x_max,
        })
    }

    /// Mode frequencies and damping rates from the pole scan, for diagnostics
    /// of the detuned strong-coupling regime where no closed form exists.
    pub fn mode_rates(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .poles
            .iter()
            .filter(|p| p.im > 0.0)
            .map(|p| (p.im, -2.0 * p.re))
            .collect();
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }
}

struct TablePanel {
    a: f64,
    h: f64,
    nodes: [f64; 5],
    samples: [Complex64; 5],
}

/// One tabulated matrix entry of a [`BromwichEvaluator`]: fixed Filon panels
/// of the remainder integrand plus the analytic pole and shifted-rational
/// parts. Evaluation is O(#panels) per time with no further G(s) calls.
pub struct BromwichTable {
    panels: Vec<TablePanel>,
    pairs: Vec<(Complex64, Complex64)>,
    e1: f64,
    e2: f64,
    e3: f64,
    mu: f64,
    x_max: f64,
}

impl BromwichTable {
    fn quadrature(&self, t: f64, with_omega_factor: bool) -> Complex64 {
        let mut acc = CZERO;
        let mut f_x = CZERO;
        let mut f_y = CZERO;
        let y_target = 0.7 * self.x_max;
        for p in &self.panels {
            let samples = if with_omega_factor {
                std::array::from_fn(|k| Complex64::new(0.0, p.nodes[k]) * p.samples[k])
            } else {
                p.samples
            };
            acc += quad::filon_fixed(&samples, p.a, p.h, t);
            if p.a <= y_target && y_target < p.a + p.h {
                f_y = samples[0];
            }
        }
        if let Some(last) = self.panels.last() {
            f_x = if with_omega_factor {
                Complex64::new(0.0, last.nodes[4]) * last.samples[4]
            } else {
                last.samples[4]
            };
        }
        // two-term inverse-power tail fitted at X and ~0.7X
        let p = if with_omega_factor { 3.0 } else { 4.0 };
        let (x, y) = (self.x_max, y_target);
        let fx = f_x * x.powf(p);
        let fy = f_y * y.powf(p);
        let c_next = (fy - fx) / (1.0 / y - 1.0 / x);
        let c_lead = fx - c_next / x;
        if t > 0.0 {
            acc += c_lead * quad::oscillatory_tail_inv_power(x, t, p)
                + c_next * quad::oscillatory_tail_inv_power(x, t, p + 1.0);
        } else {
            acc += c_lead * quad::power_tail(x, p) + c_next * quad::power_tail(x, p + 1.0);
        }
        acc
    }

    fn assemble(&self, t: f64, derivative: bool) -> f64 {
        let quad_part = self.quadrature(t, derivative);
        let emt = (-self.mu * t).exp();
        let e_part = if derivative {
            self.e1 * (-self.mu) * emt
                + self.e2 * (1.0 - self.mu * t) * emt
                + self.e3 * (t - 0.5 * self.mu * t * t) * emt
        } else {
            (self.e1 + self.e2 * t + 0.5 * self.e3 * t * t) * emt
        };
        let mut p_part = 0.0;
        for (p, r) in &self.pairs {
            let f = r * (p * t).exp();
            p_part += 2.0 * if derivative { (p * f).re } else { f.re };
        }
        e_part + p_part + quad_part.re / PI
    }

    /// 𝔾_{ij}(t).
    pub fn greens(&self, t: f64) -> f64 {
        self.assemble(t, false)
    }

    /// d𝔾_{ij}/dt.
    pub fn greens_deriv(&self, t: f64) -> f64 {
        self.assemble(t, true)
    }
}

/// Regime selector for the Green's function of the renormalized Ohmic model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    NumericBromwich,
    StrongDelta0,
    OneBath,
    WeakCoupling,
    /// Δ≠0 strong coupling: numeric Bromwich dynamics plus pole-scan
    /// diagnostics for the slow rate ∝ Δ²/|γ₂−γ₁|.
    StrongDetunedPerturbative,
}

/// Time-domain Green's function evaluator for one regime of the strict-Ohmic
/// renormalized model, parameterized by (W, Δ, ψ, γ₁, γ₂).
pub struct GreensKernel {
    pub regime: Regime,
    pub w: f64,
    pub delta: f64,
    pub psi: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    bromwich: Option<BromwichEvaluator>,
}

impl GreensKernel {
    pub fn strong_delta0(w: f64, psi: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if w <= 0.0 || gamma1 < 0.0 || gamma2 < 0.0 {
            return Err(Error::Invalid("need w > 0 and gammas >= 0".into()));
        }
        let regime = if gamma2 == 0.0 {
            Regime::OneBath
        } else {
            Regime::StrongDelta0
        };
        Ok(GreensKernel {
            regime,
            w,
            delta: 0.0,
            psi,
            gamma1,
            gamma2,
            bromwich: None,
        })
    }

    pub fn one_bath(w: f64, psi: f64, gamma1: f64) -> Result<Self> {
        Self::strong_delta0(w, psi, gamma1, 0.0)
    }

    pub fn weak(w: f64, delta: f64, psi: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if w <= 0.0 || delta == 0.0 {
            return Err(Error::Invalid(
                "weak regime needs w > 0 and nonzero detuning".into(),
            ));
        }
        Ok(GreensKernel {
            regime: Regime::WeakCoupling,
            w,
            delta,
            psi,
            gamma1,
            gamma2,
            bromwich: None,
        })
    }

    /// Numeric Bromwich kernel for strict-Ohmic baths at (W, Δ, ψ, γ₁, γ₂).
    pub fn numeric_strict(
        w: f64,
        delta: f64,
        psi: f64,
        gamma1: f64,
        gamma2: f64,
        lambda_ref: f64,
        tol: QuadTol,
    ) -> Result<Self> {
        let basis = NormalModeBasis::from_renormalized(w, delta, psi)?;
        let b1 = BathSpec::strict_ohmic(gamma1, lambda_ref, 0.0)?;
        let b2 = BathSpec::strict_ohmic(gamma2, lambda_ref, 0.0)?;
        let mat = LaplaceMatrix::new(&basis, &b1, &b2);
        let bromwich = BromwichEvaluator::new(mat, tol)?;
        Ok(GreensKernel {
            regime: Regime::NumericBromwich,
            w,
            delta,
            psi,
            gamma1,
            gamma2,
            bromwich: Some(bromwich),
        })
    }

    /// Numeric Bromwich kernel for arbitrary cutoff families.
    pub fn numeric(
        basis: &NormalModeBasis,
        bath1: &BathSpec,
        bath2: &BathSpec,
        tol: QuadTol,
    ) -> Result<Self> {
        let mat = LaplaceMatrix::new(basis, bath1, bath2);
        let bromwich = BromwichEvaluator::new(mat, tol)?;
        Ok(GreensKernel {
            regime: Regime::NumericBromwich,
            w: basis.w_mean,
            delta: basis.detuning,
            psi: basis.psi_angle,
            gamma1: bath1.gamma,
            gamma2: bath2.gamma,
            bromwich: Some(bromwich),
        })
    }

    pub fn bromwich(&self) -> Option<&BromwichEvaluator> {
        self.bromwich.as_ref()
    }

    /// 𝔾(t).
    pub fn eval(&self, t: f64) -> Result<Mat2> {
        match self.regime {
            Regime::StrongDelta0 | Regime::OneBath => Ok(greens_strong_delta0(
                self.w,
                self.psi,
                self.gamma1,
                self.gamma2,
                t,
            )),
            Regime::WeakCoupling => Ok(greens_weak(
                self.w,
                self.delta,
                self.psi,
                self.gamma1,
                self.gamma2,
                t,
            )),
            Regime::NumericBromwich | Regime::StrongDetunedPerturbative => {
                self.bromwich.as_ref().unwrap().greens(t)
            }
        }
    }

    /// d𝔾/dt.
    pub fn eval_deriv(&self, t: f64) -> Result<Mat2> {
        match self.regime {
            Regime::StrongDelta0 | Regime::OneBath => Ok(greens_strong_delta0_deriv(
                self.w,
                self.psi,
                self.gamma1,
                self.gamma2,
                t,
            )),
            Regime::WeakCoupling => Ok(greens_weak_deriv(
                self.w,
                self.delta,
                self.psi,
                self.gamma1,
                self.gamma2,
                t,
            )),
            Regime::NumericBromwich | Regime::StrongDetunedPerturbative => {
                self.bromwich.as_ref().unwrap().greens_deriv(t)
            }
        }
    }
}
