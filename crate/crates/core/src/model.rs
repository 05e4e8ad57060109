//! System and bath parameters, normal-mode diagonalization, counterterms.
//!
//! Units: ħ = k_B = mass = 1; every frequency is measured in a common
//! reference unit chosen by the caller.

use crate::error::{Error, Result};

/// 2×2 real matrix, row-major. Small enough that hand-rolled ops beat a
/// linear-algebra dependency everywhere it appears.
pub type Mat2 = [[f64; 2]; 2];

/// Multiply two 2×2 matrices.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Transpose of a 2×2 matrix.
pub fn mat2_t(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Rotation V(λ) = [[cos λ, −sin λ], [sin λ, cos λ]].
pub fn rotation(lambda: f64) -> Mat2 {
    let (s, c) = lambda.sin_cos();
    [[c, -s], [s, c]]
}

/// Bare parameters of the two coupled oscillators.
///
/// The physical potential is ½Ω_a²q_a² + ½Ω_b²q_b² + ½Ω²(q_a−q_b)², and θ
/// orients the linear coupling of (q_a, q_b) to the two baths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Inter-oscillator coupling frequency Ω.
    pub omega_c: f64,
    /// Bath-coupling mixing angle θ, radians.
    pub theta: f64,
}

impl SystemParams {
    // negated comparisons reject NaN, which `<=` would let through
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(omega_a: f64, omega_b: f64, omega_c: f64, theta: f64) -> Result<Self> {
        if !(omega_a > 0.0) || !omega_a.is_finite() {
            return Err(Error::Invalid(format!(
                "omega_a must be > 0, got {omega_a}"
            )));
        }
        if !(omega_b > 0.0) || !omega_b.is_finite() {
            return Err(Error::Invalid(format!(
                "omega_b must be > 0, got {omega_b}"
            )));
        }
        if !(omega_c >= 0.0) || !omega_c.is_finite() {
            return Err(Error::Invalid(format!(
                "omega_c must be >= 0, got {omega_c}"
            )));
        }
        if !(0.0..std::f64::consts::TAU).contains(&theta) {
            return Err(Error::Invalid(format!(
                "theta must lie in [0, 2π), got {theta}"
            )));
        }
        Ok(SystemParams {
            omega_a,
            omega_b,
            omega_c,
            theta,
        })
    }

    /// Frequency matrix of the coupled quadratic form.
    pub fn frequency_matrix(&self) -> Mat2 {
        let oc2 = self.omega_c * self.omega_c;
        [
            [self.omega_a * self.omega_a + oc2, -oc2],
            [-oc2, self.omega_b * self.omega_b + oc2],
        ]
    }
}

/// Spectral-density cutoff family of a bath.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffFamily {
    /// σ(ω) = γω Θ(Λ − |ω|).
    SharpCutoff,
    /// σ(ω) = γω Λ²/(Λ² + ω²).
    Drude,
    /// Λ → ∞ limit taken after counterterm subtraction: Re χ + δΩ = 0,
    /// Im χ = γω for all ω. `lambda_cut` is kept as the reference bandwidth
    /// for the quantities that stay Λ-sensitive (momentum coincidence limits).
    StrictOhmic,
}

/// One thermal bath: Ohmic coupling strength, bandwidth, temperature, cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathSpec {
    /// Friction coefficient γ (frequency units).
    pub gamma: f64,
    /// Bandwidth Λ (frequency units, finite and positive).
    pub lambda_cut: f64,
    /// Temperature T ≥ 0 (frequency units).
    pub temperature: f64,
    pub cutoff: CutoffFamily,
}

impl BathSpec {
    // negated comparisons reject NaN, which `<=` would let through
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(
        gamma: f64,
        lambda_cut: f64,
        temperature: f64,
        cutoff: CutoffFamily,
    ) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Invalid(format!("gamma must be >= 0, got {gamma}")));
        }
        if !(lambda_cut > 0.0) || !lambda_cut.is_finite() {
            return Err(Error::Invalid(format!(
                "lambda_cut must be finite and > 0, got {lambda_cut}; \
                 infinite bandwidth is CutoffFamily::StrictOhmic"
            )));
        }
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::Invalid(format!(
                "temperature must be >= 0, got {temperature}"
            )));
        }
        Ok(BathSpec {
            gamma,
            lambda_cut,
            temperature,
            cutoff,
        })
    }

    /// Strict-Ohmic bath at the Λ→∞ renormalized point. `lambda_ref` only
    /// enters Λ-sensitive coincidence limits.
    pub fn strict_ohmic(gamma: f64, lambda_ref: f64, temperature: f64) -> Result<Self> {
        Self::new(gamma, lambda_ref, temperature, CutoffFamily::StrictOhmic)
    }

    /// Counterterm δΩ = 2γΛ/π cancelling the static Lamb shift.
    pub fn counterterm(&self) -> f64 {
        2.0 * self.gamma * self.lambda_cut / std::f64::consts::PI
    }
}

/// Normal-mode data of the two-oscillator system.
///
/// `omega_plus`/`omega_minus` are the mode frequencies: the bare Ω_± when the
/// basis comes from [`diagonalize`], or the renormalized Ω_{R±} = W ∓ Δ/2 when
/// it comes from [`NormalModeBasis::from_renormalized`].
#[derive(Clone, Copy, Debug)]
pub struct NormalModeBasis {
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// W = (Ω_+ + Ω_−)/2.
    pub w_mean: f64,
    /// Detuning Δ = Ω_− − Ω_+ (so Ω_± = W ∓ Δ/2).
    pub detuning: f64,
    /// Mechanical mixing angle λ, in [0, π/2].
    pub lambda_angle: f64,
    /// Effective system-bath angle ψ = λ + θ.
    pub psi_angle: f64,
    /// V(λ) mapping (q_a, q_b) to (q_+, q_−).
    pub rotation: Mat2,
}

impl NormalModeBasis {
    /// Build directly from the renormalized parameterization (W, Δ, ψ) that
    /// all the Ohmic closed forms use. λ is reported as ψ (θ = 0 convention).
    // negated comparisons reject NaN, which `<=` would let through
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn from_renormalized(w_mean: f64, detuning: f64, psi: f64) -> Result<Self> {
        let omega_plus = w_mean - 0.5 * detuning;
        let omega_minus = w_mean + 0.5 * detuning;
        if !(omega_plus > 0.0) || !(omega_minus > 0.0) {
            return Err(Error::Invalid(format!(
                "renormalized frequencies must be positive: W = {w_mean}, Δ = {detuning} \
                 give Ω_R± = ({omega_plus}, {omega_minus})"
            )));
        }
        Ok(NormalModeBasis {
            omega_plus,
            omega_minus,
            w_mean,
            detuning,
            lambda_angle: psi,
            psi_angle: psi,
            rotation: rotation(psi),
        })
    }
}

/// Diagonalize the two-oscillator quadratic form into normal modes.
///
/// Branch choice: 2λ = atan2(2Ω², Ω_a²−Ω_b²) ∈ [0, π] so λ ∈ [0, π/2]; the
/// degenerate decoupled case (Ω = 0, Ω_a = Ω_b) fixes λ = 0.
pub fn diagonalize(params: &SystemParams) -> Result<NormalModeBasis> {
    let oa2 = params.omega_a * params.omega_a;
    let ob2 = params.omega_b * params.omega_b;
    let oc2 = params.omega_c * params.omega_c;
    let sum = oa2 + ob2 + 2.0 * oc2;
    let root = ((oa2 - ob2).powi(2) + 4.0 * oc2 * oc2).sqrt();
    let om_plus2 = 0.5 * (sum + root);
    let om_minus2 = 0.5 * (sum - root);
    if om_minus2 <= 0.0 {
        return Err(Error::Unstable(format!(
            "quadratic form not positive definite: Ω_−² = {om_minus2}"
        )));
    }
    let lambda = if root == 0.0 {
        0.0
    } else {
        0.5 * f64::atan2(2.0 * oc2, oa2 - ob2)
    };
    let omega_plus = om_plus2.sqrt();
    let omega_minus = om_minus2.sqrt();
    Ok(NormalModeBasis {
        omega_plus,
        omega_minus,
        w_mean: 0.5 * (omega_plus + omega_minus),
        detuning: omega_minus - omega_plus,
        lambda_angle: lambda,
        psi_angle: lambda + params.theta,
        rotation: rotation(lambda),
    })
}

/// Counterterm frequency matrix in the normal-mode basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountertermMatrix {
    pub d_pp: f64,
    pub d_mm: f64,
    pub d_pm: f64,
}

impl CountertermMatrix {
    pub const ZERO: CountertermMatrix = CountertermMatrix {
        d_pp: 0.0,
        d_mm: 0.0,
        d_pm: 0.0,
    };

    /// Assemble from per-bath shifts δΩ₁, δΩ₂ and the angle ψ.
    pub fn from_shifts(d1: f64, d2: f64, psi: f64) -> Self {
        let (s, c) = psi.sin_cos();
        CountertermMatrix {
            d_pp: c * c * d1 + s * s * d2,
            d_mm: s * s * d1 + c * c * d2,
            d_pm: c * s * (d1 - d2),
        }
    }
}

/// Counterterm matrix δΩ_{αβ} for two Ohmic baths, δΩ_j = 2γ_jΛ_j/π.
pub fn counterterms(bath1: &BathSpec, bath2: &BathSpec, psi: f64) -> CountertermMatrix {
    CountertermMatrix::from_shifts(bath1.counterterm(), bath2.counterterm(), psi)
}
