//! Exact finite-bath Gaussian-dynamics simulator.
//!
//! Each bath is discretized into N oscillator modes reproducing its spectral
//! density; the full (2 + 2N₁ + 2N₂)-mode quadratic system is evolved by the
//! exact symplectic propagator obtained from one dense eigendecomposition.
//! Every closed form in the crate is validated against the correlators this
//! simulator extracts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{BathSpec, CountertermMatrix, CutoffFamily, NormalModeBasis};
use crate::spectral::spectral_density;

/// One bath discretized into equally spaced modes ω_k = (k−½)δ with
/// couplings C_k² = 2ω_k σ(ω_k) δ/π.
#[derive(Clone, Debug)]
pub struct DiscretizedBath {
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
}

impl DiscretizedBath {
    pub fn count(&self) -> usize {
        self.frequencies.len()
    }

    /// Uniform mode spacing δ.
    pub fn spacing(&self) -> f64 {
        if self.frequencies.len() > 1 {
            self.frequencies[1] - self.frequencies[0]
        } else {
            2.0 * self.frequencies[0]
        }
    }

    /// Poincaré recurrence bound 2π/δ: dynamics are faithful only below it.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing()
    }

    /// Exact static Lamb shift of this discretization, Σ_k C_k²/W_k².
    /// For an Ohmic density this equals the continuum counterterm 2γω_max/π.
    pub fn counterterm_shift(&self) -> f64 {
        self.frequencies
            .iter()
            .zip(&self.couplings)
            .map(|(w, c)| c * c / (w * w))
            .sum()
    }
}

/// Discretize a bath into `n_modes` oscillators on (0, omega_max].
pub fn discretize(bath: &BathSpec, n_modes: usize, omega_max: f64) -> Result<DiscretizedBath> {
    if n_modes < 2 {
        return Err(Error::Invalid("need at least 2 bath modes".into()));
    }
    if omega_max <= 0.0 {
        return Err(Error::Invalid("omega_max must be positive".into()));
    }
    if bath.cutoff == CutoffFamily::SharpCutoff && omega_max > bath.lambda_cut * (1.0 + 1e-12) {
        return Err(Error::Invalid(format!(
            "omega_max = {omega_max} exceeds the sharp cutoff Λ = {}",
            bath.lambda_cut
        )));
    }
    let delta = omega_max / n_modes as f64;
    let mut frequencies = Vec::with_capacity(n_modes);
    let mut couplings = Vec::with_capacity(n_modes);
    for k in 0..n_modes {
        let w = (k as f64 + 0.5) * delta;
        frequencies.push(w);
        couplings.push((2.0 * w * spectral_density(bath, w) * delta / PI).sqrt());
    }
    Ok(DiscretizedBath {
        frequencies,
        couplings,
    })
}

/// Counterterm matrix built from the exact discrete Lamb shifts of the two
/// bath realizations (matches the continuum 2γΛ/π for Ohmic densities).
pub fn discrete_counterterms(
    b1: &DiscretizedBath,
    b2: &DiscretizedBath,
    psi: f64,
) -> CountertermMatrix {
    CountertermMatrix::from_shifts(b1.counterterm_shift(), b2.counterterm_shift(), psi)
}

/// Symmetric coordinate-space quadratic form K of H = ½pᵀp + ½xᵀKx for the
/// system ⊗ bath₁ ⊗ bath₂ chain.
#[derive(Clone, Debug)]
pub struct QuadraticHamiltonian {
    pub form: DMatrix<f64>,
    pub n1: usize,
    pub n2: usize,
}

/// Assemble the total quadratic form: renormalized system block
/// diag(Ω_{R±}²) + δΩ, diagonal bath blocks W_k², and the ψ-patterned
/// bilinear couplings (q₊cosψ + q₋sinψ)·C_k Q_{k,1},
/// (q₋cosψ − q₊sinψ)·D_k Q_{k,2}.
pub fn build_hamiltonian(
    basis: &NormalModeBasis,
    ct: &CountertermMatrix,
    b1: &DiscretizedBath,
    b2: &DiscretizedBath,
) -> QuadraticHamiltonian {
    let (n1, n2) = (b1.count(), b2.count());
    let m = 2 + n1 + n2;
    let mut k = DMatrix::<f64>::zeros(m, m);
    let psi = basis.psi_angle;
    let (sn, cs) = psi.sin_cos();
    k[(0, 0)] = basis.omega_plus * basis.omega_plus + ct.d_pp;
    k[(1, 1)] = basis.omega_minus * basis.omega_minus + ct.d_mm;
    k[(0, 1)] = ct.d_pm;
    k[(1, 0)] = ct.d_pm;
    for (i, (w, c)) in b1.frequencies.iter().zip(&b1.couplings).enumerate() {
        let idx = 2 + i;
        k[(idx, idx)] = w * w;
        k[(0, idx)] = -cs * c;
        k[(idx, 0)] = -cs * c;
        k[(1, idx)] = -sn * c;
        k[(idx, 1)] = -sn * c;
    }
    for (i, (w, c)) in b2.frequencies.iter().zip(&b2.couplings).enumerate() {
        let idx = 2 + n1 + i;
        k[(idx, idx)] = w * w;
        k[(0, idx)] = sn * c;
        k[(idx, 0)] = sn * c;
        k[(1, idx)] = -cs * c;
        k[(idx, 1)] = -cs * c;
    }
    QuadraticHamiltonian { form: k, n1, n2 }
}

/// Normal-mode data of the full chain: K = O diag(ν²) Oᵀ. The symplectic
/// propagator S(t) acts on (x, p) as
/// x(t) = O cos(νt) Oᵀ x₀ + O sin(νt)/ν Oᵀ p₀,
/// p(t) = −O ν sin(νt) Oᵀ x₀ + O cos(νt) Oᵀ p₀.
pub struct SymplecticPropagator {
    pub freqs: Vec<f64>,
    /// Columns are the orthonormal eigenvectors.
    pub modes: DMatrix<f64>,
}

impl QuadraticHamiltonian {
    /// Dense eigendecomposition; fails on a non-positive-definite form
    /// (unstable discretization).
    pub fn diagonalize(&self) -> Result<SymplecticPropagator> {
        let eig = self.form.clone().symmetric_eigen();
        let mut freqs = Vec::with_capacity(eig.eigenvalues.len());
        for &nu2 in eig.eigenvalues.iter() {
            if nu2 <= 0.0 {
                return Err(Error::Unstable(format!(
                    "discretized quadratic form has eigenvalue {nu2} <= 0"
                )));
            }
            freqs.push(nu2.sqrt());
        }
        Ok(SymplecticPropagator {
            freqs,
            modes: eig.eigenvectors,
        })
    }
}

/// Gaussian state: mean vector and symmetric covariance of (x…, p…).
#[derive(Clone, Debug)]
pub struct CovarianceState {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub time: f64,
}

impl CovarianceState {
    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }
}

/// Block-diagonal initial state: system vacuum with respect to Ω_{R±},
/// every bath mode thermal at its bath temperature.
pub fn initial_state(
    basis: &NormalModeBasis,
    b1: &DiscretizedBath,
    b2: &DiscretizedBath,
    t1: f64,
    t2: f64,
) -> CovarianceState {
    let m = 2 + b1.count() + b2.count();
    let mut qq = Vec::with_capacity(m);
    let mut pp = Vec::with_capacity(m);
    qq.push(0.5 / basis.omega_plus);
    qq.push(0.5 / basis.omega_minus);
    pp.push(0.5 * basis.omega_plus);
    pp.push(0.5 * basis.omega_minus);
    let nbar = |w: f64, t: f64| {
        if t == 0.0 {
            0.0
        } else {
            1.0 / (w / t).exp_m1()
        }
    };
    for &w in &b1.frequencies {
        qq.push((nbar(w, t1) + 0.5) / w);
        pp.push((nbar(w, t1) + 0.5) * w);
    }
    for &w in &b2.frequencies {
        qq.push((nbar(w, t2) + 0.5) / w);
        pp.push((nbar(w, t2) + 0.5) * w);
    }
    let mut cov = DMatrix::<f64>::zeros(2 * m, 2 * m);
    for i in 0..m {
        cov[(i, i)] = qq[i];
        cov[(m + i, m + i)] = pp[i];
    }
    CovarianceState {
        mean: DVector::zeros(2 * m),
        cov,
        time: 0.0,
    }
}

impl SymplecticPropagator {
    fn dim(&self) -> usize {
        self.freqs.len()
    }

    /// Dense symplectic propagator S(t), (2M)×(2M) in (x, p) block order.
    pub fn propagator(&self, t: f64) -> DMatrix<f64> {
        let m = self.dim();
        let o = &self.modes;
        let cos_d = DVector::from_iterator(m, self.freqs.iter().map(|nu| (nu * t).cos()));
        let sinc_d = DVector::from_iterator(m, self.freqs.iter().map(|nu| (nu * t).sin() / nu));
        let nsin_d = DVector::from_iterator(m, self.freqs.iter().map(|nu| -(nu * t).sin() * nu));
        let scaled = |d: &DVector<f64>| {
            let mut w = o.clone();
            for (j, col) in w.column_iter_mut().enumerate() {
                let mut col = col;
                col *= d[j];
            }
            w * o.transpose()
        };
        let c = scaled(&cos_d);
        let s_over = scaled(&sinc_d);
        let nsin = scaled(&nsin_d);
        let mut s = DMatrix::<f64>::zeros(2 * m, 2 * m);
        s.view_mut((0, 0), (m, m)).copy_from(&c);
        s.view_mut((0, m), (m, m)).copy_from(&s_over);
        s.view_mut((m, 0), (m, m)).copy_from(&nsin);
        s.view_mut((m, m), (m, m)).copy_from(&c);
        s
    }

    /// Exact Gaussian evolution by time step `dt`: Σ → SΣSᵀ, mean → S·mean.
    pub fn evolve(&self, state: &CovarianceState, dt: f64) -> CovarianceState {
        let s = self.propagator(dt);
        CovarianceState {
            mean: &s * &state.mean,
            cov: &s * &state.cov * s.transpose(),
            time: state.time + dt,
        }
    }

    /// Rows a ∈ {0, 1} (system q) and {M, M+1} (system p) of S(t), as the
    /// coefficient vectors over (x₀, p₀). Returns (xq, xp) rows for the two
    /// system coordinates and momenta: each entry is a length-2M vector.
    fn system_rows(&self, t: f64) -> [DVector<f64>; 4] {
        let m = self.dim();
        let o = &self.modes;
        let mut rows: [DVector<f64>; 4] = [
            DVector::zeros(2 * m),
            DVector::zeros(2 * m),
            DVector::zeros(2 * m),
            DVector::zeros(2 * m),
        ];
        // weights per eigenmode
        let mut cos_w = vec![0.0; m];
        let mut sinc_w = vec![0.0; m];
        let mut nsin_w = vec![0.0; m];
        for (j, nu) in self.freqs.iter().enumerate() {
            let (s, c) = (nu * t).sin_cos();
            cos_w[j] = c;
            sinc_w[j] = s / nu;
            nsin_w[j] = -s * nu;
        }
        for a in 0..2 {
            let mut x_from_x = DVector::<f64>::zeros(m);
            let mut x_from_p = DVector::<f64>::zeros(m);
            let mut p_from_x = DVector::<f64>::zeros(m);
            let mut p_from_p = DVector::<f64>::zeros(m);
            for j in 0..m {
                let oa = o[(a, j)];
                // row_a of O diag(w) Oᵀ = Σ_j O[a,j] w_j O[:,j]ᵀ
                let col = o.column(j);
                x_from_x.axpy(oa * cos_w[j], &col, 1.0);
                x_from_p.axpy(oa * sinc_w[j], &col, 1.0);
                p_from_x.axpy(oa * nsin_w[j], &col, 1.0);
                p_from_p.axpy(oa * cos_w[j], &col, 1.0);
            }
            rows[a].rows_mut(0, m).copy_from(&x_from_x);
            rows[a].rows_mut(m, m).copy_from(&x_from_p);
            rows[2 + a].rows_mut(0, m).copy_from(&p_from_x);
            rows[2 + a].rows_mut(m, m).copy_from(&p_from_p);
        }
        rows
    }

    /// Fast path for a block-diagonal initial covariance: the 4×4 system
    /// covariance (q₊, q₋, p₊, p₋) at time t without forming S or Σ(t).
    pub fn system_covariance(&self, initial: &CovarianceState, t: f64) -> [[f64; 4]; 4] {
        let m = self.dim();
        let rows = self.system_rows(t);
        let diag: Vec<f64> = (0..2 * m).map(|i| initial.cov[(i, i)]).collect();
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..=i {
                let mut acc = 0.0;
                for k in 0..2 * m {
                    acc += rows[i][k] * rows[j][k] * diag[k];
                }
                out[i][j] = acc;
                out[j][i] = acc;
            }
        }
        out
    }

    /// Two-time system coordinate correlators
    /// ⟨q_α(t+τ) q_β(t)⟩ = [S(τ)(Σ(t) + iJ/2)]_{αβ} on the qq block.
    pub fn two_time_qq(&self, state: &CovarianceState, tau: f64) -> [[Complex64; 2]; 2] {
        let m = self.dim();
        let rows = self.system_rows(tau);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (alpha, row) in rows.iter().take(2).enumerate() {
            for beta in 0..2 {
                // Σ(t) column beta plus the commutator column (iJ/2)_{·,β}
                let mut re = 0.0;
                for k in 0..2 * m {
                    re += row[k] * state.cov[(k, beta)];
                }
                // (iJ/2) column β has i/2 at the conjugate-momentum slot
                let im = 0.5 * row[m + beta];
                out[alpha][beta] = Complex64::new(re, im);
            }
        }
        out
    }
}

/// Equal-time second moments readable from a state's system block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moment {
    QPlusSq,
    QMinusSq,
    QPlusQMinus,
    PPlusSq,
    PMinusSq,
    PPlusPMinus,
}

/// Read a symmetrized second moment of the system block.
pub fn extract(state: &CovarianceState, which: Moment) -> f64 {
    let m = state.modes();
    match which {
        Moment::QPlusSq => state.cov[(0, 0)],
        Moment::QMinusSq => state.cov[(1, 1)],
        Moment::QPlusQMinus => state.cov[(0, 1)],
        Moment::PPlusSq => state.cov[(m, m)],
        Moment::PMinusSq => state.cov[(m + 1, m + 1)],
        Moment::PPlusPMinus => state.cov[(m, m + 1)],
    }
}

/// System-block 4×4 covariance (q₊, q₋, p₊, p₋) of a full state
/// (partial trace over the baths = row/column restriction).
pub fn system_block(state: &CovarianceState) -> [[f64; 4]; 4] {
    let m = state.modes();
    let idx = [0, 1, m, m + 1];
    let mut out = [[0.0; 4]; 4];
    for (i, &a) in idx.iter().enumerate() {
        for (j, &b) in idx.iter().enumerate() {
            out[i][j] = state.cov[(a, b)];
        }
    }
    out
}

/// Logarithmic negativity of a two-mode covariance in (q₊, q₋, p₊, p₋) order:
/// E_N = max(0, −ln 2ν̃₋) with ν̃₋ the smallest symplectic eigenvalue of the
/// partial transpose. Errors on covariances violating the uncertainty bound.
pub fn log_negativity(sys: &[[f64; 4]; 4]) -> Result<f64> {
    // mode-block 2×2 determinants: A = mode +, B = mode −, C = cross
    let det_a = sys[0][0] * sys[2][2] - sys[0][2] * sys[2][0];
    let det_b = sys[1][1] * sys[3][3] - sys[1][3] * sys[3][1];
    let det_c = sys[0][1] * sys[2][3] - sys[0][3] * sys[2][1];
    // full 4×4 determinant via nalgebra
    let m = nalgebra::Matrix4::from_fn(|i, j| sys[i][j]);
    let det_s = m.determinant();
    // physicality: smallest symplectic eigenvalue of σ itself
    let delta = det_a + det_b + 2.0 * det_c;
    let disc = (delta * delta - 4.0 * det_s).max(0.0).sqrt();
    let nu_min_sq = 0.5 * (delta - disc);
    if nu_min_sq < 0.0 || 2.0 * nu_min_sq.max(0.0).sqrt() < 1.0 - 1e-6 {
        return Err(Error::Numerics(format!(
            "covariance violates the uncertainty bound: 2ν₋ = {}",
            2.0 * nu_min_sq.max(0.0).sqrt()
        )));
    }
    // partial transpose flips the sign of det C
    let delta_t = det_a + det_b - 2.0 * det_c;
    let disc_t = (delta_t * delta_t - 4.0 * det_s).max(0.0).sqrt();
    let nu_t_min = (0.5 * (delta_t - disc_t)).max(0.0).sqrt();
    Ok((-(2.0 * nu_t_min).ln()).max(0.0))
}

/// Symplectic eigenvalues of a symmetric positive-definite covariance:
/// square roots of eig(Lᵀ(JᵀσJ)L) with σ = LLᵀ. All ≥ ½ − tol for a
/// physical state (equivalent to σ + iJ/2 ⪰ 0).
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n2 = cov.nrows();
    let m = n2 / 2;
    let chol = cov
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerics("covariance not positive definite".into()))?;
    let l = chol.l();
    // A = JᵀσJ: J = [[0, I], [−I, 0]] ⇒ Jᵀ σ J swaps blocks with signs
    let mut a = DMatrix::<f64>::zeros(n2, n2);
    // (Jᵀ σ J)[i,j] = Σ J[k,i] σ[k,l] J[l,j]; with the block J this is
    // A_xx = σ_pp, A_pp = σ_xx, A_xp = −σ_px, A_px = −σ_xp
    a.view_mut((0, 0), (m, m))
        .copy_from(&cov.view((m, m), (m, m)));
    a.view_mut((m, m), (m, m))
        .copy_from(&cov.view((0, 0), (m, m)));
    let neg_px = -cov.view((m, 0), (m, m));
    let neg_xp = -cov.view((0, m), (m, m));
    a.view_mut((0, m), (m, m)).copy_from(&neg_px);
    a.view_mut((m, 0), (m, m)).copy_from(&neg_xp);
    let b = l.transpose() * a * &l;
    let eig = b.symmetric_eigen();
    let mut out: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Max-abs entry of SᵀJS − J, the symplectic-form conservation defect.
pub fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let n2 = s.nrows();
    let m = n2 / 2;
    let mut j = DMatrix::<f64>::zeros(n2, n2);
    for i in 0..m {
        j[(i, m + i)] = 1.0;
        j[(m + i, i)] = -1.0;
    }
    let d = s.transpose() * &j * s - &j;
    d.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// ln det(2Σ): zero for a pure Gaussian state, preserved under symplectic
/// evolution.
pub fn log_purity_defect(cov: &DMatrix<f64>) -> Result<f64> {
    let two_cov = cov * 2.0;
    let chol = two_cov
        .cholesky()
        .ok_or_else(|| Error::Numerics("covariance not positive definite".into()))?;
    let mut logdet = 0.0;
    for i in 0..cov.nrows() {
        logdet += 2.0 * chol.l()[(i, i)].ln();
    }
    Ok(logdet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BathSpec;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    fn sharp(g: f64, lam: f64, t: f64) -> BathSpec {
        BathSpec::new(g, lam, t, CutoffFamily::SharpCutoff).unwrap()
    }

    #[test]
    fn discretize_basics() {
        let b = sharp(0.1, 20.0, 0.0);
        let d = discretize(&b, 400, 20.0).unwrap();
        assert_eq!(d.count(), 400);
        assert_relative_eq!(d.spacing(), 0.05, epsilon = 1e-12);
        assert_relative_eq!(d.recurrence_time(), 2.0 * PI / 0.05, epsilon = 1e-9);
        // exact discrete counterterm equals the continuum 2γω_max/π
        assert_relative_eq!(
            d.counterterm_shift(),
            2.0 * 0.1 * 20.0 / PI,
            epsilon = 1e-12
        );
        // zero coupling ⇒ zero couplings
        let z = discretize(&sharp(0.0, 20.0, 0.0), 16, 20.0).unwrap();
        assert!(z.couplings.iter().all(|&c| c == 0.0));
        // omega_max beyond a sharp cutoff is rejected
        assert!(discretize(&b, 16, 30.0).is_err());
    }

    #[test]
    fn discretize_reconstructs_spectral_density() {
        // coarse-grained over 20-mode bins, the delta-weight sum matches
        // ∫ σ dω to well under 1%
        let b = sharp(0.1, 20.0, 0.0);
        let d = discretize(&b, 400, 20.0).unwrap();
        let mut l1_err = 0.0;
        let mut l1_norm = 0.0;
        for bin in 0..20 {
            let (lo, hi) = (bin as f64, bin as f64 + 1.0);
            let weight: f64 = (0..400)
                .filter(|&k| d.frequencies[k] > lo && d.frequencies[k] <= hi)
                .map(|k| PI * d.couplings[k] * d.couplings[k] / (2.0 * d.frequencies[k]))
                .sum();
            let exact = 0.1 * 0.5 * (hi * hi - lo * lo); // ∫ γω dω
            l1_err += (weight - exact).abs();
            l1_norm += exact.abs();
        }
        assert!(l1_err / l1_norm < 0.01, "L1 error {}", l1_err / l1_norm);
    }

    fn small_setup(
        g1: f64,
        g2: f64,
        t1: f64,
        t2: f64,
        n: usize,
    ) -> (
        NormalModeBasis,
        DiscretizedBath,
        DiscretizedBath,
        SymplecticPropagator,
        CovarianceState,
    ) {
        let basis = NormalModeBasis::from_renormalized(1.0, 0.0, FRAC_PI_4).unwrap();
        let b1 = discretize(&sharp(g1, 20.0, t1), n, 20.0).unwrap();
        let b2 = discretize(&sharp(g2, 20.0, t2), n, 20.0).unwrap();
        let ct = discrete_counterterms(&b1, &b2, basis.psi_angle);
        let h = build_hamiltonian(&basis, &ct, &b1, &b2);
        let prop = h.diagonalize().unwrap();
        let state = initial_state(&basis, &b1, &b2, t1, t2);
        (basis, b1, b2, prop, state)
    }

    #[test]
    fn decoupled_eigenfrequencies() {
        let basis = NormalModeBasis::from_renormalized(1.0, 0.25, 0.3).unwrap();
        let b1 = discretize(&sharp(0.0, 10.0, 0.0), 8, 10.0).unwrap();
        let b2 = discretize(&sharp(0.0, 10.0, 0.0), 8, 10.0).unwrap();
        let h = build_hamiltonian(&basis, &CountertermMatrix::ZERO, &b1, &b2);
        let prop = h.diagonalize().unwrap();
        let mut expect: Vec<f64> = b1
            .frequencies
            .iter()
            .chain(&b2.frequencies)
            .cloned()
            .chain([basis.omega_plus, basis.omega_minus])
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut got = prop.freqs.clone();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, e) in got.iter().zip(&expect) {
            assert_relative_eq!(g, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn psi_zero_couples_q_plus_to_bath1_only() {
        let basis = NormalModeBasis::from_renormalized(1.0, 0.2, 0.0).unwrap();
        let b1 = discretize(&sharp(0.1, 10.0, 0.0), 6, 10.0).unwrap();
        let b2 = discretize(&sharp(0.2, 10.0, 0.0), 6, 10.0).unwrap();
        let h = build_hamiltonian(&basis, &CountertermMatrix::ZERO, &b1, &b2);
        for i in 0..6 {
            assert!(h.form[(0, 2 + i)] != 0.0); // q₊ ↔ bath 1
            assert_eq!(h.form[(1, 2 + i)], 0.0); // q₋ ⊥ bath 1
            assert_eq!(h.form[(0, 8 + i)], 0.0); // q₊ ⊥ bath 2 at ψ=0
            assert!(h.form[(1, 8 + i)] != 0.0);
        }
    }

    #[test]
    fn counterterm_shifts_lowest_system_mode() {
        // with counterterms the system-like frequency sits at W; without them
        // it is dragged down by ≈ δΩ/(2W)
        let basis = NormalModeBasis::from_renormalized(1.0, 0.0, FRAC_PI_4).unwrap();
        let bath = sharp(0.05, 10.0, 0.0);
        let b1 = discretize(&bath, 200, 10.0).unwrap();
        let b2 = discretize(&sharp(0.0, 10.0, 0.0), 200, 10.0).unwrap();
        let ct_on = discrete_counterterms(&b1, &b2, basis.psi_angle);
        let h_on = build_hamiltonian(&basis, &ct_on, &b1, &b2)
            .diagonalize()
            .unwrap();
        let h_off = build_hamiltonian(&basis, &CountertermMatrix::ZERO, &b1, &b2)
            .diagonalize()
            .unwrap();
        // the q₊ mode hybridizes across the bath grid, so compare the
        // eigenvector-weighted mean frequency of its local density of states
        let ldos_mean = |prop: &SymplecticPropagator| {
            prop.freqs
                .iter()
                .enumerate()
                .map(|(k, nu)| prop.modes[(0, k)] * prop.modes[(0, k)] * nu)
                .sum::<f64>()
        };
        // δΩ₁ enters the ++ block as cos²ψ δΩ₁ = δΩ₁/2 at ψ=π/4; the dressed
        // system frequency shifts by about cos²ψ·δΩ₁/(2W)
        let shift = ldos_mean(&h_on) - ldos_mean(&h_off);
        let expect = 0.5 * b1.counterterm_shift() / 2.0;
        assert_relative_eq!(shift, expect, max_relative = 0.2);
    }

    #[test]
    fn initial_state_moments() {
        let (_, b1, _, _, state) = small_setup(0.1, 0.05, 0.0, 5.0, 8);
        let m = state.modes();
        // system vacuum
        assert_relative_eq!(extract(&state, Moment::QPlusSq), 0.5);
        assert_relative_eq!(extract(&state, Moment::PPlusSq), 0.5);
        assert_eq!(extract(&state, Moment::QPlusQMinus), 0.0);
        // T=0 bath modes at minimum uncertainty
        for i in 0..8 {
            let qq = state.cov[(2 + i, 2 + i)];
            let pp = state.cov[(m + 2 + i, m + 2 + i)];
            assert_relative_eq!(qq * pp, 0.25, epsilon = 1e-12);
        }
        // hot bath modes near equipartition: ⟨Q²⟩ ≈ T/W² for T ≫ W
        let w0 = b1.frequencies[0];
        let hot = state.cov[(2 + 8, 2 + 8)]; // first mode of bath 2 (T=5)
        assert_relative_eq!(hot, 5.0 / (w0 * w0), max_relative = 0.01);
    }

    #[test]
    fn vacuum_decoupled_is_stationary() {
        let basis = NormalModeBasis::from_renormalized(1.0, 0.3, 0.4).unwrap();
        let b1 = discretize(&sharp(0.0, 10.0, 0.0), 6, 10.0).unwrap();
        let b2 = discretize(&sharp(0.0, 10.0, 0.0), 6, 10.0).unwrap();
        let prop = build_hamiltonian(&basis, &CountertermMatrix::ZERO, &b1, &b2)
            .diagonalize()
            .unwrap();
        let state = initial_state(&basis, &b1, &b2, 0.0, 0.0);
        let evolved = prop.evolve(&state, 7.3);
        for (a, b) in evolved.cov.iter().zip(state.cov.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn propagator_is_symplectic_and_commutators_exact() {
        let (_, _, _, prop, _) = small_setup(0.1, 0.03, 0.0, 0.0, 12);
        for t in [0.3, 2.0, 9.0] {
            let s = prop.propagator(t);
            assert!(
                symplectic_defect(&s) < 1e-10,
                "defect {}",
                symplectic_defect(&s)
            );
        }
    }

    #[test]
    fn purity_preserved_for_pure_global_state() {
        let (_, _, _, prop, state) = small_setup(0.1, 0.03, 0.0, 0.0, 12);
        assert!(log_purity_defect(&state.cov).unwrap().abs() < 1e-10);
        let evolved = prop.evolve(&state, 5.0);
        assert!(log_purity_defect(&evolved.cov).unwrap().abs() < 1e-8);
    }

    #[test]
    fn uncertainty_bound_holds_during_evolution() {
        let (_, _, _, prop, state) = small_setup(0.1, 0.03, 0.0, 2.0, 12);
        for t in [0.0, 1.0, 4.0] {
            let evolved = prop.evolve(&state, t);
            let nus = symplectic_eigenvalues(&evolved.cov).unwrap();
            assert!(nus[0] >= 0.5 - 1e-8, "nu_min = {}", nus[0]);
        }
    }

    #[test]
    fn fast_system_covariance_matches_full_evolution() {
        let (_, _, _, prop, state) = small_setup(0.1, 0.03, 0.0, 1.0, 10);
        let t = 3.7;
        let fast = prop.system_covariance(&state, t);
        let full = prop.evolve(&state, t);
        let sys = system_block(&full);
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(fast[i][j], sys[i][j], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn two_time_reduces_to_equal_time() {
        let (_, _, _, prop, state) = small_setup(0.1, 0.03, 0.0, 0.5, 10);
        let evolved = prop.evolve(&state, 2.0);
        let qq = prop.two_time_qq(&evolved, 0.0);
        assert_relative_eq!(
            qq[0][0].re,
            extract(&evolved, Moment::QPlusSq),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            qq[0][1].re,
            extract(&evolved, Moment::QPlusQMinus),
            epsilon = 1e-12
        );
        // equal-time commutator [q, q] = 0, [q, p] part: Im⟨q_α q_β⟩ = 0
        assert!(qq[0][1].im.abs() < 1e-14);
        assert!(qq[0][0].im.abs() < 1e-14);
    }

    #[test]
    fn log_negativity_known_states() {
        // product vacuum: separable
        let mut vac = [[0.0; 4]; 4];
        for (i, row) in vac.iter_mut().enumerate() {
            row[i] = 0.5;
        }
        assert_eq!(log_negativity(&vac).unwrap(), 0.0);
        // two-mode squeezed state: E_N = 2r
        let r = 0.7f64;
        let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let mut tms = [[0.0; 4]; 4];
        tms[0][0] = 0.5 * ch;
        tms[1][1] = 0.5 * ch;
        tms[2][2] = 0.5 * ch;
        tms[3][3] = 0.5 * ch;
        tms[0][1] = 0.5 * sh;
        tms[1][0] = 0.5 * sh;
        tms[2][3] = -0.5 * sh;
        tms[3][2] = -0.5 * sh;
        assert_relative_eq!(log_negativity(&tms).unwrap(), 2.0 * r, epsilon = 1e-10);
        // unphysical covariance rejected
        let mut bad = [[0.0; 4]; 4];
        for (i, row) in bad.iter_mut().enumerate() {
            row[i] = 0.1;
        }
        assert!(log_negativity(&bad).is_err());
    }

    #[test]
    fn identical_baths_coherence_stays_zero() {
        let (_, _, _, prop, state) = small_setup(0.08, 0.08, 1.0, 1.0, 24);
        for t in [1.0, 5.0, 12.0] {
            let sys = prop.system_covariance(&state, t);
            assert!(sys[0][1].abs() < 1e-12, "coherence {}", sys[0][1]);
        }
    }
}
