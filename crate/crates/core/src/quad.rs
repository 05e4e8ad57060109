//! Quadrature engine: adaptive Gauss-Kronrod panels and Filon-type
//! oscillatory integration with exact phase moments.
#![allow(clippy::excessive_precision)] // tabulated nodes keep full digits
//!
//! Every frequency integral in this crate is of the form
//! ∫ f(ω) e^{iωt} dω with f smooth on panels and t possibly large, so the
//! panel rule interpolates f by a quartic and integrates the phase exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Quadrature tolerances. Defaults: absolute 1e-10, relative 1e-8.
#[derive(Clone, Copy, Debug)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol {
            abs: 1e-10,
            rel: 1e-8,
        }
    }
}

impl QuadTol {
    pub fn scaled(self, factor: f64) -> Self {
        QuadTol {
            abs: self.abs * factor,
            rel: self.rel,
        }
    }
}

// 15-point Gauss-Kronrod abscissae/weights (positive half, center last).
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One G7-K15 panel; returns (kronrod value, |K15 - G7| error estimate).
pub fn gk15<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK15[7];
    let mut gauss = fc * WG7[3];
    for j in 0..7 {
        let dx = half * XGK15[j];
        let fsum = f(center - dx) + f(center + dx);
        kron += fsum * WGK15[j];
        if j % 2 == 1 {
            gauss += fsum * WG7[j / 2];
        }
    }
    kron *= half;
    gauss *= half;
    (kron, (kron - gauss).norm())
}

/// Adaptive Gauss-Kronrod integration of a complex-valued integrand.
pub fn adaptive<F>(f: &F, a: f64, b: f64, tol: QuadTol) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (v0, e0) = gk15(f, a, b);
    let mut heap: Vec<(f64, f64, Complex64, f64)> = vec![(a, b, v0, e0)];
    let mut total = v0;
    let mut err = e0;
    for _ in 0..2000 {
        if err <= tol.abs.max(tol.rel * total.norm()) {
            return Ok(total);
        }
        // split the worst panel
        let (idx, _) = heap
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (pa, pb, pv, pe) = heap.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        err = err.max(0.0);
        heap.push((pa, mid, v1, e1));
        heap.push((mid, pb, v2, e2));
    }
    let achieved = err;
    if achieved <= 100.0 * tol.abs.max(tol.rel * total.norm()) {
        Ok(total)
    } else {
        Err(Error::Numerics(format!(
            "adaptive quadrature did not converge: achieved abs error {achieved:.3e} on [{a}, {b}]"
        )))
    }
}

// Quartic interpolation coefficients from samples at x = 0, 1/4, 1/2, 3/4, 1.
// Row k gives the monomial coefficient of x^k.
const FILON_VANDERMONDE_INV: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [-25.0 / 3.0, 16.0, -12.0, 16.0 / 3.0, -1.0],
    [70.0 / 3.0, -208.0 / 3.0, 76.0, -112.0 / 3.0, 22.0 / 3.0],
    [-80.0 / 3.0, 96.0, -128.0, 224.0 / 3.0, -16.0],
    [32.0 / 3.0, -128.0 / 3.0, 64.0, -128.0 / 3.0, 32.0 / 3.0],
];

/// Phase moments m_k(θ) = ∫₀¹ x^k e^{iθx} dx for k = 0..4.
fn phase_moments(theta: f64) -> [Complex64; 5] {
    let mut m = [Complex64::new(0.0, 0.0); 5];
    if theta.abs() < 0.8 {
        // Taylor series: m_k = Σ_n (iθ)^n / (n! (k+n+1))
        for (k, mk) in m.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut sum = term / (k as f64 + 1.0);
            for n in 1..24 {
                term *= Complex64::new(0.0, theta) / n as f64;
                let add = term / (k + n + 1) as f64;
                sum += add;
                if add.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            *mk = sum;
        }
    } else {
        let itheta = Complex64::new(0.0, theta);
        let eit = Complex64::new(0.0, theta).exp();
        m[0] = (eit - 1.0) / itheta;
        for k in 1..5 {
            m[k] = (eit - k as f64 * m[k - 1]) / itheta;
        }
    }
    m
}

/// Partial phase moments m_k(θ; s) = ∫₀^s x^k e^{iθx} dx for k = 0..4.
fn phase_moments_partial(theta: f64, s: f64) -> [Complex64; 5] {
    let mut m = [Complex64::new(0.0, 0.0); 5];
    if (theta * s).abs() < 0.8 {
        for (k, mk) in m.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut sum = term * s.powi(k as i32 + 1) / (k as f64 + 1.0);
            for n in 1..24 {
                term *= Complex64::new(0.0, theta) / n as f64;
                let add = term * s.powi((k + n + 1) as i32) / (k + n + 1) as f64;
                sum += add;
                if add.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            *mk = sum;
        }
    } else {
        let itheta = Complex64::new(0.0, theta);
        let eits = Complex64::new(0.0, theta * s).exp();
        m[0] = (eits - 1.0) / itheta;
        for k in 1..5 {
            m[k] = (s.powi(k as i32) * eits - k as f64 * m[k - 1]) / itheta;
        }
    }
    m
}

fn filon_with_moments(
    samples: &[Complex64; 5],
    a: f64,
    h: f64,
    t: f64,
    m: &[Complex64; 5],
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, row) in FILON_VANDERMONDE_INV.iter().enumerate() {
        let mut c = Complex64::new(0.0, 0.0);
        for (i, &w) in row.iter().enumerate() {
            c += samples[i] * w;
        }
        acc += c * m[k];
    }
    acc * h * Complex64::new(0.0, t * a).exp()
}

/// Filon panel from five equispaced samples at a, a+h/4, …, a+h:
/// ∫_a^{a+h} p(ω) e^{iωt} dω with p the quartic interpolant.
pub fn filon_fixed(samples: &[Complex64; 5], a: f64, h: f64, t: f64) -> Complex64 {
    filon_with_moments(samples, a, h, t, &phase_moments(t * h))
}

/// Partial Filon panel ∫_a^{a+frac·h} p(ω) e^{iωt} dω, frac ∈ [0, 1], with p
/// the quartic through the full panel's five samples.
pub fn filon_fixed_partial(
    samples: &[Complex64; 5],
    a: f64,
    h: f64,
    t: f64,
    frac: f64,
) -> Complex64 {
    filon_with_moments(samples, a, h, t, &phase_moments_partial(t * h, frac))
}

/// Cumulative Filon transform of a uniformly sampled real function:
/// Φ(ν, u) = ∫₀^u f(u′) e^{iνu′} du′ read off at checkpoints inside the
/// sampled range. The quartic panel coefficients are precomputed once, so a
/// transform costs ~10 multiplies per panel.
pub struct FilonSweep {
    coeffs: Vec<[f64; 5]>,
    panel: f64,
}

impl FilonSweep {
    /// Samples at spacing h; every 4 intervals form one panel (the sample
    /// count should be 4·n + 1; trailing partial data is dropped).
    pub fn new(samples: &[f64], h: f64) -> Self {
        let n_panels = (samples.len() - 1) / 4;
        let mut coeffs = Vec::with_capacity(n_panels);
        for k in 0..n_panels {
            let s = &samples[4 * k..4 * k + 5];
            let mut c = [0.0; 5];
            for (ck, row) in c.iter_mut().zip(FILON_VANDERMONDE_INV.iter()) {
                *ck = row.iter().zip(s).map(|(w, v)| w * v).sum();
            }
            coeffs.push(c);
        }
        FilonSweep {
            coeffs,
            panel: 4.0 * h,
        }
    }

    pub fn panel_width(&self) -> f64 {
        self.panel
    }

    pub fn panel_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Checkpoints (panel index k, fraction within panel) must be ascending;
    /// returns Φ(ν, (k + frac)·panel) for each.
    pub fn transform(&self, nu: f64, checkpoints: &[(usize, f64)]) -> Vec<Complex64> {
        let theta = nu * self.panel;
        let m = phase_moments(theta);
        let step = Complex64::new(0.0, theta).exp();
        let mut phase = Complex64::new(1.0, 0.0);
        let mut phi = Complex64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut ci = 0;
        for (k, c) in self.coeffs.iter().enumerate() {
            while ci < checkpoints.len() && checkpoints[ci].0 == k {
                let frac = checkpoints[ci].1;
                let mut val = phi;
                if frac > 0.0 {
                    let mp = phase_moments_partial(theta, frac);
                    let mut dot = Complex64::new(0.0, 0.0);
                    for i in 0..5 {
                        dot += c[i] * mp[i];
                    }
                    val += self.panel * phase * dot;
                }
                out.push(val);
                ci += 1;
            }
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..5 {
                dot += c[i] * m[i];
            }
            phi += self.panel * phase * dot;
            phase *= step;
        }
        while ci < checkpoints.len() {
            out.push(phi);
            ci += 1;
        }
        out
    }
}

/// Filon panel: ∫_a^b f(ω) e^{iωt} dω with f interpolated by a quartic.
fn filon5<F>(f: &F, a: f64, b: f64, t: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = b - a;
    let samples = [f(a), f(a + 0.25 * h), f(a + 0.5 * h), f(a + 0.75 * h), f(b)];
    filon_fixed(&samples, a, h, t)
}

/// Adaptive oscillatory integration of ∫_a^b f(ω) e^{iωt} dω.
///
/// Subdivides until the whole-panel and split-panel Filon values agree.
pub fn oscillatory<F>(f: &F, a: f64, b: f64, t: f64, tol: QuadTol) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    struct Panel {
        a: f64,
        b: f64,
        fine: Complex64,
        err: f64,
    }
    let make = |f: &F, a: f64, b: f64| {
        let coarse = filon5(f, a, b, t);
        let mid = 0.5 * (a + b);
        let fine = filon5(f, a, mid, t) + filon5(f, mid, b, t);
        let err = (fine - coarse).norm();
        Panel { a, b, fine, err }
    };
    // seed with enough panels to resolve f's own structure
    let n0 = 8;
    let mut heap: Vec<Panel> = (0..n0)
        .map(|i| {
            let pa = a + (b - a) * i as f64 / n0 as f64;
            let pb = a + (b - a) * (i + 1) as f64 / n0 as f64;
            make(f, pa, pb)
        })
        .collect();
    for _ in 0..4000 {
        let total: Complex64 = heap.iter().map(|p| p.fine).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if err <= tol.abs.max(tol.rel * total.norm()) {
            return Ok(total);
        }
        let (idx, _) = heap
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let p = heap.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        heap.push(make(f, p.a, mid));
        heap.push(make(f, mid, p.b));
    }
    let total: Complex64 = heap.iter().map(|p| p.fine).sum();
    let err: f64 = heap.iter().map(|p| p.err).sum();
    if err <= 100.0 * tol.abs.max(tol.rel * total.norm()) {
        Ok(total)
    } else {
        Err(Error::Numerics(format!(
            "oscillatory quadrature did not converge: achieved abs error {err:.3e} on [{a}, {b}], t = {t}"
        )))
    }
}

/// Adaptive panelization of ∫_a^b f(ω)e^{iωt} dω at a reference phase t:
/// returns the refined edge list (one extra bisection level for margin) so
/// the integrand can be tabulated once and re-integrated at any |t'| ≤ |t|.
pub fn adaptive_edges<F>(f: &F, a: f64, b: f64, t: f64, tol: QuadTol) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Complex64,
{
    struct Panel {
        a: f64,
        b: f64,
        fine: Complex64,
        err: f64,
    }
    let make = |f: &F, a: f64, b: f64| {
        let coarse = filon5(f, a, b, t);
        let mid = 0.5 * (a + b);
        let fine = filon5(f, a, mid, t) + filon5(f, mid, b, t);
        let err = (fine - coarse).norm();
        Panel { a, b, fine, err }
    };
    let n0 = 8;
    let mut heap: Vec<Panel> = (0..n0)
        .map(|i| {
            let pa = a + (b - a) * i as f64 / n0 as f64;
            let pb = a + (b - a) * (i + 1) as f64 / n0 as f64;
            make(f, pa, pb)
        })
        .collect();
    for _ in 0..4000 {
        let total: Complex64 = heap.iter().map(|p| p.fine).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if err <= tol.abs.max(tol.rel * total.norm()) {
            break;
        }
        let (idx, _) = heap
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .ok_or_else(|| Error::Numerics("empty panel heap".into()))?;
        let p = heap.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        heap.push(make(f, p.a, mid));
        heap.push(make(f, mid, p.b));
    }
    let mut edges: Vec<f64> = Vec::with_capacity(2 * heap.len() + 1);
    for p in &heap {
        edges.push(p.a);
        edges.push(0.5 * (p.a + p.b));
    }
    edges.push(b);
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();
    Ok(edges)
}

/// Asymptotic tail ∫_X^∞ ω^{-p} e^{iωt} dω for t·X ≫ 1.
pub fn oscillatory_tail_inv_power(x: f64, t: f64, p: f64) -> Complex64 {
    let itx = Complex64::new(0.0, t * x);
    let phase = Complex64::new(0.0, t * x).exp();
    let mut series = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for m in 0..6 {
        term *= (p + m as f64) / itx;
        series += term;
    }
    -phase / (Complex64::new(0.0, t) * x.powf(p)) * series
}

/// Plain power tail ∫_X^∞ c ω^{-p} dω (no oscillation), p > 1.
pub fn power_tail(x: f64, p: f64) -> f64 {
    x.powf(1.0 - p) / (p - 1.0)
}

/// Semi-infinite oscillatory integral ∫_a^∞ f(ω) e^{iωt} dω where
/// f(ω) ≈ Σ c_k ω^{-p_k} beyond `x_split`. The numeric part runs on
/// [a, x_split]; the analytic tail uses the supplied inverse-power model.
pub fn oscillatory_semi_infinite<F>(
    f: &F,
    a: f64,
    t: f64,
    x_split: f64,
    tail: &[(f64, Complex64)],
    tol: QuadTol,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    // push the split point out until the asymptotic tail is trustworthy
    let x = if t.abs() * x_split < 40.0 && t != 0.0 {
        x_split.max(40.0 / t.abs())
    } else {
        x_split
    };
    let body = oscillatory(f, a, x, t, tol)?;
    let mut tail_val = Complex64::new(0.0, 0.0);
    for &(p, c) in tail {
        if t == 0.0 {
            tail_val += c * power_tail(x, p);
        } else {
            tail_val += c * oscillatory_tail_inv_power(x, t, p);
        }
    }
    Ok(body + tail_val)
}
