//! Property-based invariants over randomized parameters.

use proptest::prelude::*;
use std::f64::consts::PI;

use duet_baths::correlators::{self, quadrature};
use duet_baths::greens::{damped_sinc, damped_sinc_deriv, greens_strong_delta0, GreensKernel};
use duet_baths::model::{
    counterterms, diagonalize, mat2_mul, mat2_t, BathSpec, CutoffFamily, SystemParams,
};
use duet_baths::quad::QuadTol;
use duet_baths::spectral::{occupation, self_energy, spectral_density};

proptest! {
    /// Normal-mode diagonalization: rotation orthogonality, similarity,
    /// trace and determinant preservation, ψ = λ + θ.
    #[test]
    fn diagonalization_invariants(
        oa in 0.3f64..3.0,
        ob in 0.3f64..3.0,
        oc in 0.0f64..2.0,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let p = SystemParams::new(oa, ob, oc, theta).unwrap();
        let b = diagonalize(&p).unwrap();
        prop_assert!((b.psi_angle - b.lambda_angle - theta).abs() < 1e-14);
        let v = b.rotation;
        let vvt = mat2_mul(&v, &mat2_t(&v));
        prop_assert!((vvt[0][0] - 1.0).abs() < 1e-12 && vvt[0][1].abs() < 1e-12);
        let d = mat2_mul(&mat2_mul(&v, &p.frequency_matrix()), &mat2_t(&v));
        prop_assert!(d[0][1].abs() < 1e-10 * (1.0 + d[0][0].abs()));
        let (op2, om2) = (b.omega_plus.powi(2), b.omega_minus.powi(2));
        let tr = oa * oa + ob * ob + 2.0 * oc * oc;
        prop_assert!((op2 + om2 - tr).abs() < 1e-12 * tr);
        let det = (oa * oa + oc * oc) * (ob * ob + oc * oc) - oc.powi(4);
        prop_assert!((op2 * om2 - det).abs() < 1e-10 * det);
        prop_assert!(b.omega_plus >= b.omega_minus && b.omega_minus > 0.0);
    }

    /// Counterterm matrix: linear in the per-bath shifts and π-periodic in ψ.
    #[test]
    fn counterterm_invariants(
        g1 in 0.0f64..0.5,
        g2 in 0.0f64..0.5,
        lam in 1.0f64..200.0,
        psi in -3.0f64..3.0,
    ) {
        let b1 = BathSpec::new(g1, lam, 0.0, CutoffFamily::StrictOhmic).unwrap();
        let b2 = BathSpec::new(g2, lam, 0.0, CutoffFamily::StrictOhmic).unwrap();
        let ct = counterterms(&b1, &b2, psi);
        let ct_shift = counterterms(&b1, &b2, psi + PI);
        prop_assert!((ct.d_pp - ct_shift.d_pp).abs() < 1e-10 * (1.0 + ct.d_pp.abs()));
        prop_assert!((ct.d_pm - ct_shift.d_pm).abs() < 1e-10 * (1.0 + ct.d_pm.abs()));
        // doubling both couplings doubles every entry
        let b1d = BathSpec::new(2.0 * g1, lam, 0.0, CutoffFamily::StrictOhmic).unwrap();
        let b2d = BathSpec::new(2.0 * g2, lam, 0.0, CutoffFamily::StrictOhmic).unwrap();
        let ctd = counterterms(&b1d, &b2d, psi);
        prop_assert!((ctd.d_pm - 2.0 * ct.d_pm).abs() < 1e-10 * (1.0 + ct.d_pm.abs()));
        // trace identity: d_pp + d_mm = δΩ₁ + δΩ₂ at any angle
        let tr = b1.counterterm() + b2.counterterm();
        prop_assert!((ct.d_pp + ct.d_mm - tr).abs() < 1e-12 * (1.0 + tr));
    }

    /// Bose occupation identity n(−ω) = −(1 + n(ω)).
    #[test]
    fn occupation_identity(t in 0.01f64..50.0, w in 0.01f64..40.0) {
        let n = occupation(t, w).unwrap();
        let m = occupation(t, -w).unwrap();
        prop_assert!((m + 1.0 + n).abs() < 1e-10 * (1.0 + n.abs()));
    }

    /// Spectral parity: Im χ odd and equal to σ; Re χ even.
    #[test]
    fn self_energy_parity(
        g in 0.0f64..0.5,
        lam in 1.0f64..100.0,
        w in 0.01f64..0.95,
        family in 0usize..3,
    ) {
        let fam = [CutoffFamily::SharpCutoff, CutoffFamily::Drude, CutoffFamily::StrictOhmic]
            [family];
        let b = BathSpec::new(g, lam, 0.0, fam).unwrap();
        let omega = w * lam;
        let p = self_energy(&b, omega).unwrap();
        let m = self_energy(&b, -omega).unwrap();
        prop_assert!((p.im + m.im).abs() < 1e-12 * (1.0 + p.im.abs()));
        prop_assert!((p.re - m.re).abs() < 1e-12 * (1.0 + p.re.abs()));
        prop_assert!((p.im - spectral_density(&b, omega)).abs() < 1e-14 * (1.0 + p.im.abs()));
    }

    /// Green's function initial conditions 𝔾(0) = 0, 𝔾̇(0) = 1 and the
    /// damped kernel's continuity across critical damping.
    #[test]
    fn greens_initial_conditions(
        w in 0.4f64..2.0,
        psi in 0.0f64..1.5,
        g1 in 0.0f64..0.4,
        g2 in 0.0f64..0.4,
    ) {
        let g0 = greens_strong_delta0(w, psi, g1, g2, 0.0);
        for row in &g0 {
            for v in row {
                prop_assert!(v.abs() < 1e-14);
            }
        }
        prop_assert!((damped_sinc_deriv(g1, w * w, 0.0) - 1.0).abs() < 1e-14);
        // sinh/sin branches join smoothly at γ = 2W
        let t = 1.7;
        let under = damped_sinc(2.0 * w * (1.0 - 1e-6), w * w, t);
        let over = damped_sinc(2.0 * w * (1.0 + 1e-6), w * w, t);
        prop_assert!((under - over).abs() < 1e-4 * (under.abs() + 1e-6));
    }

    /// Effective temperatures: convex combinations bounded by (T₁, T₂) and
    /// summing to T₁ + T₂.
    #[test]
    fn effective_temperature_bounds(psi in 0.0f64..std::f64::consts::TAU, t1 in 0.0f64..50.0, t2 in 0.0f64..50.0) {
        let (tp, tm) = correlators::effective_temperatures(psi, t1, t2);
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        prop_assert!(tp >= lo - 1e-12 && tp <= hi + 1e-12);
        prop_assert!(tm >= lo - 1e-12 && tm <= hi + 1e-12);
        prop_assert!((tp + tm - t1 - t2).abs() < 1e-10 * (1.0 + t1 + t2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// F closed form vs independent quadrature, and Hermitian symmetry,
    /// at randomized strong-coupling parameters.
    #[test]
    fn f_function_random_cross_check(
        g in 0.02f64..0.3,
        t_temp in 0.2f64..8.0,
        tau in 0.05f64..3.0,
    ) {
        let bath = BathSpec::strict_ohmic(g, 1e4, t_temp).unwrap();
        let cf = correlators::f_function(&bath, 1.0, tau).unwrap();
        let qd = quadrature::f_by_quadrature(g, 1.0, t_temp, tau,
                                             QuadTol { abs: 1e-12, rel: 1e-10 }).unwrap();
        prop_assert!((cf - qd).norm() < 1e-6 * cf.norm(), "cf={cf} qd={qd}");
        let neg = correlators::f_function(&bath, 1.0, -tau).unwrap();
        prop_assert!((neg - cf.conj()).norm() < 1e-14 * cf.norm());
    }

    /// Bromwich numeric inversion agrees with the Δ=0 closed form at
    /// randomized couplings.
    #[test]
    fn bromwich_random_cross_check(
        g1 in 0.02f64..0.25,
        g2 in 0.0f64..0.2,
        psi in 0.0f64..1.5,
        t in 0.1f64..30.0,
    ) {
        let k = GreensKernel::numeric_strict(1.0, 0.0, psi, g1, g2, 100.0, QuadTol::default())
            .unwrap();
        let num = k.eval(t).unwrap();
        let cf = greens_strong_delta0(1.0, psi, g1, g2, t);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((num[i][j] - cf[i][j]).abs() < 1e-6,
                             "t={t} entry ({i},{j}): {} vs {}", num[i][j], cf[i][j]);
            }
        }
    }
}
