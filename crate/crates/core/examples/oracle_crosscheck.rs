//! Finite-bath oracle cross-check: discretize both baths, evolve the exact
//! covariance of the full chain, and compare ⟨q+(t)q-(t)⟩ against the
//! analytic initial + noise decomposition. Also tracks the log-negativity
//! between the two system modes.
//!
//! Run with: cargo run --release --example oracle_crosscheck

use duet_baths::correlators::{GreensBackend, TransientNoise};
use duet_baths::model::{BathSpec, CutoffFamily, NormalModeBasis};
use duet_baths::oracle;
use duet_baths::quad::QuadTol;
use std::f64::consts::FRAC_PI_4;

fn main() {
    let (w, psi, g1, g2, lam, n) = (1.0, FRAC_PI_4, 0.1, 0.03, 20.0, 200);
    let b1 = BathSpec::new(g1, lam, 0.0, CutoffFamily::SharpCutoff).unwrap();
    let b2 = BathSpec::new(g2, lam, 0.0, CutoffFamily::SharpCutoff).unwrap();
    let basis = NormalModeBasis::from_renormalized(w, 0.0, psi).unwrap();

    let d1 = oracle::discretize(&b1, n, lam).unwrap();
    let d2 = oracle::discretize(&b2, n, lam).unwrap();
    println!(
        "N = {n} modes/bath, recurrence time = {:.1}",
        d1.recurrence_time()
    );

    let ct = oracle::discrete_counterterms(&d1, &d2, psi);
    let prop = oracle::build_hamiltonian(&basis, &ct, &d1, &d2)
        .diagonalize()
        .unwrap();
    let state0 = oracle::initial_state(&basis, &d1, &d2, 0.0, 0.0);

    let times: Vec<f64> = (1..=10).map(|i| 5.0 * i as f64).collect();
    let tn = TransientNoise::new(
        w,
        psi,
        &b1,
        &b2,
        GreensBackend::FiniteBandwidth,
        51.0,
        QuadTol::default(),
    )
    .unwrap();
    let analytic = tn.series(&times).unwrap();

    println!();
    println!(
        "{:>6} {:>13} {:>13} {:>10} {:>9}",
        "Wt", "oracle", "analytic", "|diff|", "E_N"
    );
    for (t, pt) in times.iter().zip(&analytic) {
        let sys = prop.system_covariance(&state0, *t);
        let en = oracle::log_negativity(&sys).unwrap();
        println!(
            "{t:>6.0} {:>+13.6e} {:>+13.6e} {:>10.2e} {:>9.5}",
            sys[0][1],
            pt.total(),
            (sys[0][1] - pt.total()).abs(),
            en
        );
    }

    // physics invariants of the propagator and the evolved state
    let s = prop.propagator(25.0);
    println!();
    println!(
        "symplectic defect |SᵀJS − J|∞ at Wt = 25: {:.2e}",
        oracle::symplectic_defect(&s)
    );
    let evolved = prop.evolve(&state0, 25.0);
    let nus = oracle::symplectic_eigenvalues(&evolved.cov).unwrap();
    println!(
        "smallest symplectic eigenvalue − 1/2:      {:+.2e}",
        nus[0] - 0.5
    );
    println!(
        "global purity defect ln det(2Σ):           {:+.2e}",
        oracle::log_purity_defect(&evolved.cov).unwrap()
    );
}
