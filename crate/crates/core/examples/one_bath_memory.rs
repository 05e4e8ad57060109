//! One-bath memory effect: with degenerate modes and γ2 = 0 one linear
//! combination never damps, so the coherence keeps a permanent imprint of
//! the initial state, asymptoting to −sin2ψ/4W.
//!
//! Run with: cargo run --release --example one_bath_memory

use duet_baths::correlators::coherence_initial_strong;
use std::f64::consts::FRAC_PI_4;

fn main() {
    let (w, psi, g1) = (1.0, FRAC_PI_4, 0.1);
    println!("γ1 = {g1}, γ2 = 0, ψ = π/4: W<q+(t)q-(t)>0 vs Wt");
    println!();
    for t in [0.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0] {
        let v = coherence_initial_strong(w, psi, g1, 0.0, t);
        println!("  Wt = {t:>6}: {v:+.6}");
    }
    println!();
    println!(
        "asymptote −sin2ψ/4W = {:+.6}",
        -(2.0 * psi).sin() / (4.0 * w)
    );
    println!("a tiny detuning lifts the degeneracy and erases this memory on");
    println!("the slow scale γ1/Δ² (see the greens_regimes example).");

    // same angle, both baths damped: the memory disappears
    println!();
    println!("for comparison, with γ2 = 0.03 the transient dies out:");
    for t in [20.0, 100.0, 400.0] {
        let v = coherence_initial_strong(w, psi, g1, 0.03, t);
        println!("  Wt = {t:>6}: {v:+.3e}");
    }
}
