//! Green's function 𝔾(t) in each regime: strong-coupling Δ=0 closed form,
//! one-bath, weak coupling, and the numerical Bromwich inversion, with the
//! cross-regime agreement printed per time.
//!
//! Run with: cargo run --release --example greens_regimes

use duet_baths::greens::{greens_one_bath, greens_strong_delta0, greens_weak, GreensKernel};
use duet_baths::quad::QuadTol;
use std::f64::consts::FRAC_PI_4;

fn main() {
    let (w, psi, g1, g2) = (1.0, FRAC_PI_4, 0.1, 0.03);
    let numeric =
        GreensKernel::numeric_strict(w, 0.0, psi, g1, g2, 100.0, QuadTol::default()).unwrap();

    println!("strong coupling Δ=0, γ1={g1}, γ2={g2}, ψ=π/4");
    println!(
        "{:>6} {:>14} {:>14} {:>12}",
        "Wt", "G00 closed", "G00 Bromwich", "|diff|"
    );
    for t in [0.5, 2.0, 8.0, 20.0, 50.0] {
        let cf = greens_strong_delta0(w, psi, g1, g2, t);
        let num = numeric.eval(t).unwrap();
        println!(
            "{t:>6} {:>14.9} {:>14.9} {:>12.2e}",
            cf[0][0],
            num[0][0],
            (cf[0][0] - num[0][0]).abs()
        );
    }

    println!();
    println!("one-bath case (γ2 = 0): the undamped mode keeps the off-diagonal alive");
    for t in [10.0, 100.0, 400.0] {
        let g = greens_one_bath(w, psi, g1, t);
        println!("  Wt = {t:>5}: G01 = {:+.6}", g[0][1]);
    }

    println!();
    println!("weak coupling (Δ = 0.25, γ1 = 0.05, γ2 = 0.005): leading-order form");
    let numeric =
        GreensKernel::numeric_strict(w, 0.25, psi, 0.05, 0.005, 100.0, QuadTol::default()).unwrap();
    println!(
        "{:>6} {:>14} {:>14} {:>12}",
        "Wt", "G01 weak", "G01 Bromwich", "|diff|"
    );
    for t in [2.0, 10.0, 25.0] {
        let wk = greens_weak(w, 0.25, psi, 0.05, 0.005, t);
        let num = numeric.eval(t).unwrap();
        println!(
            "{t:>6} {:>14.9} {:>14.9} {:>12.2e}",
            wk[0][1],
            num[0][1],
            (wk[0][1] - num[0][1]).abs()
        );
    }

    println!();
    println!("pole scan of the detuned one-bath case (slow rate ∝ Δ²/γ1):");
    for delta in [0.005, 0.01, 0.02] {
        let k = GreensKernel::numeric_strict(w, delta, psi, g1, 0.0, 100.0, QuadTol::default())
            .unwrap();
        let rates = k.bromwich().unwrap().mode_rates();
        let slow = rates.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        println!(
            "  Δ = {delta:>6}: slowest rate = {slow:.3e}  (Δ²/γ1 = {:.3e})",
            delta * delta / g1
        );
    }
}
