//! Normal-mode diagonalization of two coupled oscillators and the
//! counterterm matrix of their bath couplings.
//!
//! Run with: cargo run --release --example normal_modes

use duet_baths::model::{counterterms, diagonalize, BathSpec, SystemParams};

fn main() {
    // two detuned oscillators with a mechanical coupling Ω and a bath
    // orientation angle θ
    let params = SystemParams::new(2.0, 1.0, 1.0, 0.3).unwrap();
    let basis = diagonalize(&params).unwrap();

    println!(
        "bare parameters: Ωa = {}, Ωb = {}, Ω = {}, θ = {}",
        params.omega_a, params.omega_b, params.omega_c, params.theta
    );
    println!();
    println!("normal modes:");
    println!("  Ω+      = {:.12}", basis.omega_plus);
    println!("  Ω-      = {:.12}", basis.omega_minus);
    println!("  W       = {:.12}", basis.w_mean);
    println!("  Δ       = {:.12}", basis.detuning);
    println!("  λ       = {:.12}", basis.lambda_angle);
    println!("  ψ = λ+θ = {:.12}", basis.psi_angle);
    println!(
        "  V(λ)    = [{:+.6} {:+.6}; {:+.6} {:+.6}]",
        basis.rotation[0][0], basis.rotation[0][1], basis.rotation[1][0], basis.rotation[1][1]
    );

    let bath1 = BathSpec::strict_ohmic(0.1, 100.0, 0.0).unwrap();
    let bath2 = BathSpec::strict_ohmic(0.01, 100.0, 0.0).unwrap();
    let ct = counterterms(&bath1, &bath2, basis.psi_angle);
    println!();
    println!("counterterms for γ1 = 0.1, γ2 = 0.01, Λ = 100:");
    println!("  δΩ++ = {:.8}", ct.d_pp);
    println!("  δΩ-- = {:.8}", ct.d_mm);
    println!("  δΩ+- = {:.8}   (vanishes for identical baths)", ct.d_pm);
}
