//! Early-time growth of bath-mediated coherence: the second-order state
//! develops ⟨q+q-⟩ ∝ (γ1−γ2)t², the signature of entanglement between the
//! normal modes mediated by their coupling to different baths.
//!
//! Run with: cargo run --release --example entanglement_growth

use duet_baths::entanglement::{
    bath_difference_kernel, perturbative_growth, second_order_coherence_parts,
};
use duet_baths::model::{BathSpec, CutoffFamily};
use std::f64::consts::FRAC_PI_4;

fn main() {
    let lam = 10.0;
    let bath = |g: f64| BathSpec::new(g, lam, 0.0, CutoffFamily::SharpCutoff).unwrap();
    let (b1, b2) = (bath(0.1), bath(0.02));

    let k0 = bath_difference_kernel(&b1, &b2, FRAC_PI_4, 0.0).unwrap();
    println!(
        "vacuum difference kernel <b+b->(0) = {:+.6}  (zero for equal baths)",
        k0.re
    );
    println!();

    let ts: Vec<f64> = (0..12)
        .map(|i| 0.01 * (10.0f64).powf(i as f64 / 11.0))
        .collect();
    let growth = perturbative_growth(1.0, 0.0, FRAC_PI_4, &b1, &b2, &ts).unwrap();
    println!("{:>8} {:>14}", "Wt", "coherence");
    for (t, v) in growth.t_grid.iter().zip(&growth.values) {
        println!("{t:>8.4} {:>+14.6e}", v.re);
    }
    println!();
    println!(
        "fitted growth exponent over Wt ∈ [0.01, 0.1]: {:.4}",
        growth.growth_exponent
    );

    let parts = second_order_coherence_parts(1.0, 0.0, FRAC_PI_4, &b1, &b2, 0.1).unwrap();
    println!();
    println!("decomposition at Wt = 0.1:");
    println!("  bath-mediated piece : {:+.6e}", parts.bath_mediated);
    println!("  counterterm piece   : {:+.6e}", parts.counterterm);
    println!("  total               : {:+.6e}", parts.total());
    println!();
    println!("amplitude is exactly linear in (γ1−γ2):");
    for g1 in [0.04, 0.07, 0.10] {
        let p = second_order_coherence_parts(1.0, 0.0, FRAC_PI_4, &bath(g1), &b2, 0.1).unwrap();
        println!(
            "  γ1−γ2 = {:>4.2}: |coherence| = {:.6e}",
            g1 - 0.02,
            p.total().abs()
        );
    }
}
