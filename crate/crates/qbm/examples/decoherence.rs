//! Decoherence exponent of the two-translation state by both routes, the
//! short-time law, and decoherence times of both cat states.
//!
//!     cargo run --example decoherence [L0]

use qbm::catstates::{
    decoherence_exponent_alpha, decoherence_exponent_s, decoherence_time, decoherence_time_projected,
    principal_exponent,
};
use qbm::equilibrium::short_time_decoherence;
use qbm::{BathModel, BathStack, ProjectedCatState, Temperature};

fn main() -> qbm::Result<()> {
    let l0: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5.0);
    let stack = BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?)?;
    let cat = ProjectedCatState::new(l0, 0.0, 1.0)?;
    let l2 = l0 * l0;
    println!("{:>7} {:>12} {:>12} {:>12} {:>12}", "t", "A/L2", "A/L2 (alpha)", "short-time", "A_ad/L2");
    for t in [0.001, 0.003, 0.01, 0.03, 0.1, 0.5, 1.0, 1.5, 3.0, 6.0] {
        let a = decoherence_exponent_s(&stack.eq, &stack.scalars(t)?.s, l0);
        let alpha = decoherence_exponent_alpha(&stack, t, l0)?;
        let approx = short_time_decoherence(&stack.model, &stack.eq, t);
        let ad = principal_exponent(&cat, &stack, t)?;
        println!("{t:>7} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e}", a / l2, alpha / l2, approx, ad / l2);
    }
    let fmt = |t: Option<f64>| t.map_or("not reached".to_string(), |t| format!("{t:.5}"));
    println!("\nt_dec (two translations) = {}", fmt(decoherence_time(&stack, l0, 10.0)?));
    println!("t_dec (projected cat)    = {}", fmt(decoherence_time_projected(&cat, &stack, 10.0)?));
    Ok(())
}
