//! Master-equation coefficients through the preparation jolt and the stationary state.
//!
//!     cargo run --example coefficients

use qbm::coefficients::sample_grid;
use qbm::{BathModel, BathStack, StationaryState, Temperature};

fn main() -> qbm::Result<()> {
    let stack = BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?)?;
    let grid = [0.0, 0.002, 0.005, 0.01, 0.03, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0];
    println!("{:>6} {:>10} {:>11} {:>11} {:>11} {:>11} {:>11}", "t", "w2", "gamma", "D1", "D2", "C1", "C2");
    for s in sample_grid(&stack, &grid)? {
        println!(
            "{:>6} {:>10.6} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.3e} {:>11.3e}",
            s.t, s.omega_sq, s.gamma, s.d1, s.d2, s.c1_tilde, s.c2_tilde
        );
    }
    let st = StationaryState::from_stack(&stack)?;
    println!("\nstationary at t = {:.0}: d1 = {:.6e}, d2 = {:.6e}", st.t, st.d1, st.d2);
    println!(
        "sigma_x2 = {:.6} (q2 = {:.6}), sigma_p2 = {:.6} (p2 = {:.6})",
        st.sigma_x2, stack.eq.q2, st.sigma_p2, stack.eq.p2
    );
    Ok(())
}
