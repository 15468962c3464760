//! Long-time diffusion against the classical limit D1 = gamma0 kT, D2 = 0.
//!
//!     cargo run --example high_temperature

use qbm::{BathModel, BathStack, StationaryState, Temperature};

fn main() -> qbm::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>12} {:>10}", "beta", "D1", "gamma0 kT", "D2", "|D2|/D1");
    for beta in [0.01, 0.1, 1.0, 10.0] {
        let model = BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(beta))?;
        let st = StationaryState::from_stack(&BathStack::new(model)?)?;
        println!("{beta:>8} {:>12.6e} {:>12.6e} {:>12.4e} {:>10.3e}", st.d1, 0.01 / beta, st.d2, st.d2.abs() / st.d1);
    }
    Ok(())
}
