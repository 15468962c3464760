//! Drude roots, equilibrium dispersions and the autocorrelation S(t).
//!
//!     cargo run --example equilibrium

use qbm::catstates::{purity_entropy, Covariance};
use qbm::equilibrium::weak_coupling;
use qbm::{BathModel, BathStack, Temperature};

fn main() -> qbm::Result<()> {
    let stack = BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?)?;
    for (z, c) in stack.green.roots().iter().zip(stack.green.residues()) {
        println!("z = {z:.10}   c = {c:.6e}");
    }
    let eq = stack.eq;
    let weak = weak_coupling(&stack.model);
    println!("q2 = {:.10}  (weak coupling {:.6})", eq.q2, weak.q2);
    println!("p2 = {:.10}  (weak coupling {:.6})", eq.p2, weak.p2);
    let (purity, entropy) = purity_entropy(&Covariance::diagonal(eq.q2, eq.p2))?;
    println!("q2 p2 = {:.6}, purity = {purity:.6}, entropy = {entropy:.6}", eq.uncertainty_product());

    println!("\n{:>6} {:>14} {:>14} {:>14}", "t", "S", "dS/dt", "d2S/dt2");
    for t in [0.0, 0.01, 0.1, 1.0, 5.0, 20.0] {
        let s = stack.acf.eval(t)?;
        println!("{t:>6} {:>14.6e} {:>14.6e} {:>14.6e}", s[0], s[1], s[2]);
    }
    Ok(())
}
