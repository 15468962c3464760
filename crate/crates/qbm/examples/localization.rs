//! Nonlocal solutions f = f0 G_dot + df0 G (up to the memory term) reproduced by the
//! local equation f'' + gamma(t) f' + w2(t) f = 0.
//!
//!     cargo run --example localization

use qbm::green::localize_check;
use qbm::{BathModel, GreenSolution, Temperature};

fn main() -> qbm::Result<()> {
    let sol = GreenSolution::solve_cubic(&BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?)?;
    let grid: Vec<f64> = (0..=10).map(|i| i as f64).collect();
    for (f0, df0) in [(1.0, 0.0), (0.0, 1.0), (0.3, -0.8)] {
        let local = localize_check(&sol, f0, df0, &grid)?;
        let worst =
            grid.iter().zip(&local).map(|(&t, f)| (f - sol.nonlocal_solution(f0, df0, t)).abs()).fold(0.0, f64::max);
        println!("f(0) = {f0:+}, f'(0) = {df0:+}: max |local - nonlocal| on [0, 10] = {worst:.2e}");
    }
    for t in [0.0, 0.01, 0.05, 1.0, 10.0] {
        let lc = sol.local_coefficients(t);
        println!("t = {t:>5}: w2 = {:.6}, gamma = {:.6e}", lc.omega_sq, lc.gamma);
    }
    Ok(())
}
