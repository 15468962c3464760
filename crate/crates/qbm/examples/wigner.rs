//! Gaussian decomposition of the projected cat and its Wigner function on a grid.
//!
//!     cargo run --example wigner [t]

use qbm::catstates::{
    evolve_projected_cat, evolve_two_translation, fringe_visibility, purity_entropy, wigner_grid, GridSpec,
};
use qbm::{BathModel, BathStack, ProjectedCatState, Temperature, TwoTranslationState};

fn main() -> qbm::Result<()> {
    let t: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let stack = BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?)?;
    let cat = ProjectedCatState::default();
    let d = evolve_projected_cat(&cat, &stack, t)?;
    println!("projected cat L0 = {}, P0 = {}, delta = {} at t = {t}", cat.l0, cat.p0, cat.delta);
    for pk in &d.peaks {
        let (purity, entropy) = purity_entropy(&pk.cov)?;
        println!(
            "  peak {}  centre ({:+.4}, {:+.4})  weight {:.4}  purity {purity:.5}  entropy {entropy:.5}",
            pk.label, pk.center[0], pk.center[1], pk.weight
        );
    }
    for it in &d.interferences {
        println!(
            "  pair {}  A = {:.5e}  wave vector ({:+.4}, {:+.4})  wavelength {:.3}",
            it.label,
            it.exponent,
            it.wave_vector[0],
            it.wave_vector[1],
            it.wavelength()
        );
    }
    let spec = GridSpec::covering(&d, 8.0, 401);
    let grid = wigner_grid(&d, &spec)?;
    println!("integral: closed form {:.12}, grid {:.12}; min W = {:.4e}", d.integral(), grid.integral(), grid.min());
    println!("fringe visibility {:.4e}", fringe_visibility(&d, &spec));

    let va = evolve_two_translation(&TwoTranslationState { l0: cat.l0 }, &stack, t)?;
    let spec = GridSpec::covering(&va, 8.0, 401);
    println!(
        "\ntwo translations: A = {:.5e}, fringe visibility {:.4e}",
        va.interferences[0].exponent,
        fringe_visibility(&va, &spec)
    );
    Ok(())
}
