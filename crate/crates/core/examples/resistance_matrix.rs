//! Resistance matrix and shape coupling of the aligned pair, and how the
//! determinant collapses as the interaction strength approaches one.

use scallop_core::hydrodynamics::assemble;
use scallop_core::{Scallop, ScallopPairParams, SystemState};

fn main() -> scallop_core::Result<()> {
    let params = ScallopPairParams::validation_set().rescaled(0.1);
    let state = SystemState::aligned(0.0, params.distance);
    let asm = assemble(&state, &params)?;
    println!("lambda = {:.6}", params.lambda());
    println!("R ={}", asm.resistance);
    println!("Phi ={}", asm.coupling);
    let r11 = asm.block(Scallop::One, Scallop::One);
    let lambda = params.lambda();
    println!(
        "det R = {:.6e}, det(R11)^2 (1 - lambda^2)^3 = {:.6e}",
        asm.det,
        r11.determinant().powi(2) * (1.0 - lambda * lambda).powi(3)
    );

    println!("\n{:>10} {:>14} {:>14} singular", "lambda", "det R", "floor");
    for lambda in [0.0, 0.5, 0.9, 0.99, 0.9999, 0.999999] {
        let asm = assemble(&state, &params.with_interaction(lambda)?)?;
        println!("{lambda:>10} {:>14.6e} {:>14.6e} {}", asm.det, asm.singularity_floor(), asm.is_singular());
    }
    Ok(())
}
