//! Builds the reference grid and prints the diffusivity and reaction data.

use std::sync::Arc;

use hetero_rd::{build_grid, BistableReaction, DiffusivityProfile, FaceAveraging, InterfaceSide};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Arc::new(build_grid(4.0, 400, &[1.0, 3.0])?);
    println!("dx = {}, inner cells {:?}", grid.dx(), grid.inner_cells());
    for which in [InterfaceSide::Left, InterfaceSide::Right] {
        println!("{which:?} interface face {:?}", grid.interface_face(which));
    }

    let eps = (-4f64).exp();
    let sharp = DiffusivityProfile::sharp(grid.clone(), eps)?;
    let smooth = DiffusivityProfile::smoothed(grid.clone(), eps, 8.0 * grid.dx())?;
    let face = grid.interface_face(InterfaceSide::Left).unwrap();
    let (hs, ss) = (
        sharp.face_diffusivity(FaceAveraging::Harmonic),
        smooth.face_diffusivity(FaceAveraging::Harmonic),
    );
    for k in face - 10..=face + 2 {
        let x = grid.face_positions()[k];
        println!("x = {x:.4}  sharp {:.5}  smoothed {:.5}", hs[k], ss[k]);
    }

    let r = BistableReaction::reference();
    println!("steady states {:?}", r.steady_states());
    println!("M_f = {:.12}, sup f' = {:.12}", r.m_f(), r.m_tilde_f());
    Ok(())
}
