// Finite-volume forward solve against the closed-form skew density.

use ltlab::fv::{l1_distance, p_from_q, solve_forward, Initial, Scheme};
use ltlab::media::Medium;
use ltlab::path::RescaledSkew;

pub fn run_example() -> ltlab::Result<()> {
    let m = Medium::single_interface((-6.0, 6.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0))?;
    let t = 0.5;
    let (sys, field) = solve_forward(&m, &Initial::Delta(0.0), t, 1500, 5e-4, Scheme::ImplicitEuler)?;
    let p = p_from_q(&sys, &m, &field, 0.0)?;
    let oracle = RescaledSkew::from_medium(&m)?;
    println!("mass = {:.15}", field.mass(&sys));
    println!("L1 distance to the skew density: {:.3e}", l1_distance(&sys, &p, |y| oracle.density(t, 0.0, y)));
    for tr in sys.traces(&field) {
        println!("interface {}: u- = {:.6}, u+ = {:.6}, flux = {:.3e}", tr.x, tr.u_minus, tr.u_plus, tr.flux);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
