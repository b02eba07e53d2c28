// Scale function, speed density and the exit quantities they encode.

use ltlab::media::{Medium, Side};
use ltlab::scale::ScaleSpeed;

pub fn run_example() -> ltlab::Result<()> {
    let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 3.0), (1.0, 1.0))?;
    let ss = ScaleSpeed::new(&m);

    for side in [Side::Left, Side::Right] {
        let d = ss.densities_at(0.0, side)?;
        println!(
            "0{}: s' = {:.4}, m' = {:.4}, q = {:.4}, m's'q = {:.4}",
            if side == Side::Left { "-" } else { "+" },
            d.s_prime,
            d.m_prime,
            d.qv_rate,
            d.m_prime * d.s_prime * d.qv_rate
        );
    }

    let (a, x, b) = (-0.4, 0.0, 0.6);
    println!("P(exit at {b} | start {x}) = {:.6}", ss.exit_probability(a, x, b)?);
    println!("E[exit time]             = {:.6}", ss.mean_exit_time(a, x, b)?);

    let u = ss.scale_value(0.7)?;
    println!("s(0.7) = {u:.6}, s^-1(s(0.7)) = {:.12}", ss.inverse_scale_value(u)?);
    for row in ss.tabulate(5) {
        println!("x={:+.2} s={:+.4}", row.x, row.s);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
