// Build media, resolve transmission parameters and read validation reports.

use ltlab::media::{Interface, Medium, MediumSpec, Piece, Rule};

pub fn run_example() -> ltlab::Result<()> {
    // half the diffusivity on the left, equal cross-sections
    let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0))?;
    println!("lambda_0 = {:.6} (flux continuity gives D+/(D+ + D-) = 2/3)", m.lambda(0));
    println!("beta+/beta- = {:.6}", m.beta_ratio(0));
    println!("phi = {:?}", m.phi().values());
    println!("eta regime: {:?}", m.eta_regime());

    // lambda on the closed boundary is rejected, with the rule named
    let bad = MediumSpec {
        window: [-1.0, 1.0],
        bounds: [0.5, 2.0],
        interfaces: vec![Interface::with_lambda(0.0, 1.0)],
        pieces: vec![Piece::constant(-1.0, 0.0, 1.0, 1.0), Piece::constant(0.0, 1.0, 1.0, 1.0)],
    };
    let report = bad.validate();
    assert!(report.has(Rule::LambdaRange));
    print!("{report}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
