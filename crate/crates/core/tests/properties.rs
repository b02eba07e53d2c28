use proptest::prelude::*;

use ltlab::fv::{advance, assemble_system, interface_flux, DensityField, Scheme};
use ltlab::localtime::{convert_lt, LocalTimeEstimate, Notion};
use ltlab::media::{beta_ratio_from_lambda, lambda_from_beta, Interface, Medium, MediumSpec, Piece, Side};
use ltlab::path::{build_grid, chain_parameters};
use ltlab::scale::ScaleSpeed;

fn two_piece(dm: f64, dp: f64, em: f64, ep: f64, lambda: f64) -> Medium {
    Medium::new(MediumSpec {
        window: [-2.0, 2.0],
        bounds: [0.05, 20.0],
        interfaces: vec![Interface::with_lambda(0.0, lambda)],
        pieces: vec![Piece::constant(-2.0, 0.0, dm, em), Piece::constant(0.0, 2.0, dp, ep)],
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_beta_round_trip(dm in 0.1f64..10.0, dp in 0.1f64..10.0, bm in 0.1f64..10.0, bp in 0.1f64..10.0) {
        let l = lambda_from_beta(dm, dp, bm, bp);
        prop_assert!(l > 0.0 && l < 1.0);
        let r = beta_ratio_from_lambda(dm, dp, l);
        prop_assert!((r - bp / bm).abs() <= 1e-12 * (bp / bm));
    }

    #[test]
    fn densities_multiply_to_two(
        dm in 0.1f64..10.0, dp in 0.1f64..10.0, em in 0.1f64..10.0, ep in 0.1f64..10.0,
        lambda in 0.05f64..0.95, x in -2.0f64..2.0,
    ) {
        let ss = ScaleSpeed::new(&two_piece(dm, dp, em, ep, lambda));
        for side in [Side::Left, Side::Right] {
            let d = ss.densities_at(x, side).unwrap();
            prop_assert!((d.m_prime * d.s_prime * d.qv_rate - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_inverse_round_trip(
        dm in 0.1f64..10.0, dp in 0.1f64..10.0, em in 0.1f64..10.0, ep in 0.1f64..10.0,
        lambda in 0.05f64..0.95, x in -2.0f64..2.0,
    ) {
        let ss = ScaleSpeed::new(&two_piece(dm, dp, em, ep, lambda));
        let back = ss.inverse_scale_value(ss.scale_value(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() < 1e-10);
    }

    #[test]
    fn chain_probabilities_are_proper(
        dm in 0.2f64..5.0, dp in 0.2f64..5.0, em in 0.2f64..5.0, ep in 0.2f64..5.0, lambda in 0.05f64..0.95,
    ) {
        let m = two_piece(dm, dp, em, ep, lambda);
        let chain = chain_parameters(&ScaleSpeed::new(&m), &build_grid(&m, 0.1).unwrap());
        let k = chain.grid().interface_nodes()[0];
        prop_assert!((chain.p_up()[k] - lambda).abs() < 1e-12);
        prop_assert!(chain.tau().iter().all(|&t| t > 0.0));
    }

    #[test]
    fn notion_conversions_invert(
        dm in 0.1f64..10.0, dp in 0.1f64..10.0, em in 0.1f64..10.0, ep in 0.1f64..10.0,
        lambda in 0.05f64..0.95, value in 0.0f64..10.0, right in any::<bool>(),
    ) {
        let ss = ScaleSpeed::new(&two_piece(dm, dp, em, ep, lambda));
        let side = if right { Side::Right } else { Side::Left };
        let est = LocalTimeEstimate { x: 0.0, side, epsilon: Some(0.1), value, stderr: 0.0, notion: Notion::Nlt, batch_values: vec![value] };
        for target in [Notion::Smlt, Notion::Dlt] {
            let back = convert_lt(&convert_lt(&est, target, &ss).unwrap(), Notion::Nlt, &ss).unwrap();
            prop_assert!((back.value - value).abs() <= 1e-12 * value.max(1.0));
        }
    }

    #[test]
    fn steady_flux_vanishes(ul in 0.0f64..5.0, a in 0.01f64..1.0, b in 0.01f64..1.0, r in 0.1f64..10.0) {
        prop_assert_eq!(interface_flux(ul, r * ul, a, b, r), 0.0);
    }

    #[test]
    fn implicit_euler_conserves_and_stays_nonnegative(
        dm in 0.2f64..5.0, dp in 0.2f64..5.0, em in 0.2f64..5.0, ep in 0.2f64..5.0,
        lambda in 0.05f64..0.95, dt in 1e-4f64..1e-1, seed in 0u64..1000,
    ) {
        let m = two_piece(dm, dp, em, ep, lambda);
        let sys = assemble_system(&m, 60, dt, Scheme::ImplicitEuler).unwrap();
        let u: Vec<f64> = (0..60).map(|i| ((i as u64 * 2654435761 + seed) % 97) as f64 / 97.0).collect();
        let f0 = DensityField { u, t: 0.0 };
        let f1 = advance(&sys, &f0, 50).unwrap();
        prop_assert!((f1.mass(&sys) - f0.mass(&sys)).abs() <= 1e-12 * f0.mass(&sys));
        prop_assert!(f1.u.iter().all(|&v| v >= -1e-14));
    }
}
