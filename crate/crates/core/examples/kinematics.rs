//! Link directions, material points and their velocities for one state.

use std::f64::consts::PI;

use scallop_core::geometry::{point_on_link, point_velocity, state_link_direction};
use scallop_core::{Link, Scallop, StateRates, SystemState};

fn main() -> scallop_core::Result<()> {
    let state = SystemState {
        sigma1: PI + 0.3,
        sigma2: PI - 0.2,
        ..SystemState::aligned(0.25, 0.1)
    };
    for warning in state.validate(0.5)? {
        println!("warning: {warning}");
    }
    let rates = StateRates {
        xdot1: 0.1,
        thetadot1: -0.4,
        sigmadot1: 1.0,
        sigmadot2: -1.0,
        ..Default::default()
    };
    for i in Scallop::BOTH {
        for j in Link::BOTH {
            let e = state_link_direction(&state, i, j);
            let tip = point_on_link(&state, i, j, 1.0, 1.0)?;
            let v = point_velocity(&state, &rates, i, j, 1.0, 1.0)?;
            println!(
                "{i:?}/{j:?}: e = ({:+.4}, {:+.4})  tip = ({:+.4}, {:+.4})  tip velocity = ({:+.4}, {:+.4})",
                e.x, e.y, tip.x, tip.y, v.x, v.y
            );
        }
    }
    println!("hinge midpoint: {:?}", state.midpoint().as_slice());
    Ok(())
}
