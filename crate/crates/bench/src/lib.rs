//! Spec constructors shared by the benchmark targets.

use sobolag::{rat, MassPoint, Rat, Scalar, SobolevSpec};

/// A point mass at the origin plus a first-derivative mass at x = 2.
pub fn two_mass_spec() -> SobolevSpec<Rat> {
    SobolevSpec::new(
        Rat::from_i64(1),
        vec![
            MassPoint::new(Rat::from_i64(0), 0, rat(1, 1)),
            MassPoint::new(Rat::from_i64(2), 1, rat(1, 3)),
        ],
    )
    .expect("valid spec")
}

/// A single second-derivative mass away from the origin.
pub fn second_order_spec() -> SobolevSpec<Rat> {
    SobolevSpec::new(
        Rat::from_i64(2),
        vec![MassPoint::new(Rat::from_i64(1), 2, rat(5, 1))],
    )
    .expect("valid spec")
}
