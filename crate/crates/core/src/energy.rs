//! Movement energy model: loss is linear in travelled distance.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::topology::Robot;

/// Speed-proportional loss coefficient, J·s/m².
pub const SPEED_COEFF: f64 = 6.25;
/// Distance-proportional loss coefficient, J/m.
pub const DISTANCE_COEFF: f64 = 9.79;
/// Inverse-speed loss coefficient, J/s.
pub const TIME_COEFF: f64 = 3.66;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams<S> {
    /// Constant robot speed in m/s.
    pub speed: S,
    /// Metres per unit of field coordinate.
    pub coordinate_scale: S,
    /// Battery capacity in joules at the start of a run.
    pub initial_energy: S,
}

impl<S: Scalar> Default for EnergyParams<S> {
    fn default() -> Self {
        Self {
            speed: S::lit(0.76),
            coordinate_scale: S::lit(10.0),
            initial_energy: S::lit(100.0),
        }
    }
}

impl<S: Scalar> EnergyParams<S> {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: S| v > S::zero() && v.is_finite();
        if positive(self.speed) && positive(self.coordinate_scale) && positive(self.initial_energy)
        {
            Ok(())
        } else {
            Err(Error::InvalidConfig(
                "speed, coordinate scale and initial energy must be positive".into(),
            ))
        }
    }

    /// Converts a field distance to metres.
    pub fn to_meters(&self, field_distance: S) -> S {
        field_distance * self.coordinate_scale
    }

    /// Joules spent per metre at the configured speed.
    pub fn loss_per_meter(&self) -> S {
        let v = self.speed;
        S::lit(SPEED_COEFF) * v + S::lit(DISTANCE_COEFF) + S::lit(TIME_COEFF) / v
    }

    pub fn percent_of_initial(&self, energy: S) -> S {
        S::lit(100.0) * energy / self.initial_energy
    }
}

/// Energy in joules to drive `meters` at the configured speed.
pub fn energy_loss<S: Scalar>(meters: S, params: &EnergyParams<S>) -> S {
    let v = params.speed;
    S::lit(SPEED_COEFF) * v * meters
        + S::lit(DISTANCE_COEFF) * meters
        + S::lit(TIME_COEFF) * meters / v
}

pub fn can_afford<S: Scalar>(robot_energy: S, meters: S, params: &EnergyParams<S>) -> bool {
    robot_energy >= energy_loss(meters, params)
}

/// Energy left after driving `meters`; negative when the trip is unaffordable.
pub fn remaining_after<S: Scalar>(robot_energy: S, meters: S, params: &EnergyParams<S>) -> S {
    robot_energy - energy_loss(meters, params)
}

/// Charges `robot` for a task trip of `meters`.
pub fn consume<S: Scalar>(robot: &mut Robot<S>, meters: S, params: &EnergyParams<S>) -> Result<S> {
    let cost = energy_loss(meters, params);
    if robot.energy < cost {
        return Err(Error::InsufficientEnergy {
            robot: robot.id,
            available: robot.energy.as_f64(),
            required: cost.as_f64(),
        });
    }
    robot.energy = robot.energy - cost;
    robot.traveled = robot.traveled + meters;
    robot.reactions += 1;
    Ok(cost)
}
