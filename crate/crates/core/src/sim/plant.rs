use crate::error::{Error, Result};
use crate::numkit::{Matrix, Vector};

/// Truth dynamics of the controlled plant.
///
/// `Linear` is the usual x' = A x + B u, z = C x. `NonlinearPendulum` is
/// the cart-pendulum with acceleration as the control input: with state
/// [alpha, theta, alpha', theta'] the angular acceleration is
/// `accel_gain * (u cos(theta) + gravity sin(theta))` and the cart
/// acceleration is u itself. Its linearization about theta = 0 is the
/// usual nominal model, so running the nonlinear truth against a nominal
/// design realizes model mismatch as pure linearization error.
#[derive(Debug, Clone)]
pub enum PlantModel {
    Linear { a: Matrix, b: Matrix, c: Matrix },
    NonlinearPendulum { accel_gain: f64, gravity: f64, c: Matrix },
}

impl PlantModel {
    pub fn state_dim(&self) -> usize {
        match self {
            PlantModel::Linear { a, .. } => a.rows(),
            PlantModel::NonlinearPendulum { .. } => 4,
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            PlantModel::Linear { b, .. } => b.cols(),
            PlantModel::NonlinearPendulum { .. } => 1,
        }
    }

    pub fn output_dim(&self) -> usize {
        self.output_matrix().rows()
    }

    pub fn output_matrix(&self) -> &Matrix {
        match self {
            PlantModel::Linear { c, .. } => c,
            PlantModel::NonlinearPendulum { c, .. } => c,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PlantModel::Linear { a, b, c } => {
                if !a.is_square() {
                    return Err(Error::DimensionMismatch("plant A must be square".into()));
                }
                if b.rows() != a.rows() {
                    return Err(Error::DimensionMismatch("plant B rows != A rows".into()));
                }
                if c.cols() != a.rows() {
                    return Err(Error::DimensionMismatch("plant C cols != A rows".into()));
                }
            }
            PlantModel::NonlinearPendulum { accel_gain, gravity, c } => {
                if !accel_gain.is_finite() || !gravity.is_finite() {
                    return Err(Error::NonFinite("pendulum parameters".into()));
                }
                if c.cols() != 4 {
                    return Err(Error::DimensionMismatch("pendulum C must have 4 columns".into()));
                }
            }
        }
        Ok(())
    }
}

/// Time derivative of the plant state for a held control input.
pub fn plant_derivative(plant: &PlantModel, x: &Vector, u: &Vector) -> Result<Vector> {
    if x.dim() != plant.state_dim() || u.dim() != plant.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "plant_derivative: state {} input {}, expected {} and {}",
            x.dim(),
            u.dim(),
            plant.state_dim(),
            plant.input_dim()
        )));
    }
    match plant {
        PlantModel::Linear { a, b, .. } => Ok(&a.matvec(x) + &b.matvec(u)),
        PlantModel::NonlinearPendulum { accel_gain, gravity, .. } => {
            let theta = x[1];
            let accel = u[0];
            let mut dx = Vector::zeros(4);
            dx[0] = x[2];
            dx[1] = x[3];
            dx[2] = accel;
            dx[3] = accel_gain * (accel * theta.cos() + gravity * theta.sin());
            Ok(dx)
        }
    }
}

/// u = K x_a, the state-feedback law applied to the (possibly attacked)
/// network output.
pub fn controller_output(k_gain: &Matrix, x_a: &Vector) -> Result<Vector> {
    if k_gain.cols() != x_a.dim() {
        return Err(Error::DimensionMismatch("controller gain vs state".into()));
    }
    Ok(k_gain.matvec(x_a))
}
