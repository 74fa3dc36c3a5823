//! Built-in worked example: three symbols, one forbidden pair each among
//! the first two, and a free third symbol.
//!
//! The potential takes the value `ln(ep)` on the first cylinder, `ln(eq)`
//! on the second, and the unique values on the third cylinder that make it
//! normalised. Restricting to the first two symbols leaves a single
//! period-two orbit, which is the smallest configuration exhibiting the
//! non-convergent scaled survivor sequence.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sft::SftModel;
use crate::transfer::CylindricalPotential;

/// Transition matrix of the worked example.
pub fn example_model() -> SftModel {
    SftModel::from_matrix(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]])
        .expect("static matrix is well formed")
}

/// Model plus normalised potential parametrised by the cylinder weights
/// `ep = exp(p)` and `eq = exp(q)`; requires `ep, eq > 0` and
/// `ep + eq < 1` so the third-cylinder values stay defined.
pub fn paper4<S: Scalar>(ep: f64, eq: f64) -> Result<(SftModel, CylindricalPotential<S>)> {
    let ok = ep.is_finite() && eq.is_finite() && ep > 0.0 && eq > 0.0 && ep + eq < 1.0;
    if !ok {
        return Err(Error::InvalidParameter(format!(
            "cylinder weights must satisfy ep > 0, eq > 0 and ep + eq < 1, got ep={ep}, eq={eq}"
        )));
    }
    let model = example_model();
    let potential = CylindricalPotential::from_fn(&model, 2, |w| {
        let value = match (w[0], w[1]) {
            (0, _) => ep.ln(),
            (1, _) => eq.ln(),
            (2, 0) => (1.0 - eq).ln(),
            (2, 1) => (1.0 - ep).ln(),
            _ => (1.0 - ep - eq).ln(),
        };
        S::from_config(value)
    })?;
    Ok((model, potential))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{build_transfer, check_normalized};

    #[test]
    fn example_potential_is_normalised() {
        let (_, pot) = paper4::<f64>(0.2, 0.3).unwrap();
        let t = build_transfer(&pot).unwrap();
        assert!(check_normalized(&t, 1e-14));
    }

    #[test]
    fn weights_outside_the_simplex_are_rejected() {
        assert!(paper4::<f64>(0.0, 0.3).is_err());
        assert!(paper4::<f64>(0.6, 0.4).is_err());
        assert!(paper4::<f64>(-0.1, 0.3).is_err());
    }
}
