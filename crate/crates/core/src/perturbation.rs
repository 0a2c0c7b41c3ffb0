use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::rational::Rational;

/// A (β, γ)-perturbation `w′` of an instance's edge weights:
/// `w(u,v)/β ≤ w′(u,v) ≤ γ·w(u,v)` on every edge. Node costs are never perturbed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub beta: Rational,
    pub gamma: Rational,
    weights: Vec<Rational>,
}

pub(crate) fn check_params(beta: &Rational, gamma: &Rational) -> Result<()> {
    if *beta < Rational::one() || *gamma < Rational::one() {
        return Err(Error::validation(format!(
            "perturbation parameters must be at least 1 (beta = {beta}, gamma = {gamma})"
        )));
    }
    Ok(())
}

impl Perturbation {
    /// Validates `weights` against the bounds implied by `inst`.
    pub fn new(inst: &Instance, beta: Rational, gamma: Rational, weights: Vec<Rational>) -> Result<Self> {
        check_params(&beta, &gamma)?;
        if weights.len() != inst.edges().len() {
            return Err(Error::validation(format!(
                "perturbation has {} weights for {} edges",
                weights.len(),
                inst.edges().len()
            )));
        }
        for (e, w) in inst.edges().iter().zip(&weights) {
            let lo = &e.weight / &beta;
            let hi = &e.weight * &gamma;
            if w.is_negative() || *w < lo || *w > hi {
                return Err(Error::validation(format!(
                    "weight {w} on edge ({},{}) is outside [{lo}, {hi}]",
                    inst.names()[e.u],
                    inst.names()[e.v]
                )));
            }
        }
        Ok(Perturbation { beta, gamma, weights })
    }

    /// The unperturbed weights, a (1, 1)-perturbation.
    pub fn identity(inst: &Instance) -> Self {
        Perturbation {
            beta: Rational::one(),
            gamma: Rational::one(),
            weights: inst.weights(),
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Whether this perturbation still satisfies its bounds for `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        Perturbation::new(inst, self.beta.clone(), self.gamma.clone(), self.weights.clone()).map(|_| ())
    }
}

/// `Q′(g)`: energy with node costs `c` and the perturbed weights.
pub fn energy_perturbed(inst: &Instance, p: &Perturbation, g: &Labeling) -> Result<Rational> {
    p.validate(inst)?;
    inst.energy_with_weights(p.weights(), g)
}
