//! 1D nonlinear Black–Scholes in log-price, semi-implicit Backward Euler.
//!
//! With `α = 1 − rτ`, `β = (σ₀²/2 − r)τ`, `γ = (σ₀²/2)τ` the step solves
//! `[α + γ∂² − β∂ + κ D_χ (∂² − ∂)] V = Ṽ` where `χ = (∂² − ∂)Ṽ` is frozen
//! and `κ = (σ₀²/2) e^{r(T−t)} a² τ`.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    compose, scale, sym_d1, sym_d2, CostModel, Slot, SlotStates, SymFactor, SymWord, TargetTerm,
};
use crate::ansatz::AnsatzSpec;
use crate::error::{bail, Result};
use crate::math::exp;
use crate::operators::{first_coeff, second_coeff, Dims};
use crate::state::{Axis, Grid1D, ScaledState};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bse1dProblem {
    pub strike: f64,
    pub rate: f64,
    pub sigma0_sq: f64,
    /// Nonlinearity scale `a`; zero gives the linear model.
    pub nonlinearity: f64,
    pub maturity: f64,
    pub tau: f64,
    pub grid: Grid1D,
    /// Time at the start of the step.
    pub t: f64,
}

impl Bse1dProblem {
    pub fn alpha(&self) -> f64 {
        1.0 - self.rate * self.tau
    }

    pub fn beta(&self) -> f64 {
        (0.5 * self.sigma0_sq - self.rate) * self.tau
    }

    pub fn gamma(&self) -> f64 {
        0.5 * self.sigma0_sq * self.tau
    }

    /// Coefficient of `D_χ(∂² − ∂)` for the represented `χ`.
    pub fn kappa(&self) -> f64 {
        0.5 * self.sigma0_sq
            * exp(self.rate * (self.maturity - self.t))
            * self.nonlinearity
            * self.nonlinearity
            * self.tau
    }

    /// `ε = κθ₀`, the prefactor for a unit-norm `φ`.
    pub fn epsilon(&self, theta0: f64) -> f64 {
        self.kappa() * theta0
    }

    fn dims(&self) -> Dims {
        Dims::one(self.grid.n)
    }

    fn check(&self, s: &ScaledState) -> Result<()> {
        if s.len() != self.grid.points() {
            bail!(
                Dimension,
                "state of length {} on a grid of {} points",
                s.len(),
                self.grid.points()
            );
        }
        Ok(())
    }

    /// `∂² − ∂` as words.
    pub fn stencil(&self) -> Vec<SymWord> {
        let mut w = sym_d2(Axis::X, self.grid.n, self.grid.length);
        w.extend(scale(&sym_d1(Axis::X, self.grid.n, self.grid.length), -1.0));
        w
    }

    /// Linear part `α + γ∂² − β∂`.
    pub fn linear_op(&self) -> Vec<SymWord> {
        let mut w = vec![SymWord::scalar(self.alpha())];
        w.extend(scale(
            &sym_d2(Axis::X, self.grid.n, self.grid.length),
            self.gamma(),
        ));
        w.extend(scale(
            &sym_d1(Axis::X, self.grid.n, self.grid.length),
            -self.beta(),
        ));
        w
    }

    /// Full scheme matrix with `χ` in slot `Chi(0)`.
    pub fn scheme_op(&self) -> Vec<SymWord> {
        let mut w = self.linear_op();
        let k = self.kappa();
        if k != 0.0 {
            let d = [SymWord::new(k, vec![SymFactor::diag(Slot::Chi(0), 1)])];
            w.extend(compose(&d, &self.stencil()));
        }
        w
    }

    /// `‖|χ⟩ − (∂² − ∂)|Ṽ⟩‖²`.
    pub fn chi_cost(&self, prev: &ScaledState, ansatz: AnsatzSpec) -> Result<CostModel> {
        self.check(prev)?;
        CostModel::new(
            ansatz,
            self.dims(),
            vec![SymWord::scalar(1.0)],
            TargetTerm::on(self.stencil(), Slot::Prev),
            SlotStates::with_prev(prev.clone()),
        )
    }

    /// `‖M|V⟩ − |Ṽ⟩‖²` with `χ` frozen.
    pub fn v_cost(
        &self,
        prev: &ScaledState,
        chi: Option<&ScaledState>,
        ansatz: AnsatzSpec,
    ) -> Result<CostModel> {
        self.check(prev)?;
        let mut states = SlotStates::with_prev(prev.clone());
        let op = if self.kappa() != 0.0 {
            let chi =
                chi.ok_or_else(|| crate::Error::State("nonlinear step needs a trained χ".into()))?;
            self.check(chi)?;
            states.set_chi(0, chi.clone());
            self.scheme_op()
        } else {
            self.linear_op()
        };
        CostModel::new(
            ansatz,
            self.dims(),
            op,
            vec![TargetTerm::new(SymWord::scalar(1.0), Slot::Prev)],
            states,
        )
    }

    /// Prefactors `(p₀, p₁, p₂)` of `α + γ∂² − β∂ = p₀ + p₁Â + p₂Â†`.
    pub fn linear_coefficients(&self) -> (f64, f64, f64) {
        let a = first_coeff(self.grid.n, self.grid.length);
        let b = second_coeff(self.grid.n, self.grid.length);
        let (g, be) = (self.gamma(), self.beta());
        (self.alpha() - 2.0 * g * b, g * b - be * a, g * b + be * a)
    }
}

/// Theta-cost `C_χ` at `θ` written out term by term.
///
/// `θ₀² − 2θ₀λ̃₀Re{(b−a)⟨φ|Â|ψ̃⟩ + (b+a)⟨φ|Â†|ψ̃⟩ − 2b⟨φ|ψ̃⟩} + ‖(∂² − ∂)Ṽ‖²`.
pub fn chi_cost_bse1d(
    theta: &crate::ParamVector,
    prev: &ScaledState,
    problem: &Bse1dProblem,
    ansatz: &AnsatzSpec,
) -> Result<f64> {
    problem
        .chi_cost(prev, ansatz.clone())?
        .evaluate(theta, super::Mode::Expanded)
}

/// `C_V` of the nonlinear scheme.
pub fn v_cost_bse1d_nonlinear(
    lambda: &crate::ParamVector,
    chi: &ScaledState,
    prev: &ScaledState,
    problem: &Bse1dProblem,
    ansatz: &AnsatzSpec,
) -> Result<f64> {
    problem
        .v_cost(prev, Some(chi), ansatz.clone())?
        .evaluate(lambda, super::Mode::Expanded)
}
