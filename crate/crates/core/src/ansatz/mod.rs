//! Parameterized state families with exact read-in and read-out.

pub mod expressibility;
pub mod mottonen;
pub mod ula;
pub mod zgr;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use ula::UlaSpec;
pub use zgr::{FourierCoefficients, ZgrKind, ZgrQftSpec};

use crate::error::{bail, Result};
use crate::state::{Grid, ParamVector, ScaledState};
use crate::C64;

/// Ansatz family chosen in configuration; qubit counts come from the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum AnsatzKind {
    ZgrReal { m: u32 },
    ZgrComplex { m: u32 },
    Zgr2d { mx: u32, my: u32 },
    Ula { d: u32 },
}

impl AnsatzKind {
    pub fn build(&self, grid: &Grid) -> Result<AnsatzSpec> {
        Ok(match (*self, grid) {
            (AnsatzKind::ZgrReal { m }, Grid::One(g)) => {
                AnsatzSpec::Zgr(ZgrQftSpec::real_1d(g.n, m)?)
            }
            (AnsatzKind::ZgrComplex { m }, Grid::One(g)) => {
                AnsatzSpec::Zgr(ZgrQftSpec::complex_1d(g.n, m)?)
            }
            (AnsatzKind::Zgr2d { mx, my }, Grid::Two(g)) => {
                AnsatzSpec::Zgr(ZgrQftSpec::complex_2d(g.x.n, mx, g.y.n, my)?)
            }
            (AnsatzKind::Ula { d }, g) => AnsatzSpec::Ula(UlaSpec::new(g.qubits(), d)?),
            (k, _) => bail!(Config, "ansatz {k:?} does not fit the grid dimension"),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnsatzSpec {
    Zgr(ZgrQftSpec),
    Ula(UlaSpec),
}

impl AnsatzSpec {
    pub fn qubits(&self) -> u32 {
        match self {
            AnsatzSpec::Zgr(z) => z.n,
            AnsatzSpec::Ula(u) => u.n,
        }
    }

    pub fn angle_count(&self) -> usize {
        match self {
            AnsatzSpec::Zgr(z) => z.angle_count(),
            AnsatzSpec::Ula(u) => u.angle_count(),
        }
    }

    /// Parameter count including the scale.
    pub fn param_count(&self) -> usize {
        self.angle_count() + 1
    }

    /// Whether every output is real-valued.
    pub fn is_real(&self) -> bool {
        match self {
            AnsatzSpec::Zgr(z) => z.kind == ZgrKind::Real1d,
            AnsatzSpec::Ula(_) => true,
        }
    }

    pub fn amplitudes(&self, params: &ParamVector) -> Result<ScaledState> {
        match self {
            AnsatzSpec::Zgr(z) => z.amplitudes(params),
            AnsatzSpec::Ula(u) => u.amplitudes(params),
        }
    }

    /// Slots with no effect on the state.
    pub fn inert_slots(&self) -> Vec<usize> {
        match self {
            AnsatzSpec::Zgr(z) => z.inert_slots(),
            AnsatzSpec::Ula(_) => Vec::new(),
        }
    }

    /// Default per-angle half-widths for timestep bounds.
    pub fn half_widths(&self) -> Vec<f64> {
        self.half_widths_with(None)
    }

    /// Default widths, or `width` on every active angle when given.
    pub fn half_widths_with(&self, width: Option<f64>) -> Vec<f64> {
        let (w, inert) = match self {
            AnsatzSpec::Zgr(z) => (0.1, z.inert_slots()),
            AnsatzSpec::Ula(_) => (PI, Vec::new()),
        };
        let mut h = vec![width.unwrap_or(w); self.angle_count()];
        for i in inert {
            h[i] = 0.0;
        }
        h
    }

    /// Exact read-in; only available for the Fourier family.
    pub fn read_in(&self, samples: &[C64]) -> Result<ParamVector> {
        match self {
            AnsatzSpec::Zgr(z) => z.params_from_function(samples),
            AnsatzSpec::Ula(_) => bail!(Parameter, "ULA has no closed-form read-in"),
        }
    }

    pub fn zeros(&self, scale: f64) -> ParamVector {
        ParamVector::zeros(scale, self.angle_count())
    }
}

/// Fourier coefficients encoded by `angles`.
pub fn zgr_coeffs_from_params(angles: &[f64], spec: &ZgrQftSpec) -> Result<FourierCoefficients> {
    spec.coeffs_from_params(angles)
}

pub fn zgrqft_amplitudes(params: &ParamVector, spec: &ZgrQftSpec) -> Result<ScaledState> {
    spec.amplitudes(params)
}

pub fn zgrqft_params_from_function(samples: &[C64], spec: &ZgrQftSpec) -> Result<ParamVector> {
    spec.params_from_function(samples)
}

pub fn ula_amplitudes(params: &ParamVector, spec: &UlaSpec) -> Result<ScaledState> {
    spec.amplitudes(params)
}
