//! Physical constants, parameters and the dimensionless quantities derived
//! from them.
//!
//! Everything downstream of this module works in dimensionless time, measured
//! either in the thermal time `tau = hbar / (kB T)` or, at zero temperature, in
//! the light travel time `t0 = R / c0`.

use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Errors raised while validating or deriving physical parameters.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("parameter `{name}` = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{0} is not available in the zero-temperature mode")]
    UnsupportedMode(&'static str),
}

/// A self-consistent set of fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub alpha0: f64,
    pub c0: f64,
    pub hbar: f64,
    pub kb: f64,
    pub eps0: f64,
    pub e_charge: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 recommended values.
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        alpha0: 7.297_352_569_3e-3,
        c0: 299_792_458.0,
        hbar: 1.054_571_817e-34,
        kb: 1.380_649e-23,
        eps0: 8.854_187_812_8e-12,
        e_charge: 1.602_176_634e-19,
    };

    pub const IDENTIFIER: &'static str = "CODATA-2018";

    /// Fine-structure constant rebuilt from the other members.
    pub fn alpha_from_parts(&self) -> f64 {
        self.e_charge * self.e_charge / (4.0 * PI * self.eps0 * self.hbar * self.c0)
    }

    /// Angular frequency of a photon with energy `ev` electron volts.
    pub fn omega_from_ev(&self, ev: f64) -> f64 {
        ev * self.e_charge / self.hbar
    }
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants::CODATA_2018;

/// Ultraviolet cutoff function applied above `y_max`.
///
/// `PowerLaw { p }` keeps the integrand unchanged below `y_max` and multiplies
/// it by `y^-p` above, with `y` the dimensionless frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutoffSpec {
    Sharp,
    PowerLaw { p: f64 },
}

impl CutoffSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        match *self {
            CutoffSpec::Sharp => Ok(()),
            CutoffSpec::PowerLaw { p } if p.is_finite() && p > 2.0 => Ok(()),
            CutoffSpec::PowerLaw { p } => Err(ParamError::Domain {
                name: "cutoff_p",
                value: p,
                reason: "power-law exponent must be finite and larger than 2",
            }),
        }
    }
}

/// Physical inputs for one two-dot system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    /// Temperature in kelvin; zero selects the zero-temperature mode.
    pub temperature: f64,
    /// Dipole length `d` in metres.
    pub dipole: f64,
    /// Dot separation `R` in metres.
    pub separation: f64,
    /// Angular cutoff frequency in rad/s.
    pub omega_max: f64,
    /// Relative coupling to the sin-wave bath.
    pub gamma: f64,
    pub cutoff: CutoffSpec,
}

impl Default for PhysicalParams {
    /// The cosmic microwave background at 2.73 K, `d = 10 nm`,
    /// `hbar omega_max = 1 eV` and `R = 1 um`.
    fn default() -> Self {
        PhysicalParams {
            temperature: 2.73,
            dipole: 10e-9,
            separation: 1e-6,
            omega_max: CONSTANTS.omega_from_ev(1.0),
            gamma: 1.0,
            cutoff: CutoffSpec::Sharp,
        }
    }
}

/// Dimensionless quantities derived from [`PhysicalParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    /// Thermal time in seconds; `None` in the zero-temperature mode.
    pub tau: Option<f64>,
    /// Light travel time `R / c0` in seconds.
    pub t0_seconds: f64,
    /// `t0 / tau`; `None` in the zero-temperature mode.
    pub t0_over_tau: Option<f64>,
    /// `omega_max tau`, or `omega_max t0` at zero temperature.
    pub y_max: f64,
    /// `omega_max d / c0`.
    pub v: f64,
    /// Prefactor of the kernels in the evolution map.
    pub a: f64,
}

impl DerivedQuantities {
    pub fn is_zero_temperature(&self) -> bool {
        self.tau.is_none()
    }

    /// Seconds per unit of dimensionless time.
    pub fn time_unit(&self) -> f64 {
        self.tau.unwrap_or(self.t0_seconds)
    }

    /// Light travel time in the dimensionless unit (1 at zero temperature).
    pub fn t0(&self) -> f64 {
        self.t0_over_tau.unwrap_or(1.0)
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::Domain {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(ParamError::Domain {
                name: "temperature",
                value: self.temperature,
                reason: "must be finite and non-negative",
            });
        }
        positive("dipole", self.dipole)?;
        positive("separation", self.separation)?;
        positive("omega_max", self.omega_max)?;
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(ParamError::Domain {
                name: "gamma",
                value: self.gamma,
                reason: "must lie in [0, 1]",
            });
        }
        self.cutoff.validate()
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }

    /// Thermal time `hbar / (kB T)` in seconds.
    pub fn tau(&self) -> Option<f64> {
        (self.temperature > 0.0).then(|| CONSTANTS.hbar / (CONSTANTS.kb * self.temperature))
    }

    pub fn derive_dimensionless(&self) -> Result<DerivedQuantities, ParamError> {
        self.validate()?;
        let k = &CONSTANTS;
        let t0_seconds = self.separation / k.c0;
        let tau = self.tau();
        let unit = tau.unwrap_or(t0_seconds);
        Ok(DerivedQuantities {
            tau,
            t0_seconds,
            t0_over_tau: tau.map(|tau| t0_seconds / tau),
            y_max: self.omega_max * unit,
            v: self.omega_max * self.dipole / k.c0,
            a: k.alpha0 * self.dipole * self.dipole / (PI * k.c0 * k.c0 * unit * unit),
        })
    }

    /// The constant `c = 1 / (2A)` bounding the entangling region
    /// `t/tau < c (t0/tau)^3`.
    pub fn c_constant(&self) -> Result<f64, ParamError> {
        let derived = self.derive_dimensionless()?;
        if derived.is_zero_temperature() {
            return Err(ParamError::UnsupportedMode("the constant c"));
        }
        Ok(1.0 / (2.0 * derived.a))
    }

    /// Copy with the separation chosen so that `t0 / tau` equals `ratio`.
    pub fn with_t0_over_tau(&self, ratio: f64) -> Result<PhysicalParams, ParamError> {
        positive("t0_over_tau", ratio)?;
        let tau = self.tau().ok_or(ParamError::UnsupportedMode("t0_over_tau"))?;
        Ok(PhysicalParams {
            separation: ratio * tau * CONSTANTS.c0,
            ..*self
        })
    }

    /// Copy with the cutoff chosen so that the dimensionless cutoff equals `y_max`.
    pub fn with_y_max(&self, y_max: f64) -> Result<PhysicalParams, ParamError> {
        positive("y_max", y_max)?;
        let unit = self.tau().unwrap_or(self.separation / CONSTANTS.c0);
        Ok(PhysicalParams {
            omega_max: y_max / unit,
            ..*self
        })
    }
}
