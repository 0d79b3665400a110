//! Two-level interferometry for the hydrogen n=2 dipole and its spin dual.
//!
//! Hydrogen states live in `{|200>, |210>}`; the dipole eigenstates are
//! `|+-> = (|200> +- |210>)/sqrt 2` with `d_z = +-3 e a0`. Passing the sheet
//! multiplies `|+->` by `exp(+-i phi_g)`. The dual probe is a spin-1/2 in
//! `{|up>, |down>}`, whose `sigma_z` eigenstates pick up `exp(+-i phi_g^m)`.
//! The dynamical phase of the degenerate pair is dropped.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalisation tolerance on construction.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `{|200>, |210>}`.
    Hydrogen,
    /// `{|up>, |down>}` along z.
    Spin,
}

/// Which pair of vectors the amplitudes refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// `|200>, |210>` (or `|up>, |down>`).
    Computational,
    /// `|+>, |->`.
    Eigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformDirection {
    ToEigen,
    ToComputational,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleState {
    amps: [Complex64; 2],
    basis: Basis,
    repr: Representation,
}

impl DipoleState {
    pub fn new(amps: [Complex64; 2], basis: Basis, repr: Representation) -> Result<Self> {
        if amps.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite("state amplitude"));
        }
        let s = Self { amps, basis, repr };
        if (s.norm_squared() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "state must be normalised, |psi|^2 = {}",
                s.norm_squared()
            )));
        }
        Ok(s)
    }

    /// `|200>`, the prepared initial state.
    pub fn ground_2s() -> Self {
        Self {
            amps: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            basis: Basis::Hydrogen,
            repr: Representation::Computational,
        }
    }

    /// `|210>`.
    pub fn excited_2p() -> Self {
        Self {
            amps: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            basis: Basis::Hydrogen,
            repr: Representation::Computational,
        }
    }

    /// `|+>` or `|->` written in the eigen representation.
    pub fn dipole_eigenstate(sign: f64) -> Self {
        let (p, m) = if sign >= 0.0 { (1.0, 0.0) } else { (0.0, 1.0) };
        Self {
            amps: [Complex64::new(p, 0.0), Complex64::new(m, 0.0)],
            basis: Basis::Hydrogen,
            repr: Representation::Eigen,
        }
    }

    /// `(|up> + |down>)/sqrt 2`.
    pub fn spin_symmetric() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            amps: [h, h],
            basis: Basis::Spin,
            repr: Representation::Computational,
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amps
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps[0].norm_sqr() + self.amps[1].norm_sqr()
    }

    /// Amplitudes in the computational representation.
    pub fn computational(&self) -> [Complex64; 2] {
        match self.repr {
            Representation::Computational => self.amps,
            Representation::Eigen => hadamard(self.amps),
        }
    }

    /// `<self|other>`, both taken in the computational representation.
    pub fn inner(&self, other: &DipoleState) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::InvalidInput(
                "states belong to different two-level systems".into(),
            ));
        }
        let a = self.computational();
        let b = other.computational();
        Ok(a[0].conj() * b[0] + a[1].conj() * b[1])
    }

    /// `|<self|other>|^2`, blind to global phase.
    pub fn fidelity(&self, other: &DipoleState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

fn hadamard(a: [Complex64; 2]) -> [Complex64; 2] {
    [(a[0] + a[1]) * FRAC_1_SQRT_2, (a[0] - a[1]) * FRAC_1_SQRT_2]
}

/// Change between `{|200>, |210>}` and `{|+>, |->}` amplitudes. The map is
/// its own inverse; asking for the representation a state is already in
/// returns it unchanged.
pub fn eigenbasis_transform(state: &DipoleState, direction: TransformDirection) -> DipoleState {
    let target = match direction {
        TransformDirection::ToEigen => Representation::Eigen,
        TransformDirection::ToComputational => Representation::Computational,
    };
    if state.repr == target {
        return *state;
    }
    DipoleState {
        amps: hadamard(state.amps),
        repr: target,
        ..*state
    }
}

fn phase_diag(a: [Complex64; 2], phi: f64) -> [Complex64; 2] {
    [a[0] * Complex64::cis(phi), a[1] * Complex64::cis(-phi)]
}

/// Multiplies `|+>` by `exp(i phi_g)` and `|->` by `exp(-i phi_g)`. The
/// result keeps the representation of the input; in the computational one the
/// operator is `[[cos, i sin], [i sin, cos]]`.
pub fn evolve(state: &DipoleState, phi_g: f64) -> Result<DipoleState> {
    if state.basis != Basis::Hydrogen {
        return Err(Error::InvalidInput(
            "evolve acts on hydrogen states; use evolve_dual for spins".into(),
        ));
    }
    let amps = match state.repr {
        Representation::Eigen => phase_diag(state.amps, phi_g),
        Representation::Computational => {
            let (c, s) = (
                Complex64::new(phi_g.cos(), 0.0),
                Complex64::new(0.0, phi_g.sin()),
            );
            let [a, b] = state.amps;
            [c * a + s * b, s * a + c * b]
        }
    };
    Ok(DipoleState { amps, ..*state })
}

/// Spin dual: `|up>` gets `exp(i phi_m)`, `|down>` gets `exp(-i phi_m)`.
pub fn evolve_dual(state: &DipoleState, phi_m: f64) -> Result<DipoleState> {
    if state.basis != Basis::Spin {
        return Err(Error::InvalidInput(
            "evolve_dual acts on spin states".into(),
        ));
    }
    Ok(DipoleState {
        amps: phase_diag(state.computational(), phi_m),
        repr: Representation::Computational,
        ..*state
    })
}

/// Populations in the computational basis: `(p_200, p_210)` or
/// `(p_up, p_down)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations {
    pub first: f64,
    pub second: f64,
}

impl Populations {
    pub fn p_200(&self) -> f64 {
        self.first
    }

    pub fn p_210(&self) -> f64 {
        self.second
    }
}

pub fn measure(state: &DipoleState) -> Populations {
    let a = state.computational();
    Populations {
        first: a[0].norm_sqr(),
        second: a[1].norm_sqr(),
    }
}

/// `<sigma_x>` in the computational basis.
pub fn sigma_x_expectation(state: &DipoleState) -> f64 {
    let a = state.computational();
    2.0 * (a[0].conj() * a[1]).re
}

/// The full protocol: prepare `|200>`, pass the sheet, read out.
pub fn fringe(phi_g: f64) -> Populations {
    measure(&evolve(&DipoleState::ground_2s(), phi_g).expect("hydrogen state"))
}
