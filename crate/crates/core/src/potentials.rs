//! Symmetric barrier families with their inverse-potential continuations.
//!
//! Every barrier is normalised so that its maximum sits at the origin with
//! `V(0) = 0` and the flanks fall off monotonically. Three views are exposed:
//!
//! * `V(x)` on the real axis,
//! * `Im V⁻¹(ξ)` for `ξ > 0`, i.e. inside the classically forbidden momentum
//!   zone where the inverse potential is purely imaginary,
//! * `V(iy)` on the positive imaginary axis, which is real and increasing up
//!   to a pole (Sech2, Lorentzian) or without bound (InverseHO).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// ℏ and the particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        Ok(Self {
            hbar: require_positive("hbar", hbar)?,
            mass: require_positive("mass", mass)?,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Same mass, ℏ multiplied by `factor`.
    pub fn with_hbar_scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.hbar * factor, self.mass)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    /// `-½αx²`
    #[serde(rename = "inverse_ho", alias = "inverseho", alias = "ho")]
    InverseHo,
    /// `V₀(sech²(x/a) − 1)`
    Sech2,
    /// `−V₀x²/(x² + a²)`
    Lorentzian,
}

impl PotentialKind {
    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::InverseHo => "inverse_ho",
            PotentialKind::Sech2 => "sech2",
            PotentialKind::Lorentzian => "lorentzian",
        }
    }
}

impl std::str::FromStr for PotentialKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "inverse_ho" | "inverseho" | "ho" => Ok(PotentialKind::InverseHo),
            "sech2" => Ok(PotentialKind::Sech2),
            "lorentzian" => Ok(PotentialKind::Lorentzian),
            other => Err(format!(
                "unknown potential `{other}` (expected inverse_ho, sech2 or lorentzian)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    InverseHo { alpha: f64 },
    Sech2 { v0: f64, a: f64 },
    Lorentzian { v0: f64, a: f64 },
}

/// A validated symmetric barrier. All parameters are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialModel {
    shape: Shape,
}

/// Serializable description of a barrier, as found in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
}

impl TryFrom<PotentialSpec> for PotentialModel {
    type Error = Error;

    fn try_from(spec: PotentialSpec) -> Result<Self> {
        let missing = |name| Error::InvalidParameter {
            name,
            value: f64::NAN,
            reason: "required for this potential kind",
        };
        match spec.kind {
            PotentialKind::InverseHo => {
                Self::inverse_ho(spec.alpha.ok_or_else(|| missing("alpha"))?)
            }
            PotentialKind::Sech2 => Self::sech2(
                spec.v0.ok_or_else(|| missing("v0"))?,
                spec.a.ok_or_else(|| missing("a"))?,
            ),
            PotentialKind::Lorentzian => Self::lorentzian(
                spec.v0.ok_or_else(|| missing("v0"))?,
                spec.a.ok_or_else(|| missing("a"))?,
            ),
        }
    }
}

impl From<PotentialModel> for PotentialSpec {
    fn from(model: PotentialModel) -> Self {
        match model.shape {
            Shape::InverseHo { alpha } => PotentialSpec {
                kind: PotentialKind::InverseHo,
                alpha: Some(alpha),
                v0: None,
                a: None,
            },
            Shape::Sech2 { v0, a } | Shape::Lorentzian { v0, a } => PotentialSpec {
                kind: model.kind(),
                alpha: None,
                v0: Some(v0),
                a: Some(a),
            },
        }
    }
}

/// Classical momentum bounds at a given energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumLimits {
    /// Smallest classical momentum `√(2mE)`, reached at the barrier top.
    pub p0: f64,
    /// Largest classical momentum `√(2m(E+V₀))`. `None` when the potential
    /// has no flat asymptote (InverseHO), in which case momentum is unbounded.
    pub p_max: Option<f64>,
}

impl PotentialModel {
    pub fn inverse_ho(alpha: f64) -> Result<Self> {
        Ok(Self {
            shape: Shape::InverseHo {
                alpha: require_positive("alpha", alpha)?,
            },
        })
    }

    pub fn sech2(v0: f64, a: f64) -> Result<Self> {
        Ok(Self {
            shape: Shape::Sech2 {
                v0: require_positive("v0", v0)?,
                a: require_positive("a", a)?,
            },
        })
    }

    pub fn lorentzian(v0: f64, a: f64) -> Result<Self> {
        Ok(Self {
            shape: Shape::Lorentzian {
                v0: require_positive("v0", v0)?,
                a: require_positive("a", a)?,
            },
        })
    }

    pub fn kind(&self) -> PotentialKind {
        match self.shape {
            Shape::InverseHo { .. } => PotentialKind::InverseHo,
            Shape::Sech2 { .. } => PotentialKind::Sech2,
            Shape::Lorentzian { .. } => PotentialKind::Lorentzian,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.shape {
            Shape::InverseHo { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// Asymptotic depth `V₀`; `None` for the inverted oscillator.
    pub fn depth(&self) -> Option<f64> {
        match self.shape {
            Shape::InverseHo { .. } => None,
            Shape::Sech2 { v0, .. } | Shape::Lorentzian { v0, .. } => Some(v0),
        }
    }

    pub fn width(&self) -> Option<f64> {
        match self.shape {
            Shape::InverseHo { .. } => None,
            Shape::Sech2 { a, .. } | Shape::Lorentzian { a, .. } => Some(a),
        }
    }

    /// Potential on the real axis.
    pub fn v(&self, x: f64) -> f64 {
        match self.shape {
            Shape::InverseHo { alpha } => -0.5 * alpha * x * x,
            // sech² − 1 = −tanh²
            Shape::Sech2 { v0, a } => {
                let t = (x / a).tanh();
                -v0 * t * t
            }
            Shape::Lorentzian { v0, a } => {
                let x2 = x * x;
                -v0 * x2 / (x2 + a * a)
            }
        }
    }

    /// Curvature at the barrier top, `−V″(0)`.
    pub fn curvature(&self) -> f64 {
        match self.shape {
            Shape::InverseHo { alpha } => alpha,
            Shape::Sech2 { v0, a } | Shape::Lorentzian { v0, a } => 2.0 * v0 / (a * a),
        }
    }

    /// `Im V⁻¹(ξ)` on the non-negative branch, for `ξ > 0`.
    pub fn im_v_inverse(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::Domain {
                what: "im_v_inverse",
                value: xi,
                reason: "requires finite xi > 0",
            });
        }
        Ok(self.im_v_inverse_unchecked(xi))
    }

    /// Same as [`im_v_inverse`](Self::im_v_inverse) but also accepts `ξ = 0`
    /// and performs no validation. Used inside quadrature loops.
    pub(crate) fn im_v_inverse_unchecked(&self, xi: f64) -> f64 {
        match self.shape {
            Shape::InverseHo { alpha } => (2.0 * xi / alpha).sqrt(),
            // a·acos(√(V₀/(ξ+V₀))) rewritten as a·atan(√(ξ/V₀)); acos loses
            // digits when its argument is close to one.
            Shape::Sech2 { v0, a } => a * (xi / v0).sqrt().atan(),
            Shape::Lorentzian { v0, a } => a * (xi / (v0 + xi)).sqrt(),
        }
    }

    /// Location of the pole of `V(iy)` on the positive imaginary axis.
    pub fn imaginary_axis_pole(&self) -> Option<f64> {
        match self.shape {
            Shape::InverseHo { .. } => None,
            Shape::Sech2 { a, .. } => Some(FRAC_PI_2 * a),
            Shape::Lorentzian { a, .. } => Some(a),
        }
    }

    /// `V(iy)`, real and increasing for `0 ≤ y` below the pole.
    pub fn v_on_imaginary_axis(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) || !y.is_finite() {
            return Err(Error::Domain {
                what: "v_on_imaginary_axis",
                value: y,
                reason: "requires finite y >= 0",
            });
        }
        if let Some(pole) = self.imaginary_axis_pole() {
            if y >= pole {
                return Err(Error::Domain {
                    what: "v_on_imaginary_axis",
                    value: y,
                    reason: "at or beyond the pole of V(iy)",
                });
            }
        }
        Ok(self.v_on_imaginary_axis_unchecked(y))
    }

    pub(crate) fn v_on_imaginary_axis_unchecked(&self, y: f64) -> f64 {
        match self.shape {
            Shape::InverseHo { alpha } => 0.5 * alpha * y * y,
            Shape::Sech2 { v0, a } => {
                let t = (y / a).tan();
                v0 * t * t
            }
            Shape::Lorentzian { v0, a } => {
                let y2 = y * y;
                v0 * y2 / (a * a - y2)
            }
        }
    }

    /// Solves `V(iy₀) = E` for `y₀ > 0` by bisection.
    ///
    /// The bracket is `[0, pole·(1 − 10⁻¹²)]` for barriers with a pole on the
    /// imaginary axis, otherwise it is grown geometrically until it encloses
    /// the root. Bisection runs until the bracket cannot shrink further; the
    /// result is accepted if `|V(iy₀) − E| ≤ tol·E`.
    pub fn imaginary_turning_point(
        &self,
        energy: f64,
        _consts: &PhysicalConstants,
        tol: f64,
    ) -> Result<f64> {
        require_energy("imaginary_turning_point", energy)?;
        let residual = |y: f64| self.v_on_imaginary_axis_unchecked(y) - energy;

        let mut lo = 0.0_f64;
        let mut hi = match self.imaginary_axis_pole() {
            Some(pole) => pole * (1.0 - 1e-12),
            None => {
                let mut hi = 1.0_f64;
                while residual(hi) < 0.0 {
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return Err(Error::NotConverged {
                            what: "imaginary_turning_point bracket",
                            best: hi,
                            err: f64::INFINITY,
                        });
                    }
                }
                hi
            }
        };
        if residual(hi) < 0.0 {
            return Err(Error::NotConverged {
                what: "imaginary_turning_point bracket",
                best: hi,
                err: residual(hi).abs(),
            });
        }

        const MAX_ITER: usize = 200;
        for _ in 0..MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let r = residual(mid);
            if r == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if r < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }

        let y0 = if residual(lo).abs() <= residual(hi).abs() {
            lo
        } else {
            hi
        };
        let err = residual(y0).abs();
        if err <= tol * energy {
            Ok(y0)
        } else {
            Err(Error::NotConverged {
                what: "imaginary_turning_point",
                best: y0,
                err,
            })
        }
    }

    /// Momentum bounds `(p₀, p_max)` at energy `E > 0`.
    pub fn p_limits(&self, energy: f64, consts: &PhysicalConstants) -> Result<MomentumLimits> {
        require_energy("p_limits", energy)?;
        let two_m = 2.0 * consts.mass();
        Ok(MomentumLimits {
            p0: (two_m * energy).sqrt(),
            p_max: self.depth().map(|v0| (two_m * (energy + v0)).sqrt()),
        })
    }
}

pub(crate) fn require_energy(what: &'static str, energy: f64) -> Result<f64> {
    if energy > 0.0 && energy.is_finite() {
        Ok(energy)
    } else {
        Err(Error::Domain {
            what,
            value: energy,
            reason: "energy must be finite and > 0",
        })
    }
}
