//! Problem parameters and Gagliardo-Nirenberg constants.
//!
//! The admissible exponent window is `2 < p < 2 + 4/N` for the lower
//! nonlinearity and `q >= 4 + 4/N` for the upper one: `q = 4 + 4/N` for the
//! global-minimization regime, `q > 4 + 4/N` for the local-minimizer /
//! mountain-pass regime (with `q <= 2N/(N-2)` when the mountain-pass solver
//! runs). All thresholds are functions of interpolation constants that the
//! analysis only asserts to exist, so constants travel with their
//! provenance.

use crate::error::CoreError;

/// Which interpolation inequality a constant belongs to.
///
/// `H1`: `∫|u|^s <= C^s (∫u²)^{(2s-N(s-2))/4} (∫|∇u|²)^{N(s-2)/4}`,
/// `s ∈ (2, 2*)`.
///
/// `E`: `∫|u|^{t/2} <= C^t (∫|u|)^{(4N-t(N-2))/(2(N+2))}
/// (∫|∇u|²)^{N(t-2)/(2(N+2))}`, `t ∈ (2, 2·2*)`, for `u ∈ L¹` with
/// `∇u ∈ L²`. The landscape profile and every threshold use `E`-kind
/// constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnKind {
    H1,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Estimated,
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GNConstant {
    pub kind: GnKind,
    pub dimension: u32,
    pub exponent: f64,
    pub value: f64,
    pub provenance: Provenance,
}

/// Critical Sobolev exponent `2* = 2N/(N-2)` (infinite when `N = 2`).
pub fn sobolev_critical(dimension: u32) -> f64 {
    if dimension <= 2 {
        f64::INFINITY
    } else {
        2.0 * dimension as f64 / (dimension as f64 - 2.0)
    }
}

impl GNConstant {
    pub fn new(
        kind: GnKind,
        dimension: u32,
        exponent: f64,
        value: f64,
        provenance: Provenance,
    ) -> Result<Self, CoreError> {
        if dimension < 2 {
            return Err(CoreError::InvalidParameter {
                name: "dimension",
                constraint: "N >= 2",
            });
        }
        if !(value > 0.0) || !value.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "gn value",
                constraint: "C > 0",
            });
        }
        let upper = match kind {
            GnKind::H1 => sobolev_critical(dimension),
            GnKind::E => 2.0 * sobolev_critical(dimension),
        };
        if !(exponent > 2.0 && exponent < upper) {
            return Err(CoreError::InvalidParameter {
                name: "gn exponent",
                constraint: "exponent in (2, 2*) for H1 kind, (2, 2·2*) for E kind",
            });
        }
        Ok(Self {
            kind,
            dimension,
            exponent,
            value,
            provenance,
        })
    }

    /// Copy with the value inflated by a safety factor; estimates are lower
    /// bounds on the sharp constants, so upper-bound uses (coercivity,
    /// thresholds) apply a factor > 1.
    pub fn inflated(&self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            ..*self
        }
    }
}

/// Parameters of one constrained problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemParams {
    pub dimension: u32,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub theta: f64,
    /// E-kind constant at exponent `p` (landscape and thresholds).
    pub gn_p: Option<GNConstant>,
    /// E-kind constant at exponent `q`.
    pub gn_q: Option<GNConstant>,
    /// E-kind constant at the quasilinear critical exponent `4 + 4/N`,
    /// needed for the coercivity threshold when `q` is not itself critical.
    pub gn_crit: Option<GNConstant>,
}

impl ProblemParams {
    pub fn new(dimension: u32, p: f64, q: f64, a: f64, theta: f64) -> Result<Self, CoreError> {
        if dimension < 2 {
            return Err(CoreError::InvalidParameter {
                name: "dimension",
                constraint: "N >= 2",
            });
        }
        let nf = dimension as f64;
        if !(p > 2.0 && p < 2.0 + 4.0 / nf) {
            return Err(CoreError::InvalidParameter {
                name: "p",
                constraint: "2 < p < 2 + 4/N",
            });
        }
        let crit = 4.0 + 4.0 / nf;
        if !(q >= crit - 1.0e-12) || q >= 2.0 * sobolev_critical(dimension) {
            return Err(CoreError::InvalidParameter {
                name: "q",
                constraint: "4 + 4/N <= q < 2·2N/(N-2)",
            });
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "a",
                constraint: "a > 0",
            });
        }
        if !(0.5..=1.0).contains(&theta) {
            return Err(CoreError::InvalidParameter {
                name: "theta",
                constraint: "theta in [1/2, 1]",
            });
        }
        Ok(Self {
            dimension,
            p,
            q,
            a,
            theta,
            gn_p: None,
            gn_q: None,
            gn_crit: None,
        })
    }

    pub fn with_constants(
        mut self,
        gn_p: GNConstant,
        gn_q: GNConstant,
        gn_crit: Option<GNConstant>,
    ) -> Result<Self, CoreError> {
        for (c, name) in [(&gn_p, "gn_p"), (&gn_q, "gn_q")] {
            if c.kind != GnKind::E || c.dimension != self.dimension {
                return Err(CoreError::InvalidParameter {
                    name,
                    constraint: "E-kind constant in the problem dimension",
                });
            }
        }
        if let Some(c) = &gn_crit {
            if c.kind != GnKind::E || c.dimension != self.dimension {
                return Err(CoreError::InvalidParameter {
                    name: "gn_crit",
                    constraint: "E-kind constant in the problem dimension",
                });
            }
        }
        self.gn_p = Some(gn_p);
        self.gn_q = Some(gn_q);
        self.gn_crit = gn_crit;
        Ok(self)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self, CoreError> {
        if !(0.5..=1.0).contains(&theta) {
            return Err(CoreError::InvalidParameter {
                name: "theta",
                constraint: "theta in [1/2, 1]",
            });
        }
        Ok(Self {
            theta,
            ..self.clone()
        })
    }

    pub fn with_mass(&self, a: f64) -> Result<Self, CoreError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "a",
                constraint: "a > 0",
            });
        }
        Ok(Self { a, ..self.clone() })
    }

    pub fn quasilinear_critical(&self) -> f64 {
        4.0 + 4.0 / self.dimension as f64
    }

    pub fn is_critical_q(&self) -> bool {
        (self.q - self.quasilinear_critical()).abs() <= 1.0e-9 * self.q
    }

    /// Global-minimization regime requires exactly the critical exponent.
    pub fn validate_global(&self) -> Result<(), CoreError> {
        if self.is_critical_q() {
            Ok(())
        } else {
            Err(CoreError::InvalidParameter {
                name: "q",
                constraint: "q = 4 + 4/N for the global minimization regime",
            })
        }
    }

    /// Local-minimizer regime requires a strictly supercritical `q`.
    pub fn validate_supercritical(&self) -> Result<(), CoreError> {
        if self.q > self.quasilinear_critical() + 1.0e-12 {
            Ok(())
        } else {
            Err(CoreError::InvalidParameter {
                name: "q",
                constraint: "q > 4 + 4/N",
            })
        }
    }

    /// Mountain-pass regime additionally caps `q` at the Sobolev-critical
    /// exponent (no cap when `N = 2`).
    pub fn validate_mountain_pass(&self) -> Result<(), CoreError> {
        self.validate_supercritical()?;
        if self.q <= sobolev_critical(self.dimension) + 1.0e-12 {
            Ok(())
        } else {
            Err(CoreError::InvalidParameter {
                name: "q",
                constraint: "q <= 2N/(N-2) for the mountain-pass solver",
            })
        }
    }
}
