//! Ambiguity attitudes: the phi families of the smooth ambiguity model, with
//! analytic values, derivatives, and inverses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Curvature of `1 / phi'`, used by the optimality validators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseDerivCurvature {
    Affine,
    Concave,
    Convex,
}

/// A member of the supported phi families. Each is strictly increasing and
/// weakly concave on its domain; concavity encodes ambiguity aversion and an
/// affine phi is ambiguity neutrality.
///
/// `Meu` is a tag for the infinitely-ambiguity-averse limit; it carries no
/// phi and is only accepted by the dedicated maxmin solver.
///
/// Every family is differentiable everywhere on its domain. Piecewise phi
/// with kinks is not supported: the effective-measure machinery evaluates
/// phi' pointwise and is undefined at a kink.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Attitude {
    Linear,
    /// `phi(x) = c ln(a x + b) + d`, requiring `a, c > 0` and `a x + b > 0`
    /// on the payoff range. `1/phi'` is affine, the constant-relative form.
    ShiftedLog { a: f64, b: f64, c: f64, d: f64 },
    /// `phi(x) = (1 - exp(-alpha x)) / alpha`, `alpha > 0`.
    Cara { alpha: f64 },
    /// `phi(x) = (x + shift)^gamma`, `gamma` in (0, 1], requiring
    /// `x + shift > 0` on the payoff range.
    Power { gamma: f64, shift: f64 },
    Meu,
}

impl Attitude {
    pub fn linear() -> Self {
        Attitude::Linear
    }

    pub fn shifted_log(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a > 0.0 && c > 0.0) {
            return Err(Error::AttitudeDomain {
                what: format!("shifted_log requires a, c > 0 (got a={a}, c={c})"),
            });
        }
        Ok(Attitude::ShiftedLog { a, b, c, d })
    }

    pub fn cara(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::AttitudeDomain {
                what: format!("cara requires alpha > 0 (got {alpha})"),
            });
        }
        Ok(Attitude::Cara { alpha })
    }

    pub fn power(gamma: f64, shift: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::AttitudeDomain {
                what: format!("power requires gamma in (0, 1] (got {gamma})"),
            });
        }
        Ok(Attitude::Power { gamma, shift })
    }

    pub fn is_meu(&self) -> bool {
        matches!(self, Attitude::Meu)
    }

    /// Affine phi means ambiguity neutrality.
    pub fn is_affine(&self) -> bool {
        match self {
            Attitude::Linear => true,
            Attitude::Power { gamma, .. } => *gamma == 1.0,
            _ => false,
        }
    }

    pub fn is_strictly_concave(&self) -> bool {
        match self {
            Attitude::Linear | Attitude::Meu => false,
            Attitude::Power { gamma, .. } => *gamma < 1.0,
            _ => true,
        }
    }

    fn require_smooth(&self) -> Result<()> {
        if self.is_meu() {
            return Err(Error::Unsupported {
                what: "the meu attitude has no phi; use the maxmin solver".into(),
            });
        }
        Ok(())
    }

    /// phi(x).
    pub fn value(&self, x: f64) -> Result<f64> {
        self.require_smooth()?;
        let v = match *self {
            Attitude::Linear => x,
            Attitude::ShiftedLog { a, b, c, d } => {
                let arg = a * x + b;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("shifted_log undefined at payoff {x}: a*x + b = {arg} <= 0"),
                    });
                }
                c * arg.ln() + d
            }
            Attitude::Cara { alpha } => (1.0 - (-alpha * x).exp()) / alpha,
            Attitude::Power { gamma, shift } => {
                let arg = x + shift;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("power undefined at payoff {x}: x + shift = {arg} <= 0"),
                    });
                }
                arg.powf(gamma)
            }
            Attitude::Meu => unreachable!(),
        };
        if !v.is_finite() {
            return Err(Error::AttitudeDomain {
                what: format!("phi({x}) is not finite"),
            });
        }
        Ok(v)
    }

    /// phi'(x).
    pub fn deriv(&self, x: f64) -> Result<f64> {
        self.require_smooth()?;
        let v = match *self {
            Attitude::Linear => 1.0,
            Attitude::ShiftedLog { a, b, c, .. } => {
                let arg = a * x + b;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("shifted_log' undefined at payoff {x}"),
                    });
                }
                c * a / arg
            }
            Attitude::Cara { alpha } => (-alpha * x).exp(),
            Attitude::Power { gamma, shift } => {
                let arg = x + shift;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("power' undefined at payoff {x}"),
                    });
                }
                gamma * arg.powf(gamma - 1.0)
            }
            Attitude::Meu => unreachable!(),
        };
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::AttitudeDomain {
                what: format!("phi'({x}) = {v} is not finite and positive"),
            });
        }
        Ok(v)
    }

    /// phi^{-1}(y).
    pub fn inverse(&self, y: f64) -> Result<f64> {
        self.require_smooth()?;
        let v = match *self {
            Attitude::Linear => y,
            Attitude::ShiftedLog { a, b, c, d } => (((y - d) / c).exp() - b) / a,
            Attitude::Cara { alpha } => {
                let arg = 1.0 - alpha * y;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("cara inverse undefined at {y}"),
                    });
                }
                -arg.ln() / alpha
            }
            Attitude::Power { gamma, shift } => {
                if y <= 0.0 && gamma < 1.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("power inverse undefined at {y}"),
                    });
                }
                y.powf(1.0 / gamma) - shift
            }
            Attitude::Meu => unreachable!(),
        };
        if !v.is_finite() {
            return Err(Error::AttitudeDomain {
                what: format!("phi^-1({y}) is not finite"),
            });
        }
        Ok(v)
    }

    /// Certainty equivalent `phi^{-1}(sum_i w_i phi(x_i))` for a probability
    /// vector `w`. CARA uses a log-sum-exp path so extreme curvature does not
    /// cancel catastrophically.
    pub fn certainty_equivalent(&self, weights: &[f64], payoffs: &[f64]) -> Result<f64> {
        self.require_smooth()?;
        debug_assert_eq!(weights.len(), payoffs.len());
        if let Attitude::Cara { alpha } = *self {
            // -(1/alpha) ln sum_i w_i e^{-alpha x_i}, shifted by the max exponent.
            let mut m = f64::NEG_INFINITY;
            for (&w, &x) in weights.iter().zip(payoffs) {
                if w > 0.0 {
                    m = m.max(-alpha * x);
                }
            }
            let s: f64 = weights
                .iter()
                .zip(payoffs)
                .filter(|(&w, _)| w > 0.0)
                .map(|(&w, &x)| w * (-alpha * x - m).exp())
                .sum();
            return Ok(-(m + s.ln()) / alpha);
        }
        let mut acc = 0.0;
        for (&w, &x) in weights.iter().zip(payoffs) {
            if w > 0.0 {
                acc += w * self.value(x)?;
            }
        }
        self.inverse(acc)
    }

    /// Shape of `1/phi'` over the attitude's domain.
    pub fn inverse_deriv_curvature(&self) -> InverseDerivCurvature {
        match *self {
            Attitude::Linear => InverseDerivCurvature::Affine,
            // 1/phi' = (a x + b) / (a c): affine.
            Attitude::ShiftedLog { .. } => InverseDerivCurvature::Affine,
            // 1/phi' = e^{alpha x}: convex.
            Attitude::Cara { .. } => InverseDerivCurvature::Convex,
            // 1/phi' = (x + s)^{1 - gamma} / gamma: concave for gamma < 1.
            Attitude::Power { gamma, .. } => {
                if gamma == 1.0 {
                    InverseDerivCurvature::Affine
                } else {
                    InverseDerivCurvature::Concave
                }
            }
            Attitude::Meu => InverseDerivCurvature::Affine,
        }
    }

    /// Numerically confirm that phi is strictly increasing and weakly concave
    /// on `[lo, hi]`, sampling a 1000-point grid. Returns the attitude domain
    /// error naming the first offending payoff, if any.
    pub fn validate_on_range(&self, lo: f64, hi: f64) -> Result<()> {
        if self.is_meu() {
            return Ok(());
        }
        let n = 1000;
        let step = if hi > lo { (hi - lo) / (n - 1) as f64 } else { 0.0 };
        let mut prev_value = f64::NEG_INFINITY;
        let mut prev_deriv = f64::INFINITY;
        for i in 0..n {
            let x = lo + step * i as f64;
            let v = self.value(x)?;
            let d = self.deriv(x)?;
            if v <= prev_value && step > 0.0 {
                return Err(Error::AttitudeDomain {
                    what: format!("phi not strictly increasing near payoff {x}"),
                });
            }
            // Weak concavity: derivative non-increasing, up to grid noise.
            if d > prev_deriv * (1.0 + 1e-9) {
                return Err(Error::AttitudeDomain {
                    what: format!("phi not weakly concave near payoff {x}"),
                });
            }
            prev_value = v;
            prev_deriv = d;
        }
        Ok(())
    }
}

/// A phi composed with a concave monotone transform of its values,
/// `phi_tilde = t(phi(x))`. This is how "more ambiguity averse" receivers are
/// constructed in the comparative statics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConcaveTransform {
    Identity,
    /// `y -> ln(y + k)`, requiring `y + k > 0` on the relevant value range.
    Log { k: f64 },
}

impl ConcaveTransform {
    pub fn value(&self, y: f64) -> Result<f64> {
        match *self {
            ConcaveTransform::Identity => Ok(y),
            ConcaveTransform::Log { k } => {
                let arg = y + k;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("transform ln(y + {k}) undefined at {y}"),
                    });
                }
                Ok(arg.ln())
            }
        }
    }

    pub fn deriv(&self, y: f64) -> Result<f64> {
        match *self {
            ConcaveTransform::Identity => Ok(1.0),
            ConcaveTransform::Log { k } => {
                let arg = y + k;
                if arg <= 0.0 {
                    return Err(Error::AttitudeDomain {
                        what: format!("transform derivative undefined at {y}"),
                    });
                }
                Ok(1.0 / arg)
            }
        }
    }

    pub fn inverse(&self, z: f64) -> Result<f64> {
        match *self {
            ConcaveTransform::Identity => Ok(z),
            ConcaveTransform::Log { k } => Ok(z.exp() - k),
        }
    }
}

/// The transformed attitude `t(phi(x))` as a phi-like object. Exposes the
/// same evaluations the solvers need.
#[derive(Debug, Clone)]
pub struct TransformedAttitude {
    pub base: Attitude,
    pub transform: ConcaveTransform,
}

impl TransformedAttitude {
    pub fn new(base: Attitude, transform: ConcaveTransform) -> Self {
        TransformedAttitude { base, transform }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.transform.value(self.base.value(x)?)
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        Ok(self.transform.deriv(self.base.value(x)?)? * self.base.deriv(x)?)
    }

    pub fn inverse(&self, z: f64) -> Result<f64> {
        self.base.inverse(self.transform.inverse(z)?)
    }

    pub fn certainty_equivalent(&self, weights: &[f64], payoffs: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (&w, &x) in weights.iter().zip(payoffs) {
            if w > 0.0 {
                acc += w * self.value(x)?;
            }
        }
        self.inverse(acc)
    }
}
