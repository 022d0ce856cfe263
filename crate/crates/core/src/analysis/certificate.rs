//! Gain-ratio conditions for convergence to an isosceles formation.
//!
//! Two columns are evaluated separately. The theory column holds the
//! purely analytic conditions; the numerics-extended column also uses the
//! gap scan that rules out undesired rest points for acute triangles at any
//! `R_Ad`. The numerics-extended column decides `satisfied`.

use serde::{Deserialize, Serialize};

use super::cubic::threshold_distance;
use crate::control::Gains;
use crate::error::{Error, Result};
use crate::geometry::FormationSpec;

const RTOL: f64 = 1e-12;

/// Smallest `R_Ad` at which sweeps of the equilateral case stopped showing
/// moving outcomes.
pub const OBSERVED_SUFFICIENT_RAD: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Acute,
    Right,
    Obtuse,
}

impl Regime {
    /// Classifies `θ*` (radians), with a `1e-12` band around 90°.
    pub fn of(theta_star: f64) -> Self {
        let half_pi = std::f64::consts::FRAC_PI_2;
        if (theta_star - half_pi).abs() <= RTOL * half_pi {
            Regime::Right
        } else if theta_star < half_pi {
            Regime::Acute
        } else {
            Regime::Obtuse
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `ℓ ≤ d̂`, any `R_Ad > 0`.
    ShortLegAny,
    /// `ℓ ≤ d̂`, acute, `R_Ad ≤ 6/(1+cos θ*)`.
    ShortLegAcuteUpper,
    /// `ℓ > d̂`, acute, `θ* ∈ [60°, 90°)`, `R_Ad = 6/(1+cos θ*)`.
    LongLegAcuteEquality,
    /// `ℓ > d̂`, acute, `θ* < 60°`: no analytic condition.
    LongLegAcuteUncovered,
    /// `ℓ > d̂`, acute, `R_Ad ≥ max{6/(1+cos θ*), 2/(1-cos θ*)}`.
    LongLegAcuteMax,
    /// `ℓ > d̂`, right or obtuse, `R_Ad ≥ 2/(1+cos θ*)`.
    LongLegRightObtuse,
}

impl Clause {
    pub fn tag(&self) -> &'static str {
        match self {
            Clause::ShortLegAny => "short_leg_any",
            Clause::ShortLegAcuteUpper => "short_leg_acute_upper",
            Clause::LongLegAcuteEquality => "long_leg_acute_equality",
            Clause::LongLegAcuteUncovered => "long_leg_acute_uncovered",
            Clause::LongLegAcuteMax => "long_leg_acute_max",
            Clause::LongLegRightObtuse => "long_leg_right_obtuse",
        }
    }
}

/// One column of the gain table applied to a configured `R_Ad`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub clause: Clause,
    pub required_rad_lower: Option<f64>,
    pub required_rad_upper: Option<f64>,
    /// `None` when the column makes no claim.
    pub satisfied: Option<bool>,
}

impl Verdict {
    fn interval(clause: Clause, lower: Option<f64>, upper: Option<f64>, r_ad: f64) -> Self {
        let ok_lo = lower.is_none_or(|lo| r_ad >= lo * (1.0 - RTOL));
        let ok_hi = upper.is_none_or(|hi| r_ad <= hi * (1.0 + RTOL));
        Self {
            clause,
            required_rad_lower: lower,
            required_rad_upper: upper,
            satisfied: Some(ok_lo && ok_hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainCertificate {
    pub ell: f64,
    pub theta_star_deg: f64,
    pub regime: Regime,
    pub r_ad: f64,
    pub r_bd: f64,
    pub d_hat: f64,
    pub ell_le_dhat: bool,
    pub clause: Clause,
    pub required_rad_lower: Option<f64>,
    pub required_rad_upper: Option<f64>,
    pub satisfied: bool,
    pub theory: Verdict,
    pub numerics: Verdict,
    pub note: Option<String>,
}

/// Evaluates the gain table for an isosceles `spec`.
pub fn gain_certificate(spec: &FormationSpec, gains: &Gains) -> Result<GainCertificate> {
    let ell = spec.isosceles_leg().ok_or(Error::NotIsosceles {
        d12: spec.d12_star(),
        d13: spec.d13_star(),
    })?;
    let theta = spec.theta_star();
    let c = theta.cos();
    let regime = Regime::of(theta);
    let r_ad = gains.r_ad();
    let d_hat = threshold_distance(gains.r_bd())?;
    let ell_le_dhat = ell <= d_hat * (1.0 + RTOL);

    let six = 6.0 / (1.0 + c);
    let (theory, numerics) = if ell_le_dhat {
        let numerics = Verdict::interval(Clause::ShortLegAny, None, None, r_ad);
        let theory = match regime {
            Regime::Acute => Verdict::interval(Clause::ShortLegAcuteUpper, None, Some(six), r_ad),
            _ => numerics,
        };
        (theory, numerics)
    } else {
        match regime {
            Regime::Acute => {
                let lower = six.max(2.0 / (1.0 - c));
                let numerics = Verdict::interval(Clause::LongLegAcuteMax, Some(lower), None, r_ad);
                let theory = if theta >= 60f64.to_radians() * (1.0 - RTOL) {
                    Verdict::interval(Clause::LongLegAcuteEquality, Some(six), Some(six), r_ad)
                } else {
                    Verdict {
                        clause: Clause::LongLegAcuteUncovered,
                        required_rad_lower: None,
                        required_rad_upper: None,
                        satisfied: None,
                    }
                };
                (theory, numerics)
            }
            _ => {
                // 2/(1+cos θ*) → ∞ as θ* → 180°
                let lower = if 1.0 + c > 0.0 { 2.0 / (1.0 + c) } else { f64::INFINITY };
                let v = Verdict::interval(Clause::LongLegRightObtuse, Some(lower), None, r_ad);
                (v, v)
            }
        }
    };

    let satisfied = numerics.satisfied.unwrap_or(false);
    let note = (!ell_le_dhat && !satisfied).then(|| {
        format!(
            "bound not met; equilateral sweeps showed no moving outcomes from R_Ad >= {OBSERVED_SUFFICIENT_RAD} \
             (observed, not proven)"
        )
    });
    Ok(GainCertificate {
        ell,
        theta_star_deg: spec.theta_star_deg(),
        regime,
        r_ad,
        r_bd: gains.r_bd(),
        d_hat,
        ell_le_dhat,
        clause: numerics.clause,
        required_rad_lower: numerics.required_rad_lower,
        required_rad_upper: numerics.required_rad_upper,
        satisfied,
        theory,
        numerics,
        note,
    })
}
