//! Evaluable norms on `M_n`.
//!
//! [`NormSpec`] names a norm, evaluates it and carries the metadata the
//! certification code needs: whether the value is exact or a certified lower
//! bound from an optimizer, and whether the norm is claimed to be an M-norm
//! (C*-convex unit ball), an L-norm (dual of an M-norm) or neither.

mod dual;
mod invariance;
mod radius;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dual::{dual_norm_eval, omega_star, pairing, DualConfig, DualEvalResult};
pub use invariance::{check_weak_unitary_invariance, chi, InvarianceReport};
pub use radius::{numerical_radius, NR_GRID};

use crate::error::{Error, Result};
use crate::matcore::{svd, ComplexMatrix};

/// How a norm value is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Exact,
    /// Lower bound from a finite-budget supremum search.
    Optimized,
}

/// Claimed M/L status of a catalog norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormClass {
    M,
    L,
    Neither,
    Unknown,
}

impl NormClass {
    fn dual(self) -> Self {
        match self {
            NormClass::M => NormClass::L,
            NormClass::L => NormClass::M,
            other => other,
        }
    }
}

/// Schatten exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenExponent(f64);

impl SchattenExponent {
    pub const ONE: Self = Self(1.0);
    pub const INFINITY: Self = Self(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::BadExponent(p));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        if self.0 == 1.0 {
            Self::INFINITY
        } else if self.0.is_infinite() {
            Self::ONE
        } else {
            Self(self.0 / (self.0 - 1.0))
        }
    }
}

/// A norm from the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `(Σ s_i^p)^{1/p}`; `p = ∞` is the operator norm, `p = 1` the trace norm.
    Schatten(SchattenExponent),
    /// Sum of the `k` largest singular values.
    KyFan(usize),
    NumericalRadius,
    /// `n·ω(·)` with `n` the dimension of the argument.
    DimScaledNumericalRadius,
    /// Dual of the numerical radius.
    OmegaStar(DualConfig),
    /// `ω_*(·)/n`, dual of `n·ω(·)`.
    DimScaledOmegaStar(DualConfig),
    /// Largest entry modulus; not weakly unitarily invariant.
    MaxEntry,
    Scaled { factor: f64, base: Box<NormSpec> },
    /// Dual norm evaluated by ascent over the unit ball of `base`.
    Dual { base: Box<NormSpec>, config: DualConfig },
}

impl NormSpec {
    pub fn op() -> Self {
        NormSpec::Schatten(SchattenExponent::INFINITY)
    }

    pub fn trace() -> Self {
        NormSpec::Schatten(SchattenExponent::ONE)
    }

    pub fn schatten(p: f64) -> Result<Self> {
        Ok(NormSpec::Schatten(SchattenExponent::new(p)?))
    }

    pub fn omega_star() -> Self {
        NormSpec::OmegaStar(DualConfig::default())
    }

    pub fn scaled(self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::BadParameter(format!("scale factor {factor}")));
        }
        Ok(NormSpec::Scaled {
            factor,
            base: Box::new(self),
        })
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn kind(&self) -> NormKind {
        match self {
            NormSpec::OmegaStar(_) | NormSpec::DimScaledOmegaStar(_) | NormSpec::Dual { .. } => {
                NormKind::Optimized
            }
            NormSpec::Scaled { base, .. } => base.kind(),
            _ => NormKind::Exact,
        }
    }

    pub fn claimed_class(&self) -> NormClass {
        match self {
            NormSpec::Schatten(p) if p.value().is_infinite() => NormClass::M,
            NormSpec::Schatten(p) if p.value() == 1.0 => NormClass::L,
            // unitarily invariant, but not a multiple of the operator or trace norm
            NormSpec::Schatten(_) => NormClass::Neither,
            NormSpec::KyFan(1) => NormClass::M,
            NormSpec::KyFan(_) => NormClass::Unknown,
            NormSpec::NumericalRadius | NormSpec::DimScaledNumericalRadius => NormClass::M,
            NormSpec::OmegaStar(_) | NormSpec::DimScaledOmegaStar(_) => NormClass::L,
            NormSpec::MaxEntry => NormClass::Neither,
            NormSpec::Scaled { base, .. } => base.claimed_class(),
            NormSpec::Dual { base, .. } => base.claimed_class().dual(),
        }
    }

    /// The dual norm, in closed form where one is known.
    pub fn dual(&self) -> NormSpec {
        match self {
            NormSpec::Schatten(p) => NormSpec::Schatten(p.conjugate()),
            NormSpec::KyFan(1) => NormSpec::trace(),
            NormSpec::NumericalRadius => NormSpec::omega_star(),
            NormSpec::DimScaledNumericalRadius => NormSpec::DimScaledOmegaStar(DualConfig::default()),
            NormSpec::OmegaStar(_) => NormSpec::NumericalRadius,
            NormSpec::DimScaledOmegaStar(_) => NormSpec::DimScaledNumericalRadius,
            NormSpec::Scaled { factor, base } => NormSpec::Scaled {
                factor: 1.0 / factor,
                base: Box::new(base.dual()),
            },
            NormSpec::Dual { base, .. } => (**base).clone(),
            other => NormSpec::Dual {
                base: Box::new(other.clone()),
                config: DualConfig::default(),
            },
        }
    }

    pub fn evaluate(&self, a: &ComplexMatrix) -> Result<f64> {
        let n = a.dim()?;
        match self {
            NormSpec::Schatten(p) => Ok(schatten_from_singular_values(&svd(a)?.singular_values, *p)),
            NormSpec::KyFan(k) => {
                let s = svd(a)?.singular_values;
                Ok(s.iter().take(*k).sum())
            }
            NormSpec::NumericalRadius => numerical_radius(a),
            NormSpec::DimScaledNumericalRadius => Ok(n as f64 * numerical_radius(a)?),
            NormSpec::OmegaStar(cfg) => {
                Ok(dual_norm_eval(&NormSpec::NumericalRadius, a, cfg.budget, cfg.seed)?.lower_bound)
            }
            NormSpec::DimScaledOmegaStar(cfg) => Ok(dual_norm_eval(
                &NormSpec::NumericalRadius,
                a,
                cfg.budget,
                cfg.seed,
            )?
            .lower_bound
                / n as f64),
            NormSpec::MaxEntry => Ok(a.max_abs()),
            NormSpec::Scaled { factor, base } => Ok(factor * base.evaluate(a)?),
            NormSpec::Dual { base, config } => {
                Ok(dual_norm_eval(base, a, config.budget, config.seed)?.lower_bound)
            }
        }
    }
}

fn schatten_from_singular_values(s: &[f64], p: SchattenExponent) -> f64 {
    let p = p.value();
    let top = s.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        top
    } else if p == 1.0 {
        s.iter().sum()
    } else {
        top * s.iter().map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Schatten `p`-norm.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    let p = SchattenExponent::new(p)?;
    a.dim()?;
    Ok(schatten_from_singular_values(&svd(a)?.singular_values, p))
}

/// Operator (spectral) norm `‖A‖_∞`.
pub fn op_norm(a: &ComplexMatrix) -> Result<f64> {
    schatten_norm(a, f64::INFINITY)
}

/// Trace norm `‖A‖_1 = Tr|A|`.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    schatten_norm(a, 1.0)
}

fn format_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Schatten(p) if p.value().is_infinite() => write!(f, "op"),
            NormSpec::Schatten(p) if p.value() == 1.0 => write!(f, "trace"),
            NormSpec::Schatten(p) => write!(f, "schatten:{}", format_exponent(p.value())),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::NumericalRadius => write!(f, "omega"),
            NormSpec::DimScaledNumericalRadius => write!(f, "n-omega"),
            NormSpec::OmegaStar(_) => write!(f, "omega-star"),
            NormSpec::DimScaledOmegaStar(_) => write!(f, "omega-star/n"),
            NormSpec::MaxEntry => write!(f, "max-entry"),
            NormSpec::Scaled { factor, base } => write!(f, "{factor}*{base}"),
            NormSpec::Dual { base, .. } => write!(f, "dual:{base}"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// Accepts `schatten:p`, `op`, `trace`, `kyfan:k`, `omega`, `n-omega`,
    /// `omega-star`, `omega-star/n`, `max-entry`, `<factor>*<name>` and `dual:<name>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("dual:") {
            return Ok(NormSpec::Dual {
                base: Box::new(inner.parse()?),
                config: DualConfig::default(),
            });
        }
        if let Some((factor, inner)) = s.split_once('*') {
            let factor: f64 = factor
                .parse()
                .map_err(|_| Error::UnknownNorm(s.to_string()))?;
            return inner.parse::<NormSpec>()?.scaled(factor);
        }
        if let Some(p) = s.strip_prefix("schatten:") {
            let p = match p {
                "inf" | "infinity" => f64::INFINITY,
                _ => p.parse().map_err(|_| Error::BadExponent(f64::NAN))?,
            };
            return NormSpec::schatten(p);
        }
        if let Some(k) = s.strip_prefix("kyfan:") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::BadParameter(format!("Ky Fan index `{k}`")))?;
            if k == 0 {
                return Err(Error::BadParameter("Ky Fan index must be >= 1".into()));
            }
            return Ok(NormSpec::KyFan(k));
        }
        match s {
            "op" => Ok(NormSpec::op()),
            "trace" => Ok(NormSpec::trace()),
            "omega" => Ok(NormSpec::NumericalRadius),
            "n-omega" => Ok(NormSpec::DimScaledNumericalRadius),
            "omega-star" => Ok(NormSpec::omega_star()),
            "omega-star/n" => Ok(NormSpec::DimScaledOmegaStar(DualConfig::default())),
            "max-entry" => Ok(NormSpec::MaxEntry),
            _ => Err(Error::UnknownNorm(s.to_string())),
        }
    }
}
