//! Mass and potential profiles on a bounded interval.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{Expr, Jet};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Expr {
        expr: Expr,
        text: String,
    },
    Func {
        f: ScalarFn,
        d1: Option<ScalarFn>,
        d2: Option<ScalarFn>,
    },
}

/// A real function of `x` on `[lo, hi]` with access to its first two
/// derivatives.
///
/// Expression-backed profiles differentiate exactly. Closure-backed profiles
/// use the supplied derivatives, or central differences with step
/// `h = 1e-5·(1 + |x|)` when none are given.
#[derive(Clone)]
pub struct Profile {
    source: Source,
    lo: f64,
    hi: f64,
    discontinuities: Vec<f64>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = match &self.source {
            Source::Expr { text, .. } => text.as_str(),
            Source::Func { .. } => "<closure>",
        };
        f.debug_struct("Profile")
            .field("source", &src)
            .field("domain", &(self.lo, self.hi))
            .field("discontinuities", &self.discontinuities)
            .finish()
    }
}

fn check_domain(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "domain [{lo}, {hi}] must be finite with lo < hi"
        )))
    }
}

impl Profile {
    pub fn from_expr(text: &str, lo: f64, hi: f64) -> Result<Self> {
        check_domain(lo, hi)?;
        let expr = Expr::parse(text)?;
        Ok(Self {
            source: Source::Expr {
                expr,
                text: text.trim().to_string(),
            },
            lo,
            hi,
            discontinuities: Vec::new(),
        })
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static, lo: f64, hi: f64) -> Result<Self> {
        check_domain(lo, hi)?;
        Ok(Self {
            source: Source::Func {
                f: Arc::new(f),
                d1: None,
                d2: None,
            },
            lo,
            hi,
            discontinuities: Vec::new(),
        })
    }

    /// Closure-backed profile with analytic derivatives.
    pub fn from_fns(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        check_domain(lo, hi)?;
        Ok(Self {
            source: Source::Func {
                f: Arc::new(f),
                d1: Some(Arc::new(d1)),
                d2: Some(Arc::new(d2)),
            },
            lo,
            hi,
            discontinuities: Vec::new(),
        })
    }

    pub fn constant(value: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::from_fns(move |_| value, |_| 0.0, |_| 0.0, lo, hi)
    }

    /// Points where the profile may jump. Derivative queries there fail.
    pub fn with_discontinuities(mut self, mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        self.discontinuities = points;
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn discontinuities(&self) -> &[f64] {
        &self.discontinuities
    }

    /// Source text for expression-backed profiles.
    pub fn expression(&self) -> Option<&str> {
        match &self.source {
            Source::Expr { text, .. } => Some(text),
            Source::Func { .. } => None,
        }
    }

    pub fn in_domain(&self, x: f64) -> Result<()> {
        // Allow rounding slop at the edges.
        let slop = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        if x >= self.lo - slop && x <= self.hi + slop {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    fn at_discontinuity(&self, x: f64) -> bool {
        self.discontinuities
            .iter()
            .any(|&d| (x - d).abs() <= 1e-12 * (1.0 + d.abs()))
    }

    /// Raw evaluation with no domain check.
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match &self.source {
            Source::Expr { expr, .. } => expr.eval(x),
            Source::Func { f, .. } => f(x),
        }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.in_domain(x)?;
        let v = self.eval_unchecked(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { x })
        }
    }

    /// Value and first two derivatives at `x`.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.in_domain(x)?;
        if self.at_discontinuity(x) {
            return Err(Error::Discontinuity { x });
        }
        let jet = match &self.source {
            Source::Expr { expr, .. } => expr.jet(x),
            Source::Func { f, d1, d2 } => {
                let value = f(x);
                let h = 1e-5 * (1.0 + x.abs());
                let (fp, fm) = match (d1, d2) {
                    (Some(_), Some(_)) => (0.0, 0.0),
                    _ => (f(x + h), f(x - h)),
                };
                Jet {
                    value,
                    d1: d1.as_ref().map_or_else(|| (fp - fm) / (2.0 * h), |g| g(x)),
                    d2: d2.as_ref().map_or_else(|| (fp - 2.0 * value + fm) / (h * h), |g| g(x)),
                }
            }
        };
        if jet.value.is_finite() && jet.d1.is_finite() && jet.d2.is_finite() {
            Ok(jet)
        } else {
            Err(Error::NonFinite { x })
        }
    }
}

/// A strictly positive effective-mass profile `m(x)`.
#[derive(Debug, Clone)]
pub struct MassProfile(Profile);

impl MassProfile {
    pub fn new(profile: Profile) -> Self {
        Self(profile)
    }

    pub fn from_expr(text: &str, lo: f64, hi: f64) -> Result<Self> {
        Profile::from_expr(text, lo, hi).map(Self)
    }

    pub fn constant(mass: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::NonPositiveMass { x: lo, mass });
        }
        Profile::constant(mass, lo, hi).map(Self)
    }

    /// A catalog name or an expression.
    pub fn resolve(spec: &str, lo: f64, hi: f64) -> Result<Self> {
        let text = lookup_profile(&MASS_PROFILES, spec).unwrap_or(spec);
        Self::from_expr(text, lo, hi)
    }

    pub fn profile(&self) -> &Profile {
        &self.0
    }

    pub fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }

    pub fn mass(&self, x: f64) -> Result<f64> {
        let m = self.0.value(x)?;
        positive(x, m)
    }

    pub(crate) fn mass_unchecked(&self, x: f64) -> f64 {
        self.0.eval_unchecked(x)
    }

    /// `(m, m', m'')` at `x`.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        let jet = self.0.jet(x)?;
        positive(x, jet.value)?;
        Ok(jet)
    }

    /// Checks positivity at every point of `xs`.
    pub fn validate_on(&self, xs: impl IntoIterator<Item = f64>) -> Result<()> {
        xs.into_iter().try_for_each(|x| self.mass(x).map(|_| ()))
    }

    /// The same profile multiplied by a positive constant.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::InvalidInput(format!(
                "mass scale factor must be positive, got {factor}"
            )));
        }
        let inner = self.0.clone();
        let (lo, hi) = inner.domain();
        let (a, b, c) = (inner.clone(), inner.clone(), inner.clone());
        let jet_at = move |p: &Profile, x: f64| p.jet(x).unwrap_or(Jet::constant(f64::NAN));
        let scaled = Profile::from_fns(
            move |x| factor * a.eval_unchecked(x),
            move |x| factor * jet_at(&b, x).d1,
            move |x| factor * jet_at(&c, x).d2,
            lo,
            hi,
        )?
        .with_discontinuities(inner.discontinuities().to_vec());
        Ok(Self(scaled))
    }
}

fn positive(x: f64, m: f64) -> Result<f64> {
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::NonPositiveMass { x, mass: m })
    }
}

/// A potential `V(x)`, finite on its domain.
#[derive(Debug, Clone)]
pub struct PotentialProfile(Profile);

impl PotentialProfile {
    pub fn new(profile: Profile) -> Self {
        Self(profile)
    }

    pub fn from_expr(text: &str, lo: f64, hi: f64) -> Result<Self> {
        Profile::from_expr(text, lo, hi).map(Self)
    }

    pub fn resolve(spec: &str, lo: f64, hi: f64) -> Result<Self> {
        let text = lookup_profile(&POTENTIAL_PROFILES, spec).unwrap_or(spec);
        Self::from_expr(text, lo, hi)
    }

    pub fn profile(&self) -> &Profile {
        &self.0
    }

    pub fn potential(&self, x: f64) -> Result<f64> {
        self.0.value(x)
    }
}

/// A named profile expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamedProfile {
    pub name: &'static str,
    pub expression: &'static str,
    pub smooth: bool,
}

pub const MASS_PROFILES: [NamedProfile; 6] = [
    NamedProfile {
        name: "unit",
        expression: "1",
        smooth: true,
    },
    NamedProfile {
        name: "lorentzian",
        expression: "1 + 1/(1 + x^2)",
        smooth: true,
    },
    NamedProfile {
        name: "exponential",
        expression: "exp(2*x)",
        smooth: true,
    },
    NamedProfile {
        name: "sech-bump",
        expression: "1 + 0.5*sech(x)^2",
        smooth: true,
    },
    NamedProfile {
        name: "gaussian-bump",
        expression: "1 + exp(-x^2)",
        smooth: true,
    },
    NamedProfile {
        name: "parabolic",
        expression: "1 + 0.1*x^2",
        smooth: true,
    },
];

pub const POTENTIAL_PROFILES: [NamedProfile; 4] = [
    NamedProfile {
        name: "zero",
        expression: "0",
        smooth: true,
    },
    NamedProfile {
        name: "harmonic",
        expression: "x^2",
        smooth: true,
    },
    NamedProfile {
        name: "quartic",
        expression: "x^4",
        smooth: true,
    },
    NamedProfile {
        name: "sech-well",
        expression: "-4*sech(x)^2",
        smooth: true,
    },
];

fn lookup_profile(table: &[NamedProfile], name: &str) -> Option<&'static str> {
    table.iter().find(|p| p.name == name.trim()).map(|p| p.expression)
}
