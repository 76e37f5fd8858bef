//! Growth models: exponential, logistic, and logistic with periodic harvesting.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::caputo::check_alpha;
use crate::error::{Error, Result};
use crate::specialfn::mittag_leffler;
use crate::training::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[serde(rename = "exp")]
    Exponential,
    Logistic,
    #[serde(rename = "harvest")]
    HarvestedLogistic,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Exponential,
        ModelKind::Logistic,
        ModelKind::HarvestedLogistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Exponential => "exp",
            ModelKind::Logistic => "logistic",
            ModelKind::HarvestedLogistic => "harvest",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(ModelKind::Exponential),
            "logistic" => Ok(ModelKind::Logistic),
            "harvest" => Ok(ModelKind::HarvestedLogistic),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    /// Growth rate.
    pub a: f64,
    /// Carrying capacity (logistic family).
    #[serde(rename = "cap")]
    pub capacity: f64,
    /// Harvesting amplitude.
    pub b: f64,
    pub u0: f64,
}

impl GrowthParams {
    /// Parameters used for the reference experiments of each model.
    pub fn reference(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Exponential => GrowthParams {
                a: 1.0,
                capacity: 1.0,
                b: 0.0,
                u0: 1.0,
            },
            ModelKind::Logistic => GrowthParams {
                a: 10.0,
                capacity: 1.0,
                b: 0.0,
                u0: 0.01,
            },
            ModelKind::HarvestedLogistic => GrowthParams {
                a: 5.0,
                capacity: 1.0,
                b: 0.8,
                u0: 0.4,
            },
        }
    }

    pub fn problem(&self, kind: ModelKind, alpha: f64) -> Result<ProblemSpec> {
        match kind {
            ModelKind::Exponential => exponential_model(self.a, self.u0, alpha),
            ModelKind::Logistic => logistic_model(self.a, self.capacity, self.u0, alpha),
            ModelKind::HarvestedLogistic => harvested_logistic_model(self.a, self.capacity, self.b, self.u0, alpha),
        }
    }
}

fn check_finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

fn check_capacity(capacity: f64) -> Result<()> {
    if capacity > 0.0 && capacity.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "carrying capacity must be positive, got {capacity}"
        )))
    }
}

/// `D^α u = a u`, solved by `u0 E_α(a t^α)`.
pub fn exponential_model(a: f64, u0: f64, alpha: f64) -> Result<ProblemSpec> {
    check_alpha(alpha)?;
    check_finite(&[("a", a), ("u0", u0)])?;
    let problem = ProblemSpec::new("exp", alpha, u0, move |u, _| a * u, move |_, _| a)?;
    Ok(problem.with_analytic(move |t| Ok(u0 * mittag_leffler(alpha, a * t.powf(alpha))?)))
}

/// `D^α u = a u (1 - u/N)`; closed form attached for `α = 1` only.
pub fn logistic_model(a: f64, capacity: f64, u0: f64, alpha: f64) -> Result<ProblemSpec> {
    check_alpha(alpha)?;
    check_capacity(capacity)?;
    check_finite(&[("a", a), ("u0", u0)])?;
    let problem = ProblemSpec::new(
        "logistic",
        alpha,
        u0,
        move |u, _| a * u * (1.0 - u / capacity),
        move |u, _| a * (1.0 - 2.0 * u / capacity),
    )?;
    Ok(if alpha == 1.0 {
        problem.with_analytic(move |t| Ok(logistic_solution(a, capacity, u0, t)))
    } else {
        problem
    })
}

/// Classical logistic solution `N u0 e^{at} / (N + u0 (e^{at} - 1))`.
pub fn logistic_solution(a: f64, capacity: f64, u0: f64, t: f64) -> f64 {
    let growth = (a * t).exp();
    capacity * u0 * growth / (capacity + u0 * (growth - 1.0))
}

/// `D^α u = a u (1 - u/N) - b (1 + sin 2πt)`; no closed form.
pub fn harvested_logistic_model(a: f64, capacity: f64, b: f64, u0: f64, alpha: f64) -> Result<ProblemSpec> {
    check_alpha(alpha)?;
    check_capacity(capacity)?;
    check_finite(&[("a", a), ("b", b), ("u0", u0)])?;
    if b < 0.0 {
        return Err(Error::Domain(format!(
            "harvesting amplitude must be nonnegative, got {b}"
        )));
    }
    ProblemSpec::new(
        "harvest",
        alpha,
        u0,
        move |u, t| a * u * (1.0 - u / capacity) - b * (1.0 + (2.0 * PI * t).sin()),
        move |u, _| a * (1.0 - 2.0 * u / capacity),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn names_round_trip() {
        for kind in ModelKind::ALL {
            assert_eq!(kind.name().parse::<ModelKind>().unwrap(), kind);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
        }
        assert!(matches!("gompertz".parse::<ModelKind>(), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn reference_parameters() {
        let e = GrowthParams::reference(ModelKind::Exponential);
        assert_eq!((e.a, e.u0), (1.0, 1.0));
        let l = GrowthParams::reference(ModelKind::Logistic);
        assert_eq!((l.a, l.capacity, l.u0), (10.0, 1.0, 0.01));
        let h = GrowthParams::reference(ModelKind::HarvestedLogistic);
        assert_eq!((h.a, h.capacity, h.b, h.u0), (5.0, 1.0, 0.8, 0.4));
    }

    #[test]
    fn exponential_alpha_one_is_exp() {
        let p = exponential_model(1.0, 1.0, 1.0).unwrap();
        let sol = p.analytic.clone().unwrap();
        for t in [0.0, 0.25, 0.5, 1.0] {
            assert!((sol(t).unwrap() - t.exp()).abs() < 1e-12 * t.exp());
        }
        assert_eq!(p.f(2.0, 0.3), 2.0);
    }

    #[test]
    fn exponential_zero_rate_is_constant() {
        let p = exponential_model(0.0, 3.0, 0.6).unwrap();
        let sol = p.analytic.clone().unwrap();
        assert_eq!(sol(0.8).unwrap(), 3.0);
        assert_eq!(p.f(1.7, 0.4), 0.0);
    }

    #[test]
    fn logistic_equilibrium_and_closed_form() {
        let p = logistic_model(10.0, 1.0, 1.0, 0.8).unwrap();
        assert_eq!(p.f(1.0, 0.5), 0.0);
        assert!(p.analytic.is_none());
        let q = logistic_model(10.0, 1.0, 0.01, 1.0).unwrap();
        let u1 = q.analytic.as_ref().unwrap()(1.0).unwrap();
        // e^10 / (99 + e^10)
        assert!((u1 - 0.995_525_517_929_514_6).abs() < 1e-14);
        assert!(logistic_model(10.0, 0.0, 0.01, 1.0).is_err());
        assert!(logistic_model(10.0, -1.0, 0.01, 1.0).is_err());
    }

    #[test]
    fn logistic_closed_form_satisfies_ode() {
        let (a, n, u0) = (10.0, 1.0, 0.01);
        for t in [0.1, 0.4, 0.9, 1.5] {
            let h = 1e-5;
            let du = (logistic_solution(a, n, u0, t + h) - logistic_solution(a, n, u0, t - h)) / (2.0 * h);
            let u = logistic_solution(a, n, u0, t);
            assert!((du - a * u * (1.0 - u / n)).abs() < 1e-6);
        }
    }

    #[test]
    fn harvest_degenerates_to_logistic() {
        let h = harvested_logistic_model(5.0, 1.0, 0.0, 0.4, 0.9).unwrap();
        let l = logistic_model(5.0, 1.0, 0.4, 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (u, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(0.0..2.0));
            assert_eq!(h.f(u, t), l.f(u, t));
        }
        assert!(h.analytic.is_none());
        assert!(harvested_logistic_model(5.0, 0.0, 0.8, 0.4, 0.9).is_err());
        assert!(harvested_logistic_model(5.0, 1.0, -0.1, 0.4, 0.9).is_err());
    }

    #[test]
    fn harvest_term_vanishes_at_three_quarters() {
        let h = harvested_logistic_model(5.0, 1.0, 0.8, 0.4, 1.0).unwrap();
        let l = logistic_model(5.0, 1.0, 0.4, 1.0).unwrap();
        assert!((h.f(0.3, 0.75) - l.f(0.3, 0.75)).abs() < 1e-15);
        assert!((h.f(0.3, 0.25) - (l.f(0.3, 0.25) - 1.6)).abs() < 1e-15);
    }

    #[test]
    fn rhs_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in ModelKind::ALL {
            let p = GrowthParams::reference(kind).problem(kind, 0.8).unwrap();
            for _ in 0..100 {
                let (u, t) = (rng.gen_range(-1.0..2.0), rng.gen_range(0.0..2.0));
                let eps = 1e-5;
                let fd = (p.f(u + eps, t) - p.f(u - eps, t)) / (2.0 * eps);
                assert!((fd - p.df_du(u, t)).abs() < 1e-7, "{kind} at ({u}, {t})");
            }
        }
    }
}
