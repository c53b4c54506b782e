//! Undecorated base functions, each with minimum 0.
//!
//! Definitions follow the CEC2013 real-parameter suite. The oscillation and
//! asymmetry transforms of that suite are not applied here; decoration
//! (shift, scaling, rotation) lives in [`super::suite`].

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

const WEIERSTRASS_A: f64 = 0.5;
const WEIERSTRASS_B: f64 = 3.0;
const WEIERSTRASS_KMAX: i32 = 20;
const KATSUURA_TERMS: i32 = 32;
const SCHWEFEL_OFFSET: f64 = 4.209_687_462_275_036e2;
const SCHWEFEL_CONST: f64 = 4.189_828_872_724_338e2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Sphere,
    Elliptic,
    BentCigar,
    Discus,
    DifferentPowers,
    Rosenbrock,
    SchaffersF7,
    Ackley,
    Weierstrass,
    Griewank,
    Rastrigin,
    NoncontinuousRastrigin,
    Schwefel,
    Katsuura,
    LunacekBiRastrigin,
    ExpandedGriewankRosenbrock,
    ExpandedSchaffersF6,
}

impl Base {
    pub const ALL: [Base; 17] = [
        Base::Sphere,
        Base::Elliptic,
        Base::BentCigar,
        Base::Discus,
        Base::DifferentPowers,
        Base::Rosenbrock,
        Base::SchaffersF7,
        Base::Ackley,
        Base::Weierstrass,
        Base::Griewank,
        Base::Rastrigin,
        Base::NoncontinuousRastrigin,
        Base::Schwefel,
        Base::Katsuura,
        Base::LunacekBiRastrigin,
        Base::ExpandedGriewankRosenbrock,
        Base::ExpandedSchaffersF6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Base::Sphere => "sphere",
            Base::Elliptic => "elliptic",
            Base::BentCigar => "bent_cigar",
            Base::Discus => "discus",
            Base::DifferentPowers => "different_powers",
            Base::Rosenbrock => "rosenbrock",
            Base::SchaffersF7 => "schaffers_f7",
            Base::Ackley => "ackley",
            Base::Weierstrass => "weierstrass",
            Base::Griewank => "griewank",
            Base::Rastrigin => "rastrigin",
            Base::NoncontinuousRastrigin => "noncontinuous_rastrigin",
            Base::Schwefel => "schwefel",
            Base::Katsuura => "katsuura",
            Base::LunacekBiRastrigin => "lunacek_bi_rastrigin",
            Base::ExpandedGriewankRosenbrock => "expanded_griewank_rosenbrock",
            Base::ExpandedSchaffersF6 => "expanded_schaffers_f6",
        }
    }

    /// Coordinate (repeated in every dimension) where the base attains 0.
    ///
    /// Schwefel carries its own internal offset and is treated as origin-optimal,
    /// though its value there is only zero to rounding.
    pub fn minimizer_coordinate(self) -> f64 {
        match self {
            Base::Rosenbrock | Base::ExpandedGriewankRosenbrock => 1.0,
            _ => 0.0,
        }
    }

    /// True when the value at the minimizer is exactly 0 in floating point.
    pub fn exact_at_minimizer(self) -> bool {
        !matches!(self, Base::Schwefel)
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Base::Sphere => sphere(x),
            Base::Elliptic => elliptic(x),
            Base::BentCigar => bent_cigar(x),
            Base::Discus => discus(x),
            Base::DifferentPowers => different_powers(x),
            Base::Rosenbrock => rosenbrock(x),
            Base::SchaffersF7 => schaffers_f7(x),
            Base::Ackley => ackley(x),
            Base::Weierstrass => weierstrass(x),
            Base::Griewank => griewank(x),
            Base::Rastrigin => rastrigin(x),
            Base::NoncontinuousRastrigin => noncontinuous_rastrigin(x),
            Base::Schwefel => schwefel(x),
            Base::Katsuura => katsuura(x),
            Base::LunacekBiRastrigin => lunacek_bi_rastrigin(x),
            Base::ExpandedGriewankRosenbrock => expanded_griewank_rosenbrock(x),
            Base::ExpandedSchaffersF6 => expanded_schaffers_f6(x),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Base::ALL
            .iter()
            .copied()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBase(s.to_string()))
    }
}

/// Evaluate a base function by name.
pub fn eval_base(name: &str, x: &[f64]) -> Result<f64, Error> {
    Ok(name.parse::<Base>()?.eval(x))
}

/// Exponent ramp `i / (D - 1)`, zero in one dimension.
fn ramp(i: usize, d: usize) -> f64 {
    if d > 1 {
        i as f64 / (d - 1) as f64
    } else {
        0.0
    }
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn elliptic(x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, v)| 1e6f64.powf(ramp(i, d)) * v * v)
        .sum()
}

fn bent_cigar(x: &[f64]) -> f64 {
    x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>()
}

fn discus(x: &[f64]) -> f64 {
    1e6 * x[0] * x[0] + x[1..].iter().map(|v| v * v).sum::<f64>()
}

fn different_powers(x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, v)| v.abs().powf(2.0 + 4.0 * ramp(i, d)))
        .sum::<f64>()
        .sqrt()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let a = w[0] * w[0] - w[1];
            let b = w[0] - 1.0;
            100.0 * a * a + b * b
        })
        .sum()
}

fn schaffers_f7(x: &[f64]) -> f64 {
    if x.len() < 2 {
        let y = x[0].abs();
        let s = y.sqrt();
        let t = s + s * (50.0 * y.powf(0.2)).sin().powi(2);
        return t * t;
    }
    let total: f64 = x
        .windows(2)
        .map(|w| {
            let y = (w[0] * w[0] + w[1] * w[1]).sqrt();
            let s = y.sqrt();
            s + s * (50.0 * y.powf(0.2)).sin().powi(2)
        })
        .sum();
    let m = total / (x.len() - 1) as f64;
    m * m
}

fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

fn weierstrass(x: &[f64]) -> f64 {
    let term = |v: f64| -> f64 {
        (0..=WEIERSTRASS_KMAX)
            .map(|k| {
                WEIERSTRASS_A.powi(k) * (2.0 * PI * WEIERSTRASS_B.powi(k) * (v + 0.5)).cos()
            })
            .sum()
    };
    let floor = term(0.0);
    x.iter().map(|&v| term(v) - floor).sum()
}

fn griewank(x: &[f64]) -> f64 {
    let s = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    s - p + 1.0
}

fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

fn noncontinuous_rastrigin(x: &[f64]) -> f64 {
    let y: Vec<f64> = x
        .iter()
        .map(|&v| {
            if v.abs() > 0.5 {
                (2.0 * v + 0.5).floor() / 2.0
            } else {
                v
            }
        })
        .collect();
    rastrigin(&y)
}

fn schwefel(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mut f = 0.0;
    for &v in x {
        let z = v + SCHWEFEL_OFFSET;
        if z > 500.0 {
            let m = 500.0 - z % 500.0;
            f -= m * m.sqrt().sin();
            let t = (z - 500.0) / 100.0;
            f += t * t / d;
        } else if z < -500.0 {
            let r = z.abs() % 500.0;
            f -= (-500.0 + r) * (500.0 - r).sqrt().sin();
            let t = (z + 500.0) / 100.0;
            f += t * t / d;
        } else {
            f -= z * z.abs().sqrt().sin();
        }
    }
    f + SCHWEFEL_CONST * d
}

fn katsuura(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let exponent = 10.0 / d.powf(1.2);
    let mut f = 1.0;
    for (i, &v) in x.iter().enumerate() {
        let mut t = 0.0;
        for j in 1..=KATSUURA_TERMS {
            let p = 2f64.powi(j);
            let s = p * v;
            t += (s - (s + 0.5).floor()).abs() / p;
        }
        f *= (1.0 + (i + 1) as f64 * t).powf(exponent);
    }
    let c = 10.0 / (d * d);
    c * f - c
}

/// Origin-optimal form: the first funnel is centred on 0, the second on `mu1 - mu0`.
fn lunacek_bi_rastrigin(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mu0 = 2.5;
    let s = 1.0 - 1.0 / (2.0 * (d + 20.0).sqrt() - 8.2);
    let mu1 = -((mu0 * mu0 - 1.0) / s).sqrt();
    let t1: f64 = x.iter().map(|v| v * v).sum();
    let t2: f64 = x.iter().map(|v| (v + mu0 - mu1).powi(2)).sum();
    let cs: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    t1.min(d + s * t2) + 10.0 * (d - cs)
}

fn expanded_griewank_rosenbrock(x: &[f64]) -> f64 {
    let d = x.len();
    (0..d)
        .map(|i| {
            let (a, b) = (x[i], x[(i + 1) % d]);
            let t = 100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2);
            t * t / 4000.0 - t.cos() + 1.0
        })
        .sum()
}

fn expanded_schaffers_f6(x: &[f64]) -> f64 {
    let d = x.len();
    (0..d)
        .map(|i| {
            let (a, b) = (x[i], x[(i + 1) % d]);
            let r2 = a * a + b * b;
            0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
        })
        .sum()
}
