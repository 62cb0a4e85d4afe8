//! Test functions with known Lipschitz class membership.
//!
//! Textual specs (used by the CLI and config files):
//!
//! | spec                         | function                                        |
//! |------------------------------|-------------------------------------------------|
//! | `sine(k)`                    | `sin(kx)`                                       |
//! | `trig_poly(c; a1,a2; b1,b2)` | `c + Σ a_k cos kx + Σ b_k sin kx`               |
//! | `constant(c)`                | shorthand for `trig_poly(c;;)`                  |
//! | `triangle`                   | `(2/π)|x − π| − 1`                              |
//! | `square`                     | `+1` on `[0, π)`, `−1` on `[π, 2π)`             |
//! | `weierstrass(α, J)`          | `Σ_{j=0}^{J} 2^{−jα} cos(2^j x)`                |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::periodic::{ClaimedClass, Grid, SampledPeriodicFunction};

#[derive(Debug, Clone, PartialEq)]
pub enum ZooSpec {
    Sine(usize),
    TrigPoly {
        constant: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    Triangle,
    Square,
    Weierstrass {
        alpha: f64,
        levels: u32,
    },
}

impl ZooSpec {
    pub fn constant(c: f64) -> Self {
        ZooSpec::TrigPoly {
            constant: c,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// Highest harmonic present in the function, `None` for non-polynomials.
    pub fn degree(&self) -> Option<usize> {
        match self {
            ZooSpec::Sine(k) => Some(*k),
            ZooSpec::TrigPoly { cos, sin, .. } => Some(cos.len().max(sin.len())),
            ZooSpec::Weierstrass { levels, .. } => Some(1usize << levels),
            ZooSpec::Triangle | ZooSpec::Square => None,
        }
    }

    pub fn claimed_class(&self) -> ClaimedClass {
        match self {
            ZooSpec::Square => ClaimedClass {
                alpha: 1.0,
                p: Some(1.0),
            },
            ZooSpec::Weierstrass { alpha, .. } => ClaimedClass {
                alpha: *alpha,
                p: None,
            },
            _ => ClaimedClass {
                alpha: 1.0,
                p: None,
            },
        }
    }

    fn validate(&self, grid: Grid) -> Result<()> {
        let max = grid.max_harmonic();
        match self {
            ZooSpec::Weierstrass { alpha, levels } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::OutOfRange(format!(
                        "weierstrass exponent {alpha} must lie in (0, 1)"
                    )));
                }
                if *levels >= 62 || 2 * (1usize << levels) >= grid.size() {
                    return Err(Error::Aliasing(format!(
                        "weierstrass level {levels} needs 2^J < N/2 (N = {})",
                        grid.size()
                    )));
                }
            }
            ZooSpec::Sine(k) if *k > max => {
                return Err(Error::Aliasing(format!(
                    "sine({k}) is not representable on N = {}",
                    grid.size()
                )));
            }
            ZooSpec::TrigPoly { constant, cos, sin } => {
                let d = cos.len().max(sin.len());
                if d > max {
                    return Err(Error::Aliasing(format!(
                        "trig_poly of degree {d} is not representable on N = {}",
                        grid.size()
                    )));
                }
                if !constant.is_finite() || cos.iter().chain(sin).any(|c| !c.is_finite()) {
                    return Err(Error::OutOfRange("non-finite trig_poly coefficient".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Samples the function on `grid`, tagging it with its claimed class.
    pub fn sample(&self, grid: Grid) -> Result<SampledPeriodicFunction> {
        self.validate(grid)?;
        let n = grid.size();
        let table = grid.trig_table();
        let values: Vec<f64> = match self {
            ZooSpec::Sine(k) => (0..n).map(|j| table.at(*k, j).1).collect(),
            ZooSpec::TrigPoly { constant, cos, sin } => (0..n)
                .map(|j| {
                    let mut v = *constant;
                    for (i, a) in cos.iter().enumerate() {
                        v += a * table.at(i + 1, j).0;
                    }
                    for (i, b) in sin.iter().enumerate() {
                        v += b * table.at(i + 1, j).1;
                    }
                    v
                })
                .collect(),
            // x_j − π = π(2j − N)/N, evaluated on integers
            ZooSpec::Triangle => (0..n)
                .map(|j| 2.0 * (2 * j).abs_diff(n) as f64 / n as f64 - 1.0)
                .collect(),
            // x_j < π  ⇔  2j < N; the node at π takes the value −1
            ZooSpec::Square => (0..n).map(|j| if 2 * j < n { 1.0 } else { -1.0 }).collect(),
            ZooSpec::Weierstrass { alpha, levels } => (0..n)
                .map(|j| {
                    (0..=*levels)
                        .map(|l| 2f64.powf(-(l as f64) * alpha) * table.at(1usize << l, j).0)
                        .sum()
                })
                .collect(),
        };
        Ok(
            SampledPeriodicFunction::new(grid, values, self.to_string())?
                .with_claimed_class(self.claimed_class()),
        )
    }
}

/// Convenience wrapper over [`ZooSpec::sample`].
pub fn zoo_function(spec: &ZooSpec, grid: Grid) -> Result<SampledPeriodicFunction> {
    spec.sample(grid)
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for ZooSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZooSpec::Sine(k) => write!(f, "sine({k})"),
            ZooSpec::TrigPoly { constant, cos, sin } => {
                write!(f, "trig_poly({constant}; {}; {})", join(cos), join(sin))
            }
            ZooSpec::Triangle => write!(f, "triangle"),
            ZooSpec::Square => write!(f, "square"),
            ZooSpec::Weierstrass { alpha, levels } => write!(f, "weierstrass({alpha},{levels})"),
        }
    }
}

/// Splits `name(args)` into `("name", Some("args"))`, or `("name", None)`.
pub(crate) fn split_call(s: &str) -> Result<(&str, Option<&str>)> {
    let s = s.trim();
    match s.find('(') {
        None => Ok((s, None)),
        Some(open) => {
            if !s.ends_with(')') {
                return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
            }
            Ok((s[..open].trim(), Some(&s[open + 1..s.len() - 1])))
        }
    }
}

pub(crate) fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid number '{}'", s.trim())))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split([',', ' '])
        .filter(|t| !t.trim().is_empty())
        .map(parse_f64)
        .collect()
}

impl FromStr for ZooSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = split_call(s)?;
        let args_of = |what: &str| {
            args.ok_or_else(|| Error::Parse(format!("{what} needs arguments, e.g. {what}(...)")))
        };
        match name {
            "sine" => {
                let k = args_of("sine")?
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid harmonic in '{s}'")))?;
                Ok(ZooSpec::Sine(k))
            }
            "constant" => Ok(ZooSpec::constant(parse_f64(args_of("constant")?)?)),
            "trig_poly" => {
                let parts: Vec<&str> = args_of("trig_poly")?.split(';').collect();
                if parts.is_empty() || parts.len() > 3 {
                    return Err(Error::Parse(format!(
                        "trig_poly expects 'c; cos list; sin list', got '{s}'"
                    )));
                }
                let constant = if parts[0].trim().is_empty() {
                    0.0
                } else {
                    parse_f64(parts[0])?
                };
                let cos = parts
                    .get(1)
                    .map(|p| parse_list(p))
                    .transpose()?
                    .unwrap_or_default();
                let sin = parts
                    .get(2)
                    .map(|p| parse_list(p))
                    .transpose()?
                    .unwrap_or_default();
                Ok(ZooSpec::TrigPoly { constant, cos, sin })
            }
            "triangle" if args.is_none() => Ok(ZooSpec::Triangle),
            "square" if args.is_none() => Ok(ZooSpec::Square),
            "weierstrass" => {
                let parts: Vec<&str> = args_of("weierstrass")?.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!(
                        "weierstrass expects (alpha, J), got '{s}'"
                    )));
                }
                let alpha = parse_f64(parts[0])?;
                let levels = parts[1]
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid level in '{s}'")))?;
                Ok(ZooSpec::Weierstrass { alpha, levels })
            }
            _ => Err(Error::Parse(format!("unknown zoo function '{s}'"))),
        }
    }
}
