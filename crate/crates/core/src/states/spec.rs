use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest orbital number supported for rotor states.
pub const MAX_ROTOR_L: u32 = 3;

const NORM_TOL: f64 = 1e-12;

/// One of the catalog states.
///
/// Text form: `azimuthal:m=1`, `phase:N=2`, `qtp:N=0,I=1,omega=1`,
/// `rotor:l=1,c=[0.6,0,0.8i]`, `gaussian:x0=0,sigma=1,k=1`, `box2d:a=1,b=2`.
/// Rotor coefficients are listed for `m = −l, …, l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    /// `(2π)^{-1/2} e^{imφ}` on the circle.
    Azimuthal { m: i64 },
    /// `(2π)^{-1/2} e^{-iNφ}` on the circle.
    Phase { n: u32 },
    /// Torsion pendulum eigenstate on the unrolled angle.
    Qtp { n: u32, inertia: f64, omega: f64 },
    /// `Σ c_m Y_lm` on the sphere.
    Rotor { l: u32, c: Vec<Complex64> },
    /// Gaussian packet centred at `x0` with position spread `sigma`.
    Gaussian { x0: f64, sigma: f64, k: f64 },
    /// Ground state of the rectangular well `0 < x₁ < a`, `0 < y₁ < b`.
    Box2d { a: f64, b: f64 },
    /// Precomputed samples on whatever grid they are paired with.
    Raw { values: Vec<Complex64> },
}

impl StateSpec {
    /// Checks the parameter ranges of the state.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            StateSpec::Azimuthal { .. } | StateSpec::Phase { .. } => Ok(()),
            StateSpec::Qtp { inertia, omega, .. } => {
                positive("I", *inertia)?;
                positive("omega", *omega)
            }
            StateSpec::Rotor { l, c } => {
                if *l > MAX_ROTOR_L {
                    return Err(Error::Unsupported(format!("rotor l = {l} exceeds {MAX_ROTOR_L}")));
                }
                if c.len() != 2 * *l as usize + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "rotor l = {l} needs {} coefficients, got {}",
                        2 * l + 1,
                        c.len()
                    )));
                }
                if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidParameter("non-finite rotor coefficient".into()));
                }
                let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(Error::NotNormalized(norm));
                }
                Ok(())
            }
            StateSpec::Gaussian { x0, sigma, k } => {
                if !x0.is_finite() || !k.is_finite() {
                    return Err(Error::InvalidParameter("gaussian x0 and k must be finite".into()));
                }
                positive("sigma", *sigma)
            }
            StateSpec::Box2d { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                if a < b {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("box2d needs a < b, got a = {a}, b = {b}")))
                }
            }
            StateSpec::Raw { values } => {
                if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("non-finite raw sample".into()))
                }
            }
        }
    }

    /// Short kind name used in the text form.
    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Azimuthal { .. } => "azimuthal",
            StateSpec::Phase { .. } => "phase",
            StateSpec::Qtp { .. } => "qtp",
            StateSpec::Rotor { .. } => "rotor",
            StateSpec::Gaussian { .. } => "gaussian",
            StateSpec::Box2d { .. } => "box2d",
            StateSpec::Raw { .. } => "raw",
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub(crate) fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad complex number '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // The split point is the last sign that is not leading and not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let parse_im = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, parse_im(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, parse_im(body)?)),
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Azimuthal { m } => write!(f, "azimuthal:m={m}"),
            StateSpec::Phase { n } => write!(f, "phase:N={n}"),
            StateSpec::Qtp { n, inertia, omega } => write!(f, "qtp:N={n},I={inertia},omega={omega}"),
            StateSpec::Rotor { l, c } => {
                let list: Vec<String> = c.iter().map(|&z| fmt_complex(z)).collect();
                write!(f, "rotor:l={l},c=[{}]", list.join(","))
            }
            StateSpec::Gaussian { x0, sigma, k } => write!(f, "gaussian:x0={x0},sigma={sigma},k={k}"),
            StateSpec::Box2d { a, b } => write!(f, "box2d:a={a},b={b}"),
            StateSpec::Raw { values } => write!(f, "raw:len={}", values.len()),
        }
    }
}

/// Splits `k=v,k=[..,..],…` at top-level commas.
fn split_params(s: &str) -> Result<Vec<(String, String)>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in '{s}'")));
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in '{s}'")));
    }
    parts.push(&s[start..]);
    parts
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{p}'")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

struct Params {
    kind: String,
    items: Vec<(String, String)>,
}

impl Params {
    fn take(&mut self, key: &str) -> Result<String> {
        let pos = self
            .items
            .iter()
            .position(|(k, _)| k == key)
            .ok_or_else(|| Error::Parse(format!("{}: missing parameter '{key}'", self.kind)))?;
        Ok(self.items.remove(pos).1)
    }

    fn num<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.take(key)?;
        v.parse::<T>()
            .map_err(|_| Error::Parse(format!("{}: bad value '{v}' for '{key}'", self.kind)))
    }

    fn finish(self) -> Result<()> {
        match self.items.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::Parse(format!("{}: unknown parameter '{k}'", self.kind))),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<StateSpec> {
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut p = Params { kind: kind.to_string(), items: split_params(rest)? };
        let spec = match kind {
            "azimuthal" => StateSpec::Azimuthal { m: p.num("m")? },
            "phase" => StateSpec::Phase { n: p.num("N")? },
            "qtp" => StateSpec::Qtp { n: p.num("N")?, inertia: p.num("I")?, omega: p.num("omega")? },
            "rotor" => {
                let l = p.num("l")?;
                let list = p.take("c")?;
                let inner = list
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("rotor: c must be a [..] list, got '{list}'")))?;
                let c = inner.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
                StateSpec::Rotor { l, c }
            }
            "gaussian" => StateSpec::Gaussian { x0: p.num("x0")?, sigma: p.num("sigma")?, k: p.num("k")? },
            "box2d" => StateSpec::Box2d { a: p.num("a")?, b: p.num("b")? },
            "raw" => return Err(Error::Parse("raw states have no text form".into())),
            other => return Err(Error::Parse(format!("unknown state kind '{other}'"))),
        };
        p.finish()?;
        spec.validate()?;
        Ok(spec)
    }
}
