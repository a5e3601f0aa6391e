//! Function specs: named builtins, polynomials such as `z + 0.25z^2`, and
//! explicit coefficient lists.

use std::path::Path;

use serde::{Deserialize, Serialize};
use univalence::{AnalyticFunction, Builtin, Complex64, PowerSeries};

pub const DEFAULT_TRUNCATION: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Builtin {
        name: String,
    },
    Polynomial {
        poly: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation_order: Option<usize>,
    },
    Coefficients {
        coeffs: Vec<Complex64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation_order: Option<usize>,
    },
}

impl FunctionSpec {
    pub fn builtin(b: Builtin) -> Self {
        FunctionSpec::Builtin { name: b.name().to_string() }
    }

    /// `z + a z^2`.
    pub fn quadratic(a: Complex64) -> Self {
        FunctionSpec::Coefficients {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), a],
            truncation_order: None,
        }
    }

    /// Reads a command-line spec: a builtin name, a JSON coefficient list,
    /// a path to a JSON spec file, or a polynomial in `z`.
    pub fn parse_arg(arg: &str) -> Result<Self, String> {
        let arg = arg.trim();
        if Builtin::from_name(arg).is_some() {
            return Ok(FunctionSpec::Builtin { name: arg.to_string() });
        }
        if arg.starts_with('[') {
            let coeffs: Vec<Complex64> =
                serde_json::from_str(arg).map_err(|e| format!("bad coefficient list {arg:?}: {e}"))?;
            return Ok(FunctionSpec::Coefficients { coeffs, truncation_order: None });
        }
        if Path::new(arg).is_file() {
            let text = std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
            return serde_json::from_str(&text).map_err(|e| format!("bad function spec in {arg}: {e}"));
        }
        parse_polynomial(arg)?;
        Ok(FunctionSpec::Polynomial { poly: arg.to_string(), truncation_order: None })
    }

    /// The function, checked to be normalized.
    pub fn resolve(&self) -> Result<AnalyticFunction, String> {
        let (coeffs, order) = match self {
            FunctionSpec::Builtin { name } => {
                return Builtin::from_name(name).map(AnalyticFunction::from).ok_or_else(|| {
                    let known: Vec<_> = Builtin::ALL.iter().map(|b| b.name()).collect();
                    format!("unknown builtin {name:?}; known: {}", known.join(", "))
                });
            }
            FunctionSpec::Polynomial { poly, truncation_order } => (parse_polynomial(poly)?, *truncation_order),
            FunctionSpec::Coefficients { coeffs, truncation_order } => (coeffs.clone(), *truncation_order),
        };
        let degree = coeffs.len().saturating_sub(1);
        let order = order.unwrap_or(DEFAULT_TRUNCATION.max(degree));
        if order < degree {
            return Err(format!("truncation order {order} is below the degree {degree}"));
        }
        let f = AnalyticFunction::from(PowerSeries::padded(&coeffs, order));
        f.check_normalized().map_err(|e| format!("{e}; inputs must satisfy f(0) = 0, f'(0) = 1"))?;
        Ok(f)
    }
}

/// Parses `re`, `im i`, or `re+im i` (also with `-`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("cannot parse complex number {s:?}; expected e.g. 1.5, 0.3i or 1.5-0.3i");
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| err())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| err())?, im))
}

/// Coefficients of a polynomial such as `z - (0.1+0.2i)z^3 + 0.5*z^2`.
pub fn parse_polynomial(s: &str) -> Result<Vec<Complex64>, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = t.as_bytes();
    for (k, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && k > start && !matches!(bytes[k - 1], b'e' | b'E' | b'^' | b'*') => {
                terms.push(&t[start..k]);
                start = k;
            }
            _ => {}
        }
    }
    terms.push(&t[start..]);

    let mut coeffs: Vec<Complex64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1.0, &term[1..]),
            Some(b'+') => (1.0, &term[1..]),
            _ => (1.0, term),
        };
        let bad = || format!("cannot parse term {term:?} of polynomial {s:?}");
        let (coef, power) = match body.find('z') {
            None => (body, 0usize),
            Some(pos) => {
                let power = match &body[pos + 1..] {
                    "" => 1,
                    rest => rest.strip_prefix('^').and_then(|p| p.parse().ok()).ok_or_else(bad)?,
                };
                (body[..pos].strip_suffix('*').unwrap_or(&body[..pos]), power)
            }
        };
        let coef = match coef {
            "" if power > 0 => Complex64::new(1.0, 0.0),
            c => {
                let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                parse_complex(c).map_err(|_| bad())?
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Complex64::new(0.0, 0.0));
        }
        coeffs[power] += sign * coef;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(parse_complex("-2").unwrap(), c(-2.0, 0.0));
        assert_eq!(parse_complex("0.3i").unwrap(), c(0.0, 0.3));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1.5+0.3i").unwrap(), c(1.5, 0.3));
        assert_eq!(parse_complex("1e-3-2e-2i").unwrap(), c(1e-3, -2e-2));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_polynomial("z+z^2").unwrap(), vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(
            parse_polynomial("z - (0.1+0.2i)z^3 + 0.5*z^2").unwrap(),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(-0.1, -0.2)]
        );
        assert!(parse_polynomial("z+q").is_err());
    }

    #[test]
    fn resolution_checks_normalization() {
        assert!(FunctionSpec::parse_arg("koebe").unwrap().resolve().is_ok());
        assert!(FunctionSpec::parse_arg("1+z").unwrap().resolve().is_err());
        assert!(FunctionSpec::parse_arg("2z").unwrap().resolve().is_err());
        let f = FunctionSpec::parse_arg("[[0,0],[1,0],[0.1,0]]").unwrap().resolve().unwrap();
        assert_eq!(f.as_series().unwrap().order(), DEFAULT_TRUNCATION);
        let low = FunctionSpec::Coefficients { coeffs: vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.0)], truncation_order: Some(1) };
        assert!(low.resolve().is_err());
    }

    #[test]
    fn spec_json_shape() {
        let s = FunctionSpec::quadratic(c(0.1, 0.0));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"coefficients","coeffs":[[0.0,0.0],[1.0,0.0],[0.1,0.0]]}"#);
        assert_eq!(serde_json::from_str::<FunctionSpec>(&json).unwrap(), s);
    }
}
