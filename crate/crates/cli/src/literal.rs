//! Complex literals of the form `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse complex literal {0:?}; expected a+bi")]
pub struct LiteralError(pub String);

fn real(s: &str, whole: &str) -> Result<f64, LiteralError> {
    let v: f64 = s.parse().map_err(|_| LiteralError(whole.to_string()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(LiteralError(whole.to_string()))
    }
}

fn imaginary(s: &str, whole: &str) -> Result<f64, LiteralError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s, whole),
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64, LiteralError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(LiteralError(text.to_string()));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(real(&s, text)?, 0.0));
    };
    // Split at the last sign that is not a leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k], text)?, imaginary(&body[k..], text)?)),
        None => Ok(Complex64::new(0.0, imaginary(body, text)?)),
    }
}

/// `"a,b"` as a pair of complex literals.
pub fn parse_pair(text: &str) -> Result<(Complex64, Complex64), LiteralError> {
    let (a, b) = text.split_once(',').ok_or_else(|| LiteralError(text.to_string()))?;
    Ok((parse_complex(a)?, parse_complex(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn forms() {
        assert_eq!(parse_complex("2+0i").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("0+1i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1.5-2.25i").unwrap(), c(1.5, -2.25));
        assert_eq!(parse_complex("-3").unwrap(), c(-3.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), c(0.0, -2.5));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
    }

    #[test]
    fn rejects() {
        for bad in ["", "abc", "1+2", "1++2i", "nan", "inf+1i", "1+2ii"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("0,0").unwrap(), (c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(parse_pair("1+i,-2").unwrap(), (c(1.0, 1.0), c(-2.0, 0.0)));
        assert!(parse_pair("1").is_err());
    }
}
