//! Text form of a 4x4 density matrix: sixteen comma-separated `a+bi` fields
//! in row-major order. Line breaks count as separators.

use crate::error::CliError;
use num_complex::Complex64;
use rie::linalg::Matrix4;
use rie::scan::format_float;
use rie::twoqubit::DensityMatrix4;

pub fn parse_complex(field: &str) -> Option<Complex64> {
    let s: String = field.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().ok()?,
    };
    Some(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "" } else { "+" };
    format!("{}{}{}i", format_float(z.re), sign, format_float(z.im))
}

pub fn parse_state(text: &str) -> Result<DensityMatrix4, CliError> {
    let fields: Vec<&str> = text
        .split([',', '\n'])
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .collect();
    if fields.len() != 16 {
        return Err(CliError::config("state", format!("expected 16 entries, found {}", fields.len())));
    }
    let mut m: Matrix4 = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (k, f) in fields.iter().enumerate() {
        m[k / 4][k % 4] = parse_complex(f)
            .filter(|z| z.re.is_finite() && z.im.is_finite())
            .ok_or_else(|| CliError::config("state", format!("entry {} `{f}` is not a complex number", k + 1)))?;
    }
    DensityMatrix4::new(m).map_err(|e| CliError::config("state", e.to_string()))
}

pub fn format_state(rho: &DensityMatrix4) -> String {
    rho.entries()
        .iter()
        .map(|row| row.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}
