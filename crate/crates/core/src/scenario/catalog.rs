use crate::error::{Error, Result};
use crate::regvar::RegFunc;

/// Splits `name(arg)` into the name and an optional numeric argument.
pub fn parse_call(id: &str) -> Result<(&str, Option<f64>)> {
    let id = id.trim();
    match id.find('(') {
        None => Ok((id, None)),
        Some(i) => {
            let rest = id[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parameter(format!("unbalanced parentheses in '{id}'")))?;
            let v: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("bad numeric argument in '{id}'")))?;
            Ok((&id[..i], Some(v)))
        }
    }
}

/// Named functions regularly varying at zero, with their known index.
///
/// | id | `f(t)` | index |
/// |---|---|---|
/// | `power(p)` | `t^p` | `p` |
/// | `linear` | `t` | 1 |
/// | `entropic` | `-t ln t` | 1 |
/// | `holder_entropic` | `-sqrt(t) ln t` | 1/2 |
/// | `sqrt_log2` | `sqrt(t) (ln t)^2` | 1/2 |
/// | `logarithmic(g)` | `(-1/ln t)^g` | 0 |
/// | `exp_rapid` | `exp(-1/t)` | +inf |
pub fn catalog_function(id: &str) -> Result<RegFunc> {
    let (name, arg) = parse_call(id)?;
    let need = |what: &str| {
        arg.ok_or_else(|| Error::Parameter(format!("'{name}' needs an argument ({what})")))
    };
    let f = match name {
        "power" => {
            let p = need("exponent")?;
            if !(p > 0.0) {
                return Err(Error::Parameter(format!("power exponent {p} must be positive")));
            }
            RegFunc::at_zero(move |t: f64| t.powf(p), 1.0).with_index(p)
        }
        "linear" => RegFunc::at_zero(|t: f64| t, 1.0).with_index(1.0),
        "entropic" => RegFunc::at_zero(|t: f64| -t * t.ln(), (-1.0f64).exp()).with_index(1.0),
        "holder_entropic" => {
            RegFunc::at_zero(|t: f64| -t.sqrt() * t.ln(), (-2.0f64).exp()).with_index(0.5)
        }
        "sqrt_log2" => {
            RegFunc::at_zero(|t: f64| t.sqrt() * t.ln().powi(2), (-4.0f64).exp()).with_index(0.5)
        }
        "logarithmic" => {
            let g = need("exponent")?;
            if !(g > 0.0) {
                return Err(Error::Parameter(format!("logarithmic exponent {g} must be positive")));
            }
            RegFunc::at_zero(move |t: f64| (-1.0 / t.ln()).powf(g), 0.5).with_index(0.0)
        }
        "exp_rapid" => {
            RegFunc::at_zero(|t: f64| (-1.0 / t).exp(), 1.0).with_index(f64::INFINITY)
        }
        _ => return Err(Error::Parameter(format!("unknown catalog function '{id}'"))),
    };
    Ok(f)
}

/// Log-log linear interpolation of sampled `(t, f(t))` pairs, treated as
/// a function at zero on the sampled range.
pub fn table_function(mut points: Vec<(f64, f64)>) -> Result<RegFunc> {
    if points.iter().any(|&(t, v)| !(t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite())) {
        return Err(Error::Parameter("table entries must be positive and finite".into()));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.dedup_by(|a, b| a.0 == b.0);
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            usable: points.len(),
            needed: 2,
        });
    }
    let (lo, hi) = (points[0].0, points[points.len() - 1].0);
    let logs: Vec<(f64, f64)> = points.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let f = move |t: f64| {
        if !(t >= lo && t <= hi) {
            return f64::NAN;
        }
        let x = t.ln();
        let i = logs.partition_point(|p| p.0 < x).clamp(1, logs.len() - 1);
        let (a, b) = (logs[i - 1], logs[i]);
        (a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)).exp()
    };
    // just below lo so the smallest sample itself is usable
    Ok(RegFunc::at_zero(f, hi).with_domain(lo * (1.0 - 1e-12), hi))
}
