//! Number formatting, metadata headers and sweep-grid parsing.

use std::fmt::Write as _;

use sideband::units::{metadata_lines, RateConvention};

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+", env!("SIDEBAND_GIT_REV"));

/// Formats with 12 significant digits, `.` decimal point, no locale.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Run parameters echoed into every emitted file.
#[derive(Debug, Clone)]
pub struct Metadata {
    pub command: String,
    pub condition: String,
    pub convention: RateConvention,
    pub dt_ns: f64,
    pub n_max: usize,
    pub exactify: bool,
}

impl Metadata {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("version: {VERSION}"),
            format!("command: {}", self.command),
            format!("condition: {}", self.condition),
        ];
        out.extend(metadata_lines(self.convention));
        out.push(format!("rate_convention: {}", self.convention.key()));
        out.push(format!("dt_ns: {}", fmt_sig(self.dt_ns)));
        out.push(format!("n_max: {}", self.n_max));
        out.push(format!("exactify: {}", self.exactify));
        out
    }

    /// `#`-prefixed header block for CSV files.
    pub fn csv_header(&self) -> String {
        let mut s = String::new();
        for l in self.lines() {
            let _ = writeln!(s, "# {l}");
        }
        s
    }
}

/// Parses `min:max:logN`, `min:max:linN`, `a,b,c` or a single value.
///
/// `logN` places N points per decade and requires `max = min·10^(k/N)`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
    let values = if let [lo, hi, mode] = spec.split(':').collect::<Vec<_>>()[..] {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(format!("grid `{spec}` needs finite min <= max"));
        }
        let count = |rest: &str| -> Result<usize, String> {
            rest.parse::<usize>().ok().filter(|n| *n > 0).ok_or_else(|| format!("bad point count in `{mode}`"))
        };
        if let Some(rest) = mode.strip_prefix("log") {
            let per_decade = count(rest)?;
            if lo <= 0.0 {
                return Err("log grid needs min > 0".into());
            }
            let steps = (hi / lo).log10() * per_decade as f64;
            let k = steps.round();
            if (steps - k).abs() > 1e-9 {
                return Err(format!("log grid: max/min is not a whole number of 1/{per_decade} decades"));
            }
            let k = k as usize;
            (0..=k)
                .map(|i| if i == k { hi } else { lo * 10f64.powf(i as f64 / per_decade as f64) })
                .collect()
        } else if let Some(rest) = mode.strip_prefix("lin") {
            let n = count(rest)?;
            if n == 1 {
                if lo != hi {
                    return Err("lin1 needs min = max".into());
                }
                vec![lo]
            } else {
                (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
            }
        } else {
            return Err(format!("unknown grid mode `{mode}` (expected logN or linN)"));
        }
    } else if spec.contains(':') {
        return Err(format!("grid `{spec}` must be min:max:logN or min:max:linN"));
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err("grid values must be finite and non-negative".into());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-1234.5), "-1234.5");
        assert_eq!(fmt_sig(2.5e-9), "2.50000000000e-9");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn log_grid() {
        let g = parse_grid("0.1:100:log4").unwrap();
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[12], 100.0);
        assert!((g[4] - 1.0).abs() < 1e-12);
        assert!(parse_grid("0.1:50:log4").is_err());
        assert!(parse_grid("0:10:log2").is_err());
    }

    #[test]
    fn lin_and_list() {
        assert_eq!(parse_grid("0:1:lin3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("1,10, 100").unwrap(), vec![1.0, 10.0, 100.0]);
        assert_eq!(parse_grid("5").unwrap(), vec![5.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("-1").is_err());
    }
}
