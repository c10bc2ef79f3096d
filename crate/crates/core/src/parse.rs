//! Text formats accepted from users: target descriptors such as
//! `power:0.5`, window descriptors and amplitude sample files.

use std::io::Read;
use std::path::PathBuf;
use std::str::FromStr;

use crate::amplitudes::{TargetKind, TargetSpec};
use crate::error::{Error, Result};
use crate::window::QpeWindow;

/// A target as written on the command line, before the qubit count and
/// any sample file are known.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetDescriptor {
    Power(f64),
    Log,
    BSpline(u32),
    Kaiser(f64),
    Custom(PathBuf),
}

fn number<T: FromStr>(what: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad {what} \"{s}\"")))
}

impl FromStr for TargetDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("log", None) => Ok(TargetDescriptor::Log),
            ("power", Some(a)) => Ok(TargetDescriptor::Power(number("exponent", a)?)),
            ("bspline", Some(a)) => Ok(TargetDescriptor::BSpline(number("B-spline order", a)?)),
            ("kaiser", Some(a)) => Ok(TargetDescriptor::Kaiser(number("Kaiser beta", a)?)),
            ("custom", Some(a)) if !a.is_empty() => Ok(TargetDescriptor::Custom(PathBuf::from(a))),
            _ => Err(Error::Parse(format!(
                "unknown target \"{s}\" (expected power:<alpha>, log, bspline:<m>, kaiser:<beta> or custom:<file>)"
            ))),
        }
    }
}

impl TargetDescriptor {
    /// Resolves the descriptor for `n` qubits, reading sample files from disk.
    pub fn resolve(&self, n: u32) -> Result<TargetSpec> {
        let kind = match self {
            TargetDescriptor::Power(alpha) => TargetKind::Power { alpha: *alpha },
            TargetDescriptor::Log => TargetKind::Log,
            TargetDescriptor::BSpline(m) => TargetKind::BSpline { m: *m },
            TargetDescriptor::Kaiser(beta) => TargetKind::Kaiser { beta: *beta },
            TargetDescriptor::Custom(path) => {
                let file = std::fs::File::open(path)?;
                TargetKind::Custom { samples: parse_samples_csv(file)? }
            }
        };
        TargetSpec::new(kind, n)
    }
}

/// Reads amplitude samples: one value per row, or `x,value` rows with `x`
/// counting up from zero. A non-numeric first row is taken as a header.
pub fn parse_samples_csv<R: Read>(input: R) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let fields: Vec<&str> = record.iter().collect();
        let value = match fields.as_slice() {
            [v] => v.parse::<f64>(),
            [x, v] => {
                if let (Ok(x), Ok(_)) = (x.parse::<usize>(), v.parse::<f64>()) {
                    if x != out.len() {
                        return Err(Error::Parse(format!("row {}: index {x}, expected {}", row + 1, out.len())));
                    }
                }
                v.parse::<f64>()
            }
            _ => return Err(Error::Parse(format!("row {}: expected 1 or 2 fields, got {}", row + 1, fields.len()))),
        };
        match value {
            Ok(v) if v.is_finite() => out.push(v),
            Ok(v) => return Err(Error::Parse(format!("row {}: non-finite sample {v}", row + 1))),
            Err(_) if row == 0 => continue,
            Err(_) => return Err(Error::Parse(format!("row {}: not a number", row + 1))),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("no samples".into()));
    }
    Ok(out)
}

/// `rect`, `kaiser:<beta>` or `bspline:<m>`.
pub fn parse_window(s: &str) -> Result<QpeWindow> {
    match s.split_once(':') {
        None if s == "rect" => Ok(QpeWindow::Rect),
        Some(("kaiser", b)) => Ok(QpeWindow::Kaiser { beta: number("Kaiser beta", b)? }),
        Some(("bspline", m)) => Ok(QpeWindow::BSpline { m: number("B-spline order", m)? }),
        _ => Err(Error::Parse(format!("unknown window \"{s}\" (expected rect, kaiser:<beta> or bspline:<m>)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_descriptors() {
        assert_eq!("power:0.5".parse::<TargetDescriptor>().unwrap(), TargetDescriptor::Power(0.5));
        assert_eq!("log".parse::<TargetDescriptor>().unwrap(), TargetDescriptor::Log);
        assert_eq!("bspline:4".parse::<TargetDescriptor>().unwrap(), TargetDescriptor::BSpline(4));
        assert_eq!(
            "custom:a/b.csv".parse::<TargetDescriptor>().unwrap(),
            TargetDescriptor::Custom(PathBuf::from("a/b.csv"))
        );
        for bad in ["", "power", "power:x", "log:1", "bspline:-1", "custom:", "sine:2"] {
            assert!(bad.parse::<TargetDescriptor>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolve_validates() {
        let spec = TargetDescriptor::Power(0.5).resolve(4).unwrap();
        assert_eq!(spec.dim(), 16);
        assert!(TargetDescriptor::Power(-1.0).resolve(4).is_err());
        assert!(matches!(
            TargetDescriptor::Custom(PathBuf::from("/nonexistent/samples.csv")).resolve(2),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn sample_files() {
        assert_eq!(parse_samples_csv("1\n2\n3\n".as_bytes()).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_samples_csv("x,value\n0,1.5\n1,-2\n".as_bytes()).unwrap(), vec![1.5, -2.0]);
        assert_eq!(parse_samples_csv("# note\n0.5\n".as_bytes()).unwrap(), vec![0.5]);
        assert!(parse_samples_csv("0,1\n2,3\n".as_bytes()).is_err());
        assert!(parse_samples_csv("1\nabc\n".as_bytes()).is_err());
        assert!(parse_samples_csv("1\nNaN\n".as_bytes()).is_err());
        assert!(parse_samples_csv("".as_bytes()).is_err());
        assert!(parse_samples_csv("1,2,3\n".as_bytes()).is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("rect").unwrap(), QpeWindow::Rect);
        assert_eq!(parse_window("bspline:8").unwrap(), QpeWindow::BSpline { m: 8 });
        assert_eq!(parse_window("kaiser:2.5").unwrap(), QpeWindow::Kaiser { beta: 2.5 });
        assert!(parse_window("hann").is_err());
    }
}
