//! Numeric text formats shared by the CSV writers and input parsers.

use std::str::FromStr;

/// Shortest text that parses back to the same `f64`. Exponent notation is
/// used outside `[1e-5, 1e16)` so tiny tail probabilities stay short.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Evenly spaced grid written `start:stop:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("grid '{s}' is not start:stop:steps"));
        };
        let start: f64 = a
            .parse()
            .map_err(|_| format!("grid start '{a}' is not a number"))?;
        let stop: f64 = b
            .parse()
            .map_err(|_| format!("grid stop '{b}' is not a number"))?;
        let steps: usize = c
            .parse()
            .map_err(|_| format!("grid steps '{c}' is not a positive integer"))?;
        if !(start.is_finite() && stop.is_finite()) || start < 0.0 {
            return Err(format!(
                "grid '{s}' must have finite, nonnegative end points"
            ));
        }
        if stop < start {
            return Err(format!("grid '{s}' runs backwards"));
        }
        if steps == 0 {
            return Err(format!("grid '{s}' has no points"));
        }
        if steps == 1 && stop != start {
            return Err(format!("grid '{s}' has one point but distinct end points"));
        }
        Ok(Grid { start, stop, steps })
    }
}

/// Comma-separated list of positive rates.
pub fn parse_rates(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Err("rate grid is empty".to_string());
    }
    s.split(',')
        .map(|f| {
            let f = f.trim();
            match f.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
                Ok(v) => Err(format!("rate {v} must be positive and finite")),
                Err(_) => Err(format!("rate '{f}' is not a number")),
            }
        })
        .collect()
}

/// Reads a single-column profile. Errors name the 1-based line.
pub fn parse_profile(text: &str, header: bool) -> Result<Vec<f64>, String> {
    let mut cells = Vec::new();
    for (i, line) in text.trim_end().lines().enumerate() {
        let line_no = i + 1;
        if header && i == 0 {
            continue;
        }
        let field = line.trim();
        if field.is_empty() {
            return Err(format!("line {line_no}: empty line"));
        }
        if field.contains(',') {
            return Err(format!(
                "line {line_no}: expected one column, found '{field}'"
            ));
        }
        let v: f64 = field
            .parse()
            .map_err(|_| format!("line {line_no}: '{field}' is not a number"))?;
        if !v.is_finite() {
            return Err(format!("line {line_no}: {field} is not finite"));
        }
        if v < 0.0 {
            return Err(format!(
                "line {line_no}: {field} is negative; cell powers must be nonnegative"
            ));
        }
        cells.push(v);
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.0,
            1.0,
            0.1,
            1.0 / 3.0,
            72.0,
            1e-300,
            123456.789,
            3e20,
            -2.5e-7,
            5e-324,
        ] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1e-300), "1e-300");
    }

    #[test]
    fn grids() {
        let g: Grid = "0:1:5".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!("36:36:1".parse::<Grid>().unwrap().points(), vec![36.0]);
        assert_eq!(
            "0.1:0.7:3".parse::<Grid>().unwrap().points().last(),
            Some(&0.7)
        );
        for bad in [
            "", "1:2", "a:2:3", "2:1:3", "0:1:0", "0:1:1", "-1:1:3", "0:inf:3", "0:1:2:3",
        ] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn rates() {
        assert_eq!(
            parse_rates("0.5, 1,2,10").unwrap(),
            vec![0.5, 1.0, 2.0, 10.0]
        );
        assert!(parse_rates("").is_err());
        assert!(parse_rates(" ").is_err());
        assert!(parse_rates("1,,2").is_err());
        assert!(parse_rates("1,-2").is_err());
    }

    #[test]
    fn profiles() {
        assert_eq!(
            parse_profile("1\n2.5\n0\n", false).unwrap(),
            vec![1.0, 2.5, 0.0]
        );
        assert_eq!(
            parse_profile("power\r\n1\r\n2\r\n\n", true).unwrap(),
            vec![1.0, 2.0]
        );
        assert!(parse_profile("1\n\n2", false)
            .unwrap_err()
            .starts_with("line 2:"));
        assert!(parse_profile("1\n2\nx", false)
            .unwrap_err()
            .starts_with("line 3:"));
        assert!(parse_profile("1\n-2", false)
            .unwrap_err()
            .contains("line 2: -2 is negative"));
        assert!(parse_profile("1,2", false)
            .unwrap_err()
            .contains("one column"));
        assert!(parse_profile("NaN", false).is_err());
        assert!(parse_profile("power", false).is_err());
    }
}
