//! λ-grid parsing.
//!
//! * `--grid "-1,-2; -3+0.5i,-2"`: points separated by `;`, coordinates by `,`.
//!   A coordinate is a real or complex number (`a`, `a+bi`, `bi`).
//! * `--line "ORIGIN:DIRECTION:T0:T1:STEP"`: `ORIGIN + t·DIRECTION` for
//!   `t = T0, T0+STEP, …, ≤ T1`, with `ORIGIN` and `DIRECTION` in grid syntax.

use std::str::FromStr;

use num_complex::Complex64;

pub type Point = Vec<Complex64>;

fn parse_number(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.replace('−', "-");
    if t.is_empty() {
        return Err("empty coordinate".into());
    }
    let z = Complex64::from_str(&t).map_err(|_| format!("cannot parse coordinate {s:?}"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("coordinate {s:?} is not finite"));
    }
    Ok(z)
}

fn parse_real(s: &str, what: &str) -> Result<f64, String> {
    let v: f64 = s.trim().replace('−', "-").parse().map_err(|_| format!("cannot parse {what} {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} {s:?} is not finite"))
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    s.split(',').map(parse_number).collect()
}

pub fn parse_grid(s: &str) -> Result<Vec<Point>, String> {
    let pts: Vec<Point> = s.split(';').filter(|p| !p.trim().is_empty()).map(parse_point).collect::<Result<_, _>>()?;
    if pts.is_empty() {
        return Err("grid is empty".into());
    }
    let n = pts[0].len();
    if pts.iter().any(|p| p.len() != n) {
        return Err("grid points have different numbers of coordinates".into());
    }
    Ok(pts)
}

pub fn parse_line(s: &str) -> Result<Vec<Point>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [origin, dir, t0, t1, step] = parts[..] else {
        return Err("line must be ORIGIN:DIRECTION:T0:T1:STEP".into());
    };
    let origin = parse_point(origin)?;
    let dir = parse_point(dir)?;
    if origin.len() != dir.len() {
        return Err("origin and direction have different dimensions".into());
    }
    let (t0, t1, step) = (parse_real(t0, "T0")?, parse_real(t1, "T1")?, parse_real(step, "STEP")?);
    if step <= 0.0 {
        return Err("STEP must be positive".into());
    }
    if t1 < t0 {
        return Err("T1 must not be smaller than T0".into());
    }
    // Tolerate rounding in (T1 − T0)/STEP so that the end point is included.
    let count = ((t1 - t0) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(format!("line has {count} points"));
    }
    Ok((0..count)
        .map(|k| {
            let t = t0 + step * k as f64;
            origin.iter().zip(&dir).map(|(o, d)| o + d * t).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("-1, -2; -3+0.5i,-2").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1][0], Complex64::new(-3.0, 0.5));
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1,2;3").is_err());
        assert!(parse_grid("1,x").is_err());
    }

    #[test]
    fn lines() {
        let l = parse_line("0:1:0:2:0.5").unwrap();
        let t: Vec<f64> = l.iter().map(|p| p[0].re).collect();
        assert_eq!(t, [0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(parse_line("0:1:0:0.3:0.1").unwrap().len(), 4);
        assert!(parse_line("0:1:0:1:0").is_err());
        assert!(parse_line("0:1:1:0:0.1").is_err());
        assert!(parse_line("0,0:1:0:1:0.1").is_err());
    }
}
