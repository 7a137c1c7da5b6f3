//! Power-law fitting, local-exponent profiles, Mpemba crossing detection,
//! and finite-size plateau estimates over witness time series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A labeled time series with strictly increasing positive times.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::Analysis(format!(
                "series needs equal-length times/values with >= 2 points, got {}/{}",
                times.len(),
                values.len()
            )));
        }
        if times[0] <= 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Analysis(
                "times must be strictly increasing and positive".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            times,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Result of a least-squares line in (ln t, ln v).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
    /// nonpositive (or floor-level) values excluded from the fit window
    pub n_excluded: usize,
}

/// Values at or below `10 eps max|v|` are floor noise and excluded.
fn floor_threshold(values: &[f64]) -> f64 {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    10.0 * f64::EPSILON * max
}

/// Fit v ~ amplitude * t^exponent over the window [t_min, t_max].
pub fn fit_power_law(s: &Series, t_min: f64, t_max: f64) -> Result<PowerLawFit> {
    if t_min >= t_max {
        return Err(Error::Analysis(format!(
            "empty fit window [{t_min}, {t_max}]"
        )));
    }
    let floor = floor_threshold(&s.values);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = 0usize;
    for (t, v) in s.times.iter().zip(&s.values) {
        if *t < t_min || *t > t_max {
            continue;
        }
        if *v <= floor {
            excluded += 1;
            continue;
        }
        xs.push(t.ln());
        ys.push(v.ln());
    }
    if xs.len() < 5 {
        return Err(Error::Analysis(format!(
            "only {} positive points in window [{t_min}, {t_max}] ({excluded} excluded)",
            xs.len()
        )));
    }
    let (slope, intercept, r2) = linear_fit(&xs, &ys);
    Ok(PowerLawFit {
        exponent: slope,
        amplitude: intercept.exp(),
        r_squared: r2,
        t_min,
        t_max,
        n_points: xs.len(),
        n_excluded: excluded,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return (0.0, my, 1.0);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = syy - slope * sxy;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    (slope, intercept, r2)
}

/// Sliding-window log-log slope centered on each admissible sample; locates
/// crossovers between exponent plateaus.
pub fn local_exponent(s: &Series, window_points: usize) -> Result<Series> {
    if window_points < 3 {
        return Err(Error::Analysis("window must span >= 3 points".into()));
    }
    if s.len() < window_points {
        return Err(Error::Analysis(format!(
            "series has {} points, window needs {window_points}",
            s.len()
        )));
    }
    let floor = floor_threshold(&s.values);
    let half = window_points / 2;
    let mut times = Vec::new();
    let mut slopes = Vec::new();
    for c in half..(s.len() - (window_points - 1 - half)) {
        let lo = c - half;
        let hi = lo + window_points;
        let mut xs = Vec::with_capacity(window_points);
        let mut ys = Vec::with_capacity(window_points);
        for i in lo..hi {
            if s.values[i] > floor {
                xs.push(s.times[i].ln());
                ys.push(s.values[i].ln());
            }
        }
        if xs.len() < 3 {
            continue;
        }
        let (slope, _, _) = linear_fit(&xs, &ys);
        times.push(s.times[c]);
        slopes.push(slope);
    }
    Series::new(format!("{}::local_exponent", s.label), times, slopes)
}

/// A detected order swap between two witness curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub first: String,
    pub second: String,
    pub t_cross: f64,
    pub persistence: usize,
    pub window: (f64, f64),
}

/// Interpolate a series at time `t` linearly in (ln t, ln v) when possible,
/// falling back to linear interpolation for nonpositive values.
fn interpolate(s: &Series, t: f64) -> f64 {
    match s.times.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(i) => s.values[i],
        Err(i) => {
            let i = i.clamp(1, s.len() - 1);
            let (t0, t1) = (s.times[i - 1], s.times[i]);
            let (v0, v1) = (s.values[i - 1], s.values[i]);
            if v0 > 0.0 && v1 > 0.0 {
                let f = (t.ln() - t0.ln()) / (t1.ln() - t0.ln());
                (v0.ln() + f * (v1.ln() - v0.ln())).exp()
            } else {
                let f = (t - t0) / (t1 - t0);
                v0 + f * (v1 - v0)
            }
        }
    }
}

/// Times where sign(s1 - s2) changes and the new sign persists for at least
/// `persistence` samples. The crossing time interpolates both curves as local
/// power laws between the bracketing samples.
pub fn detect_crossings(
    s1: &Series,
    s2: &Series,
    t_start: f64,
    persistence: usize,
) -> Result<Vec<Crossing>> {
    if persistence < 1 {
        return Err(Error::Analysis("persistence must be >= 1".into()));
    }
    let lo = s1.times[0].max(s2.times[0]).max(t_start);
    let hi = s1.times[s1.len() - 1].min(s2.times[s2.len() - 1]);
    if lo >= hi {
        return Err(Error::Analysis(
            "series time grids do not overlap".into(),
        ));
    }
    // common grid: union of both grids inside the overlap
    let mut grid: Vec<f64> = s1
        .times
        .iter()
        .chain(s2.times.iter())
        .copied()
        .filter(|t| *t >= lo && *t <= hi)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let diffs: Vec<f64> = grid
        .iter()
        .map(|&t| interpolate(s1, t) - interpolate(s2, t))
        .collect();

    let sign = |x: f64| -> i8 {
        if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        }
    };

    let mut crossings = Vec::new();
    let mut prev_sign: i8 = 0;
    let mut prev_idx = 0usize;
    for (i, &d) in diffs.iter().enumerate() {
        let s = sign(d);
        if s == 0 {
            continue;
        }
        if prev_sign != 0 && s != prev_sign {
            // require the new sign to persist
            let mut ok = 0usize;
            for &d2 in &diffs[i..] {
                let s2 = sign(d2);
                if s2 == s {
                    ok += 1;
                    if ok >= persistence {
                        break;
                    }
                } else if s2 != 0 {
                    break;
                }
            }
            if ok >= persistence {
                let t_cross = cross_time(s1, s2, grid[prev_idx], grid[i]);
                crossings.push(Crossing {
                    first: s1.label.clone(),
                    second: s2.label.clone(),
                    t_cross,
                    persistence,
                    window: (grid[prev_idx], grid[i]),
                });
            }
        }
        prev_sign = s;
        prev_idx = i;
    }
    Ok(crossings)
}

/// Solve for the crossing of the two local power laws through the bracketing
/// samples; falls back to linear interpolation of the difference if either
/// value is nonpositive.
fn cross_time(s1: &Series, s2: &Series, t0: f64, t1: f64) -> f64 {
    let (a0, a1) = (interpolate(s1, t0), interpolate(s1, t1));
    let (b0, b1) = (interpolate(s2, t0), interpolate(s2, t1));
    if a0 > 0.0 && a1 > 0.0 && b0 > 0.0 && b1 > 0.0 && t0 > 0.0 {
        let dt = t1.ln() - t0.ln();
        let slope_a = (a1.ln() - a0.ln()) / dt;
        let slope_b = (b1.ln() - b0.ln()) / dt;
        if slope_a != slope_b {
            let x = (b0.ln() - a0.ln()) / (slope_a - slope_b) + t0.ln();
            let t = x.exp();
            if t.is_finite() {
                return t.clamp(t0, t1);
            }
        }
    }
    let d0 = a0 - b0;
    let d1 = a1 - b1;
    if d0 == d1 {
        return 0.5 * (t0 + t1);
    }
    (t0 + (t1 - t0) * d0 / (d0 - d1)).clamp(t0, t1)
}

/// Mean and standard deviation of the last `tail_fraction` of the samples;
/// quantifies the finite-size floor of a witness.
pub fn plateau_estimate(s: &Series, tail_fraction: f64) -> Result<(f64, f64)> {
    if !(0.0..=0.5).contains(&tail_fraction) || tail_fraction == 0.0 {
        return Err(Error::Analysis(format!(
            "tail_fraction must be in (0, 0.5], got {tail_fraction}"
        )));
    }
    let n_tail = ((s.len() as f64) * tail_fraction).round() as usize;
    if n_tail < 5 {
        return Err(Error::Analysis(format!(
            "tail holds only {n_tail} points, need >= 5"
        )));
    }
    let tail = &s.values[s.len() - n_tail..];
    let mean = tail.iter().sum::<f64>() / n_tail as f64;
    let var = tail.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n_tail as f64;
    Ok((mean, var.sqrt()))
}
