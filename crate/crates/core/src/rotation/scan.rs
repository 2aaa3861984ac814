use super::winding::{winding_bounds, Level, RotationEstimate};
use super::WindingOptions;
use crate::exact::Rational;
use crate::lyness::{Params, StartPoint};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// One scheduled initial point and its certified rotation data.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    /// Schedule position.
    pub index: usize,
    pub x0: String,
    pub y0: String,
    pub h_decimal: Option<String>,
    #[serde(skip)]
    pub h_key: Option<Rational>,
    pub estimate: Option<RotationEstimate>,
    pub n_points: usize,
    /// `ok`, `exact` or an error message.
    pub status: String,
}

impl ScanRow {
    pub fn low(&self) -> Option<Rational> {
        self.estimate.map(|e| e.bounds().0.to_rational())
    }

    pub fn upp(&self) -> Option<Rational> {
        self.estimate.map(|e| e.bounds().1.to_rational())
    }
}

fn coord_string(c: &crate::lyness::Coord) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => c.decimal(12),
    }
}

/// Runs `winding_bounds` on every scheduled point in parallel. Rows come
/// back sorted by level (ties by schedule order); failures are recorded in
/// the row status and do not stop the scan.
pub fn scan_profile(p: &Params, schedule: &[StartPoint], n: usize, opts: &WindingOptions) -> Vec<ScanRow> {
    let mut rows: Vec<ScanRow> = schedule
        .par_iter()
        .enumerate()
        .map(|(index, z0)| {
            let level = Level::of(p, z0).ok();
            let mut row = ScanRow {
                index,
                x0: coord_string(&z0.x),
                y0: coord_string(&z0.y),
                h_decimal: level.as_ref().map(|l| l.decimal(12)),
                h_key: level.as_ref().map(|l| l.sort_key()),
                estimate: None,
                n_points: n,
                status: String::new(),
            };
            match winding_bounds(p, z0, n, opts) {
                Ok(r) => {
                    row.status = match r.estimate {
                        RotationEstimate::Enclosure(_) => "ok".into(),
                        RotationEstimate::Exact(_) => "exact".into(),
                    };
                    row.estimate = Some(r.estimate);
                }
                Err(e) => row.status = format!("error: {e}"),
            }
            row
        })
        .collect();
    rows.sort_by(|a, b| match (&a.h_key, &b.h_key) {
        (Some(x), Some(y)) => x.cmp(y).then(a.index.cmp(&b.index)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.index.cmp(&b.index),
    });
    rows
}

/// Columns `x0,h_decimal,rho_low_num,rho_low_den,rho_upp_num,rho_upp_den,n_points,status`.
pub fn rows_to_csv(rows: &[ScanRow]) -> String {
    let mut s = String::from("x0,h_decimal,rho_low_num,rho_low_den,rho_upp_num,rho_upp_den,n_points,status\n");
    for r in rows {
        let (l, u) = match r.estimate {
            Some(e) => {
                let (l, u) = e.bounds();
                (format!("{},{}", l.num, l.den), format!("{},{}", u.num, u.den))
            }
            None => (",".into(), ",".into()),
        };
        let status = r.status.replace(',', ";");
        let _ = writeln!(s, "{},{},{},{},{},{}", r.x0, r.h_decimal.as_deref().unwrap_or(""), l, u, r.n_points, status);
    }
    s
}

/// JSON mirror of the CSV with exact fractions as strings.
pub fn rows_to_json(rows: &[ScanRow]) -> serde_json::Value {
    let v: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let (l, u) = match r.estimate {
                Some(e) => {
                    let (l, u) = e.bounds();
                    (Some(l.to_string()), Some(u.to_string()))
                }
                None => (None, None),
            };
            serde_json::json!({
                "x0": r.x0,
                "y0": r.y0,
                "h_decimal": r.h_decimal,
                "rho_low": l,
                "rho_upp": u,
                "n_points": r.n_points,
                "status": r.status,
            })
        })
        .collect();
    serde_json::Value::Array(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::rotation::Backend;

    #[test]
    fn empty_schedule() {
        let p = Params::two(rat(1, 2), rat(3, 2)).unwrap();
        assert!(scan_profile(&p, &[], 100, &WindingOptions::default()).is_empty());
    }

    #[test]
    fn theorem_three_local_maximum() {
        let p = Params::two(rat(1, 2), rat(3, 2)).unwrap();
        let y = rat(173, 100);
        let sched: Vec<StartPoint> =
            [rat(149, 100), rat(3, 40), rat(1, 1000)].into_iter().map(|x| StartPoint::rational(x, y.clone())).collect();
        let opts = WindingOptions { backend: Backend::Exact, ..WindingOptions::default() };
        let rows = scan_profile(&p, &sched, 100, &opts);
        assert_eq!(rows.iter().map(|r| r.index).collect::<Vec<_>>(), vec![0, 1, 2]);
        let mid = rows[1].low().unwrap();
        assert!(mid > rows[0].upp().unwrap() && mid > rows[2].upp().unwrap());
        assert!(rows_to_csv(&rows).lines().count() == 4);
    }
}
