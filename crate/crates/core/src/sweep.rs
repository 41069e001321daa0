//! Parameter sweeps over a cartesian grid, and the tables they produce.
//!
//! Rows are emitted in row-major order of the input columns (first column
//! outermost, system size innermost) whatever the degree of parallelism.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dicke::{dicke_phase_finite, dicke_phase_limit, DickeParams, GridSpec};
use crate::error::{Error, Result};
use crate::lmg::{lmg_phase, LmgParams};
use crate::phase::SystemSize;
use crate::probe::{probe_derivative, probe_phase, ProbeParams};
use crate::xy_chain::{ground_phase_finite, ground_phase_limit, phase_derivative_finite, phase_derivative_limit, XyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepModel {
    Xy,
    Dicke,
    Lmg,
    Probe,
}

impl SweepModel {
    pub const ALL: [SweepModel; 4] = [SweepModel::Xy, SweepModel::Dicke, SweepModel::Lmg, SweepModel::Probe];

    pub fn name(&self) -> &'static str {
        match self {
            SweepModel::Xy => "xy",
            SweepModel::Dicke => "dicke",
            SweepModel::Lmg => "lmg",
            SweepModel::Probe => "probe",
        }
    }

    /// Input columns; the last one is always the size `n`.
    pub fn inputs(&self) -> &'static [&'static str] {
        match self {
            SweepModel::Xy => &["gamma", "lambda", "n"],
            SweepModel::Dicke => &["D", "alpha", "n"],
            SweepModel::Lmg => &["gamma", "h", "n"],
            SweepModel::Probe => &["mu", "nu", "eta", "gamma", "lambda", "n"],
        }
    }

    pub fn outputs(&self) -> &'static [&'static str] {
        match self {
            SweepModel::Xy | SweepModel::Probe => &["beta_g", "dbeta_dlambda"],
            SweepModel::Dicke => &["beta_over_n"],
            SweepModel::Lmg => &["beta_g"],
        }
    }

    pub fn columns(&self) -> Vec<&'static str> {
        self.inputs().iter().chain(self.outputs()).copied().collect()
    }

    /// The control parameter plotted on the horizontal axis.
    pub fn x_column(&self) -> &'static str {
        match self {
            SweepModel::Xy | SweepModel::Probe => "lambda",
            SweepModel::Dicke => "alpha",
            SweepModel::Lmg => "h",
        }
    }

    pub fn from_header(header: &[String]) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.columns().iter().copied().eq(header.iter().map(String::as_str)))
    }

    /// Values of the output columns at one grid point, in column order.
    /// Points where the quantity is singular come back as `NaN`.
    fn evaluate(&self, p: &[f64], size: SystemSize, grid: &GridSpec) -> Result<Vec<f64>> {
        match self {
            SweepModel::Xy => xy_point(p[0], p[1], size),
            SweepModel::Probe => probe_point(p, size),
            SweepModel::Dicke => dicke_point(p[0], p[1], size, grid).map(|b| vec![b]),
            SweepModel::Lmg => match size {
                SystemSize::Finite(n) => nan_if_singular(lmg_phase(&LmgParams::new(p[0], p[1], n)?).map(|r| r.beta_g))
                    .map(|b| vec![b]),
                SystemSize::Thermodynamic => Err(Error::InvalidParameter("LMG sweeps need finite sizes".into())),
            },
        }
    }
}

impl std::str::FromStr for SweepModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown model {s:?} (expected xy, dicke, lmg or probe)"))
    }
}

fn nan_if_singular(r: Result<f64>) -> Result<f64> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Singular(_) | Error::GaplessMode { .. } | Error::Overflow) => Ok(f64::NAN),
        Err(e) => Err(e),
    }
}

fn xy_point(gamma: f64, lambda: f64, size: SystemSize) -> Result<Vec<f64>> {
    match size {
        SystemSize::Finite(n) => {
            let p = XyParams::new(gamma, lambda, n)?;
            Ok(vec![ground_phase_finite(&p).beta_g, nan_if_singular(phase_derivative_finite(&p))?])
        }
        SystemSize::Thermodynamic => Ok(vec![
            ground_phase_limit(gamma, lambda)?.beta_g,
            nan_if_singular(phase_derivative_limit(gamma, lambda))?,
        ]),
    }
}

fn probe_point(p: &[f64], size: SystemSize) -> Result<Vec<f64>> {
    let params = ProbeParams::new(p[0], p[1], p[2], p[3], p[4], size)?;
    Ok(vec![probe_phase(&params)?.beta_g, nan_if_singular(probe_derivative(&params))?])
}

fn dicke_point(d: f64, alpha: f64, size: SystemSize, grid: &GridSpec) -> Result<f64> {
    match size {
        SystemSize::Finite(n) => {
            let params = DickeParams::from_dimensionless(d, alpha, n)?;
            Ok(dicke_phase_finite(&params, grid)?.beta_g / n as f64)
        }
        SystemSize::Thermodynamic => {
            if !(d > 0.0 && alpha >= 0.0) {
                return Err(Error::InvalidParameter(format!("need D > 0, α ≥ 0 (got {d}, {alpha})")));
            }
            Ok(dicke_phase_limit(alpha))
        }
    }
}

/// `a:b:steps` as `steps` evenly spaced values including both ends.
pub fn parse_range(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("range {spec:?} must look like a:b:steps"));
    }
    let a: f64 = parts[0].parse().map_err(|e| format!("bad range start {:?}: {e}", parts[0]))?;
    let b: f64 = parts[1].parse().map_err(|e| format!("bad range end {:?}: {e}", parts[1]))?;
    let steps: usize = parts[2].parse().map_err(|e| format!("bad step count {:?}: {e}", parts[2]))?;
    if steps < 2 {
        return Err(format!("range {spec:?} needs at least 2 steps"));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(format!("range {spec:?} has non-finite ends"));
    }
    Ok((0..steps)
        .map(|i| if i == steps - 1 { b } else { a + (b - a) * i as f64 / (steps - 1) as f64 })
        .collect())
}

/// A comma-separated list of values, or an `a:b:steps` range.
pub fn parse_values(spec: &str) -> std::result::Result<Vec<f64>, String> {
    if spec.contains(':') {
        return parse_range(spec);
    }
    let values = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}")))
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(format!("{spec:?} contains non-finite values"));
    }
    Ok(values)
}

/// Comma-separated sizes; `inf` selects the thermodynamic limit.
pub fn parse_sizes(spec: &str) -> std::result::Result<Vec<SystemSize>, String> {
    spec.split(',').map(|s| s.parse::<SystemSize>()).collect()
}

/// Grid axes of a sweep. Only the axes of the selected model are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: SweepModel,
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub eta: Vec<f64>,
    pub d: Vec<f64>,
    pub alpha: Vec<f64>,
    pub h: Vec<f64>,
    pub sizes: Vec<SystemSize>,
    pub dicke_grid: GridSpec,
}

impl SweepSpec {
    /// Defaults for every axis of `model`.
    pub fn new(model: SweepModel) -> Self {
        let size = match model {
            SweepModel::Xy | SweepModel::Probe => 101,
            SweepModel::Dicke => 16,
            SweepModel::Lmg => 200,
        };
        Self {
            model,
            // LMG anisotropy must stay below 1
            gamma: vec![if model == SweepModel::Lmg { 0.0 } else { 1.0 }],
            lambda: parse_range("0:2:101").expect("valid default"),
            mu: vec![0.1],
            nu: vec![2.0],
            eta: vec![0.5],
            d: vec![10.0],
            alpha: parse_range("0:3:61").expect("valid default"),
            h: parse_range("0:2:101").expect("valid default"),
            sizes: vec![SystemSize::Finite(size)],
            dicke_grid: GridSpec::default(),
        }
    }

    /// Input axes in column order, sizes excluded.
    fn axes(&self) -> Vec<&[f64]> {
        match self.model {
            SweepModel::Xy => vec![&self.gamma, &self.lambda],
            SweepModel::Dicke => vec![&self.d, &self.alpha],
            SweepModel::Lmg => vec![&self.gamma, &self.h],
            SweepModel::Probe => vec![&self.mu, &self.nu, &self.eta, &self.gamma, &self.lambda],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (axis, name) in self.axes().iter().zip(self.model.inputs()) {
            if axis.is_empty() {
                return Err(Error::InvalidParameter(format!("axis {name} is empty")));
            }
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("axis {name} has non-finite values")));
            }
        }
        if self.sizes.is_empty() {
            return Err(Error::InvalidParameter("no system sizes given".into()));
        }
        for &s in &self.sizes {
            match (self.model, s) {
                (SweepModel::Xy | SweepModel::Probe, SystemSize::Finite(n)) if n < 3 || n % 2 == 0 => {
                    return Err(Error::InvalidParameter(format!("{} sizes must be odd and ≥ 3 (got {n})", self.model.name())));
                }
                (SweepModel::Lmg, SystemSize::Thermodynamic) => {
                    return Err(Error::InvalidParameter("LMG sweeps need finite sizes".into()));
                }
                (SweepModel::Lmg, SystemSize::Finite(n)) if n < 2 => {
                    return Err(Error::InvalidParameter(format!("LMG sizes must be ≥ 2 (got {n})")));
                }
                (SweepModel::Dicke, SystemSize::Finite(0)) => {
                    return Err(Error::InvalidParameter("Dicke sizes must be ≥ 1".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.len()).product::<usize>() * self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Input coordinates of row `index` in row-major order.
    fn point(&self, index: usize) -> (Vec<f64>, SystemSize) {
        let axes = self.axes();
        let size = self.sizes[index % self.sizes.len()];
        let mut rest = index / self.sizes.len();
        let mut coords = vec![0.0; axes.len()];
        for (slot, axis) in coords.iter_mut().zip(&axes).rev() {
            *slot = axis[rest % axis.len()];
            rest /= axis.len();
        }
        (coords, size)
    }
}

fn size_value(s: SystemSize) -> f64 {
    match s {
        SystemSize::Finite(n) => n as f64,
        SystemSize::Thermodynamic => f64::INFINITY,
    }
}

/// Evaluate every grid point on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let rows = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let (coords, size) = spec.point(i);
            let out = spec.model.evaluate(&coords, size, &spec.dicke_grid)?;
            let mut row = coords;
            row.push(size_value(size));
            row.extend(out);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { model: spec.model, rows })
}

/// Sweep output: one row per grid point, columns as in [`SweepModel::columns`].
/// The size column holds `∞` for the thermodynamic limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub model: SweepModel,
    pub rows: Vec<Vec<f64>>,
}

fn format_cell(column: &str, v: f64) -> String {
    if column == "n" {
        if v.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", v as u64)
        }
    } else {
        format!("{v:.16e}")
    }
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.model.columns().iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let columns = self.model.columns();
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&columns)?;
        for row in &self.rows {
            out.write_record(columns.iter().zip(row).map(|(c, &v)| format_cell(c, v)))?;
        }
        out.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn to_json(&self) -> Value {
        let columns = self.model.columns();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    columns
                        .iter()
                        .zip(row)
                        .map(|(c, &v)| match (*c, v.is_finite()) {
                            ("n", false) => json!("inf"),
                            ("n", true) => json!(v as u64),
                            (_, true) => json!(v),
                            (_, false) => Value::Null,
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "model": self.model.name(), "columns": columns, "rows": rows })
    }

    /// Read a table written by [`Table::write_csv`]; the header picks the model.
    pub fn read_csv<R: Read>(r: R) -> std::result::Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header: Vec<String> =
            reader.headers().map_err(|e| format!("cannot read CSV header: {e}"))?.iter().map(str::to_string).collect();
        let model = SweepModel::from_header(&header)
            .ok_or_else(|| format!("CSV header {:?} does not match any sweep schema", header.join(",")))?;
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| format!("CSV row {}: {e}", line + 2))?;
            let row = record
                .iter()
                .map(|cell| cell.trim().parse::<f64>().map_err(|e| format!("CSV row {}: bad value {cell:?}: {e}", line + 2)))
                .collect::<std::result::Result<Vec<f64>, String>>()?;
            rows.push(row);
        }
        Ok(Self { model, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0:2:101").unwrap()[100], 2.0);
        assert!(parse_range("0:1:1").is_err());
        assert!(parse_range("0:1").is_err());
        assert_eq!(parse_values("0.5, 1").unwrap(), vec![0.5, 1.0]);
        assert_eq!(parse_values("1:2:2").unwrap(), vec![1.0, 2.0]);
        assert!(parse_values("x").is_err());
        assert_eq!(parse_sizes("21,inf").unwrap(), vec![SystemSize::Finite(21), SystemSize::Thermodynamic]);
    }

    #[test]
    fn row_major_order() {
        let mut spec = SweepSpec::new(SweepModel::Xy);
        spec.gamma = vec![0.5, 1.0];
        spec.lambda = vec![0.1, 0.2, 0.3];
        spec.sizes = vec![SystemSize::Finite(11), SystemSize::Finite(21)];
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 12);
        assert_eq!(&t.rows[0][..3], &[0.5, 0.1, 11.0]);
        assert_eq!(&t.rows[1][..3], &[0.5, 0.1, 21.0]);
        assert_eq!(&t.rows[2][..3], &[0.5, 0.2, 11.0]);
        assert_eq!(&t.rows[6][..3], &[1.0, 0.1, 11.0]);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let mut spec = SweepSpec::new(SweepModel::Probe);
        spec.lambda = vec![0.3, 1.0 / 3.0];
        spec.sizes = vec![SystemSize::Finite(13), SystemSize::Thermodynamic];
        let t = run_sweep(&spec).unwrap();
        let text = t.to_csv_string();
        assert!(text.starts_with("mu,nu,eta,gamma,lambda,n,beta_g,dbeta_dlambda\n"));
        let back = Table::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn singular_cells_are_nan() {
        let mut spec = SweepSpec::new(SweepModel::Lmg);
        spec.gamma = vec![0.0];
        spec.h = vec![0.5, 1.0];
        let t = run_sweep(&spec).unwrap();
        assert!(t.rows[0][3].is_finite() && t.rows[1][3].is_nan());
        assert!(t.to_csv_string().contains("NaN"));
        assert!(t.to_json()["rows"][1][3].is_null());
    }

    #[test]
    fn invalid_specs() {
        let mut spec = SweepSpec::new(SweepModel::Xy);
        spec.sizes = vec![SystemSize::Finite(20)];
        assert!(run_sweep(&spec).is_err());
        let mut spec = SweepSpec::new(SweepModel::Lmg);
        spec.sizes = vec![SystemSize::Thermodynamic];
        assert!(spec.validate().is_err());
        assert!(Table::read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn dicke_columns() {
        let mut spec = SweepSpec::new(SweepModel::Dicke);
        spec.alpha = vec![0.5, 2.0];
        spec.sizes = vec![SystemSize::Finite(8), SystemSize::Thermodynamic];
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.rows[1][3], 0.0);
        assert!((t.rows[3][3] - PI / 2.0).abs() < 1e-15);
        assert!(t.rows[2][3] > 0.0);
    }
}
