//! File formats.
//!
//! * angular functions: JSON arrays of Fourier triples `[k, re, im]`;
//! * sphere functions: CSV `omega_1,omega_2,omega_3,value` on an icosahedral grid;
//! * X-ray records: CSV, one line per row;
//! * sinograms: dense CSV (one row per angle) or long CSV (one row per line);
//! * grid fields: CSV of node coordinates followed by the components;
//! * planar kernels: a JSON header next to a CSV of the smooth remainder.
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use abgauge_core::angular::{AngularFunction, Interpolation, SphereFunction, SphereGrid};
use abgauge_core::fields::{GaugeElement, GridField};
use abgauge_core::scattering::{
    apply_gauge_to_kernel, assemble_kernel, Remainder, ScatteringKernel,
};
use abgauge_core::tomography::{Line, Sinogram, XRayComponent, XRayData, XRayValues};
use abgauge_core::{Complex64, Dim};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(open(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// JSON given inline (starting with `[` or `{`) or as a path to a file.
pub fn inline_or_file<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        Ok(serde_json::from_str(t)?)
    } else {
        read_json(Path::new(arg))
    }
}

// ---- angular functions ------------------------------------------------------

pub type Triple = [f64; 3];

/// Real trig polynomial from `[k, re, im]` triples; both `k` and `-k` may be
/// given, otherwise the conjugate partner is filled in.
pub fn angular_from_triples(triples: &[Triple]) -> Result<AngularFunction> {
    let mut ks = Vec::with_capacity(triples.len());
    for t in triples {
        if t[0].fract() != 0.0 || !t.iter().all(|v| v.is_finite()) {
            return Err(Error::format(
                "Fourier triple",
                format!("{t:?}: index must be an integer, values finite"),
            ));
        }
        ks.push(t[0] as i64);
    }
    let order = ks
        .iter()
        .map(|k| k.unsigned_abs() as usize)
        .max()
        .unwrap_or(0)
        .max(1);
    let mut full: Vec<(i64, f64, f64)> = Vec::new();
    for (t, &k) in triples.iter().zip(&ks) {
        full.push((k, t[1], t[2]));
        if k != 0 && !ks.contains(&-k) {
            full.push((-k, t[1], -t[2]));
        }
    }
    Ok(AngularFunction::from_triples(order, &full)?)
}

/// Nonzero coefficients as `[k, re, im]`, `k` ascending.
pub fn angular_to_triples(f: &AngularFunction) -> Vec<Triple> {
    f.to_triples()
        .into_iter()
        .filter(|t| t.1 != 0.0 || t.2 != 0.0)
        .map(|(k, re, im)| [k as f64, re, im])
        .collect()
}

/// Fourier triples of a fitted function without round-off coefficients.
pub fn significant_triples(f: &AngularFunction) -> Vec<Triple> {
    let triples = angular_to_triples(f);
    let peak = triples.iter().map(|t| t[1].hypot(t[2])).fold(0.0, f64::max);
    triples
        .into_iter()
        .filter(|t| t[1].hypot(t[2]) > 1e-12 * peak.max(1.0))
        .collect()
}

// ---- sphere functions -------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SphereRow {
    omega_1: f64,
    omega_2: f64,
    omega_3: f64,
    value: f64,
}

pub fn write_sphere<W: Write>(w: W, f: &SphereFunction) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (node, &value) in f.grid().nodes().iter().zip(f.values()) {
        out.serialize(SphereRow {
            omega_1: node[0],
            omega_2: node[1],
            omega_3: node[2],
            value,
        })?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

/// Level of the icosahedral grid with `count` nodes (`10 * 4^level + 2`).
pub fn icosahedral_level(count: usize) -> Option<usize> {
    (0..12).find(|&l| 10 * 4usize.pow(l as u32) + 2 == count)
}

/// Values at nodes `(omega, value)` placed on the matching icosahedral grid.
pub fn sphere_from_samples(
    rows: &[[f64; 4]],
    interpolation: Interpolation,
) -> Result<SphereFunction> {
    let level = icosahedral_level(rows.len()).ok_or_else(|| {
        Error::format(
            "sphere samples",
            format!("{} nodes is not an icosahedral grid", rows.len()),
        )
    })?;
    let grid = Arc::new(SphereGrid::icosahedral(level));
    let mut values = vec![f64::NAN; grid.len()];
    for r in rows {
        let i = grid.find_node(&[r[0], r[1], r[2]]).ok_or_else(|| {
            Error::format(
                "sphere samples",
                format!("({}, {}, {}) is not a grid node", r[0], r[1], r[2]),
            )
        })?;
        values[i] = r[3];
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::format("sphere samples", "repeated nodes"));
    }
    Ok(SphereFunction::from_values(grid, values, interpolation)?)
}

pub fn read_sphere<R: Read>(r: R, interpolation: Interpolation) -> Result<SphereFunction> {
    let rows = csv::Reader::from_reader(r)
        .deserialize::<SphereRow>()
        .map(|row| row.map(|s| [s.omega_1, s.omega_2, s.omega_3, s.value]))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    sphere_from_samples(&rows, interpolation)
}

// ---- X-ray records ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct XRayRow {
    component: String,
    dim: usize,
    x0_1: f64,
    x0_2: f64,
    x0_3: f64,
    omega_1: f64,
    omega_2: f64,
    omega_3: f64,
    re: f64,
    im: Option<f64>,
}

/// Real records leave `im` empty.
pub fn write_xray<W: Write>(w: W, data: &XRayData) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let component = match data.component {
        XRayComponent::Scalar => "scalar",
        XRayComponent::Vector => "vector",
    };
    for (i, line) in data.lines.iter().enumerate() {
        let (x, o) = (line.x0(), line.omega());
        let (re, im) = match &data.values {
            XRayValues::Real(v) => (v[i], None),
            XRayValues::Unimodular(v) => (v[i].re, Some(v[i].im)),
        };
        out.serialize(XRayRow {
            component: component.into(),
            dim: line.dim().n(),
            x0_1: x[0],
            x0_2: x[1],
            x0_3: x[2],
            omega_1: o[0],
            omega_2: o[1],
            omega_3: o[2],
            re,
            im,
        })?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn read_xray<R: Read>(r: R) -> Result<XRayData> {
    let mut lines = Vec::new();
    let mut real = Vec::new();
    let mut complex = Vec::new();
    let mut component = None;
    for row in csv::Reader::from_reader(r).deserialize::<XRayRow>() {
        let row = row?;
        let c = match row.component.as_str() {
            "scalar" => XRayComponent::Scalar,
            "vector" => XRayComponent::Vector,
            other => {
                return Err(Error::format(
                    "X-ray record",
                    format!("unknown component {other:?}"),
                ))
            }
        };
        if *component.get_or_insert(c) != c {
            return Err(Error::format("X-ray record", "mixed components"));
        }
        let dim = Dim::from_n(row.dim)?;
        lines.push(Line::new(
            [row.x0_1, row.x0_2, row.x0_3],
            [row.omega_1, row.omega_2, row.omega_3],
            dim,
        )?);
        match row.im {
            Some(im) => complex.push(Complex64::new(row.re, im)),
            None => real.push(row.re),
        }
    }
    let values = match (real.is_empty(), complex.is_empty()) {
        (_, true) => XRayValues::Real(real),
        (true, false) => XRayValues::Unimodular(complex),
        (false, false) => {
            return Err(Error::format(
                "X-ray record",
                "mixed real and unimodular values",
            ))
        }
    };
    Ok(XRayData::new(
        lines,
        values,
        component.unwrap_or(XRayComponent::Scalar),
    )?)
}

// ---- sinograms --------------------------------------------------------------

/// One row per angle: `theta, p_0, ..., p_{n-1}`; unmeasured lines are empty.
pub fn write_sinogram_dense<W: Write>(w: W, s: &Sinogram) -> Result<()> {
    let g = s.geometry();
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["theta".to_string()];
    header.extend((0..g.offsets).map(|j| format!("p={}", g.offset(j))));
    out.write_record(&header)?;
    for i in 0..g.angles {
        let mut row = vec![g.theta(i).to_string()];
        row.extend((0..g.offsets).map(|j| cell(s.value(i, j))));
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

/// One row per line of the geometry (`angles * offsets` rows).
pub fn write_sinogram_long<W: Write>(w: W, s: &Sinogram) -> Result<()> {
    let g = s.geometry();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["theta", "p", "measured", "value"])?;
    for i in 0..g.angles {
        for j in 0..g.offsets {
            let v = s.value(i, j);
            out.write_record([
                g.theta(i).to_string(),
                g.offset(j).to_string(),
                g.is_measured(j).to_string(),
                cell(v),
            ])?;
        }
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

// ---- grid fields ------------------------------------------------------------

/// `x1, x2[, x3], c0, c1, ...`, one row per node, x fastest.
pub fn write_grid<W: Write>(w: W, g: &GridField) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=g.dim()).map(|i| format!("x{i}")).collect();
    header.extend((0..g.components()).map(|c| format!("c{c}")));
    out.write_record(&header)?;
    for (x, v) in g.samples() {
        let row: Vec<String> = x[..g.dim()]
            .iter()
            .chain(v)
            .map(|t| t.to_string())
            .collect();
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

/// Reads a grid written by [`write_grid`]; the node layout is recovered from
/// the distinct coordinates.
pub fn read_grid<R: Read>(r: R) -> Result<GridField> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    let dim = header.iter().take_while(|h| h.starts_with('x')).count();
    let components = header.len() - dim;
    if !(2..=3).contains(&dim) || components == 0 {
        return Err(Error::format(
            "grid",
            "expected x1,x2[,x3] followed by components",
        ));
    }
    let mut coords: Vec<Vec<f64>> = vec![Vec::new(); dim];
    let mut data = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Error::format("grid", e.to_string()))
            })
            .collect::<Result<_>>()?;
        for (c, v) in coords.iter_mut().zip(&vals) {
            c.push(*v);
        }
        data.extend_from_slice(&vals[dim..]);
    }
    let mut lower = [0.0; 3];
    let mut spacing = [1.0; 3];
    let mut shape = [1; 3];
    for a in 0..dim {
        let mut u = coords[a].clone();
        u.sort_by(f64::total_cmp);
        u.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * (1.0 + y.abs()));
        if u.len() < 2 {
            return Err(Error::format("grid", "fewer than two nodes along an axis"));
        }
        lower[a] = u[0];
        spacing[a] = (u[u.len() - 1] - u[0]) / (u.len() - 1) as f64;
        shape[a] = u.len();
    }
    Ok(GridField::new(
        dim, lower, spacing, shape, components, data,
    )?)
}

// ---- planar kernels ---------------------------------------------------------

/// JSON header of a planar kernel; the remainder grid lives in `remainder_csv`
/// (relative to the header) as rows `i, j, re, im`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelHeader {
    pub n: usize,
    #[serde(rename = "lambda")]
    pub energy: f64,
    pub alpha: f64,
    pub winding: i64,
    pub grid: usize,
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub phase_out: Vec<Triple>,
    pub phase_in: Vec<Triple>,
    pub remainder_csv: String,
}

#[derive(Serialize, Deserialize)]
struct RemainderRow {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

pub fn write_remainder<W: Write>(w: W, r: &Remainder) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = r.size();
    for i in 0..n {
        for j in 0..n {
            let z = r.at(i, j);
            out.serialize(RemainderRow {
                i,
                j,
                re: z.re,
                im: z.im,
            })?;
        }
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn read_remainder<R: Read>(r: R, size: usize, c: f64, delta: f64) -> Result<Remainder> {
    let mut values = vec![Complex64::new(f64::NAN, 0.0); size * size];
    for row in csv::Reader::from_reader(r).deserialize::<RemainderRow>() {
        let row = row?;
        if row.i >= size || row.j >= size {
            return Err(Error::format(
                "remainder",
                format!("index ({}, {}) outside a {size}-grid", row.i, row.j),
            ));
        }
        values[row.i * size + row.j] = Complex64::new(row.re, row.im);
    }
    if values.iter().any(|z| z.re.is_nan()) {
        return Err(Error::format("remainder", "missing grid values"));
    }
    Ok(Remainder::new(size, values, c, delta)?)
}

/// Path of the remainder CSV written next to `header`.
pub fn remainder_path(header: &Path) -> PathBuf {
    header.with_extension("remainder.csv")
}

pub fn write_kernel(path: &Path, k: &ScatteringKernel) -> Result<()> {
    let csv_path = remainder_path(path);
    let (c, delta) = k.remainder().bound();
    let header = KernelHeader {
        n: 2,
        energy: k.energy(),
        alpha: k.alpha(),
        winding: k.winding(),
        grid: k.grid_size(),
        delta,
        c,
        phase_out: angular_to_triples(k.phase_out()),
        phase_in: angular_to_triples(k.phase_in()),
        remainder_csv: csv_path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    write_json(path, &header)?;
    let mut w = create(&csv_path)?;
    write_remainder(&mut w, k.remainder())
}

pub fn read_kernel(path: &Path) -> Result<ScatteringKernel> {
    let h: KernelHeader = read_json(path)?;
    if h.n != 2 {
        return Err(Error::format(
            "kernel header",
            format!("dimension {} (only planar kernels are stored)", h.n),
        ));
    }
    let csv_path = path
        .parent()
        .unwrap_or(Path::new("."))
        .join(&h.remainder_csv);
    let remainder = read_remainder(open(&csv_path)?, h.grid, h.c, h.delta)?;
    kernel_from_parts(&h, remainder)
}

pub fn kernel_from_parts(h: &KernelHeader, remainder: Remainder) -> Result<ScatteringKernel> {
    let phase_in = angular_from_triples(&h.phase_in)?;
    let phase_out = angular_from_triples(&h.phase_out)?;
    let k = assemble_kernel(h.alpha, phase_in, phase_out, remainder, h.energy)?;
    if h.winding == 0 {
        return Ok(k);
    }
    let shift = GaugeElement::planar(h.winding, AngularFunction::zero(1), 1e-12)?;
    Ok(apply_gauge_to_kernel(&k, &shift)?)
}
