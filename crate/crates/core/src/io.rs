//! File formats: self-describing CSV matrices and the JSON model format.
//!
//! Matrix files start with the header line
//! `# rows=N cols=L kind={training|basis|grid|params}` followed by `N`
//! comma-separated rows. Values are written with 17 significant digits
//! so finite doubles round-trip bit-for-bit; complex entries use the
//! token form `a+bi` / `a-bi` with both parts in the same notation.
//!
//! Model files are a single JSON document (format_version 1) holding
//! the quadrature, the basis, the greedy history, the empirical
//! interpolant and the per-node spline fits — everything needed to
//! reload a surrogate and evaluate it identically.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bench::BenchRecord;
use crate::eim::EimOperator;
use crate::error::{Error, Result};
use crate::integration::{Quadrature, QuadratureRule};
use crate::reduced_basis::ReducedBasis;
use crate::splines::Spline;
use crate::surrogate::{BuildReport, Surrogate};

/// Semantic tag carried in the matrix-file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Training,
    Basis,
    Grid,
    Params,
}

impl MatrixKind {
    fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Training => "training",
            MatrixKind::Basis => "basis",
            MatrixKind::Grid => "grid",
            MatrixKind::Params => "params",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "training" => Ok(MatrixKind::Training),
            "basis" => Ok(MatrixKind::Basis),
            "grid" => Ok(MatrixKind::Grid),
            "params" => Ok(MatrixKind::Params),
            other => Err(Error::Parse(format!("unknown matrix kind '{other}'"))),
        }
    }
}

fn write_float(out: &mut impl Write, v: f64) -> std::io::Result<()> {
    // 17 significant digits: enough for exact f64 round trips.
    write!(out, "{v:.16e}")
}

fn write_complex(out: &mut impl Write, z: Complex64) -> std::io::Result<()> {
    write_float(out, z.re)?;
    out.write_all(if z.im.is_sign_negative() { b"-" } else { b"+" })?;
    write_float(out, z.im.abs())?;
    out.write_all(b"i")
}

fn parse_float(token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid number '{token}'")))
}

fn parse_entry(token: &str) -> Result<Complex64> {
    let token = token.trim();
    if let Some(body) = token.strip_suffix(['i', 'I']) {
        // Split at the sign separating real and imaginary parts; signs
        // directly after an exponent marker belong to the exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for pos in (1..bytes.len()).rev() {
            let b = bytes[pos];
            if (b == b'+' || b == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
                split = Some(pos);
                break;
            }
        }
        let pos = split.ok_or_else(|| Error::Parse(format!("invalid complex token '{token}'")))?;
        let re = parse_float(&body[..pos])?;
        let im_abs = parse_float(&body[pos + 1..])?;
        let im = if bytes[pos] == b'-' { -im_abs } else { im_abs };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(parse_float(token)?, 0.0))
    }
}

/// Writes a matrix with its header line. Purely real matrices (every
/// imaginary part bitwise +0.0) use plain real tokens.
pub fn write_matrix(
    path: impl AsRef<Path>,
    values: ArrayView2<'_, Complex64>,
    kind: MatrixKind,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let (rows, cols) = values.dim();
    writeln!(out, "# rows={rows} cols={cols} kind={}", kind.as_str())?;
    let real_only = values.iter().all(|z| z.im.to_bits() == 0);
    for row in values.rows() {
        let mut first = true;
        for z in row.iter() {
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            if real_only {
                write_float(&mut out, z.re)?;
            } else {
                write_complex(&mut out, *z)?;
            }
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes a real matrix.
pub fn write_matrix_real(
    path: impl AsRef<Path>,
    values: ArrayView2<'_, f64>,
    kind: MatrixKind,
) -> Result<()> {
    let complex = values.mapv(|v| Complex64::new(v, 0.0));
    write_matrix(path, complex.view(), kind)
}

/// Reads a matrix file, returning the values and the header kind.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<(Array2<Complex64>, MatrixKind)> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))??;
    let mut rows = None;
    let mut cols = None;
    let mut kind = None;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("#") {
        return Err(Error::Parse(format!(
            "{}: missing '# rows=... cols=... kind=...' header",
            path.display()
        )));
    }
    for field in fields {
        match field.split_once('=') {
            Some(("rows", v)) => {
                rows = Some(v.parse::<usize>().map_err(|_| {
                    Error::Parse(format!("{}: invalid rows value '{v}'", path.display()))
                })?)
            }
            Some(("cols", v)) => {
                cols = Some(v.parse::<usize>().map_err(|_| {
                    Error::Parse(format!("{}: invalid cols value '{v}'", path.display()))
                })?)
            }
            Some(("kind", v)) => kind = Some(MatrixKind::parse(v)?),
            _ => {
                return Err(Error::Parse(format!(
                    "{}: unexpected header field '{field}'",
                    path.display()
                )))
            }
        }
    }
    let (rows, cols, kind) = match (rows, cols, kind) {
        (Some(r), Some(c), Some(k)) => (r, c, k),
        _ => {
            return Err(Error::Parse(format!(
                "{}: header must define rows, cols and kind",
                path.display()
            )))
        }
    };
    if rows == 0 || cols == 0 {
        return Err(Error::Parse(format!(
            "{}: matrix must have at least one row and one column",
            path.display()
        )));
    }

    let mut values = Array2::zeros((rows, cols));
    let mut row_count = 0usize;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if row_count >= rows {
            return Err(Error::Parse(format!(
                "{}: more data rows than the declared {rows}",
                path.display()
            )));
        }
        let mut col = 0usize;
        for token in line.split(',') {
            if col >= cols {
                return Err(Error::Parse(format!(
                    "{}: row {row_count} has more than {cols} columns",
                    path.display()
                )));
            }
            values[[row_count, col]] = parse_entry(token)?;
            col += 1;
        }
        if col != cols {
            return Err(Error::Parse(format!(
                "{}: row {row_count} has {col} columns, expected {cols}",
                path.display()
            )));
        }
        row_count += 1;
    }
    if row_count != rows {
        return Err(Error::Parse(format!(
            "{}: found {row_count} data rows, expected {rows}",
            path.display()
        )));
    }
    Ok((values, kind))
}

/// Reads a matrix file that must be purely real.
pub fn read_matrix_real(path: impl AsRef<Path>) -> Result<(Array2<f64>, MatrixKind)> {
    let path = path.as_ref();
    let (values, kind) = read_matrix(path)?;
    if values.iter().any(|z| z.im != 0.0) {
        return Err(Error::Parse(format!(
            "{}: expected real data but found complex entries",
            path.display()
        )));
    }
    Ok((values.mapv(|z| z.re), kind))
}

// --- model format ---------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct QuadratureSection {
    points: Vec<f64>,
    weights: Vec<f64>,
    rule: QuadratureRule,
}

#[derive(Debug, Serialize, Deserialize)]
struct EimSection {
    nodes: Vec<usize>,
    v_matrix: Vec<f64>,
    b_matrix: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SplineSection {
    knots: Vec<f64>,
    coefficients: Vec<f64>,
    degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct BuildReportSection {
    n_basis: usize,
    greedy_errors: Vec<f64>,
    wall_time_seconds: f64,
}

/// On-disk layout of a surrogate model.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    format_version: u32,
    quadrature: QuadratureSection,
    /// Row-major n x L basis elements.
    basis: Vec<f64>,
    greedy_indices: Vec<usize>,
    greedy_errors: Vec<f64>,
    eim: EimSection,
    splines: Vec<SplineSection>,
    parameter_domain: [f64; 2],
    build_report: BuildReportSection,
}

const MODEL_FORMAT_VERSION: u32 = 1;

fn real_matrix(values: ArrayView2<'_, Complex64>, what: &str) -> Result<Vec<f64>> {
    if values.iter().any(|z| z.im != 0.0) {
        return Err(Error::Unsupported(format!(
            "model files store real-valued surrogates; {what} has complex entries"
        )));
    }
    Ok(values.iter().map(|z| z.re).collect())
}

/// Converts a surrogate into its on-disk representation.
pub fn surrogate_to_model(s: &Surrogate) -> Result<ModelFile> {
    let rb = s.reduced_basis();
    let q = rb.quadrature();
    Ok(ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        quadrature: QuadratureSection {
            points: q.points().to_vec(),
            weights: q.weights().to_vec(),
            rule: q.rule(),
        },
        basis: real_matrix(rb.elements(), "the basis")?,
        greedy_indices: rb.greedy_indices().to_vec(),
        greedy_errors: rb.greedy_errors().to_vec(),
        eim: EimSection {
            nodes: s.eim().nodes().to_vec(),
            v_matrix: real_matrix(s.eim().node_matrix(), "the node matrix")?,
            b_matrix: real_matrix(s.eim().cardinal_matrix(), "the cardinal matrix")?,
        },
        splines: s
            .fits()
            .iter()
            .map(|fit| SplineSection {
                knots: fit.knot_vector().to_vec(),
                coefficients: fit.coefficients().to_vec(),
                degree: fit.degree(),
            })
            .collect(),
        parameter_domain: [s.parameter_domain().0, s.parameter_domain().1],
        build_report: BuildReportSection {
            n_basis: s.report().n_basis,
            greedy_errors: s.report().greedy_errors.clone(),
            wall_time_seconds: s.report().wall_time_seconds,
        },
    })
}

fn complex_matrix(data: &[f64], rows: usize, cols: usize, what: &str) -> Result<Array2<Complex64>> {
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "{what} has {} entries, expected {rows} x {cols}",
            data.len()
        )));
    }
    Ok(Array2::from_shape_fn((rows, cols), |(i, j)| {
        Complex64::new(data[i * cols + j], 0.0)
    }))
}

/// Rebuilds a surrogate from its on-disk representation.
pub fn model_to_surrogate(model: ModelFile) -> Result<Surrogate> {
    if model.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported model format version {}",
            model.format_version
        )));
    }
    let quadrature = Quadrature::from_parts(
        model.quadrature.points,
        model.quadrature.weights,
        model.quadrature.rule,
    )?;
    let n = model.greedy_indices.len();
    let l = quadrature.len();
    let elements = complex_matrix(&model.basis, n, l, "the basis")?;
    let rb = ReducedBasis::from_parts(
        elements,
        model.greedy_indices,
        model.greedy_errors,
        quadrature,
        true,
    )?;
    let node_matrix = complex_matrix(&model.eim.v_matrix, n, n, "the node matrix")?;
    let cardinal = complex_matrix(&model.eim.b_matrix, n, l, "the cardinal matrix")?;
    let eim = EimOperator::from_parts(model.eim.nodes, node_matrix, cardinal)?;
    let fits: Vec<Spline> = model
        .splines
        .into_iter()
        .map(|sec| Spline::from_parts(sec.degree, sec.knots, sec.coefficients))
        .collect::<Result<_>>()?;
    Surrogate::from_parts(
        rb,
        eim,
        fits,
        (model.parameter_domain[0], model.parameter_domain[1]),
        BuildReport {
            n_basis: model.build_report.n_basis,
            greedy_errors: model.build_report.greedy_errors,
            wall_time_seconds: model.build_report.wall_time_seconds,
        },
    )
}

/// Saves a surrogate as a JSON model file.
pub fn save_model(path: impl AsRef<Path>, s: &Surrogate) -> Result<()> {
    let model = surrogate_to_model(s)?;
    let out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(out, &model)?;
    Ok(())
}

/// Loads a surrogate from a JSON model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<Surrogate> {
    let file = BufReader::new(File::open(path)?);
    let model: ModelFile = serde_json::from_reader(file)?;
    model_to_surrogate(model)
}

/// Writes benchmark records as CSV with a column-name header.
pub fn write_bench_csv(out: &mut impl Write, records: &[BenchRecord]) -> Result<()> {
    writeln!(
        out,
        "rule,normalize,greedy_tol,n_train,n_points,seed,wall_time_seconds,n_basis"
    )?;
    for r in records {
        write!(out, "{},{},", r.rule, r.normalize)?;
        write_float(out, r.greedy_tol)?;
        write!(out, ",{},{},{},", r.n_train, r.n_points, r.seed)?;
        write_float(out, r.wall_time_seconds)?;
        writeln!(out, ",{}", r.n_basis)?;
    }
    Ok(())
}
