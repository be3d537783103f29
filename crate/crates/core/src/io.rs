//! File formats: a binary matrix container, CSV, iteration logs and PGM/PBM images.
//!
//! Binary container layout (all little-endian):
//!
//! | offset | size | field                      |
//! |--------|------|----------------------------|
//! | 0      | 4    | magic `RSMX`               |
//! | 4      | 4    | version `u32` (currently 1) |
//! | 8      | 8    | rows `u64`                 |
//! | 16     | 8    | cols `u64`                 |
//! | 24     | 8·rows·cols | `f64` entries, row-major |
//!
//! Vectors are stored as a single column.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::grad2d::{FourierMask, GradReport, Image};
use crate::ratio_admm::SolveReport;
use crate::theory::PropertyVerdict;

pub const MAGIC: &[u8; 4] = b"RSMX";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 24;

fn format_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}

pub fn encode_matrix(a: &Array2<f64>) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * a.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(a.nrows() as u64).to_le_bytes());
    out.extend_from_slice(&(a.ncols() as u64).to_le_bytes());
    for v in a.iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_matrix(bytes: &[u8]) -> Result<Array2<f64>> {
    if bytes.len() < HEADER_LEN {
        return format_err("binary container shorter than its header");
    }
    if &bytes[0..4] != MAGIC {
        return format_err("bad magic bytes");
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return format_err(format!("unsupported container version {version}"));
    }
    let rows = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let cols = u64::from_le_bytes(bytes[16..24].try_into().expect("8 bytes")) as usize;
    let expected = rows
        .checked_mul(cols)
        .and_then(|k| k.checked_mul(8))
        .and_then(|k| k.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return format_err(format!("payload size does not match {rows}×{cols}"));
    }
    let values: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(Array2::from_shape_vec((rows, cols), values).expect("length checked"))
}

pub fn write_matrix_bin(path: impl AsRef<Path>, a: &Array2<f64>) -> Result<()> {
    Ok(fs::write(path, encode_matrix(a))?)
}

pub fn read_matrix_bin(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    decode_matrix(&fs::read(path)?)
}

pub fn write_vector_bin(path: impl AsRef<Path>, v: &Array1<f64>) -> Result<()> {
    let col = v.clone().insert_axis(ndarray::Axis(1));
    write_matrix_bin(path, &col)
}

pub fn read_vector_bin(path: impl AsRef<Path>) -> Result<Array1<f64>> {
    let a = read_matrix_bin(path)?;
    if a.ncols() != 1 {
        return format_err(format!("expected a single column, found {}", a.ncols()));
    }
    Ok(a.column(0).to_owned())
}

/// One row per line, comma separated, shortest round-trip formatting.
pub fn matrix_to_csv(a: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in a.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn vector_to_csv(v: &Array1<f64>) -> String {
    v.iter().map(|x| format!("{x}\n")).collect()
}

pub fn parse_matrix_csv(text: &str) -> Result<Array2<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return format_err("CSV holds no values");
    }
    if rows.iter().any(|r| r.len() != cols) {
        return format_err("CSV rows differ in length");
    }
    let nrows = rows.len();
    Ok(Array2::from_shape_vec((nrows, cols), rows.concat()).expect("rectangular"))
}

/// Accepts one value per line or a single comma-separated row.
pub fn parse_vector_csv(text: &str) -> Result<Array1<f64>> {
    let a = parse_matrix_csv(text)?;
    match a.dim() {
        (_, 1) => Ok(a.column(0).to_owned()),
        (1, _) => Ok(a.row(0).to_owned()),
        (r, c) => format_err(format!("expected a vector, found {r}×{c}")),
    }
}

/// Reads a matrix from `.csv` or the binary container (any other extension).
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "csv") {
        parse_matrix_csv(&fs::read_to_string(path)?)
    } else {
        read_matrix_bin(path)
    }
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Array1<f64>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "csv") {
        parse_vector_csv(&fs::read_to_string(path)?)
    } else {
        read_vector_bin(path)
    }
}

pub fn signal_log_csv(report: &SolveReport<f64>) -> String {
    let mut out = String::from("iter,objective,feasibility,res_y,res_z\n");
    for k in 0..report.iterations {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            k + 1,
            report.objective_history[k],
            report.feasibility_history[k],
            report.residual_y[k],
            report.residual_z[k]
        );
    }
    out
}

pub fn grad_log_csv(report: &GradReport<f64>) -> String {
    let mut out = String::from("iter,objective,data_residual,rel_change\n");
    for k in 0..report.iterations {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            k + 1,
            report.objective_history[k],
            report.data_residual[k],
            report.rel_change[k]
        );
    }
    out
}

/// Binary 16-bit PGM (`P5`, maxval 65535, big-endian samples) of pixels clamped to [0, 1].
pub fn encode_pgm16(image: &Image<f64>) -> Vec<u8> {
    let (h, w) = image.dims();
    let mut out = format!("P5\n{w} {h}\n65535\n").into_bytes();
    for v in image.pixels.iter() {
        let q = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
        out.extend_from_slice(&q.to_be_bytes());
    }
    out
}

pub fn decode_pgm16(bytes: &[u8]) -> Result<Image<f64>> {
    let (fields, offset) = pnm_header(bytes, b"P5", 3)?;
    let (w, h, maxval) = (fields[0], fields[1], fields[2]);
    if maxval != 65535 {
        return format_err(format!("expected maxval 65535, found {maxval}"));
    }
    let body = &bytes[offset..];
    if body.len() != 2 * w * h {
        return format_err("PGM payload size mismatch");
    }
    let pixels: Vec<f64> = body
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 / 65535.0)
        .collect();
    Image::new(Array2::from_shape_vec((h, w), pixels).expect("size checked"))
}

/// Binary PBM (`P4`); kept frequencies are written as 1 (black).
pub fn encode_pbm(mask: &FourierMask) -> Vec<u8> {
    let (h, w) = mask.dims();
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    for row in mask.keep.rows() {
        for chunk in row.as_slice().expect("standard layout").chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &k)| if k { acc | (0x80 >> i) } else { acc });
            out.push(byte);
        }
    }
    out
}

pub fn decode_pbm(bytes: &[u8]) -> Result<Array2<bool>> {
    let (fields, offset) = pnm_header(bytes, b"P4", 2)?;
    let (w, h) = (fields[0], fields[1]);
    let stride = w.div_ceil(8);
    let body = &bytes[offset..];
    if body.len() != stride * h {
        return format_err("PBM payload size mismatch");
    }
    Ok(Array2::from_shape_fn((h, w), |(i, j)| body[i * stride + j / 8] & (0x80 >> (j % 8)) != 0))
}

/// Parses `magic` followed by `count` whitespace-separated integers and the
/// single whitespace byte that ends a PNM header.
fn pnm_header(bytes: &[u8], magic: &[u8], count: usize) -> Result<(Vec<usize>, usize)> {
    if !bytes.starts_with(magic) {
        return format_err("wrong PNM magic");
    }
    let mut pos = magic.len();
    let mut fields = Vec::with_capacity(count);
    while fields.len() < count {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        let value = text
            .parse::<usize>()
            .map_err(|_| Error::Format("malformed PNM header".into()))?;
        fields.push(value);
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return format_err("PNM header not terminated");
    }
    Ok((fields, pos + 1))
}

pub const THEORY_HEADER: &str = "check,holds,margin,support,witness_vector";

/// One `check,holds,margin,support,witness_vector` row; list fields are
/// space separated and empty when there is no witness.
pub fn theory_row(check: &str, verdict: &PropertyVerdict) -> String {
    let (margin, support, vector) = match &verdict.witness {
        Some(w) => (
            w.margin.to_string(),
            w.support.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
            w.vector.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
        ),
        None => (String::new(), String::new(), String::new()),
    };
    format!("{check},{},{margin},{support},{vector}", verdict.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grad2d::radial_mask;
    use crate::theory::{check_nsp, Method};
    use ndarray::array;

    #[test]
    fn binary_round_trip() {
        let a = array![[1.0, -2.5, 3e-300], [f64::MAX, 0.0, -0.0]];
        let bytes = encode_matrix(&a);
        assert_eq!(&bytes[0..4], b"RSMX");
        assert_eq!(bytes.len(), 24 + 48);
        assert_eq!(decode_matrix(&bytes).unwrap(), a);
    }

    #[test]
    fn binary_rejects_corruption() {
        let a = array![[1.0, 2.0]];
        let mut bytes = encode_matrix(&a);
        assert!(decode_matrix(&bytes[..30]).is_err());
        bytes[0] = b'X';
        assert!(decode_matrix(&bytes).is_err());
        let mut bytes = encode_matrix(&a);
        bytes[4] = 9;
        assert!(decode_matrix(&bytes).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let a = array![[0.1, 1.0 / 3.0], [-7e-12, 2.0]];
        assert_eq!(parse_matrix_csv(&matrix_to_csv(&a)).unwrap(), a);
        let v = array![1.5, -0.25, 1e10];
        assert_eq!(parse_vector_csv(&vector_to_csv(&v)).unwrap(), v);
        assert_eq!(parse_vector_csv("1,2,3\n").unwrap(), array![1.0, 2.0, 3.0]);
        assert!(parse_matrix_csv("1,2\n3\n").is_err());
        assert!(parse_matrix_csv("1,x\n").is_err());
        assert!(parse_vector_csv("1,2\n3,4\n").is_err());
    }

    #[test]
    fn files_round_trip() {
        let dir = std::env::temp_dir().join(format!("ratio-sparse-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let v = array![1.0, 2.0, 3.0];
        write_vector_bin(dir.join("v.bin"), &v).unwrap();
        assert_eq!(read_vector(dir.join("v.bin")).unwrap(), v);
        fs::write(dir.join("v.csv"), vector_to_csv(&v)).unwrap();
        assert_eq!(read_vector(dir.join("v.csv")).unwrap(), v);
        assert!(read_matrix(dir.join("missing.bin")).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn pgm_round_trip() {
        let img = Image::new(array![[0.0, 0.5, 1.0], [0.25, 2.0, -1.0]]).unwrap();
        let bytes = encode_pgm16(&img);
        assert!(bytes.starts_with(b"P5\n3 2\n65535\n"));
        let back = decode_pgm16(&bytes).unwrap();
        assert_eq!(back.pixels[[1, 1]], 1.0);
        assert_eq!(back.pixels[[1, 2]], 0.0);
        assert!((back.pixels[[0, 1]] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn pbm_round_trip() {
        let mask = radial_mask(20, 13, 4);
        let bytes = encode_pbm(&mask);
        assert_eq!(decode_pbm(&bytes).unwrap(), mask.keep);
    }

    #[test]
    fn theory_rows() {
        let v = check_nsp(array![[1.0, 2.0]].view(), 1).unwrap();
        let row = theory_row("nsp", &v);
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[1], "false");
        assert_eq!(fields[3], "0");
        assert_eq!(fields[4].split(' ').count(), 2);
        let trivial = PropertyVerdict { holds: true, witness: None, method: Method::Exhaustive };
        assert_eq!(theory_row("nsp", &trivial), "nsp,true,,,");
    }
}
