//! JSON and CSV encodings for masks, polyphase matrices, realizations and signals.
//!
//! Complex matrices are nested row arrays of `[re, im]` pairs. Every `parse_*`
//! function accepts untrusted text and reports malformed input as [`Error::Format`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filterbank::{CascadeResult, Signal, SubbandPair};
use crate::linalg::{decode_matrix, encode_matrix, zeros, CMat};
use crate::masks::{MaskPair, MatrixMask};
use crate::qmf::PolyphaseMatrix;
use crate::realization::Realization;

type Encoded = Vec<Vec<[f64; 2]>>;

/// Upper bound on M and on the number of coefficients accepted from files.
pub const MAX_DIM: usize = 1 << 12;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaskDoc {
    #[serde(rename = "M")]
    m: usize,
    n: usize,
    p: Vec<Encoded>,
    q: Vec<Encoded>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyphaseDoc {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "F")]
    f: Vec<Encoded>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RealizationDoc {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "A")]
    a: Encoded,
    #[serde(rename = "B")]
    b: Encoded,
    #[serde(rename = "C")]
    c: Encoded,
    #[serde(rename = "D")]
    d: Encoded,
    #[serde(rename = "U")]
    u: Encoded,
}

fn check_dims(m: usize, count: usize) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        return Err(Error::format(format!("M = {m} outside 1..={MAX_DIM}")));
    }
    if count > MAX_DIM {
        return Err(Error::format(format!("{count} coefficients exceeds {MAX_DIM}")));
    }
    Ok(())
}

fn json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::format(e.to_string()))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("plain data always serializes")
}

fn decode_list(list: &[Encoded], size: usize, what: &str) -> Result<Vec<CMat>> {
    list.iter()
        .enumerate()
        .map(|(i, x)| decode_matrix(x, size, size, &format!("{what}[{i}]")))
        .collect()
}

pub fn mask_to_json(pair: &MaskPair) -> String {
    to_json(&MaskDoc {
        m: pair.m(),
        n: pair.support_end(),
        p: pair.p().coeffs().iter().map(encode_matrix).collect(),
        q: pair.q().coeffs().iter().map(encode_matrix).collect(),
    })
}

pub fn parse_mask_json(text: &str) -> Result<MaskPair> {
    let doc: MaskDoc = json(text)?;
    check_dims(doc.m, doc.n.saturating_add(1))?;
    for (name, list) in [("p", &doc.p), ("q", &doc.q)] {
        if list.len() != doc.n + 1 {
            return Err(Error::format(format!(
                "{name} has {} coefficients, n = {} requires {}",
                list.len(),
                doc.n,
                doc.n + 1
            )));
        }
    }
    let p = MatrixMask::new(doc.m, decode_list(&doc.p, doc.m, "p")?)?;
    let q = MatrixMask::new(doc.m, decode_list(&doc.q, doc.m, "q")?)?;
    MaskPair::new(p, q)
}

pub fn polyphase_to_json(f: &PolyphaseMatrix) -> String {
    to_json(&PolyphaseDoc {
        m: f.m(),
        n: f.degree(),
        f: f.coeffs().iter().map(encode_matrix).collect(),
    })
}

pub fn parse_polyphase_json(text: &str) -> Result<PolyphaseMatrix> {
    let doc: PolyphaseDoc = json(text)?;
    check_dims(doc.m, doc.n.saturating_add(1))?;
    if doc.f.len() != doc.n + 1 {
        return Err(Error::format(format!(
            "F has {} coefficients, N = {} requires {}",
            doc.f.len(),
            doc.n,
            doc.n + 1
        )));
    }
    PolyphaseMatrix::new(doc.m, decode_list(&doc.f, 2 * doc.m, "F")?)
}

pub fn realization_to_json(r: &Realization) -> String {
    to_json(&RealizationDoc {
        m: r.m(),
        n: r.degree(),
        a: encode_matrix(r.a()),
        b: encode_matrix(r.b()),
        c: encode_matrix(r.c()),
        d: encode_matrix(r.d()),
        u: encode_matrix(r.u()),
    })
}

pub fn parse_realization_json(text: &str) -> Result<Realization> {
    let doc: RealizationDoc = json(text)?;
    check_dims(doc.m, doc.n)?;
    let s = 2 * doc.m;
    let t = s
        .checked_mul(doc.n)
        .filter(|&t| t <= MAX_DIM)
        .ok_or_else(|| Error::format("state dimension too large"))?;
    Realization::from_blocks(
        doc.m,
        doc.n,
        decode_matrix(&doc.a, s, s, "A")?,
        decode_matrix(&doc.b, s, t, "B")?,
        decode_matrix(&doc.c, t, s, "C")?,
        decode_matrix(&doc.d, t, t, "D")?,
        decode_matrix(&doc.u, t, t, "U")?,
    )
}

fn cell(z: Complex64) -> String {
    format!("{:?};{:?}", z.re, z.im)
}

fn parse_cell(s: &str, row: usize, col: usize) -> Result<Complex64> {
    let bad = || Error::format(format!("row {row}, column {col}: expected re;im, found {s:?}"));
    let (re, im) = s.trim().split_once(';').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn csv_reader(text: &str, headers: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(headers)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_err(e: csv::Error) -> Error {
    Error::format(e.to_string())
}

fn read_rows(reader: &mut csv::Reader<&[u8]>, offset: usize) -> Result<Vec<Vec<Complex64>>> {
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() > MAX_DIM {
            return Err(Error::format(format!("row {} has too many columns", i + offset)));
        }
        rows.push(
            rec.iter()
                .enumerate()
                .map(|(j, s)| parse_cell(s, i + offset, j + 1))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(rows)
}

fn rows_to_matrix(rows: &[Vec<Complex64>], cols: std::ops::Range<usize>) -> CMat {
    let mut out = zeros(rows.len(), cols.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, c) in cols.clone().enumerate() {
            out[(i, j)] = row[c];
        }
    }
    out
}

fn write_csv(header: Option<Vec<String>>, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(&h).expect("in-memory write");
    }
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

/// One sample per line, M `re;im` cells, no header.
pub fn signal_to_csv(c: &Signal) -> String {
    let s = c.samples();
    write_csv(
        None,
        (0..s.nrows()).map(|i| s.row(i).iter().map(|&z| cell(z)).collect()),
    )
}

pub fn parse_signal_csv(text: &str) -> Result<Signal> {
    let rows = read_rows(&mut csv_reader(text, false), 1)?;
    let m = rows.first().map_or(0, Vec::len);
    if m == 0 {
        return Err(Error::format("empty signal"));
    }
    if rows.len() % 2 != 0 {
        return Err(Error::format(format!("signal length {} is odd", rows.len())));
    }
    Signal::new(rows_to_matrix(&rows, 0..m))
}

fn subband_header(m: usize) -> Vec<String> {
    (1..=m)
        .map(|j| format!("low_{j}"))
        .chain((1..=m).map(|j| format!("high_{j}")))
        .collect()
}

/// Header `low_1..low_M,high_1..high_M`, then L/2 rows of `re;im` cells.
pub fn subbands_to_csv(s: &SubbandPair) -> String {
    let (low, high) = (s.low(), s.high());
    write_csv(
        Some(subband_header(s.m())),
        (0..low.nrows()).map(|i| low.row(i).iter().chain(high.row(i).iter()).map(|&z| cell(z)).collect()),
    )
}

pub fn parse_subbands_csv(text: &str) -> Result<SubbandPair> {
    let mut reader = csv_reader(text, true);
    let header: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if !header.len().is_multiple_of(2) || header.is_empty() || header.len() > MAX_DIM {
        return Err(Error::format(format!("bad subband header {header:?}")));
    }
    let m = header.len() / 2;
    if header != subband_header(m) {
        return Err(Error::format(format!(
            "expected header {:?}",
            subband_header(m).join(",")
        )));
    }
    let rows = read_rows(&mut reader, 2)?;
    if rows.is_empty() {
        return Err(Error::format("no subband rows"));
    }
    SubbandPair::new(rows_to_matrix(&rows, 0..m), rows_to_matrix(&rows, m..2 * m))
}

/// Header `x,phi_1..phi_M,psi_1..psi_M`; x plain, samples as `re;im`.
pub fn cascade_to_csv(r: &CascadeResult) -> String {
    let m = r.m();
    let header = std::iter::once("x".to_owned())
        .chain((1..=m).map(|j| format!("phi_{j}")))
        .chain((1..=m).map(|j| format!("psi_{j}")))
        .collect();
    write_csv(
        Some(header),
        (0..r.len()).map(|i| {
            std::iter::once(format!("{:?}", r.x(i)))
                .chain(r.phi().row(i).iter().map(|&z| cell(z)))
                .chain(r.psi().row(i).iter().map(|&z| cell(z)))
                .collect()
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{analyze, cascade};
    use crate::masks::SumRuleVectors;
    use crate::realization::build_abcd;
    use crate::synthesis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mask_round_trip_bit_exact() {
        let pair = synthesis::chui_lian().unwrap();
        let text = mask_to_json(&pair);
        assert_eq!(parse_mask_json(&text).unwrap(), pair);
        assert_eq!(mask_to_json(&parse_mask_json(&text).unwrap()), text);
    }

    #[test]
    fn mask_schema() {
        let v: serde_json::Value = serde_json::from_str(&mask_to_json(&synthesis::haar())).unwrap();
        assert_eq!(v["M"], 1);
        assert_eq!(v["n"], 1);
        assert_eq!(v["p"][1][0][0][0].as_f64().unwrap(), std::f64::consts::FRAC_1_SQRT_2);
    }

    #[test]
    fn mask_rejects_malformed() {
        for bad in [
            "",
            "{}",
            r#"{"M":1,"n":0,"p":[[[[1,0]]]],"q":[]}"#,
            r#"{"M":0,"n":0,"p":[],"q":[]}"#,
            r#"{"M":1,"n":0,"p":[[[[1,0,3]]]],"q":[[[[1,0]]]]}"#,
            r#"{"M":2,"n":0,"p":[[[[1,0]]]],"q":[[[[1,0]]]]}"#,
            r#"{"M":1,"n":0,"p":[[[[1,0]]]],"q":[[[[1,0]]]],"x":1}"#,
            r#"{"M":1,"n":18446744073709551615,"p":[],"q":[]}"#,
            r#"{"M":1,"n":0,"p":[[[[1e999,0]]]],"q":[[[[1,0]]]]}"#,
        ] {
            assert!(
                matches!(
                    parse_mask_json(bad),
                    Err(Error::Format(_)) | Err(Error::DimensionMismatch(_))
                ),
                "{bad}"
            );
        }
        assert!(parse_mask_json(r#"{"M":1,"n":0,"p":[[[[1,0]]]],"q":[[[[1,0]]]]}"#).is_ok());
    }

    #[test]
    fn polyphase_and_realization_round_trip() {
        let f = synthesis::d6_family(synthesis::solve_d6().unwrap()).unwrap();
        let text = polyphase_to_json(&f);
        assert_eq!(parse_polyphase_json(&text).unwrap(), f);
        let r = build_abcd(&f).unwrap();
        let text = realization_to_json(&r);
        assert_eq!(parse_realization_json(&text).unwrap(), r);
        assert!(parse_realization_json(r#"{"M":1,"N":99999999999,"A":[],"B":[],"C":[],"D":[],"U":[]}"#).is_err());
    }

    #[test]
    fn signal_csv() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Signal::random(&mut rng, 8, 2).unwrap();
        let text = signal_to_csv(&c);
        assert_eq!(text.lines().count(), 8);
        assert_eq!(parse_signal_csv(&text).unwrap(), c);
        assert!(parse_signal_csv("1;0\n").is_err());
        assert!(parse_signal_csv("1;0,2;0\n3;0\n").is_err());
        assert!(parse_signal_csv("1;0\nNaN;0\n").is_err());
        assert!(parse_signal_csv("1\n2\n").is_err());
        assert!(parse_signal_csv("").is_err());
        assert!(parse_signal_csv(" 1 ; 0 \n-2.5;1e-3\n").is_ok());
    }

    #[test]
    fn subbands_csv() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pair = synthesis::chui_lian().unwrap();
        let s = analyze(&Signal::random(&mut rng, 8, 2).unwrap(), &pair).unwrap();
        let text = subbands_to_csv(&s);
        assert!(text.starts_with("low_1,low_2,high_1,high_2\n"));
        assert_eq!(parse_subbands_csv(&text).unwrap(), s);
        assert!(parse_subbands_csv("low_1,high_1\n").is_err());
        assert!(parse_subbands_csv("a,b\n1;0,2;0\n").is_err());
    }

    #[test]
    fn cascade_csv_header() {
        let r = cascade(&synthesis::haar(), &SumRuleVectors::full_rank(1), 2).unwrap();
        let text = cascade_to_csv(&r);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,phi_1,psi_1"));
        assert_eq!(lines.next(), Some("0.0,1.0;0.0,1.0;0.0"));
        assert_eq!(text.lines().count(), 1 + r.len());
    }
}
