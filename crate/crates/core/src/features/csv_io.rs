//! CSV interchange for feature matrices.
//!
//! One row per image, 58 numeric columns, optional trailing `label` column
//! (class id 0-5). Header row is `f0..f57[,label]`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::features::{FeatureVector, FEATURE_LEN};

pub fn write_features_csv<W: Write>(
    writer: W,
    rows: &[FeatureVector],
    labels: Option<&[u8]>,
) -> Result<()> {
    if let Some(labels) = labels {
        if labels.len() != rows.len() {
            return Err(Error::dimension("label count differs from row count"));
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..FEATURE_LEN).map(|i| format!("f{i}")).collect();
    if labels.is_some() {
        header.push("label".to_string());
    }
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in rows.iter().enumerate() {
        let mut record: Vec<String> = row.values().iter().map(|v| format!("{v}")).collect();
        if let Some(labels) = labels {
            record.push(labels[i].to_string());
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a feature CSV back; the label column is returned when present.
pub fn read_features_csv<R: Read>(reader: R) -> Result<(Vec<FeatureVector>, Option<Vec<u8>>)> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers().map_err(csv_err)?.clone();
    let has_label = match headers.len() {
        FEATURE_LEN => false,
        n if n == FEATURE_LEN + 1 && &headers[FEATURE_LEN] == "label" => true,
        n => {
            return Err(Error::format(format!(
                "expected {FEATURE_LEN} or {} columns, found {n}",
                FEATURE_LEN + 1
            )))
        }
    };
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != headers.len() {
            return Err(Error::format(format!(
                "line {line}: expected {} fields, found {}",
                headers.len(),
                record.len()
            )));
        }
        let mut values = [0.0; FEATURE_LEN];
        for (i, slot) in values.iter_mut().enumerate() {
            *slot = record[i]
                .parse()
                .map_err(|_| Error::format(format!("line {line}: bad float {:?}", &record[i])))?;
        }
        rows.push(FeatureVector::new(values)?);
        if has_label {
            let label: u8 = record[FEATURE_LEN]
                .parse()
                .map_err(|_| Error::format(format!("line {line}: bad label {:?}", &record[FEATURE_LEN])))?;
            labels.push(label);
        }
    }
    Ok((rows, if has_label { Some(labels) } else { None }))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_rows() -> Vec<FeatureVector> {
        (0..3)
            .map(|r| {
                let mut values = [0.0; FEATURE_LEN];
                for (i, v) in values.iter_mut().enumerate() {
                    *v = (r * 100 + i) as f64 / 7.0;
                }
                FeatureVector::new(values).unwrap()
            })
            .collect()
    }

    #[test]
    fn roundtrip_with_labels() {
        let rows = sample_rows();
        let labels = vec![0u8, 3, 5];
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &rows, Some(&labels)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("f0,f1,"));
        assert!(text.lines().next().unwrap().ends_with(",label"));
        let (rows2, labels2) = read_features_csv(buf.as_slice()).unwrap();
        assert_eq!(rows2, rows);
        assert_eq!(labels2, Some(labels));
    }

    #[test]
    fn roundtrip_without_labels() {
        let rows = sample_rows();
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &rows, None).unwrap();
        let (rows2, labels2) = read_features_csv(buf.as_slice()).unwrap();
        assert_eq!(rows2, rows);
        assert_eq!(labels2, None);
    }

    #[test]
    fn bad_float_reports_line() {
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &sample_rows(), None).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text = text.replace("14.285714285714286", "not-a-number");
        let err = read_features_csv(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
