//! Two-column CSV serialization of sampled kernels.
//!
//! Layout: a `#`-prefixed header line carrying the physical metadata (G, the
//! mollifier kind, σ and the definiteness flag), a column-name line, then one
//! `k,value` row per grid point.  Floats are written with 17 significant
//! digits, which round-trips every finite double bit-exactly.

use super::{FourierKernel, KernelError};

/// Physical provenance carried in the CSV header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KernelMeta {
    pub g: Option<f64>,
    pub kind: Option<String>,
    pub sigma: Option<f64>,
}

/// Format a float with enough digits to reparse bit-exactly.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl FourierKernel {
    pub fn to_csv(&self, meta: &KernelMeta) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# G={} kind={} sigma={} definite={}\n",
            meta.g.map_or("none".to_string(), fmt_f64),
            meta.kind.as_deref().unwrap_or("none"),
            meta.sigma.map_or("none".to_string(), fmt_f64),
            self.definiteness(),
        ));
        out.push_str("k,value\n");
        for (k, v) in self.k_grid().iter().zip(self.values().iter()) {
            out.push_str(&fmt_f64(*k));
            out.push(',');
            out.push_str(&fmt_f64(*v));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<(FourierKernel, KernelMeta), KernelError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| KernelError::MalformedCsv("empty input".into()))?;
        let meta = parse_header(header)?;
        let columns = lines
            .next()
            .ok_or_else(|| KernelError::MalformedCsv("missing column line".into()))?;
        if columns.trim() != "k,value" {
            return Err(KernelError::MalformedCsv(format!(
                "expected column line `k,value`, got `{columns}`"
            )));
        }
        let mut k = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (a, b) = line.split_once(',').ok_or_else(|| {
                KernelError::MalformedCsv(format!("row {} has no comma: `{line}`", i + 3))
            })?;
            let ki: f64 = a.trim().parse().map_err(|_| {
                KernelError::MalformedCsv(format!("row {}: bad wave number `{a}`", i + 3))
            })?;
            let vi: f64 = b.trim().parse().map_err(|_| {
                KernelError::MalformedCsv(format!("row {}: bad value `{b}`", i + 3))
            })?;
            k.push(ki);
            values.push(vi);
        }
        let kernel = FourierKernel::new(k, values)?;
        Ok((kernel, meta))
    }
}

fn parse_header(line: &str) -> Result<KernelMeta, KernelError> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| KernelError::MalformedCsv("header must start with `#`".into()))?;
    let mut meta = KernelMeta::default();
    for field in body.split_whitespace() {
        let Some((key, value)) = field.split_once('=') else { continue };
        match key {
            "G" if value != "none" => {
                meta.g = Some(value.parse().map_err(|_| {
                    KernelError::MalformedCsv(format!("bad G in header: `{value}`"))
                })?);
            }
            "kind" if value != "none" => meta.kind = Some(value.to_string()),
            "sigma" if value != "none" => {
                meta.sigma = Some(value.parse().map_err(|_| {
                    KernelError::MalformedCsv(format!("bad sigma in header: `{value}`"))
                })?);
            }
            _ => {}
        }
    }
    Ok(meta)
}
