use crate::error::Result;
use std::io::Write;
use std::path::Path;

pub const TABLE_HEADER: &str = "x_value,metric,mean,stderr,architecture,pattern,realizations,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x_value: f64,
    pub metric: String,
    pub mean: f64,
    pub stderr: f64,
    pub architecture: String,
    pub pattern: String,
    pub realizations: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{TABLE_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.x_value, r.metric, r.mean, r.stderr, r.architecture, r.pattern, r.realizations, r.seed
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Writes next to `path` and renames into place, so readers never see a
    /// partial table.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }

    /// Rows for `metric`, in table order.
    pub fn metric<'a>(&'a self, metric: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.metric == metric)
    }

    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        if lines.next()? != TABLE_HEADER {
            return None;
        }
        let rows = lines
            .filter(|l| !l.is_empty())
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                if f.len() != 8 {
                    return None;
                }
                Some(Row {
                    x_value: f[0].parse().ok()?,
                    metric: f[1].to_string(),
                    mean: f[2].parse().ok()?,
                    stderr: f[3].parse().ok()?,
                    architecture: f[4].to_string(),
                    pattern: f[5].to_string(),
                    realizations: f[6].parse().ok()?,
                    seed: f[7].parse().ok()?,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self { rows })
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::create_dir_all(dir)?;
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}
