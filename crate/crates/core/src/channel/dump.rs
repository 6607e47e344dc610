//! Tab-separated path dump for replaying channel draws elsewhere.
//!
//! One line per (realization, user, ray). Floats are written in Rust's
//! shortest round-trip form, so reading a dump back yields identical bits.

use super::{Path, PathSet};
use crate::error::{Error, Result};
use crate::Complex64;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

const HEADER: &str = "realization\tuser\tn\tm\tP_nm\talpha_re\talpha_im\tphi_rad";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumpRecord {
    pub realization: usize,
    pub user: usize,
    pub path: Path,
}

pub fn write_dump<W: Write>(mut out: W, records: &[DumpRecord]) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in records {
        let p = &r.path;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.realization, r.user, p.cluster, p.ray, p.power, p.alpha.re, p.alpha.im, p.phi
        )?;
    }
    Ok(())
}

pub fn read_dump<R: BufRead>(input: R) -> Result<Vec<DumpRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != HEADER {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "missing dump header".to_string(),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 8 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let int = |k: usize| {
            fields[k].trim().parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("field {}: {e}", k + 1),
            })
        };
        let float = |k: usize| {
            fields[k].trim().parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("field {}: {e}", k + 1),
            })
        };
        records.push(DumpRecord {
            realization: int(0)?,
            user: int(1)?,
            path: Path {
                cluster: int(2)?,
                ray: int(3)?,
                power: float(4)?,
                alpha: Complex64::new(float(5)?, float(6)?),
                phi: float(7)?,
            },
        });
    }
    Ok(records)
}

/// Groups records into per-(realization, user) path sets, keeping file order.
pub fn group_paths(records: &[DumpRecord]) -> BTreeMap<(usize, usize), PathSet> {
    let mut map: BTreeMap<(usize, usize), PathSet> = BTreeMap::new();
    for r in records {
        map.entry((r.realization, r.user))
            .or_default()
            .paths
            .push(r.path);
    }
    map
}
