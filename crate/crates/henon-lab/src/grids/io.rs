use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{HenonError, Result};

use super::disk::{DiskFunction, DiskGrid};
use super::radial::{RadialFunction, RadialGrid};

/// Either kind of grid function, as stored on disk.
#[derive(Debug, Clone)]
pub enum GridFunction {
    Radial(RadialFunction),
    Disk(DiskFunction),
}

/// Save in the flat text format: one header line
/// `radial N m` or `disk 2 m_r m_t`, then one value per line.
pub fn save_function(path: &Path, f: &GridFunction) -> Result<()> {
    let mut out = String::new();
    match f {
        GridFunction::Radial(u) => {
            out.push_str(&format!("radial {} {}\n", u.grid.n, u.grid.m));
            for v in &u.values {
                out.push_str(&format!("{v:.17e}\n"));
            }
        }
        GridFunction::Disk(u) => {
            out.push_str(&format!("disk 2 {} {}\n", u.grid.m_r, u.grid.m_t));
            for v in &u.values {
                out.push_str(&format!("{v:.17e}\n"));
            }
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

pub fn load_function(path: &Path) -> Result<GridFunction> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| HenonError::Format("empty grid file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| HenonError::Format(format!("bad header field '{s}'")))
    };
    let mut values = Vec::new();
    for line in lines {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: f64 = t
            .parse()
            .map_err(|_| HenonError::Format(format!("bad value line '{t}'")))?;
        values.push(v);
    }
    match parts.as_slice() {
        ["radial", n, m] => {
            let n: u32 = n
                .parse()
                .map_err(|_| HenonError::Format(format!("bad dimension '{n}'")))?;
            let m = parse_usize(m)?;
            if values.len() != m {
                return Err(HenonError::Format(format!(
                    "expected {m} values, found {}",
                    values.len()
                )));
            }
            let grid = RadialGrid::new(n, m)?;
            Ok(GridFunction::Radial(RadialFunction { grid, values }))
        }
        ["disk", "2", m_r, m_t] => {
            let m_r = parse_usize(m_r)?;
            let m_t = parse_usize(m_t)?;
            if values.len() != m_r * m_t {
                return Err(HenonError::Format(format!(
                    "expected {} values, found {}",
                    m_r * m_t,
                    values.len()
                )));
            }
            let grid = DiskGrid::new(m_r, m_t)?;
            Ok(GridFunction::Disk(DiskFunction { grid, values }))
        }
        _ => Err(HenonError::Format(format!("unrecognized header '{header}'"))),
    }
}
