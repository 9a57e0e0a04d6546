//! FNLS1 field container format.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! bytes 0..4   magic "FNLS"
//! u32          version (1)
//! u32          dim
//! u32          points per axis M
//! u32          component count
//! f64          box length L
//! f64          fractional order alpha
//! then per component: M^dim complex values as interleaved (re, im) f64,
//! row-major axis order.
//! ```

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use fnls_core::grid::{Field, Grid};
use fnls_core::Complex64;

pub const MAGIC: &[u8; 4] = b"FNLS";
pub const VERSION: u32 = 1;

#[derive(Debug)]
pub enum FnlsError {
    Io(io::Error),
    Format(String),
}

impl std::fmt::Display for FnlsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FnlsError::Io(e) => write!(f, "io error: {e}"),
            FnlsError::Format(msg) => write!(f, "bad FNLS1 data: {msg}"),
        }
    }
}

impl std::error::Error for FnlsError {}

impl From<io::Error> for FnlsError {
    fn from(e: io::Error) -> Self {
        FnlsError::Io(e)
    }
}

pub fn write_fields(
    path: &Path,
    fields: &[&Field],
    alpha: f64,
) -> Result<(), FnlsError> {
    let first = fields
        .first()
        .ok_or_else(|| FnlsError::Format("no components to write".into()))?;
    let grid = first.grid();
    for f in fields {
        if f.grid() != grid {
            return Err(FnlsError::Format("components on different grids".into()));
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    w.write_all(&(grid.points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&(fields.len() as u32).to_le_bytes())?;
    w.write_all(&grid.box_length().to_le_bytes())?;
    w.write_all(&alpha.to_le_bytes())?;
    for f in fields {
        for v in f.values() {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub struct FnlsFile {
    pub grid: Grid,
    pub components: Vec<Field>,
    pub alpha: f64,
}

pub fn read_fields(path: &Path) -> Result<FnlsFile, FnlsError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(FnlsError::Format("wrong magic".into()));
    }
    let mut u32buf = [0u8; 4];
    let mut read_u32 = |r: &mut BufReader<File>| -> Result<u32, FnlsError> {
        r.read_exact(&mut u32buf)?;
        Ok(u32::from_le_bytes(u32buf))
    };
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(FnlsError::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(&mut r)? as usize;
    let m = read_u32(&mut r)? as usize;
    let ncomp = read_u32(&mut r)? as usize;
    let mut f64buf = [0u8; 8];
    let mut read_f64 = |r: &mut BufReader<File>| -> Result<f64, FnlsError> {
        r.read_exact(&mut f64buf)?;
        Ok(f64::from_le_bytes(f64buf))
    };
    let length = read_f64(&mut r)?;
    let alpha = read_f64(&mut r)?;
    let grid = Grid::new(dim, m, length)
        .map_err(|e| FnlsError::Format(format!("invalid grid header: {e}")))?;
    if ncomp == 0 || ncomp > 16 {
        return Err(FnlsError::Format(format!("unreasonable component count {ncomp}")));
    }
    let n = grid.node_count();
    let mut components = Vec::with_capacity(ncomp);
    let mut payload = vec![0u8; n * 16];
    for _ in 0..ncomp {
        r.read_exact(&mut payload)?;
        let values: Vec<Complex64> = payload
            .chunks_exact(16)
            .map(|chunk| {
                let re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
                let im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        components.push(
            Field::new(grid.clone(), values)
                .map_err(|e| FnlsError::Format(format!("invalid component data: {e}")))?,
        );
    }
    // Trailing bytes indicate a corrupt file.
    let mut probe = [0u8; 1];
    match r.read(&mut probe)? {
        0 => Ok(FnlsFile { grid, components, alpha }),
        _ => Err(FnlsError::Format("trailing bytes after payload".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_two_components() {
        let grid = Grid::new(2, 16, 12.0).unwrap();
        let u1 = Field::from_fn(&grid, |x| Complex64::new(x[0], x[1] * 0.5));
        let u2 = Field::from_fn(&grid, |x| Complex64::new((-x[0] * x[0]).exp(), -x[1]));
        let dir = std::env::temp_dir().join("fnls1_round_trip_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.fnls1");
        write_fields(&path, &[&u1, &u2], 0.75).unwrap();
        let back = read_fields(&path).unwrap();
        assert_eq!(back.alpha, 0.75);
        assert_eq!(back.components.len(), 2);
        assert_eq!(back.grid, grid);
        for (a, b) in back.components[0].values().iter().zip(u1.values()) {
            assert_eq!(a, b);
        }
        for (a, b) in back.components[1].values().iter().zip(u2.values()) {
            assert_eq!(a, b);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn header_bytes_are_pinned() {
        let grid = Grid::new(1, 16, 16.0).unwrap();
        let u = Field::zeros(&grid);
        let dir = std::env::temp_dir().join("fnls1_header_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("zero.fnls1");
        write_fields(&path, &[&u], 0.5).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], b"FNLS");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1); // version
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1); // dim
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 16); // M
        assert_eq!(u32::from_le_bytes(bytes[16..20].try_into().unwrap()), 1); // comps
        assert_eq!(f64::from_le_bytes(bytes[20..28].try_into().unwrap()), 16.0); // L
        assert_eq!(f64::from_le_bytes(bytes[28..36].try_into().unwrap()), 0.5); // alpha
        assert_eq!(bytes.len(), 36 + 16 * 16);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn rejects_corrupt_headers() {
        let dir = std::env::temp_dir().join("fnls1_corrupt_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.fnls1");
        std::fs::write(&path, b"NOPE").unwrap();
        assert!(matches!(read_fields(&path), Err(FnlsError::Format(_)) | Err(FnlsError::Io(_))));
        std::fs::remove_dir_all(&dir).ok();
    }
}
