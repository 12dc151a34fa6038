//! On-disk formats: trajectory CSV and the little-endian binary snapshot.
//!
//! Binary layout: magic `SPGP`, `u32` version (= 1), `u32` kind, a
//! kind-specific header, then complex entries as `(re, im)` `f64` pairs.
//!
//! | kind | header | payload |
//! |---|---|---|
//! | 1 spinor field | `u32` dim, `u32` points per axis, `dim × f64` box lengths | `u` block, then `v` block |
//! | 2 many-body state | `u32` sites, `u32` particles, `u64` length | amplitudes in basis order |
//! | 3 density matrix | `u32` size | row-major entries |

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gp::GPTrajectory;
use crate::spinor::{Grid, SpinorField};

pub const MAGIC: &[u8; 4] = b"SPGP";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Snapshot {
    Field(SpinorField),
    ManyBody { sites: usize, particles: usize, amplitudes: Vec<C64> },
    Density(DMatrix<C64>),
}

impl Snapshot {
    fn kind(&self) -> u32 {
        match self {
            Snapshot::Field(_) => 1,
            Snapshot::ManyBody { .. } => 2,
            Snapshot::Density(_) => 3,
        }
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        put_u32(w, VERSION)?;
        put_u32(w, self.kind())?;
        match self {
            Snapshot::Field(f) => {
                put_u32(w, f.grid.dim() as u32)?;
                put_u32(w, f.grid.points_per_axis() as u32)?;
                for l in f.grid.box_length() {
                    w.write_all(&l.to_le_bytes())?;
                }
                put_complex(w, &f.u)?;
                put_complex(w, &f.v)?;
            }
            Snapshot::ManyBody { sites, particles, amplitudes } => {
                put_u32(w, *sites as u32)?;
                put_u32(w, *particles as u32)?;
                w.write_all(&(amplitudes.len() as u64).to_le_bytes())?;
                put_complex(w, amplitudes)?;
            }
            Snapshot::Density(m) => {
                if m.nrows() != m.ncols() {
                    return Err(Error::Structural("density matrix must be square".into()));
                }
                put_u32(w, m.nrows() as u32)?;
                let n = m.nrows();
                for i in 0..n {
                    for j in 0..n {
                        put_complex(w, &[m[(i, j)]])?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Structural("not a snapshot file (bad magic)".into()));
        }
        let version = get_u32(r)?;
        if version != VERSION {
            return Err(Error::Unsupported(format!("snapshot version {version}")));
        }
        match get_u32(r)? {
            1 => {
                let dim = get_u32(r)? as usize;
                let n = get_u32(r)? as usize;
                let lengths = (0..dim).map(|_| get_f64(r)).collect::<Result<Vec<_>>>()?;
                let grid = Grid::new(dim, n, lengths)?;
                let u = get_complex(r, grid.len())?;
                let v = get_complex(r, grid.len())?;
                Ok(Snapshot::Field(SpinorField::new(grid, u, v)?))
            }
            2 => {
                let sites = get_u32(r)? as usize;
                let particles = get_u32(r)? as usize;
                let mut len = [0u8; 8];
                r.read_exact(&mut len)?;
                let amplitudes = get_complex(r, u64::from_le_bytes(len) as usize)?;
                Ok(Snapshot::ManyBody { sites, particles, amplitudes })
            }
            3 => {
                let n = get_u32(r)? as usize;
                let entries = get_complex(r, n * n)?;
                Ok(Snapshot::Density(DMatrix::from_row_slice(n, n, &entries)))
            }
            k => Err(Error::Unsupported(format!("snapshot kind {k}"))),
        }
    }
}

fn put_u32(w: &mut impl Write, x: u32) -> Result<()> {
    w.write_all(&x.to_le_bytes())?;
    Ok(())
}

fn put_complex(w: &mut impl Write, zs: &[C64]) -> Result<()> {
    for z in zs {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn get_complex(r: &mut impl Read, n: usize) -> Result<Vec<C64>> {
    (0..n).map(|_| Ok(C64::new(get_f64(r)?, get_f64(r)?))).collect()
}

/// Columns `t,energy,pop_up,pop_down`, one row per recorded time.
pub fn write_trajectory_csv(w: &mut impl Write, traj: &GPTrajectory) -> Result<()> {
    writeln!(w, "t,energy,pop_up,pop_down")?;
    for ((t, e), (pu, pd)) in traj.times.iter().zip(&traj.energies).zip(&traj.populations) {
        writeln!(w, "{t},{e},{pu},{pd}")?;
    }
    Ok(())
}
