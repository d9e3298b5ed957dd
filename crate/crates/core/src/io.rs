//! CSV artifact writers and the matching readers.
//!
//! Numbers are serialized with the shortest representation that round-trips
//! to the same bits, so written artifacts re-parse losslessly and repeated
//! runs produce byte-identical files.

use crate::error::{Error, Result};
use crate::mfg::{DensityField, SpatialDensity};
use crate::seird::{Snapshot, Trajectory};
use crate::torus::{PeriodicGrid, RectGrid};
use std::fs;
use std::io::Write as _;
use std::path::Path;

fn open_writer(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
        }
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(std::io::BufWriter::new(file))
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn parse_f64(field: &str, path: &Path, line: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| {
        Error::config(format!(
            "{}:{line}: cannot parse `{field}` as a number",
            path.display()
        ))
    })
}

/// Write a spatial density as `x,mu_x`.
pub fn write_spatial_density(path: &Path, density: &SpatialDensity) -> Result<()> {
    let mut w = open_writer(path)?;
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "x,mu_x")?;
        for (i, &v) in density.values.iter().enumerate() {
            writeln!(w, "{},{}", density.grid.node(i), v)?;
        }
        w.flush()
    };
    run().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a spatial density written by [`write_spatial_density`] (or any
/// two-column `x,value` CSV on a uniform torus grid).
pub fn read_spatial_density(path: &Path) -> Result<(PeriodicGrid, Vec<f64>)> {
    let content = read_to_string(path)?;
    let mut values = Vec::new();
    let mut xs = Vec::new();
    for (ln, line) in content.lines().enumerate() {
        if ln == 0 || line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(x), Some(v)) = (parts.next(), parts.next()) else {
            return Err(Error::config(format!(
                "{}:{}: expected two columns",
                path.display(),
                ln + 1
            )));
        };
        xs.push(parse_f64(x, path, ln + 1)?);
        values.push(parse_f64(v, path, ln + 1)?);
    }
    let n = values.len();
    let grid = PeriodicGrid::new(n)?;
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.node(i)).abs() > 1e-9 {
            return Err(Error::config(format!(
                "{}: node {i} at x = {x} is not on the uniform grid of size {n}",
                path.display()
            )));
        }
    }
    Ok((grid, values))
}

/// Write a joint density as `x,h,mu`, row-major in x then h.
pub fn write_density_field(path: &Path, density: &DensityField) -> Result<()> {
    let mut w = open_writer(path)?;
    let g = &density.grid;
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "x,h,mu")?;
        for i in 0..g.n_x() {
            for j in 0..g.n_h() {
                writeln!(
                    w,
                    "{},{},{}",
                    g.spatial.node(i),
                    g.h_node(j),
                    density.values[g.idx(i, j)]
                )?;
            }
        }
        w.flush()
    };
    run().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a joint density written by [`write_density_field`].
pub fn read_density_field(path: &Path) -> Result<DensityField> {
    let content = read_to_string(path)?;
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for (ln, line) in content.lines().enumerate() {
        if ln == 0 || line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(x), Some(h), Some(v)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::config(format!(
                "{}:{}: expected three columns",
                path.display(),
                ln + 1
            )));
        };
        rows.push((
            parse_f64(x, path, ln + 1)?,
            parse_f64(h, path, ln + 1)?,
            parse_f64(v, path, ln + 1)?,
        ));
    }
    // infer n_h from the run length of the first x block
    let first_x = rows.first().map(|r| r.0).unwrap_or(0.0);
    let n_h = rows.iter().take_while(|r| r.0 == first_x).count();
    if n_h < 2 || !rows.len().is_multiple_of(n_h) {
        return Err(Error::config(format!(
            "{}: malformed density block structure",
            path.display()
        )));
    }
    let n_x = rows.len() / n_h;
    let h_max = rows[n_h - 1].1;
    let grid = RectGrid::new(PeriodicGrid::new(n_x)?, n_h, h_max)?;
    let mut values = vec![0.0; grid.len()];
    for (k, row) in rows.iter().enumerate() {
        let i = k / n_h;
        let j = k % n_h;
        if (row.0 - grid.spatial.node(i)).abs() > 1e-9 || (row.1 - grid.h_node(j)).abs() > 1e-9 {
            return Err(Error::config(format!(
                "{}: row {k} at ({}, {}) is off the inferred grid",
                path.display(),
                row.0,
                row.1
            )));
        }
        values[grid.idx(i, j)] = row.2;
    }
    Ok(DensityField { grid, values })
}

/// Write the long-form trajectory: `t,x,S,E,I,R,D` per node and snapshot.
pub fn write_trajectory(path: &Path, trajectory: &Trajectory) -> Result<()> {
    let mut w = open_writer(path)?;
    let g = &trajectory.grid;
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "t,x,S,E,I,R,D")?;
        for snap in &trajectory.snapshots {
            for k in 0..g.n_x() {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    snap.t,
                    g.node(k),
                    snap.s[k],
                    snap.e[k],
                    snap.i[k],
                    snap.r[k],
                    snap.d[k]
                )?;
            }
        }
        w.flush()
    };
    run().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a long-form trajectory back. Aggregates are recomputed from the
/// fields with the same quadrature the simulator uses.
pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let content = read_to_string(path)?;
    let mut rows: Vec<(f64, f64, [f64; 5])> = Vec::new();
    for (ln, line) in content.lines().enumerate() {
        if ln == 0 || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 7 {
            return Err(Error::config(format!(
                "{}:{}: expected seven columns",
                path.display(),
                ln + 1
            )));
        }
        let mut nums = [0.0; 7];
        for (k, p) in parts.iter().enumerate() {
            nums[k] = parse_f64(p, path, ln + 1)?;
        }
        rows.push((
            nums[0],
            nums[1],
            [nums[2], nums[3], nums[4], nums[5], nums[6]],
        ));
    }
    let first_t = rows.first().map(|r| r.0).unwrap_or(0.0);
    let n_x = rows.iter().take_while(|r| r.0 == first_t).count();
    if n_x < 8 || !rows.len().is_multiple_of(n_x) {
        return Err(Error::config(format!(
            "{}: malformed trajectory block structure",
            path.display()
        )));
    }
    let grid = PeriodicGrid::new(n_x)?;
    let mut trajectory = Trajectory {
        grid: grid.clone(),
        snapshots: Vec::new(),
        aggregates: Vec::new(),
    };
    for chunk in rows.chunks(n_x) {
        let t = chunk[0].0;
        let mut snap = Snapshot {
            t,
            s: vec![0.0; n_x],
            e: vec![0.0; n_x],
            i: vec![0.0; n_x],
            r: vec![0.0; n_x],
            d: vec![0.0; n_x],
        };
        for (k, row) in chunk.iter().enumerate() {
            if row.0 != t {
                return Err(Error::config(format!(
                    "{}: ragged snapshot at t = {t}",
                    path.display()
                )));
            }
            snap.s[k] = row.2[0];
            snap.e[k] = row.2[1];
            snap.i[k] = row.2[2];
            snap.r[k] = row.2[3];
            snap.d[k] = row.2[4];
        }
        trajectory.aggregates.push(crate::seird::Aggregate {
            t,
            s: grid.integrate(&snap.s),
            e: grid.integrate(&snap.e),
            i: grid.integrate(&snap.i),
            r: grid.integrate(&snap.r),
            d: grid.integrate(&snap.d),
        });
        trajectory.snapshots.push(snap);
    }
    Ok(trajectory)
}

/// Write one compartment's space-time matrix: the first row holds the x
/// coordinates (corner cell is the literal `t`), each following row is a
/// snapshot prefixed by its time.
pub fn write_matrix(
    path: &Path,
    trajectory: &Trajectory,
    field: impl Fn(&Snapshot) -> &[f64],
) -> Result<()> {
    let mut w = open_writer(path)?;
    let g = &trajectory.grid;
    let mut run = || -> std::io::Result<()> {
        write!(w, "t")?;
        for k in 0..g.n_x() {
            write!(w, ",{}", g.node(k))?;
        }
        writeln!(w)?;
        for snap in &trajectory.snapshots {
            write!(w, "{}", snap.t)?;
            for v in field(snap) {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        w.flush()
    };
    run().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Times, x coordinates, and snapshot rows of a space-time matrix.
pub type MatrixData = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// Read a space-time matrix back as (times, x coordinates, rows).
pub fn read_matrix(path: &Path) -> Result<MatrixData> {
    let content = read_to_string(path)?;
    let mut lines = content.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::config(format!("{}: empty matrix", path.display())));
    };
    let xs: Vec<f64> = header
        .split(',')
        .skip(1)
        .map(|s| parse_f64(s, path, 1))
        .collect::<Result<_>>()?;
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let t = parse_f64(parts.next().unwrap_or(""), path, ln + 1)?;
        let row: Vec<f64> = parts
            .map(|s| parse_f64(s, path, ln + 1))
            .collect::<Result<_>>()?;
        if row.len() != xs.len() {
            return Err(Error::config(format!(
                "{}:{}: row width {} does not match {} coordinates",
                path.display(),
                ln + 1,
                row.len(),
                xs.len()
            )));
        }
        times.push(t);
        rows.push(row);
    }
    Ok((times, xs, rows))
}

/// Read a two-column `x,A` amenity profile.
pub fn read_amenity(path: &Path) -> Result<Vec<f64>> {
    let (_, values) = read_spatial_density(path)?;
    Ok(values)
}
