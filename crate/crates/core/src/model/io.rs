//! `buses.csv` / `edges.csv` readers and writers.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::path::Path;

use super::projection::planar;
use super::{preprocess, project, CoordKind, GridSnapshot, RawBusRecord};
use crate::geometry::Point;
use crate::{Error, Result};

const BUS_COLUMNS: [&str; 4] = ["bus_id", "lon", "lat", "voltage_pu"];
const EDGE_COLUMNS: [&str; 2] = ["from_bus", "to_bus"];

/// One row of `edges.csv`, with the line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdgeRecord {
    pub from_bus: String,
    pub to_bus: String,
    pub line: u64,
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn column_indexes<const N: usize>(
    path: &Path,
    reader: &mut csv::Reader<File>,
    wanted: [&str; N],
) -> Result<[usize; N]> {
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile { path: path.into() });
    }
    let mut out = [0usize; N];
    for (slot, name) in out.iter_mut().zip(wanted) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.into(),
                column: name.to_owned(),
            })?;
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Record {
            path: path.into(),
            line,
            message: format!("{other:?}"),
        },
    }
}

fn parse_f64(path: &Path, line: u64, field: &'static str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::ParseNumber {
            path: path.into(),
            line,
            field,
            value: raw.to_owned(),
        })
}

/// Reads `buses.csv` with lon/lat coordinates in degrees.
pub fn load_buses(path: impl AsRef<Path>) -> Result<Vec<RawBusRecord>> {
    load_buses_with(path, CoordKind::LonLat)
}

/// Reads `buses.csv`, interpreting the coordinate columns per `kind`.
pub fn load_buses_with(path: impl AsRef<Path>, kind: CoordKind) -> Result<Vec<RawBusRecord>> {
    let path = path.as_ref();
    let mut reader = open_reader(path)?;
    let [id_col, lon_col, lat_col, v_col] = column_indexes(path, &mut reader, BUS_COLUMNS)?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| row.get(i).unwrap_or("");
        let lon = parse_f64(path, line, "lon", field(lon_col))?;
        let lat = parse_f64(path, line, "lat", field(lat_col))?;
        let voltage = parse_f64(path, line, "voltage_pu", field(v_col))?;
        let bad = |message: String| Error::Record {
            path: path.into(),
            line,
            message,
        };
        if kind == CoordKind::LonLat {
            if !(-180.0..=180.0).contains(&lon) {
                return Err(bad(format!("longitude {lon} outside [-180, 180]")));
            }
            if !(-90.0..=90.0).contains(&lat) {
                return Err(bad(format!("latitude {lat} outside [-90, 90]")));
            }
        }
        if voltage < 0.0 {
            return Err(bad(format!("negative voltage {voltage}")));
        }
        out.push(RawBusRecord {
            bus_id: field(id_col).to_owned(),
            lon,
            lat,
            voltage,
        });
    }
    Ok(out)
}

pub fn load_edges(path: impl AsRef<Path>) -> Result<Vec<RawEdgeRecord>> {
    let path = path.as_ref();
    let mut reader = open_reader(path)?;
    let [from_col, to_col] = column_indexes(path, &mut reader, EDGE_COLUMNS)?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        out.push(RawEdgeRecord {
            from_bus: row.get(from_col).unwrap_or("").to_owned(),
            to_bus: row.get(to_col).unwrap_or("").to_owned(),
            line,
        });
    }
    Ok(out)
}

/// Loads, preprocesses and projects a bus/edge pair of files.
///
/// Edges touching a bus whose every record was filtered out are dropped;
/// edges naming a bus absent from `buses.csv` are an error.
pub fn load_snapshot(
    buses_path: impl AsRef<Path>,
    edges_path: Option<&Path>,
    kind: CoordKind,
) -> Result<GridSnapshot> {
    let raw = load_buses_with(buses_path, kind)?;
    let known: HashSet<&str> = raw.iter().map(|r| r.bus_id.as_str()).collect();
    let records = preprocess(&raw)?;
    let mut snap = match kind {
        CoordKind::LonLat => project(&records, None)?,
        CoordKind::Meters => {
            let pts: Vec<Point> = records.iter().map(|r| Point::new(r.lon, r.lat)).collect();
            planar(&records, &pts)?
        }
    };
    if let Some(edges_path) = edges_path {
        let index: HashMap<&str, usize> = snap
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut pairs = Vec::new();
        let mut dropped = 0usize;
        for e in load_edges(edges_path)? {
            let mut ends = [0usize; 2];
            let mut live = true;
            for (slot, name) in ends.iter_mut().zip([&e.from_bus, &e.to_bus]) {
                match index.get(name.as_str()) {
                    Some(&i) => *slot = i,
                    None if known.contains(name.as_str()) => live = false,
                    None => {
                        return Err(Error::UnknownBus {
                            path: edges_path.into(),
                            line: e.line,
                            bus: name.clone(),
                        })
                    }
                }
            }
            if live {
                pairs.push((ends[0], ends[1]));
            } else {
                dropped += 1;
            }
        }
        if dropped > 0 {
            log::warn!("dropped {dropped} edges touching zero-voltage buses");
        }
        snap.set_edges(pairs)?;
    }
    Ok(snap)
}

/// Writes `buses.csv` and `edges.csv` into `dir`.
///
/// Coordinates are written as lon/lat when the snapshot carries a
/// projection and as planar meters otherwise.
pub fn write_snapshot(snapshot: &GridSnapshot, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let bus_path = dir.join("buses.csv");
    let mut w = csv::Writer::from_path(&bus_path).map_err(|e| csv_error(&bus_path, e))?;
    let werr = |p: &Path, e: csv::Error| csv_error(p, e);
    w.write_record(BUS_COLUMNS).map_err(|e| werr(&bus_path, e))?;
    for b in &snapshot.buses {
        let (c0, c1) = match snapshot.projection {
            Some(proj) => proj.inverse(b.pos()),
            None => (b.x, b.y),
        };
        w.write_record([
            snapshot.names[b.id].clone(),
            c0.to_string(),
            c1.to_string(),
            b.voltage.to_string(),
        ])
        .map_err(|e| werr(&bus_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&bus_path, e))?;

    let edge_path = dir.join("edges.csv");
    let mut w = csv::Writer::from_path(&edge_path).map_err(|e| csv_error(&edge_path, e))?;
    w.write_record(EDGE_COLUMNS).map_err(|e| werr(&edge_path, e))?;
    for e in &snapshot.edges {
        w.write_record([&snapshot.names[e.from], &snapshot.names[e.to]])
            .map_err(|err| werr(&edge_path, err))?;
    }
    w.flush().map_err(|e| Error::io(&edge_path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn parses_rows_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "b.csv",
            "bus_id,lon,lat,voltage_pu\nb1,-122.2,37.75,1.02\nb0,-122.21,37.76,0.99\nb2,-122.19,37.74,1.0\n",
        );
        let recs = load_buses(&p).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0], RawBusRecord::new("b1", -122.2, 37.75, 1.02));
        assert_eq!(recs[1].bus_id, "b0");
    }

    #[test]
    fn bad_number_names_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "b.csv",
            "bus_id,lon,lat,voltage_pu\nb1,-122.2,37.75,1.02\nb2,-122.2,37.75,abc\n",
        );
        match load_buses(&p) {
            Err(Error::ParseNumber { line, field, value, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "voltage_pu");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column_and_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "b.csv", "bus_id,lon,lat\nb1,1,2\n");
        assert!(matches!(load_buses(&p), Err(Error::MissingColumn { column, .. }) if column == "voltage_pu"));
        let p = write(dir.path(), "e.csv", "");
        assert!(matches!(load_buses(&p), Err(Error::EmptyFile { .. })));
    }

    #[test]
    fn out_of_range_latitude() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "b.csv", "bus_id,lon,lat,voltage_pu\nb1,-122.2,97.0,1.0\n");
        assert!(matches!(load_buses(&p), Err(Error::Record { line: 2, .. })));
        // The same row is fine as planar meters.
        assert_eq!(load_buses_with(&p, CoordKind::Meters).unwrap().len(), 1);
    }

    #[test]
    fn snapshot_resolves_edges() {
        let dir = tempfile::tempdir().unwrap();
        let b = write(
            dir.path(),
            "b.csv",
            "bus_id,lon,lat,voltage_pu\na,-122.2,37.75,1.0\nb,-122.19,37.75,1.01\nc,-122.19,37.76,0.0\n",
        );
        let e = write(dir.path(), "e.csv", "from_bus,to_bus\na,b\nb,a\nb,c\n");
        let snap = load_snapshot(&b, Some(&e), CoordKind::LonLat).unwrap();
        assert_eq!(snap.len(), 2);
        assert_eq!(snap.edges.len(), 1);

        let e = write(dir.path(), "e2.csv", "from_bus,to_bus\na,zz\n");
        assert!(matches!(
            load_snapshot(&b, Some(&e), CoordKind::LonLat),
            Err(Error::UnknownBus { line: 2, .. })
        ));
    }

    #[test]
    fn write_then_read_back() {
        let snap = crate::model::gen_synthetic(40, 3, crate::model::Profile::Uniform).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_snapshot(&snap, dir.path()).unwrap();
        let back = load_snapshot(
            dir.path().join("buses.csv"),
            Some(&dir.path().join("edges.csv")),
            CoordKind::LonLat,
        )
        .unwrap();
        assert_eq!(back.len(), snap.len());
        assert_eq!(back.edges, snap.edges);
        assert_eq!(back.voltages(), snap.voltages());
        // Re-projection uses the file's own centroid, so only relative
        // distances are comparable.
        let d0 = snap.buses[0].pos().dist(snap.buses[7].pos());
        let d1 = back.buses[0].pos().dist(back.buses[7].pos());
        assert!((d0 - d1).abs() / d0 < 1e-4);
    }
}
