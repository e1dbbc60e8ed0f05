//! Observation stream file: one CSV row per direction of arrival.

use std::io::{Read, Write};

use nalgebra::{Quaternion, UnitQuaternion};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::raytrace::Observation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ObservationRow {
    frame: usize,
    time_s: f64,
    lx: f64,
    ly: f64,
    lz: f64,
    qw: f64,
    qx: f64,
    qy: f64,
    qz: f64,
    dx: f64,
    dy: f64,
    dz: f64,
}

pub fn write_observations<'a, W: Write>(
    observations: impl IntoIterator<Item = &'a Observation>,
    out: W,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for o in observations {
        let q = o.orientation.quaternion();
        writer.serialize(ObservationRow {
            frame: o.frame,
            time_s: o.time,
            lx: o.listener.x,
            ly: o.listener.y,
            lz: o.listener.z,
            qw: q.w,
            qx: q.i,
            qy: q.j,
            qz: q.k,
            dx: o.direction.x,
            dy: o.direction.y,
            dz: o.direction.z,
        })?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads an observation stream. Directions are re-normalized, so
/// hand-written files need not carry unit vectors.
pub fn read_observations<R: Read>(input: R) -> Result<Vec<Observation>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<ObservationRow>().enumerate() {
        let row = row?;
        let direction = Vec3::new(row.dx, row.dy, row.dz);
        if !(direction.norm() > 0.0) {
            return Err(Error::Config(format!(
                "observation row {} has a zero direction",
                i + 1
            )));
        }
        out.push(Observation {
            frame: row.frame,
            time: row.time_s,
            listener: Vec3::new(row.lx, row.ly, row.lz),
            orientation: UnitQuaternion::from_quaternion(Quaternion::new(
                row.qw, row.qx, row.qy, row.qz,
            )),
            direction: direction.normalize(),
        });
    }
    Ok(out)
}

/// Splits a stream into per-frame groups, ordered by frame id.
pub fn group_by_frame(observations: Vec<Observation>) -> Vec<(usize, Vec<Observation>)> {
    let mut groups: std::collections::BTreeMap<usize, Vec<Observation>> = Default::default();
    for o in observations {
        groups.entry(o.frame).or_default().push(o);
    }
    groups.into_iter().collect()
}
