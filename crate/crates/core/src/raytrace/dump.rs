//! Ray-path dump: one CSV row per traced segment.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{RayPathTree, SegmentKind};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpRow {
    pub frame: usize,
    pub observation: usize,
    pub node: usize,
    /// Empty for the root segment.
    pub parent: Option<usize>,
    pub kind: SegmentKind,
    pub order: usize,
    pub ox: f64,
    pub oy: f64,
    pub oz: f64,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub length: f64,
}

pub fn dump_rows(frame: usize, trees: &[RayPathTree]) -> impl Iterator<Item = DumpRow> + '_ {
    trees.iter().flat_map(move |tree| {
        tree.nodes.iter().enumerate().map(move |(i, node)| {
            let s = &node.segment;
            DumpRow {
                frame,
                observation: tree.observation,
                node: i,
                parent: node.parent,
                kind: s.kind,
                order: s.order,
                ox: s.origin.x,
                oy: s.origin.y,
                oz: s.origin.z,
                dx: s.direction.x,
                dy: s.direction.y,
                dz: s.direction.z,
                length: s.length,
            }
        })
    })
}

/// Writes the header and all segments of the given frames.
pub fn write_ray_dump<'a, W: Write>(
    frames: impl IntoIterator<Item = (usize, &'a [RayPathTree])>,
    out: W,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for (frame, trees) in frames {
        for row in dump_rows(frame, trees) {
            writer.serialize(row)?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn read_ray_dump<R: Read>(input: R) -> Result<Vec<DumpRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let rows = reader.deserialize().collect::<Result<Vec<DumpRow>, _>>()?;
    Ok(rows)
}
