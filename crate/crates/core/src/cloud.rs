//! Point clouds on S³ or in an R³ chart, with per-point parameter tags and
//! CSV / binary PLY export.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{Quaternion, UnitQuaternion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Frame {
    /// Unit quaternions `(w, x, y, z)`.
    S3,
    /// Stereographic images `vect(u) / (1 + scal(u))`.
    R3Stereo,
    /// Euler vectors `θ n`.
    R3Bch,
}

impl Frame {
    pub fn dim(self) -> usize {
        match self {
            Frame::S3 => 4,
            Frame::R3Stereo | Frame::R3Bch => 3,
        }
    }

    fn coord_names(self) -> &'static [&'static str] {
        match self {
            Frame::S3 => &["w", "x", "y", "z"],
            Frame::R3Stereo | Frame::R3Bch => &["x", "y", "z"],
        }
    }
}

/// Flat storage: point `i` is `coords[i*dim .. (i+1)*dim]` and its tags are
/// `tags[i*k .. (i+1)*k]` with `k = tag_names.len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub frame: Frame,
    pub coords: Vec<f64>,
    pub tag_names: Vec<String>,
    pub tags: Vec<f64>,
    /// Points removed by a projection (e.g. too close to a chart pole).
    pub dropped: usize,
}

impl PointCloud {
    pub fn new(frame: Frame, tag_names: Vec<String>) -> Self {
        PointCloud { frame, coords: Vec::new(), tag_names, tags: Vec::new(), dropped: 0 }
    }

    pub fn with_capacity(frame: Frame, tag_names: Vec<String>, n: usize) -> Self {
        let k = tag_names.len();
        PointCloud {
            frame,
            coords: Vec::with_capacity(n * frame.dim()),
            tags: Vec::with_capacity(n * k),
            tag_names,
            dropped: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.frame.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn push(&mut self, point: &[f64], tags: &[f64]) {
        debug_assert_eq!(point.len(), self.frame.dim());
        debug_assert_eq!(tags.len(), self.tag_names.len());
        self.coords.extend_from_slice(point);
        self.tags.extend_from_slice(tags);
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.frame.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn point_tags(&self, i: usize) -> &[f64] {
        let k = self.tag_names.len();
        &self.tags[i * k..(i + 1) * k]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.frame.dim())
    }

    /// The points of an S³ cloud as unit quaternions (not renormalized).
    pub fn quaternions(&self) -> Result<Vec<UnitQuaternion>> {
        if self.frame != Frame::S3 {
            return Err(Error::usage("cloud is not in the S3 frame"));
        }
        Ok(self
            .coords
            .chunks_exact(4)
            .map(|c| UnitQuaternion::new_unchecked(Quaternion::new(c[0], c[1], c[2], c[3])))
            .collect())
    }

    pub fn tag_index(&self, name: &str) -> Option<usize> {
        self.tag_names.iter().position(|t| t == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<&str> = self
            .frame
            .coord_names()
            .iter()
            .copied()
            .chain(self.tag_names.iter().map(String::as_str))
            .collect();
        w.write_record(&header)?;
        let mut row = Vec::with_capacity(header.len());
        for i in 0..self.len() {
            row.clear();
            row.extend(self.point(i).iter().chain(self.point_tags(i)).map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a cloud written by [`PointCloud::write_csv`]. The header
    /// decides the frame: `w,x,y,z` is S³; `x,y,z` needs `r3_frame`.
    pub fn read_csv<R: Read>(input: R, r3_frame: Frame) -> Result<PointCloud> {
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        let frame = if header.len() >= 4 && header[..4] == ["w", "x", "y", "z"] {
            Frame::S3
        } else if header.len() >= 3 && header[..3] == ["x", "y", "z"] && r3_frame != Frame::S3 {
            r3_frame
        } else {
            return Err(Error::usage("CSV header must start with w,x,y,z or x,y,z"));
        };
        let d = frame.dim();
        let mut cloud = PointCloud::new(frame, header[d..].to_vec());
        for rec in r.records() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::usage(format!("bad number in CSV: {e}")))?;
            if vals.len() != header.len() {
                return Err(Error::usage("CSV row length does not match header"));
            }
            cloud.push(&vals[..d], &vals[d..]);
        }
        Ok(cloud)
    }

    /// Binary little-endian PLY; every property is a `double`.
    pub fn write_ply<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header = String::from("ply\nformat binary_little_endian 1.0\n");
        header.push_str(&format!("comment frame {:?}\n", self.frame));
        header.push_str(&format!("element vertex {}\n", self.len()));
        for name in self.frame.coord_names().iter().copied().chain(self.tag_names.iter().map(String::as_str)) {
            header.push_str(&format!("property double {name}\n"));
        }
        header.push_str("end_header\n");
        out.write_all(header.as_bytes())?;
        let mut buf = Vec::with_capacity(8 * (self.frame.dim() + self.tag_names.len()));
        for i in 0..self.len() {
            buf.clear();
            for v in self.point(i).iter().chain(self.point_tags(i)) {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            out.write_all(&buf)?;
        }
        out.flush()?;
        Ok(())
    }
}
