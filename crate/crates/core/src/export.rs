//! JSON documents. Every floating-point number is written with 17
//! significant digits so output is bit-exact and stable across platforms.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::region::{HalfSpace, RatePolytope, Rates};

/// Pretty printer that writes `f64` values as `d.dddddddddddddddde±x`.
pub struct Sig17Formatter<'a>(PrettyFormatter<'a>);

impl Default for Sig17Formatter<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes any document with [`Sig17Formatter`].
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter::default());
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Region export: the half-spaces and, optionally, the sorted vertex list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDoc {
    pub halfspaces: Vec<HalfSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Rates>>,
}

impl RegionDoc {
    pub fn new(poly: &RatePolytope, with_vertices: bool) -> Result<Self> {
        let vertices = if with_vertices {
            Some(poly.vertices()?)
        } else {
            None
        };
        Ok(Self {
            halfspaces: poly.halfspaces.clone(),
            vertices,
        })
    }

    pub fn polytope(&self) -> RatePolytope {
        RatePolytope::new(self.halfspaces.clone())
    }
}

pub fn region_to_json(poly: &RatePolytope, with_vertices: bool) -> Result<String> {
    Ok(to_json(&RegionDoc::new(poly, with_vertices)?))
}

pub fn region_from_json(text: &str) -> Result<RegionDoc> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}
