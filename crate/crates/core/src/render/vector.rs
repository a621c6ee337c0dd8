use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{hex_color, ColorMap, LINE_GRAY};
use crate::geometry::{Extent, Point};
use crate::model::Projection;
use crate::tessellation::CellStats;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Counter-clockwise ring without a repeated closing vertex.
    Polygon(Vec<Point>),
    Circle { center: Point, radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFeature {
    pub shape: Shape,
    /// Value used for the fill color.
    pub value: f64,
    pub stats: Option<CellStats>,
    pub level: Option<u8>,
    pub bus: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorFormat {
    Svg,
    GeoJson,
}

impl FromStr for VectorFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(VectorFormat::Svg),
            "geojson" | "json" => Ok(VectorFormat::GeoJson),
            other => Err(Error::invalid(format!("unknown vector format '{other}'"))),
        }
    }
}

/// Serializes features in the requested format. `lines` are drawn in SVG
/// only; GeoJSON coordinates are lon/lat when a projection is given.
pub fn encode_vector(
    features: &[VectorFeature],
    lines: &[(Point, Point)],
    format: VectorFormat,
    map: &ColorMap,
    projection: Option<&Projection>,
) -> Result<String> {
    match format {
        VectorFormat::Svg => encode_svg(features, lines, map),
        VectorFormat::GeoJson => encode_geojson(features, projection),
    }
}

pub fn write_vector(
    features: &[VectorFeature],
    lines: &[(Point, Point)],
    path: &Path,
    format: VectorFormat,
    map: &ColorMap,
    projection: Option<&Projection>,
) -> Result<()> {
    let text = encode_vector(features, lines, format, map, projection)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn feature_extent(features: &[VectorFeature], lines: &[(Point, Point)]) -> Option<Extent> {
    let mut pts = Vec::new();
    for f in features {
        match &f.shape {
            Shape::Polygon(ring) => pts.extend(ring.iter().copied()),
            Shape::Circle { center, radius } => {
                pts.push(Point::new(center.x - radius, center.y - radius));
                pts.push(Point::new(center.x + radius, center.y + radius));
            }
        }
    }
    for &(a, b) in lines {
        pts.push(a);
        pts.push(b);
    }
    Extent::from_points(pts)
}

/// Meters with y flipped so north is up in the viewer.
pub fn encode_svg(features: &[VectorFeature], lines: &[(Point, Point)], map: &ColorMap) -> Result<String> {
    map.validate()?;
    let e = feature_extent(features, lines).unwrap_or(Extent {
        min_x: 0.0,
        min_y: 0.0,
        max_x: 1.0,
        max_y: 1.0,
    });
    let (w, h) = (e.width().max(1e-9), e.height().max(1e-9));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        e.min_x, -e.max_y, w, h
    );
    for f in features {
        let fill = hex_color(map.color(f.value));
        match &f.shape {
            Shape::Polygon(ring) => {
                let mut d = String::new();
                for (i, p) in ring.iter().enumerate() {
                    let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, p.x, -p.y);
                }
                d.push('Z');
                let _ = writeln!(s, r#"<path d="{d}" fill="{fill}" stroke="none"/>"#);
            }
            Shape::Circle { center, radius } => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}" stroke="none"/>"#,
                    center.x, -center.y, radius
                );
            }
        }
    }
    let stroke = hex_color(LINE_GRAY);
    for (a, b) in lines {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            a.x, -a.y, b.x, -b.y
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn encode_geojson(features: &[VectorFeature], projection: Option<&Projection>) -> Result<String> {
    let coord = |p: &Point| -> Value {
        match projection {
            Some(proj) => {
                let (lon, lat) = proj.inverse(*p);
                json!([lon, lat])
            }
            None => json!([p.x, p.y]),
        }
    };
    let items: Vec<Value> = features
        .iter()
        .map(|f| {
            let geometry = match &f.shape {
                Shape::Polygon(ring) => {
                    let mut closed: Vec<Value> = ring.iter().map(coord).collect();
                    if let Some(first) = ring.first() {
                        closed.push(coord(first));
                    }
                    json!({"type": "Polygon", "coordinates": [closed]})
                }
                Shape::Circle { center, .. } => json!({"type": "Point", "coordinates": coord(center)}),
            };
            let mut props = serde_json::Map::new();
            props.insert("value".into(), json!(f.value));
            if let Some(s) = f.stats {
                props.insert("mean".into(), json!(s.mean));
                props.insert("sd".into(), json!(s.sd));
                props.insert("count".into(), json!(s.count));
            }
            if let Some(l) = f.level {
                props.insert("level".into(), json!(l));
            }
            if let Some(b) = f.bus {
                props.insert("bus".into(), json!(b));
            }
            if let Shape::Circle { radius, .. } = f.shape {
                props.insert("radius_m".into(), json!(radius));
            }
            json!({"type": "Feature", "geometry": geometry, "properties": props})
        })
        .collect();
    let doc = json!({"type": "FeatureCollection", "features": items});
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Encode(e.to_string()))
}
