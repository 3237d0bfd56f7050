//! Shape descriptions: JSON shape files and a few named built-in shapes.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "primitives": [
//!     { "type": "ball", "center": [0, 0, 0], "radius": 1 },
//!     { "type": "box", "min": [-1, -1, -1], "max": [1, 1, 1] },
//!     { "type": "cylinder", "start": [0, 0, -1], "end": [0, 0, 1], "radius": 0.5 },
//!     { "type": "union", "children": [ ... ] }
//!   ]
//! }
//! ```
//!
//! Several top-level primitives form their union.

use std::path::Path;

use rieszcap::{Shape64, Solid};
use serde::Deserialize;

use crate::error::{io_err, json_err, CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeFile {
    dimension: usize,
    primitives: Vec<Primitive>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Primitive {
    Ball { center: Vec<f64>, radius: f64 },
    Box { min: Vec<f64>, max: Vec<f64> },
    Cylinder { start: Vec<f64>, end: Vec<f64>, radius: f64 },
    Union { children: Vec<Primitive> },
}

struct Ctx<'a> {
    source: &'a str,
    d: usize,
}

impl Ctx<'_> {
    fn field(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Field {
            path: self.source.to_string(),
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn coords(&self, field: &str, v: &[f64]) -> CliResult<()> {
        if v.len() != self.d {
            return Err(self.field(field, format!("expected {} coordinates, got {}", self.d, v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(self.field(field, "coordinates must be finite"));
        }
        Ok(())
    }

    fn positive(&self, field: &str, x: f64) -> CliResult<()> {
        if x > 0.0 && x.is_finite() {
            Ok(())
        } else {
            Err(self.field(field, format!("must be positive, got {x}")))
        }
    }

    fn build(&self, p: &Primitive, at: &str) -> CliResult<Shape64> {
        let wrap = |e: rieszcap::Error| self.field(at, e.to_string());
        match p {
            Primitive::Ball { center, radius } => {
                self.coords(&format!("{at}.center"), center)?;
                self.positive(&format!("{at}.radius"), *radius)?;
                Shape64::ball(center.clone(), *radius).map_err(wrap)
            }
            Primitive::Box { min, max } => {
                self.coords(&format!("{at}.min"), min)?;
                self.coords(&format!("{at}.max"), max)?;
                if let Some(k) = (0..self.d).find(|&k| min[k] >= max[k]) {
                    return Err(self.field(&format!("{at}.max"), format!("must exceed min in coordinate {k}")));
                }
                Shape64::cuboid(min.clone(), max.clone()).map_err(wrap)
            }
            Primitive::Cylinder { start, end, radius } => {
                self.coords(&format!("{at}.start"), start)?;
                self.coords(&format!("{at}.end"), end)?;
                self.positive(&format!("{at}.radius"), *radius)?;
                Shape64::cylinder(start.clone(), end.clone(), *radius).map_err(wrap)
            }
            Primitive::Union { children } => {
                if children.is_empty() {
                    return Err(self.field(&format!("{at}.children"), "union needs at least one child"));
                }
                let parts = children
                    .iter()
                    .enumerate()
                    .map(|(k, c)| self.build(c, &format!("{at}.children[{k}]")))
                    .collect::<CliResult<Vec<_>>>()?;
                Shape64::union(parts).map_err(wrap)
            }
        }
    }
}

/// Parses shape-file text; `source` names it in error messages.
pub fn parse_shape(text: &str, source: &str) -> CliResult<Shape64> {
    let file: ShapeFile = serde_json::from_str(text).map_err(|e| json_err(source, e))?;
    let ctx = Ctx {
        source,
        d: file.dimension,
    };
    if file.dimension < 2 {
        return Err(ctx.field("dimension", format!("must be at least 2, got {}", file.dimension)));
    }
    if file.primitives.is_empty() {
        return Err(ctx.field("primitives", "at least one primitive is required"));
    }
    let mut parts = file
        .primitives
        .iter()
        .enumerate()
        .map(|(k, p)| ctx.build(p, &format!("primitives[{k}]")))
        .collect::<CliResult<Vec<_>>>()?;
    if parts.len() == 1 {
        Ok(parts.remove(0))
    } else {
        Shape64::union(parts).map_err(|e| ctx.field("primitives", e.to_string()))
    }
}

pub fn load_shape_file(path: &Path) -> CliResult<Shape64> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_shape(&text, &path.display().to_string())
}

/// Built-in shapes, all centred at the origin:
/// `ball` (unit ball), `cube` (unit cube), `coin:<half-thickness>` (unit disk
/// across the first axis), `square` / `hollow-square:<wall>` (unit square,
/// plane only) and `bar:<half-length>`.
pub fn builtin_shape(spec: &str, d: usize) -> CliResult<Shape64> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let param = |default: Option<f64>| -> CliResult<f64> {
        match arg {
            Some(a) => a
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("shape `{spec}`: cannot parse parameter `{a}`"))),
            None => default.ok_or_else(|| CliError::Usage(format!("shape `{name}` needs a parameter, e.g. `{name}:0.01`"))),
        }
    };
    let plane_only = |s: CliResult<Shape64>| {
        if d != 2 {
            Err(CliError::Usage(format!("shape `{name}` is planar; use --dim 2")))
        } else {
            s
        }
    };
    let shape = match name {
        "ball" => Shape64::unit_ball(d)?,
        "cube" => Shape64::centered_cube(d, 1.0)?,
        "coin" => Shape64::coin(d, 1.0, param(Some(0.01))?)?,
        "square" => plane_only(Shape64::centered_cube(2, 1.0).map_err(Into::into))?,
        "hollow-square" => plane_only(Shape64::hollow_square(1.0, param(Some(0.01))?).map_err(Into::into))?,
        "bar" => Shape64::bar(d, param(None)?)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown built-in shape `{other}` (ball, cube, coin:<h>, square, hollow-square:<wall>, bar:<half-length>)"
            )))
        }
    };
    Ok(shape)
}

/// `builtin:<name>` or a path to a shape file.
pub fn resolve_shape(source: &str, d: usize) -> CliResult<Shape64> {
    match source.strip_prefix("builtin:") {
        Some(spec) => builtin_shape(spec, d),
        None => load_shape_file(Path::new(source)),
    }
}

/// Centre and radius when the shape is a single ball.
pub fn as_single_ball(shape: &Shape64) -> Option<(Vec<f64>, f64)> {
    match shape.solid() {
        Solid::Ball { center, radius } => Some((center.clone(), *radius)),
        Solid::Union(children) if children.len() == 1 => match &children[0] {
            Solid::Ball { center, radius } => Some((center.clone(), *radius)),
            _ => None,
        },
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_primitive_kinds() {
        let text = r#"{
            "dimension": 3,
            "primitives": [
                {"type": "ball", "center": [0, 0, 0], "radius": 1},
                {"type": "box", "min": [1, 1, 1], "max": [2, 2, 2]},
                {"type": "union", "children": [
                    {"type": "cylinder", "start": [0, 0, 3], "end": [0, 0, 4], "radius": 0.5}
                ]}
            ]
        }"#;
        let s = parse_shape(text, "t.json").unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.primitives().len(), 3);
        assert_eq!(s.distance(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_shape("{\n  \"dimension\": 3,\n  \"primitives\": [ { \"type\": \"ball\" ,, } ]\n}", "bad.json").unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let err = parse_shape(
            r#"{"dimension": 3, "primitives": [{"type": "ball", "center": [0, 0], "radius": 1}]}"#,
            "s.json",
        )
        .unwrap_err();
        assert!(err.to_string().contains("primitives[0].center"), "{err}");
        let err = parse_shape(
            r#"{"dimension": 2, "primitives": [{"type": "box", "min": [0, 0], "max": [1, -1]}]}"#,
            "s.json",
        )
        .unwrap_err();
        assert!(err.to_string().contains("primitives[0].max"), "{err}");
        assert!(parse_shape(r#"{"dimension": 3, "primitives": []}"#, "s.json").is_err());
    }

    #[test]
    fn builtins() {
        assert!(as_single_ball(&builtin_shape("ball", 4).unwrap()).is_some());
        assert!(as_single_ball(&builtin_shape("cube", 3).unwrap()).is_none());
        assert_eq!(builtin_shape("hollow-square:0.01", 2).unwrap().primitives().len(), 4);
        assert!(builtin_shape("hollow-square", 3).is_err());
        assert!(builtin_shape("bar", 3).is_err());
        assert!(builtin_shape("teapot", 3).is_err());
    }
}
