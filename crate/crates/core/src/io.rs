//! JSON file formats and deterministic report serialization.
//!
//! - body: `{"dim": d, "vertices": [[...], ...]}`
//! - group: `{"dim": d, "kind": "linear" | "affine", "generators": [{"matrix": [[...]], "offset": [...]}], "cap": 256}`
//! - formal difference: `{"pos": <body>, "neg": <body>}`
//! - extension problem: `{"group": <group>, "points": [...], "metric": [[...]],
//!   "permutations": {"<element>": [...]}, "subset": [...], "f": {"<point>": <body>}}`
//!
//! Floats are written with 17 significant digits, enough to round-trip.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::body::{hull, ConvexBody};
use crate::error::{Error, Result};
use crate::extension::{build_gspace, ExtensionProblem};
use crate::group::{build_group, ActionKind, GroupAction, DEFAULT_CAP};
use crate::radstrom::FormalDifference;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl From<&ConvexBody> for BodyFile {
    fn from(a: &ConvexBody) -> Self {
        Self {
            dim: a.dim(),
            vertices: a.vertices().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub offset: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub dim: usize,
    pub kind: ActionKind,
    pub generators: Vec<GeneratorFile>,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferenceFile {
    pub pos: BodyFile,
    pub neg: BodyFile,
}

/// Point ids may be written as strings or numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointId {
    Name(String),
    Number(serde_json::Number),
}

impl PointId {
    pub fn key(&self) -> String {
        match self {
            Self::Name(s) => s.clone(),
            Self::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub group: GroupFile,
    pub points: Vec<PointId>,
    pub metric: Vec<Vec<f64>>,
    pub permutations: BTreeMap<String, Vec<usize>>,
    pub subset: Vec<PointId>,
    pub f: BTreeMap<String, BodyFile>,
}

fn invalid(path: &str, field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ValidationError {
        path: path.to_string(),
        field: field.into(),
        message: message.into(),
    }
}

/// Deserializes `text`, reporting the JSON path of the first mismatch.
pub fn parse_json<T: DeserializeOwned>(path: &str, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let message = if at == "." {
            e.inner().to_string()
        } else {
            format!("{at}: {}", e.inner())
        };
        Error::ParseError {
            path: path.to_string(),
            message,
        }
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&path.display().to_string(), &read_text(path)?)
}

impl BodyFile {
    /// Validates shapes and takes the hull.
    pub fn to_body(&self, path: &str, field: &str) -> Result<ConvexBody> {
        if self.dim == 0 {
            return Err(invalid(path, format!("{field}dim"), "dimension must be positive"));
        }
        if self.vertices.is_empty() {
            return Err(invalid(path, format!("{field}vertices"), "at least one vertex is required"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dim {
                return Err(invalid(
                    path,
                    format!("{field}vertices[{i}]"),
                    format!("expected {} coordinates, found {}", self.dim, v.len()),
                ));
            }
        }
        hull(self.vertices.clone())
    }
}

impl GroupFile {
    pub fn to_group(&self, path: &str, field: &str) -> Result<GroupAction> {
        let d = self.dim;
        if d == 0 {
            return Err(invalid(path, format!("{field}dim"), "dimension must be positive"));
        }
        if self.generators.is_empty() {
            return Err(invalid(path, format!("{field}generators"), "at least one generator is required"));
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let at = format!("{field}generators[{i}]");
            if g.matrix.len() != d || g.matrix.iter().any(|r| r.len() != d) {
                return Err(invalid(path, format!("{at}.matrix"), format!("expected a {d}x{d} matrix")));
            }
            let offset = g.offset.clone().unwrap_or_else(|| vec![0.0; d]);
            if offset.len() != d {
                return Err(invalid(path, format!("{at}.offset"), format!("expected {d} entries")));
            }
            gens.push((DMatrix::from_fn(d, d, |r, c| g.matrix[r][c]), offset));
        }
        let group = build_group(&gens, self.cap)?;
        if self.kind == ActionKind::LinearIsometric && group.kind() != ActionKind::LinearIsometric {
            return Err(invalid(
                path,
                format!("{field}kind"),
                "generators are not orthogonal linear maps; declare \"affine\"",
            ));
        }
        Ok(group)
    }

    /// Describes `generators` in file form.
    pub fn from_generators(kind: ActionKind, generators: &[crate::group::Generator]) -> Self {
        Self {
            dim: generators.first().map_or(0, |g| g.0.nrows()),
            kind,
            generators: generators
                .iter()
                .map(|(m, b)| GeneratorFile {
                    matrix: (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect(),
                    offset: Some(b.clone()),
                })
                .collect(),
            cap: DEFAULT_CAP,
        }
    }
}

impl DifferenceFile {
    pub fn to_difference(&self, path: &str) -> Result<FormalDifference> {
        FormalDifference::new(self.pos.to_body(path, "pos.")?, self.neg.to_body(path, "neg.")?)
    }
}

impl ProblemFile {
    pub fn to_problem(&self, path: &str) -> Result<ExtensionProblem> {
        let group = self.group.to_group(path, "group.")?;
        let points: Vec<String> = self.points.iter().map(PointId::key).collect();
        let index = |id: &str, field: String| {
            points
                .iter()
                .position(|p| p == id)
                .ok_or_else(|| invalid(path, field, format!("unknown point {id:?}")))
        };
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(invalid(path, format!("points[{i}]"), format!("duplicate point {p:?}")));
            }
        }
        let mut perms = vec![None; group.order()];
        for (key, perm) in &self.permutations {
            let g: usize = key
                .parse()
                .ok()
                .filter(|&g| g < group.order())
                .ok_or_else(|| invalid(path, format!("permutations.{key}"), format!("not an element index below {}", group.order())))?;
            perms[g] = Some(perm.clone());
        }
        let permutations = perms
            .into_iter()
            .enumerate()
            .map(|(g, p)| p.ok_or_else(|| invalid(path, format!("permutations.{g}"), "missing permutation for element")))
            .collect::<Result<Vec<_>>>()?;
        let space = build_gspace(points.clone(), self.metric.clone(), permutations, group)?;

        let mut values = Vec::with_capacity(self.subset.len());
        for (i, id) in self.subset.iter().enumerate() {
            let key = id.key();
            let z = index(&key, format!("subset[{i}]"))?;
            let body = self
                .f
                .get(&key)
                .ok_or_else(|| invalid(path, format!("f.{key}"), "missing value for subset point"))?
                .to_body(path, &format!("f.{key}."))?;
            values.push((z, body));
        }
        for key in self.f.keys() {
            if !self.subset.iter().any(|id| &id.key() == key) {
                return Err(invalid(path, format!("f.{key}"), "value given outside the subset"));
            }
        }
        ExtensionProblem::new(space, values)
    }
}

pub fn read_body(path: &Path) -> Result<ConvexBody> {
    read_json::<BodyFile>(path)?.to_body(&path.display().to_string(), "")
}

pub fn read_group(path: &Path) -> Result<GroupAction> {
    read_json::<GroupFile>(path)?.to_group(&path.display().to_string(), "")
}

pub fn read_difference(path: &Path) -> Result<FormalDifference> {
    read_json::<DifferenceFile>(path)?.to_difference(&path.display().to_string())
}

pub fn read_problem(path: &Path) -> Result<ExtensionProblem> {
    read_json::<ProblemFile>(path)?.to_problem(&path.display().to_string())
}

/// Pretty JSON with floats at 17 significant digits and non-finite values as `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, DigitsFormatter::default());
    value.serialize(&mut ser).map_err(|e| Error::Io {
        path: "<report>".into(),
        message: e.to_string(),
    })?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_body(path: &Path, a: &ConvexBody) -> Result<()> {
    write_json(path, &BodyFile::from(a))
}

/// `%.17g`, keeping a decimal point so the value reads back as a float.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{x:.*}", (16 - exp) as usize);
        let trimmed = if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.')
        } else {
            &fixed
        };
        if trimmed.contains('.') {
            trimmed.to_string()
        } else {
            format!("{trimmed}.0")
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

#[derive(Default)]
struct DigitsFormatter {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for DigitsFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_g17(1.0), "1.0");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(-2.5), "-2.5");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_g17(1e20), "1e20");
        assert_eq!(format_g17(123456.0), "123456.0");
        for x in [0.1, 1.0 / 3.0, -7.25e-9, 6.02e23, f64::MIN_POSITIVE, 2f64.sqrt()] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn non_finite_becomes_null() {
        let s = to_json(&vec![1.0, f64::NAN, f64::INFINITY]).unwrap();
        let v: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(v, vec![Some(1.0), None, None]);
    }

    #[test]
    fn body_round_trip() {
        let a = hull(vec![vec![0.1, 0.2], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.2, 0.2]]).unwrap();
        let text = to_json(&BodyFile::from(&a)).unwrap();
        let back = parse_json::<BodyFile>("mem", &text).unwrap().to_body("mem", "").unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn parse_errors_carry_paths() {
        let err = parse_json::<BodyFile>("a.json", r#"{"dim": 2, "vertices": [[0, 1], [0, "x"]]}"#).unwrap_err();
        match err {
            Error::ParseError { path, message } => {
                assert_eq!(path, "a.json");
                assert!(message.starts_with("vertices[1][1]"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let body: BodyFile = parse_json("a.json", r#"{"dim": 2, "vertices": [[0, 1], [0]]}"#).unwrap();
        assert_eq!(
            body.to_body("a.json", "").unwrap_err(),
            Error::ValidationError {
                path: "a.json".into(),
                field: "vertices[1]".into(),
                message: "expected 2 coordinates, found 1".into(),
            }
        );
    }

    #[test]
    fn group_kind_is_checked() {
        let text = r#"{"dim": 1, "kind": "linear", "generators": [{"matrix": [[-1]], "offset": [2]}]}"#;
        let g: GroupFile = parse_json("g.json", text).unwrap();
        assert!(matches!(g.to_group("g.json", ""), Err(Error::ValidationError { field, .. }) if field == "kind"));
        let text = text.replace("linear", "affine");
        let g: GroupFile = parse_json("g.json", &text).unwrap();
        assert_eq!(g.to_group("g.json", "").unwrap().order(), 2);
    }

    #[test]
    fn three_point_problem() {
        let text = r#"{
            "group": {"dim": 1, "kind": "linear", "generators": [{"matrix": [[-1]]}]},
            "points": [-1, 0, 1],
            "metric": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
            "permutations": {"0": [0, 1, 2], "1": [2, 1, 0]},
            "subset": [-1, 1],
            "f": {"-1": {"dim": 1, "vertices": [[-1]]}, "1": {"dim": 1, "vertices": [[1]]}}
        }"#;
        let p = parse_json::<ProblemFile>("p.json", text).unwrap().to_problem("p.json").unwrap();
        assert_eq!(p.subset(), &[0, 2]);
        assert_eq!(p.space().points(), &["-1", "0", "1"]);
    }
}
