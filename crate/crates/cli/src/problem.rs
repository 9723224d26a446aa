//! JSON problem files: a fan, a tail cone, and named virtual polyhedra.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use toric_cohom::cohomology::DegreeBox;
use toric_cohom::polyhedron::Compatibility;
use toric_cohom::{Cone, Fan, LatticePolyhedron, MVec, NVec, VirtualPolyhedron, M};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub fan: FanSpec,
    #[serde(default)]
    pub tail_rays: Vec<Vec<i64>>,
    pub bundles: BTreeMap<String, BundleSpec>,
    #[serde(default)]
    pub degree_box: Option<DegreeBox>,
    /// Name of the bundle whose plus part is ample.
    #[serde(default)]
    pub ample: Option<String>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub plus: PolySpec,
    /// Defaults to the origin plus the tail cone.
    #[serde(default)]
    pub minus: Option<PolySpec>,
}

/// Either a bare vertex list (tail cone of the problem) or vertices with their own tail.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Points(Vec<Vec<i64>>),
    WithTail {
        points: Vec<Vec<i64>>,
        tail_rays: Vec<Vec<i64>>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub field: Option<String>,
    pub cover: Option<String>,
    #[serde(default)]
    pub oracles: Vec<String>,
    pub seed: Option<u64>,
}

/// A problem with every geometric object constructed.
#[derive(Debug)]
pub struct Problem {
    pub fan: Arc<Fan>,
    pub tail: Cone<M>,
    pub bundles: BTreeMap<String, (LatticePolyhedron, LatticePolyhedron)>,
    pub degree_box: Option<DegreeBox>,
    pub ample: Option<String>,
    pub options: Options,
}

/// A problem found by `validate`, with its position in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn issue(location: impl Into<String>, message: impl fmt::Display) -> CliError {
    CliError::Invalid(vec![Issue {
        location: location.into(),
        message: message.to_string(),
    }])
}

fn vectors<T>(
    rows: &[Vec<i64>],
    dim: usize,
    at: &str,
    make: fn(Vec<i64>) -> T,
) -> Result<Vec<T>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != dim {
                Err(issue(
                    format!("{at}[{i}]"),
                    format!("expected {dim} coordinates, got {}", r.len()),
                ))
            } else {
                Ok(make(r.clone()))
            }
        })
        .collect()
}

impl ProblemFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Invalid(mut issues) => {
                for i in &mut issues {
                    i.location = format!("{}:{}", path.display(), i.location);
                }
                CliError::Invalid(issues)
            }
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            issue(
                format!("line {} column {}", e.line(), e.column()),
                format!("cannot parse problem file: {e}"),
            )
        })
    }

    pub fn build(self) -> Result<Problem, CliError> {
        let dim = self
            .fan
            .rays
            .first()
            .map(Vec::len)
            .ok_or_else(|| issue("fan.rays", "no rays"))?;
        let rays = vectors(&self.fan.rays, dim, "fan.rays", NVec::new)?;
        let fan = Fan::new(dim, rays, self.fan.max_cones.clone()).map_err(|e| issue("fan", e))?;
        let tail_rays = vectors(&self.tail_rays, dim, "tail_rays", MVec::new)?;
        let tail = Cone::new(dim, tail_rays).map_err(|e| issue("tail_rays", e))?;

        let poly = |spec: &PolySpec, at: String| -> Result<LatticePolyhedron, CliError> {
            let (points, own_tail) = match spec {
                PolySpec::Points(p) => (p, None),
                PolySpec::WithTail { points, tail_rays } => (points, Some(tail_rays)),
            };
            let pts = vectors(points, dim, &format!("{at}.points"), MVec::new)?;
            if pts.is_empty() {
                return Err(issue(at, "needs at least one vertex"));
            }
            let cone = match own_tail {
                None => tail.clone(),
                Some(t) => {
                    let rays = vectors(t, dim, &format!("{at}.tail_rays"), MVec::new)?;
                    Cone::new(dim, rays).map_err(|e| issue(format!("{at}.tail_rays"), e))?
                }
            };
            LatticePolyhedron::with_tail(pts, cone).map_err(|e| issue(at, e))
        };

        let mut bundles = BTreeMap::new();
        for (name, spec) in &self.bundles {
            let plus = poly(&spec.plus, format!("bundles.{name}.plus"))?;
            let minus = match &spec.minus {
                Some(m) => poly(m, format!("bundles.{name}.minus"))?,
                None => LatticePolyhedron::neutral(&tail),
            };
            bundles.insert(name.clone(), (plus, minus));
        }
        if let Some(b) = &self.degree_box {
            if b.dim() != dim {
                return Err(issue("degree_box", format!("expected dimension {dim}")));
            }
        }
        if let Some(a) = &self.ample {
            if !bundles.contains_key(a) {
                return Err(issue("ample", format!("no bundle named {a:?}")));
            }
        }
        Ok(Problem {
            fan: Arc::new(fan),
            tail,
            bundles,
            degree_box: self.degree_box,
            ample: self.ample,
            options: self.options,
        })
    }
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        ProblemFile::read(path)?.build()
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// Fan axioms against the tail cone, then tail agreement and compatibility of every
    /// polyhedron.
    pub fn validate(&self) -> Vec<Issue> {
        let mut issues: Vec<Issue> = self
            .fan
            .validate(&self.tail)
            .violations
            .iter()
            .map(|v| Issue {
                location: "fan".into(),
                message: v.to_string(),
            })
            .collect();
        if !issues.is_empty() {
            return issues;
        }
        for (name, (plus, minus)) in &self.bundles {
            for (side, p) in [("plus", plus), ("minus", minus)] {
                let location = format!("bundles.{name}.{side}");
                if !p.tail().same_cone(&self.tail) {
                    issues.push(Issue {
                        location,
                        message: "not compatible: tail cone differs from tail_rays".into(),
                    });
                    continue;
                }
                if let Compatibility::Incompatible { witness } = p.is_compatible(&self.fan) {
                    issues.push(Issue {
                        location,
                        message: format!("not compatible with the fan (witness cone {witness})"),
                    });
                }
            }
        }
        issues
    }

    /// Validation, turned into an error when anything is wrong.
    pub fn require_valid(&self) -> Result<(), CliError> {
        let issues = self.validate();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(CliError::Invalid(issues))
        }
    }

    pub fn polyhedra(
        &self,
        name: &str,
    ) -> Result<&(LatticePolyhedron, LatticePolyhedron), CliError> {
        self.bundles
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no bundle named {name:?}")))
    }

    pub fn bundle(&self, name: &str) -> Result<VirtualPolyhedron, CliError> {
        let (plus, minus) = self.polyhedra(name)?;
        Ok(VirtualPolyhedron::new(
            plus.clone(),
            minus.clone(),
            self.fan.clone(),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F1: &str = r#"{
        "fan": {"rays": [[0,1],[1,0],[0,-1],[-1,1]], "max_cones": [[0,1],[1,2],[2,3],[3,0]]},
        "bundles": {"A": {"plus": [[0,0],[1,0]]}}
    }"#;

    #[test]
    fn parses_and_validates() {
        let p = ProblemFile::parse(F1).unwrap().build().unwrap();
        assert!(p.validate().is_empty());
        let (plus, minus) = p.polyhedra("A").unwrap();
        assert_eq!(plus.points().len(), 2);
        assert_eq!(minus.points(), &[MVec::zero(2)]);
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = ProblemFile::parse("{\n  \"fan\": [1,\n").unwrap_err();
        let CliError::Invalid(issues) = err else {
            panic!()
        };
        assert!(issues[0].location.starts_with("line "), "{}", issues[0]);
    }

    #[test]
    fn wrong_coordinate_count_is_located() {
        let text = F1.replace("[[0,0],[1,0]]", "[[0,0],[1,0,4]]");
        let err = ProblemFile::parse(&text).unwrap().build().unwrap_err();
        let CliError::Invalid(issues) = err else {
            panic!()
        };
        assert_eq!(issues[0].location, "bundles.A.plus.points[1]");
    }
}
