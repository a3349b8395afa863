//! Maps from E⁴ to E³ for mesh export.
//!
//! Specs: `drop:K` removes coordinate `K ∈ 1..4`; `ortho:U;V;W` projects
//! onto three orthonormal vectors written as comma-separated components;
//! `stereo` is stereographic projection of the unit 3-sphere from
//! `(0, 0, 0, 1)`.

use pencil4::Vec4;

use crate::error::CliError;

pub const ORTHONORMAL_TOL: f64 = 1e-10;
pub const SPHERE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionSpec {
    /// Zero-based index of the removed coordinate.
    DropAxis(usize),
    Orthographic([Vec4; 3]),
    Stereographic,
}

impl Default for ProjectionSpec {
    fn default() -> Self {
        ProjectionSpec::DropAxis(3)
    }
}

impl std::str::FromStr for ProjectionSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| CliError::Projection(format!("`{text}`: {why}"));
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        match kind.trim() {
            "drop" => {
                let k: usize = rest.trim().parse().map_err(|_| bad("axis must be 1, 2, 3 or 4"))?;
                if !(1..=4).contains(&k) {
                    return Err(bad("axis must be 1, 2, 3 or 4"));
                }
                Ok(ProjectionSpec::DropAxis(k - 1))
            }
            "ortho" => {
                let vecs = rest
                    .split(';')
                    .map(|v| {
                        let c: Vec<f64> = v
                            .split(',')
                            .map(|x| x.trim().parse::<f64>())
                            .collect::<Result<_, _>>()
                            .map_err(|_| bad("components must be numbers"))?;
                        if c.len() != 4 {
                            return Err(bad("each vector needs four components"));
                        }
                        Ok(Vec4::new(c[0], c[1], c[2], c[3]))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if vecs.len() != 3 {
                    return Err(bad("expected three vectors separated by `;`"));
                }
                for i in 0..3 {
                    for j in 0..3 {
                        let want = if i == j { 1.0 } else { 0.0 };
                        if (vecs[i].dot(&vecs[j]) - want).abs() > ORTHONORMAL_TOL {
                            return Err(bad("basis is not orthonormal"));
                        }
                    }
                }
                Ok(ProjectionSpec::Orthographic([vecs[0], vecs[1], vecs[2]]))
            }
            "stereo" if rest.is_empty() => Ok(ProjectionSpec::Stereographic),
            _ => Err(bad("use drop:K, ortho:U;V;W or stereo")),
        }
    }
}

impl ProjectionSpec {
    pub fn project(&self, x: &Vec4) -> Result<[f64; 3], CliError> {
        match self {
            ProjectionSpec::DropAxis(k) => {
                let mut out = [0.0; 3];
                for (j, i) in (0..4).filter(|i| i != k).enumerate() {
                    out[j] = x[i];
                }
                Ok(out)
            }
            ProjectionSpec::Orthographic(b) => Ok([b[0].dot(x), b[1].dot(x), b[2].dot(x)]),
            ProjectionSpec::Stereographic => {
                if (x.norm() - 1.0).abs() > SPHERE_TOL {
                    return Err(CliError::Projection(format!(
                        "point at distance {} from the origin is not on the unit 3-sphere",
                        x.norm()
                    )));
                }
                let denom = 1.0 - x[3];
                if denom.abs() < SPHERE_TOL {
                    return Err(CliError::Projection("point is the projection pole".into()));
                }
                Ok([x[0] / denom, x[1] / denom, x[2] / denom])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_project() {
        let x = Vec4::new(1.0, 2.0, 3.0, 4.0);
        let p: ProjectionSpec = "drop:2".parse().unwrap();
        assert_eq!(p.project(&x).unwrap(), [1.0, 3.0, 4.0]);
        assert_eq!(ProjectionSpec::default().project(&x).unwrap(), [1.0, 2.0, 3.0]);
        let o: ProjectionSpec = "ortho:0,0,0,1;1,0,0,0;0,1,0,0".parse().unwrap();
        assert_eq!(o.project(&x).unwrap(), [4.0, 1.0, 2.0]);
        let s: ProjectionSpec = "stereo".parse().unwrap();
        assert_eq!(s.project(&Vec4::new(1.0, 0.0, 0.0, 0.0)).unwrap(), [1.0, 0.0, 0.0]);
        assert!(s.project(&x).is_err());
    }

    #[test]
    fn malformed_specs() {
        for bad in ["drop:5", "drop", "ortho:1,0,0,0;1,0,0,0;0,0,1,0", "ortho:1,0,0", "cabinet"] {
            assert!(bad.parse::<ProjectionSpec>().is_err(), "{bad}");
        }
    }
}
