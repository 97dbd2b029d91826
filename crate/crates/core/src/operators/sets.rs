use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::epigraph::EpiProfile;
use super::expcone::{in_exp_cone, project_exp_cone};
use super::Point;
use crate::error::{Error, Result};

fn default_coord() -> usize {
    1
}

/// Closed convex sets with a computable projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetDescriptor {
    /// `{x : A x = b}` with `A` of full row rank.
    Affine { rows: Vec<Vec<f64>>, rhs: Vec<f64> },
    /// `{x : <a, x> <= b}`.
    Halfspace { normal: Vec<f64>, offset: f64 },
    ExpCone,
    /// `{x1 <= 0, x2 = 0, x3 >= 0}`, the intersection of the exponential cone
    /// with the plane `x2 = 0`.
    ExpConeFace,
    /// `{(x, mu) : mu >= gamma(x), |x| <= 1/2}`.
    GammaEpigraph,
    /// `{(x, mu) : mu >= |x|^p}`.
    PowerEpigraph { p: f64 },
    /// `{(x, mu) : mu >= exp(-|x|^(-1/gamma)), |x| <= b(gamma)}`.
    LogEpigraph { gamma: f64 },
    /// `{x : x[coord] = 0}`.
    XAxisPlane {
        #[serde(default = "default_coord")]
        coord: usize,
    },
    /// `{(0, mu) : mu >= 0}`.
    DrFixRay,
    Singleton { point: Vec<f64> },
}

fn expect_dim(p: &Point, n: usize) -> Result<()> {
    if p.dim() == n {
        Ok(())
    } else {
        Err(Error::Parameter(format!("expected a point of dimension {n}, got {}", p.dim())))
    }
}

impl SetDescriptor {
    /// Line through the origin at angle `theta` in the plane.
    pub fn line(theta: f64) -> Self {
        SetDescriptor::Affine {
            rows: vec![vec![-theta.sin(), theta.cos()]],
            rhs: vec![0.0],
        }
    }

    pub fn origin(n: usize) -> Self {
        SetDescriptor::Singleton {
            point: vec![0.0; n],
        }
    }

    pub fn x_axis() -> Self {
        SetDescriptor::XAxisPlane { coord: 1 }
    }

    fn profile(&self) -> Option<EpiProfile> {
        match *self {
            SetDescriptor::GammaEpigraph => Some(EpiProfile::Gamma),
            SetDescriptor::PowerEpigraph { p } => Some(EpiProfile::Power { p }),
            SetDescriptor::LogEpigraph { gamma } => Some(EpiProfile::Log { g: gamma }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        match self {
            SetDescriptor::Affine { rows, rhs } => {
                if rows.is_empty() || rows.len() != rhs.len() {
                    return bad("affine set needs one rhs per row".into());
                }
                let n = rows[0].len();
                if n == 0 || rows.iter().any(|r| r.len() != n) {
                    return bad("affine rows must share a positive length".into());
                }
                Ok(())
            }
            SetDescriptor::Halfspace { normal, .. } => {
                if normal.iter().all(|&a| a == 0.0) {
                    bad("halfspace normal must be nonzero".into())
                } else {
                    Ok(())
                }
            }
            SetDescriptor::PowerEpigraph { p } if !(*p >= 1.0) => bad(format!("power p = {p} must be >= 1")),
            SetDescriptor::LogEpigraph { gamma } if !(*gamma > 0.0) => {
                bad(format!("log epigraph gamma = {gamma} must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Euclidean projection.
    pub fn project(&self, p: &Point) -> Result<Point> {
        self.validate()?;
        match self {
            SetDescriptor::Affine { rows, rhs } => {
                let n = rows[0].len();
                expect_dim(p, n)?;
                let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
                let x = DVector::from_column_slice(p.coords());
                let r = &a * &x - DVector::from_column_slice(rhs);
                let gram = &a * a.transpose();
                let y = gram
                    .lu()
                    .solve(&r)
                    .ok_or_else(|| Error::Parameter("affine rows are linearly dependent".into()))?;
                let q = x - a.transpose() * y;
                Ok(Point(q.iter().copied().collect()))
            }
            SetDescriptor::Halfspace { normal, offset } => {
                let a = Point(normal.clone());
                expect_dim(p, a.dim())?;
                let excess = p.dot(&a) - offset;
                if excess <= 0.0 {
                    Ok(p.clone())
                } else {
                    Ok(p.axpy(-excess / a.dot(&a), &a))
                }
            }
            SetDescriptor::ExpCone => {
                expect_dim(p, 3)?;
                Ok(Point(project_exp_cone([p[0], p[1], p[2]])?.to_vec()))
            }
            SetDescriptor::ExpConeFace => {
                expect_dim(p, 3)?;
                Ok(Point(vec![p[0].min(0.0), 0.0, p[2].max(0.0)]))
            }
            SetDescriptor::GammaEpigraph
            | SetDescriptor::PowerEpigraph { .. }
            | SetDescriptor::LogEpigraph { .. } => {
                expect_dim(p, 2)?;
                let prof = self.profile().expect("epigraph kinds carry a profile");
                let (x, mu) = prof.project(p[0], p[1])?;
                Ok(Point(vec![x, mu]))
            }
            SetDescriptor::XAxisPlane { coord } => {
                if *coord >= p.dim() {
                    return Err(Error::Parameter(format!("coordinate {coord} out of range")));
                }
                let mut q = p.clone();
                q.0[*coord] = 0.0;
                Ok(q)
            }
            SetDescriptor::DrFixRay => {
                expect_dim(p, 2)?;
                Ok(Point(vec![0.0, p[1].max(0.0)]))
            }
            SetDescriptor::Singleton { point } => {
                expect_dim(p, point.len())?;
                Ok(Point(point.clone()))
            }
        }
    }

    pub fn has_exact_distance(&self) -> bool {
        !matches!(
            self,
            SetDescriptor::ExpCone
                | SetDescriptor::GammaEpigraph
                | SetDescriptor::PowerEpigraph { .. }
                | SetDescriptor::LogEpigraph { .. }
        )
    }

    /// Closed-form Euclidean distance; sets whose projection needs a
    /// numerical solve are rejected.
    pub fn distance_to(&self, p: &Point) -> Result<f64> {
        self.validate()?;
        match self {
            SetDescriptor::Halfspace { normal, offset } => {
                let a = Point(normal.clone());
                expect_dim(p, a.dim())?;
                Ok((p.dot(&a) - offset).max(0.0) / a.norm())
            }
            SetDescriptor::ExpConeFace => {
                expect_dim(p, 3)?;
                Ok(Point(vec![p[0].max(0.0), p[1], p[2].min(0.0)]).norm())
            }
            SetDescriptor::XAxisPlane { coord } => {
                if *coord >= p.dim() {
                    return Err(Error::Parameter(format!("coordinate {coord} out of range")));
                }
                Ok(p[*coord].abs())
            }
            SetDescriptor::DrFixRay => {
                expect_dim(p, 2)?;
                Ok(p[0].hypot(p[1].min(0.0)))
            }
            SetDescriptor::Singleton { point } => {
                expect_dim(p, point.len())?;
                Ok(p.dist(&Point(point.clone())))
            }
            SetDescriptor::Affine { .. } => Ok(p.dist(&self.project(p)?)),
            _ => Err(Error::Unsupported(format!("no closed-form distance to {self:?}"))),
        }
    }

    /// Membership up to `tol`.
    pub fn contains(&self, p: &Point, tol: f64) -> Result<bool> {
        match self {
            SetDescriptor::ExpCone => {
                expect_dim(p, 3)?;
                Ok(in_exp_cone([p[0], p[1], p[2]], tol))
            }
            SetDescriptor::GammaEpigraph
            | SetDescriptor::PowerEpigraph { .. }
            | SetDescriptor::LogEpigraph { .. } => {
                expect_dim(p, 2)?;
                let prof = self.profile().expect("epigraph kinds carry a profile");
                let b = prof.half_width();
                let a = p[0].abs();
                Ok(a <= b + tol && p[1] >= prof.h(a.min(b)) - tol)
            }
            _ => Ok(self.distance_to(p)? <= tol),
        }
    }
}
