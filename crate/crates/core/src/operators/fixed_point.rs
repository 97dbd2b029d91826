use std::fmt;
use std::sync::Arc;

use super::{Point, SetDescriptor};
use crate::error::{Error, Result};

type Map = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;

/// An averaged operator on `R^n` with optional exact fixed-point set.
#[derive(Clone)]
pub struct FixedPointOperator {
    map: Map,
    pub alpha: f64,
    pub fix_set: Option<SetDescriptor>,
    pub name: String,
}

impl fmt::Debug for FixedPointOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FixedPointOperator")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("fix_set", &self.fix_set)
            .finish()
    }
}

impl FixedPointOperator {
    pub fn new(
        name: impl Into<String>,
        alpha: f64,
        map: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static,
    ) -> Self {
        Self {
            map: Arc::new(map),
            alpha,
            fix_set: None,
            name: name.into(),
        }
    }

    pub fn with_fix_set(mut self, set: SetDescriptor) -> Self {
        self.fix_set = Some(set);
        self
    }

    /// Projection onto `set`, which is 1/2-averaged with `Fix P = set`.
    pub fn projection(set: SetDescriptor) -> Self {
        let s = set.clone();
        Self::new(format!("P[{set:?}]"), 0.5, move |p| s.project(p)).with_fix_set(set)
    }

    pub fn identity() -> Self {
        Self::new("identity", 0.5, |p| Ok(p.clone()))
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        (self.map)(x)
    }
}

/// Douglas-Rachford operator `w + PB(2 PA(w) - w) - PA(w)`.
///
/// With `PA` the projection onto the axis `{mu = 0}` and `PB` the projection
/// onto the Hölder-entropic epigraph, the fixed-point set is the ray
/// `{(0, mu) : mu >= 0}` and is attached.
pub fn dr_operator(pa: &FixedPointOperator, pb: &FixedPointOperator) -> FixedPointOperator {
    let fix = match (&pa.fix_set, &pb.fix_set) {
        (Some(SetDescriptor::XAxisPlane { coord: 1 }), Some(SetDescriptor::GammaEpigraph)) => {
            Some(SetDescriptor::DrFixRay)
        }
        _ => None,
    };
    let (a, b) = (pa.clone(), pb.clone());
    let mut op = FixedPointOperator::new(format!("DR[{} ; {}]", pa.name, pb.name), 0.5, move |w| {
        let pw = a.apply(w)?;
        let reflected = &(&pw * 2.0) - w;
        let q = b.apply(&reflected)?;
        Ok(&(w + &q) - &pw)
    });
    op.fix_set = fix;
    op
}

/// `x -> sum_i w_i T_i(x)`.
pub fn average(ops: &[FixedPointOperator], weights: &[f64]) -> Result<FixedPointOperator> {
    if ops.is_empty() || ops.len() != weights.len() {
        return Err(Error::Parameter("one weight per operator required".into()));
    }
    if weights.iter().any(|&w| !(w >= 0.0)) {
        return Err(Error::Parameter("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("weights sum to {total}, not 1")));
    }
    let alpha = ops
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(o, _)| o.alpha)
        .fold(0.0, f64::max);
    let ops = ops.to_vec();
    let weights = weights.to_vec();
    Ok(FixedPointOperator::new("average", alpha, move |x| {
        combine(&ops, &weights, x)
    }))
}

/// `sum_i w_i T_i(x)`, skipping zero weights.
pub fn combine(ops: &[FixedPointOperator], weights: &[f64], x: &Point) -> Result<Point> {
    let mut acc = Point::zeros(x.dim());
    for (op, &w) in ops.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        if w == 1.0 {
            return op.apply(x);
        }
        acc = acc.axpy(w, &op.apply(x)?);
    }
    Ok(acc)
}

/// `max_i |x - T_i x|`.
pub fn residual(x: &Point, ops: &[FixedPointOperator]) -> Result<f64> {
    let mut r: f64 = 0.0;
    for op in ops {
        r = r.max(x.dist(&op.apply(x)?));
    }
    Ok(r)
}
