use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Halton;
use crate::error::{Error, Result};
use crate::operators::{residual, FixedPointOperator, Point, SetDescriptor};
use crate::regvar::{Monotone, RegFunc};

/// Ray scan: points per ray, smallest step relative to the ray length, and
/// bisection steps inside the crossing cell.
const SCAN_POINTS: usize = 72;
const SCAN_DEPTH: f64 = 1e-10;
const BISECT_STEPS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct PsiSampling {
    pub dim: usize,
    /// Radius of the ball the sup is taken over.
    pub r: f64,
    pub a_grid: Vec<f64>,
    pub samples_per_a: usize,
    pub seed: u64,
}

impl PsiSampling {
    pub fn new(dim: usize, r: f64, a_grid: Vec<f64>) -> Self {
        Self {
            dim,
            r,
            a_grid,
            samples_per_a: 10_000,
            seed: 0,
        }
    }
}

/// Sampled `a -> max{dist(y, F) : residual(y) <= a, |y| <= r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPsi {
    /// Sorted ascending.
    pub a: Vec<f64>,
    /// Best distance found at each level, `None` when nothing feasible off
    /// `F` was found.
    pub raw: Vec<Option<f64>>,
    /// Running max of `raw`.
    pub value: Vec<Option<f64>>,
    pub witnesses: Vec<Option<Point>>,
}

impl EmpiricalPsi {
    /// Right-continuous staircase through the present levels, linear to
    /// zero below the first one.
    pub fn staircase(&self) -> Result<RegFunc> {
        let steps: Vec<(f64, f64)> = self
            .a
            .iter()
            .zip(&self.value)
            .filter_map(|(&a, v)| v.map(|v| (a, v)))
            .collect();
        let (&(a0, v0), &(a_last, _)) = match (steps.first(), steps.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::InsufficientData { usable: 0, needed: 1 }),
        };
        let f = move |t: f64| {
            if t < a0 {
                return v0 * t.max(0.0) / a0;
            }
            let i = steps.partition_point(|&(a, _)| a <= t);
            steps[i - 1].1
        };
        Ok(RegFunc::at_zero(f, a_last).with_monotone(Monotone::Nondecreasing))
    }
}

struct Problem<'a> {
    ops: &'a [FixedPointOperator],
    target: &'a SetDescriptor,
    r: f64,
}

/// A candidate ray `base + lambda e`, `lambda in [0, lmax]`.
struct Ray {
    base: Point,
    dir: Point,
    lmax: f64,
}

impl Problem<'_> {
    fn resid(&self, y: &Point) -> f64 {
        match residual(y, self.ops) {
            Ok(v) if v.is_finite() => v,
            _ => f64::INFINITY,
        }
    }

    /// Ray from `P_F(z)` through `z`, cut at the ball boundary.
    fn ray_through(&self, z: &Point) -> Option<Ray> {
        let base = self.target.project(z).ok()?;
        let d = z - &base;
        let len = d.norm();
        if !(len > 0.0) || base.norm() >= self.r {
            return None;
        }
        let dir = &d * (1.0 / len);
        // |base + l dir| = r
        let bd = base.dot(&dir);
        let lmax = -bd + (bd * bd + self.r * self.r - base.dot(&base)).sqrt();
        (lmax > 0.0).then_some(Ray { base, dir, lmax })
    }

    /// For each level `a`, the furthest scanned point on the ray with
    /// residual `<= a`, refined by bisection into the next scan cell.
    fn ray_sup(&self, ray: &Ray, levels: &[f64]) -> Vec<Option<Point>> {
        let q = SCAN_DEPTH.powf(1.0 / (SCAN_POINTS - 1) as f64);
        let lambdas: Vec<f64> = (0..SCAN_POINTS)
            .map(|j| ray.lmax * q.powi(j as i32))
            .collect();
        let at = |l: f64| ray.base.axpy(l, &ray.dir);
        let res: Vec<f64> = lambdas.iter().map(|&l| self.resid(&at(l))).collect();
        levels
            .iter()
            .map(|&a| {
                let j = res.iter().position(|&v| v <= a)?;
                if j == 0 {
                    return Some(at(lambdas[0]));
                }
                let (mut lo, mut hi) = (lambdas[j], lambdas[j - 1]);
                for _ in 0..BISECT_STEPS {
                    let mid = 0.5 * (lo + hi);
                    if self.resid(&at(mid)) <= a {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Some(at(lo))
            })
            .collect()
    }

    fn value(&self, p: &Point) -> f64 {
        self.target.distance_to(p).unwrap_or(0.0)
    }

    /// Random-perturbation hill climb on the point generating the ray.
    fn refine(&self, start: &Point, start_val: f64, a: f64, seed: u64) -> (Point, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = start.dim();
        let (mut best, mut best_val) = (start.clone(), start_val);
        let mut sigma = 0.05;
        let mut accepted = 0;
        while sigma > 1e-9 && accepted < 2000 {
            let mut improved = false;
            for _ in 0..2 * n + 2 {
                let xi = Point((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
                let mut z = best.axpy(sigma * self.r, &xi);
                let nz = z.norm();
                if nz > self.r {
                    z = &z * (self.r / nz);
                }
                let Some(ray) = self.ray_through(&z) else { continue };
                if let Some(Some(p)) = self.ray_sup(&ray, &[a]).pop() {
                    let v = self.value(&p);
                    if v > best_val {
                        best = p;
                        best_val = v;
                        improved = true;
                        accepted += 1;
                        break;
                    }
                }
            }
            if !improved {
                sigma *= 0.5;
            }
        }
        (best, best_val)
    }
}

/// Estimates the smallest admissible regularity function on the ball of
/// radius `r`. Rays from low-discrepancy points in the ball are pushed
/// outward from `F` until the residual exceeds each level; the best ray per
/// level is then refined by a hill climb.
pub fn estimate_empirical_psi(
    ops: &[FixedPointOperator],
    intersection: &SetDescriptor,
    cfg: &PsiSampling,
) -> Result<EmpiricalPsi> {
    if !intersection.has_exact_distance() {
        return Err(Error::Unsupported(format!(
            "no closed-form distance to {intersection:?}"
        )));
    }
    if !(cfg.r > 0.0) || cfg.samples_per_a == 0 || cfg.a_grid.is_empty() {
        return Err(Error::Parameter("need r > 0, samples and a grid".into()));
    }
    if cfg.a_grid.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::Parameter("a grid must be positive".into()));
    }
    let mut a = cfg.a_grid.clone();
    a.sort_by(f64::total_cmp);
    a.dedup();
    let prob = Problem {
        ops,
        target: intersection,
        r: cfg.r,
    };

    let mut halton = Halton::new(cfg.dim, cfg.seed);
    let mut cloud = Vec::with_capacity(cfg.samples_per_a);
    let mut tries = 0;
    while cloud.len() < cfg.samples_per_a && tries < 100 * cfg.samples_per_a {
        tries += 1;
        let u = halton.next_point();
        let p = Point(u.iter().map(|x| cfg.r * (2.0 * x - 1.0)).collect());
        if p.norm() <= cfg.r {
            cloud.push(p);
        }
    }

    let per_sample: Vec<Vec<(f64, Option<Point>)>> = cloud
        .par_iter()
        .map(|z| {
            let mut out: Vec<(f64, Option<Point>)> = vec![(0.0, None); a.len()];
            let rz = prob.resid(z);
            let vz = prob.value(z);
            for (slot, &lvl) in out.iter_mut().zip(&a) {
                if rz <= lvl && vz > 0.0 {
                    *slot = (vz, Some(z.clone()));
                }
            }
            if let Some(ray) = prob.ray_through(z) {
                for (slot, p) in out.iter_mut().zip(prob.ray_sup(&ray, &a)) {
                    if let Some(p) = p {
                        let v = prob.value(&p);
                        if v > slot.0 {
                            *slot = (v, Some(p));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let results: Vec<(Option<Point>, f64)> = a
        .par_iter()
        .enumerate()
        .map(|(i, &lvl)| {
            let mut best: (Option<Point>, f64) = (None, 0.0);
            for s in &per_sample {
                if s[i].0 > best.1 {
                    best = (s[i].1.clone(), s[i].0);
                }
            }
            match best {
                (Some(p), v) => {
                    let (p, v) = prob.refine(&p, v, lvl, cfg.seed ^ (i as u64 + 1) << 32);
                    (Some(p), v)
                }
                none => none,
            }
        })
        .collect();

    let raw: Vec<Option<f64>> = results
        .iter()
        .map(|(p, v)| p.as_ref().map(|_| *v))
        .collect();
    let mut running: Option<f64> = None;
    let value = raw
        .iter()
        .map(|v| {
            if let Some(v) = v {
                running = Some(running.map_or(*v, |r| r.max(*v)));
            }
            v.and(running)
        })
        .collect();
    Ok(EmpiricalPsi {
        a,
        raw,
        value,
        witnesses: results.into_iter().map(|(p, _)| p).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn identical_halfspaces_give_identity() {
        let h = SetDescriptor::Halfspace {
            normal: vec![1.0, 0.0],
            offset: 0.0,
        };
        let ops = vec![FixedPointOperator::projection(h.clone()); 2];
        let mut cfg = PsiSampling::new(2, 1.0, vec![1e-3, 1e-2, 0.1]);
        cfg.samples_per_a = 200;
        let est = estimate_empirical_psi(&ops, &h, &cfg).unwrap();
        for (a, v) in est.a.iter().zip(&est.value) {
            let v = v.unwrap();
            assert!((v / a - 1.0).abs() < 0.05, "a={a} v={v}");
        }
    }

    #[test]
    fn orthogonal_lines_within_sqrt2() {
        let ops = vec![
            FixedPointOperator::projection(SetDescriptor::line(0.0)),
            FixedPointOperator::projection(SetDescriptor::line(FRAC_PI_2)),
        ];
        let mut cfg = PsiSampling::new(2, 1.0, vec![1e-3, 1e-2, 0.1]);
        cfg.samples_per_a = 200;
        let est = estimate_empirical_psi(&ops, &SetDescriptor::origin(2), &cfg).unwrap();
        for (a, v) in est.a.iter().zip(&est.value) {
            let v = v.unwrap();
            // residual = max(|x|,|y|), so the sup of |p| is sqrt(2) a
            assert!((v / a - 2f64.sqrt()).abs() < 1e-4, "a={a} v={v}");
        }
        let f = est.staircase().unwrap();
        assert_eq!(f.eval(0.05), est.value[1].unwrap());
        assert!(f.eval(1e-9) < 1e-8);
    }
}
