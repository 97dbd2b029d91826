use super::IterationTrace;
use crate::operators::Point;

const SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FejerViolation {
    /// Index of the later record in the trace.
    pub k: u64,
    pub sample: usize,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FejerReport {
    pub checks: usize,
    pub violations: Vec<FejerViolation>,
}

impl FejerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|x^{k+1} - y| <= |x^k - y| + 1e-10` along consecutive recorded
/// iterates for each `y`. The samples are trusted to lie in the common
/// fixed-point set.
pub fn audit_fejer(trace: &IterationTrace, y_samples: &[Point]) -> FejerReport {
    let mut report = FejerReport::default();
    for (j, y) in y_samples.iter().enumerate() {
        let mut prev: Option<f64> = None;
        for rec in &trace.records {
            let d = rec.point.dist(y);
            if let Some(p) = prev {
                report.checks += 1;
                if d > p + SLACK {
                    report.violations.push(FejerViolation {
                        k: rec.k,
                        sample: j,
                        excess: d - p,
                    });
                }
            }
            prev = Some(d);
        }
    }
    report
}
