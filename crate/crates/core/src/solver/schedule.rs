use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// Weight 1 on operator `(k + 1) mod m`: for m = 2 this is
    /// `(0,1), (1,0), (0,1), ...`.
    Cyclic,
    /// The same weights at every step.
    Constant(Vec<f64>),
}

/// Weight schedule `k -> w^k` together with `nu` (smallest positive weight)
/// and the covering window `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiCyclicSchedule {
    m: usize,
    rule: WeightRule,
    pub nu: f64,
    pub s: u64,
}

impl QuasiCyclicSchedule {
    /// Alternating projections between two sets.
    pub fn ap_schedule() -> Self {
        Self::cyclic(2).expect("m = 2 is valid")
    }

    /// One operator with weight 1 at every step.
    pub fn dr_schedule() -> Self {
        Self {
            m: 1,
            rule: WeightRule::Constant(vec![1.0]),
            nu: 1.0,
            s: 1,
        }
    }

    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("cyclic schedule needs m >= 1".into()));
        }
        Ok(Self {
            m,
            rule: WeightRule::Cyclic,
            nu: 1.0,
            s: m as u64,
        })
    }

    pub fn parallel_schedule(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Parameter("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Parameter(format!(
                "parallel weights must be positive, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Self {
            m: weights.len(),
            rule: WeightRule::Constant(weights.to_vec()),
            nu: weights.iter().cloned().fold(f64::INFINITY, f64::min),
            s: 1,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rule(&self) -> &WeightRule {
        &self.rule
    }

    pub fn weights_at(&self, k: u64) -> Vec<f64> {
        match &self.rule {
            WeightRule::Constant(w) => w.clone(),
            WeightRule::Cyclic => {
                let mut w = vec![0.0; self.m];
                w[((k + 1) % self.m as u64) as usize] = 1.0;
                w
            }
        }
    }

    /// Checks the covering and `nu` conditions for `k` in `0..k_max`.
    pub fn check(&self, k_max: u64) -> bool {
        (0..k_max).all(|k| {
            let mut covered = vec![false; self.m];
            for j in k..k + self.s {
                for (i, &w) in self.weights_at(j).iter().enumerate() {
                    if w > 0.0 {
                        if w < self.nu {
                            return false;
                        }
                        covered[i] = true;
                    }
                }
            }
            covered.iter().all(|&c| c)
        })
    }
}
