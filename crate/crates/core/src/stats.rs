//! Small descriptive statistics used by the run reports.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard deviation with divisor `n`.
pub fn population_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Fixed-width histogram over `[0, HIST_MAX_BPS)` with an overflow bin.
#[derive(Debug, Clone, PartialEq)]
pub struct RateHistogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub overflow: u64,
}

pub const HIST_BIN_BPS: f64 = 1.0e4;
pub const HIST_MAX_BPS: f64 = 1.0e6;

impl Default for RateHistogram {
    fn default() -> Self {
        Self {
            bin_width: HIST_BIN_BPS,
            counts: vec![0; (HIST_MAX_BPS / HIST_BIN_BPS) as usize],
            overflow: 0,
        }
    }
}

impl RateHistogram {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut h = Self::default();
        for v in values {
            h.add(v);
        }
        h
    }

    pub fn add(&mut self, v: f64) {
        let bin = (v.max(0.0) / self.bin_width) as usize;
        match self.counts.get_mut(bin) {
            Some(c) => *c += 1,
            None => self.overflow += 1,
        }
    }

    pub fn merge(&mut self, other: &RateHistogram) {
        debug_assert_eq!(self.bin_width, other.bin_width);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }

    /// Lower edge of the most populated bin.
    pub fn mode_bps(&self) -> Option<f64> {
        let (i, c) = self
            .counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
        (*c > 0).then_some(i as f64 * self.bin_width)
    }
}
