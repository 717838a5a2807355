use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fields::{Chart, TangentPoint};

use super::VerifyError;

/// Sampling plan: how many tangent points to draw, from which boxes, with
/// which seed. Candidates falling outside the chart guards are skipped and
/// counted rather than redrawn.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub count: usize,
    pub base_box: Vec<(f64, f64)>,
    pub velocity_box: Vec<(f64, f64)>,
    pub seed: u64,
}

impl SampleSpec {
    /// Desk-scale defaults: 30 points, seed 42, velocity box [-2, 2]^n.
    pub fn default_for(base_box: Vec<(f64, f64)>) -> Self {
        let n = base_box.len();
        SampleSpec {
            count: 30,
            base_box,
            velocity_box: vec![(-2.0, 2.0); n],
            seed: 42,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<(), VerifyError> {
        if self.count < 1 {
            return Err(VerifyError::BadSampleSpec(
                "point count must be at least 1".into(),
            ));
        }
        if self.base_box.len() != dim || self.velocity_box.len() != dim {
            return Err(VerifyError::BadSampleSpec(format!(
                "box bounds must have one interval per coordinate (dim {dim})"
            )));
        }
        for (lo, hi) in self.base_box.iter().chain(self.velocity_box.iter()) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(VerifyError::BadSampleSpec(format!(
                    "invalid interval [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Result of drawing `requested` candidates.
#[derive(Debug, Clone)]
pub struct Samples {
    pub points: Vec<TangentPoint>,
    pub requested: usize,
    pub skipped: usize,
}

impl Samples {
    /// A report is untrustworthy when more than 10% of the requested
    /// points were outside the chart guards.
    pub fn valid(&self) -> bool {
        self.skipped * 10 <= self.requested
    }
}

/// Draws `spec.count` candidate points uniformly from the boxes, skipping
/// (and counting) any whose base coordinates violate a chart guard.
/// Identical inputs produce the identical point sequence.
pub fn sample_points(chart: &Chart, spec: &SampleSpec) -> Result<Samples, VerifyError> {
    spec.validate(chart.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = chart.dim();
    let mut points = Vec::with_capacity(spec.count);
    let mut skipped = 0;
    for _ in 0..spec.count {
        let x: Vec<f64> = (0..n)
            .map(|i| rng.gen_range(spec.base_box[i].0..spec.base_box[i].1))
            .collect();
        let v: Vec<f64> = (0..n)
            .map(|i| rng.gen_range(spec.velocity_box[i].0..spec.velocity_box[i].1))
            .collect();
        if chart.contains(&x) {
            points.push(TangentPoint { x, xdot: v });
        } else {
            skipped += 1;
        }
    }
    Ok(Samples {
        points,
        requested: spec.count,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn sampling_is_deterministic() {
        let chart = Chart::new(3, ["a", "b", "c"].map(String::from).to_vec(), vec![]).unwrap();
        let spec = SampleSpec::default_for(vec![(-1.0, 1.0); 3]);
        let s1 = sample_points(&chart, &spec).unwrap();
        let s2 = sample_points(&chart, &spec).unwrap();
        assert_eq!(s1.points, s2.points);
        assert_eq!(s1.points.len(), 30);
        assert_eq!(s1.skipped, 0);
    }

    #[test]
    fn guard_violations_are_skipped_and_counted() {
        let chart = Chart::new(
            3,
            ["a", "b", "c"].map(String::from).to_vec(),
            vec![parse("x0", 3).unwrap()],
        )
        .unwrap();
        // Box straddles the guard boundary x0 > 0.
        let spec = SampleSpec {
            count: 200,
            base_box: vec![(-1.0, 1.0); 3],
            velocity_box: vec![(-2.0, 2.0); 3],
            seed: 7,
        };
        let s = sample_points(&chart, &spec).unwrap();
        assert_eq!(s.points.len() + s.skipped, 200);
        assert!(s.skipped > 50, "expected roughly half skipped");
        assert!(!s.valid());
        for p in &s.points {
            assert!(p.x[0] > 0.0);
        }
    }
}
