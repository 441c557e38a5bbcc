//! Distance sweeps, maximum secure distance and crossover search.

use crate::error::{Error, Result};
use crate::math::bisect;
use crate::scenario::Scenario;

/// Bisection stops once the sign change is bracketed this tightly (km).
pub const DISTANCE_TOLERANCE_KM: f64 = 0.01;

/// Coarse grid step used before bisection (km).
pub const COARSE_STEP_KM: f64 = 1.0;

const MAX_GRID_POINTS: usize = 10_000_000;

/// Anything with a raw (unclamped) key rate as a function of fiber length.
pub trait KeyRate {
    fn raw_rate(&self, length_km: f64) -> Result<f64>;
}

impl KeyRate for Scenario {
    fn raw_rate(&self, length_km: f64) -> Result<f64> {
        self.evaluate(length_km)
    }
}

impl<T: KeyRate + ?Sized> KeyRate for &T {
    fn raw_rate(&self, length_km: f64) -> Result<f64> {
        (**self).raw_rate(length_km)
    }
}

/// Pointwise maximum of several rate curves; the best the receiver could do
/// by picking one configuration per distance.
#[derive(Debug, Clone)]
pub struct Envelope<'a> {
    members: Vec<&'a Scenario>,
}

impl<'a> Envelope<'a> {
    pub fn new(members: Vec<&'a Scenario>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Config(
                "an envelope needs at least one scenario".into(),
            ));
        }
        Ok(Self { members })
    }
}

impl KeyRate for Envelope<'_> {
    fn raw_rate(&self, length_km: f64) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for m in &self.members {
            best = best.max(m.raw_rate(length_km)?);
        }
        Ok(best)
    }
}

/// Inclusive, evenly spaced distance grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub l_min: f64,
    pub l_max: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(l_min: f64, l_max: f64, step: f64) -> Result<Self> {
        if !(l_min >= 0.0 && l_min.is_finite()) {
            return Err(Error::Grid(format!(
                "l_min must be a non-negative length, got {l_min}"
            )));
        }
        if !(l_max > l_min && l_max.is_finite()) {
            return Err(Error::Grid(format!(
                "l_max ({l_max}) must exceed l_min ({l_min})"
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Grid(format!("step must be positive, got {step}")));
        }
        let g = Self { l_min, l_max, step };
        if g.intervals() >= MAX_GRID_POINTS {
            return Err(Error::Grid(format!(
                "step {step} gives too many grid points"
            )));
        }
        Ok(g)
    }

    fn intervals(&self) -> usize {
        // tolerate rounding in (l_max - l_min) / step so the end point is kept
        ((self.l_max - self.l_min) / self.step + 1e-9).floor() as usize
    }

    pub fn len(&self) -> usize {
        self.intervals() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.l_min + i as f64 * self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub length_km: f64,
    /// `max(0, raw_rate)`.
    pub rate: f64,
    pub raw_rate: f64,
}

impl RatePoint {
    pub fn new(length_km: f64, raw_rate: f64) -> Self {
        Self {
            length_km,
            rate: raw_rate.max(0.0),
            raw_rate,
        }
    }
}

/// Key rate against distance, lengths strictly increasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateCurve {
    pub points: Vec<RatePoint>,
}

impl RateCurve {
    pub fn from_raw(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let points: Vec<RatePoint> = points
            .into_iter()
            .map(|(l, r)| RatePoint::new(l, r))
            .collect();
        if points.iter().any(|p| p.length_km.is_nan())
            || points.windows(2).any(|w| w[1].length_km <= w[0].length_km)
        {
            return Err(Error::Grid(
                "curve lengths must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.length_km)
    }

    /// True when the clamped rate never rises with distance.
    pub fn is_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].rate <= w[0].rate)
    }
}

pub fn sweep_grid<K: KeyRate + ?Sized>(rate: &K, grid: &Grid) -> Result<RateCurve> {
    let points = grid
        .points()
        .map(|l| Ok(RatePoint::new(l, rate.raw_rate(l)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RateCurve { points })
}

/// Evaluates `rate` on the inclusive grid `l_min, l_min + step, ... <= l_max`.
pub fn sweep<K: KeyRate + ?Sized>(
    rate: &K,
    l_min: f64,
    l_max: f64,
    step: f64,
) -> Result<RateCurve> {
    sweep_grid(rate, &Grid::new(l_min, l_max, step)?)
}

/// Largest length in `[0, l_max_search]` with a positive raw rate, to within
/// [`DISTANCE_TOLERANCE_KM`]. `None` if the rate is not positive at zero length.
pub fn max_secure_distance<K: KeyRate + ?Sized>(
    rate: &K,
    l_max_search: f64,
) -> Result<Option<f64>> {
    max_secure_distance_with_step(rate, l_max_search, COARSE_STEP_KM)
}

pub fn max_secure_distance_with_step<K: KeyRate + ?Sized>(
    rate: &K,
    l_max_search: f64,
    step: f64,
) -> Result<Option<f64>> {
    if rate.raw_rate(0.0)? <= 0.0 {
        return Ok(None);
    }
    let grid = Grid::new(0.0, l_max_search, step)?;
    let mut last_positive = 0.0;
    let mut first_dead_after = None;
    for l in grid.points().skip(1) {
        if rate.raw_rate(l)? > 0.0 {
            last_positive = l;
            first_dead_after = None;
        } else if first_dead_after.is_none() {
            first_dead_after = Some(l);
        }
    }
    let dead = match first_dead_after {
        Some(dead) if dead > last_positive => dead,
        _ => {
            // positive through the last grid point; check the search limit
            if rate.raw_rate(l_max_search)? > 0.0 {
                return Ok(Some(l_max_search));
            }
            l_max_search
        }
    };
    let b = bisect(
        |l| rate.raw_rate(l),
        last_positive,
        dead,
        DISTANCE_TOLERANCE_KM,
    )?;
    Ok(Some(b.positive))
}

/// Where curve A stops beating curve B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub length_km: f64,
    /// A and B only touched (the difference returned above zero right after);
    /// `length_km` is then the midpoint of the grid cell where they met.
    pub touching: bool,
}

/// Smallest length at which `rate_a - rate_b` goes from positive to
/// non-positive, found on a 1 km grid and refined by bisection.
pub fn crossover_distance<A, B>(a: &A, b: &B, l_max_search: f64) -> Result<Option<Crossover>>
where
    A: KeyRate + ?Sized,
    B: KeyRate + ?Sized,
{
    crossover_distance_with_step(a, b, l_max_search, COARSE_STEP_KM)
}

pub fn crossover_distance_with_step<A, B>(
    a: &A,
    b: &B,
    l_max_search: f64,
    step: f64,
) -> Result<Option<Crossover>>
where
    A: KeyRate + ?Sized,
    B: KeyRate + ?Sized,
{
    let diff = |l: f64| -> Result<f64> { Ok(a.raw_rate(l)? - b.raw_rate(l)?) };
    let grid = Grid::new(0.0, l_max_search, step)?;
    let lengths: Vec<f64> = grid.points().collect();
    let mut prev = diff(lengths[0])?;
    for (i, pair) in lengths.windows(2).enumerate() {
        let d = diff(pair[1])?;
        if prev > 0.0 && d <= 0.0 {
            if d == 0.0 {
                if let Some(&next_l) = lengths.get(i + 2) {
                    if diff(next_l)? > 0.0 {
                        return Ok(Some(Crossover {
                            length_km: 0.5 * (pair[0] + pair[1]),
                            touching: true,
                        }));
                    }
                }
            }
            let br = bisect(diff, pair[0], pair[1], DISTANCE_TOLERANCE_KM)?;
            return Ok(Some(Crossover {
                length_km: br.midpoint(),
                touching: false,
            }));
        }
        prev = d;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Linear {
        zero_at: f64,
    }

    impl KeyRate for Linear {
        fn raw_rate(&self, l: f64) -> Result<f64> {
            Ok(self.zero_at - l)
        }
    }

    struct Constant(f64);

    impl KeyRate for Constant {
        fn raw_rate(&self, _: f64) -> Result<f64> {
            Ok(self.0)
        }
    }

    struct Vee;

    impl KeyRate for Vee {
        fn raw_rate(&self, l: f64) -> Result<f64> {
            Ok((l - 10.0).abs())
        }
    }

    #[test]
    fn grid_points() {
        let g = Grid::new(0.0, 60.0, 0.25).unwrap();
        assert_eq!(g.len(), 241);
        assert_eq!(g.points().last(), Some(60.0));
        assert_eq!(Grid::new(0.0, 1.0, 5.0).unwrap().len(), 1);
        assert!(Grid::new(3.0, 3.0, 1.0).is_err());
        assert!(Grid::new(0.0, 3.0, 0.0).is_err());
        assert!(Grid::new(-1.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn sweep_clamps() {
        let c = sweep(&Linear { zero_at: 2.0 }, 0.0, 4.0, 1.0).unwrap();
        let raw: Vec<f64> = c.points.iter().map(|p| p.raw_rate).collect();
        let clamped: Vec<f64> = c.points.iter().map(|p| p.rate).collect();
        assert_eq!(raw, vec![2.0, 1.0, 0.0, -1.0, -2.0]);
        assert_eq!(clamped, vec![2.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(c.is_non_increasing());
        assert_eq!(
            sweep(&Linear { zero_at: 2.0 }, 0.0, 0.5, 1.0)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn max_distance_on_line() {
        let d = max_secure_distance(&Linear { zero_at: 37.3 }, 100.0)
            .unwrap()
            .unwrap();
        assert!((d - 37.3).abs() <= DISTANCE_TOLERANCE_KM && d <= 37.3);
        assert_eq!(
            max_secure_distance(&Linear { zero_at: 0.0 }, 100.0).unwrap(),
            None
        );
        assert_eq!(
            max_secure_distance(&Linear { zero_at: 500.0 }, 100.0).unwrap(),
            Some(100.0)
        );
    }

    #[test]
    fn crossover_cases() {
        let c = crossover_distance(&Linear { zero_at: 12.345 }, &Constant(0.0), 50.0)
            .unwrap()
            .unwrap();
        assert!((c.length_km - 12.345).abs() <= DISTANCE_TOLERANCE_KM);
        assert!(!c.touching);
        let same = Linear { zero_at: 3.0 };
        assert_eq!(crossover_distance(&same, &same, 50.0).unwrap(), None);
        let touch = crossover_distance(&Vee, &Constant(0.0), 50.0)
            .unwrap()
            .unwrap();
        assert!(touch.touching);
        assert_eq!(touch.length_km, 9.5);
    }
}
