//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the simulator is generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index into `Self`.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Lossy view as `f64`, used for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier-compensated accumulator.
///
/// Slowly converging power sums (`alpha < 1`) lose several digits under
/// naive accumulation once `N` reaches a few thousand terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<CompensatedSum<T>>().value()
}

/// Pairwise (tree) reduction; the result depends only on the input order.
pub fn pairwise_sum<T, F>(items: &[T], zero: T, add: &F) -> T
where
    T: Copy,
    F: Fn(T, T) -> T,
{
    match items.len() {
        0 => zero,
        1 => items[0],
        2 => add(items[0], items[1]),
        n => {
            let (lo, hi) = items.split_at(n / 2);
            add(pairwise_sum(lo, zero, add), pairwise_sum(hi, zero, add))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive_on_cancellation() {
        let xs = [1.0e16_f64, 1.0, -1.0e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn pairwise_matches_sequential_for_integers() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs, 0.0, &|a, b| a + b), 5050.0);
        assert_eq!(pairwise_sum(&[] as &[f64], 0.0, &|a, b| a + b), 0.0);
    }

    #[test]
    fn literal_conversion_f32() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5_f32);
        assert_eq!(<f32 as Real>::from_count(3), 3.0_f32);
    }
}
