//! Where free values come from.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{int, Rational};

/// Identifies a single draw so that sources can be order independent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DrawKey {
    /// Value of a free coordinate at a schedule step; `attempt` counts
    /// retries at that step.
    Free { step: usize, coordinate: usize, attempt: usize },
    /// Value for an unknown the schedule never touched (shorter periods).
    Leftover { ordinal: usize },
}

pub trait ParameterSource {
    fn draw(&mut self, key: DrawKey) -> Rational;
}

impl<S: ParameterSource + ?Sized> ParameterSource for &mut S {
    fn draw(&mut self, key: DrawKey) -> Rational {
        (**self).draw(key)
    }
}

/// 2, 3, 4, ... per step; keeps coefficient heights low.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sequential;

impl ParameterSource for Sequential {
    fn draw(&mut self, key: DrawKey) -> Rational {
        match key {
            DrawKey::Free { attempt, .. } => int(2 + attempt as i64),
            DrawKey::Leftover { ordinal } => int(2 + ordinal as i64),
        }
    }
}

/// Small integers in `[-30, 30]`, a pure function of the seed and the key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seeded {
    pub seed: u64,
}

impl Seeded {
    pub fn new(seed: u64) -> Self {
        Seeded { seed }
    }

    fn stream_id(key: DrawKey) -> u64 {
        match key {
            DrawKey::Free { step, coordinate, attempt } => {
                ((step as u64) << 40) ^ ((coordinate as u64) << 24) ^ attempt as u64
            }
            DrawKey::Leftover { ordinal } => (1u64 << 63) | ordinal as u64,
        }
    }
}

impl ParameterSource for Seeded {
    fn draw(&mut self, key: DrawKey) -> Rational {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(Self::stream_id(key));
        int(rng.gen_range(-30i64..=30))
    }
}

/// Replays a fixed list of values, then falls back to another source.
#[derive(Clone, Debug)]
pub struct Scripted<S> {
    queue: VecDeque<Rational>,
    fallback: S,
}

impl<S> Scripted<S> {
    pub fn new(values: Vec<Rational>, fallback: S) -> Self {
        Scripted { queue: values.into(), fallback }
    }
}

impl<S: ParameterSource> ParameterSource for Scripted<S> {
    fn draw(&mut self, key: DrawKey) -> Rational {
        match self.queue.pop_front() {
            Some(v) => v,
            None => self.fallback.draw(key),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_is_a_function_of_key() {
        let k = DrawKey::Free { step: 4, coordinate: 1, attempt: 0 };
        assert_eq!(Seeded::new(7).draw(k), Seeded::new(7).draw(k));
        let values: Vec<_> = (0..32).map(|s| Seeded::new(s).draw(k)).collect();
        assert!(values.iter().any(|v| *v != values[0]));
    }

    #[test]
    fn scripted_then_fallback() {
        let mut s = Scripted::new(alloc::vec![int(0), int(1)], Sequential);
        let k = DrawKey::Free { step: 0, coordinate: 0, attempt: 2 };
        assert_eq!(s.draw(k), int(0));
        assert_eq!(s.draw(k), int(1));
        assert_eq!(s.draw(k), int(4));
    }
}
