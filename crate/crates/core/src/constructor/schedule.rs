//! Step-by-step target patterns for orbit forcing.
//!
//! A schedule lists, for each iterate of the base point `[0, ..., 0, 1]`,
//! what the next point must look like and which monomial `x_j x_k` has its
//! coefficients solved in every leading coordinate. The executor in
//! [`super::executor`] runs any schedule; the generators here produce the
//! standard ones:
//!
//! * window phase: the 0/1 points `[1,0,...,0,1] -> [0,1,0,...,1] -> ...`
//!   whose 1-blocks widen until the all-ones point (`window_schedule`);
//! * extension phase: steps that place a free value `K` in one slot so the
//!   next image depends on a single diagonal coefficient set `c_i(k,k)`,
//!   interleaved with steps whose image is already forced
//!   (`extension_schedule`).
//!
//! In the extension phase for `N >= 3` the forced-image steps follow the
//! first free step as `[0, K, 1, ..., 1]`, i.e. `K` comes from `c_1(0, N-1)`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::constructor::expr::CoefficientId;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetEntry {
    /// The coordinate must equal this value.
    Exact(Rational),
    /// Any value outside `forbidden`, and different from the same
    /// coordinate's value at each step listed in `distinct_from`.
    Free { forbidden: Vec<Rational>, distinct_from: Vec<usize> },
    /// No unknown may remain; the forced value must avoid `forbidden`.
    Determined { forbidden: Vec<Rational> },
}

impl TargetEntry {
    pub fn exact(v: i64) -> Self {
        TargetEntry::Exact(int(v))
    }

    fn free(distinct_from: Vec<usize>) -> Self {
        TargetEntry::Free { forbidden: vec![int(0), int(1)], distinct_from }
    }

    fn determined() -> Self {
        TargetEntry::Determined { forbidden: Vec::new() }
    }

    fn determined_nondegenerate() -> Self {
        TargetEntry::Determined { forbidden: vec![int(0), int(1)] }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, TargetEntry::Free { .. })
    }
}

impl core::fmt::Display for TargetEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TargetEntry::Exact(v) => write!(f, "{}", v),
            TargetEntry::Free { .. } => f.write_str("K"),
            TargetEntry::Determined { .. } => f.write_str("*"),
        }
    }
}

/// One entry per leading coordinate; the last coordinate is always 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetPattern(pub Vec<TargetEntry>);

impl TargetPattern {
    pub fn entries(&self) -> &[TargetEntry] {
        &self.0
    }

    fn exact(values: &[i64]) -> Self {
        TargetPattern(values.iter().map(|&v| TargetEntry::exact(v)).collect())
    }

    fn returning(dimension: usize) -> Self {
        TargetPattern(vec![TargetEntry::Exact(Rational::zero()); dimension])
    }

    pub fn is_return(&self) -> bool {
        self.0.iter().all(|e| matches!(e, TargetEntry::Exact(v) if v.is_zero()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleStep {
    pub pattern: TargetPattern,
    /// `(j, k)` such that `c_i(j,k)` is solved in every coordinate `i`.
    /// `None` for steps whose image is already forced.
    pub solves: Option<(usize, usize)>,
}

impl ScheduleStep {
    pub fn has_free(&self) -> bool {
        self.pattern.0.iter().any(TargetEntry::is_free)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub dimension: usize,
    pub steps: Vec<ScheduleStep>,
    /// Coefficients whose value is drawn rather than solved.
    pub free_parameters: Vec<CoefficientId>,
    /// Number of steps; for a closing schedule this is the period of the
    /// base point.
    pub target_period: usize,
}

impl Schedule {
    fn from_steps(dimension: usize, steps: Vec<ScheduleStep>) -> Self {
        let free_parameters = steps
            .iter()
            .filter_map(|s| s.solves.map(|jk| (s, jk)))
            .flat_map(|(s, (j, k))| {
                s.pattern
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.is_free())
                    .map(move |(i, _)| CoefficientId::new(i, j, k))
            })
            .collect();
        let target_period = steps.len();
        Schedule { dimension, steps, free_parameters, target_period }
    }

    /// True when the last step returns to `[0, ..., 0, 1]`.
    pub fn closes(&self) -> bool {
        self.steps.last().is_some_and(|s| s.pattern.is_return())
    }

    /// Monomials `(j, k)` solved by the steps, in order.
    pub fn solved_monomials(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.steps.iter().filter_map(|s| s.solves)
    }
}

/// Largest period the standard construction reaches on P^N:
/// 3 on P^1, 7 on P^2, `(N+1)(N+2)/2 + floor((N-1)/2)` beyond.
pub fn period_bound(dimension: usize) -> usize {
    match dimension {
        0 => 1,
        1 => 3,
        2 => 7,
        n => (n + 1) * (n + 2) / 2 + (n - 1) / 2,
    }
}

/// The 0/1 points visited in the window phase: 1-blocks of width 1, 2, ...
/// sliding left to right over slots `0..N`, ending with all ones.
fn window_points(n: usize) -> Vec<Vec<i64>> {
    let mut pts = Vec::new();
    for width in 1..=n {
        for start in 0..=(n - width) {
            let mut p = vec![0; n];
            p[start..start + width].iter_mut().for_each(|v| *v = 1);
            pts.push(p);
        }
    }
    pts
}

/// Monomial solved when leaving a window point: `x_s x_N` for width 1,
/// `x_s x_e` (outer ends of the block) otherwise.
fn window_solve(n: usize, p: &[i64]) -> (usize, usize) {
    let first = p.iter().position(|&v| v == 1).expect("window has a 1");
    let last = p.iter().rposition(|&v| v == 1).expect("window has a 1");
    if first == last {
        (first, n)
    } else {
        (first, last)
    }
}

/// Window phase on P^N: `N (N+1) / 2` steps from `[0, ..., 0, 1]` to the
/// all-ones point. Leaves `c_i(0, N-1)` and the diagonals `c_i(k,k)`,
/// `k < N`, unsolved.
pub fn window_schedule(dimension: usize) -> Result<Schedule> {
    if dimension < 2 {
        return Err(Error::InvalidDimension(dimension));
    }
    Ok(Schedule::from_steps(dimension, window_steps(dimension)))
}

fn window_steps(n: usize) -> Vec<ScheduleStep> {
    let pts = window_points(n);
    let mut steps = Vec::with_capacity(pts.len());
    steps.push(ScheduleStep { pattern: TargetPattern::exact(&pts[0]), solves: Some((n, n)) });
    for pair in pts.windows(2) {
        steps.push(ScheduleStep { pattern: TargetPattern::exact(&pair[1]), solves: Some(window_solve(n, &pair[0])) });
    }
    steps
}

/// Full schedule on P^N, `N >= 2`, closing at `period_bound(N)`.
pub fn extension_schedule(dimension: usize) -> Result<Schedule> {
    if dimension < 2 {
        return Err(Error::InvalidDimension(dimension));
    }
    let n = dimension;
    let mut steps = window_steps(n);
    let exact = |v: i64| TargetEntry::exact(v);
    let ones_then = |lead: Vec<TargetEntry>| -> TargetPattern {
        let mut p = lead;
        while p.len() < n {
            p.push(exact(1));
        }
        TargetPattern(p)
    };

    if n == 2 {
        // [1,1,1] -> [0,K,1] -> [0,K',1] -> forced [k0,k1,1] -> [0,0,1]
        let k01 = steps.len();
        steps.push(ScheduleStep { pattern: TargetPattern(vec![exact(0), TargetEntry::free(vec![])]), solves: Some((0, 1)) });
        steps.push(ScheduleStep {
            pattern: TargetPattern(vec![exact(0), TargetEntry::free(vec![k01])]),
            solves: Some((1, 1)),
        });
        steps.push(ScheduleStep {
            pattern: TargetPattern(vec![TargetEntry::determined_nondegenerate(), TargetEntry::determined()]),
            solves: None,
        });
        steps.push(ScheduleStep { pattern: TargetPattern::returning(n), solves: Some((0, 0)) });
        return Ok(Schedule::from_steps(n, steps));
    }

    // [1,...,1] -> [0,K,1,...,1]
    let q1 = steps.len();
    steps.push(ScheduleStep {
        pattern: ones_then(vec![exact(0), TargetEntry::free(vec![])]),
        solves: Some((0, n - 1)),
    });
    // -> [K',1,...,1,0,1]
    let mut p = vec![TargetEntry::free(vec![])];
    p.extend((1..n - 1).map(|_| exact(1)));
    p.push(exact(0));
    steps.push(ScheduleStep { pattern: TargetPattern(p), solves: Some((1, 1)) });
    // -> [0,K'',1,...,1]
    steps.push(ScheduleStep {
        pattern: ones_then(vec![exact(0), TargetEntry::free(vec![q1])]),
        solves: Some((0, 0)),
    });
    // -> forced [k0,1,...,1,k_{N-1},1]
    let mut p: Vec<_> = (0..n - 1).map(|_| TargetEntry::determined()).collect();
    p.push(TargetEntry::determined_nondegenerate());
    steps.push(ScheduleStep { pattern: TargetPattern(p), solves: None });

    // Remaining diagonal sets, in the order they are consumed.
    let mut remaining: Vec<usize> = core::iter::once(n - 1).chain(2..n - 1).collect();
    while !remaining.is_empty() {
        match remaining.len() {
            1 => {
                steps.push(ScheduleStep { pattern: TargetPattern::returning(n), solves: Some((remaining[0], remaining[0])) });
                remaining.clear();
            }
            2 => {
                // -> [0,...,0,K,1,1] with K in slot N-2, then close.
                let mut p: Vec<_> = (0..n).map(|_| exact(0)).collect();
                p[n - 2] = TargetEntry::free(vec![]);
                p[n - 1] = exact(1);
                steps.push(ScheduleStep { pattern: TargetPattern(p), solves: Some((remaining[0], remaining[0])) });
                steps.push(ScheduleStep { pattern: TargetPattern::returning(n), solves: Some((remaining[1], remaining[1])) });
                remaining.clear();
            }
            _ => {
                // -> [0,..,0,K,1,..,1,0,1] with K in slot s, twice, then a
                // forced image whose slot s+1 carries the next unknown.
                let s = remaining[1];
                let pattern = |distinct_from: Vec<usize>| {
                    let mut p: Vec<_> = (0..n).map(|_| exact(0)).collect();
                    p[s] = TargetEntry::free(distinct_from);
                    for slot in p.iter_mut().take(n - 1).skip(s + 1) {
                        *slot = exact(1);
                    }
                    TargetPattern(p)
                };
                let first = steps.len();
                steps.push(ScheduleStep { pattern: pattern(vec![]), solves: Some((remaining[0], remaining[0])) });
                steps.push(ScheduleStep { pattern: pattern(vec![first]), solves: Some((s, s)) });
                let mut p: Vec<_> = (0..n).map(|_| TargetEntry::determined()).collect();
                p[remaining[2]] = TargetEntry::determined_nondegenerate();
                steps.push(ScheduleStep { pattern: TargetPattern(p), solves: None });
                remaining.drain(..2);
            }
        }
    }
    Ok(Schedule::from_steps(n, steps))
}

/// P^1: `[0,1] -> [K,1] -> [K',1] -> [0,1]`, solving `c`, `b`, `a` of
/// `a x^2 + b x y + c y^2` in that order.
pub fn warmup_schedule() -> Schedule {
    let free = |forbidden: Vec<Rational>| TargetEntry::Free { forbidden, distinct_from: Vec::new() };
    let steps = vec![
        ScheduleStep { pattern: TargetPattern(vec![free(vec![int(0)])]), solves: Some((1, 1)) },
        ScheduleStep { pattern: TargetPattern(vec![free(vec![int(0)])]), solves: Some((0, 1)) },
        ScheduleStep { pattern: TargetPattern::returning(1), solves: Some((0, 0)) },
    ];
    Schedule::from_steps(1, steps)
}

/// Closing schedule reaching the full bound on P^N.
pub fn full_schedule(dimension: usize) -> Result<Schedule> {
    match dimension {
        0 => Err(Error::InvalidDimension(0)),
        1 => Ok(warmup_schedule()),
        n => extension_schedule(n),
    }
}

/// Closing schedule with the requested period.
///
/// Step `period` of the full schedule is turned into a return to the base
/// point. When that step has a forced image, the step before it is changed
/// to put a free value in the slot of a diagonal set no earlier step solves,
/// and the return uses that set instead.
pub fn truncated_schedule(dimension: usize, period: usize) -> Result<Schedule> {
    let full = full_schedule(dimension)?;
    let bound = full.target_period;
    if period == 0 || period > bound {
        return Err(Error::PeriodOutOfRange { dimension, period, bound });
    }
    if period == bound {
        return Ok(full);
    }
    let mut steps: Vec<ScheduleStep> = full.steps[..period].to_vec();
    let last = period - 1;
    if steps[last].solves.is_some() {
        steps[last].pattern = TargetPattern::returning(dimension);
        return Ok(Schedule::from_steps(dimension, steps));
    }
    // Forced step: reroute through an unused diagonal. Forced steps never
    // come first, so `last >= 1`.
    let used: Vec<(usize, usize)> = steps[..last].iter().filter_map(|s| s.solves).collect();
    let spare = (0..dimension)
        .rev()
        .find(|&d| !used.contains(&(d, d)))
        .ok_or(Error::PeriodOutOfRange { dimension, period, bound })?;
    let mut p: Vec<_> = (0..dimension).map(|_| TargetEntry::exact(0)).collect();
    p[spare] = TargetEntry::free(vec![]);
    steps[last - 1].pattern = TargetPattern(p);
    steps[last] = ScheduleStep { pattern: TargetPattern::returning(dimension), solves: Some((spare, spare)) };
    Ok(Schedule::from_steps(dimension, steps))
}
