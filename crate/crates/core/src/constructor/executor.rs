//! Runs a [`Schedule`]: one linear solve per coordinate per step, free draws
//! where the pattern allows them, and backtracking over free draws when a
//! later step degenerates.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::constructor::expr::{CoefficientExpression, CoefficientId};
use crate::constructor::params::{DrawKey, ParameterSource};
use crate::constructor::schedule::{truncated_schedule, Schedule, ScheduleStep, TargetEntry, TargetPattern};
use crate::error::{Error, Result};
use crate::map::{quadratic_map, PolynomialMap};
use crate::orbits::{assert_primitive_period, PeriodCertificate};
use crate::point::ProjectivePoint;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedCoefficient {
    pub id: CoefficientId,
    /// Value at the time of solving; may still mention unknowns that later
    /// steps fix.
    pub value: CoefficientExpression,
    /// Multiplier of `id` in the targeted coordinate. Never zero.
    pub multiplier: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    /// Iterate produced by this step (1 for the image of the base point).
    pub step: usize,
    pub pattern: TargetPattern,
    pub solved: Vec<SolvedCoefficient>,
    /// Every value drawn at this step, rejected ones included.
    pub draws: Vec<Rational>,
    pub image: ProjectivePoint,
}

/// Partially solved map plus the concrete orbit reached so far.
///
/// `bindings` maps solved coefficients to affine expressions in the
/// coefficients that are still unknown; every substitution keeps that
/// invariant, so a binding never mentions a bound coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionState {
    dimension: usize,
    bindings: BTreeMap<CoefficientId, CoefficientExpression>,
    current: ProjectivePoint,
    orbit: Vec<ProjectivePoint>,
    transcript: Vec<TranscriptEntry>,
    free_values: BTreeMap<(usize, usize), Rational>,
}

impl ConstructionState {
    pub fn new(dimension: usize) -> Self {
        let base = ProjectivePoint::base(dimension);
        ConstructionState {
            dimension,
            bindings: BTreeMap::new(),
            current: base.clone(),
            orbit: alloc::vec![base],
            transcript: Vec::new(),
            free_values: BTreeMap::new(),
        }
    }

    /// Starts from user-fixed coefficients, e.g. `c0(1,1) = 1` and
    /// `c0(0,1) = 1 - c0(0,0)`.
    pub fn with_presets(dimension: usize, presets: &[(CoefficientId, CoefficientExpression)]) -> Result<Self> {
        let mut s = ConstructionState::new(dimension);
        for (id, value) in presets {
            s.check_id(id)?;
            for (u, _) in value.unknowns() {
                s.check_id(u)?;
            }
            if !s.is_unknown(id) {
                return Err(Error::InvalidPreset(alloc::format!("{} fixed twice", id)));
            }
            let resolved = s.resolve(value);
            if !resolved.coefficient_of(id).is_zero() {
                return Err(Error::InvalidPreset(alloc::format!("{} defined in terms of itself", id)));
            }
            s.bind(*id, resolved);
        }
        Ok(s)
    }

    fn check_id(&self, id: &CoefficientId) -> Result<()> {
        if id.coordinate >= self.dimension || id.k > self.dimension {
            return Err(Error::UnknownCoefficient(id.to_string()));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn current(&self) -> &ProjectivePoint {
        &self.current
    }

    /// Distinct points visited so far, starting with the base point.
    pub fn orbit(&self) -> &[ProjectivePoint] {
        &self.orbit
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    pub fn steps_done(&self) -> usize {
        self.transcript.len()
    }

    pub fn is_unknown(&self, id: &CoefficientId) -> bool {
        !self.bindings.contains_key(id)
    }

    pub fn unknowns(&self) -> Vec<CoefficientId> {
        CoefficientId::all(self.dimension).filter(|id| self.is_unknown(id)).collect()
    }

    /// Current value of `c_i(j,k)` in terms of the remaining unknowns.
    pub fn expression_of(&self, id: &CoefficientId) -> CoefficientExpression {
        self.bindings.get(id).cloned().unwrap_or_else(|| CoefficientExpression::variable(*id))
    }

    fn resolve(&self, value: &CoefficientExpression) -> CoefficientExpression {
        let mut out = value.clone();
        for (id, _) in value.unknowns() {
            if let Some(b) = self.bindings.get(id) {
                out.substitute(id, b);
            }
        }
        out
    }

    fn bind(&mut self, id: CoefficientId, value: CoefficientExpression) {
        for b in self.bindings.values_mut() {
            b.substitute(&id, &value);
        }
        self.bindings.insert(id, value);
    }

    /// Coordinate `i` of the image of `point`, as an affine expression in
    /// the unknowns. The last coordinate is always `x_N^2`.
    pub fn image_expression(&self, coordinate: usize, point: &[Rational]) -> CoefficientExpression {
        let n = self.dimension;
        let mut acc = CoefficientExpression::default();
        for j in 0..=n {
            if point[j].is_zero() {
                continue;
            }
            for k in j..=n {
                let m = &point[j] * &point[k];
                if m.is_zero() {
                    continue;
                }
                acc.add_scaled(&self.expression_of(&CoefficientId::new(coordinate, j, k)), &m);
            }
        }
        acc
    }

    /// The concrete map once nothing is unknown.
    pub fn to_map(&self) -> Option<PolynomialMap> {
        if !self.unknowns().is_empty() {
            return None;
        }
        let mut values = BTreeMap::new();
        for (id, e) in &self.bindings {
            values.insert(*id, e.as_constant()?.clone());
        }
        Some(quadratic_map(self.dimension, |i, j, k| values[&CoefficientId::new(i, j, k)].clone()))
    }
}

/// Draw accounting shared by a whole construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DrawBudget {
    pub total: usize,
    pub per_step: usize,
    used: usize,
}

impl DrawBudget {
    pub fn new(total: usize, per_step: usize) -> Self {
        DrawBudget { total, per_step, used: 0 }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    fn charge(&mut self) -> bool {
        if self.used >= self.total {
            return false;
        }
        self.used += 1;
        true
    }

    fn exhausted(&self) -> bool {
        self.used >= self.total
    }
}

impl Default for DrawBudget {
    fn default() -> Self {
        DrawBudget::new(1000, 24)
    }
}

enum Attempt {
    Accepted(ConstructionState),
    Rejected(Vec<Rational>),
}

/// Advances `state` by one schedule step.
///
/// `Exact` entries solve the step's designated coefficient in that
/// coordinate; `Free` entries draw the coordinate value and then solve the
/// same way; `Determined` entries require a constant image. Steps with free
/// entries retry draws from `first_attempt` up to the per-step limit.
/// Returns the new state and the attempt number that succeeded.
pub fn solve_step<S: ParameterSource + ?Sized>(
    state: &ConstructionState,
    step: &ScheduleStep,
    source: &mut S,
    first_attempt: usize,
    budget: &mut DrawBudget,
) -> Result<(ConstructionState, usize)> {
    if step.pattern.0.len() != state.dimension {
        return Err(Error::DimensionMismatch { expected: state.dimension, found: step.pattern.0.len() });
    }
    let step_no = state.steps_done() + 1;
    if !step.has_free() {
        return match try_step(state, step, source, 0, budget)? {
            Attempt::Accepted(s) => Ok((s, 0)),
            Attempt::Rejected(_) => Err(Error::OrbitCollision { step: step_no }),
        };
    }
    let mut rejected = Vec::new();
    for attempt in first_attempt..budget.per_step {
        match try_step(state, step, source, attempt, budget)? {
            Attempt::Accepted(mut s) => {
                if let Some(entry) = s.transcript.last_mut() {
                    rejected.append(&mut entry.draws);
                    entry.draws = rejected;
                }
                return Ok((s, attempt));
            }
            Attempt::Rejected(mut draws) => rejected.append(&mut draws),
        }
        if budget.exhausted() {
            break;
        }
    }
    Err(Error::ForbiddenExhausted { step: step_no })
}

fn try_step<S: ParameterSource + ?Sized>(
    state: &ConstructionState,
    step: &ScheduleStep,
    source: &mut S,
    attempt: usize,
    budget: &mut DrawBudget,
) -> Result<Attempt> {
    let index = state.steps_done();
    let step_no = index + 1;
    let point = state.current.coords().to_vec();
    let mut next = state.clone();
    let mut coords = Vec::with_capacity(state.dimension + 1);
    let mut solved = Vec::new();
    let mut draws = Vec::new();

    for (i, entry) in step.pattern.0.iter().enumerate() {
        let expr = next.image_expression(i, &point);
        if let TargetEntry::Determined { forbidden } = entry {
            let v = expr
                .as_constant()
                .ok_or(Error::NonlinearDependence { step: step_no, coordinate: i })?
                .clone();
            if forbidden.contains(&v) {
                return Err(Error::DegenerateImage { step: step_no, coordinate: i, value: v });
            }
            coords.push(v);
            continue;
        }
        let (j, k) = step.solves.ok_or(Error::NonlinearDependence { step: step_no, coordinate: i })?;
        let id = CoefficientId::new(i, j, k);
        let multiplier = expr.coefficient_of(&id);

        let target = match entry {
            TargetEntry::Exact(v) => v.clone(),
            TargetEntry::Free { forbidden, distinct_from } => {
                let drawn = multiplier.is_zero().then(|| expr.as_constant().cloned()).flatten();
                let v = match drawn {
                    Some(forced) => forced,
                    None if multiplier.is_zero() => {
                        return Err(Error::UnsolvableStep { step: step_no, coordinate: i });
                    }
                    None => {
                        if !budget.charge() {
                            return Err(Error::RetryBudgetExhausted {
                                budget: budget.total,
                                last: alloc::format!("draw at step {}", step_no),
                            });
                        }
                        let d = source.draw(DrawKey::Free { step: index, coordinate: i, attempt });
                        draws.push(d.clone());
                        d
                    }
                };
                let clashes = forbidden.contains(&v)
                    || distinct_from.iter().any(|s| state.free_values.get(&(*s, i)) == Some(&v));
                if clashes {
                    if multiplier.is_zero() {
                        return Err(Error::DegenerateImage { step: step_no, coordinate: i, value: v });
                    }
                    return Ok(Attempt::Rejected(draws));
                }
                next.free_values.insert((index, i), v.clone());
                v
            }
            TargetEntry::Determined { .. } => unreachable!(),
        };

        if multiplier.is_zero() {
            if expr.as_constant() != Some(&target) {
                return Err(Error::UnsolvableStep { step: step_no, coordinate: i });
            }
        } else {
            let value = expr.solve_for(&id, &target).expect("nonzero multiplier");
            next.bind(id, value.clone());
            solved.push(SolvedCoefficient { id, value, multiplier });
        }
        coords.push(target);
    }
    coords.push(Rational::one());
    let image = ProjectivePoint::normalize(coords).expect("last coordinate is 1");

    if let Some(pos) = state.orbit.iter().position(|p| *p == image) {
        let closing = pos == 0 && step.pattern.is_return();
        if !closing {
            if !draws.is_empty() {
                return Ok(Attempt::Rejected(draws));
            }
            return Err(Error::OrbitCollision { step: step_no });
        }
    } else {
        next.orbit.push(image.clone());
    }
    next.current = image.clone();
    next.transcript.push(TranscriptEntry { step: step_no, pattern: step.pattern.clone(), solved, draws, image });
    Ok(Attempt::Accepted(next))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Coefficients fixed before the schedule runs.
    pub presets: Vec<(CoefficientId, CoefficientExpression)>,
    /// Total draws allowed across all retries (default 1000).
    pub draw_budget: Option<usize>,
    /// Draws tried at one step before backtracking further (default 24).
    pub per_step_attempts: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub map: PolynomialMap,
    pub certificate: PeriodCertificate,
    pub transcript: Vec<TranscriptEntry>,
    /// Unknowns no step solved (shorter periods), with the values drawn.
    pub leftovers: Vec<(CoefficientId, Rational)>,
    pub draws_used: usize,
    pub schedule: Schedule,
}

struct Checkpoint {
    index: usize,
    before: ConstructionState,
    next_attempt: usize,
}

/// A degree-2 map on P^dimension for which `[0, ..., 0, 1]` has primitive
/// period `period`, certified by iteration before it is returned.
pub fn construct<S: ParameterSource + ?Sized>(
    dimension: usize,
    period: usize,
    source: &mut S,
    options: &ConstructOptions,
) -> Result<Construction> {
    let schedule = truncated_schedule(dimension, period)?;
    run_schedule(schedule, source, options)
}

/// Executes a closing schedule with backtracking over free draws.
pub fn run_schedule<S: ParameterSource + ?Sized>(
    schedule: Schedule,
    source: &mut S,
    options: &ConstructOptions,
) -> Result<Construction> {
    if !schedule.closes() {
        return Err(Error::InvalidPreset("schedule does not return to the base point".into()));
    }
    let mut budget = DrawBudget::new(options.draw_budget.unwrap_or(1000), options.per_step_attempts.unwrap_or(24));
    let initial = ConstructionState::with_presets(schedule.dimension, &options.presets)?;
    let mut stack: Vec<Checkpoint> = Vec::new();
    let mut state = initial;
    let mut index = 0;
    let mut resume_attempt = 0;

    loop {
        let outcome = if index < schedule.steps.len() {
            let step = &schedule.steps[index];
            solve_step(&state, step, source, resume_attempt, &mut budget).map(|(next, attempt)| {
                if step.has_free() {
                    stack.push(Checkpoint { index, before: state.clone(), next_attempt: attempt + 1 });
                }
                state = next;
                index += 1;
                resume_attempt = 0;
                None
            })
        } else {
            finish(&state, &schedule, source, &mut budget).map(Some)
        };

        match outcome {
            Ok(Some(done)) => return Ok(done),
            Ok(None) => {}
            Err(e) if e.is_recoverable() => {
                if budget.exhausted() {
                    return Err(Error::RetryBudgetExhausted { budget: budget.total, last: e.to_string() });
                }
                let cp = stack.pop().ok_or(e)?;
                state = cp.before;
                index = cp.index;
                resume_attempt = cp.next_attempt;
            }
            Err(e) => return Err(e),
        }
    }
}

fn finish<S: ParameterSource + ?Sized>(
    state: &ConstructionState,
    schedule: &Schedule,
    source: &mut S,
    budget: &mut DrawBudget,
) -> Result<Construction> {
    let mut st = state.clone();
    let mut leftovers = Vec::new();
    for (ordinal, id) in st.unknowns().into_iter().enumerate() {
        let v = source.draw(DrawKey::Leftover { ordinal });
        st.bind(id, CoefficientExpression::constant(v.clone()));
        leftovers.push((id, v));
    }
    let map = st.to_map().expect("every coefficient is bound to a constant");
    let base = ProjectivePoint::base(schedule.dimension);
    let certificate = assert_primitive_period(&map, &base, schedule.target_period)
        .map_err(|e| Error::PrimitivityFailure(e.to_string()))?;
    Ok(Construction {
        map,
        certificate,
        transcript: st.transcript,
        leftovers,
        draws_used: budget.used(),
        schedule: schedule.clone(),
    })
}
