//! Choosing block dimensions and periods whose lcm is as large as possible,
//! then building the witness map block by block.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;

use crate::constructor::{construct, period_bound, ConstructOptions, ParameterSource, Seeded};
use crate::error::{Error, Result};
use crate::map::{power_map, PolynomialMap};
use crate::morphism_cert::{is_morphism, MorphismCertificate, MorphismDecision};
use crate::orbits::{assert_primitive_period, PeriodCertificate};
use crate::point::ProjectivePoint;
use crate::products::product_map;

/// Largest total dimension searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanBlock {
    pub dim: usize,
    pub period: usize,
}

/// Blocks are kept in descending `(dim, period)` order. Their dimensions
/// may sum to less than `dimension`; the rest is padded with a block that
/// fixes the base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPlan {
    pub dimension: usize,
    pub blocks: Vec<PlanBlock>,
    pub achieved: u128,
}

impl PeriodPlan {
    pub fn new(dimension: usize, mut blocks: Vec<PlanBlock>) -> Self {
        blocks.sort_by(|a, b| b.cmp(a));
        let achieved = blocks.iter().fold(1u128, |acc, b| acc.lcm(&(b.period as u128)));
        PeriodPlan { dimension, blocks, achieved }
    }

    pub fn used_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    /// Larger period first, then fewer blocks, then the smaller block list.
    fn preference(&self, other: &PeriodPlan) -> Ordering {
        other
            .achieved
            .cmp(&self.achieved)
            .then(self.blocks.len().cmp(&other.blocks.len()))
            .then_with(|| self.blocks.cmp(&other.blocks))
    }
}

/// Periods allowed per block dimension: `1..=bound(M)` plus any extras
/// backed by known maps (e.g. period 8 or 9 on P^2).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeriodMenu {
    extra: BTreeMap<usize, BTreeSet<usize>>,
}

impl PeriodMenu {
    pub fn with_extra(mut self, dim: usize, period: usize) -> Self {
        self.add_extra(dim, period);
        self
    }

    pub fn add_extra(&mut self, dim: usize, period: usize) {
        self.extra.entry(dim).or_default().insert(period);
    }

    pub fn periods(&self, dim: usize) -> Vec<usize> {
        let mut set: BTreeSet<usize> = (1..=period_bound(dim)).collect();
        if let Some(more) = self.extra.get(&dim) {
            set.extend(more);
        }
        set.into_iter().collect()
    }

    pub fn allows(&self, block: PlanBlock) -> bool {
        block.dim >= 1 && block.period >= 1 && self.periods(block.dim).contains(&block.period)
    }
}

pub fn best_plan(dimension: usize) -> PeriodPlan {
    best_plan_with_menu(dimension, &PeriodMenu::default())
}

/// Exhaustive up to [`EXHAUSTIVE_LIMIT`], then extended one dimension at a
/// time, which keeps the result nondecreasing in `dimension`.
pub fn best_plan_with_menu(dimension: usize, menu: &PeriodMenu) -> PeriodPlan {
    if dimension <= EXHAUSTIVE_LIMIT {
        return exhaustive_plan(dimension, menu);
    }
    let mut table: Vec<PeriodPlan> = (0..=EXHAUSTIVE_LIMIT).map(|n| exhaustive_plan(n, menu)).collect();
    for n in EXHAUSTIVE_LIMIT + 1..=dimension {
        let mut best = PeriodPlan { dimension: n, ..table[n - 1].clone() };
        for m in 1..=n {
            let base = &table[n - m];
            for p in menu.periods(m) {
                let Some(_) = base.achieved.checked_mul(p as u128) else { continue };
                let mut blocks = base.blocks.clone();
                blocks.push(PlanBlock { dim: m, period: p });
                let cand = PeriodPlan::new(n, blocks);
                if cand.preference(&best) == Ordering::Less {
                    best = cand;
                }
            }
        }
        table.push(best);
    }
    table.pop().expect("table covers dimension")
}

fn exhaustive_plan(dimension: usize, menu: &PeriodMenu) -> PeriodPlan {
    let mut items: Vec<PlanBlock> = (1..=dimension)
        .flat_map(|dim| menu.periods(dim).into_iter().filter(|&p| p > 1).map(move |period| PlanBlock { dim, period }))
        .collect();
    items.sort_by(|a, b| b.cmp(a));
    let mut best = PeriodPlan::new(dimension, Vec::new());
    let mut chosen = Vec::new();
    search(&items, 0, dimension, 1, &mut chosen, &mut best, dimension);
    best
}

/// Multisets of `items` in index order with total dimension at most
/// `remaining`. A block whose period divides the running lcm is skipped:
/// dropping it keeps the lcm and uses fewer blocks.
fn search(
    items: &[PlanBlock],
    start: usize,
    remaining: usize,
    lcm: u128,
    chosen: &mut Vec<PlanBlock>,
    best: &mut PeriodPlan,
    dimension: usize,
) {
    if lcm > best.achieved || (lcm == best.achieved && chosen.len() <= best.blocks.len()) {
        let cand = PeriodPlan::new(dimension, chosen.clone());
        if cand.preference(best) == Ordering::Less {
            *best = cand;
        }
    }
    for (i, b) in items.iter().enumerate().skip(start) {
        if b.dim > remaining || lcm.is_multiple_of(b.period as u128) {
            continue;
        }
        chosen.push(*b);
        search(items, i, remaining - b.dim, lcm.lcm(&(b.period as u128)), chosen, best, dimension);
        chosen.pop();
    }
}

/// A map with a known period at the base point, offered to [`realize_plan`]
/// for blocks outside the constructible range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraBlock {
    pub period: usize,
    pub map: PolynomialMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub plan: PeriodPlan,
    pub map: PolynomialMap,
    pub point: ProjectivePoint,
    pub period: PeriodCertificate,
    pub morphism: MorphismCertificate,
    /// Block maps in plan order.
    pub blocks: Vec<PolynomialMap>,
}

/// Attempts per block before the plan is declared infeasible.
pub const BLOCK_ATTEMPTS: usize = 16;

/// Builds every block (retrying until it is a morphism), splices them and
/// certifies the period and morphism property of the result.
///
/// `sources(block, attempt)` supplies the parameters for each try.
pub fn realize_plan<F, S>(plan: &PeriodPlan, mut sources: F, extras: &[ExtraBlock]) -> Result<Realization>
where
    F: FnMut(usize, usize) -> S,
    S: ParameterSource,
{
    if plan.used_dimension() > plan.dimension || plan.blocks.is_empty() && plan.dimension == 0 {
        return Err(Error::PlanInfeasible { block: 0, reason: "block dimensions exceed the total".into() });
    }
    let mut blocks = Vec::with_capacity(plan.blocks.len());
    for (index, block) in plan.blocks.iter().enumerate() {
        blocks.push(realize_block(index, *block, &mut sources, extras)?);
    }
    let pad = plan.dimension - plan.used_dimension();
    let mut parts = blocks.clone();
    if pad > 0 {
        parts.push(power_map(pad, 2));
    }
    let mut iter = parts.into_iter();
    let mut map = iter.next().expect("at least one block or padding");
    for next in iter {
        map = product_map(&map, &next)?;
    }
    let point = ProjectivePoint::base(plan.dimension);
    let achieved = usize::try_from(plan.achieved)
        .map_err(|_| Error::PlanInfeasible { block: 0, reason: "period too large to certify".into() })?;
    let period = assert_primitive_period(&map, &point, achieved)?;
    let morphism = is_morphism(&map);
    if morphism.decision != MorphismDecision::Morphism {
        return Err(Error::PlanInfeasible { block: 0, reason: "spliced map has a common zero".into() });
    }
    Ok(Realization { plan: plan.clone(), map, point, period, morphism, blocks })
}

/// [`realize_plan`] with seeded sources derived from one seed.
pub fn realize_plan_seeded(plan: &PeriodPlan, seed: u64, extras: &[ExtraBlock]) -> Result<Realization> {
    realize_plan(plan, |block, attempt| Seeded::new(mix(seed, block, attempt)), extras)
}

fn mix(seed: u64, block: usize, attempt: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((block as u64) << 32)
        .wrapping_add(attempt as u64)
}

fn realize_block<F, S>(index: usize, block: PlanBlock, sources: &mut F, extras: &[ExtraBlock]) -> Result<PolynomialMap>
where
    F: FnMut(usize, usize) -> S,
    S: ParameterSource,
{
    if let Some(extra) = extras.iter().find(|e| e.map.dimension() == block.dim && e.period == block.period) {
        let base = ProjectivePoint::base(block.dim);
        assert_primitive_period(&extra.map, &base, block.period)
            .map_err(|e| Error::PlanInfeasible { block: index, reason: e.to_string() })?;
        return Ok(extra.map.clone());
    }
    if block.period > period_bound(block.dim) {
        return Err(Error::PlanInfeasible { block: index, reason: "no map supplied for this period".into() });
    }
    let mut last = alloc::string::String::from("no morphism found");
    for attempt in 0..BLOCK_ATTEMPTS {
        let mut source = sources(index, attempt);
        match construct(block.dim, block.period, &mut source, &ConstructOptions::default()) {
            Ok(c) if is_morphism(&c.map).decision == MorphismDecision::Morphism => return Ok(c.map),
            Ok(_) => {}
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::PlanInfeasible { block: index, reason: last })
}
