//! Object universe, bipartitions and cost-sorted cut pools.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::{BitSet, SideRef};
use crate::error::{Result, TangleError};

/// The objects `0..n` that every cut in a pool partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectUniverse {
    n: usize,
}

impl ObjectUniverse {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(TangleError::params("object universe must be non-empty"));
        }
        Ok(ObjectUniverse { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Which side of a bipartition an orientation points to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The stored side (the one containing object 0).
    A,
    /// The complement of the stored side.
    Complement,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::A => Direction::Complement,
            Direction::Complement => Direction::A,
        }
    }

    #[inline]
    pub fn is_complement(self) -> bool {
        self == Direction::Complement
    }
}

/// Provenance of an axis-parallel cut `{x_axis < threshold}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisCutMeta {
    pub axis: usize,
    pub threshold: f64,
    /// Whether the below-threshold half-space is the stored side `A`.
    pub below_is_side_a: bool,
}

impl AxisCutMeta {
    /// Direction that selects the below-threshold side.
    pub fn below_direction(&self) -> Direction {
        if self.below_is_side_a {
            Direction::A
        } else {
            Direction::Complement
        }
    }
}

/// One unordered cut `{A, A^∁}` of the universe.
///
/// The stored side always contains object 0, so a cut and its complement
/// produce the same value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bipartition {
    id: usize,
    side_a: BitSet,
    cost: f64,
    axis: Option<AxisCutMeta>,
}

impl Bipartition {
    /// Normalises `membership` to its canonical side and checks both sides are non-empty.
    pub fn new(universe: ObjectUniverse, membership: BitSet, id: usize) -> Result<Self> {
        if membership.len() != universe.len() {
            return Err(TangleError::LengthMismatch {
                expected: universe.len(),
                found: membership.len(),
            });
        }
        let ones = membership.count_ones();
        if ones == 0 || ones == membership.len() {
            return Err(TangleError::EmptySide);
        }
        let side_a = if membership.get(0) {
            membership
        } else {
            membership.complement()
        };
        Ok(Bipartition {
            id,
            side_a,
            cost: 0.0,
            axis: None,
        })
    }

    /// Attaches axis metadata where `below` is the membership passed to [`Bipartition::new`].
    pub(crate) fn with_axis(mut self, axis: usize, threshold: f64, below: &BitSet) -> Self {
        self.axis = Some(AxisCutMeta {
            axis,
            threshold,
            below_is_side_a: below.get(0),
        });
        self
    }

    #[inline]
    pub fn id(&self) -> usize {
        self.id
    }

    #[inline]
    pub fn side_a(&self) -> &BitSet {
        &self.side_a
    }

    #[inline]
    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn set_cost(&mut self, cost: f64) {
        self.cost = cost;
    }

    pub fn axis(&self) -> Option<&AxisCutMeta> {
        self.axis.as_ref()
    }

    #[inline]
    pub fn num_objects(&self) -> usize {
        self.side_a.len()
    }

    pub fn size_a(&self) -> usize {
        self.side_a.count_ones()
    }

    pub fn side(&self, direction: Direction) -> SideRef<'_> {
        SideRef::with_flip(&self.side_a, direction.is_complement())
    }

    pub fn side_set(&self, direction: Direction) -> BitSet {
        self.side(direction).to_bitset()
    }

    /// The direction whose side contains object `v`.
    #[inline]
    pub fn direction_of(&self, v: usize) -> Direction {
        if self.side_a.get(v) {
            Direction::A
        } else {
            Direction::Complement
        }
    }
}

/// `make_cut(membership, id)` over the universe implied by `universe`.
pub fn make_cut(universe: ObjectUniverse, membership: BitSet, id: usize) -> Result<Bipartition> {
    Bipartition::new(universe, membership, id)
}

/// Cuts over one universe, sorted by `(cost, id)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutPool {
    universe: ObjectUniverse,
    cuts: Vec<Bipartition>,
}

fn cut_order(x: &Bipartition, y: &Bipartition) -> Ordering {
    x.cost
        .total_cmp(&y.cost)
        .then_with(|| x.id.cmp(&y.id))
}

impl CutPool {
    pub fn new(universe: ObjectUniverse, mut cuts: Vec<Bipartition>) -> Result<Self> {
        for c in &cuts {
            if c.num_objects() != universe.len() {
                return Err(TangleError::LengthMismatch {
                    expected: universe.len(),
                    found: c.num_objects(),
                });
            }
            if !c.cost.is_finite() {
                return Err(TangleError::params(format!(
                    "cut {} has non-finite cost {}",
                    c.id, c.cost
                )));
            }
        }
        cuts.sort_by(cut_order);
        Ok(CutPool { universe, cuts })
    }

    pub fn empty(universe: ObjectUniverse) -> Self {
        CutPool {
            universe,
            cuts: Vec::new(),
        }
    }

    #[inline]
    pub fn universe(&self) -> ObjectUniverse {
        self.universe
    }

    #[inline]
    pub fn num_objects(&self) -> usize {
        self.universe.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn cuts(&self) -> &[Bipartition] {
        &self.cuts
    }

    pub fn get(&self, position: usize) -> &Bipartition {
        &self.cuts[position]
    }

    pub fn into_cuts(self) -> Vec<Bipartition> {
        self.cuts
    }

    /// Position of the cut with stable id `id`.
    pub fn position_of(&self, id: usize) -> Option<usize> {
        self.cuts.iter().position(|c| c.id == id)
    }

    /// Evaluates `cost` on every cut (in parallel) and re-sorts.
    pub fn with_costs<F>(self, cost: F) -> Result<CutPool>
    where
        F: Fn(&Bipartition) -> Result<f64> + Sync,
    {
        let costs: Vec<f64> = self
            .cuts
            .par_iter()
            .map(&cost)
            .collect::<Result<Vec<_>>>()?;
        let mut cuts = self.cuts;
        for (c, v) in cuts.iter_mut().zip(costs) {
            c.cost = v;
        }
        CutPool::new(self.universe, cuts)
    }

    /// Drops cuts whose stored side repeats an earlier one, keeping the first occurrence.
    pub fn dedup(self) -> CutPool {
        let mut seen = std::collections::HashSet::new();
        let cuts = self
            .cuts
            .into_iter()
            .filter(|c| seen.insert(c.side_a.clone()))
            .collect();
        CutPool {
            universe: self.universe,
            cuts,
        }
    }

    /// The pool with every object replaced by `times` copies (cut structure unchanged).
    pub fn replicate(&self, times: usize) -> Result<CutPool> {
        let universe = ObjectUniverse::new(self.universe.len() * times)?;
        let cuts = self
            .cuts
            .iter()
            .map(|c| {
                let mut b = Bipartition::new(universe, c.side_a.repeat(times), c.id)?;
                b.cost = c.cost;
                b.axis = c.axis;
                Ok(b)
            })
            .collect::<Result<Vec<_>>>()?;
        CutPool::new(universe, cuts)
    }
}
