//! Per-module trajectory replay with reservoir retention.
//!
//! Every trajectory is assigned a reservoir value, a uniform(0,1) priority
//! drawn exactly once at its first insertion and never regenerated. Capacity
//! is counted in frames; when a buffer overflows, whole trajectories are
//! evicted smallest-reservoir-value-first, so each equal-length trajectory
//! ever offered has the same chance of still being present. Merging two
//! buffers re-offers the dropped module's trajectories with their original
//! reservoir values, which makes retention independent of collection time.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One environment transition as stored for replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Step {
    pub observation: Vec<f64>,
    pub action: usize,
    /// Behavior policy distribution over actions at collection time.
    pub behavior_probs: Vec<f64>,
    /// Reward after clipping to the configured range.
    pub reward: f64,
    pub done: bool,
}

/// One episode's steps plus replay bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    /// Assigned at first insertion into a buffer; immutable afterwards.
    reservoir_value: Option<f64>,
    pub trajectory_id: u64,
    /// Undiscounted reward sum, for diagnostics.
    pub episode_return: f64,
    /// True when the episode was cut off by a step cap rather than ending.
    pub truncated: bool,
    /// Observation after the last step; present for truncated episodes so
    /// value targets can bootstrap instead of assuming a terminal state.
    pub final_observation: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn new(steps: Vec<Step>, trajectory_id: u64) -> Result<Self> {
        Self::build(steps, trajectory_id, false, None)
    }

    pub fn truncated(
        steps: Vec<Step>,
        trajectory_id: u64,
        final_observation: Vec<f64>,
    ) -> Result<Self> {
        Self::build(steps, trajectory_id, true, Some(final_observation))
    }

    fn build(
        steps: Vec<Step>,
        trajectory_id: u64,
        truncated: bool,
        final_observation: Option<Vec<f64>>,
    ) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidTrajectory("no steps".into()));
        }
        if !truncated && !steps.last().unwrap().done {
            return Err(Error::InvalidTrajectory(
                "last step not done and trajectory not marked truncated".into(),
            ));
        }
        let episode_return = steps.iter().map(|s| s.reward).sum();
        Ok(Self {
            steps,
            reservoir_value: None,
            trajectory_id,
            episode_return,
            truncated,
            final_observation,
        })
    }

    /// Restores a trajectory that already carries a reservoir value, e.g.
    /// from a checkpoint. The value must be in [0, 1].
    pub fn with_reservoir_value(mut self, value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidTrajectory(format!(
                "reservoir value {value} outside [0,1]"
            )));
        }
        self.reservoir_value = Some(value);
        Ok(self)
    }

    pub fn reservoir_value(&self) -> Option<f64> {
        self.reservoir_value
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Eviction key: smallest reservoir value first, ties evict the higher id.
type EvictKey = Reverse<(u64, Reverse<u64>)>;

fn evict_key(reservoir_value: f64, id: u64) -> EvictKey {
    // Reservoir values are non-negative, so the IEEE bit pattern orders them.
    Reverse((reservoir_value.to_bits(), Reverse(id)))
}

/// Frame-capacity-bounded trajectory store with reservoir retention.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity_frames: usize,
    trajectories: Vec<Trajectory>,
    index_by_id: HashMap<u64, usize>,
    eviction_order: BinaryHeap<EvictKey>,
    frame_count: usize,
    rng: ChaCha8Rng,
}

impl ReplayBuffer {
    pub fn new(capacity_frames: usize, rng: ChaCha8Rng) -> Self {
        Self {
            capacity_frames,
            trajectories: Vec::new(),
            index_by_id: HashMap::new(),
            eviction_order: BinaryHeap::new(),
            frame_count: 0,
            rng,
        }
    }

    pub fn capacity_frames(&self) -> usize {
        self.capacity_frames
    }

    pub fn frame_count(&self) -> usize {
        self.frame_count
    }

    pub fn trajectory_count(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    /// Offers a trajectory. A reservoir value is drawn from this buffer's
    /// stream only if the trajectory does not already carry one; the buffer
    /// then evicts smallest-value trajectories until it fits the capacity
    /// (possibly evicting the new trajectory itself).
    pub fn insert(&mut self, mut traj: Trajectory) -> Result<()> {
        if traj.steps.is_empty() {
            return Err(Error::InvalidTrajectory("no steps".into()));
        }
        if traj.len() > self.capacity_frames {
            return Err(Error::InvalidTrajectory(format!(
                "trajectory of {} frames exceeds buffer capacity {}",
                traj.len(),
                self.capacity_frames
            )));
        }
        if traj.reservoir_value.is_none() {
            traj.reservoir_value = Some(self.rng.random_range(0.0..1.0));
        }
        let value = traj.reservoir_value.unwrap();
        let id = traj.trajectory_id;
        self.frame_count += traj.len();
        self.index_by_id.insert(id, self.trajectories.len());
        self.trajectories.push(traj);
        self.eviction_order.push(evict_key(value, id));

        while self.frame_count > self.capacity_frames {
            let Reverse((_, Reverse(evict_id))) = self.eviction_order.pop().expect("non-empty");
            let idx = self.index_by_id.remove(&evict_id).expect("indexed");
            let removed = self.trajectories.swap_remove(idx);
            self.frame_count -= removed.len();
            if idx < self.trajectories.len() {
                let moved_id = self.trajectories[idx].trajectory_id;
                self.index_by_id.insert(moved_id, idx);
            }
        }
        Ok(())
    }

    /// Uniform sampling with replacement. Errors on an empty buffer.
    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Vec<&Trajectory>> {
        if self.trajectories.is_empty() {
            return Err(Error::EmptyBuffer);
        }
        Ok((0..n)
            .map(|_| &self.trajectories[rng.random_range(0..self.trajectories.len())])
            .collect())
    }

    /// Merges `drop` into `self`, preserving every originally generated
    /// reservoir value, so the retained set is the same top set by value
    /// that a single combined buffer would have kept.
    pub fn merge_from(&mut self, drop: ReplayBuffer) -> Result<()> {
        if drop.capacity_frames != self.capacity_frames {
            return Err(Error::Config(format!(
                "buffer capacity mismatch: {} vs {}",
                self.capacity_frames, drop.capacity_frames
            )));
        }
        for traj in drop.trajectories {
            debug_assert!(traj.reservoir_value.is_some());
            self.insert(traj)?;
        }
        Ok(())
    }
}
