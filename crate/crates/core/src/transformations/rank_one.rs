use crate::error::{Error, Result};
use crate::transformations::permutation::IntervalPermutation;

/// Cutting-and-stacking recipe.
///
/// The stage-1 tower is a single level. Passing from stage `n` to `n + 1`
/// cuts the tower into `cuts[n-1]` columns, puts `spacers[n-1][c]` new levels
/// on top of column `c`, and stacks the columns left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneSpec {
    cuts: Vec<usize>,
    spacers: Vec<Vec<usize>>,
    stages: usize,
}

impl RankOneSpec {
    pub fn new(cuts: Vec<usize>, spacers: Vec<Vec<usize>>, stages: usize) -> Result<Self> {
        if stages == 0 {
            return Err(Error::invalid("a rank-one spec needs at least one stage"));
        }
        if cuts.len() + 1 < stages || spacers.len() != cuts.len() {
            return Err(Error::invalid("one cut count and spacer list is needed per stage transition"));
        }
        for (n, (r, s)) in cuts.iter().zip(&spacers).enumerate() {
            if *r == 0 {
                return Err(Error::invalid(format!("stage {} has zero cuts", n + 1)));
            }
            if s.len() != *r {
                return Err(Error::invalid(format!(
                    "stage {} spacer list has {} entries for {} columns",
                    n + 1,
                    s.len(),
                    r
                )));
            }
        }
        Ok(RankOneSpec { cuts, spacers, stages })
    }

    /// Same cut count and spacer pattern at every stage.
    pub fn stationary(cuts: usize, pattern: Vec<usize>, stages: usize) -> Result<Self> {
        let transitions = stages.saturating_sub(1);
        Self::new(vec![cuts; transitions], vec![pattern; transitions], stages)
    }

    /// Chacon's map: three columns, one spacer above the middle one.
    pub fn chacon(stages: usize) -> Result<Self> {
        Self::stationary(3, vec![0, 1, 0], stages)
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    /// `h_1, …, h_stages`.
    pub fn heights(&self) -> Result<Vec<usize>> {
        let mut h = vec![1usize];
        for n in 0..self.stages - 1 {
            let prev = h[n];
            let spacer: usize = self.spacers[n].iter().sum();
            let next = prev
                .checked_mul(self.cuts[n])
                .and_then(|v| v.checked_add(spacer))
                .ok_or(Error::Overflow)?;
            h.push(next);
        }
        Ok(h)
    }
}

/// Labels of one stage tower, listed bottom to top. `labels[k]` gives the
/// stage-`k+1` level of each position, `None` for later spacers.
fn stack(spec: &RankOneSpec, stage: usize) -> Vec<Vec<Option<u32>>> {
    let mut labels: Vec<Vec<Option<u32>>> = vec![vec![Some(0)]];
    for n in 0..stage - 1 {
        let height = labels[0].len();
        let spacer_total: usize = spec.spacers[n].iter().sum();
        let next_height = height * spec.cuts[n] + spacer_total;
        let mut next: Vec<Vec<Option<u32>>> = labels.iter().map(|_| Vec::with_capacity(next_height)).collect();
        for &s in &spec.spacers[n] {
            for (k, col) in labels.iter().enumerate() {
                next[k].extend_from_slice(col);
                next[k].extend(std::iter::repeat_n(None, s));
            }
        }
        next.push((0..next_height as u32).map(Some).collect());
        labels = next;
    }
    labels
}

/// Stage-`stage` realization: atoms are the tower levels with uniform mass,
/// each level maps to the one above and the top maps back to the base.
pub fn rank_one_build(spec: &RankOneSpec, stage: usize) -> Result<IntervalPermutation> {
    if stage == 0 || stage > spec.stages {
        return Err(Error::invalid(format!("stage {stage} outside 1..={}", spec.stages)));
    }
    let heights = spec.heights()?;
    let k = heights[stage - 1];
    if k > u32::MAX as usize {
        return Err(Error::Overflow);
    }
    let labels = stack(spec, stage);
    let perm = (0..k).map(|i| (i + 1) % k).collect();
    Ok(IntervalPermutation::uniform(perm)?.with_towers(heights[..stage].to_vec(), labels))
}
