//! Core data model for nested-sampling runs: dead points, live-point
//! schedules, combining runs, unweaving runs into single-live-point threads,
//! and structural validation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::problem::Problem;

/// One sample discarded during a run. `params` holds only the tracked
/// components. `birth_logl` is the likelihood of the contour the point was
/// sampled within (negative infinity for draws from the whole prior), and
/// `true_logx` the analytically known log prior volume where available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeadPoint {
    pub params: SmallVec<[f64; 2]>,
    pub logl: f64,
    pub birth_logl: f64,
    pub true_logx: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub problem: Option<Problem>,
    pub seed: Option<u64>,
    pub termination: Option<String>,
    /// Highest contour up to which the run is known to have held its
    /// recorded live-point counts (the termination contour). Defaults to
    /// the final dead point's likelihood when absent.
    pub end_logl: Option<f64>,
}

/// An ordered list of dead points (ascending in log-likelihood) together
/// with the number of live points during the iteration that produced each.
/// A thread is a run whose live-point schedule is identically one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub points: Vec<DeadPoint>,
    pub nlive: Vec<u32>,
    pub meta: RunMeta,
}

impl Run {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_thread(&self) -> bool {
        self.nlive.iter().all(|&n| n == 1)
    }

    pub fn logls(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.logl).collect()
    }

    /// Contour up to which the run was live; see [`RunMeta::end_logl`].
    pub fn end_logl(&self) -> f64 {
        self.meta
            .end_logl
            .unwrap_or_else(|| self.points.last().map_or(f64::NEG_INFINITY, |p| p.logl))
    }

    /// Number of this run's live points at contour `logl` according to the
    /// recorded schedule and termination contour.
    fn live_at(&self, logl: f64) -> u32 {
        if self.is_empty() || logl > self.end_logl() {
            return 0;
        }
        match self.points.partition_point(|p| p.logl < logl) {
            k if k < self.len() => self.nlive[k],
            _ => *self.nlive.last().unwrap(),
        }
    }
}

/// A structural defect found by [`validate_run`], naming the invariant and
/// the offending index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    LengthMismatch { points: usize, nlive: usize },
    NonFiniteLogl { index: usize },
    Unsorted { index: usize },
    NonPositiveNlive { index: usize },
    BirthNotBelowLogl { index: usize },
    TrueLogxOutOfRange { index: usize },
    BrokenReplacementChain { index: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::LengthMismatch { points, nlive } => {
                write!(f, "length mismatch: {points} points vs {nlive} nlive entries")
            }
            Violation::NonFiniteLogl { index } => write!(f, "non-finite logl at {index}"),
            Violation::Unsorted { index } => write!(f, "unsorted at {index}"),
            Violation::NonPositiveNlive { index } => write!(f, "non-positive nlive at {index}"),
            Violation::BirthNotBelowLogl { index } => {
                write!(f, "birth contour not below logl at {index}")
            }
            Violation::TrueLogxOutOfRange { index } => {
                write!(f, "true log-volume out of range at {index}")
            }
            Violation::BrokenReplacementChain { index } => {
                write!(f, "broken replacement chain at {index}")
            }
        }
    }
}

/// Check every run invariant; an empty list means the run is well formed.
pub fn validate_run(run: &Run) -> Vec<Violation> {
    let mut out = Vec::new();
    if run.points.len() != run.nlive.len() {
        out.push(Violation::LengthMismatch {
            points: run.points.len(),
            nlive: run.nlive.len(),
        });
    }
    for (i, &n) in run.nlive.iter().enumerate() {
        if n == 0 {
            out.push(Violation::NonPositiveNlive { index: i });
        }
    }
    let mut seen: HashMap<u64, usize> = HashMap::new();
    for (i, p) in run.points.iter().enumerate() {
        if !p.logl.is_finite() {
            out.push(Violation::NonFiniteLogl { index: i });
            continue;
        }
        if i > 0 && p.logl < run.points[i - 1].logl {
            out.push(Violation::Unsorted { index: i });
        }
        if p.logl <= p.birth_logl {
            out.push(Violation::BirthNotBelowLogl { index: i });
        }
        if let Some(lx) = p.true_logx {
            if !(lx <= 0.0) || lx == f64::NEG_INFINITY {
                out.push(Violation::TrueLogxOutOfRange { index: i });
            }
        }
        if p.birth_logl > f64::NEG_INFINITY && !seen.contains_key(&p.birth_logl.to_bits()) {
            out.push(Violation::BrokenReplacementChain { index: i });
        }
        seen.entry(p.logl.to_bits()).or_insert(i);
    }
    out
}

fn check_compatible(runs: &[&Run]) -> Result<()> {
    let mut problem: Option<&Problem> = None;
    for r in runs {
        if let Some(p) = &r.meta.problem {
            match problem {
                None => problem = Some(p),
                Some(q) if q == p => {}
                Some(q) => {
                    return Err(Error::IncompatibleRuns(format!(
                        "problem mismatch: {q:?} vs {p:?}"
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Merge runs into a single run: the point multiset union sorted by
/// likelihood, with the live-point schedule recomputed from the inputs'
/// contour spans. Runs sharing a termination contour merge to a constant
/// schedule; runs terminated at different contours produce a tapering tail.
pub fn combine_runs(runs: &[Run]) -> Result<Run> {
    let refs: Vec<&Run> = runs.iter().collect();
    combine_run_refs(&refs)
}

pub fn combine_run_refs(runs: &[&Run]) -> Result<Run> {
    if runs.is_empty() {
        return Err(Error::NoRuns);
    }
    check_compatible(runs)?;
    if runs.len() == 1 {
        return Ok((*runs[0]).clone());
    }

    let total: usize = runs.iter().map(|r| r.len()).sum();
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(total);
    for (ri, r) in runs.iter().enumerate() {
        for pi in 0..r.len() {
            order.push((ri, pi));
        }
    }
    // Likelihood ties are broken by descending exact volume where known
    // (the constant family's infinitesimal slope), then by birth contour and
    // input order so duplicates stay adjacent.
    order.sort_by(|&(ra, pa), &(rb, pb)| {
        let a = &runs[ra].points[pa];
        let b = &runs[rb].points[pb];
        a.logl
            .total_cmp(&b.logl)
            .then(match (a.true_logx, b.true_logx) {
                (Some(x), Some(y)) => y.total_cmp(&x),
                _ => std::cmp::Ordering::Equal,
            })
            .then(a.birth_logl.total_cmp(&b.birth_logl))
            .then(ra.cmp(&rb))
            .then(pa.cmp(&pb))
    });

    let all_threads = runs.iter().all(|r| r.is_thread());
    let nlive: Vec<u32> = if all_threads {
        // count threads whose span reaches each contour
        let mut ends: Vec<f64> = runs.iter().map(|r| r.end_logl()).collect();
        ends.sort_by(f64::total_cmp);
        let mut done = 0usize;
        order
            .iter()
            .map(|&(ri, pi)| {
                let logl = runs[ri].points[pi].logl;
                while done < ends.len() && ends[done] < logl {
                    done += 1;
                }
                (ends.len() - done) as u32
            })
            .collect()
    } else {
        order
            .iter()
            .map(|&(ri, pi)| {
                let logl = runs[ri].points[pi].logl;
                runs.iter().map(|r| r.live_at(logl)).sum::<u32>()
            })
            .collect()
    };

    let points: Vec<DeadPoint> = order
        .iter()
        .map(|&(ri, pi)| runs[ri].points[pi].clone())
        .collect();
    let end = runs
        .iter()
        .map(|r| r.end_logl())
        .fold(f64::NEG_INFINITY, f64::max);
    let meta = RunMeta {
        problem: runs.iter().find_map(|r| r.meta.problem),
        seed: None,
        termination: Some("combined".into()),
        end_logl: Some(end),
    };
    Ok(Run { points, nlive, meta })
}

/// Unweave a run into its constituent single-live-point runs by following
/// birth-contour replacement chains. Threads inherit the parent's
/// termination contour, so recombining them reproduces the parent's
/// schedule exactly.
pub fn split_into_threads(run: &Run) -> Result<Vec<Run>> {
    let n = run.len();
    // children indexed by the exact birth likelihood value
    let mut by_birth: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut logl_values: std::collections::HashSet<u64> = std::collections::HashSet::new();
    for (i, p) in run.points.iter().enumerate() {
        by_birth.entry(p.birth_logl.to_bits()).or_default().push(i);
        logl_values.insert(p.logl.to_bits());
    }
    // births are strictly below the point's own logl, so a matching logl
    // value always sorts earlier in a valid run
    for (i, p) in run.points.iter().enumerate() {
        if p.birth_logl > f64::NEG_INFINITY && !logl_values.contains(&p.birth_logl.to_bits()) {
            return Err(Error::BrokenReplacementChain { index: i });
        }
    }

    // reverse the chains: cursor per birth value, consumed in index order
    let mut cursor: HashMap<u64, usize> = HashMap::new();
    let mut consumed = vec![false; n];
    let mut threads: Vec<Vec<usize>> = Vec::new();
    let starters: Vec<usize> = (0..n)
        .filter(|&i| run.points[i].birth_logl == f64::NEG_INFINITY)
        .collect();
    for &start in &starters {
        let mut chain = Vec::new();
        let mut current = start;
        loop {
            consumed[current] = true;
            chain.push(current);
            let key = run.points[current].logl.to_bits();
            let children = match by_birth.get(&key) {
                Some(c) => c,
                None => break,
            };
            let pos = cursor.entry(key).or_insert(0);
            // skip children already taken by an earlier chain
            while *pos < children.len() && consumed[children[*pos]] {
                *pos += 1;
            }
            if *pos >= children.len() {
                break;
            }
            current = children[*pos];
            *pos += 1;
        }
        threads.push(chain);
    }
    if let Some(orphan) = consumed.iter().position(|&c| !c) {
        return Err(Error::BrokenReplacementChain { index: orphan });
    }

    let end = run.end_logl();
    Ok(threads
        .into_iter()
        .map(|chain| {
            let points: Vec<DeadPoint> =
                chain.iter().map(|&i| run.points[i].clone()).collect();
            let nlive = vec![1u32; points.len()];
            Run {
                points,
                nlive,
                meta: RunMeta {
                    problem: run.meta.problem,
                    seed: None,
                    termination: run.meta.termination.clone(),
                    end_logl: Some(end),
                },
            }
        })
        .collect())
}
