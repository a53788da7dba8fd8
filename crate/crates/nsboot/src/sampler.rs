//! Perfect nested sampling on analytic problems: live points are tracked by
//! their exact prior volumes, so within-contour sampling is exactly uniform
//! and every dead point carries its true log-volume.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::math::{log1mexp, logaddexp, logsumexp, mix_seed};
use crate::problem::{open01, Problem};
use crate::run::{DeadPoint, Run, RunMeta};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TerminationRule {
    /// Stop once the evidence estimated to remain in the live points drops
    /// below `eps` times the evidence already in the dead points.
    EvidenceFraction { eps: f64 },
    /// Stop once the worst live point exceeds `l_term`, discarding the
    /// violating points. Keeps threads from different runs equivalent.
    FixedLogl { l_term: f64 },
}

impl Default for TerminationRule {
    fn default() -> Self {
        TerminationRule::EvidenceFraction { eps: 1e-4 }
    }
}

impl TerminationRule {
    fn tag(&self) -> String {
        match self {
            TerminationRule::EvidenceFraction { eps } => format!("evidence_fraction({eps})"),
            TerminationRule::FixedLogl { l_term } => format!("fixed_logl({l_term})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub nlive: u32,
    #[serde(default)]
    pub termination: TerminationRule,
    pub seed: u64,
    #[serde(default)]
    pub keep_final_live: bool,
}

impl SamplerConfig {
    pub fn new(nlive: u32, seed: u64) -> Self {
        assert!(nlive >= 1);
        SamplerConfig {
            nlive,
            termination: TerminationRule::default(),
            seed,
            keep_final_live: false,
        }
    }

    pub fn with_termination(mut self, termination: TerminationRule) -> Self {
        self.termination = termination;
        self
    }

    pub fn with_keep_final_live(mut self, keep: bool) -> Self {
        self.keep_final_live = keep;
        self
    }
}

struct LivePoint {
    logx: f64,
    logl: f64,
    birth_logl: f64,
    params: SmallVec<[f64; 2]>,
}

fn make_live(problem: &Problem, logx: f64, birth_logl: f64, rng: &mut impl Rng) -> LivePoint {
    let radius = problem
        .radius_at_logx(logx)
        .expect("volumes are strictly negative");
    let logl = problem.logl_at_radius(radius);
    assert!(
        !logl.is_nan(),
        "non-finite log-likelihood at logx={logx}, r={radius}"
    );
    LivePoint {
        logx,
        logl,
        birth_logl,
        params: problem.sample_point_on_contour(radius, rng),
    }
}

/// Generate one perfect nested sampling run.
///
/// Live points are represented by exact prior volumes: n i.i.d. Uniform(0,1)
/// draws to start, and each removal of the largest volume is replaced by a
/// Uniform(0, X_worst) draw, all in log space. The recorded shrinkage
/// therefore follows the Beta(n, 1) law exactly and each dead point carries
/// its true log-volume.
pub fn run_perfect_ns(problem: &Problem, config: &SamplerConfig) -> Run {
    let n = config.nlive as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut live: Vec<LivePoint> = (0..n)
        .map(|_| make_live(problem, open01(&mut rng).ln(), f64::NEG_INFINITY, &mut rng))
        .collect();

    let mut points: Vec<DeadPoint> = Vec::new();
    // running dead evidence over expected volumes, for the termination check
    let mut logz_dead = f64::NEG_INFINITY;
    let inv_n = 1.0 / n as f64;
    let log_shell = log1mexp(-inv_n); // ln(1 - e^(-1/n))
    let mut end_logl: Option<f64> = None;
    let mut live_logls = vec![0.0f64; n];

    loop {
        let worst = live
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.logx.total_cmp(&b.1.logx))
            .map(|(i, _)| i)
            .unwrap();

        match config.termination {
            TerminationRule::EvidenceFraction { eps } => {
                let i = points.len() as f64;
                for (slot, p) in live_logls.iter_mut().zip(&live) {
                    *slot = p.logl;
                }
                let logz_live = logsumexp(&live_logls) - (n as f64).ln() - i * inv_n;
                if logz_live - logz_dead < eps.ln() {
                    break;
                }
            }
            TerminationRule::FixedLogl { l_term } => {
                if live[worst].logl > l_term {
                    end_logl = Some(l_term);
                    break;
                }
            }
        }

        let i = points.len() as f64;
        let logw_expected = -i * inv_n + log_shell;
        logz_dead = logaddexp(logz_dead, live[worst].logl + logw_expected);

        // With a constant likelihood every contour carries the same value;
        // replacement chains would tie with their parents, so births stay at
        // the prior and ordering is carried by the exact volumes instead.
        let birth = match problem.family {
            crate::problem::Family::Constant { .. } => f64::NEG_INFINITY,
            _ => live[worst].logl,
        };
        let dying_logx = live[worst].logx;
        let replacement = make_live(problem, dying_logx + open01(&mut rng).ln(), birth, &mut rng);
        let dead = std::mem::replace(&mut live[worst], replacement);
        points.push(DeadPoint {
            params: dead.params,
            logl: dead.logl,
            birth_logl: dead.birth_logl,
            true_logx: Some(dead.logx),
        });
    }

    let mut nlive = vec![config.nlive; points.len()];
    if config.keep_final_live {
        // append the remaining live points with a decreasing schedule
        live.sort_by(|a, b| a.logl.total_cmp(&b.logl));
        let keep: Vec<LivePoint> = match config.termination {
            TerminationRule::FixedLogl { l_term } => {
                live.into_iter().filter(|p| p.logl <= l_term).collect()
            }
            _ => live,
        };
        let mut remaining = keep.len() as u32;
        for p in keep {
            points.push(DeadPoint {
                params: p.params,
                logl: p.logl,
                birth_logl: p.birth_logl,
                true_logx: Some(p.logx),
            });
            nlive.push(remaining);
            remaining -= 1;
        }
    }

    let end = end_logl.or_else(|| points.last().map(|p| p.logl));
    Run {
        points,
        nlive,
        meta: RunMeta {
            problem: Some(*problem),
            seed: Some(config.seed),
            termination: Some(config.termination.tag()),
            end_logl: end,
        },
    }
}

/// `count` independent runs with per-run seeds hashed from
/// (base_seed, run index). Deterministic and order-stable under parallel
/// execution.
pub fn repeat_runs(problem: &Problem, config: &SamplerConfig, count: usize, base_seed: u64) -> Vec<Run> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let cfg = SamplerConfig {
                seed: mix_seed(base_seed, 0, i as u64),
                ..*config
            };
            run_perfect_ns(problem, &cfg)
        })
        .collect()
}
