//! Seeded random instances of weighted d-SAT.
//!
//! Every d-subset of the `n` variables becomes a hyperedge independently
//! with probability `p`. Each hyperedge then receives one clause, drawn
//! uniformly from the sign patterns over its `d` variables that negate at
//! least `d'` of them. With `d' = 1` this is the non-monotone base model.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, so an instance is reproducible from its parameters on
//! any platform. Hyperedges are enumerated in lexicographic order by
//! geometric skipping: the gap to the next selected subset is drawn as
//! `floor(ln(1 - U) / ln(1 - p))`, which costs time proportional to the
//! number of edges instead of `C(n, d)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Clause, Formula, Instance, Lit, Var};

/// Identifies the file-format revision written into instance comments.
pub const MODEL_TAG: &str = "wdsat-v1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("clause arity d must be at least 2, got {0}")]
    ArityTooSmall(u32),
    #[error("need 1 <= dprime <= d <= n, got n={n}, d={d}, dprime={dprime}")]
    Shape { n: u32, d: u32, dprime: u32 },
    #[error("weight target k={k} exceeds n={n}")]
    WeightTarget { k: usize, n: u32 },
    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("coefficient c={c} gives edge probability {p} > 1")]
    DerivedProbability { c: f64, p: f64 },
    #[error("coefficient c must be finite and non-negative, got {0}")]
    Coefficient(f64),
    #[error("C({n}, {d}) is too large to enumerate")]
    TooManySubsets { n: u32, d: u32 },
}

/// Which of `p` and `c` was given; the other one is derived.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeRate {
    /// Hyperedge probability.
    P(f64),
    /// Coefficient `c` in `p = c ln n / n^(d - d')`.
    C(f64),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RandomModelParams {
    pub n: u32,
    pub d: u32,
    pub dprime: u32,
    pub k: usize,
    pub rate: EdgeRate,
    pub seed: u64,
}

impl RandomModelParams {
    pub fn with_p(n: u32, d: u32, dprime: u32, k: usize, p: f64, seed: u64) -> RandomModelParams {
        RandomModelParams { n, d, dprime, k, rate: EdgeRate::P(p), seed }
    }

    pub fn with_c(n: u32, d: u32, dprime: u32, k: usize, c: f64, seed: u64) -> RandomModelParams {
        RandomModelParams { n, d, dprime, k, rate: EdgeRate::C(c), seed }
    }

    /// `ln n / n^(d - d')`, the factor linking `c` to `p`.
    fn scale(&self) -> f64 {
        let n = f64::from(self.n);
        n.ln() / n.powi((self.d - self.dprime) as i32)
    }

    pub fn p(&self) -> f64 {
        match self.rate {
            EdgeRate::P(p) => p,
            EdgeRate::C(c) => c * self.scale(),
        }
    }

    pub fn c(&self) -> f64 {
        match self.rate {
            EdgeRate::P(p) => p / self.scale(),
            EdgeRate::C(c) => c,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let &RandomModelParams { n, d, dprime, k, .. } = self;
        if d < 2 {
            return Err(ParamError::ArityTooSmall(d));
        }
        if dprime < 1 || dprime > d || d > n {
            return Err(ParamError::Shape { n, d, dprime });
        }
        if k > n as usize {
            return Err(ParamError::WeightTarget { k, n });
        }
        match self.rate {
            EdgeRate::P(p) if !(0.0..=1.0).contains(&p) => return Err(ParamError::Probability(p)),
            EdgeRate::C(c) if !c.is_finite() || c < 0.0 => return Err(ParamError::Coefficient(c)),
            EdgeRate::C(c) if self.p() > 1.0 => return Err(ParamError::DerivedProbability { c, p: self.p() }),
            _ => {}
        }
        if (0..=d).any(|r| binomial(n, r).is_none_or(|b| b > u128::from(u64::MAX))) {
            return Err(ParamError::TooManySubsets { n, d });
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: u32, r: u32) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

fn choose(n: u32, r: u32) -> u128 {
    let n128 = u128::from(n);
    match r {
        0 => 1,
        1 => n128,
        2 => n128 * n128.saturating_sub(1) / 2,
        _ => binomial(n, r).expect("binomial bounded by parameter validation"),
    }
}

/// The admissible sign patterns for one hyperedge.
///
/// Pattern bit `i` negates the `i`-th variable of the (sorted) edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateClauseTable {
    d: u32,
    dprime: u32,
    patterns: Vec<u32>,
}

impl CandidateClauseTable {
    pub fn new(d: u32, dprime: u32) -> CandidateClauseTable {
        assert!(d < 32, "arity too large for a sign-pattern table");
        let patterns = (0u32..1 << d).filter(|m| m.count_ones() >= dprime).collect();
        CandidateClauseTable { d, dprime, patterns }
    }

    pub fn arity(&self) -> u32 {
        self.d
    }

    pub fn min_negated(&self) -> u32 {
        self.dprime
    }

    /// Number of admissible patterns, `sum_{j=d'}^{d} C(d, j)`.
    pub fn a_d(&self) -> usize {
        self.patterns.len()
    }

    pub fn patterns(&self) -> &[u32] {
        &self.patterns
    }

    /// Applies pattern `mask` to `edge`.
    pub fn clause(&self, edge: &[Var], mask: u32) -> Clause {
        let lits = edge.iter().enumerate().map(|(i, &var)| Lit { var, negated: mask >> i & 1 == 1 }).collect();
        Clause::from_sorted(lits)
    }
}

/// Unranks `rank` into the lexicographically `rank`-th `d`-subset of `1..=n`.
fn unrank_subset(n: u32, d: u32, mut rank: u128) -> Vec<Var> {
    let mut subset = Vec::with_capacity(d as usize);
    let mut lo = 1u32;
    for remaining in (1..=d).rev() {
        if remaining == 1 {
            subset.push(Var::from_index(lo + rank as u32));
            break;
        }
        // Subsets of size `remaining` drawn from `lo..=n` whose first element is below `e`.
        let all = choose(n - lo + 1, remaining);
        let before = |e: u32| all - choose(n - e + 1, remaining);
        let (mut a, mut b) = (lo, n - remaining + 1);
        while a < b {
            let mid = a + (b - a).div_ceil(2);
            if before(mid) <= rank {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        rank -= before(a);
        subset.push(Var::from_index(a));
        lo = a + 1;
    }
    subset
}

/// Hyperedges of `G(n, p, d)` in lexicographic order.
pub fn sample_hypergraph<R: Rng + ?Sized>(params: &RandomModelParams, rng: &mut R) -> Vec<Vec<Var>> {
    let (n, d, p) = (params.n, params.d, params.p());
    let total = choose(n, d);
    let mut edges = Vec::new();
    if p <= 0.0 || total == 0 {
        return edges;
    }
    if p >= 1.0 {
        return (0..total).map(|r| unrank_subset(n, d, r)).collect();
    }
    let log_q = (-p).ln_1p();
    let mut next: u128 = 0;
    loop {
        let u: f64 = rng.random();
        let skip = ((-u).ln_1p() / log_q).floor();
        if skip >= (total - next) as f64 {
            break;
        }
        next += skip as u128;
        if next >= total {
            break;
        }
        edges.push(unrank_subset(n, d, next));
        next += 1;
    }
    edges
}

/// A uniformly random admissible clause over `edge`.
pub fn sample_clause<R: Rng + ?Sized>(edge: &[Var], table: &CandidateClauseTable, rng: &mut R) -> Clause {
    debug_assert_eq!(edge.len(), table.arity() as usize);
    let mask = table.patterns[rng.random_range(0..table.patterns.len())];
    table.clause(edge, mask)
}

pub fn generate(params: &RandomModelParams) -> Result<Instance, ParamError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let edges = sample_hypergraph(params, &mut rng);
    let table = CandidateClauseTable::new(params.d, params.dprime);
    let clauses = edges.iter().map(|e| sample_clause(e, &table, &mut rng)).collect();
    Ok(Instance {
        formula: Formula::from_distinct_clauses(params.n, clauses),
        weight_target: params.k,
        params: Some(params.clone()),
    })
}

/// Mixes a master seed with a grid cell and trial index (SplitMix64 steps).
pub fn derive_seed(master: u64, cell: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(master) ^ cell) ^ trial)
}
