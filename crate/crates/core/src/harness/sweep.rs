//! Deterministic seeded sharpness sweeps: random and structured instances
//! per inequality family, evaluated and ranked by observed ratio. The
//! maximum ratio per family is its running empirical constant.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dissociation::{greedy_dissociated, ScanOrder, SetMask};
use crate::error::{Error, Result};
use crate::fourier::{convolve, FuncC, Side};
use crate::group::GroupSpec;
use num_complex::Complex64;

use super::inequalities::{
    bilinear_bound, chang, conv_energy, higher_moment, level_set_bound, mu1_bound, rudin_moment,
};
use super::reports::InequalityReport;

/// Splitmix64 step; derives independent per-instance seeds from a master
/// seed, so sweep workers never share RNG state.
pub fn mix_seed(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Inequality families exposed to sweeps and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IneqFamily {
    Rudin,
    Chang,
    Mu1,
    HigherMoment,
    ConvEnergy,
    LevelSet,
    Bilinear,
}

impl IneqFamily {
    pub const ALL: [IneqFamily; 7] = [
        IneqFamily::Rudin,
        IneqFamily::Chang,
        IneqFamily::Mu1,
        IneqFamily::HigherMoment,
        IneqFamily::ConvEnergy,
        IneqFamily::LevelSet,
        IneqFamily::Bilinear,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IneqFamily::Rudin => "rudin",
            IneqFamily::Chang => "chang",
            IneqFamily::Mu1 => "mu1",
            IneqFamily::HigherMoment => "higher-moment",
            IneqFamily::ConvEnergy => "conv-energy",
            IneqFamily::LevelSet => "level-set",
            IneqFamily::Bilinear => "bilinear",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::UnknownInequality(name.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: IneqFamily,
    pub group: GroupSpec,
    pub instances: usize,
    pub seed: u64,
    pub budget: f64,
    /// Moment order for the Rudin family.
    pub moment_p: u32,
    /// Convolution length for the higher-moment and convolution-energy
    /// families.
    pub conv_l: usize,
    /// Fixed level for the level-set family; 0 picks half the observed max.
    pub level_r: u32,
    /// Fixed dissociated set replacing the per-instance random one, for the
    /// families that take one.
    pub fixed_lambda: Option<SetMask>,
}

impl SweepConfig {
    pub fn new(family: IneqFamily, group: GroupSpec) -> Self {
        Self {
            family,
            group,
            instances: 100,
            seed: 0,
            budget: super::reports::DEFAULT_BUDGET,
            moment_p: 4,
            conv_l: 2,
            level_r: 0,
            fixed_lambda: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub reports: Vec<InequalityReport>,
    pub max_ratio: f64,
    /// Max ratio normalized per family: `ratio^(1/p)` for the moment
    /// inequality, the plain ratio otherwise.
    pub empirical_constant: f64,
}

/// Run one family over seeded instances of one group; reports are sorted by
/// ratio descending (ties by instance then variant) and identical configs
/// produce identical output.
pub fn sharpness_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let mut reports = Vec::new();
    for i in 0..cfg.instances {
        let seed_i = mix_seed(cfg.seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed_i);
        let batch = evaluate_instance(cfg.family, &cfg.group, cfg, seed_i, &mut rng)?;
        reports.extend(batch);
    }
    sort_reports(&mut reports);
    let max_ratio = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let empirical_constant = match cfg.family {
        IneqFamily::Rudin => max_ratio.powf(1.0 / cfg.moment_p as f64),
        _ => max_ratio,
    };
    Ok(SweepOutcome {
        reports,
        max_ratio,
        empirical_constant,
    })
}

pub(crate) fn sort_reports(reports: &mut [InequalityReport]) {
    reports.sort_by(|a, b| {
        b.ratio
            .partial_cmp(&a.ratio)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.name.cmp(&b.name))
            .then_with(|| a.instance.cmp(&b.instance))
            .then_with(|| a.variant.cmp(&b.variant))
    });
}

fn evaluate_instance(
    family: IneqFamily,
    group: &GroupSpec,
    cfg: &SweepConfig,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<InequalityReport>> {
    let n = group.order();
    let lambda_for = |rng: &mut ChaCha8Rng| match &cfg.fixed_lambda {
        Some(l) => l.clone(),
        None => random_dissociated(group, rng),
    };
    match family {
        IneqFamily::Rudin => {
            let lambda = lambda_for(rng);
            let mut coeffs = FuncC::zeros(group.clone(), Side::Time);
            for e in lambda.elements() {
                coeffs.set(
                    e,
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                );
            }
            Ok(vec![rudin_moment(
                &lambda,
                &coeffs,
                cfg.moment_p,
                cfg.budget,
                seed,
            )?])
        }
        IneqFamily::Chang => {
            let lambda = lambda_for(rng);
            let s = random_set_density(group, 0.1, 0.5, rng);
            // alternate between the default indicator and a random function
            // supported on S
            if rng.random_range(0..2u32) == 0 {
                Ok(vec![chang(&lambda, &s, None, cfg.budget, seed)?])
            } else {
                let mut f = FuncC::zeros(group.clone(), Side::Time);
                for e in s.elements() {
                    f.set(
                        e,
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    );
                }
                Ok(vec![chang(&lambda, &s, Some(&f), cfg.budget, seed)?])
            }
        }
        IneqFamily::Mu1 => {
            let lambda = lambda_for(rng);
            let phi = match rng.random_range(0..3u32) {
                // generic real multiplier
                0 => {
                    let values = (0..n)
                        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
                        .collect();
                    FuncC::from_values(group.clone(), values, Side::Time)?
                }
                // peak-dominant: the mass sits at zero
                1 => {
                    let mut values: Vec<Complex64> = (0..n)
                        .map(|_| Complex64::new(rng.random_range(0.0..0.2), 0.0))
                        .collect();
                    let tail: f64 = values.iter().skip(1).map(|v| v.re).sum();
                    values[0] = Complex64::new(tail + 1.0, 0.0);
                    FuncC::from_values(group.clone(), values, Side::Time)?
                }
                // punctured-dominant: zero attains the max but the tail
                // carries more mass
                _ => {
                    let mut values: Vec<Complex64> = (0..n)
                        .map(|_| Complex64::new(rng.random_range(0.0..1.0), 0.0))
                        .collect();
                    let max_tail = values.iter().skip(1).map(|v| v.re).fold(0.0, f64::max);
                    values[0] = Complex64::new(max_tail, 0.0);
                    FuncC::from_values(group.clone(), values, Side::Time)?
                }
            };
            mu1_bound(&lambda, &phi, cfg.budget, seed)
        }
        IneqFamily::HigherMoment => {
            let lambda = lambda_for(rng);
            let s = random_set_density(group, 0.1, 0.5, rng);
            Ok(vec![higher_moment(
                &lambda, &s, cfg.conv_l, cfg.budget, seed,
            )?])
        }
        IneqFamily::ConvEnergy => {
            let lambda = lambda_for(rng);
            let l = cfg.conv_l.max(2);
            let mut sets = Vec::with_capacity(l);
            match rng.random_range(0..4u32) {
                // half-group interval in the leading slots: exercises the
                // product and iterated branches
                0 => {
                    let half: Vec<usize> = (0..n / 2).collect();
                    let interval = SetMask::from_indices(group.clone(), &half)?;
                    for _ in 0..l - 1 {
                        sets.push(interval.clone());
                    }
                    sets.push(random_set_density(group, 0.1, 0.5, rng));
                }
                // equal random leading sets
                1 => {
                    let s = random_set_density(group, 0.1, 0.5, rng);
                    for _ in 0..l - 1 {
                        sets.push(s.clone());
                    }
                    sets.push(random_set_density(group, 0.1, 0.5, rng));
                }
                // independent random sets
                _ => {
                    for _ in 0..l {
                        sets.push(random_set_density(group, 0.1, 0.5, rng));
                    }
                }
            }
            conv_energy(&lambda, &sets, cfg.budget, seed)
        }
        IneqFamily::LevelSet => {
            let s1 = random_set_density(group, 0.15, 0.5, rng);
            let s2 = random_set_density(group, 0.15, 0.5, rng);
            let r = if cfg.level_r > 0 {
                cfg.level_r
            } else {
                let conv = convolve(&s1.indicator(), &s2.indicator())?;
                let max_conv = conv
                    .values()
                    .iter()
                    .map(|v| v.re)
                    .fold(0.0, f64::max)
                    .round() as u32;
                (max_conv / 2).max(1)
            };
            Ok(vec![level_set_bound(&s1, &s2, r, cfg.budget, seed)?])
        }
        IneqFamily::Bilinear => {
            let lambda = lambda_for(rng);
            let s = random_set_density(group, 0.1, 0.5, rng);
            Ok(vec![bilinear_bound(&lambda, &s, cfg.budget, seed)?])
        }
    }
}

/// Greedy dissociated subset of a random pool of nonzero elements.
pub(crate) fn random_dissociated(group: &GroupSpec, rng: &mut ChaCha8Rng) -> SetMask {
    let n = group.order();
    let pool_size = (n - 1).min(8 + rng.random_range(0..8));
    let mut pool: Vec<usize> = (1..n).collect();
    for i in 0..pool_size.min(pool.len()) {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    let mask = SetMask::from_indices(group.clone(), &pool[..pool_size.min(pool.len())])
        .expect("indices in range");
    greedy_dissociated(&mask, ScanOrder::Ascending)
}

fn random_set_density(group: &GroupSpec, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> SetMask {
    let n = group.order();
    let density = rng.random_range(lo..hi);
    let size = ((n as f64 * density).round() as usize).clamp(2, n / 2);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    SetMask::from_indices(group.clone(), &pool[..size]).expect("indices in range")
}

/// Groups used by the standard inequality sweep.
pub(crate) fn sweep_groups() -> Vec<GroupSpec> {
    ["16", "24", "37", "64", "97", "128", "2^5", "2,3,5", "4,9"]
        .iter()
        .map(|s| GroupSpec::parse(s).expect("valid spec"))
        .collect()
}

/// The standard sweep: at least 500 instances spread over every family,
/// every moment order `p in {2,4,6,8}`, every `l in {2,3,4}`, and groups up
/// to order 128. Deterministic for a fixed seed.
pub fn standard_sweep(seed: u64, budget: f64) -> Result<Vec<InequalityReport>> {
    let groups = sweep_groups();
    let mut reports = Vec::new();
    let mut salt = 0u64;
    let mut run = |family: IneqFamily,
                   count: usize,
                   moment_p: u32,
                   conv_l: usize,
                   reports: &mut Vec<InequalityReport>|
     -> Result<()> {
        for i in 0..count {
            let group = groups[i % groups.len()].clone();
            let mut cfg = SweepConfig::new(family, group);
            cfg.instances = 1;
            cfg.seed = mix_seed(seed, salt);
            cfg.budget = budget;
            cfg.moment_p = moment_p;
            cfg.conv_l = conv_l;
            salt += 1;
            let outcome = sharpness_sweep(&cfg)?;
            reports.extend(outcome.reports);
        }
        Ok(())
    };

    for p in [2u32, 4, 6, 8] {
        run(IneqFamily::Rudin, 32, p, 2, &mut reports)?;
    }
    run(IneqFamily::Chang, 80, 2, 2, &mut reports)?;
    run(IneqFamily::Mu1, 66, 2, 2, &mut reports)?;
    for l in [2usize, 3, 4] {
        run(IneqFamily::HigherMoment, 24, 2, l, &mut reports)?;
    }
    for l in [2usize, 3] {
        run(IneqFamily::ConvEnergy, 36, 2, l, &mut reports)?;
    }
    run(IneqFamily::LevelSet, 36, 2, 2, &mut reports)?;
    run(IneqFamily::Bilinear, 56, 2, 2, &mut reports)?;

    sort_reports(&mut reports);
    Ok(reports)
}
