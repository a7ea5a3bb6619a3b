//! Structure checks special to prime-order groups: nonsingularity of
//! character submatrices, the support uncertainty bound, minimal-support
//! bases, dimension of the modulated subspace, constructive eigenbases for
//! the windowed multiplier operators, and the random sparsification
//! experiment on boolean cubes.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dissociation::SetMask;
use crate::error::{Error, Result};
use crate::fourier::{dft, idft, pointwise, FuncC, Side};
use crate::group::{Element, GroupSpec};
use crate::linalg::{det, rank_of_rows, MatC, DEFAULT_RANK_TOL};
use crate::operators::{dual_restricted_basis, OperatorSpec, RestrictedOperator};

use super::sweep::mix_seed;

/// Numeric support threshold relative to the max magnitude.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Determinant magnitude floor for the character-submatrix scan.
pub const DET_FLOOR: f64 = 1e-6;

fn require_prime_cyclic(group: &GroupSpec) -> Result<usize> {
    group
        .as_prime_cyclic()
        .ok_or_else(|| Error::BadGroupShape(format!("{group} is not Z_p for a prime p")))
}

fn support_count(f: &FuncC) -> usize {
    let threshold = SUPPORT_TOL * f.max_abs();
    f.support_indices(threshold).len()
}

/// Outcome of a character-submatrix nonsingularity scan over `Z_p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChebotarevReport {
    pub p: usize,
    pub checked: usize,
    pub min_abs_det: f64,
    pub pass: bool,
}

/// Every square submatrix of the `p x p` character matrix `[e(xi.x/p)]` is
/// nonsingular for prime `p`. Checks all submatrices with side up to
/// `max_size` when `sample` is `None`, otherwise a seeded random sample.
/// Asserts `|det| > 1e-6` (floating point stands in for exact cyclotomic
/// arithmetic at these sizes).
pub fn chebotarev_scan(
    p: usize,
    max_size: usize,
    sample: Option<(usize, u64)>,
) -> Result<ChebotarevReport> {
    if !crate::group::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > 13 {
        return Err(Error::Precondition(
            "character scan supported for p <= 13".into(),
        ));
    }
    let group = GroupSpec::cyclic(p)?;
    let max_size = max_size.min(p);
    let submatrix = |rows: &[usize], cols: &[usize]| -> MatC {
        MatC::from_fn(rows.len(), |i, j| {
            group.pairing(Element(rows[i]), Element(cols[j]))
        })
    };

    let mut checked = 0usize;
    let mut min_abs = f64::INFINITY;
    match sample {
        None => {
            for m in 1..=max_size {
                let mut rows = first_combination(m);
                loop {
                    let mut cols = first_combination(m);
                    loop {
                        let d = det(&submatrix(&rows, &cols)).norm();
                        checked += 1;
                        min_abs = min_abs.min(d);
                        if !next_combination(&mut cols, p) {
                            break;
                        }
                    }
                    if !next_combination(&mut rows, p) {
                        break;
                    }
                }
            }
        }
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let m = rng.random_range(1..=max_size);
                let rows = sample_subset(p, m, &mut rng);
                let cols = sample_subset(p, m, &mut rng);
                let d = det(&submatrix(&rows, &cols)).norm();
                checked += 1;
                min_abs = min_abs.min(d);
            }
        }
    }
    Ok(ChebotarevReport {
        p,
        checked,
        min_abs_det: min_abs,
        pass: min_abs > DET_FLOOR,
    })
}

fn first_combination(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Advance a sorted index combination in lexicographic order; false at the end.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn sample_subset(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// Support uncertainty over `Z_p`: a nonzero function satisfies
/// `|supp f| + |supp f^| >= p + 1`. Supports are counted at the numeric
/// threshold `1e-9 * max`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub p: usize,
    pub supp_f: usize,
    pub supp_fhat: usize,
    pub pass: bool,
}

pub fn uncertainty_check(f: &FuncC) -> Result<UncertaintyReport> {
    let p = require_prime_cyclic(f.group())?;
    if f.max_abs() == 0.0 {
        return Err(Error::Precondition("f must be non-zero".into()));
    }
    let supp_f = support_count(f);
    let supp_fhat = support_count(&dft(f));
    Ok(UncertaintyReport {
        p,
        supp_f,
        supp_fhat,
        pass: supp_f + supp_fhat > p,
    })
}

/// Dimension of the modulated subspace `{psi(x) a(x) : supp a^ <= S}` over
/// `Z_p`: computed rank of the generator family next to the closed form
/// `min{|S|, |supp psi|}`.
pub fn modulated_dimension(psi: &FuncC, s: &SetMask) -> Result<(usize, usize)> {
    require_prime_cyclic(psi.group())?;
    let (_, rank) = dual_restricted_basis(psi, s)?;
    let expected = s.cardinality().min(support_count(psi));
    Ok((rank, expected))
}

/// Basis extracted from a family supported on `S` in `Z_p`: `l = rank`
/// independent combinations `g_i` in the span with `|supp g_i| <= |S|-l+1`
/// (row echelon construction), each verified against the uncertainty
/// consequence `|supp g_i^| >= p - |S| + l`. When `l = |S|` the output is
/// the delta basis of `S`.
#[derive(Debug, Clone)]
pub struct MinSupportBasis {
    pub rank: usize,
    pub functions: Vec<FuncC>,
}

pub fn min_support_basis(s: &SetMask, family: &[FuncC]) -> Result<MinSupportBasis> {
    let p = require_prime_cyclic(s.group())?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let elems = s.elements();
    let card = elems.len();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(family.len());
    for f in family {
        let scale = f.max_abs().max(1.0);
        for x in f.group().elements() {
            if !s.contains(x) && f.at(x).norm() > 1e-12 * scale {
                return Err(Error::Precondition(
                    "family member not supported on S".into(),
                ));
            }
        }
        rows.push(elems.iter().map(|&e| f.at(e)).collect());
    }
    let rank = rank_of_rows(&rows, DEFAULT_RANK_TOL);
    if rank == 0 {
        return Err(Error::Precondition("family has rank zero".into()));
    }

    // reduced row echelon over the S coordinates
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let threshold = DEFAULT_RANK_TOL * scale;
    let mut lead = 0usize;
    let mut pivots = 0usize;
    for col in 0..card {
        if pivots == rows.len() {
            break;
        }
        let Some(pivot_row) = (pivots..rows.len())
            .filter(|&i| rows[i][col].norm() > threshold)
            .max_by(|&a, &b| {
                rows[a][col]
                    .norm()
                    .partial_cmp(&rows[b][col].norm())
                    .unwrap()
            })
        else {
            continue;
        };
        rows.swap(pivots, pivot_row);
        let pv = rows[pivots][col];
        for v in rows[pivots].iter_mut() {
            *v /= pv;
        }
        let pivot_vals = rows[pivots].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivots {
                let factor = row[col];
                if factor.norm() > 0.0 {
                    for (x, pval) in row.iter_mut().zip(&pivot_vals) {
                        *x -= factor * pval;
                    }
                }
            }
        }
        pivots += 1;
        lead = col + 1;
    }
    let _ = lead;
    debug_assert_eq!(pivots, rank);

    let group = s.group().clone();
    let mut functions = Vec::with_capacity(rank);
    for row in rows.iter().take(rank) {
        let mut f = FuncC::zeros(group.clone(), Side::Time);
        for (&e, &v) in elems.iter().zip(row) {
            // squash elimination dust so support counts are exact
            let v = if v.norm() > threshold.max(1e-12) {
                v
            } else {
                Complex64::new(0.0, 0.0)
            };
            f.set(e, v);
        }
        let supp = support_count(&f);
        if supp > card - rank + 1 {
            return Err(Error::IdentityCheck {
                name: "echelon support bound".into(),
                err: supp as f64,
                tol: (card - rank + 1) as f64,
            });
        }
        let supp_hat = support_count(&dft(&f));
        if supp_hat < p - card + rank {
            return Err(Error::IdentityCheck {
                name: "uncertainty support bound".into(),
                err: supp_hat as f64,
                tol: (p - card + rank) as f64,
            });
        }
        functions.push(f);
    }
    Ok(MinSupportBasis { rank, functions })
}

/// Which constructive eigenbasis is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenbasisCase {
    /// Window `psi >= 0` with `|supp psi| >= |S|`; operator has multiplier
    /// `S(x)`: characters off `S` are null vectors, the rest transport from
    /// the reflected restriction.
    WindowNonneg,
    /// Multiplier `phi > 0` everywhere; window `S(x)`: null vectors are
    /// transform preimages of the off-`S` characters, the rest embed from
    /// the restriction.
    MultiplierPositive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenbasisReport {
    pub case: EigenbasisCase,
    pub p: usize,
    pub n_functions: usize,
    pub rank: usize,
    pub max_residual: f64,
    pub pass: bool,
}

/// Build the full explicit eigenbasis for the given case over `Z_p` and
/// verify every member (relative eigen-residual below 1e-7) and the total
/// rank `p`.
pub fn constructive_eigenbasis(
    case: EigenbasisCase,
    s: &SetMask,
    weight: &FuncC,
) -> Result<EigenbasisReport> {
    let p = require_prime_cyclic(s.group())?;
    let group = s.group().clone();
    let scale = weight.max_abs();
    let im_max = weight
        .values()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);
    if im_max > 1e-12 * scale.max(1.0) {
        return Err(Error::Precondition("weight must be real-valued".into()));
    }
    if weight.values().iter().any(|v| v.re < -1e-12 * scale) {
        return Err(Error::Precondition("weight must be nonnegative".into()));
    }

    let mut family: Vec<(FuncC, f64)> = Vec::new();
    let op = match case {
        EigenbasisCase::WindowNonneg => {
            if support_count(weight) < s.cardinality() {
                return Err(Error::Precondition(
                    "need |supp psi| >= |S| for the window case".into(),
                ));
            }
            let op = OperatorSpec::t(s.indicator(), weight.clone())?;
            // characters e(sbar . x), sbar off S, are null vectors
            for sbar in group.elements() {
                if !s.contains(sbar) {
                    family.push((group.character(sbar), 0.0));
                }
            }
            // eigenvectors of the reflected restriction transport through
            // the multiplier map
            let restricted = RestrictedOperator::new(&s.reflected(), weight)?;
            let eig = restricted.eigh()?;
            for (j, &mu) in eig.eigenvalues.iter().enumerate() {
                let f = restricted.embed(&eig.vectors.column(j))?;
                let transported = pointwise(weight, &dft(&f))?;
                family.push((transported, mu));
            }
            op
        }
        EigenbasisCase::MultiplierPositive => {
            if weight.values().iter().any(|v| v.re <= 1e-12 * scale) {
                return Err(Error::Precondition(
                    "need phi > 0 everywhere for the multiplier case".into(),
                ));
            }
            let op = OperatorSpec::t(weight.clone(), s.indicator())?;
            // null vectors: solve (M_phi f)(x) = e(-sbar.x)
            for sbar in group.elements() {
                if !s.contains(sbar) {
                    let character = group.character(group.neg(sbar));
                    let fhat = FuncC::from_values(
                        group.clone(),
                        character
                            .values()
                            .iter()
                            .zip(weight.values())
                            .map(|(c, w)| c / w)
                            .collect(),
                        Side::Frequency,
                    )?;
                    family.push((idft(&fhat), 0.0));
                }
            }
            // positive part: eigenvectors of the restriction, embedded
            let restricted = RestrictedOperator::new(s, weight)?;
            let eig = restricted.eigh()?;
            for (j, &mu) in eig.eigenvalues.iter().enumerate() {
                family.push((restricted.embed(&eig.vectors.column(j))?, mu));
            }
            op
        }
    };

    let mut max_residual = 0.0f64;
    for (f, mu) in &family {
        let fnorm = f.norm2();
        if fnorm == 0.0 {
            return Err(Error::IdentityCheck {
                name: "eigenbasis member is zero".into(),
                err: 1.0,
                tol: 0.0,
            });
        }
        let residual = op
            .apply(f)?
            .sub(&f.scale(Complex64::new(*mu, 0.0)))?
            .norm2()
            / (fnorm * mu.abs().max(1.0));
        max_residual = max_residual.max(residual);
    }
    let rows: Vec<Vec<Complex64>> = family.iter().map(|(f, _)| f.values().to_vec()).collect();
    let rank = rank_of_rows(&rows, DEFAULT_RANK_TOL);
    let pass = rank == p && max_residual < 1e-7;
    Ok(EigenbasisReport {
        case,
        p,
        n_functions: family.len(),
        rank,
        max_residual,
        pass,
    })
}

/// Monte-Carlo sparsification on a boolean cube: keep each element of `S`
/// with probability `p = min(1, c r^{-1/2} log^{1/2} |S|)` and report how
/// often `L` stays inside `S' + S'`. Report-only; nothing is asserted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparsifyReport {
    pub p_keep: f64,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_size_ratio: f64,
    pub warned_small_r: bool,
}

pub fn sparsify_cover(
    s: &SetMask,
    lambda: &SetMask,
    r: u32,
    c: f64,
    trials: usize,
    seed: u64,
) -> Result<SparsifyReport> {
    let group = s.group().clone();
    if group.factor_orders().iter().any(|&n| n != 2) {
        return Err(Error::BadGroupShape(format!(
            "{group} is not a boolean cube"
        )));
    }
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    // precondition: the pair convolution dominates r on lambda
    let conv = crate::fourier::convolve(&s.indicator(), &s.indicator())?;
    for x in lambda.elements() {
        if conv.at(x).re < r as f64 - 1e-6 {
            return Err(Error::Precondition(format!(
                "(S*S)({}) < r",
                x.0
            )));
        }
    }
    let card = s.cardinality() as f64;
    let log_card = if card >= 2.0 { card.log2() } else { 0.0 };
    let warned_small_r = (r as f64) < log_card;
    let p_keep = (c * (r as f64).powf(-0.5) * log_card.sqrt()).clamp(0.0, 1.0);

    let elems = s.elements();
    let mut successes = 0usize;
    let mut size_sum = 0usize;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, t as u64));
        let kept: Vec<Element> = elems
            .iter()
            .copied()
            .filter(|_| rng.random_range(0.0..1.0) < p_keep)
            .collect();
        size_sum += kept.len();
        let kept_mask = SetMask::from_elements(group.clone(), &kept);
        let sumset = kept_mask.sumset(&kept_mask)?;
        if lambda.elements().iter().all(|&x| sumset.contains(x)) {
            successes += 1;
        }
    }
    let n = trials as f64;
    let freq = successes as f64 / n;
    let z = 1.959963984540054f64;
    let denom = 1.0 + z * z / n;
    let center = (freq + z * z / (2.0 * n)) / denom;
    let half = z * ((freq * (1.0 - freq) / n + z * z / (4.0 * n * n)).sqrt()) / denom;
    let mean_size_ratio = if p_keep > 0.0 {
        (size_sum as f64 / n) / (p_keep * card)
    } else {
        0.0
    };
    Ok(SparsifyReport {
        p_keep,
        trials,
        successes,
        frequency: freq,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
        mean_size_ratio,
        warned_small_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissociation::subspace;

    #[test]
    fn chebotarev_small_primes() {
        for p in [3usize, 5, 7] {
            let rep = chebotarev_scan(p, p, None).unwrap();
            assert!(rep.pass, "p={p}: min |det| = {}", rep.min_abs_det);
        }
        // p = 3 all sizes: sum_m C(3,m)^2 = 9 + 9 + 1 = 19
        let rep = chebotarev_scan(3, 3, None).unwrap();
        assert_eq!(rep.checked, 19);
    }

    #[test]
    fn chebotarev_2x2_det_value() {
        // rows {0,1} x cols {0,1} over Z_3: det = e(2 pi i / 3) - 1, i.e.
        // e^{-4 pi i/3} - 1; |det| = sqrt 3
        let g = GroupSpec::cyclic(3).unwrap();
        let m = MatC::from_fn(2, |i, j| g.pairing(Element(i), Element(j)));
        let d = det(&m);
        let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
            - Complex64::new(1.0, 0.0);
        assert!((d - expect).norm() < 1e-12);
        assert!((d.norm() - 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn chebotarev_rejects_composite_and_samples() {
        assert!(matches!(chebotarev_scan(4, 2, None), Err(Error::NotPrime(4))));
        let rep = chebotarev_scan(11, 11, Some((500, 7))).unwrap();
        assert_eq!(rep.checked, 500);
        assert!(rep.pass);
    }

    #[test]
    fn uncertainty_extremes() {
        let g = GroupSpec::cyclic(5).unwrap();
        let d = g.delta(g.zero());
        let rep = uncertainty_check(&d).unwrap();
        assert_eq!((rep.supp_f, rep.supp_fhat), (1, 5));
        assert!(rep.pass);

        let flat = FuncC::constant(g.clone(), Complex64::new(1.0, 0.0), Side::Time);
        let rep = uncertainty_check(&flat).unwrap();
        assert_eq!((rep.supp_f, rep.supp_fhat), (5, 1));
        assert!(rep.pass);

        assert!(uncertainty_check(&FuncC::zeros(g, Side::Time)).is_err());
        let g6 = GroupSpec::cyclic(6).unwrap();
        assert!(uncertainty_check(&g6.delta(g6.zero())).is_err());
    }

    #[test]
    fn uncertainty_random_sparse() {
        let g = GroupSpec::cyclic(11).unwrap();
        for seed in 0..100u64 {
            let size = 1 + (seed as usize % 10);
            let s = SetMask::random(g.clone(), size, 400 + seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut f = FuncC::zeros(g.clone(), Side::Time);
            for e in s.elements() {
                f.set(
                    e,
                    Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-1.0..1.0)),
                );
            }
            let rep = uncertainty_check(&f).unwrap();
            assert!(rep.pass, "seed {seed}");
        }
    }

    #[test]
    fn modulated_dimension_formula() {
        let g = GroupSpec::cyclic(5).unwrap();
        let s = SetMask::from_indices(g.clone(), &[0, 1, 2]).unwrap();
        let (rank, expected) = modulated_dimension(&g.delta(g.element(1).unwrap()), &s).unwrap();
        assert_eq!((rank, expected), (1, 1));
    }

    #[test]
    fn min_support_full_rank_gives_deltas() {
        let g = GroupSpec::cyclic(7).unwrap();
        let s = SetMask::from_indices(g.clone(), &[1, 3, 4]).unwrap();
        // three independent functions on S
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let family: Vec<FuncC> = (0..3)
            .map(|_| {
                let mut f = FuncC::zeros(g.clone(), Side::Time);
                for e in s.elements() {
                    f.set(
                        e,
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    );
                }
                f
            })
            .collect();
        let basis = min_support_basis(&s, &family).unwrap();
        assert_eq!(basis.rank, 3);
        for (f, e) in basis.functions.iter().zip(s.elements()) {
            assert!((f.at(e) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
            assert_eq!(support_count(f), 1);
        }
    }

    #[test]
    fn min_support_single_function() {
        let g = GroupSpec::cyclic(7).unwrap();
        let s = SetMask::from_indices(g.clone(), &[0, 2]).unwrap();
        let mut f = FuncC::zeros(g.clone(), Side::Time);
        f.set(g.element(0).unwrap(), Complex64::new(2.0, 0.0));
        f.set(g.element(2).unwrap(), Complex64::new(-1.0, 1.0));
        let basis = min_support_basis(&s, &[f]).unwrap();
        assert_eq!(basis.rank, 1);
        assert_eq!(support_count(&basis.functions[0]), 2);
    }

    #[test]
    fn min_support_rank_two_of_three() {
        let g = GroupSpec::cyclic(7).unwrap();
        let s = SetMask::from_indices(g.clone(), &[0, 1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = {
            let mut f = FuncC::zeros(g.clone(), Side::Time);
            for e in s.elements() {
                f.set(e, Complex64::new(rng.random_range(-1.0..1.0), 0.0));
            }
            f
        };
        let b = {
            let mut f = FuncC::zeros(g.clone(), Side::Time);
            for e in s.elements() {
                f.set(e, Complex64::new(rng.random_range(-1.0..1.0), 0.0));
            }
            f
        };
        let basis = min_support_basis(&s, &[a, b]).unwrap();
        assert_eq!(basis.rank, 2);
        for f in &basis.functions {
            assert!(support_count(f) <= 2);
            assert!(support_count(&dft(f)) >= 7 - 3 + 2);
        }
    }

    #[test]
    fn eigenbasis_window_case_z5() {
        // Z_5, S = {0,1}, psi = 1: three characters plus two transported
        // eigenvectors, full rank
        let g = GroupSpec::cyclic(5).unwrap();
        let s = SetMask::from_indices(g.clone(), &[0, 1]).unwrap();
        let psi = FuncC::constant(g.clone(), Complex64::new(1.0, 0.0), Side::Time);
        let rep = constructive_eigenbasis(EigenbasisCase::WindowNonneg, &s, &psi).unwrap();
        assert_eq!(rep.n_functions, 5);
        assert_eq!(rep.rank, 5);
        assert!(rep.max_residual < 1e-7);
        assert!(rep.pass);
    }

    #[test]
    fn eigenbasis_multiplier_case_z3() {
        // Z_3, S = {0}, phi = 1: preimages are deltas, rank 3
        let g = GroupSpec::cyclic(3).unwrap();
        let s = SetMask::from_indices(g.clone(), &[0]).unwrap();
        let phi = FuncC::constant(g.clone(), Complex64::new(1.0, 0.0), Side::Time);
        let rep = constructive_eigenbasis(EigenbasisCase::MultiplierPositive, &s, &phi).unwrap();
        assert_eq!(rep.rank, 3);
        assert!(rep.pass);
    }

    #[test]
    fn eigenbasis_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for p in [5usize, 7] {
            let g = GroupSpec::cyclic(p).unwrap();
            for seed in 0..5u64 {
                let s = SetMask::random(g.clone(), 1 + (seed as usize % (p - 2)), seed).unwrap();
                // window case: nonneg psi with full support
                let psi = FuncC::from_values(
                    g.clone(),
                    (0..p)
                        .map(|_| Complex64::new(rng.random_range(0.2..1.5), 0.0))
                        .collect(),
                    Side::Time,
                )
                .unwrap();
                let rep =
                    constructive_eigenbasis(EigenbasisCase::WindowNonneg, &s, &psi).unwrap();
                assert!(rep.pass, "window p={p} seed={seed}: {rep:?}");
                let rep =
                    constructive_eigenbasis(EigenbasisCase::MultiplierPositive, &s, &psi)
                        .unwrap();
                assert!(rep.pass, "multiplier p={p} seed={seed}: {rep:?}");
            }
        }
    }

    #[test]
    fn sparsify_clamped_probability_always_covers() {
        let g = GroupSpec::parse("2^4").unwrap();
        let gens = [
            g.from_digits(&[1, 0, 0, 0]).unwrap(),
            g.from_digits(&[0, 1, 0, 0]).unwrap(),
            g.from_digits(&[0, 0, 1, 0]).unwrap(),
        ];
        let p = subspace(&g, &gens).unwrap();
        let lam = SetMask::from_elements(g.clone(), &[gens[0], gens[1]]);
        // huge c clamps p_keep to 1: S' = S always, coverage certain
        let rep = sparsify_cover(&p, &lam, 8, 100.0, 20, 1).unwrap();
        assert_eq!(rep.p_keep, 1.0);
        assert_eq!(rep.frequency, 1.0);

        // empty lambda: frequency 1 regardless
        let rep = sparsify_cover(&p, &SetMask::empty(g), 8, 0.5, 10, 2).unwrap();
        assert_eq!(rep.frequency, 1.0);
    }

    #[test]
    fn sparsify_reports_ci() {
        let g = GroupSpec::parse("2^5").unwrap();
        let gens = [
            g.from_digits(&[1, 0, 0, 0, 0]).unwrap(),
            g.from_digits(&[0, 1, 0, 0, 0]).unwrap(),
            g.from_digits(&[0, 0, 1, 0, 0]).unwrap(),
        ];
        let p = subspace(&g, &gens).unwrap();
        let lam = SetMask::from_elements(g.clone(), &gens);
        let rep = sparsify_cover(&p, &lam, 8, 2.0, 200, 3).unwrap();
        assert!(rep.ci_low <= rep.frequency && rep.frequency <= rep.ci_high);
        assert!(rep.mean_size_ratio > 0.5 && rep.mean_size_ratio < 1.5);
        // deterministic given the seed
        let rep2 = sparsify_cover(&p, &lam, 8, 2.0, 200, 3).unwrap();
        assert_eq!(rep.successes, rep2.successes);
    }

    #[test]
    fn sparsify_rejects_bad_shape_and_violated_level() {
        let g = GroupSpec::cyclic(9).unwrap();
        let s = SetMask::random(g, 3, 1).unwrap();
        let lam = SetMask::empty(s.group().clone());
        assert!(sparsify_cover(&s, &lam, 1, 1.0, 5, 0).is_err());

        let g2 = GroupSpec::parse("2^3").unwrap();
        let s2 = SetMask::from_indices(g2.clone(), &[1, 2]).unwrap();
        let lam2 = SetMask::from_indices(g2, &[7]).unwrap();
        // (S*S)(7) = 0 < r
        assert!(sparsify_cover(&s2, &lam2, 1, 1.0, 5, 0).is_err());
    }
}
