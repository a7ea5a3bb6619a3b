//! The Fourier transform on a finite abelian group and its algebra.
//!
//! Conventions (fixed throughout the crate):
//!
//! - forward transform, unnormalized: `f^(xi) = sum_x f(x) e(-xi . x)`,
//! - inversion carries the `1/N`:      `f(x) = (1/N) sum_xi f^(xi) e(xi . x)`,
//! - convolution: `(f * g)(x) = sum_y f(y) g(x - y)`, so `(f*g)^ = f^ g^`,
//! - reflection `(C f)(x) = f(-x)`, pointwise product `(P_rho f)(x) = rho(x) f(x)`,
//!   complex conjugation `conj`.
//!
//! Every downstream identity (Parseval, the operator composition chains, the
//! trace formulas) depends on this normalization, so the transform is never
//! rescaled.
//!
//! The transform dispatches on group shape: a Walsh–Hadamard butterfly when
//! every factor is `Z_2`, and otherwise a pass over each cyclic factor with a
//! precomputed root table (the product-group Cooley–Tukey decomposition).
//! Both must agree with [`dft_naive`], the dense character-matrix route, to
//! 1e-10; the naive route is kept as the test oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// Which side of the transform a function's values live on. Advisory
/// bookkeeping only: operator chains apply the transform to frequency-side
/// objects freely, so a mismatch is never a hard failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Time,
    Frequency,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Time => Side::Frequency,
            Side::Frequency => Side::Time,
        }
    }
}

/// A dense complex-valued function on a finite abelian group.
#[derive(Debug, Clone, PartialEq)]
pub struct FuncC {
    group: GroupSpec,
    values: Vec<Complex64>,
    side: Side,
}

pub(crate) const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

impl FuncC {
    pub fn zeros(group: GroupSpec, side: Side) -> Self {
        let n = group.order();
        Self {
            group,
            values: vec![ZERO_C; n],
            side,
        }
    }

    pub fn constant(group: GroupSpec, value: Complex64, side: Side) -> Self {
        let n = group.order();
        Self {
            group,
            values: vec![value; n],
            side,
        }
    }

    pub fn from_values(group: GroupSpec, values: Vec<Complex64>, side: Side) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch(values.len(), group.order()));
        }
        Ok(Self {
            group,
            values,
            side,
        })
    }

    pub(crate) fn from_values_unchecked(
        group: GroupSpec,
        values: Vec<Complex64>,
        side: Side,
    ) -> Self {
        debug_assert_eq!(values.len(), group.order());
        Self {
            group,
            values,
            side,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn at(&self, x: Element) -> Complex64 {
        self.values[x.0]
    }

    pub fn set(&mut self, x: Element, v: Complex64) {
        self.values[x.0] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Indices where `|f(x)|` exceeds `threshold`.
    pub fn support_indices(&self, threshold: f64) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > threshold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Short deterministic descriptor for report instance strings.
    pub fn descriptor(&self) -> String {
        let mut h = Fnv::new();
        for v in &self.values {
            h.write_u64(v.re.to_bits());
            h.write_u64(v.im.to_bits());
        }
        format!("func#{:08x}", h.finish() as u32)
    }

    pub fn add(&self, other: &FuncC) -> Result<FuncC> {
        same_group(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FuncC::from_values_unchecked(
            self.group.clone(),
            values,
            self.side,
        ))
    }

    pub fn sub(&self, other: &FuncC) -> Result<FuncC> {
        same_group(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FuncC::from_values_unchecked(
            self.group.clone(),
            values,
            self.side,
        ))
    }

    pub fn scale(&self, c: Complex64) -> FuncC {
        let values = self.values.iter().map(|v| v * c).collect();
        FuncC::from_values_unchecked(self.group.clone(), values, self.side)
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf29ce484222325)
    }
    fn write_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

pub(crate) fn same_group(a: &FuncC, b: &FuncC) -> Result<()> {
    if a.group != b.group {
        return Err(Error::GroupMismatch(
            a.group.to_string(),
            b.group.to_string(),
        ));
    }
    Ok(())
}

/// Forward transform `f^(xi) = sum_x f(x) e(-xi . x)` (unnormalized).
pub fn dft(f: &FuncC) -> FuncC {
    let g = f.group();
    let mut values = f.values().to_vec();
    if g.factor_orders().iter().all(|&n| n == 2) {
        wht_in_place(&mut values);
    } else {
        axis_passes(g, &mut values);
    }
    FuncC::from_values_unchecked(g.clone(), values, f.side().flip())
}

/// Inverse transform `f(x) = (1/N) sum_xi F(xi) e(xi . x)`.
pub fn idft(f: &FuncC) -> FuncC {
    // conj . dft . conj reuses the forward kernel with the opposite sign.
    let n = f.group().order() as f64;
    let conj_in: Vec<Complex64> = f.values().iter().map(|v| v.conj()).collect();
    let tmp = FuncC::from_values_unchecked(f.group().clone(), conj_in, f.side());
    let out = dft(&tmp);
    let values = out.values().iter().map(|v| v.conj() / n).collect();
    FuncC::from_values_unchecked(f.group().clone(), values, f.side().flip())
}

/// Dense character-matrix transform, `O(N^2)` pairings. Oracle for the fast
/// paths; do not use in hot loops.
pub fn dft_naive(f: &FuncC) -> FuncC {
    let g = f.group();
    let values = g
        .elements()
        .map(|xi| {
            let mut acc = ZERO_C;
            for x in g.elements() {
                acc += f.at(x) * g.pairing(xi, x).conj();
            }
            acc
        })
        .collect();
    FuncC::from_values_unchecked(g.clone(), values, f.side().flip())
}

/// Walsh–Hadamard butterfly; valid exactly when every factor is Z_2, where
/// the kernel is `(-1)^(<xi, x>)`.
fn wht_in_place(values: &mut [Complex64]) {
    let n = values.len();
    let mut h = 1;
    while h < n {
        let mut base = 0;
        while base < n {
            for j in base..base + h {
                let u = values[j];
                let v = values[j + h];
                values[j] = u + v;
                values[j + h] = u - v;
            }
            base += 2 * h;
        }
        h *= 2;
    }
}

/// One pass per cyclic factor with a per-factor root table. Total cost
/// `N * sum_j n_j`.
fn axis_passes(g: &GroupSpec, values: &mut [Complex64]) {
    let orders = g.factor_orders();
    let n_total = values.len();
    // stride of axis j = product of the orders after it (last factor fastest)
    let mut strides = vec![1usize; orders.len()];
    for j in (0..orders.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * orders[j + 1];
    }
    let mut buf: Vec<Complex64> = Vec::new();
    for (axis, &n) in orders.iter().enumerate() {
        let stride = strides[axis];
        let block = n * stride;
        let outer = n_total / block;
        // roots[r] = e(-r/n)
        let roots: Vec<Complex64> = (0..n)
            .map(|r| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * r as f64 / n as f64))
            .collect();
        buf.clear();
        buf.resize(n, ZERO_C);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * block + s;
                for (t, b) in buf.iter_mut().enumerate() {
                    *b = values[base + t * stride];
                }
                for freq in 0..n {
                    let mut acc = ZERO_C;
                    for (t, b) in buf.iter().enumerate() {
                        acc += b * roots[(freq * t) % n];
                    }
                    values[base + freq * stride] = acc;
                }
            }
        }
    }
}

/// Reflection `(C f)(x) = f(-x)`.
pub fn reflect(f: &FuncC) -> FuncC {
    let g = f.group();
    let values = g.elements().map(|x| f.at(g.neg(x))).collect();
    FuncC::from_values_unchecked(g.clone(), values, f.side())
}

/// Pointwise multiplication `(P_rho f)(x) = rho(x) f(x)`.
pub fn pointwise(rho: &FuncC, f: &FuncC) -> Result<FuncC> {
    same_group(rho, f)?;
    let values = rho
        .values()
        .iter()
        .zip(f.values())
        .map(|(r, v)| r * v)
        .collect();
    Ok(FuncC::from_values_unchecked(
        f.group().clone(),
        values,
        f.side(),
    ))
}

/// Complex conjugation.
pub fn conjugate(f: &FuncC) -> FuncC {
    let values = f.values().iter().map(|v| v.conj()).collect();
    FuncC::from_values_unchecked(f.group().clone(), values, f.side())
}

/// Convolution through the spectral route `idft(dft(f) dft(g))`.
pub fn convolve(f: &FuncC, g: &FuncC) -> Result<FuncC> {
    same_group(f, g)?;
    let fh = dft(f);
    let gh = dft(g);
    let prod = pointwise(&fh, &gh)?;
    Ok(idft(&prod).with_side(f.side()))
}

/// Direct `O(N^2)` double sum `(f * g)(x) = sum_y f(y) g(x - y)`. Reference
/// route for the spectral convolution.
pub fn convolve_direct(f: &FuncC, g: &FuncC) -> Result<FuncC> {
    same_group(f, g)?;
    let grp = f.group();
    let mut values = vec![ZERO_C; grp.order()];
    for y in grp.elements() {
        let fy = f.at(y);
        if fy == ZERO_C {
            continue;
        }
        for x in grp.elements() {
            values[x.0] += fy * g.at(grp.sub(x, y));
        }
    }
    Ok(FuncC::from_values_unchecked(
        grp.clone(),
        values,
        f.side(),
    ))
}

/// `l`-fold convolution power: one copy of `f` for `l = 1`, `f * f` for 2, ...
pub fn convolve_power(f: &FuncC, l: usize) -> Result<FuncC> {
    if l < 1 {
        return Err(Error::Precondition(
            "convolution power needs l >= 1".into(),
        ));
    }
    let mut out = f.clone();
    for _ in 1..l {
        out = convolve(&out, f)?;
    }
    Ok(out)
}

/// Inner product `<f, g> = sum_x f(x) conj(g(x))`.
pub fn inner(f: &FuncC, g: &FuncC) -> Result<Complex64> {
    same_group(f, g)?;
    Ok(f.values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a * b.conj())
        .sum())
}

impl FuncC {
    /// `||f||_2 = (sum |f|^2)^(1/2)`.
    pub fn norm2(&self) -> f64 {
        self.norm2_sq().sqrt()
    }

    /// `||f||_2^2 = sum |f|^2`.
    pub fn norm2_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `||f||_1 = sum |f|`.
    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    /// `||f||_inf = max |f|`.
    pub fn norm_inf(&self) -> f64 {
        self.max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_func(g: &GroupSpec, rng: &mut ChaCha8Rng) -> FuncC {
        let values = (0..g.order())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        FuncC::from_values(g.clone(), values, Side::Time).unwrap()
    }

    fn max_diff(a: &FuncC, b: &FuncC) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn dft_delta_is_flat() {
        let g = GroupSpec::cyclic(4).unwrap();
        let f = g.delta(g.zero());
        let fh = dft(&f);
        for v in fh.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert_eq!(fh.side(), Side::Frequency);
    }

    #[test]
    fn dft_z2_pair() {
        let g = GroupSpec::cyclic(2).unwrap();
        let f = FuncC::from_values(
            g,
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            Side::Time,
        )
        .unwrap();
        let fh = dft(&f);
        assert!((fh.values()[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(fh.values()[1].norm() < 1e-12);
    }

    #[test]
    fn dft_z3_delta1() {
        let g = GroupSpec::cyclic(3).unwrap();
        let f = g.delta(g.element(1).unwrap());
        let fh = dft(&f);
        let w = |t: f64| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * t / 3.0);
        assert!((fh.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((fh.values()[1] - w(1.0)).norm() < 1e-12);
        assert!((fh.values()[2] - w(2.0)).norm() < 1e-12);
    }

    #[test]
    fn idft_flat_is_delta() {
        let g = GroupSpec::cyclic(4).unwrap();
        let flat = FuncC::constant(g.clone(), Complex64::new(1.0, 0.0), Side::Frequency);
        let f = idft(&flat);
        assert!(max_diff(&f, &g.delta(g.zero()).with_side(Side::Time)) < 1e-12);
    }

    #[test]
    fn idft_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in ["6", "5", "2,3", "2^3", "4,3"] {
            let g = GroupSpec::parse(spec).unwrap();
            let f = random_func(&g, &mut rng);
            let back = idft(&dft(&f));
            assert!(max_diff(&f, &back) < 1e-10, "roundtrip on {spec}");
        }
        // delta roundtrip over Z_5
        let g = GroupSpec::cyclic(5).unwrap();
        let d2 = g.delta(g.element(2).unwrap());
        assert!(max_diff(&idft(&dft(&d2)), &d2) < 1e-12);
    }

    #[test]
    fn fast_paths_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for spec in ["2^4", "2^6", "8", "12", "2,3,5", "9,4", "7"] {
            let g = GroupSpec::parse(spec).unwrap();
            let f = random_func(&g, &mut rng);
            let fast = dft(&f);
            let slow = dft_naive(&f);
            assert!(max_diff(&fast, &slow) < 1e-10, "fast vs naive on {spec}");
        }
    }

    #[test]
    fn reflect_delta() {
        let g = GroupSpec::cyclic(5).unwrap();
        let f = g.delta(g.element(2).unwrap());
        let r = reflect(&f);
        assert!(max_diff(&r, &g.delta(g.element(3).unwrap())) < 1e-15);
        // C^2 = I
        assert!(max_diff(&reflect(&r), &f) < 1e-15);
    }

    #[test]
    fn pointwise_composition_and_conj_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GroupSpec::parse("2,3").unwrap();
        let rho = random_func(&g, &mut rng);
        let sigma = random_func(&g, &mut rng);
        let f = random_func(&g, &mut rng);
        let a = pointwise(&rho, &pointwise(&sigma, &f).unwrap()).unwrap();
        let b = pointwise(&pointwise(&rho, &sigma).unwrap(), &f).unwrap();
        assert!(max_diff(&a, &b) < 1e-12);
        assert!(max_diff(&conjugate(&conjugate(&f)), &f) < 1e-15);
    }

    #[test]
    fn convolve_indicator_z5() {
        // S = {0,1} in Z_5: S*S = (1,2,1,0,0).
        let g = GroupSpec::cyclic(5).unwrap();
        let mut s = FuncC::zeros(g.clone(), Side::Time);
        s.set(g.element(0).unwrap(), Complex64::new(1.0, 0.0));
        s.set(g.element(1).unwrap(), Complex64::new(1.0, 0.0));
        let c = convolve(&s, &s).unwrap();
        let expect = [1.0, 2.0, 1.0, 0.0, 0.0];
        for (v, e) in c.values().iter().zip(expect) {
            assert!((v - Complex64::new(e, 0.0)).norm() < 1e-10);
        }
        let d = convolve_direct(&s, &s).unwrap();
        assert!(max_diff(&c, &d) < 1e-10);
    }

    #[test]
    fn convolve_with_delta_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = GroupSpec::parse("4,3").unwrap();
        let f = random_func(&g, &mut rng);
        let c = convolve(&f, &g.delta(g.zero())).unwrap();
        assert!(max_diff(&c, &f) < 1e-10);
    }

    #[test]
    fn convolution_theorem() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GroupSpec::cyclic(6).unwrap();
        let f = random_func(&g, &mut rng);
        let h = random_func(&g, &mut rng);
        let lhs = dft(&convolve(&f, &h).unwrap());
        let rhs = pointwise(&dft(&f), &dft(&h)).unwrap();
        assert!(max_diff(&lhs, &rhs) < 1e-9);
    }

    #[test]
    fn convolve_power_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = GroupSpec::cyclic(7).unwrap();
        let f = random_func(&g, &mut rng);
        assert!(max_diff(&convolve_power(&f, 1).unwrap(), &f) < 1e-15);
        assert!(
            max_diff(
                &convolve_power(&f, 2).unwrap(),
                &convolve(&f, &f).unwrap()
            ) < 1e-12
        );
        // dft(f *3) = dft(f)^3
        let p3 = dft(&convolve_power(&f, 3).unwrap());
        let fh = dft(&f);
        let cube = pointwise(&pointwise(&fh, &fh).unwrap(), &fh).unwrap();
        assert!(max_diff(&p3, &cube) < 1e-9);
        assert!(convolve_power(&f, 0).is_err());
    }

    #[test]
    fn parseval_and_plancherel() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = GroupSpec::cyclic(8).unwrap();
        let f = random_func(&g, &mut rng);
        let h = random_func(&g, &mut rng);
        let n = g.order() as f64;
        assert!((f.norm2_sq() - dft(&f).norm2_sq() / n).abs() < 1e-10 * f.norm2_sq().max(1.0));
        let lhs = inner(&f, &h).unwrap();
        let rhs = inner(&dft(&f), &dft(&h)).unwrap() / n;
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn inner_of_deltas() {
        let g = GroupSpec::cyclic(5).unwrap();
        let a = g.delta(g.element(1).unwrap());
        let b = g.delta(g.element(2).unwrap());
        assert!((inner(&a, &a).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(inner(&a, &b).unwrap().norm() < 1e-15);
    }

    #[test]
    fn conv_l2_identity() {
        // sum_y |(f*g)(y)|^2 = (1/N) sum_xi |f^|^2 |g^|^2
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = GroupSpec::parse("2,5").unwrap();
        let f = random_func(&g, &mut rng);
        let h = random_func(&g, &mut rng);
        let lhs = convolve(&f, &h).unwrap().norm2_sq();
        let rhs: f64 = dft(&f)
            .values()
            .iter()
            .zip(dft(&h).values())
            .map(|(a, b)| a.norm_sqr() * b.norm_sqr())
            .sum::<f64>()
            / g.order() as f64;
        assert!((lhs - rhs).abs() < 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn group_mismatch_rejected() {
        let g1 = GroupSpec::cyclic(4).unwrap();
        let g2 = GroupSpec::cyclic(5).unwrap();
        let f = FuncC::zeros(g1, Side::Time);
        let h = FuncC::zeros(g2, Side::Time);
        assert!(convolve(&f, &h).is_err());
        assert!(inner(&f, &h).is_err());
        assert!(pointwise(&f, &h).is_err());
    }
}
