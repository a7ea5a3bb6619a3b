//! Finite abelian groups `G = Z_{n1} x ... x Z_{nk}` with a canonical
//! mixed-radix element encoding and the character pairing.
//!
//! Elements are identified with indices in `[0, N)`, `N = n1 * ... * nk`.
//! Index `i` decodes to digits `(x1, ..., xk)` with the *last* factor
//! running fastest. The dual group is identified with `G` through the same
//! encoding; the pairing of `xi` and `x` is
//! `e(xi . x) = exp(2 pi i * sum_j xi_j x_j / n_j)`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FuncC, Side};

/// A finite abelian group as an ordered product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<usize>,
    order: usize,
}

/// A group element as its canonical mixed-radix index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub usize);

impl GroupSpec {
    /// Build a group from its cyclic factor orders. All orders must be >= 2.
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::ParseGroup {
                spec: String::new(),
                reason: "at least one cyclic factor required".into(),
            });
        }
        let mut order: usize = 1;
        for &n in &orders {
            if n < 2 {
                return Err(Error::ParseGroup {
                    spec: format!("{orders:?}"),
                    reason: format!("cyclic order {n} < 2"),
                });
            }
            order = order.checked_mul(n).ok_or_else(|| Error::ParseGroup {
                spec: format!("{orders:?}"),
                reason: "group order overflows".into(),
            })?;
        }
        Ok(Self { orders, order })
    }

    /// Cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parse the group-spec grammar `term (',' term)*` with `term := INT | INT '^' INT`,
    /// e.g. `12`, `2,2,3`, `2^5`. The base is a cyclic order (>= 2), the
    /// exponent a repetition count (>= 1).
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::ParseGroup {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let mut orders = Vec::new();
        for term in spec.split(',') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (base, reps) = match term.split_once('^') {
                Some((b, e)) => {
                    let base: usize = b.trim().parse().map_err(|_| bad("bad integer"))?;
                    let reps: usize = e.trim().parse().map_err(|_| bad("bad exponent"))?;
                    if reps < 1 {
                        return Err(bad("repetition count must be >= 1"));
                    }
                    (base, reps)
                }
                None => (term.parse().map_err(|_| bad("bad integer"))?, 1),
            };
            if base < 2 {
                return Err(bad("cyclic order must be >= 2"));
            }
            for _ in 0..reps {
                orders.push(base);
            }
        }
        Self::new(orders)
    }

    /// `N = |G|`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The cyclic factor orders `n1..nk`.
    pub fn factor_orders(&self) -> &[usize] {
        &self.orders
    }

    /// Canonical spec string, with `^` compression of equal runs.
    pub fn spec_string(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.orders.len() {
            let n = self.orders[i];
            let mut j = i;
            while j < self.orders.len() && self.orders[j] == n {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("{n}^{}", j - i));
            } else {
                parts.push(format!("{n}"));
            }
            i = j;
        }
        parts.join(",")
    }

    /// Validated element from an index.
    pub fn element(&self, index: usize) -> Result<Element> {
        if index < self.order {
            Ok(Element(index))
        } else {
            Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    pub fn zero(&self) -> Element {
        Element(0)
    }

    /// Iterate all elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order).map(Element)
    }

    /// Decode an index into mixed-radix digits, last factor fastest.
    pub fn digits(&self, a: Element) -> Vec<usize> {
        debug_assert!(a.0 < self.order);
        let mut rest = a.0;
        let mut out = vec![0usize; self.orders.len()];
        for (d, &n) in out.iter_mut().zip(&self.orders).rev() {
            *d = rest % n;
            rest /= n;
        }
        out
    }

    /// Encode digits back into the canonical index.
    pub fn from_digits(&self, digits: &[usize]) -> Result<Element> {
        if digits.len() != self.orders.len() {
            return Err(Error::DimensionMismatch(digits.len(), self.orders.len()));
        }
        let mut idx = 0usize;
        for (&d, &n) in digits.iter().zip(&self.orders) {
            if d >= n {
                return Err(Error::IndexOutOfRange { index: d, order: n });
            }
            idx = idx * n + d;
        }
        Ok(Element(idx))
    }

    /// Componentwise addition mod `n_j`.
    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(a.0 < self.order && b.0 < self.order);
        let mut ra = a.0;
        let mut rb = b.0;
        let mut idx = 0usize;
        let mut weight = 1usize;
        for &n in self.orders.iter().rev() {
            let da = ra % n;
            let db = rb % n;
            ra /= n;
            rb /= n;
            idx += ((da + db) % n) * weight;
            weight *= n;
        }
        Element(idx)
    }

    /// Componentwise negation mod `n_j`.
    pub fn neg(&self, a: Element) -> Element {
        debug_assert!(a.0 < self.order);
        let mut ra = a.0;
        let mut idx = 0usize;
        let mut weight = 1usize;
        for &n in self.orders.iter().rev() {
            let da = ra % n;
            ra /= n;
            idx += ((n - da) % n) * weight;
            weight *= n;
        }
        Element(idx)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// Repeated addition `k * a`.
    pub fn scalar_mul(&self, k: usize, a: Element) -> Element {
        let mut out = self.zero();
        for _ in 0..k {
            out = self.add(out, a);
        }
        out
    }

    /// The character pairing `e(xi . x)` with
    /// `xi . x = sum_j xi_j x_j / n_j` — a unit-modulus complex scalar.
    ///
    /// Each product is reduced mod `n_j` before the division so the phase
    /// stays accurate for large factor orders.
    pub fn pairing(&self, xi: Element, x: Element) -> Complex64 {
        debug_assert!(xi.0 < self.order && x.0 < self.order);
        let mut rxi = xi.0;
        let mut rx = x.0;
        let mut t = 0.0f64;
        for &n in self.orders.iter().rev() {
            let dxi = rxi % n;
            let dx = rx % n;
            rxi /= n;
            rx /= n;
            t += ((dxi * dx) % n) as f64 / n as f64;
        }
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
    }

    /// Indicator of a single point, `delta_c(x) = [x = c]`.
    pub fn delta(&self, c: Element) -> FuncC {
        let mut values = vec![Complex64::new(0.0, 0.0); self.order];
        values[c.0] = Complex64::new(1.0, 0.0);
        FuncC::from_values_unchecked(self.clone(), values, Side::Time)
    }

    /// The character `x -> e(s . x)` as a function on the group.
    pub fn character(&self, s: Element) -> FuncC {
        let values = self.elements().map(|x| self.pairing(s, x)).collect();
        FuncC::from_values_unchecked(self.clone(), values, Side::Time)
    }

    /// `Some(p)` when the group is `Z_p` with `p` prime.
    pub fn as_prime_cyclic(&self) -> Option<usize> {
        if self.orders.len() == 1 && is_prime(self.orders[0]) {
            Some(self.orders[0])
        } else {
            None
        }
    }

    /// `Some((p, k))` when the group is `(Z_p)^k` with `p` prime.
    pub fn as_prime_power_shape(&self) -> Option<(usize, usize)> {
        let p = self.orders[0];
        if is_prime(p) && self.orders.iter().all(|&n| n == p) {
            Some((p, self.orders.len()))
        } else {
            None
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[{}]", self.spec_string())
    }
}

/// Trial-division primality, adequate for desk-scale orders.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2usize;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
