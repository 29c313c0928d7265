//! Truncated multivariate Taylor polynomials.
//!
//! A [`Jet`] of order `K` in `m` variables stores the coefficients of
//! `Σ_{|α| ≤ K} c_α s^α` around a base point. Arithmetic truncates at `K`,
//! so evaluating a formula on jets seeded with [`Jet::variable`] yields all
//! partial derivatives up to order `K`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

struct JetSpace {
    vars: usize,
    order: usize,
    monomials: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    /// `(i, j, k)`: monomial i times monomial j is monomial k.
    products: Vec<(u32, u32, u32)>,
}

impl JetSpace {
    fn build(vars: usize, order: usize) -> Self {
        // graded order, lexicographic inside a degree: the list for order K
        // is a prefix of the list for order K + 1
        let mut monomials = Vec::new();
        for degree in 0..=order {
            let mut current = vec![0u8; vars];
            push_degree(&mut monomials, &mut current, 0, degree);
        }
        let index: HashMap<Vec<u8>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = index.get(&sum) {
                    products.push((i as u32, j as u32, k as u32));
                }
            }
        }
        JetSpace {
            vars,
            order,
            monomials,
            index,
            products,
        }
    }

    fn len(&self) -> usize {
        self.monomials.len()
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, current: &mut [u8], var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.to_vec());
        current[var] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        current[var] = k as u8;
        push_degree(out, current, var + 1, remaining - k);
    }
    current[var] = 0;
}

type SpaceCache = Mutex<HashMap<(usize, usize), Arc<JetSpace>>>;

fn space(vars: usize, order: usize) -> Arc<JetSpace> {
    static CACHE: OnceLock<SpaceCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("jet space cache poisoned");
    guard
        .entry((vars, order))
        .or_insert_with(|| Arc::new(JetSpace::build(vars, order)))
        .clone()
}

#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("vars", &self.space.vars)
            .field("order", &self.space.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Jet {
    pub fn constant(vars: usize, order: usize, value: f64) -> Self {
        assert!(vars > 0, "a jet needs at least one variable");
        let space = space(vars, order);
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = value;
        Jet { space, coeffs }
    }

    /// The coordinate function `s_var` expanded around `value`.
    pub fn variable(vars: usize, order: usize, var: usize, value: f64) -> Self {
        let mut j = Jet::constant(vars, order, value);
        if order > 0 {
            let mut m = vec![0u8; vars];
            m[var] = 1;
            let k = j.space.index[&m];
            j.coeffs[k] = 1.0;
        }
        j
    }

    /// Builds a jet from partial derivatives `f(∂^α)` for every multi-index.
    pub fn from_derivatives(vars: usize, order: usize, mut f: impl FnMut(&[u8]) -> f64) -> Self {
        let space = space(vars, order);
        let coeffs = space
            .monomials
            .iter()
            .map(|m| {
                let denom: f64 = m.iter().map(|&k| factorial(k as usize)).product();
                f(m) / denom
            })
            .collect();
        Jet { space, coeffs }
    }

    pub fn vars(&self) -> usize {
        self.space.vars
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// The partial derivative `∂^α f` at the base point.
    pub fn derivative(&self, multi: &[u8]) -> f64 {
        match self.space.index.get(multi) {
            Some(&k) => {
                let fact: f64 = multi.iter().map(|&k| factorial(k as usize)).product();
                self.coeffs[k] * fact
            }
            None => panic!("multi-index {multi:?} exceeds jet order {}", self.order()),
        }
    }

    /// First partial `∂_a f`.
    pub fn d1(&self, a: usize) -> f64 {
        let mut m = vec![0u8; self.vars()];
        m[a] += 1;
        self.derivative(&m)
    }

    /// Second partial `∂_a ∂_b f`.
    pub fn d2(&self, a: usize, b: usize) -> f64 {
        let mut m = vec![0u8; self.vars()];
        m[a] += 1;
        m[b] += 1;
        self.derivative(&m)
    }

    /// Jet of `∂_var f`, one order lower.
    pub fn partial(&self, var: usize) -> Jet {
        assert!(self.order() > 0, "cannot differentiate an order-0 jet");
        let lower = space(self.vars(), self.order() - 1);
        let mut coeffs = vec![0.0; lower.len()];
        let mut raised = vec![0u8; self.vars()];
        for (i, m) in lower.monomials.iter().enumerate() {
            raised.copy_from_slice(m);
            raised[var] += 1;
            let k = self.space.index[&raised];
            coeffs[i] = self.coeffs[k] * raised[var] as f64;
        }
        Jet {
            space: lower,
            coeffs,
        }
    }

    /// Drops terms above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let space = space(self.vars(), order);
        let coeffs = self.coeffs[..space.len()].to_vec();
        Jet { space, coeffs }
    }

    fn lift_constant(&self, c: f64) -> Jet {
        Jet::constant(self.vars(), self.order(), c)
    }

    fn align(a: &Jet, b: &Jet) -> (Jet, Jet) {
        assert_eq!(a.vars(), b.vars(), "jets in different variables");
        let k = a.order().min(b.order());
        (a.truncate(k), b.truncate(k))
    }

    fn mul_jet(&self, other: &Jet) -> Jet {
        let (a, b) = Jet::align(self, other);
        let mut coeffs = vec![0.0; a.coeffs.len()];
        for &(i, j, k) in &a.space.products {
            coeffs[k as usize] += a.coeffs[i as usize] * b.coeffs[j as usize];
        }
        Jet {
            space: a.space,
            coeffs,
        }
    }

    /// `Σ_k c_k δᵏ` where `δ = self − value`, with `c_k` the Taylor
    /// coefficients of an outer function at the base value.
    fn compose(&self, taylor: &[f64]) -> Jet {
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let mut out = self.lift_constant(taylor[0]);
        let mut power = self.lift_constant(1.0);
        for c in taylor.iter().skip(1).take(self.order()) {
            power = power.mul_jet(&delta);
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += c * p;
            }
        }
        out
    }

    /// Applies a scalar function given its derivatives `f, f′, f″, …` at
    /// the base value.
    pub fn apply(&self, derivs: impl Fn(usize) -> f64) -> Jet {
        let taylor: Vec<f64> = (0..=self.order())
            .map(|k| derivs(k) / factorial(k))
            .collect();
        self.compose(&taylor)
    }

    pub fn recip(&self) -> Jet {
        let a = self.value();
        // d^k/da^k a⁻¹ = (−1)^k k! a^{−k−1}
        self.apply(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(k) * a.powi(-(k as i32) - 1)
        })
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.apply(|k| [s, c, -s, -c][k % 4])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.apply(|k| [c, -s, -c, s][k % 4])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.apply(|_| e)
    }

    pub fn ln(&self) -> Jet {
        let a = self.value();
        self.apply(|k| {
            if k == 0 {
                a.ln()
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * factorial(k - 1) * a.powi(-(k as i32))
            }
        })
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.apply(|k| if k % 2 == 0 { s } else { c })
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.apply(|k| if k % 2 == 0 { c } else { s })
    }

    /// `x^p` for real `p`; the base value must be positive unless `p` is
    /// a nonnegative integer.
    pub fn powf(&self, p: f64) -> Jet {
        let a = self.value();
        self.apply(|k| {
            let mut coef = 1.0;
            for i in 0..k {
                coef *= p - i as f64;
            }
            coef * a.powf(p - k as f64)
        })
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn powi(&self, p: u32) -> Jet {
        let mut out = self.lift_constant(1.0);
        for _ in 0..p {
            out = out.mul_jet(self);
        }
        out
    }

    /// `asinh x = ln(x + √(1 + x²))`.
    pub fn asinh(&self) -> Jet {
        let inner = (self * self + 1.0).sqrt();
        let head = self.value().asinh();
        let mut out = (self + &inner).ln();
        out.coeffs[0] = head;
        out
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
        impl $trait<f64> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: f64) -> Jet {
                self.$method(&self.lift_constant(rhs))
            }
        }
        impl $trait<f64> for Jet {
            type Output = Jet;
            fn $method(self, rhs: f64) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<&Jet> for f64 {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                rhs.lift_constant(self).$method(rhs)
            }
        }
        impl $trait<Jet> for f64 {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let (mut a, b) = Jet::align(a, b);
    for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
        *x += y;
    }
    a
});

binop!(Sub, sub, |a, b| {
    let (mut a, b) = Jet::align(a, b);
    for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
        *x -= y;
    }
    a
});

binop!(Mul, mul, |a, b| a.mul_jet(b));

binop!(Div, div, |a, b| a.mul_jet(&b.recip()));

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

/// Euclidean-style dot product `Σ g_i a_i b_i` for a diagonal signature.
pub fn dot(sig: &[f64], a: &[Jet], b: &[Jet]) -> Jet {
    let mut acc = &a[0] * &b[0] * sig[0];
    for i in 1..a.len() {
        acc = acc + &a[i] * &b[i] * sig[i];
    }
    acc
}

/// Determinant by cofactor expansion; meant for the small matrices of
/// surface geometry.
pub fn det(m: &[Vec<Jet>]) -> Jet {
    let k = m.len();
    match k {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc: Option<Jet> = None;
            for j in 0..k {
                let minor: Vec<Vec<Jet>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &det(&minor);
                acc = Some(match acc {
                    None => term,
                    Some(a) if j % 2 == 0 => a + term,
                    Some(a) => a - term,
                });
            }
            acc.expect("non-empty matrix")
        }
    }
}

/// Generalized cross product of `k − 1` vectors in `k` dimensions:
/// component `c` is `det[v_1; …; v_{k−1}; e_c]`.
pub fn cross(rows: &[Vec<Jet>]) -> Vec<Jet> {
    let k = rows[0].len();
    assert_eq!(rows.len() + 1, k, "need k − 1 vectors in k dimensions");
    (0..k)
        .map(|c| {
            let minor: Vec<Vec<Jet>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = det(&minor);
            if (k - 1 + c).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_lists_are_nested() {
        let a = space(3, 2);
        let b = space(3, 3);
        assert_eq!(&b.monomials[..a.len()], &a.monomials[..]);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn polynomial_derivatives() {
        // f = x² y + 3 y³ at (2, −1)
        let x = Jet::variable(2, 3, 0, 2.0);
        let y = Jet::variable(2, 3, 1, -1.0);
        let f = &x * &x * &y + 3.0 * y.powi(3);
        assert_eq!(f.value(), -4.0 - 3.0);
        assert_eq!(f.d1(0), 2.0 * 2.0 * -1.0);
        assert_eq!(f.d1(1), 4.0 + 9.0);
        assert_eq!(f.d2(0, 1), 4.0);
        assert_eq!(f.d2(1, 1), -18.0);
        assert_eq!(f.derivative(&[2, 1]), 2.0);
        assert_eq!(f.derivative(&[0, 3]), 18.0);
    }

    #[test]
    fn elementary_functions() {
        let u = 0.37;
        let x = Jet::variable(1, 4, 0, u);
        let s = x.sin();
        assert!((s.derivative(&[3]) + u.cos()).abs() < 1e-14);
        let e = (2.0 * &x).exp();
        assert!((e.derivative(&[4]) - 16.0 * (2.0 * u).exp()).abs() < 1e-12);
        let r = x.recip();
        assert!((r.derivative(&[2]) - 2.0 / u.powi(3)).abs() < 1e-10);
        let q = x.sqrt();
        assert!((q.d2(0, 0) + 0.25 * u.powf(-1.5)).abs() < 1e-12);
        let l = x.ln();
        assert!((l.derivative(&[3]) - 2.0 / u.powi(3)).abs() < 1e-10);
        let a = x.asinh();
        assert!((a.value() - u.asinh()).abs() < 1e-15);
        assert!((a.d1(0) - 1.0 / (1.0 + u * u).sqrt()).abs() < 1e-14);
        let h = x.cosh() * x.cosh() - x.sinh() * x.sinh();
        assert!((h.value() - 1.0).abs() < 1e-14 && h.derivative(&[3]).abs() < 1e-12);
    }

    #[test]
    fn quotient_rule() {
        let x = Jet::variable(2, 2, 0, 1.5);
        let y = Jet::variable(2, 2, 1, 0.5);
        let f = &x / &y;
        assert!((f.d1(1) + 1.5 / 0.25).abs() < 1e-13);
        assert!((f.d2(0, 1) + 1.0 / 0.25).abs() < 1e-13);
    }

    #[test]
    fn partial_lowers_order() {
        let x = Jet::variable(2, 3, 0, 1.0);
        let y = Jet::variable(2, 3, 1, 2.0);
        let f = x.powi(2) * y.sin();
        let fx = f.partial(0);
        assert_eq!(fx.order(), 2);
        assert!((fx.d2(0, 1) - f.derivative(&[2, 1])).abs() < 1e-14);
        assert!((fx.d1(1) - f.d2(0, 1)).abs() < 1e-14);
    }

    #[test]
    fn mixed_orders_truncate() {
        let a = Jet::variable(1, 3, 0, 1.0);
        let b = Jet::variable(1, 1, 0, 1.0);
        let c = &a * &b;
        assert_eq!(c.order(), 1);
        assert_eq!(c.d1(0), 2.0);
    }

    #[test]
    fn cross_product_matches_three_dimensions() {
        let c = |v: f64| Jet::constant(1, 0, v);
        let a = vec![c(1.0), c(2.0), c(3.0)];
        let b = vec![c(-1.0), c(0.5), c(4.0)];
        let n: Vec<f64> = cross(&[a, b]).iter().map(Jet::value).collect();
        assert_eq!(n, vec![2.0 * 4.0 - 3.0 * 0.5, 3.0 * -1.0 - 4.0, 0.5 + 2.0]);
    }

    #[test]
    fn cross_product_is_orthogonal_in_four_dimensions() {
        let c = |v: f64| Jet::constant(1, 0, v);
        let rows = vec![
            vec![c(1.0), c(0.0), c(2.0), c(-1.0)],
            vec![c(0.5), c(1.0), c(0.0), c(3.0)],
            vec![c(0.0), c(-2.0), c(1.0), c(1.0)],
        ];
        let n = cross(&rows);
        for r in &rows {
            let d: f64 = r.iter().zip(&n).map(|(a, b)| a.value() * b.value()).sum();
            assert!(d.abs() < 1e-12);
        }
    }
}
