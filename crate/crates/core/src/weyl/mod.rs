//! Normal-form arithmetic in the Weyl algebra `A_n(Q)`.
//!
//! Elements are finite sums `sum c * x^a * d^b` with every `x` factor to the
//! left of every `d` factor. The algebra is Z-graded by `deg x_i = 1`,
//! `deg d_i = -1`.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::config::{check_vars, VAR_CAPACITY};
use crate::error::{Error, Result};
use crate::linalg::{format_q, q, Matrix, Q};

pub type Exponents = [u16; VAR_CAPACITY];

/// `x^alpha d^beta`, ordered lexicographically on `(alpha, beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylMonomial {
    pub x: Exponents,
    pub d: Exponents,
}

impl WeylMonomial {
    pub const ONE: WeylMonomial = WeylMonomial { x: [0; VAR_CAPACITY], d: [0; VAR_CAPACITY] };

    pub fn degree(&self) -> i64 {
        self.x.iter().map(|&a| a as i64).sum::<i64>() - self.d.iter().map(|&b| b as i64).sum::<i64>()
    }

    /// Per-variable degree `alpha - beta`.
    pub fn multidegree(&self, n: usize) -> Vec<i64> {
        (0..n).map(|i| self.x[i] as i64 - self.d[i] as i64).collect()
    }

    pub fn d_order(&self) -> u32 {
        self.d.iter().map(|&b| b as u32).sum()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<WeylMonomial, Q>,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement(n={}, {})", self.n, self)
    }
}

fn binomial(n: u32, k: u32) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q((n - i) as i64) / q((i + 1) as i64);
    }
    acc
}

fn factorial(k: u32) -> Q {
    (1..=k as i64).fold(Q::one(), |acc, i| acc * q(i))
}

impl WeylElement {
    pub fn zero(n: usize) -> Result<Self> {
        check_vars(n)?;
        Ok(WeylElement { n, terms: BTreeMap::new() })
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::constant(n, Q::one())
    }

    pub fn constant(n: usize, c: Q) -> Result<Self> {
        Self::monomial(n, WeylMonomial::ONE, c)
    }

    pub fn monomial(n: usize, m: WeylMonomial, c: Q) -> Result<Self> {
        let mut e = Self::zero(n)?;
        if m.x[n..].iter().chain(&m.d[n..]).any(|&v| v != 0) {
            return Err(Error::DimensionMismatch(format!("monomial uses a variable beyond n = {n}")));
        }
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        Ok(e)
    }

    /// `x_i` with `i` counted from 1.
    pub fn x(n: usize, i: usize) -> Result<Self> {
        Self::generator(n, i, true)
    }

    /// `d_i` with `i` counted from 1.
    pub fn d(n: usize, i: usize) -> Result<Self> {
        Self::generator(n, i, false)
    }

    fn generator(n: usize, i: usize, is_x: bool) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("variable index {i} out of range 1..={n}")));
        }
        let mut m = WeylMonomial::ONE;
        if is_x {
            m.x[i - 1] = 1;
        } else {
            m.d[i - 1] = 1;
        }
        Self::monomial(n, m, Q::one())
    }

    /// The Euler operator `sum x_i d_i`.
    pub fn euler(n: usize) -> Result<Self> {
        let mut e = Self::zero(n)?;
        for i in 0..n {
            let mut m = WeylMonomial::ONE;
            m.x[i] = 1;
            m.d[i] = 1;
            e.terms.insert(m, Q::one());
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &WeylMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The common degree of all terms, or `None` if the element is not
    /// homogeneous. The zero element has no degree.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(WeylMonomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// The common multidegree `alpha - beta` of all terms, if there is one.
    pub fn multidegree(&self) -> Option<Vec<i64>> {
        let mut degs = self.terms.keys().map(|m| m.multidegree(self.n));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "Weyl elements over A_{} and A_{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    fn add_term(&mut self, m: WeylMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return WeylElement { n: self.n, terms: BTreeMap::new() };
        }
        WeylElement { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    /// Normal-form product, using `d_i^b x_i^g = sum_k C(b,k) C(g,k) k! x_i^(g-k) d_i^(b-k)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut out = WeylElement { n: self.n, terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coeff = ca * cb;
                for (m, c) in monomial_product(self.n, ma, mb) {
                    out.add_term(m, &coeff * c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.n)?;
        for _ in 0..k {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// The anti-involution `tau(h d^a) = (-1)^|a| d^a h`, in normal form.
    pub fn tau(&self) -> Self {
        let mut out = WeylElement { n: self.n, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let mut dpart = WeylMonomial::ONE;
            dpart.d = m.d;
            let mut xpart = WeylMonomial::ONE;
            xpart.x = m.x;
            let sign = if m.d_order() % 2 == 0 { c.clone() } else { -c.clone() };
            for (p, pc) in monomial_product(self.n, &dpart, &xpart) {
                out.add_term(p, &sign * pc);
            }
        }
        out
    }

    /// Terms with no `d` factor.
    pub fn polynomial_part(&self) -> Self {
        WeylElement {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.d_order() == 0).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// The unique `d`-free representative of `self + sum_i d_i A_n`.
    ///
    /// `tau` maps the right ideal `dA` onto the left ideal `Ad`, which in
    /// normal form is exactly the span of terms with a `d` factor. Dropping
    /// those terms and applying `tau` again (a no-op on polynomials) gives the
    /// representative.
    pub fn normal_form_mod_da(&self) -> Self {
        self.tau().polynomial_part().tau()
    }
}

fn monomial_product(n: usize, a: &WeylMonomial, b: &WeylMonomial) -> Vec<(WeylMonomial, Q)> {
    // per-variable expansions of d_i^{a.d_i} x_i^{b.x_i}
    let mut partial: Vec<(WeylMonomial, Q)> = vec![(WeylMonomial::ONE, Q::one())];
    for i in 0..n {
        let (bd, gx) = (a.d[i] as u32, b.x[i] as u32);
        let mut next = Vec::with_capacity(partial.len() * (bd.min(gx) as usize + 1));
        for (m, c) in &partial {
            for k in 0..=bd.min(gx) {
                let coeff = binomial(bd, k) * binomial(gx, k) * factorial(k);
                let mut mm = *m;
                mm.x[i] = a.x[i] + (gx - k) as u16;
                mm.d[i] = (bd - k) as u16 + b.d[i];
                next.push((mm, c * coeff));
            }
        }
        partial = next;
    }
    partial
}

/// `E_n = sum x_i d_i`, homogeneous of degree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerOperator(WeylElement);

impl EulerOperator {
    pub fn new(n: usize) -> Result<Self> {
        Ok(EulerOperator(WeylElement::euler(n)?))
    }

    pub fn element(&self) -> &WeylElement {
        &self.0
    }
}

/// Expands the Euler operator in the coordinates `Y = B X` and reports
/// whether it agrees with the Euler operator in `X`.
///
/// With `d_X = B^tr d_Y` one has `d_{Y_i} = sum_k (B^-1)_{ki} d_k`; the
/// product `sum_i Y_i d_{Y_i}` is formed with Weyl multiplication.
pub fn euler_change_check(b: &Matrix) -> Result<bool> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch("change of variables must be square".into()));
    }
    let n = b.rows();
    let inv = b.inverse()?;
    let xs: Vec<WeylElement> = (1..=n).map(|i| WeylElement::x(n, i)).collect::<Result<_>>()?;
    let ds: Vec<WeylElement> = (1..=n).map(|i| WeylElement::d(n, i)).collect::<Result<_>>()?;
    let mut euler_y = WeylElement::zero(n)?;
    for i in 0..n {
        let mut y = WeylElement::zero(n)?;
        let mut dy = WeylElement::zero(n)?;
        for j in 0..n {
            y = y.add(&xs[j].scale(b.get(i, j)))?;
            dy = dy.add(&ds[j].scale(inv.get(j, i)))?;
        }
        euler_y = euler_y.add(&y.multiply(&dy)?)?;
    }
    Ok(euler_y == WeylElement::euler(n)?)
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.x[..self.n].iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            for (i, &e) in m.d[..self.n].iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("d{}", i + 1)),
                    _ => factors.push(format!("d{}^{}", i + 1, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", format_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_q(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

pub use parse::parse_element;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_frac;

    fn p(n: usize, s: &str) -> WeylElement {
        parse_element(n, s).unwrap()
    }

    #[test]
    fn defining_relation() {
        let d = WeylElement::d(1, 1).unwrap();
        let x = WeylElement::x(1, 1).unwrap();
        assert_eq!(d.multiply(&x).unwrap(), p(1, "x1*d1 + 1"));
        assert_eq!(x.multiply(&d).unwrap(), p(1, "x1*d1"));
    }

    #[test]
    fn second_derivative_past_x() {
        // d^2 x = d (x d + 1) = (x d + 1) d + d
        let d2 = WeylElement::d(1, 1).unwrap().pow(2).unwrap();
        let x = WeylElement::x(1, 1).unwrap();
        assert_eq!(d2.multiply(&x).unwrap(), p(1, "x1*d1^2 + 2*d1"));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(p(1, "d1").tau(), p(1, "-d1"));
        assert_eq!(p(1, "x1*d1").tau(), p(1, "-x1*d1 - 1"));
        let a = p(2, "x1^2*d2");
        assert_eq!(a.tau().tau(), a);
    }

    #[test]
    fn mismatched_n_is_an_error() {
        let a = WeylElement::x(1, 1).unwrap();
        let b = WeylElement::x(2, 1).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn too_many_variables_rejected() {
        assert!(matches!(WeylElement::zero(VAR_CAPACITY + 1), Err(Error::TooManyVariables { .. })));
    }

    #[test]
    fn reduction_modulo_right_d_ideal() {
        assert_eq!(p(1, "x1^2").normal_form_mod_da(), p(1, "x1^2"));
        // d1 x1 lies in d1 A
        assert_eq!(p(1, "x1*d1 + 1").normal_form_mod_da(), p(1, "0"));
        assert_eq!(p(1, "x1*d1^2").normal_form_mod_da(), p(1, "0"));
        // x1 d1 = d1 x1 - 1
        assert_eq!(p(1, "x1*d1").normal_form_mod_da(), p(1, "-1"));
    }

    #[test]
    fn euler_change_examples() {
        assert!(euler_change_check(&Matrix::identity(2)).unwrap());
        assert!(euler_change_check(&Matrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(euler_change_check(&Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])).unwrap());
        assert_eq!(euler_change_check(&Matrix::from_i64(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn display_roundtrip() {
        let e = p(2, "3*x1^2*d1 - 1/2*d2^3");
        assert_eq!(e.coefficient(&{
            let mut m = WeylMonomial::ONE;
            m.d[1] = 3;
            m
        }), q_frac(-1, 2));
        assert_eq!(p(2, &e.to_string()), e);
    }
}
