//! Cyclic modules over `A_1` and their Tor and Ext against straight modules.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Matrix, Q};
use crate::multigraded::{Dim, GradedDimVector, StandardKind, StraightModule};
use crate::weyl::{parse_element, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// `(A_1 / A_1 u)(t)` (left) or `(A_1 / u A_1)(t)` (right); the generator
/// sits in degree `-t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPresentation {
    relation: WeylElement,
    twist: i64,
    side: Side,
}

impl CyclicPresentation {
    pub fn new(relation: WeylElement, twist: i64, side: Side) -> Result<Self> {
        if relation.n() != 1 {
            return Err(Error::Unsupported("cyclic presentations are implemented over A_1 only".into()));
        }
        if relation.is_zero() {
            return Err(Error::InvalidArgument("relation must be nonzero".into()));
        }
        if !relation.is_homogeneous() {
            return Err(Error::Unsupported(format!("relation {relation} is not homogeneous")));
        }
        Ok(CyclicPresentation { relation, twist, side })
    }

    pub fn left(relation: &str, twist: i64) -> Result<Self> {
        Self::new(parse_element(1, relation)?, twist, Side::Left)
    }

    pub fn relation(&self) -> &WeylElement {
        &self.relation
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn generator_degree(&self) -> i64 {
        -self.twist
    }

    fn relation_degree(&self) -> i64 {
        self.relation.degree().expect("homogeneous relation")
    }
}

impl fmt::Display for CyclicPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "(A/A({}))({})", self.relation, self.twist),
            Side::Right => write!(f, "(A/({})A)({})", self.relation, self.twist),
        }
    }
}

/// The three `n = 1` catalog modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum A1Module {
    /// The polynomial ring `R = A/A d`.
    R,
    /// The Laurent module `R_x`, generated by `x^-1`.
    Rx,
    /// `E(1) = H^1_(x)(R)`, generated by the class of `x^-1`.
    E,
}

impl A1Module {
    pub const ALL: [A1Module; 3] = [A1Module::R, A1Module::Rx, A1Module::E];

    pub fn name(&self) -> &'static str {
        match self {
            A1Module::R => "R",
            A1Module::Rx => "Rx",
            A1Module::E => "E",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "R" | "lR" => Ok(A1Module::R),
            "Rx" | "Rx1" | "loc:1" => Ok(A1Module::Rx),
            "E" | "E1" => Ok(A1Module::E),
            other => Err(Error::Parse(format!("unknown A_1 module {other:?} (R, Rx, E)"))),
        }
    }

    pub fn presentation(&self) -> CyclicPresentation {
        let (rel, twist) = match self {
            A1Module::R => ("d1", 0),
            A1Module::Rx => ("d1*x1", 1),
            A1Module::E => ("x1", 1),
        };
        CyclicPresentation::left(rel, twist).expect("catalog presentation")
    }

    pub fn straight(&self) -> StraightModule {
        let kind = match self {
            A1Module::R => StandardKind::R,
            A1Module::Rx => StandardKind::Localization(vec![1]),
            A1Module::E => StandardKind::E,
        };
        StraightModule::make_standard(&kind, 1).expect("catalog module")
    }
}

/// The right module `M^#` with relation `tau(u)` and the same twist.
pub fn sharp(p: &CyclicPresentation) -> Result<CyclicPresentation> {
    if p.side != Side::Left {
        return Err(Error::InvalidArgument("sharp takes a left presentation".into()));
    }
    CyclicPresentation::new(p.relation.tau(), p.twist, Side::Right)
}

/// `Ext^1(M, A_1)` of a cyclic module, presented on the opposite side by the
/// same relation with twist `deg u - t`.
pub fn dual_presentation(p: &CyclicPresentation) -> Result<CyclicPresentation> {
    let side = match p.side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    };
    CyclicPresentation::new(p.relation.clone(), p.relation_degree() - p.twist, side)
}

/// The relation as a map `N_b -> N_{b + deg u}` on raw degrees.
pub fn relation_matrix(u: &WeylElement, n_mod: &StraightModule, b: i64) -> Matrix {
    let delta = u.degree().expect("homogeneous relation");
    let rows = n_mod.piece_dim(&[b + delta]);
    let mut acc = Matrix::zeros(rows, n_mod.piece_dim(&[b]));
    for (mono, coeff) in u.terms() {
        let mut raw = b;
        let mut m = Matrix::identity(n_mod.piece_dim(&[b]));
        for _ in 0..mono.d[0] {
            m = n_mod.d_action(0, &[raw]).mul(&m);
            raw -= 1;
        }
        for _ in 0..mono.x[0] {
            m = n_mod.x_action(0, &[raw]).mul(&m);
            raw += 1;
        }
        acc = acc.add(&m.scale(coeff));
    }
    acc
}

/// Coefficients (constant first) of `p(b) = sum c * b(b-1)...(b-beta+1)`,
/// the scalar by which `u` acts far from the crossing.
fn generic_polynomial(u: &WeylElement) -> Vec<Q> {
    let mut total: Vec<Q> = vec![Q::zero()];
    for (mono, coeff) in u.terms() {
        let mut poly = vec![coeff.clone()];
        for k in 0..mono.d[0] as i64 {
            // multiply by (b - k)
            let mut next = vec![Q::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * q(k);
            }
            poly = next;
        }
        if poly.len() > total.len() {
            total.resize(poly.len(), Q::zero());
        }
        for (t, c) in total.iter_mut().zip(poly) {
            *t += c;
        }
    }
    while total.len() > 1 && total.last().is_some_and(Zero::is_zero) {
        total.pop();
    }
    total
}

/// Raw degrees outside `[-w, w]` carry no kernel or cokernel of `u`.
fn scan_radius(u: &WeylElement) -> Result<i64> {
    let poly = generic_polynomial(u);
    let lead = poly.last().expect("nonempty").clone();
    if lead.is_zero() {
        return Err(Error::Unsupported(format!("{u} acts by zero far from the origin; Tor is infinite-dimensional")));
    }
    // Cauchy bound on the roots
    let cauchy = poly[..poly.len() - 1].iter().map(|c| (c / &lead).abs()).fold(Q::zero(), |a, b| if b > a { b } else { a });
    let cauchy = cauchy.ceil().to_integer();
    let cauchy: i64 = i64::try_from(cauchy).map_err(|_| Error::Unsupported("relation coefficients too large".into()))? + 1;
    let span = u.terms().map(|(m, _)| (m.x[0] + m.d[0]) as i64).max().unwrap_or(0);
    Ok(cauchy.max(span + 2) + 1)
}

/// `Tor_nu(A/uA (t), N)` for a right presentation and `N` over one
/// variable: `Tor_1 = ker u`, `Tor_0 = coker u`, both with the twist applied.
pub fn tor_a1(p: &CyclicPresentation, n_mod: &StraightModule) -> Result<BTreeMap<usize, GradedDimVector>> {
    if p.side != Side::Right {
        return Err(Error::InvalidArgument("tor_A1 takes a right presentation".into()));
    }
    if n_mod.n() != 1 {
        return Err(Error::DimensionMismatch(format!("tor_A1 needs a module over one variable, got n = {}", n_mod.n())));
    }
    let u = &p.relation;
    let delta = p.relation_degree();
    let c = n_mod.offset_sum();
    let radius = scan_radius(u)?;
    let (mut tor1, mut tor0) = (GradedDimVector::new(), GradedDimVector::new());
    for b in -radius - delta.abs()..=radius + delta.abs() {
        let m = relation_matrix(u, n_mod, b);
        let rank = m.rank();
        let kernel = m.cols() - rank;
        tor1.add_at(b - c + delta - p.twist, Dim::Finite(kernel as u64));
        let target = b + delta;
        tor0.add_at(target - c - p.twist, Dim::Finite((m.rows() - rank) as u64));
    }
    Ok([(0, tor0), (1, tor1)].into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

/// `Ext^nu(M, N) = Tor_{1 - nu}(M^dagger, N)` for a left cyclic `M`.
pub fn ext_a1(p: &CyclicPresentation, n_mod: &StraightModule) -> Result<BTreeMap<usize, GradedDimVector>> {
    if p.side != Side::Left {
        return Err(Error::InvalidArgument("ext_A1 takes a left presentation".into()));
    }
    let tor = tor_a1(&dual_presentation(p)?, n_mod)?;
    Ok(tor.into_iter().map(|(nu, v)| (1 - nu, v)).collect())
}
