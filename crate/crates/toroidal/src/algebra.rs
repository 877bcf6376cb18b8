//! The graded algebra itself: basis symbols, the quotient normal form for
//! the differential classes, and the bracket with its two-cocycle.
//!
//! Basis symbols come in three kinds over the lattice Z^{n+1}:
//! coefficient-algebra loops `x (x) t^k`, differential classes `t^k K_i`
//! (modulo exact differentials), and derivations `t^k d_i`. An element is a
//! finitely supported rational combination kept in a canonical form: no zero
//! coefficients, and every K symbol reduced against the relation
//! `sum_i k_i t^k K_i = 0` by eliminating the largest index with a nonzero
//! lattice entry.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::lattice::MultiIndex;
use crate::linalg::QMatrix;
use crate::scalar::Scalar;
use crate::simple::{GFamily, SimpleAlgebraSpec};

/// One basis symbol of the graded algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasisSymbol {
    /// Coefficient-algebra basis element `x` looped by `t^k`.
    G { x: usize, k: MultiIndex },
    /// Class of `t^k K_i` in the quotient by exact differentials.
    K { i: usize, k: MultiIndex },
    /// Derivation `t^k d_i`.
    D { i: usize, k: MultiIndex },
}

impl BasisSymbol {
    pub fn degree(&self) -> &MultiIndex {
        match self {
            BasisSymbol::G { k, .. } | BasisSymbol::K { k, .. } | BasisSymbol::D { k, .. } => k,
        }
    }

    pub fn rank(&self) -> usize {
        self.degree().rank()
    }

    /// True for K symbols that survive the quotient in canonical form.
    pub fn is_canonical(&self) -> bool {
        match self {
            BasisSymbol::K { i, k } => match k.last_nonzero() {
                None => true,
                Some(jstar) => *i != jstar,
            },
            _ => true,
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::G { x, k } => write!(f, "g[{x}]t^{k}"),
            BasisSymbol::K { i, k } => write!(f, "t^{k}K{i}"),
            BasisSymbol::D { i, k } => write!(f, "t^{k}d{i}"),
        }
    }
}

/// Coefficients of the two-cocycle `phi = mu1 phi1 + mu2 phi2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CocycleConfig {
    pub mu1: Scalar,
    pub mu2: Scalar,
}

impl CocycleConfig {
    pub fn zero() -> Self {
        CocycleConfig {
            mu1: Scalar::zero(),
            mu2: Scalar::zero(),
        }
    }

    pub fn new(mu1: Scalar, mu2: Scalar) -> Self {
        CocycleConfig { mu1, mu2 }
    }

    pub fn is_zero(&self) -> bool {
        self.mu1.is_zero() && self.mu2.is_zero()
    }
}

/// Full configuration of the algebra: lattice rank `n + 1`, the coefficient
/// algebra, and the cocycle.
#[derive(Clone)]
pub struct AlgebraConfig {
    n: usize,
    g: SimpleAlgebraSpec,
    cocycle: CocycleConfig,
}

impl AlgebraConfig {
    pub fn new(n: usize, family: GFamily, cocycle: CocycleConfig) -> Self {
        assert!(n >= 1, "the lattice must have rank at least 2");
        AlgebraConfig {
            n,
            g: SimpleAlgebraSpec::new(family),
            cocycle,
        }
    }

    /// Lattice rank, i.e. `n + 1`.
    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> &SimpleAlgebraSpec {
        &self.g
    }

    pub fn cocycle(&self) -> &CocycleConfig {
        &self.cocycle
    }

    pub fn with_cocycle(&self, cocycle: CocycleConfig) -> AlgebraConfig {
        AlgebraConfig {
            n: self.n,
            g: self.g.clone(),
            cocycle,
        }
    }
}

/// A finitely supported rational combination of basis symbols, kept
/// canonical (no zeros, all K symbols reduced).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement {
    rank: usize,
    terms: BTreeMap<BasisSymbol, Scalar>,
}

impl AlgebraElement {
    pub fn zero(rank: usize) -> Self {
        AlgebraElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_symbol(sym: BasisSymbol) -> Self {
        let mut e = AlgebraElement::zero(sym.rank());
        e.add_term(sym, Scalar::one());
        e
    }

    pub fn g_loop(x: usize, k: MultiIndex) -> Self {
        Self::from_symbol(BasisSymbol::G { x, k })
    }

    pub fn k_class(i: usize, k: MultiIndex) -> Self {
        Self::from_symbol(BasisSymbol::K { i, k })
    }

    pub fn derivation(i: usize, k: MultiIndex) -> Self {
        Self::from_symbol(BasisSymbol::D { i, k })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, sym: &BasisSymbol) -> Scalar {
        self.terms.get(sym).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `c * sym`, reducing K symbols to canonical form on the fly.
    pub fn add_term(&mut self, sym: BasisSymbol, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(sym.rank(), self.rank);
        if let BasisSymbol::K { i, k } = &sym {
            if let Some(jstar) = k.last_nonzero() {
                if *i == jstar {
                    // K(j*, k) = -(1/k_{j*}) sum_{j != j*} k_j K(j, k)
                    let kj = Scalar::from_int(k[jstar]);
                    for j in 0..k.rank() {
                        if j == jstar || k[j] == 0 {
                            continue;
                        }
                        let coeff = -(Scalar::from_int(k[j]) / kj.clone()) * &c;
                        self.add_term(
                            BasisSymbol::K {
                                i: j,
                                k: k.clone(),
                            },
                            coeff,
                        );
                    }
                    return;
                }
            }
        }
        let entry = self.terms.entry(sym.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&sym);
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (sym, c) in &other.terms {
            out.add_term(sym.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero(self.rank);
        }
        AlgebraElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (s.clone(), v * c))
                .collect(),
        }
    }

    /// The common degree of all terms, if the element is homogeneous.
    /// Zero is homogeneous of every degree; `None` marks mixed degrees.
    pub fn degree(&self) -> Option<MultiIndex> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree().clone();
        for sym in it {
            if *sym.degree() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }
}

/// Builds the canonical representative of a combination of raw K terms,
/// reducing against the exact-differential relation at each lattice degree.
pub fn normal_form(rank: usize, raw: &[(usize, MultiIndex, Scalar)]) -> AlgebraElement {
    let mut out = AlgebraElement::zero(rank);
    for (i, k, c) in raw {
        debug_assert_eq!(k.rank(), rank);
        out.add_term(
            BasisSymbol::K {
                i: *i,
                k: k.clone(),
            },
            c.clone(),
        );
    }
    out
}

/// Which part of the cocycle to evaluate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CocyclePart {
    Phi1,
    Phi2,
}

/// Raw (unreduced) K terms of a single cocycle evaluated on
/// `(t^r d_i, t^s d_j)`.
pub fn cocycle_raw_terms(
    part: CocyclePart,
    i: usize,
    r: &MultiIndex,
    j: usize,
    s: &MultiIndex,
) -> Vec<(usize, MultiIndex, Scalar)> {
    let degree = r + s;
    let front = match part {
        // phi1(t^r d_i, t^s d_j) = -s_i r_j sum_p r_p t^{r+s} K_p
        CocyclePart::Phi1 => Scalar::from_int(-(s[i] * r[j])),
        // phi2(t^r d_i, t^s d_j) = r_i s_j sum_p r_p t^{r+s} K_p
        CocyclePart::Phi2 => Scalar::from_int(r[i] * s[j]),
    };
    if front.is_zero() {
        return Vec::new();
    }
    (0..r.rank())
        .filter(|&p| r[p] != 0)
        .map(|p| (p, degree.clone(), front.clone() * Scalar::from_int(r[p])))
        .collect()
}

/// The configured cocycle `phi(t^r d_i, t^s d_j)` in canonical form.
pub fn cocycle_value(
    i: usize,
    r: &MultiIndex,
    j: usize,
    s: &MultiIndex,
    cfg: &AlgebraConfig,
) -> AlgebraElement {
    let mut out = AlgebraElement::zero(cfg.rank());
    for (part, mu) in [
        (CocyclePart::Phi1, &cfg.cocycle.mu1),
        (CocyclePart::Phi2, &cfg.cocycle.mu2),
    ] {
        if mu.is_zero() {
            continue;
        }
        for (p, k, c) in cocycle_raw_terms(part, i, r, j, s) {
            out.add_term(BasisSymbol::K { i: p, k }, c * mu);
        }
    }
    out
}

fn bracket_symbols(a: &BasisSymbol, b: &BasisSymbol, cfg: &AlgebraConfig) -> AlgebraElement {
    use BasisSymbol::*;
    let rank = cfg.rank();
    match (a, b) {
        (G { x, k }, G { x: y, k: l }) => {
            let mut out = AlgebraElement::zero(rank);
            let degree = k + l;
            for (t, c) in cfg.g.bracket(*x, *y).iter().enumerate() {
                out.add_term(
                    G {
                        x: t,
                        k: degree.clone(),
                    },
                    c.clone(),
                );
            }
            let form = cfg.g.form(*x, *y);
            if !form.is_zero() {
                for i in 0..rank {
                    if k[i] != 0 {
                        out.add_term(
                            K {
                                i,
                                k: degree.clone(),
                            },
                            form * &Scalar::from_int(k[i]),
                        );
                    }
                }
            }
            out
        }
        // the differential classes commute with each other and with loops
        (K { .. }, K { .. }) | (G { .. }, K { .. }) | (K { .. }, G { .. }) => {
            AlgebraElement::zero(rank)
        }
        (D { i, k: r }, K { i: j, k: s }) => {
            let mut out = AlgebraElement::zero(rank);
            let degree = r + s;
            out.add_term(
                K {
                    i: *j,
                    k: degree.clone(),
                },
                Scalar::from_int(s[*i]),
            );
            if i == j {
                for p in 0..rank {
                    if r[p] != 0 {
                        out.add_term(
                            K {
                                i: p,
                                k: degree.clone(),
                            },
                            Scalar::from_int(r[p]),
                        );
                    }
                }
            }
            out
        }
        (K { .. }, D { .. }) => bracket_symbols(b, a, cfg).scale(&Scalar::from_int(-1)),
        (D { i, k: r }, G { x, k: s }) => {
            AlgebraElement::g_loop(*x, r + s).scale(&Scalar::from_int(s[*i]))
        }
        (G { .. }, D { .. }) => bracket_symbols(b, a, cfg).scale(&Scalar::from_int(-1)),
        (D { i, k: r }, D { i: j, k: s }) => {
            let mut out = AlgebraElement::zero(rank);
            let degree = r + s;
            out.add_term(
                D {
                    i: *j,
                    k: degree.clone(),
                },
                Scalar::from_int(s[*i]),
            );
            out.add_term(
                D {
                    i: *i,
                    k: degree.clone(),
                },
                Scalar::from_int(-r[*j]),
            );
            out.add(&cocycle_value(*i, r, *j, s, cfg))
        }
    }
}

/// Bilinear extension of the bracket relations, in canonical form.
pub fn bracket(
    a: &AlgebraElement,
    b: &AlgebraElement,
    cfg: &AlgebraConfig,
) -> Result<AlgebraElement, Error> {
    if a.rank() != cfg.rank() {
        return Err(Error::RankMismatch {
            expected: cfg.rank(),
            got: a.rank(),
        });
    }
    if b.rank() != cfg.rank() {
        return Err(Error::RankMismatch {
            expected: cfg.rank(),
            got: b.rank(),
        });
    }
    let mut out = AlgebraElement::zero(cfg.rank());
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            let partial = bracket_symbols(sa, sb, cfg);
            out = out.add(&partial.scale(&(ca * cb)));
        }
    }
    Ok(out)
}

/// Canonical basis of the graded component at the given degree: coefficient
/// loops, then surviving K classes, then the derivations.
pub fn graded_component_basis(cfg: &AlgebraConfig, degree: &MultiIndex) -> Vec<BasisSymbol> {
    assert_eq!(degree.rank(), cfg.rank());
    let mut out = Vec::new();
    for x in 0..cfg.g.dim() {
        out.push(BasisSymbol::G {
            x,
            k: degree.clone(),
        });
    }
    let eliminated = degree.last_nonzero();
    for i in 0..cfg.rank() {
        if Some(i) != eliminated {
            out.push(BasisSymbol::K {
                i,
                k: degree.clone(),
            });
        }
    }
    for i in 0..cfg.rank() {
        out.push(BasisSymbol::D {
            i,
            k: degree.clone(),
        });
    }
    out
}

/// Matrix of `ad(a)` on the span of the graded components at the listed
/// degrees, rows and columns ordered by the degree list then the canonical
/// component basis. A nonzero image outside the window is an error.
pub fn adjoint_action_matrix(
    a: &AlgebraElement,
    degrees: &[MultiIndex],
    cfg: &AlgebraConfig,
) -> Result<QMatrix, Error> {
    if !a.is_homogeneous() {
        return Err(Error::InvalidConfig(
            "adjoint matrix requires a homogeneous element".into(),
        ));
    }
    let mut symbols = Vec::new();
    let mut index = BTreeMap::new();
    for d in degrees {
        for sym in graded_component_basis(cfg, d) {
            index.insert(sym.clone(), symbols.len());
            symbols.push(sym);
        }
    }
    let mut m = QMatrix::zeros(symbols.len(), symbols.len());
    for (col, sym) in symbols.iter().enumerate() {
        let image = bracket(a, &AlgebraElement::from_symbol(sym.clone()), cfg)?;
        for (s, c) in image.terms() {
            match index.get(s) {
                Some(&row) => m.set(row, col, c.clone()),
                None => return Err(Error::DegreeOutsideWindow(s.degree().clone())),
            }
        }
    }
    Ok(m)
}
