//! Tensor-field weight modules: `V1 (x) V2 (x) t^r` with the explicit loop
//! and derivation actions, in two flavors.
//!
//! The full flavor carries the whole rank-(n+1) algebra with the
//! differential classes acting by zero. The degree-zero flavor carries the
//! t_0-degree-zero subalgebra on a Z^n lattice, with `t^m K_0` and
//! `t^m d_0` acting by fixed level scalars `a` and `b`, and `t^m K_i`
//! acting by zero for i >= 1.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraElement, BasisSymbol};
use crate::error::Error;
use crate::lattice::{window, MultiIndex};
use crate::reps::Irrep;
use crate::scalar::Scalar;
use crate::weights::WeightTable;

/// Which part of the algebra acts, and with what level data.
#[derive(Clone, Debug)]
pub enum Flavor {
    /// Module over the full algebra; differential classes act by zero.
    Full,
    /// Module over the t_0-degree-zero subalgebra with level pair (a, b).
    DegreeZero { a: Scalar, b: Scalar },
}

/// Configuration of one tensor module.
#[derive(Clone, Debug)]
pub struct TensorModuleConfig {
    n: usize,
    v1: Irrep,
    v2: Irrep,
    alpha: Vec<Scalar>,
    flavor: Flavor,
}

impl TensorModuleConfig {
    /// A module over the full rank-(n+1) algebra. `v2` must be a
    /// gl_{n+1} representation and `alpha` has length n+1.
    pub fn full(n: usize, v1: Irrep, v2: Irrep, alpha: Vec<Scalar>) -> Result<Self, Error> {
        if v2.gl_size() != Some(n + 1) {
            return Err(Error::InvalidConfig(format!(
                "full-flavor module needs a gl_{} representation",
                n + 1
            )));
        }
        if alpha.len() != n + 1 {
            return Err(Error::InvalidConfig(format!(
                "alpha needs {} entries, got {}",
                n + 1,
                alpha.len()
            )));
        }
        Ok(TensorModuleConfig {
            n,
            v1,
            v2,
            alpha,
            flavor: Flavor::Full,
        })
    }

    /// A module over the degree-zero subalgebra on the Z^n lattice. `v2`
    /// must be a gl_n representation and `alpha` has length n.
    pub fn degree_zero(
        n: usize,
        v1: Irrep,
        v2: Irrep,
        alpha: Vec<Scalar>,
        a: Scalar,
        b: Scalar,
    ) -> Result<Self, Error> {
        if v2.gl_size() != Some(n) {
            return Err(Error::InvalidConfig(format!(
                "degree-zero module needs a gl_{n} representation"
            )));
        }
        if alpha.len() != n {
            return Err(Error::InvalidConfig(format!(
                "alpha needs {n} entries, got {}",
                alpha.len()
            )));
        }
        Ok(TensorModuleConfig {
            n,
            v1,
            v2,
            alpha,
            flavor: Flavor::DegreeZero { a, b },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the lattice the module is graded by.
    pub fn lattice_rank(&self) -> usize {
        match self.flavor {
            Flavor::Full => self.n + 1,
            Flavor::DegreeZero { .. } => self.n,
        }
    }

    pub fn v1(&self) -> &Irrep {
        &self.v1
    }

    pub fn v2(&self) -> &Irrep {
        &self.v2
    }

    pub fn alpha(&self) -> &[Scalar] {
        &self.alpha
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    pub fn weight_dim(&self) -> u64 {
        (self.v1.dim() * self.v2.dim()) as u64
    }

    /// Weight of the lattice point `r`, i.e. `alpha + r` componentwise.
    pub fn weight_at(&self, r: &MultiIndex) -> Vec<Scalar> {
        assert_eq!(r.rank(), self.lattice_rank());
        self.alpha
            .iter()
            .zip(r.entries())
            .map(|(a, &ri)| a.clone() + Scalar::from_int(ri))
            .collect()
    }
}

/// A finite combination of decomposable vectors `v1 (x) v2 (x) t^r`,
/// stored sparsely by basis indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleVector {
    rank: usize,
    terms: BTreeMap<(usize, usize, MultiIndex), Scalar>,
}

impl ModuleVector {
    pub fn zero(rank: usize) -> Self {
        ModuleVector {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(v1: usize, v2: usize, r: MultiIndex) -> Self {
        let mut v = ModuleVector::zero(r.rank());
        v.add_term(v1, v2, r, Scalar::one());
        v
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, v1: usize, v2: usize, r: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(r.rank(), self.rank);
        let key = (v1, v2, r);
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for ((a, b, r), c) in &other.terms {
            out.add_term(*a, *b, r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVector {
        if c.is_zero() {
            return ModuleVector::zero(self.rank);
        }
        ModuleVector {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize, MultiIndex), &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, v1: usize, v2: usize, r: &MultiIndex) -> Scalar {
        self.terms
            .get(&(v1, v2, r.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }
}

fn act_v1(cfg: &TensorModuleConfig, x: usize, v1: usize) -> Vec<(usize, Scalar)> {
    let mat = cfg.v1.g_basis(x);
    (0..cfg.v1.dim())
        .filter_map(|t| {
            let c = mat.get(t, v1);
            (!c.is_zero()).then(|| (t, c.clone()))
        })
        .collect()
}

fn act_e_on_v2(cfg: &TensorModuleConfig, j: usize, i: usize, v2: usize) -> Vec<(usize, Scalar)> {
    let mat = cfg.v2.e(j, i);
    (0..cfg.v2.dim())
        .filter_map(|t| {
            let c = mat.get(t, v2);
            (!c.is_zero()).then(|| (t, c.clone()))
        })
        .collect()
}

fn act_symbol_full(
    cfg: &TensorModuleConfig,
    sym: &BasisSymbol,
    v1: usize,
    v2: usize,
    r: &MultiIndex,
    c: &Scalar,
    out: &mut ModuleVector,
) {
    match sym {
        BasisSymbol::G { x, k: m } => {
            let shifted = r + m;
            for (t, cv) in act_v1(cfg, *x, v1) {
                out.add_term(t, v2, shifted.clone(), c * &cv);
            }
        }
        // the differential classes act by zero at level zero
        BasisSymbol::K { .. } => {}
        BasisSymbol::D { i, k: m } => {
            let shifted = r + m;
            let diag = cfg.alpha[*i].clone() + Scalar::from_int(r[*i]);
            out.add_term(v1, v2, shifted.clone(), c * &diag);
            for j in 0..cfg.n + 1 {
                if m[j] == 0 {
                    continue;
                }
                let mj = Scalar::from_int(m[j]);
                for (t, cv) in act_e_on_v2(cfg, j, *i, v2) {
                    out.add_term(v1, t, shifted.clone(), c * &(cv * &mj));
                }
            }
        }
    }
}

fn act_symbol_degree_zero(
    cfg: &TensorModuleConfig,
    sym: &BasisSymbol,
    v1: usize,
    v2: usize,
    r: &MultiIndex,
    c: &Scalar,
    out: &mut ModuleVector,
) -> Result<(), Error> {
    let (a, b) = match &cfg.flavor {
        Flavor::DegreeZero { a, b } => (a, b),
        Flavor::Full => unreachable!(),
    };
    if sym.degree()[0] != 0 {
        return Err(Error::FlavorMismatch(format!(
            "symbol {sym} has nonzero t0-degree and cannot act on a degree-zero module"
        )));
    }
    let m = sym.degree().tail();
    let shifted = r + &m;
    match sym {
        BasisSymbol::G { x, .. } => {
            for (t, cv) in act_v1(cfg, *x, v1) {
                out.add_term(t, v2, shifted.clone(), c * &cv);
            }
        }
        BasisSymbol::K { i: 0, .. } => {
            out.add_term(v1, v2, shifted, c * a);
        }
        BasisSymbol::K { .. } => {}
        BasisSymbol::D { i: 0, .. } => {
            out.add_term(v1, v2, shifted, c * b);
        }
        BasisSymbol::D { i, .. } => {
            // lattice direction i >= 1 maps to slot i-1 of the Z^n data
            let slot = *i - 1;
            let diag = cfg.alpha[slot].clone() + Scalar::from_int(r[slot]);
            out.add_term(v1, v2, shifted.clone(), c * &diag);
            for j in 0..cfg.n {
                if m[j] == 0 {
                    continue;
                }
                let mj = Scalar::from_int(m[j]);
                for (t, cv) in act_e_on_v2(cfg, j, slot, v2) {
                    out.add_term(v1, t, shifted.clone(), c * &(cv * &mj));
                }
            }
        }
    }
    Ok(())
}

/// Action of an algebra element on a module vector, extended bilinearly.
///
/// Full-flavor modules accept any rank-(n+1) element; degree-zero modules
/// reject symbols of nonzero t_0-degree.
pub fn act(
    a: &AlgebraElement,
    v: &ModuleVector,
    cfg: &TensorModuleConfig,
) -> Result<ModuleVector, Error> {
    if a.rank() != cfg.n + 1 {
        return Err(Error::RankMismatch {
            expected: cfg.n + 1,
            got: a.rank(),
        });
    }
    if v.rank() != cfg.lattice_rank() {
        return Err(Error::RankMismatch {
            expected: cfg.lattice_rank(),
            got: v.rank(),
        });
    }
    let mut out = ModuleVector::zero(cfg.lattice_rank());
    for (sym, cs) in a.terms() {
        for ((v1, v2, r), cv) in v.terms() {
            let c = cs * cv;
            match cfg.flavor {
                Flavor::Full => act_symbol_full(cfg, sym, *v1, *v2, r, &c, &mut out),
                Flavor::DegreeZero { .. } => {
                    act_symbol_degree_zero(cfg, sym, *v1, *v2, r, &c, &mut out)?
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of a weight diagnosis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WeightOutcome {
    /// The common eigenvalue tuple of the grading derivations.
    Weight(Vec<Scalar>),
    /// Two lattice points witnessing inhomogeneity.
    NotHomogeneous(MultiIndex, MultiIndex),
    Zero,
}

/// Diagnoses homogeneity by the eigenvalue of each grading derivation, read
/// off the action itself: a vector is homogeneous exactly when all its
/// decomposable terms sit at one lattice point, and its weight is
/// `alpha + r`.
pub fn weight_of(v: &ModuleVector, cfg: &TensorModuleConfig) -> WeightOutcome {
    let mut support = v.terms().map(|((_, _, r), _)| r);
    let Some(first) = support.next() else {
        return WeightOutcome::Zero;
    };
    for r in support {
        if r != first {
            return WeightOutcome::NotHomogeneous(first.clone(), r.clone());
        }
    }
    WeightOutcome::Weight(cfg.weight_at(first))
}

/// Per-weight dimension table on the box window: every captured weight
/// space is `V1 (x) V2 (x) t^r`, so every row is `dim V1 * dim V2`.
pub fn weight_space_dims(cfg: &TensorModuleConfig, radius: i64) -> WeightTable {
    let mut table = WeightTable::new(cfg.alpha().to_vec());
    let d = cfg.weight_dim();
    for r in window(cfg.lattice_rank(), radius) {
        table.insert(r, d);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bracket, AlgebraConfig, CocycleConfig};
    use crate::reps::{standard_rep, Irrep};
    use crate::simple::GFamily;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    /// n = 1, trivial coefficient algebra, V2 the standard gl_2 module.
    fn witt_standard_module() -> TensorModuleConfig {
        TensorModuleConfig::full(
            1,
            Irrep::trivial_of_g(GFamily::None),
            standard_rep(2),
            vec![Scalar::zero(), Scalar::zero()],
        )
        .unwrap()
    }

    #[test]
    fn derivation_action_mixes_v2() {
        // t^(1,1) d_0 on 1 (x) e_0 (x) t^0: diagonal part vanishes at
        // alpha = r = 0, the matrix part gives e_0 + e_1 shifted to t^(1,1)
        let cfg = witt_standard_module();
        let v = ModuleVector::basis(0, 0, mi(&[0, 0]));
        let a = AlgebraElement::derivation(0, mi(&[1, 1]));
        let out = act(&a, &v, &cfg).unwrap();
        assert_eq!(out.coefficient(0, 0, &mi(&[1, 1])), Scalar::one());
        assert_eq!(out.coefficient(0, 1, &mi(&[1, 1])), Scalar::one());
        assert_eq!(out.num_terms(), 2);
    }

    #[test]
    fn differential_classes_act_by_zero() {
        let cfg = witt_standard_module();
        let v = ModuleVector::basis(0, 1, mi(&[2, -1]));
        for i in 0..2 {
            for k in [mi(&[0, 0]), mi(&[3, 1]), mi(&[0, -2])] {
                let a = AlgebraElement::k_class(i, k);
                if a.is_zero() {
                    continue;
                }
                assert!(act(&a, &v, &cfg).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn weight_reads_off_alpha_plus_r() {
        let cfg = TensorModuleConfig::full(
            1,
            Irrep::trivial_of_g(GFamily::None),
            standard_rep(2),
            vec![Scalar::ratio(1, 2), Scalar::zero()],
        )
        .unwrap();
        let v = ModuleVector::basis(0, 0, mi(&[0, 0]));
        assert_eq!(
            weight_of(&v, &cfg),
            WeightOutcome::Weight(vec![Scalar::ratio(1, 2), Scalar::zero()])
        );
        // the eigenvalue must agree with the action of each d_i
        for i in 0..2 {
            let di = AlgebraElement::derivation(i, mi(&[0, 0]));
            let image = act(&di, &v, &cfg).unwrap();
            let expected = v.scale(&cfg.weight_at(&mi(&[0, 0]))[i]);
            assert_eq!(image, expected);
        }
        let v2 = ModuleVector::basis(0, 0, mi(&[2, 3]));
        assert_eq!(
            weight_of(&v2, &cfg),
            WeightOutcome::Weight(vec![Scalar::ratio(5, 2), Scalar::from_int(3)])
        );
        let mixed = v.add(&v2);
        assert!(matches!(
            weight_of(&mixed, &cfg),
            WeightOutcome::NotHomogeneous(..)
        ));
    }

    #[test]
    fn degree_zero_flavor_levels() {
        // n = 1 level module: X = C[t_1^{+-1}] with K_0 -> a shift, d_0 -> b shift
        let cfg = TensorModuleConfig::degree_zero(
            1,
            Irrep::trivial_of_g(GFamily::None),
            crate::reps::gl_irrep(1, vec![], Scalar::zero()).unwrap(),
            vec![Scalar::zero()],
            Scalar::one(),
            Scalar::from_int(2),
        )
        .unwrap();
        let v = ModuleVector::basis(0, 0, mi(&[3]));
        // t^(0,2) K_0 shifts by 2 with coefficient a = 1
        let k0 = AlgebraElement::k_class(0, mi(&[0, 2]));
        let out = act(&k0, &v, &cfg).unwrap();
        assert_eq!(out.coefficient(0, 0, &mi(&[5])), Scalar::one());
        // t^(0,2) d_0 with coefficient b = 2
        let d0 = AlgebraElement::derivation(0, mi(&[0, 2]));
        let out = act(&d0, &v, &cfg).unwrap();
        assert_eq!(out.coefficient(0, 0, &mi(&[5])), Scalar::from_int(2));
        // t^m K_1 acts by zero
        let k1 = AlgebraElement::k_class(1, mi(&[0, 2]));
        assert!(act(&k1, &v, &cfg).unwrap().is_zero());
        // t^m d_1 acts jet-like: eigenvalue alpha_1 + r = 3
        let d1 = AlgebraElement::derivation(1, mi(&[0, 2]));
        let out = act(&d1, &v, &cfg).unwrap();
        assert_eq!(out.coefficient(0, 0, &mi(&[5])), Scalar::from_int(3));
        // elements with t_0-degree are rejected
        let bad = AlgebraElement::derivation(1, mi(&[1, 0]));
        assert!(matches!(
            act(&bad, &v, &cfg),
            Err(Error::FlavorMismatch(_))
        ));
    }

    #[test]
    fn module_axiom_sample() {
        // [a, b] v = a (b v) - b (a v) for a couple of handpicked pairs
        let alg = AlgebraConfig::new(
            1,
            GFamily::None,
            CocycleConfig::new(Scalar::one(), Scalar::from_int(-1)),
        );
        let cfg = witt_standard_module();
        let v = ModuleVector::basis(0, 1, mi(&[1, -2]));
        let pairs = [
            (
                AlgebraElement::derivation(0, mi(&[1, 2])),
                AlgebraElement::derivation(1, mi(&[-1, 1])),
            ),
            (
                AlgebraElement::derivation(1, mi(&[0, 3])),
                AlgebraElement::derivation(1, mi(&[2, -1])),
            ),
        ];
        for (a, b) in pairs {
            let lhs = act(&bracket(&a, &b, &alg).unwrap(), &v, &cfg).unwrap();
            let rhs = act(&a, &act(&b, &v, &cfg).unwrap(), &cfg)
                .unwrap()
                .sub(&act(&b, &act(&a, &v, &cfg).unwrap(), &cfg).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn weight_table_is_constant() {
        let cfg = witt_standard_module();
        let table = weight_space_dims(&cfg, 2);
        assert_eq!(table.len(), 25);
        assert!(table.rows().all(|(_, d)| d == 2));
    }
}
