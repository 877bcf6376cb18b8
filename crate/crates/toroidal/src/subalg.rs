//! Distinguished subalgebras and automorphisms: solenoidal families, the
//! sl_{n+2} embedding into the derivations, the degree-zero triangular
//! decomposition, and lattice changes of coordinates.

use crate::algebra::{bracket, AlgebraConfig, AlgebraElement, BasisSymbol};
use crate::error::Error;
use crate::lattice::{punctured_window, MultiIndex};
use crate::linalg::QMatrix;
use crate::scalar::Scalar;

/// A solenoidal direction vector together with the finite window on which
/// its genericity has been certified.
#[derive(Clone, Debug)]
pub struct SolenoidalConfig {
    gamma: Vec<Scalar>,
    certified_radius: i64,
}

impl SolenoidalConfig {
    /// Certifies `gamma . r != 0` for every nonzero `r` in the box of the
    /// given radius, and stamps the certificate on the configuration.
    pub fn certify(gamma: Vec<Scalar>, radius: i64) -> Result<Self, Error> {
        for r in punctured_window(gamma.len(), radius) {
            if r.dot(&gamma).is_zero() {
                return Err(Error::NotGeneric { radius, witness: r });
            }
        }
        Ok(SolenoidalConfig {
            gamma,
            certified_radius: radius,
        })
    }

    /// A default direction generic on the given window: powers of a base
    /// that dominates any carry in the box, so digit expansions are unique.
    pub fn default_for(rank: usize, radius: i64) -> Self {
        let base = 2 * radius + 1;
        let mut gamma = Vec::with_capacity(rank);
        let mut p = 1i64;
        for _ in 0..rank {
            gamma.push(Scalar::from_int(p));
            p *= base;
        }
        Self::certify(gamma, radius).expect("power basis is generic on its own window")
    }

    pub fn gamma(&self) -> &[Scalar] {
        &self.gamma
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }

    pub fn certified_radius(&self) -> i64 {
        self.certified_radius
    }

    pub fn require_radius(&self, radius: i64) -> Result<(), Error> {
        if radius <= self.certified_radius {
            Ok(())
        } else {
            Err(Error::GenericityWindowTooSmall {
                certified: self.certified_radius,
                requested: radius,
            })
        }
    }
}

/// `t^r D(gamma) = sum_i gamma_i t^r d_i`.
pub fn solenoidal_element(r: &MultiIndex, cfg: &SolenoidalConfig) -> Result<AlgebraElement, Error> {
    cfg.require_radius(r.entries().iter().map(|x| x.abs()).max().unwrap_or(0))?;
    let mut out = AlgebraElement::zero(cfg.rank());
    for (i, gi) in cfg.gamma.iter().enumerate() {
        out.add_term(BasisSymbol::D { i, k: r.clone() }, gi.clone());
    }
    Ok(out)
}

/// An integer lattice automorphism with its cached inverse.
#[derive(Clone, Debug)]
pub struct LatticeAutomorphism {
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>, // a^{-1}
}

impl LatticeAutomorphism {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self, Error> {
        let n = a.len();
        if a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidConfig("automorphism matrix not square".into()));
        }
        let qa = QMatrix::from_fn(n, n, |i, j| Scalar::from_int(a[i][j]));
        let det = qa
            .determinant()
            .to_i64()
            .expect("integer matrix has integer determinant");
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular { det });
        }
        let qinv = qa.inverse().expect("unimodular matrix is invertible");
        let b = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        qinv.get(i, j)
                            .to_i64()
                            .expect("inverse of a unimodular matrix is integral")
                    })
                    .collect()
            })
            .collect();
        Ok(LatticeAutomorphism { a, b })
    }

    pub fn identity(rank: usize) -> Self {
        let a = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeAutomorphism::new(a).unwrap()
    }

    /// The permutation matrix sending coordinate j to perm[j].
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut a = vec![vec![0; n]; n];
        for (j, &p) in perm.iter().enumerate() {
            a[p][j] = 1;
        }
        LatticeAutomorphism::new(a).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn inverse_entry(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn inverse(&self) -> LatticeAutomorphism {
        LatticeAutomorphism {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn compose(&self, other: &LatticeAutomorphism) -> LatticeAutomorphism {
        let n = self.rank();
        assert_eq!(n, other.rank());
        let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        LatticeAutomorphism {
            a: mul(&self.a, &other.a),
            b: mul(&other.b, &self.b),
        }
    }

    /// Image of a row vector `m` under right multiplication by the
    /// transpose, i.e. the lattice map `m -> m A^t`.
    pub fn apply_to_degree(&self, m: &MultiIndex) -> MultiIndex {
        let n = self.rank();
        assert_eq!(m.rank(), n);
        MultiIndex::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.a[i][j] * m[j]).sum())
                .collect(),
        )
    }

    /// Weight transformation of the twisted module: row vector times the
    /// inverse transpose, i.e. `mu -> B mu` with `B = A^{-1}`.
    pub fn apply_inverse_to_weight(&self, mu: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        assert_eq!(mu.len(), n);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Scalar::from_int(self.b[i][j]) * &mu[j])
                    .sum()
            })
            .collect()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.a
    }
}

/// The change-of-coordinates automorphism on basis symbols, extended
/// linearly:
///
/// - loops:        `x t^m      -> x t^{mA^t}`
/// - classes:      `t^m K_j    -> sum_p a_{pj} t^{mA^t} K_p`
/// - derivations:  `t^m d_j    -> sum_p b_{jp} t^{mA^t} d_p`
///
/// Composition follows `T_A . T_B = T_{AB}`.
pub fn coordinate_change(a: &AlgebraElement, auto: &LatticeAutomorphism) -> AlgebraElement {
    let rank = a.rank();
    assert_eq!(rank, auto.rank(), "automorphism rank mismatch");
    let mut out = AlgebraElement::zero(rank);
    for (sym, c) in a.terms() {
        let image_degree = auto.apply_to_degree(sym.degree());
        match sym {
            BasisSymbol::G { x, .. } => {
                out.add_term(
                    BasisSymbol::G {
                        x: *x,
                        k: image_degree,
                    },
                    c.clone(),
                );
            }
            BasisSymbol::K { i: j, .. } => {
                for p in 0..rank {
                    let coeff = auto.entry(p, *j);
                    if coeff != 0 {
                        out.add_term(
                            BasisSymbol::K {
                                i: p,
                                k: image_degree.clone(),
                            },
                            c * &Scalar::from_int(coeff),
                        );
                    }
                }
            }
            BasisSymbol::D { i: j, .. } => {
                for p in 0..rank {
                    let coeff = auto.inverse_entry(*j, p);
                    if coeff != 0 {
                        out.add_term(
                            BasisSymbol::D {
                                i: p,
                                k: image_degree.clone(),
                            },
                            c * &Scalar::from_int(coeff),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Position of a symbol in the triangular decomposition by t_0-degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriangularPart {
    Lower,
    Middle,
    Upper,
}

/// Strict classification by the sign of the t_0-degree.
pub fn triangular_part_of(sym: &BasisSymbol) -> TriangularPart {
    match sym.degree()[0].signum() {
        1 => TriangularPart::Upper,
        0 => TriangularPart::Middle,
        _ => TriangularPart::Lower,
    }
}

/// The derivation-algebra image of the matrix unit `F_{i,j}` of
/// sl_{n+2}, for `0 <= i, j <= n+1`:
///
/// - `F_{i,j}     = t_i t_j^{-1} d_j`   (i, j <= n)
/// - `F_{i,n+1}   = -t_i sum_k d_k`
/// - `F_{n+1,i}   = t_i^{-1} d_i`
/// - `F_{n+1,n+1} = -sum_k d_k`
pub fn sl_embedding(i: usize, j: usize, cfg: &AlgebraConfig) -> Result<AlgebraElement, Error> {
    let n = cfg.n();
    let rank = cfg.rank();
    let limit = n + 2;
    if i >= limit || j >= limit {
        return Err(Error::IndexOutOfRange {
            index: i.max(j),
            limit,
        });
    }
    let mut out = AlgebraElement::zero(rank);
    match (i == n + 1, j == n + 1) {
        (false, false) => {
            let k = &MultiIndex::unit(rank, i) - &MultiIndex::unit(rank, j);
            out.add_term(BasisSymbol::D { i: j, k }, Scalar::one());
        }
        (false, true) => {
            let k = MultiIndex::unit(rank, i);
            for p in 0..rank {
                out.add_term(
                    BasisSymbol::D { i: p, k: k.clone() },
                    Scalar::from_int(-1),
                );
            }
        }
        (true, false) => {
            let k = -&MultiIndex::unit(rank, j);
            out.add_term(BasisSymbol::D { i: j, k }, Scalar::one());
        }
        (true, true) => {
            let k = MultiIndex::zero(rank);
            for p in 0..rank {
                out.add_term(
                    BasisSymbol::D { i: p, k: k.clone() },
                    Scalar::from_int(-1),
                );
            }
        }
    }
    Ok(out)
}

/// The diagonal difference `F_{i,i} - F_{i+1,i+1}` of the standard basis.
pub fn sl_embedding_coroot(i: usize, cfg: &AlgebraConfig) -> Result<AlgebraElement, Error> {
    let top = sl_embedding(i, i, cfg)?;
    let next = sl_embedding(i + 1, i + 1, cfg)?;
    Ok(top.sub(&next))
}

/// Checks one matrix-unit relation of the embedding:
/// `[F_{ab}, F_{cd}] = delta_{bc} F_{ad} - delta_{da} F_{cb}`.
pub fn sl_embedding_relation_holds(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    cfg: &AlgebraConfig,
) -> Result<bool, Error> {
    let fab = sl_embedding(a, b, cfg)?;
    let fcd = sl_embedding(c, d, cfg)?;
    let lhs = bracket(&fab, &fcd, cfg)?;
    let mut rhs = AlgebraElement::zero(cfg.rank());
    if b == c {
        rhs = rhs.add(&sl_embedding(a, d, cfg)?);
    }
    if d == a {
        rhs = rhs.sub(&sl_embedding(c, b, cfg)?);
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CocycleConfig;
    use crate::simple::GFamily;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn witt_cfg(n: usize) -> AlgebraConfig {
        AlgebraConfig::new(n, GFamily::None, CocycleConfig::zero())
    }

    #[test]
    fn solenoidal_at_origin_is_the_direction_field() {
        let cfg = SolenoidalConfig::certify(vec![Scalar::one(), Scalar::from_int(2)], 1).unwrap();
        let e = solenoidal_element(&mi(&[0, 0]), &cfg).unwrap();
        assert_eq!(
            e.coefficient(&BasisSymbol::D {
                i: 0,
                k: mi(&[0, 0])
            }),
            Scalar::one()
        );
        assert_eq!(
            e.coefficient(&BasisSymbol::D {
                i: 1,
                k: mi(&[0, 0])
            }),
            Scalar::from_int(2)
        );
    }

    #[test]
    fn genericity_certificate_rejects_orthogonal_directions() {
        // gamma = (1, 1) is killed by r = (1, -1)
        let r = SolenoidalConfig::certify(vec![Scalar::one(), Scalar::one()], 2);
        match r {
            Err(Error::NotGeneric { witness, .. }) => {
                assert!(witness.dot(&[Scalar::one(), Scalar::one()]).is_zero())
            }
            other => panic!("expected genericity failure, got {other:?}"),
        }
    }

    #[test]
    fn solenoidal_bracket_structure_constant() {
        // [t^r D, t^s D] = sum_i (s_i - r_i) gamma_i t^{r+s} D at phi = 0
        let alg = witt_cfg(1);
        let sol = SolenoidalConfig::certify(vec![Scalar::one(), Scalar::from_int(2)], 1).unwrap();
        let a = solenoidal_element(&mi(&[1, 0]), &sol).unwrap();
        let b = solenoidal_element(&mi(&[0, 1]), &sol).unwrap();
        let out = bracket(&a, &b, &alg).unwrap();
        let expected = solenoidal_element(&mi(&[1, 1]), &sol).unwrap();
        assert_eq!(out, expected); // coefficient (0-1)*1 + (1-0)*2 = 1
    }

    #[test]
    fn solenoidal_closure_fails_with_cocycle() {
        let alg = AlgebraConfig::new(
            1,
            GFamily::None,
            CocycleConfig::new(Scalar::one(), Scalar::zero()),
        );
        let sol = SolenoidalConfig::certify(vec![Scalar::one(), Scalar::from_int(2)], 1).unwrap();
        let a = solenoidal_element(&mi(&[1, 0]), &sol).unwrap();
        let b = solenoidal_element(&mi(&[0, 1]), &sol).unwrap();
        let out = bracket(&a, &b, &alg).unwrap();
        let has_k = out
            .terms()
            .any(|(s, _)| matches!(s, BasisSymbol::K { .. }));
        assert!(has_k, "cocycle must obstruct closure");
    }

    #[test]
    fn embedding_examples() {
        let cfg = witt_cfg(1);
        // F_{n+1,i} = t_i^{-1} d_i
        let f = sl_embedding(2, 0, &cfg).unwrap();
        assert_eq!(f, AlgebraElement::derivation(0, mi(&[-1, 0])));
        // F_{n+1,n+1} = -sum d_k
        let f = sl_embedding(2, 2, &cfg).unwrap();
        let expected = AlgebraElement::derivation(0, mi(&[0, 0]))
            .add(&AlgebraElement::derivation(1, mi(&[0, 0])))
            .scale(&Scalar::from_int(-1));
        assert_eq!(f, expected);
    }

    #[test]
    fn embedding_satisfies_matrix_unit_relations() {
        for n in [1usize, 2] {
            let cfg = witt_cfg(n);
            let lim = n + 2;
            for a in 0..lim {
                for b in 0..lim {
                    for c in 0..lim {
                        for d in 0..lim {
                            assert!(
                                sl_embedding_relation_holds(a, b, c, d, &cfg).unwrap(),
                                "failed at n={n} ({a},{b},{c},{d})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coordinate_change_swap() {
        let auto = LatticeAutomorphism::permutation(&[1, 0]);
        let a = AlgebraElement::derivation(0, mi(&[5, 7]));
        let out = coordinate_change(&a, &auto);
        assert_eq!(out, AlgebraElement::derivation(1, mi(&[7, 5])));
    }

    #[test]
    fn coordinate_change_identity_and_inverse() {
        let auto = LatticeAutomorphism::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        let a = AlgebraElement::derivation(0, mi(&[2, -3]))
            .add(&AlgebraElement::k_class(0, mi(&[1, 4])));
        let round = coordinate_change(&coordinate_change(&a, &auto), &auto.inverse());
        assert_eq!(round, a);
        let id = LatticeAutomorphism::identity(2);
        assert_eq!(coordinate_change(&a, &id), a);
    }

    #[test]
    fn coordinate_change_on_central_elements() {
        // central K_j at degree zero maps to integer combinations of K_p
        let auto = LatticeAutomorphism::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let a = AlgebraElement::k_class(0, mi(&[0, 0]));
        let out = coordinate_change(&a, &auto);
        assert_eq!(
            out.coefficient(&BasisSymbol::K {
                i: 0,
                k: mi(&[0, 0])
            }),
            Scalar::from_int(2)
        );
        assert_eq!(
            out.coefficient(&BasisSymbol::K {
                i: 1,
                k: mi(&[0, 0])
            }),
            Scalar::from_int(1)
        );
    }

    #[test]
    fn composition_law() {
        // T_A . T_B = T_{AB}
        let a = LatticeAutomorphism::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        let b = LatticeAutomorphism::permutation(&[1, 0]);
        let ab = a.compose(&b);
        let x = AlgebraElement::derivation(1, mi(&[2, 5]))
            .add(&AlgebraElement::k_class(0, mi(&[-1, 3])));
        let lhs = coordinate_change(&coordinate_change(&x, &b), &a);
        let rhs = coordinate_change(&x, &ab);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_unimodular_is_rejected() {
        match LatticeAutomorphism::new(vec![vec![2, 0], vec![0, 1]]) {
            Err(Error::NotUnimodular { det }) => assert_eq!(det, 2),
            other => panic!("expected unimodularity failure, got {other:?}"),
        }
    }

    #[test]
    fn triangular_classification() {
        let g = BasisSymbol::G {
            x: 0,
            k: mi(&[2, -5]),
        };
        assert_eq!(triangular_part_of(&g), TriangularPart::Upper);
        let d = BasisSymbol::D {
            i: 1,
            k: mi(&[0, 7]),
        };
        assert_eq!(triangular_part_of(&d), TriangularPart::Middle);
        let k = BasisSymbol::K {
            i: 0,
            k: mi(&[-1, 3]),
        };
        assert_eq!(triangular_part_of(&k), TriangularPart::Lower);
    }
}
