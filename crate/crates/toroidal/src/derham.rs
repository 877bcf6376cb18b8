//! Differential forms on the torus and the chain map linking them.
//!
//! Degree-k forms are the tensor modules with trivial coefficient part and
//! k-th wedge power of the standard gl_{n+1} module, all sharing one base
//! point `alpha`. The differential acts per lattice point by
//! `d(w (x) t^r) = sum_i (alpha_i + r_i) (e_i ^ w) (x) t^r`; it raises the
//! form degree, preserves the weight, squares to zero, and commutes with
//! every derivation.

use crate::error::Error;
use crate::lattice::{window, MultiIndex};
use crate::linalg::QMatrix;
use crate::reps::{exterior_power, standard_rep, subsets, Irrep};
use crate::scalar::Scalar;
use crate::simple::GFamily;
use crate::tensor::{ModuleVector, TensorModuleConfig};
use crate::weights::WeightTable;

/// One rung of the form complex: rank parameter `n`, base point `alpha`
/// (length n+1) and form degree `k <= n+1`.
#[derive(Clone, Debug)]
pub struct DeRhamConfig {
    n: usize,
    alpha: Vec<Scalar>,
    degree: usize,
}

impl DeRhamConfig {
    pub fn new(n: usize, alpha: Vec<Scalar>, degree: usize) -> Result<Self, Error> {
        if alpha.len() != n + 1 {
            return Err(Error::InvalidConfig(format!(
                "alpha needs {} entries, got {}",
                n + 1,
                alpha.len()
            )));
        }
        if degree > n + 1 {
            return Err(Error::ExteriorDegree {
                k: degree,
                dim: n + 1,
            });
        }
        Ok(DeRhamConfig { n, alpha, degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[Scalar] {
        &self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The underlying tensor module of k-forms.
    pub fn module(&self) -> TensorModuleConfig {
        let w = standard_rep(self.n + 1);
        let v2 = exterior_power(&w, self.degree).expect("degree checked at construction");
        TensorModuleConfig::full(
            self.n,
            Irrep::trivial_of_g(GFamily::None),
            v2,
            self.alpha.clone(),
        )
        .expect("wedge power matches the lattice rank")
    }

    pub fn at_degree(&self, degree: usize) -> Result<DeRhamConfig, Error> {
        DeRhamConfig::new(self.n, self.alpha.clone(), degree)
    }
}

/// Wedging `e_i` onto a sorted index set: `None` when `i` already occurs,
/// otherwise the target subset index and the sign of the shuffle.
fn wedge_insert(i: usize, s: &[usize], next: &[Vec<usize>]) -> Option<(usize, i64)> {
    if s.contains(&i) {
        return None;
    }
    let before = s.iter().filter(|&&x| x < i).count();
    let sign = if before % 2 == 0 { 1 } else { -1 };
    let mut target: Vec<usize> = s.to_vec();
    target.insert(before, i);
    let idx = next
        .binary_search_by(|probe| probe.as_slice().cmp(&target))
        .expect("inserted subset exists in the next layer");
    Some((idx, sign))
}

/// The differential applied to a combination of k-forms. The result lives
/// in the degree-(k+1) module with the same base point.
pub fn derham_d(v: &ModuleVector, cfg: &DeRhamConfig) -> Result<ModuleVector, Error> {
    let m = cfg.n + 1;
    if cfg.degree == m {
        return Err(Error::TopDegreeForm(cfg.degree));
    }
    let current = subsets(m, cfg.degree);
    let next = subsets(m, cfg.degree + 1);
    let mut out = ModuleVector::zero(m);
    for ((v1, v2, r), c) in v.terms() {
        let s = &current[*v2];
        for i in 0..m {
            let coeff = cfg.alpha[i].clone() + Scalar::from_int(r[i]);
            if coeff.is_zero() {
                continue;
            }
            if let Some((target, sign)) = wedge_insert(i, s, &next) {
                out.add_term(
                    *v1,
                    target,
                    r.clone(),
                    c * &(coeff * Scalar::from_int(sign)),
                );
            }
        }
    }
    Ok(out)
}

/// Matrix of the differential restricted to the weight `alpha + r`:
/// columns index k-subsets, rows (k+1)-subsets.
pub fn d_matrix_at(cfg: &DeRhamConfig, r: &MultiIndex) -> Result<QMatrix, Error> {
    let m = cfg.n + 1;
    if cfg.degree == m {
        return Err(Error::TopDegreeForm(cfg.degree));
    }
    let current = subsets(m, cfg.degree);
    let next = subsets(m, cfg.degree + 1);
    let mut mat = QMatrix::zeros(next.len(), current.len());
    for (col, s) in current.iter().enumerate() {
        for i in 0..m {
            let coeff = cfg.alpha[i].clone() + Scalar::from_int(r[i]);
            if coeff.is_zero() {
                continue;
            }
            if let Some((row, sign)) = wedge_insert(i, s, &next) {
                mat.set(row, col, coeff * Scalar::from_int(sign));
            }
        }
    }
    Ok(mat)
}

/// Exact rank of the differential out of degree k at one weight. The top
/// degree has no outgoing differential, so its rank is zero.
pub fn rank_of_d_at(cfg: &DeRhamConfig, r: &MultiIndex) -> usize {
    match d_matrix_at(cfg, r) {
        Ok(m) => m.rank(),
        Err(_) => 0,
    }
}

/// Per-weight rank table of the image module `d(forms of degree k)` on the
/// box window. This is the weight-space dimension table of the unique
/// irreducible quotient in the degenerate fundamental cases.
pub fn image_weight_dims(cfg: &DeRhamConfig, radius: i64) -> WeightTable {
    let mut table = WeightTable::new(cfg.alpha.clone());
    for r in window(cfg.n + 1, radius) {
        let rank = rank_of_d_at(cfg, &r) as u64;
        table.insert(r, rank);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use crate::tensor::act;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn zero_alpha(n: usize) -> Vec<Scalar> {
        vec![Scalar::zero(); n + 1]
    }

    #[test]
    fn d_on_functions() {
        // n = 1, alpha = 0, k = 0: d(1 (x) t^(1,0)) = (e_0) (x) t^(1,0)
        let cfg = DeRhamConfig::new(1, zero_alpha(1), 0).unwrap();
        let v = ModuleVector::basis(0, 0, mi(&[1, 0]));
        let out = derham_d(&v, &cfg).unwrap();
        // 1-form basis subsets of {0,1}: [0] then [1]
        assert_eq!(out.coefficient(0, 0, &mi(&[1, 0])), Scalar::one());
        assert_eq!(out.num_terms(), 1);
    }

    #[test]
    fn d_squares_to_zero() {
        let alpha = vec![Scalar::ratio(1, 3), Scalar::ratio(-2, 5), Scalar::zero()];
        for k in 0..=1 {
            let cfg = DeRhamConfig::new(2, alpha.clone(), k).unwrap();
            let up = cfg.at_degree(k + 1).unwrap();
            let dim_k = subsets(3, k).len();
            for r in window(3, 2) {
                for b in 0..dim_k {
                    let v = ModuleVector::basis(0, b, r.clone());
                    let dd = derham_d(&derham_d(&v, &cfg).unwrap(), &up).unwrap();
                    assert!(dd.is_zero());
                }
            }
        }
    }

    #[test]
    fn top_degree_is_rejected() {
        let cfg = DeRhamConfig::new(1, zero_alpha(1), 2).unwrap();
        let v = ModuleVector::basis(0, 0, mi(&[0, 0]));
        assert!(matches!(
            derham_d(&v, &cfg),
            Err(Error::TopDegreeForm(2))
        ));
    }

    #[test]
    fn equivariance_spot_check() {
        // act(D(i,m), d v) = d(act(D(i,m), v)) on a handful of inputs
        let cfg = DeRhamConfig::new(1, vec![Scalar::ratio(1, 2), Scalar::zero()], 0).unwrap();
        let module_k = cfg.module();
        let module_k1 = cfg.at_degree(1).unwrap().module();
        for (i, m, r) in [
            (0usize, mi(&[1, 2]), mi(&[0, 0])),
            (1, mi(&[-1, 1]), mi(&[2, -1])),
            (0, mi(&[0, 3]), mi(&[-2, 2])),
        ] {
            let a = AlgebraElement::derivation(i, m);
            let v = ModuleVector::basis(0, 0, r);
            let lhs = act(&a, &derham_d(&v, &cfg).unwrap(), &module_k1).unwrap();
            let rhs = derham_d(&act(&a, &v, &module_k).unwrap(), &cfg).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_identities_off_the_integral_lattice() {
        // rank d_k + rank d_{k-1} = C(n+1, k) at every window weight
        let alpha = vec![Scalar::ratio(1, 2), Scalar::ratio(1, 3)];
        let binom = [1usize, 2, 1];
        for r in window(2, 2) {
            for k in 0..=2usize {
                let rank_k = rank_of_d_at(&DeRhamConfig::new(1, alpha.clone(), k).unwrap(), &r);
                let rank_km1 = if k == 0 {
                    0
                } else {
                    rank_of_d_at(&DeRhamConfig::new(1, alpha.clone(), k - 1).unwrap(), &r)
                };
                assert_eq!(rank_k + rank_km1, binom[k], "at r={r} k={k}");
            }
        }
    }

    #[test]
    fn image_dims_for_functions() {
        // d on 0-forms: rank 1 off the zero weight, 0 there
        let cfg = DeRhamConfig::new(1, zero_alpha(1), 0).unwrap();
        let table = image_weight_dims(&cfg, 2);
        assert_eq!(table.get(&mi(&[0, 0])), Some(0));
        assert_eq!(table.get(&mi(&[1, -2])), Some(1));
    }
}
