//! The finite-dimensional coefficient algebra: structure constants and the
//! invariant bilinear form on a fixed basis.
//!
//! Three families are supported: sl_m (m >= 2) with the trace form of the
//! defining representation, the Cartan subalgebra of sl_m alone (abelian,
//! same form), and the empty algebra. Everything downstream consumes only
//! the structure constants and the form, so all three run through the same
//! bracket kernel.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::QMatrix;
use crate::scalar::Scalar;

/// Which coefficient algebra to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GFamily {
    /// No coefficient algebra at all (pure Witt/Virasoro setting).
    None,
    /// sl_m in its defining basis.
    Sl(usize),
    /// Only the Cartan subalgebra of sl_m (abelian).
    Cartan(usize),
}

impl GFamily {
    /// Parses the configuration strings `"none"`, `"sl2"`, `"sl3"`, ...,
    /// `"cartan:sl2"`, ...
    pub fn parse(s: &str) -> Option<GFamily> {
        if s == "none" {
            return Some(GFamily::None);
        }
        let (cartan, rest) = match s.strip_prefix("cartan:") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let m: usize = rest.strip_prefix("sl")?.parse().ok()?;
        if m < 2 {
            return None;
        }
        Some(if cartan {
            GFamily::Cartan(m)
        } else {
            GFamily::Sl(m)
        })
    }
}

impl fmt::Display for GFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFamily::None => write!(f, "none"),
            GFamily::Sl(m) => write!(f, "sl{m}"),
            GFamily::Cartan(m) => write!(f, "cartan:sl{m}"),
        }
    }
}

/// A basis element of sl_m, in the order the basis is enumerated:
/// all off-diagonal matrix units first (lexicographic), then the simple
/// coroots h_i = E_ii - E_{i+1,i+1}.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlBasisElement {
    /// Matrix unit E_{i,j}, i != j.
    OffDiagonal(usize, usize),
    /// h_i = E_{i,i} - E_{i+1,i+1}.
    Coroot(usize),
}

/// Structure constants and bilinear form of the coefficient algebra on a
/// fixed ordered basis.
#[derive(Clone)]
pub struct SimpleAlgebraSpec {
    family: GFamily,
    dim: usize,
    /// Dense defining matrices, one per basis element (m x m).
    defining: Vec<QMatrix>,
    /// brackets[a][b] = coefficients of [x_a, x_b] in the basis.
    brackets: Vec<Vec<Vec<Scalar>>>,
    /// form[a][b] = (x_a | x_b), the trace form.
    form: Vec<Vec<Scalar>>,
}

impl SimpleAlgebraSpec {
    pub fn new(family: GFamily) -> Self {
        match family {
            GFamily::None => SimpleAlgebraSpec {
                family,
                dim: 0,
                defining: Vec::new(),
                brackets: Vec::new(),
                form: Vec::new(),
            },
            GFamily::Sl(m) => Self::from_matrices(family, sl_basis_matrices(m)),
            GFamily::Cartan(m) => {
                let all = sl_basis_matrices(m);
                // keep only the coroots (the trailing m-1 entries)
                let cartan = all[m * (m - 1)..].to_vec();
                Self::from_matrices(family, cartan)
            }
        }
    }

    fn from_matrices(family: GFamily, defining: Vec<QMatrix>) -> Self {
        let dim = defining.len();
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        let mut form = vec![vec![Scalar::zero(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let comm = defining[a]
                    .mul(&defining[b])
                    .sub(&defining[b].mul(&defining[a]));
                brackets[a][b] = expand_in_basis(&comm, &defining);
                form[a][b] = trace(&defining[a].mul(&defining[b]));
            }
        }
        SimpleAlgebraSpec {
            family,
            dim,
            defining,
            brackets,
            form,
        }
    }

    pub fn family(&self) -> GFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the matrices in the defining representation.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            GFamily::None => 0,
            GFamily::Sl(m) | GFamily::Cartan(m) => m,
        }
    }

    pub fn defining_matrix(&self, a: usize) -> &QMatrix {
        &self.defining[a]
    }

    /// Coefficients of [x_a, x_b] in the fixed basis.
    pub fn bracket(&self, a: usize, b: usize) -> &[Scalar] {
        &self.brackets[a][b]
    }

    /// The invariant form (x_a | x_b).
    pub fn form(&self, a: usize, b: usize) -> &Scalar {
        &self.form[a][b]
    }

    /// Index of E_{i,j} (i != j) in the sl_m basis order.
    pub fn offdiag_index(&self, i: usize, j: usize) -> Option<usize> {
        let GFamily::Sl(m) = self.family else {
            return None;
        };
        if i == j || i >= m || j >= m {
            return None;
        }
        // lexicographic over pairs (i, j), i != j
        let mut idx = 0;
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                if (a, b) == (i, j) {
                    return Some(idx);
                }
                idx += 1;
            }
        }
        None
    }

    /// Index of h_i in the basis order (sl or cartan family).
    pub fn coroot_index(&self, i: usize) -> Option<usize> {
        match self.family {
            GFamily::Sl(m) if i + 1 < m => Some(m * (m - 1) + i),
            GFamily::Cartan(m) if i + 1 < m => Some(i),
            _ => None,
        }
    }

    pub fn describe(&self, a: usize) -> SlBasisElement {
        match self.family {
            GFamily::None => panic!("empty algebra has no basis"),
            GFamily::Sl(m) => {
                if a < m * (m - 1) {
                    let mut idx = 0;
                    for i in 0..m {
                        for j in 0..m {
                            if i != j {
                                if idx == a {
                                    return SlBasisElement::OffDiagonal(i, j);
                                }
                                idx += 1;
                            }
                        }
                    }
                    unreachable!()
                } else {
                    SlBasisElement::Coroot(a - m * (m - 1))
                }
            }
            GFamily::Cartan(_) => SlBasisElement::Coroot(a),
        }
    }
}

fn trace(m: &QMatrix) -> Scalar {
    (0..m.rows()).map(|i| m.get(i, i).clone()).sum()
}

/// Defining matrices of the sl_m basis: off-diagonal units then coroots.
fn sl_basis_matrices(m: usize) -> Vec<QMatrix> {
    assert!(m >= 2);
    let mut out = Vec::with_capacity(m * m - 1);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = QMatrix::zeros(m, m);
                e.set(i, j, Scalar::one());
                out.push(e);
            }
        }
    }
    for i in 0..m - 1 {
        let mut h = QMatrix::zeros(m, m);
        h.set(i, i, Scalar::one());
        h.set(i + 1, i + 1, Scalar::from_int(-1));
        out.push(h);
    }
    out
}

/// Expands a traceless matrix in the given basis (off-diagonal entries map
/// to matrix units; the diagonal expands in the coroots by partial sums).
fn expand_in_basis(x: &QMatrix, basis: &[QMatrix]) -> Vec<Scalar> {
    // Solve x = sum c_a basis[a] as a linear system over the matrix entries.
    // The bases used here are small, so direct solving is cheap and avoids
    // special-casing the cartan-only family.
    let m = x.rows();
    let system = QMatrix::from_fn(m * m, basis.len(), |entry, a| {
        basis[a].get(entry / m, entry % m).clone()
    });
    let rhs: Vec<Scalar> = (0..m * m).map(|e| x.get(e / m, e % m).clone()).collect();
    system
        .solve(&rhs)
        .expect("commutator must lie in the span of the basis")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_structure_constants() {
        let g = SimpleAlgebraSpec::new(GFamily::Sl(2));
        assert_eq!(g.dim(), 3);
        let e = g.offdiag_index(0, 1).unwrap();
        let f = g.offdiag_index(1, 0).unwrap();
        let h = g.coroot_index(0).unwrap();
        // [e, f] = h
        let ef = g.bracket(e, f);
        assert!(ef[e].is_zero() && ef[f].is_zero());
        assert_eq!(ef[h], Scalar::one());
        // [h, e] = 2e
        let he = g.bracket(h, e);
        assert_eq!(he[e], Scalar::from_int(2));
        // trace form: (e|f) = 1, (h|h) = 2, (e|e) = 0
        assert_eq!(*g.form(e, f), Scalar::one());
        assert_eq!(*g.form(h, h), Scalar::from_int(2));
        assert!(g.form(e, e).is_zero());
    }

    #[test]
    fn jacobi_and_form_associativity_on_basis() {
        for fam in [GFamily::Sl(2), GFamily::Sl(3), GFamily::Cartan(2)] {
            let g = SimpleAlgebraSpec::new(fam);
            let d = g.dim();
            let bracket_elems = |coeffs: &[Scalar], b: usize| -> Vec<Scalar> {
                // [sum_a coeffs_a x_a, x_b]
                let mut out = vec![Scalar::zero(); d];
                for (a, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (t, v) in g.bracket(a, b).iter().enumerate() {
                        out[t] = out[t].clone() + &(c * v);
                    }
                }
                out
            };
            for a in 0..d {
                for b in 0..d {
                    // antisymmetry
                    let ab = g.bracket(a, b).to_vec();
                    let ba = g.bracket(b, a);
                    for t in 0..d {
                        assert!((ab[t].clone() + &ba[t]).is_zero());
                    }
                    for c in 0..d {
                        // Jacobi: [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
                        let mut total = bracket_elems(&ab, c);
                        let bc = bracket_elems(g.bracket(b, c), a);
                        let ca = bracket_elems(g.bracket(c, a), b);
                        for t in 0..d {
                            total[t] = total[t].clone() + &bc[t] + &ca[t];
                            assert!(total[t].is_zero(), "jacobi fails for {fam:?}");
                        }
                        // associativity: ([a,b]|c) = (a|[b,c])
                        let lhs: Scalar = ab
                            .iter()
                            .enumerate()
                            .map(|(t, v)| v * g.form(t, c))
                            .sum();
                        let rhs: Scalar = g
                            .bracket(b, c)
                            .iter()
                            .enumerate()
                            .map(|(t, v)| g.form(a, t) * v)
                            .sum();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn form_is_nondegenerate() {
        for fam in [GFamily::Sl(2), GFamily::Sl(3), GFamily::Cartan(3)] {
            let g = SimpleAlgebraSpec::new(fam);
            let gram = QMatrix::from_fn(g.dim(), g.dim(), |a, b| g.form(a, b).clone());
            assert_eq!(gram.rank(), g.dim(), "degenerate form for {fam:?}");
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!(GFamily::parse("none"), Some(GFamily::None));
        assert_eq!(GFamily::parse("sl2"), Some(GFamily::Sl(2)));
        assert_eq!(GFamily::parse("sl10"), Some(GFamily::Sl(10)));
        assert_eq!(GFamily::parse("cartan:sl2"), Some(GFamily::Cartan(2)));
        assert_eq!(GFamily::parse("sl1"), None);
        assert_eq!(GFamily::parse("so3"), None);
    }
}
