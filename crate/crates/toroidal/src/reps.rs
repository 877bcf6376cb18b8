//! Finite-dimensional representations that seed the tensor modules:
//! the standard representation, exterior powers, trace twists from sl_m to
//! gl_m, and cyclic highest-weight constructions for dominant integral
//! weights.
//!
//! A representation is stored concretely as one exact matrix per generator.
//! For gl_m the generators are all matrix units E_{j,i}; for a coefficient
//! algebra they follow the basis order of [`SimpleAlgebraSpec`]. Basis
//! ordering inside wedge and tensor spaces is lexicographic on index tuples
//! so that serialized matrices are reproducible byte for byte.

use crate::error::Error;
use crate::linalg::{QMatrix, SpanBuilder};
use crate::scalar::Scalar;
use crate::simple::{GFamily, SimpleAlgebraSpec};

/// Dominant integral weight written in fundamental-weight coordinates,
/// together with the identity scalar for gl representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightLabel {
    pub entries: Vec<i64>,
    pub trace: Option<Scalar>,
}

impl WeightLabel {
    pub fn dominant(entries: Vec<i64>) -> Result<Self, Error> {
        if let Some(index) = entries.iter().position(|&e| e < 0) {
            return Err(Error::NotDominant { index });
        }
        Ok(WeightLabel {
            entries,
            trace: None,
        })
    }

    pub fn with_trace(mut self, c: Scalar) -> Self {
        self.trace = Some(c);
        self
    }

    pub fn is_zero_weight(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// True when the entries single out the k-th fundamental weight
    /// (k = 0 means the zero weight).
    pub fn is_fundamental(&self, k: usize) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, &e)| e == i64::from(i + 1 == k))
    }
}

/// Generator matrices of a representation.
#[derive(Clone, Debug)]
pub enum Generators {
    /// All matrix units of gl_m; `e[j * m + i]` is the image of E_{j,i}.
    Gl { m: usize, e: Vec<QMatrix> },
    /// One matrix per basis element of the coefficient algebra.
    OfG {
        family: GFamily,
        basis: Vec<QMatrix>,
    },
}

/// A finite-dimensional representation given by exact generator matrices.
#[derive(Clone, Debug)]
pub struct Irrep {
    dim: usize,
    gens: Generators,
    label: Option<WeightLabel>,
}

impl Irrep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Option<&WeightLabel> {
        self.label.as_ref()
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn is_gl(&self) -> bool {
        matches!(self.gens, Generators::Gl { .. })
    }

    /// Size `m` of the underlying gl_m, if this is a gl representation.
    pub fn gl_size(&self) -> Option<usize> {
        match &self.gens {
            Generators::Gl { m, .. } => Some(*m),
            Generators::OfG { .. } => None,
        }
    }

    /// Image of the matrix unit E_{j,i}.
    pub fn e(&self, j: usize, i: usize) -> &QMatrix {
        match &self.gens {
            Generators::Gl { m, e } => &e[j * m + i],
            Generators::OfG { .. } => panic!("not a gl representation"),
        }
    }

    /// Image of the a-th basis element of the coefficient algebra.
    pub fn g_basis(&self, a: usize) -> &QMatrix {
        match &self.gens {
            Generators::OfG { basis, .. } => &basis[a],
            Generators::Gl { .. } => panic!("not a coefficient-algebra representation"),
        }
    }

    pub fn g_family(&self) -> Option<GFamily> {
        match &self.gens {
            Generators::OfG { family, .. } => Some(*family),
            Generators::Gl { .. } => None,
        }
    }

    /// The scalar by which the identity sum E_00 + ... acts, if it acts as
    /// a scalar at all.
    pub fn identity_scalar(&self) -> Option<Scalar> {
        let Generators::Gl { m, .. } = &self.gens else {
            return None;
        };
        let mut total = QMatrix::zeros(self.dim, self.dim);
        for i in 0..*m {
            total = total.add(self.e(i, i));
        }
        let c = total.get(0, 0).clone();
        let expected = QMatrix::identity(self.dim).scale(&c);
        (total == expected).then_some(c)
    }

    /// The trivial one-dimensional representation.
    pub fn trivial_of_g(family: GFamily) -> Self {
        let g = SimpleAlgebraSpec::new(family);
        Irrep {
            dim: 1,
            gens: Generators::OfG {
                family,
                basis: vec![QMatrix::zeros(1, 1); g.dim()],
            },
            label: Some(WeightLabel {
                entries: vec![0; g.dim().min(g.matrix_size().saturating_sub(1))],
                trace: None,
            }),
        }
    }

    /// One-dimensional character of an abelian (Cartan) family.
    pub fn character(family: GFamily, values: Vec<Scalar>) -> Result<Self, Error> {
        let g = SimpleAlgebraSpec::new(family);
        if !matches!(family, GFamily::Cartan(_)) || values.len() != g.dim() {
            return Err(Error::InvalidIrrep(
                "character representations need a Cartan family and one value per coroot".into(),
            ));
        }
        let basis = values
            .into_iter()
            .map(|v| {
                let mut m = QMatrix::zeros(1, 1);
                m.set(0, 0, v);
                m
            })
            .collect();
        Ok(Irrep {
            dim: 1,
            gens: Generators::OfG { family, basis },
            label: None,
        })
    }

    pub fn from_parts(dim: usize, gens: Generators, label: Option<WeightLabel>) -> Self {
        Irrep { dim, gens, label }
    }

    /// Checks the defining commutation relations, the identity scalar and
    /// (when a label is present) the highest-weight data.
    pub fn validate(&self) -> Result<(), Error> {
        match &self.gens {
            Generators::Gl { m, e } => {
                let m = *m;
                if e.len() != m * m {
                    return Err(Error::InvalidIrrep("wrong number of gl generators".into()));
                }
                for mat in e {
                    if mat.rows() != self.dim || mat.cols() != self.dim {
                        return Err(Error::InvalidIrrep("generator of wrong size".into()));
                    }
                }
                // [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
                for a in 0..m {
                    for b in 0..m {
                        for c in 0..m {
                            for d in 0..m {
                                let lhs = self
                                    .e(a, b)
                                    .mul(self.e(c, d))
                                    .sub(&self.e(c, d).mul(self.e(a, b)));
                                let mut rhs = QMatrix::zeros(self.dim, self.dim);
                                if b == c {
                                    rhs = rhs.add(self.e(a, d));
                                }
                                if d == a {
                                    rhs = rhs.sub(self.e(c, b));
                                }
                                if lhs != rhs {
                                    return Err(Error::InvalidIrrep(format!(
                                        "commutation fails at E({a},{b}), E({c},{d})"
                                    )));
                                }
                            }
                        }
                    }
                }
                if self.identity_scalar().is_none() {
                    return Err(Error::InvalidIrrep(
                        "identity does not act by a scalar".into(),
                    ));
                }
                if let Some(label) = &self.label {
                    if let Some(c) = &label.trace {
                        if self.identity_scalar().as_ref() != Some(c) {
                            return Err(Error::InvalidIrrep("identity scalar mismatch".into()));
                        }
                    }
                    self.check_highest_weight(label)?;
                }
                Ok(())
            }
            Generators::OfG { family, basis } => {
                let g = SimpleAlgebraSpec::new(*family);
                if basis.len() != g.dim() {
                    return Err(Error::InvalidIrrep(
                        "wrong number of coefficient-algebra generators".into(),
                    ));
                }
                for a in 0..g.dim() {
                    for b in 0..g.dim() {
                        let lhs = basis[a].mul(&basis[b]).sub(&basis[b].mul(&basis[a]));
                        let mut rhs = QMatrix::zeros(self.dim, self.dim);
                        for (t, c) in g.bracket(a, b).iter().enumerate() {
                            if !c.is_zero() {
                                rhs = rhs.add(&basis[t].scale(c));
                            }
                        }
                        if lhs != rhs {
                            return Err(Error::InvalidIrrep(format!(
                                "structure constants fail at basis pair ({a},{b})"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn check_highest_weight(&self, label: &WeightLabel) -> Result<(), Error> {
        let Generators::Gl { m, .. } = &self.gens else {
            return Ok(());
        };
        let m = *m;
        // joint kernel of the raising operators E_{i,j}, i < j
        let mut stacked: Option<QMatrix> = None;
        for i in 0..m {
            for j in (i + 1)..m {
                let g = self.e(i, j).clone();
                stacked = Some(match stacked {
                    None => g,
                    Some(s) => s.vstack(&g),
                });
            }
        }
        let kernel = match stacked {
            Some(s) => s.kernel_basis(),
            None => vec![vec![Scalar::one()]], // gl_1 has no raising operators
        };
        if kernel.is_empty() {
            return Err(Error::InvalidIrrep("no highest-weight vector".into()));
        }
        // some kernel vector must have the labelled coroot eigenvalues
        'vectors: for v in &kernel {
            for (idx, &coeff) in label.entries.iter().enumerate() {
                let h = self.e(idx, idx).sub(self.e(idx + 1, idx + 1));
                let hv = h.mul_vec(v);
                let scaled: Vec<Scalar> = v
                    .iter()
                    .map(|x| x * &Scalar::from_int(coeff))
                    .collect();
                if hv != scaled {
                    continue 'vectors;
                }
            }
            return Ok(());
        }
        Err(Error::InvalidIrrep(
            "no highest-weight vector matches the label".into(),
        ))
    }

    /// Dimension of the commutant of the generator set, by exact linear
    /// solve. Equals 1 exactly when the representation is irreducible.
    pub fn commutant_dimension(&self) -> usize {
        let d = self.dim;
        let mats: Vec<&QMatrix> = match &self.gens {
            Generators::Gl { e, .. } => e.iter().collect(),
            Generators::OfG { basis, .. } => basis.iter().collect(),
        };
        if mats.is_empty() {
            return d * d; // empty algebra: everything commutes
        }
        // unknowns: entries of M (row-major); equations: M X - X M = 0
        let mut rows = Vec::new();
        for x in mats {
            for i in 0..d {
                for j in 0..d {
                    let mut row = vec![Scalar::zero(); d * d];
                    // (M X)_{ij} = sum_k M_{ik} X_{kj}; (X M)_{ij} = sum_k X_{ik} M_{kj}
                    for k in 0..d {
                        row[i * d + k] = row[i * d + k].clone() + x.get(k, j);
                        row[k * d + j] = row[k * d + j].clone() - x.get(i, k);
                    }
                    rows.push(row);
                }
            }
        }
        QMatrix::from_rows(rows).kernel_basis().len()
    }
}

/// The standard representation of gl_m on column vectors:
/// `E_{j,i} e_k = delta_{ik} e_j`.
pub fn standard_rep(m: usize) -> Irrep {
    assert!(m >= 2, "standard representation needs m >= 2");
    let mut e = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            let mut mat = QMatrix::zeros(m, m);
            mat.set(j, i, Scalar::one());
            e.push(mat);
        }
    }
    let mut entries = vec![0; m - 1];
    entries[0] = 1;
    Irrep {
        dim: m,
        gens: Generators::Gl { m, e },
        label: Some(WeightLabel {
            entries,
            trace: Some(Scalar::one()),
        }),
    }
}

/// All k-subsets of 0..m in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..m {
            acc.push(i);
            rec(i + 1, m, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (m - i) / (i + 1);
    }
    r
}

/// Derivation action of a matrix on the wedge basis of k-subsets.
fn wedge_matrix(x: &QMatrix, subs: &[Vec<usize>]) -> QMatrix {
    let dim = subs.len();
    let index_of = |s: &[usize]| subs.binary_search_by(|probe| probe.as_slice().cmp(s)).ok();
    let mut out = QMatrix::zeros(dim, dim);
    for (col, s) in subs.iter().enumerate() {
        for (pos, &sp) in s.iter().enumerate() {
            for t in 0..x.rows() {
                let c = x.get(t, sp);
                if c.is_zero() {
                    continue;
                }
                if t != sp && s.contains(&t) {
                    continue; // repeated factor wedges to zero
                }
                let mut replaced = s.clone();
                replaced[pos] = t;
                // sort and count transpositions for the sign
                let mut sign = 1i64;
                let mut sorted = replaced.clone();
                for a in 0..sorted.len() {
                    for b in (a + 1)..sorted.len() {
                        if sorted[a] > sorted[b] {
                            sorted.swap(a, b);
                            sign = -sign;
                        }
                    }
                }
                let row = index_of(&sorted).expect("sorted subset must exist");
                let add = c * &Scalar::from_int(sign);
                let v = out.get(row, col).clone() + add;
                out.set(row, col, v);
            }
        }
    }
    out
}

/// k-fold exterior power of a representation; generators act by
/// derivations on wedge monomials.
pub fn exterior_power(rep: &Irrep, k: usize) -> Result<Irrep, Error> {
    if k > rep.dim() {
        return Err(Error::ExteriorDegree { k, dim: rep.dim() });
    }
    let subs = subsets(rep.dim(), k);
    let dim = subs.len();
    debug_assert_eq!(dim, binomial(rep.dim(), k));
    let map_all = |mats: &[QMatrix]| -> Vec<QMatrix> {
        mats.iter().map(|x| wedge_matrix(x, &subs)).collect()
    };
    let (gens, label) = match &rep.gens {
        Generators::Gl { m, e } => {
            let label = if rep.label.as_ref().is_some_and(|l| {
                l.is_fundamental(1) && l.trace.as_ref().is_some_and(Scalar::is_one)
            }) {
                // exterior powers of the standard representation carry the
                // k-th fundamental weight with identity scalar k
                let mut entries = vec![0; m - 1];
                if k >= 1 && k <= m - 1 {
                    entries[k - 1] = 1;
                }
                Some(WeightLabel {
                    entries,
                    trace: Some(Scalar::from_int(k as i64)),
                })
            } else {
                None
            };
            (
                Generators::Gl {
                    m: *m,
                    e: map_all(e),
                },
                label,
            )
        }
        Generators::OfG { family, basis } => (
            Generators::OfG {
                family: *family,
                basis: map_all(basis),
            },
            None,
        ),
    };
    Ok(Irrep { dim, gens, label })
}

/// Extends an sl_m representation to gl_m so that the identity acts by `c`:
/// E acts by `rho(E - (tr E / m) Id) + c (tr E / m) Id`.
pub fn trace_twist(rep: &Irrep, c: Scalar) -> Result<Irrep, Error> {
    let Generators::OfG { family, basis } = &rep.gens else {
        return Err(Error::InvalidIrrep("trace twist expects an sl input".into()));
    };
    let GFamily::Sl(m) = family else {
        return Err(Error::InvalidIrrep("trace twist expects an sl input".into()));
    };
    let m = *m;
    let g = SimpleAlgebraSpec::new(GFamily::Sl(m));
    let dim = rep.dim();
    let mut e = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            if j != i {
                e.push(basis[g.offdiag_index(j, i).unwrap()].clone());
            } else {
                // E_ii - (1/m) Id = sum_p gamma_p h_p with partial sums
                // gamma_p = [p >= i] - (p+1)/m
                let mut mat = QMatrix::zeros(dim, dim);
                for p in 0..m - 1 {
                    let gamma = Scalar::from_int(i64::from(p >= i))
                        - Scalar::ratio((p + 1) as i64, m as i64);
                    if !gamma.is_zero() {
                        mat = mat.add(&basis[g.coroot_index(p).unwrap()].scale(&gamma));
                    }
                }
                let shift = c.clone() / Scalar::from_int(m as i64);
                mat = mat.add(&QMatrix::identity(dim).scale(&shift));
                e.push(mat);
            }
        }
    }
    let label = rep.label.clone().map(|l| l.with_trace(c.clone()));
    Ok(Irrep {
        dim,
        gens: Generators::Gl { m, e },
        label,
    })
}

/// Restriction of an sl_m representation to the chosen basis, from gl data.
pub fn restrict_to_sl(rep: &Irrep) -> Result<Irrep, Error> {
    let Generators::Gl { m, .. } = &rep.gens else {
        return Err(Error::InvalidIrrep("restriction expects a gl input".into()));
    };
    let m = *m;
    if m < 2 {
        return Err(Error::InvalidIrrep("restriction needs m >= 2".into()));
    }
    let g = SimpleAlgebraSpec::new(GFamily::Sl(m));
    let mut basis = Vec::with_capacity(g.dim());
    for a in 0..g.dim() {
        let mat = match g.describe(a) {
            crate::simple::SlBasisElement::OffDiagonal(i, j) => rep.e(i, j).clone(),
            crate::simple::SlBasisElement::Coroot(i) => rep.e(i, i).sub(rep.e(i + 1, i + 1)),
        };
        basis.push(mat);
    }
    let label = rep.label.clone().map(|mut l| {
        l.trace = None;
        l
    });
    Ok(Irrep {
        dim: rep.dim(),
        gens: Generators::OfG {
            family: GFamily::Sl(m),
            basis,
        },
        label,
    })
}

/// The gl_m module V(c, lambda): the highest-weight sl_m module extended so
/// that the identity acts by `c`. Handles m = 1, where only the scalar
/// remains.
pub fn gl_irrep(m: usize, entries: Vec<i64>, c: Scalar) -> Result<Irrep, Error> {
    if m == 0 {
        return Err(Error::InvalidIrrep("gl_0 has no representations".into()));
    }
    if entries.len() + 1 != m {
        return Err(Error::InvalidIrrep(format!(
            "weight label for gl_{m} needs {} entries, got {}",
            m - 1,
            entries.len()
        )));
    }
    if m == 1 {
        let mut mat = QMatrix::zeros(1, 1);
        mat.set(0, 0, c.clone());
        return Ok(Irrep {
            dim: 1,
            gens: Generators::Gl { m: 1, e: vec![mat] },
            label: Some(WeightLabel {
                entries,
                trace: Some(c),
            }),
        });
    }
    let label = WeightLabel::dominant(entries)?;
    let sl = highest_weight_irrep(&label, GFamily::Sl(m))?;
    trace_twist(&sl, c)
}

/// Cyclic highest-weight construction: the span of the product of highest
/// vectors inside a tensor product of fundamental representations, closed
/// under the simple lowering operators, with generators restricted to the
/// resulting basis by exact solves.
pub fn highest_weight_irrep(label: &WeightLabel, family: GFamily) -> Result<Irrep, Error> {
    if let Some(index) = label.entries.iter().position(|&e| e < 0) {
        return Err(Error::NotDominant { index });
    }
    let GFamily::Sl(m) = family else {
        if label.is_zero_weight() {
            return Ok(Irrep::trivial_of_g(family));
        }
        return Err(Error::InvalidIrrep(
            "highest-weight construction needs an sl family".into(),
        ));
    };
    if label.entries.len() != m - 1 {
        return Err(Error::InvalidIrrep(format!(
            "weight label for sl_{m} needs {} entries, got {}",
            m - 1,
            label.entries.len()
        )));
    }
    let g = SimpleAlgebraSpec::new(GFamily::Sl(m));
    if label.is_zero_weight() {
        return Ok(Irrep::trivial_of_g(GFamily::Sl(m)));
    }

    // factor list: the k-th fundamental representation repeated lambda_k times
    let std_matrices: Vec<QMatrix> = (0..g.dim()).map(|a| g.defining_matrix(a).clone()).collect();
    let mut factor_gens: Vec<Vec<QMatrix>> = Vec::new(); // [factor][basis elem]
    let mut factor_dims: Vec<usize> = Vec::new();
    for (idx, &mult) in label.entries.iter().enumerate() {
        let k = idx + 1;
        if mult == 0 {
            continue;
        }
        let subs = subsets(m, k);
        let gens: Vec<QMatrix> = std_matrices.iter().map(|x| wedge_matrix(x, &subs)).collect();
        for _ in 0..mult {
            factor_gens.push(gens.clone());
            factor_dims.push(subs.len());
        }
    }
    let ambient: usize = factor_dims.iter().product();

    // derivation action over the tensor factors
    let apply = |a: usize, v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); ambient];
        for (flat, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // decode the index tuple (row-major)
            let mut tuple = vec![0usize; factor_dims.len()];
            let mut rest = flat;
            for f in (0..factor_dims.len()).rev() {
                tuple[f] = rest % factor_dims[f];
                rest /= factor_dims[f];
            }
            for f in 0..factor_dims.len() {
                let mat = &factor_gens[f][a];
                for row in 0..factor_dims[f] {
                    let entry = mat.get(row, tuple[f]);
                    if entry.is_zero() {
                        continue;
                    }
                    let mut image = tuple.clone();
                    image[f] = row;
                    let mut idx = 0usize;
                    for (t, d) in image.iter().zip(&factor_dims) {
                        idx = idx * d + t;
                    }
                    out[idx] = out[idx].clone() + &(c * entry);
                }
            }
        }
        out
    };

    // highest vector: product of the lexicographically first wedge basis
    // vectors, which is index 0 in every factor
    let mut top = vec![Scalar::zero(); ambient];
    top[0] = Scalar::one();

    // close under the simple lowering operators E_{i+1,i}
    let lowering: Vec<usize> = (0..m - 1)
        .map(|i| g.offdiag_index(i + 1, i).unwrap())
        .collect();
    let mut span = SpanBuilder::new(ambient);
    span.insert(top.clone());
    let mut queue = vec![top];
    while let Some(v) = queue.pop() {
        for &low in &lowering {
            let w = apply(low, &v);
            if span.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    let dim = span.dim();
    let basis: Vec<Vec<Scalar>> = span.basis().to_vec();

    // restrict every generator to the span
    let span_matrix = QMatrix::from_fn(ambient, dim, |i, j| basis[j][i].clone());
    let mut restricted = Vec::with_capacity(g.dim());
    for a in 0..g.dim() {
        let mut mat = QMatrix::zeros(dim, dim);
        for (col, b) in basis.iter().enumerate() {
            let image = apply(a, b);
            let coords = span_matrix
                .solve(&image)
                .expect("the cyclic span is invariant");
            for (row, c) in coords.into_iter().enumerate() {
                mat.set(row, col, c);
            }
        }
        restricted.push(mat);
    }
    Ok(Irrep {
        dim,
        gens: Generators::OfG {
            family: GFamily::Sl(m),
            basis: restricted,
        },
        label: Some(label.clone()),
    })
}
