//! Windowed generalized Verma modules over the t_0-triangular decomposition.
//!
//! The module induced from a degree-zero module X (with the positive part
//! acting by zero) is spanned, per PBW, by ordered monomials in the
//! negative-part generators applied to X. Its weight spaces are
//! infinite-dimensional below the top, so every computation here is
//! truncated to a window — a maximal t_0-depth, a lattice radius for
//! generator and X offsets — and every report carries that window. The
//! radical is computed per weight by depth recursion on the raising
//! conditions, followed by an iterated degree-zero stabilization; quotient
//! dimensions per weight estimate the multiplicities of the irreducible
//! quotient from below, refining as the radius grows.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{bracket, AlgebraConfig, AlgebraElement, BasisSymbol};
use crate::error::Error;
use crate::lattice::{window, MultiIndex};
use crate::linalg::SpanBuilder;
use crate::scalar::Scalar;
use crate::subalg::LatticeAutomorphism;
use crate::tensor::{act, Flavor, ModuleVector, TensorModuleConfig};

/// The inducing degree-zero module.
#[derive(Clone, Debug)]
pub enum XModule {
    /// The one-dimensional trivial module.
    Trivial { n: usize },
    /// A degree-zero tensor module (level pair, gl_n factor, base point).
    Tensor(TensorModuleConfig),
}

impl XModule {
    pub fn n(&self) -> usize {
        match self {
            XModule::Trivial { n } => *n,
            XModule::Tensor(cfg) => cfg.n(),
        }
    }

    pub fn alpha(&self) -> Vec<Scalar> {
        match self {
            XModule::Trivial { n } => vec![Scalar::zero(); *n],
            XModule::Tensor(cfg) => cfg.alpha().to_vec(),
        }
    }

    /// The scalar by which d_0 acts on X.
    pub fn level_b(&self) -> Scalar {
        match self {
            XModule::Trivial { .. } => Scalar::zero(),
            XModule::Tensor(cfg) => match cfg.flavor() {
                Flavor::DegreeZero { b, .. } => b.clone(),
                Flavor::Full => unreachable!("X is always a degree-zero module"),
            },
        }
    }

    fn fiber_pairs(&self) -> Vec<(usize, usize)> {
        match self {
            XModule::Trivial { .. } => vec![(0, 0)],
            XModule::Tensor(cfg) => {
                let mut out = Vec::new();
                for v1 in 0..cfg.v1().dim() {
                    for v2 in 0..cfg.v2().dim() {
                        out.push((v1, v2));
                    }
                }
                out
            }
        }
    }

    fn offsets(&self, radius: i64) -> Vec<MultiIndex> {
        match self {
            XModule::Trivial { n } => vec![MultiIndex::zero(*n)],
            XModule::Tensor(_) => window(self.n(), radius).collect(),
        }
    }

    /// Degree-zero action on an X vector. The trivial module absorbs
    /// everything to zero (but still rejects elements of nonzero
    /// t_0-degree, which cannot act here at all).
    fn act(&self, a: &AlgebraElement, v: &ModuleVector) -> Result<ModuleVector, Error> {
        match self {
            XModule::Trivial { n } => {
                for (sym, _) in a.terms() {
                    if sym.degree()[0] != 0 {
                        return Err(Error::FlavorMismatch(format!(
                            "symbol {sym} has nonzero t0-degree"
                        )));
                    }
                }
                Ok(ModuleVector::zero(*n))
            }
            XModule::Tensor(cfg) => act(a, v, cfg),
        }
    }
}

/// Truncation parameters of the windowed module.
#[derive(Clone, Copy, Debug)]
pub struct VermaWindow {
    /// Maximal t_0-depth of the spanning monomials (>= 1).
    pub depth_max: usize,
    /// Box radius for generator lattice offsets and X offsets.
    pub radius: i64,
    /// Cap on spanning vectors per (depth, weight) layer; excess is
    /// dropped and the layer flagged as saturated.
    pub cap_per_layer: usize,
    /// Cap on stabilization rounds.
    pub iteration_cap: usize,
}

impl VermaWindow {
    pub fn new(depth_max: usize, radius: i64) -> Self {
        assert!(depth_max >= 1 && radius >= 1);
        VermaWindow {
            depth_max,
            radius,
            cap_per_layer: 100_000,
            iteration_cap: 32,
        }
    }
}

/// PBW sort key: depth first, then lattice degree, then symbol kind and
/// inner index. Monomials are kept non-decreasing in this key.
fn pbw_key(sym: &BasisSymbol) -> (i64, Vec<i64>, u8, usize) {
    let degree = sym.degree();
    let depth = -degree[0];
    let (kind, idx) = match sym {
        BasisSymbol::G { x, .. } => (0u8, *x),
        BasisSymbol::K { i, .. } => (1, *i),
        BasisSymbol::D { i, .. } => (2, *i),
    };
    (depth, degree.entries().to_vec(), kind, idx)
}

type Monomial = Vec<BasisSymbol>;
type VKey = (Monomial, (usize, usize, MultiIndex));

/// A vector of the induced module in PBW normal form: ordered negative
/// monomials applied to X basis vectors.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VermaVec {
    terms: BTreeMap<VKey, Scalar>,
}

impl VermaVec {
    pub fn zero() -> Self {
        VermaVec::default()
    }

    pub fn add_term(&mut self, key: VKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &VermaVec, c: &Scalar) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VKey, &Scalar)> {
        self.terms.iter()
    }
}

fn depth_of_monomial(mono: &[BasisSymbol]) -> usize {
    mono.iter().map(|s| (-s.degree()[0]) as usize).sum()
}

fn weight_offset(mono: &[BasisSymbol], r: &MultiIndex) -> MultiIndex {
    let mut w = r.clone();
    for s in mono {
        w = &w + &s.degree().tail();
    }
    w
}

/// Computation context: the ambient algebra and the inducing module.
pub struct VermaContext<'a> {
    pub algebra: &'a AlgebraConfig,
    pub x: &'a XModule,
}

impl VermaContext<'_> {
    /// Straightens `y . (monomial terms)` into PBW form. `y` is a
    /// negative-part symbol; the X slot rides along untouched.
    fn insert_symbol(&self, y: &BasisSymbol, v: &VermaVec) -> Result<VermaVec, Error> {
        let mut out = VermaVec::zero();
        for ((mono, xkey), c) in v.terms() {
            let frags = self.insert_into_monomial(y, mono)?;
            for (m, cf) in frags {
                out.add_term((m, xkey.clone()), c * &cf);
            }
        }
        Ok(out)
    }

    fn insert_into_monomial(
        &self,
        y: &BasisSymbol,
        mono: &[BasisSymbol],
    ) -> Result<Vec<(Monomial, Scalar)>, Error> {
        if mono.is_empty() || pbw_key(y) <= pbw_key(&mono[0]) {
            let mut m = Vec::with_capacity(mono.len() + 1);
            m.push(y.clone());
            m.extend_from_slice(mono);
            return Ok(vec![(m, Scalar::one())]);
        }
        // y m_0 = m_0 y + [y, m_0]; the bracket has strictly larger depth,
        // so prepending m_0 preserves the ordering
        let head = &mono[0];
        let rest = &mono[1..];
        let mut out = Vec::new();
        for (m, c) in self.insert_into_monomial(y, rest)? {
            let mut with_head = Vec::with_capacity(m.len() + 1);
            with_head.push(head.clone());
            with_head.extend(m);
            out.push((with_head, c));
        }
        let br = bracket(
            &AlgebraElement::from_symbol(y.clone()),
            &AlgebraElement::from_symbol(head.clone()),
            self.algebra,
        )?;
        for (z, cz) in br.terms() {
            debug_assert!(z.degree()[0] < 0);
            for (m, c) in self.insert_into_monomial(z, rest)? {
                out.push((m, cz * &c));
            }
        }
        Ok(out)
    }

    /// Action of one algebra symbol on `monomial (x) x-vector`, recursively
    /// commuting the symbol down to X.
    fn act_symbol(
        &self,
        s: &BasisSymbol,
        mono: &[BasisSymbol],
        xkey: &(usize, usize, MultiIndex),
    ) -> Result<VermaVec, Error> {
        if mono.is_empty() {
            let mut out = VermaVec::zero();
            match s.degree()[0].signum() {
                1 => {} // the positive part annihilates X
                0 => {
                    let image = self.x.act(
                        &AlgebraElement::from_symbol(s.clone()),
                        &ModuleVector::basis(xkey.0, xkey.1, xkey.2.clone()),
                    )?;
                    for ((v1, v2, r), c) in image.terms() {
                        out.add_term((Vec::new(), (*v1, *v2, r.clone())), c.clone());
                    }
                }
                _ => {
                    out.add_term((vec![s.clone()], xkey.clone()), Scalar::one());
                }
            }
            Ok(out)
        } else {
            let head = &mono[0];
            let rest = &mono[1..];
            let mut out = VermaVec::zero();
            // [s, head] applied to the tail
            let br = bracket(
                &AlgebraElement::from_symbol(s.clone()),
                &AlgebraElement::from_symbol(head.clone()),
                self.algebra,
            )?;
            for (z, cz) in br.terms() {
                let part = self.act_symbol(z, rest, xkey)?;
                out.add_scaled(&part, cz);
            }
            // head . (s . tail)
            let tail = self.act_symbol(s, rest, xkey)?;
            let carried = self.insert_symbol(head, &tail)?;
            out.add_scaled(&carried, &Scalar::one());
            Ok(out)
        }
    }

    /// Full action of an algebra element on a PBW vector.
    pub fn act(&self, a: &AlgebraElement, v: &VermaVec) -> Result<VermaVec, Error> {
        let mut out = VermaVec::zero();
        for (s, cs) in a.terms() {
            for ((mono, xkey), cv) in v.terms() {
                let part = self.act_symbol(s, mono, xkey)?;
                out.add_scaled(&part, &(cs * cv));
            }
        }
        Ok(out)
    }
}

/// One graded layer of the windowed module.
#[derive(Clone, Debug)]
pub struct Layer {
    pub basis: Vec<VKey>,
    index: BTreeMap<VKey, usize>,
    /// Reduced spanning set of the radical, in layer coordinates.
    radical: Vec<Vec<Scalar>>,
    pub saturated: bool,
}

impl Layer {
    fn new(basis: Vec<VKey>, saturated: bool) -> Self {
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        Layer {
            basis,
            index,
            radical: Vec::new(),
            saturated,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn radical_dim(&self) -> usize {
        self.radical.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.dim() - self.radical.len()
    }

    fn radical_span(&self) -> SpanBuilder {
        let mut sp = SpanBuilder::new(self.dim());
        for v in &self.radical {
            sp.insert(v.clone());
        }
        sp
    }
}

/// The windowed module with its graded layers and radical data.
pub struct VermaState {
    pub algebra: AlgebraConfig,
    pub x: XModule,
    pub window: VermaWindow,
    pub layers: BTreeMap<(usize, MultiIndex), Layer>,
    /// Rounds the degree-zero stabilization took (None before it ran).
    pub stabilization_rounds: Option<usize>,
    /// True when the raising-only radical was already degree-zero stable.
    pub tau0_closure_was_automatic: bool,
}

/// Negative-part generator symbols of one depth, over the offset window.
fn lowering_generators(algebra: &AlgebraConfig, depth: usize, radius: i64) -> Vec<BasisSymbol> {
    let n = algebra.n();
    let mut out = Vec::new();
    for s in window(n, radius) {
        let degree = s.with_head(-(depth as i64));
        out.extend(crate::algebra::graded_component_basis(algebra, &degree));
    }
    out.sort_by_key(pbw_key);
    out
}

/// Raising symbols of one positive depth over the offset window.
fn raising_generators(algebra: &AlgebraConfig, depth: usize, radius: i64) -> Vec<BasisSymbol> {
    let n = algebra.n();
    let mut out = Vec::new();
    for u in window(n, radius) {
        let degree = u.with_head(depth as i64);
        out.extend(crate::algebra::graded_component_basis(algebra, &degree));
    }
    out
}

/// Degree-zero symbols over the offset window.
fn middle_generators(algebra: &AlgebraConfig, radius: i64) -> Vec<BasisSymbol> {
    let n = algebra.n();
    let mut out = Vec::new();
    for u in window(n, radius) {
        let degree = u.with_head(0);
        out.extend(crate::algebra::graded_component_basis(algebra, &degree));
    }
    out
}

fn monomials_of_depth(gens: &[BasisSymbol], target: usize) -> Vec<Monomial> {
    fn rec(
        gens: &[BasisSymbol],
        from: usize,
        remaining: usize,
        acc: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for i in from..gens.len() {
            let d = (-gens[i].degree()[0]) as usize;
            if d > remaining {
                continue;
            }
            acc.push(gens[i].clone());
            rec(gens, i, remaining - d, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Builds the windowed spanning layers of the induced module. PBW
/// monomials over distinct generator multisets are linearly independent,
/// so each layer's spanning list is already a basis.
pub fn build_verma(
    x: &XModule,
    w: VermaWindow,
    algebra: &AlgebraConfig,
) -> Result<VermaState, Error> {
    if algebra.n() != x.n() {
        return Err(Error::RankMismatch {
            expected: x.n() + 1,
            got: algebra.n() + 1,
        });
    }
    let mut gens: Vec<BasisSymbol> = Vec::new();
    for depth in 1..=w.depth_max {
        gens.extend(lowering_generators(algebra, depth, w.radius));
    }
    gens.sort_by_key(pbw_key);

    let fiber = x.fiber_pairs();
    let offsets = x.offsets(w.radius);

    let mut layers: BTreeMap<(usize, MultiIndex), Vec<VKey>> = BTreeMap::new();
    for depth in 0..=w.depth_max {
        for mono in monomials_of_depth(&gens, depth) {
            for r in &offsets {
                let wt = weight_offset(&mono, r);
                for &(v1, v2) in &fiber {
                    layers
                        .entry((depth, wt.clone()))
                        .or_default()
                        .push((mono.clone(), (v1, v2, r.clone())));
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (key, mut basis) in layers {
        basis.sort();
        let saturated = basis.len() > w.cap_per_layer;
        if saturated {
            basis.truncate(w.cap_per_layer);
        }
        out.insert(key, Layer::new(basis, saturated));
    }
    Ok(VermaState {
        algebra: algebra.clone(),
        x: x.clone(),
        window: w,
        layers: out,
        stabilization_rounds: None,
        tau0_closure_was_automatic: false,
    })
}

/// Expresses a module vector in the coordinates of a target layer.
/// Components over keys missing from the layer are returned separately;
/// they can never lie in the windowed radical.
fn split_by_layer(v: &VermaVec, layer: &Layer) -> (Vec<Scalar>, Vec<(VKey, Scalar)>) {
    let mut coords = vec![Scalar::zero(); layer.dim()];
    let mut ghosts = Vec::new();
    for (key, c) in v.terms() {
        match layer.index.get(key) {
            Some(&i) => coords[i] = c.clone(),
            None => ghosts.push((key.clone(), c.clone())),
        }
    }
    (coords, ghosts)
}

impl VermaState {
    pub fn context(&self) -> VermaContext<'_> {
        VermaContext {
            algebra: &self.algebra,
            x: &self.x,
        }
    }

    pub fn layer(&self, depth: usize, wt: &MultiIndex) -> Option<&Layer> {
        self.layers.get(&(depth, wt.clone()))
    }

    fn basis_vector(&self, depth: usize, wt: &MultiIndex, i: usize) -> VermaVec {
        let layer = &self.layers[&(depth, wt.clone())];
        let mut v = VermaVec::zero();
        v.add_term(layer.basis[i].clone(), Scalar::one());
        v
    }

    /// Constraint rows, over the coordinates of the (depth, wt) layer,
    /// expressing that the image under `a` falls into the radical of the
    /// target layer. Images into depth 0 must vanish outright (the top has
    /// zero radical, and X vectors are exact, so no window applies).
    /// Images into positive depth whose expansion leaves the captured
    /// basis are not checkable in this window; those conditions are
    /// skipped (`None`) rather than imposed blindly, keeping the windowed
    /// radical an overestimate of the true one.
    fn constraint_rows(
        &self,
        depth: usize,
        wt: &MultiIndex,
        a: &BasisSymbol,
        target_depth: usize,
        target_wt: &MultiIndex,
    ) -> Result<Option<Vec<Vec<Scalar>>>, Error> {
        let ctx = self.context();
        let layer = &self.layers[&(depth, wt.clone())];
        let mut images = Vec::with_capacity(layer.dim());
        for i in 0..layer.dim() {
            let mut v = VermaVec::zero();
            v.add_term(layer.basis[i].clone(), Scalar::one());
            images.push(ctx.act(&AlgebraElement::from_symbol(a.clone()), &v)?);
        }
        if target_depth == 0 {
            // exact conditions: every X component of every image must vanish
            let mut keys: std::collections::BTreeSet<VKey> = std::collections::BTreeSet::new();
            for im in &images {
                keys.extend(im.terms().map(|(k, _)| k.clone()));
            }
            let rows = keys
                .into_iter()
                .map(|key| {
                    images
                        .iter()
                        .map(|im| {
                            im.terms()
                                .find(|(k, _)| **k == key)
                                .map(|(_, c)| c.clone())
                                .unwrap_or_else(Scalar::zero)
                        })
                        .collect()
                })
                .collect();
            return Ok(Some(rows));
        }
        let Some(target) = self.layers.get(&(target_depth, target_wt.clone())) else {
            return Ok(None); // target weight not captured: skip
        };
        let span = target.radical_span();
        let mut rows_by_key: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
        for (col, im) in images.iter().enumerate() {
            let (mut coords, ghosts) = split_by_layer(im, target);
            if !ghosts.is_empty() {
                return Ok(None); // image escapes the window: skip honestly
            }
            for (row, &pivot) in span.basis().iter().zip(span.pivots()) {
                if !coords[pivot].is_zero() {
                    let factor = coords[pivot].clone();
                    for (cj, rj) in coords.iter_mut().zip(row) {
                        *cj = cj.clone() - &(rj * &factor);
                    }
                }
            }
            for (j, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    rows_by_key.entry(j).or_insert_with(|| {
                        vec![Scalar::zero(); images.len()]
                    })[col] = c;
                }
            }
        }
        Ok(Some(rows_by_key.into_values().collect()))
    }

    fn apply_raising_conditions(&mut self) -> Result<(), Error> {
        let layer_keys: Vec<(usize, MultiIndex)> = self.layers.keys().cloned().collect();
        for depth in 1..=self.window.depth_max {
            for (d, wt) in layer_keys.iter().filter(|(d, _)| *d == depth) {
                let mut rows: Vec<Vec<Scalar>> = Vec::new();
                for q in 1..=depth {
                    for a in raising_generators(&self.algebra, q, self.window.radius) {
                        let target_wt = &(wt + &a.degree().tail());
                        if let Some(block) =
                            self.constraint_rows(depth, wt, &a, depth - q, target_wt)?
                        {
                            rows.extend(block);
                        }
                    }
                }
                let layer = self.layers.get_mut(&(*d, wt.clone())).unwrap();
                let kernel = if rows.is_empty() {
                    // no constraints captured: everything is radical
                    (0..layer.dim())
                        .map(|i| {
                            let mut v = vec![Scalar::zero(); layer.dim()];
                            v[i] = Scalar::one();
                            v
                        })
                        .collect()
                } else {
                    crate::linalg::QMatrix::from_rows(rows).kernel_basis()
                };
                layer.radical = kernel;
            }
        }
        Ok(())
    }

    /// Shrinks each layer radical to the largest subspace mapped into the
    /// current radicals by every in-window degree-zero generator. Returns
    /// whether anything changed.
    fn tau0_stabilization_pass(&mut self) -> Result<bool, Error> {
        let ctx_algebra = self.algebra.clone();
        let middles = middle_generators(&ctx_algebra, self.window.radius);
        let layer_keys: Vec<(usize, MultiIndex)> = self.layers.keys().cloned().collect();
        let mut changed = false;
        for key in &layer_keys {
            let (depth, wt) = key;
            if *depth == 0 {
                continue; // depth-0 radical stays zero
            }
            let current = self.layers[key].radical.clone();
            if current.is_empty() {
                continue;
            }
            let k = current.len();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            'generators: for a in &middles {
                let target_wt = wt + &a.degree().tail();
                let Some(target) = self.layers.get(&(*depth, target_wt.clone())) else {
                    continue; // target weight not captured: skip
                };
                let span = target.radical_span();
                let ctx = VermaContext {
                    algebra: &ctx_algebra,
                    x: &self.x,
                };
                // image of each current radical basis vector
                let mut gen_rows: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
                for (col, coords) in current.iter().enumerate() {
                    let mut v = VermaVec::zero();
                    let layer = &self.layers[key];
                    for (i, c) in coords.iter().enumerate() {
                        if !c.is_zero() {
                            v.add_term(layer.basis[i].clone(), c.clone());
                        }
                    }
                    let image = ctx.act(&AlgebraElement::from_symbol(a.clone()), &v)?;
                    let (mut tc, ghosts) = split_by_layer(&image, target);
                    if !ghosts.is_empty() {
                        // the orbit leaves the window; this condition is not
                        // checkable here, so it is skipped, not imposed
                        continue 'generators;
                    }
                    for (row, &pivot) in span.basis().iter().zip(span.pivots()) {
                        if !tc[pivot].is_zero() {
                            let factor = tc[pivot].clone();
                            for (cj, rj) in tc.iter_mut().zip(row) {
                                *cj = cj.clone() - &(rj * &factor);
                            }
                        }
                    }
                    for (j, c) in tc.into_iter().enumerate() {
                        if !c.is_zero() {
                            gen_rows.entry(j).or_insert_with(|| vec![Scalar::zero(); k])[col] = c;
                        }
                    }
                }
                rows.extend(gen_rows.into_values());
            }
            if rows.is_empty() {
                continue;
            }
            let kernel = crate::linalg::QMatrix::from_rows(rows).kernel_basis();
            if kernel.len() < k {
                changed = true;
                // new radical vectors are combinations of the old ones
                let layer_dim = self.layers[key].dim();
                let new_rad: Vec<Vec<Scalar>> = kernel
                    .iter()
                    .map(|comb| {
                        let mut v = vec![Scalar::zero(); layer_dim];
                        for (i, c) in comb.iter().enumerate() {
                            if !c.is_zero() {
                                for (j, x) in current[i].iter().enumerate() {
                                    v[j] = v[j].clone() + &(c * x);
                                }
                            }
                        }
                        v
                    })
                    .collect();
                self.layers.get_mut(key).unwrap().radical = new_rad;
            }
        }
        Ok(changed)
    }
}

/// Computes the windowed radical: depth recursion on raising conditions,
/// then degree-zero stabilization to a fixed point, re-triggering the
/// raising pass until jointly stable.
pub fn compute_radical(state: &mut VermaState) -> Result<(), Error> {
    let mut rounds = 0usize;
    state.apply_raising_conditions()?;
    let mut tau0_automatic = true;
    loop {
        rounds += 1;
        if rounds > state.window.iteration_cap {
            return Err(Error::NoConvergence(state.window.iteration_cap));
        }
        let changed_tau0 = state.tau0_stabilization_pass()?;
        if changed_tau0 {
            tau0_automatic = false;
        }
        let mut changed_raising = false;
        if changed_tau0 && state.window.depth_max > 1 {
            // deeper layers depend on the shallower radicals, so refresh
            let before: Vec<usize> = state.layers.values().map(Layer::radical_dim).collect();
            state.apply_raising_conditions()?;
            let prev = before;
            let after: Vec<usize> = state.layers.values().map(Layer::radical_dim).collect();
            changed_raising = prev != after;
        }
        if !changed_tau0 && !changed_raising {
            break;
        }
    }
    state.stabilization_rounds = Some(rounds);
    state.tau0_closure_was_automatic = tau0_automatic;
    Ok(())
}

/// Per-layer dimension report of the quotient estimate.
#[derive(Clone, Debug, Serialize)]
pub struct VermaRow {
    pub depth: usize,
    pub offset: Vec<i64>,
    pub weight: Vec<String>,
    pub spanning: usize,
    pub radical: usize,
    pub quotient: usize,
    pub saturated: bool,
    /// Set when a second state at the previous radius was supplied and
    /// agreed on this row.
    pub stabilized: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VermaReport {
    pub depth_max: usize,
    pub radius: i64,
    pub level_b: String,
    pub stabilization_rounds: Option<usize>,
    pub tau0_closure_was_automatic: bool,
    pub rows: Vec<VermaRow>,
}

/// The multiplicity table of the windowed quotient: per (depth, weight),
/// spanning dimension minus radical dimension.
pub fn l_of_x_multiplicities(state: &VermaState, previous: Option<&VermaState>) -> VermaReport {
    let alpha = state.x.alpha();
    let b = state.x.level_b();
    let mut rows = Vec::new();
    for ((depth, wt), layer) in &state.layers {
        let weight: Vec<String> = std::iter::once(b.clone() - Scalar::from_int(*depth as i64))
            .chain(
                alpha
                    .iter()
                    .zip(wt.entries())
                    .map(|(a, &o)| a.clone() + Scalar::from_int(o)),
            )
            .map(|s| s.to_string())
            .collect();
        let stabilized = previous.map(|prev| {
            prev.layer(*depth, wt)
                .map(|pl| pl.quotient_dim() == layer.quotient_dim())
                .unwrap_or(false)
        });
        rows.push(VermaRow {
            depth: *depth,
            offset: wt.entries().to_vec(),
            weight,
            spanning: layer.dim(),
            radical: layer.radical_dim(),
            quotient: layer.quotient_dim(),
            saturated: layer.saturated,
            stabilized,
        });
    }
    VermaReport {
        depth_max: state.window.depth_max,
        radius: state.window.radius,
        level_b: b.to_string(),
        stabilization_rounds: state.stabilization_rounds,
        tau0_closure_was_automatic: state.tau0_closure_was_automatic,
        rows,
    }
}

impl VermaReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("depth\toffset\tweight\tspanning\tradical\tquotient\tsaturated\tstabilized\n");
        for r in &self.rows {
            let offset = r
                .offset
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let stab = match r.stabilized {
                None => "-".to_string(),
                Some(b) => b.to_string(),
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.depth,
                offset,
                r.weight.join(","),
                r.spanning,
                r.radical,
                r.quotient,
                r.saturated,
                stab
            );
        }
        out
    }
}

/// Checks, per depth-1 layer, that every spanning direction outside the
/// radical is sent to a nonzero X vector by some windowed raising symbol:
/// non-radical vectors really do reach the top.
pub fn radical_maximality_certificate(state: &VermaState) -> Result<bool, Error> {
    let raisers = raising_generators(&state.algebra, 1, state.window.radius);
    let ctx = state.context();
    for ((depth, wt), layer) in &state.layers {
        if *depth != 1 {
            continue;
        }
        let span = layer.radical_span();
        for i in 0..layer.dim() {
            let mut unit = vec![Scalar::zero(); layer.dim()];
            unit[i] = Scalar::one();
            if span.contains(&unit) {
                continue;
            }
            let v = state.basis_vector(1, wt, i);
            let mut reaches_top = false;
            for a in &raisers {
                let image = ctx.act(&AlgebraElement::from_symbol(a.clone()), &v)?;
                if !image.is_zero() {
                    reaches_top = true;
                    break;
                }
            }
            if !reaches_top {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Weight of a layer after twisting by a lattice automorphism: the full
/// (n+1)-component weight `(b - depth, alpha + offset)` mapped by the
/// inverse matrix.
pub fn twisted_layer_weight(
    state: &VermaState,
    depth: usize,
    wt: &MultiIndex,
    auto: &LatticeAutomorphism,
) -> Vec<Scalar> {
    let mut mu = Vec::with_capacity(state.x.n() + 1);
    mu.push(state.x.level_b() - Scalar::from_int(depth as i64));
    for (a, &o) in state.x.alpha().iter().zip(wt.entries()) {
        mu.push(a.clone() + Scalar::from_int(o));
    }
    auto.apply_inverse_to_weight(&mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CocycleConfig;
    use crate::reps::{gl_irrep, Irrep};
    use crate::simple::GFamily;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn vir_algebra() -> AlgebraConfig {
        AlgebraConfig::new(
            1,
            GFamily::None,
            CocycleConfig::new(Scalar::one(), Scalar::zero()),
        )
    }

    fn level_one_x() -> XModule {
        XModule::Tensor(
            TensorModuleConfig::degree_zero(
                1,
                Irrep::trivial_of_g(GFamily::None),
                gl_irrep(1, vec![], Scalar::zero()).unwrap(),
                vec![Scalar::zero()],
                Scalar::one(),
                Scalar::zero(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn depth_zero_layer_matches_x() {
        let algebra = vir_algebra();
        let state = build_verma(&level_one_x(), VermaWindow::new(1, 1), &algebra).unwrap();
        for r in [-1i64, 0, 1] {
            let layer = state.layer(0, &mi(&[r])).unwrap();
            assert_eq!(layer.dim(), 1);
        }
    }

    #[test]
    fn positive_part_annihilates_the_top() {
        let algebra = vir_algebra();
        let state = build_verma(&level_one_x(), VermaWindow::new(1, 1), &algebra).unwrap();
        let ctx = state.context();
        let top = state.basis_vector(0, &mi(&[0]), 0);
        for a in raising_generators(&algebra, 1, 1) {
            let image = ctx.act(&AlgebraElement::from_symbol(a), &top).unwrap();
            assert!(image.is_zero());
        }
    }

    #[test]
    fn depth_one_spanning_count() {
        // per offset s one K class and two derivations: 3 generators
        let algebra = vir_algebra();
        let state = build_verma(&level_one_x(), VermaWindow::new(1, 1), &algebra).unwrap();
        // weight offset 0 at depth 1: pairs (s, r), s + r = 0, both in [-1,1]
        let layer = state.layer(1, &mi(&[0])).unwrap();
        assert_eq!(layer.dim(), 3 * 3);
    }

    #[test]
    fn trivial_x_has_all_radical_below_the_top() {
        let algebra = vir_algebra();
        let x = XModule::Trivial { n: 1 };
        let mut state = build_verma(&x, VermaWindow::new(1, 2), &algebra).unwrap();
        compute_radical(&mut state).unwrap();
        for ((depth, _), layer) in &state.layers {
            if *depth == 0 {
                assert_eq!(layer.radical_dim(), 0);
            } else {
                assert_eq!(layer.quotient_dim(), 0, "positive depth must vanish");
            }
        }
        assert!(radical_maximality_certificate(&state).unwrap());
    }

    #[test]
    fn level_one_quotient_is_windowed_and_graded() {
        let algebra = vir_algebra();
        let mut state = build_verma(&level_one_x(), VermaWindow::new(1, 1), &algebra).unwrap();
        compute_radical(&mut state).unwrap();
        // the top layer survives untouched
        for r in [-1i64, 0, 1] {
            let layer = state.layer(0, &mi(&[r])).unwrap();
            assert_eq!(layer.quotient_dim(), 1);
        }
        assert!(radical_maximality_certificate(&state).unwrap());
        let report = l_of_x_multiplicities(&state, None);
        assert!(report.rows.iter().all(|r| !r.saturated));
    }

    #[test]
    fn pbw_straightening_is_consistent() {
        // acting twice in either order must satisfy the bracket identity
        // on a depth-0 vector pushed to depth 2
        let algebra = vir_algebra();
        let x = level_one_x();
        let state = build_verma(&x, VermaWindow::new(2, 1), &algebra).unwrap();
        let ctx = state.context();
        let top = state.basis_vector(0, &mi(&[0]), 0);
        let y1 = AlgebraElement::derivation(0, mi(&[-1, 1]));
        let y2 = AlgebraElement::derivation(1, mi(&[-1, 0]));
        let a12 = ctx.act(&y1, &ctx.act(&y2, &top).unwrap()).unwrap();
        let a21 = ctx.act(&y2, &ctx.act(&y1, &top).unwrap()).unwrap();
        let mut commutator = a12.clone();
        commutator.add_scaled(&a21, &Scalar::from_int(-1));
        let br = bracket(&y1, &y2, &algebra).unwrap();
        let direct = ctx.act(&br, &top).unwrap();
        assert_eq!(commutator, direct);
    }
}
