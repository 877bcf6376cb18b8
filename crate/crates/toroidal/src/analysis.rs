//! Verification instruments: alternating-difference annihilators built from
//! solenoidal elements, and the window-truncated covering family with its
//! evaluation map.

use std::collections::BTreeMap;

use crate::algebra::{bracket, AlgebraConfig, AlgebraElement, BasisSymbol};
use crate::error::Error;
use crate::lattice::{window, MultiIndex};
use crate::linalg::SpanBuilder;
use crate::scalar::Scalar;
use crate::subalg::{solenoidal_element, SolenoidalConfig};
use crate::tensor::{act, ModuleVector, TensorModuleConfig};

pub fn binomial_i64(m: usize, i: usize) -> i64 {
    let mut r: i64 = 1;
    for t in 0..i {
        r = r * (m - t) as i64 / (t + 1) as i64;
    }
    r
}

/// The left factor of a differentiator composite.
#[derive(Clone, Debug)]
pub enum DifferentiatorKind {
    /// Both factors solenoidal; offset `k` on the left factor.
    Solenoidal { k: MultiIndex },
    /// Left factor a loop element `x (x) t^j`.
    Loop { x: usize, j: MultiIndex },
}

/// An alternating-sum composite of order `m` in the direction `h`:
/// the i-th summand pairs the left factor at offset `k - i h` (or
/// `j - i h`) with the solenoidal element at `p + i h`, `p` an integer
/// multiple of `h`, weighted by `(-1)^i C(m, i)`.
#[derive(Clone, Debug)]
pub struct Differentiator {
    pub order: usize,
    pub direction: MultiIndex,
    pub p_multiplier: i64,
    pub kind: DifferentiatorKind,
}

impl Differentiator {
    pub fn new(
        order: usize,
        direction: MultiIndex,
        p_multiplier: i64,
        kind: DifferentiatorKind,
    ) -> Result<Self, Error> {
        if direction.is_zero() {
            return Err(Error::InvalidConfig(
                "differentiator direction must be nonzero".into(),
            ));
        }
        Ok(Differentiator {
            order,
            direction,
            p_multiplier,
            kind,
        })
    }
}

/// Applies the composite to a module vector. The solenoidal direction must
/// be certified on a window covering every offset the summands reach.
pub fn apply_differentiator(
    d: &Differentiator,
    v: &ModuleVector,
    module: &TensorModuleConfig,
    gamma: &SolenoidalConfig,
) -> Result<ModuleVector, Error> {
    let rank = gamma.rank();
    let p = d.direction.scaled(d.p_multiplier);
    let mut out = ModuleVector::zero(module.lattice_rank());
    for i in 0..=d.order {
        let ih = d.direction.scaled(i as i64);
        let inner = solenoidal_element(&(&p + &ih), gamma)?;
        let mid = act(&inner, v, module)?;
        let left = match &d.kind {
            DifferentiatorKind::Solenoidal { k } => solenoidal_element(&(k - &ih), gamma)?,
            DifferentiatorKind::Loop { x, j } => {
                let mut e = AlgebraElement::zero(rank);
                e.add_term(
                    BasisSymbol::G {
                        x: *x,
                        k: j - &ih,
                    },
                    Scalar::one(),
                );
                e
            }
        };
        let term = act(&left, &mid, module)?;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out = out.add(&term.scale(&Scalar::from_int(sign * binomial_i64(d.order, i))));
    }
    Ok(out)
}

/// Bracket in the centerless semidirect product: the usual bracket with the
/// differential-class terms dropped.
pub fn centerless_bracket(
    a: &AlgebraElement,
    b: &AlgebraElement,
    cfg: &AlgebraConfig,
) -> Result<AlgebraElement, Error> {
    let full = bracket(a, b, cfg)?;
    let mut out = AlgebraElement::zero(full.rank());
    for (sym, c) in full.terms() {
        if !matches!(sym, BasisSymbol::K { .. }) {
            out.add_term(sym.clone(), c.clone());
        }
    }
    Ok(out)
}

/// Which ideal the covering symbols range over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ActingIdeal {
    /// The loop part (nontrivial coefficient algebra present).
    Loop,
    /// The derivations (used when the loop part is absent or trivial).
    Derivations,
}

/// Truncation radii of the covering family.
#[derive(Clone, Copy, Debug)]
pub struct CoverWindow {
    /// Box radius for the degrees of the acting-ideal symbols.
    pub x_radius: i64,
    /// Box radius for the lattice offsets of the module vectors.
    pub u_radius: i64,
    /// Box radius for the evaluation points.
    pub eval_radius: i64,
}

type ModuleKey = (usize, usize, MultiIndex);

/// Formal combination of covering symbols `mu_{x,u}`, bilinear in both
/// slots, truncated to a window of symbol pairs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoverVector {
    terms: BTreeMap<(BasisSymbol, ModuleKey), Scalar>,
}

impl CoverVector {
    pub fn zero() -> Self {
        CoverVector::default()
    }

    pub fn add_term(&mut self, x: BasisSymbol, u: ModuleKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (x, u);
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &CoverVector) -> CoverVector {
        let mut out = self.clone();
        for ((x, u), c) in &other.terms {
            out.add_term(x.clone(), u.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CoverVector) -> CoverVector {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> CoverVector {
        if c.is_zero() {
            return CoverVector::zero();
        }
        CoverVector {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BasisSymbol, ModuleKey), &Scalar)> {
        self.terms.iter()
    }
}

/// The window-truncated covering family of a tensor module, together with
/// the three actions and the evaluation maps.
pub struct CoverFamily<'a> {
    module: &'a TensorModuleConfig,
    algebra: &'a AlgebraConfig,
    ideal: ActingIdeal,
    window: CoverWindow,
    symbols: Vec<(BasisSymbol, ModuleKey)>,
}

impl<'a> CoverFamily<'a> {
    pub fn build(
        module: &'a TensorModuleConfig,
        algebra: &'a AlgebraConfig,
        ideal: ActingIdeal,
        win: CoverWindow,
    ) -> Result<Self, Error> {
        if ideal == ActingIdeal::Loop && algebra.g().dim() == 0 {
            return Err(Error::InvalidConfig(
                "loop covering family needs a nontrivial coefficient algebra".into(),
            ));
        }
        let rank = algebra.rank();
        let mut symbols = Vec::new();
        for k in window(rank, win.x_radius) {
            let xs: Vec<BasisSymbol> = match ideal {
                ActingIdeal::Loop => (0..algebra.g().dim())
                    .map(|x| BasisSymbol::G { x, k: k.clone() })
                    .collect(),
                ActingIdeal::Derivations => (0..rank)
                    .map(|i| BasisSymbol::D { i, k: k.clone() })
                    .collect(),
            };
            for x in xs {
                for r in window(module.lattice_rank(), win.u_radius) {
                    for v1 in 0..module.v1().dim() {
                        for v2 in 0..module.v2().dim() {
                            symbols.push((x.clone(), (v1, v2, r.clone())));
                        }
                    }
                }
            }
        }
        Ok(CoverFamily {
            module,
            algebra,
            ideal,
            window: win,
            symbols,
        })
    }

    pub fn symbols(&self) -> &[(BasisSymbol, ModuleKey)] {
        &self.symbols
    }

    pub fn symbol_vector(&self, idx: usize) -> CoverVector {
        let (x, u) = self.symbols[idx].clone();
        let mut v = CoverVector::zero();
        v.add_term(x, u, Scalar::one());
        v
    }

    fn check_x_window(&self, sym: &BasisSymbol) -> Result<(), Error> {
        let ok = match (self.ideal, sym) {
            (ActingIdeal::Loop, BasisSymbol::G { .. })
            | (ActingIdeal::Derivations, BasisSymbol::D { .. }) => true,
            _ => {
                return Err(Error::FlavorMismatch(format!(
                    "covering symbol {sym} left the acting ideal"
                )))
            }
        };
        let _ = ok;
        if sym
            .degree()
            .entries()
            .iter()
            .any(|&e| e.abs() > self.window.x_radius)
        {
            return Err(Error::CoverEscape(sym.degree().clone()));
        }
        Ok(())
    }

    fn expand_module_vector(
        &self,
        x: &BasisSymbol,
        m: &ModuleVector,
        scale: &Scalar,
        out: &mut CoverVector,
    ) -> Result<(), Error> {
        for ((v1, v2, r), c) in m.terms() {
            if r.entries().iter().any(|&e| e.abs() > self.window.u_radius) {
                return Err(Error::CoverEscape(r.clone()));
            }
            out.add_term(x.clone(), (*v1, *v2, r.clone()), c * scale);
        }
        Ok(())
    }

    /// Action of an algebra element through both slots:
    /// `a . mu_{x,u} = mu_{[a,x],u} + mu_{x,au}` with the centerless bracket.
    pub fn act_algebra(&self, a: &AlgebraElement, v: &CoverVector) -> Result<CoverVector, Error> {
        let mut out = CoverVector::zero();
        for ((x, u), c) in v.terms() {
            let xelem = AlgebraElement::from_symbol(x.clone());
            // first slot: bracket, with central terms dropped
            let br = centerless_bracket(a, &xelem, self.algebra)?;
            for (sym, cb) in br.terms() {
                self.check_x_window(sym)?;
                out.add_term(sym.clone(), u.clone(), c * cb);
            }
            // second slot: the module action
            let uvec = ModuleVector::basis(u.0, u.1, u.2.clone());
            let au = act(a, &uvec, self.module)?;
            self.expand_module_vector(x, &au, c, &mut out)?;
        }
        Ok(out)
    }

    /// Multiplication action of the function `t^k`: shifts the first slot.
    pub fn act_function(&self, k: &MultiIndex, v: &CoverVector) -> Result<CoverVector, Error> {
        let mut out = CoverVector::zero();
        for ((x, u), c) in v.terms() {
            let shifted = match x {
                BasisSymbol::G { x: g, k: j } => BasisSymbol::G { x: *g, k: j + k },
                BasisSymbol::D { i, k: j } => BasisSymbol::D { i: *i, k: j + k },
                BasisSymbol::K { .. } => unreachable!("covering symbols are never central"),
            };
            self.check_x_window(&shifted)?;
            out.add_term(shifted, u.clone(), c.clone());
        }
        Ok(out)
    }

    /// Evaluation at `t^l`: `mu_{x,u}(t^l) = (t^l x) u`. Exact, no window.
    pub fn evaluate(&self, v: &CoverVector, l: &MultiIndex) -> Result<ModuleVector, Error> {
        let mut out = ModuleVector::zero(self.module.lattice_rank());
        for ((x, u), c) in v.terms() {
            let shifted = match x {
                BasisSymbol::G { x: g, k: j } => BasisSymbol::G { x: *g, k: j + l },
                BasisSymbol::D { i, k: j } => BasisSymbol::D { i: *i, k: j + l },
                BasisSymbol::K { .. } => unreachable!(),
            };
            let uvec = ModuleVector::basis(u.0, u.1, u.2.clone());
            let image = act(&AlgebraElement::from_symbol(shifted), &uvec, self.module)?;
            out = out.add(&image.scale(c));
        }
        Ok(out)
    }

    /// The evaluation-at-one map down to the module.
    pub fn pi(&self, v: &CoverVector) -> Result<ModuleVector, Error> {
        self.evaluate(v, &MultiIndex::zero(self.algebra.rank()))
    }

    /// Equality as windowed functionals: evaluations agree at every point
    /// of the evaluation box.
    pub fn equal_on_window(&self, a: &CoverVector, b: &CoverVector) -> Result<bool, Error> {
        for l in window(self.algebra.rank(), self.window.eval_radius) {
            if self.evaluate(a, &l)? != self.evaluate(b, &l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Per-weight-offset comparison of the evaluation image with the span
    /// of `x u` over the windowed ideal and module vectors. Returns
    /// mismatched offsets (empty means the images agree everywhere).
    pub fn pi_image_matches_ideal_span(&self) -> Result<Vec<MultiIndex>, Error> {
        let dim_v1 = self.module.v1().dim();
        let dim_v2 = self.module.v2().dim();
        let fiber = dim_v1 * dim_v2;
        // group by target lattice offset
        let mut pi_spans: BTreeMap<MultiIndex, SpanBuilder> = BTreeMap::new();
        let mut direct_spans: BTreeMap<MultiIndex, SpanBuilder> = BTreeMap::new();
        for idx in 0..self.symbols.len() {
            let (x, u) = &self.symbols[idx];
            let pi = self.pi(&self.symbol_vector(idx))?;
            let direct = act(
                &AlgebraElement::from_symbol(x.clone()),
                &ModuleVector::basis(u.0, u.1, u.2.clone()),
                self.module,
            )?;
            for (label, vec) in [(&mut pi_spans, &pi), (&mut direct_spans, &direct)] {
                // both vectors are homogeneous: a single lattice offset
                let Some(((_, _, r), _)) = vec.terms().next() else {
                    continue;
                };
                let offset = r.clone();
                let mut coords = vec![Scalar::zero(); fiber];
                for ((v1, v2, rr), c) in vec.terms() {
                    debug_assert_eq!(*rr, offset);
                    coords[v1 * dim_v2 + v2] = c.clone();
                }
                label
                    .entry(offset)
                    .or_insert_with(|| SpanBuilder::new(fiber))
                    .insert(coords);
            }
        }
        let mut mismatches = Vec::new();
        let offsets: std::collections::BTreeSet<MultiIndex> = pi_spans
            .keys()
            .chain(direct_spans.keys())
            .cloned()
            .collect();
        for offset in offsets {
            let a = pi_spans.get(&offset).map_or(0, SpanBuilder::dim);
            let b = direct_spans.get(&offset).map_or(0, SpanBuilder::dim);
            let same = a == b
                && match (pi_spans.get(&offset), direct_spans.get(&offset)) {
                    (Some(pa), Some(pb)) => {
                        pa.basis().iter().all(|v| pb.contains(v))
                            && pb.basis().iter().all(|v| pa.contains(v))
                    }
                    (None, None) => true,
                    _ => a == 0 && b == 0,
                };
            if !same {
                mismatches.push(offset);
            }
        }
        Ok(mismatches)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CocycleConfig;
    use crate::reps::{standard_rep, Irrep};
    use crate::simple::GFamily;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn witt_module() -> TensorModuleConfig {
        TensorModuleConfig::full(
            1,
            Irrep::trivial_of_g(GFamily::None),
            standard_rep(2),
            vec![Scalar::ratio(1, 3), Scalar::ratio(-1, 5)],
        )
        .unwrap()
    }

    #[test]
    fn third_differences_annihilate() {
        let module = witt_module();
        let gamma = SolenoidalConfig::default_for(2, 6);
        let d = Differentiator::new(
            3,
            mi(&[1, 0]),
            1,
            DifferentiatorKind::Solenoidal { k: mi(&[1, 1]) },
        )
        .unwrap();
        for r in window(2, 1) {
            for b in 0..2 {
                let v = ModuleVector::basis(0, b, r.clone());
                let out = apply_differentiator(&d, &v, &module, &gamma).unwrap();
                assert!(out.is_zero(), "order-3 composite must vanish at r={r}");
            }
        }
    }

    #[test]
    fn second_differences_have_a_witness() {
        // on the standard module the quadratic coefficient degenerates,
        // so the order-2 witness needs a larger gl_2 module
        let big_v2 = crate::reps::trace_twist(
            &crate::reps::highest_weight_irrep(
                &crate::reps::WeightLabel::dominant(vec![2]).unwrap(),
                GFamily::Sl(2),
            )
            .unwrap(),
            Scalar::from_int(2),
        )
        .unwrap();
        let module = TensorModuleConfig::full(
            1,
            Irrep::trivial_of_g(GFamily::None),
            big_v2,
            vec![Scalar::ratio(1, 3), Scalar::ratio(-1, 5)],
        )
        .unwrap();
        let gamma = SolenoidalConfig::default_for(2, 6);
        let order3 = Differentiator::new(
            3,
            mi(&[1, 0]),
            1,
            DifferentiatorKind::Solenoidal { k: mi(&[1, 1]) },
        )
        .unwrap();
        let order2 = Differentiator::new(
            2,
            mi(&[1, 0]),
            1,
            DifferentiatorKind::Solenoidal { k: mi(&[1, 1]) },
        )
        .unwrap();
        let mut witness = false;
        for r in window(2, 1) {
            for b in 0..3 {
                let v = ModuleVector::basis(0, b, r.clone());
                assert!(apply_differentiator(&order3, &v, &module, &gamma)
                    .unwrap()
                    .is_zero());
                if !apply_differentiator(&order2, &v, &module, &gamma)
                    .unwrap()
                    .is_zero()
                {
                    witness = true;
                }
            }
        }
        assert!(witness, "order 2 is not enough to annihilate here");
    }

    #[test]
    fn first_differences_have_a_witness_on_the_standard_module() {
        let module = witt_module();
        let gamma = SolenoidalConfig::default_for(2, 6);
        let order1 = Differentiator::new(
            1,
            mi(&[1, 0]),
            1,
            DifferentiatorKind::Solenoidal { k: mi(&[1, 1]) },
        )
        .unwrap();
        let witness = window(2, 1).any(|r| {
            (0..2).any(|b| {
                let v = ModuleVector::basis(0, b, r.clone());
                !apply_differentiator(&order1, &v, &module, &gamma)
                    .unwrap()
                    .is_zero()
            })
        });
        assert!(witness);
    }

    #[test]
    fn loop_composite_second_order_annihilates() {
        // coefficient algebra sl_2, V1 the standard module
        let module = TensorModuleConfig::full(
            1,
            crate::reps::restrict_to_sl(&standard_rep(2)).unwrap(),
            standard_rep(2),
            vec![Scalar::zero(), Scalar::ratio(2, 7)],
        )
        .unwrap();
        let gamma = SolenoidalConfig::default_for(2, 6);
        for x in 0..3 {
            let d = Differentiator::new(
                2,
                mi(&[0, 1]),
                0,
                DifferentiatorKind::Loop { x, j: mi(&[1, 0]) },
            )
            .unwrap();
            for r in window(2, 1) {
                let v = ModuleVector::basis(0, 1, r.clone());
                let out = apply_differentiator(&d, &v, &module, &gamma).unwrap();
                assert!(out.is_zero());
            }
        }
    }

    #[test]
    fn cover_function_action_is_evaluation_shift() {
        let module = witt_module();
        let algebra = AlgebraConfig::new(1, GFamily::None, CocycleConfig::zero());
        let fam = CoverFamily::build(
            &module,
            &algebra,
            ActingIdeal::Derivations,
            CoverWindow {
                x_radius: 2,
                u_radius: 2,
                eval_radius: 2,
            },
        )
        .unwrap();
        let centered = fam
            .symbols()
            .iter()
            .position(|(x, u)| x.degree().is_zero() && u.2.is_zero())
            .unwrap();
        let mu = fam.symbol_vector(centered);
        let k = mi(&[1, -1]);
        let shifted = fam.act_function(&k, &mu).unwrap();
        for l in window(2, 1) {
            assert_eq!(
                fam.evaluate(&shifted, &l).unwrap(),
                fam.evaluate(&mu, &(&l + &k)).unwrap()
            );
        }
    }

    #[test]
    fn cover_escape_is_reported() {
        let module = witt_module();
        let algebra = AlgebraConfig::new(1, GFamily::None, CocycleConfig::zero());
        let fam = CoverFamily::build(
            &module,
            &algebra,
            ActingIdeal::Derivations,
            CoverWindow {
                x_radius: 1,
                u_radius: 1,
                eval_radius: 1,
            },
        )
        .unwrap();
        let mu = fam.symbol_vector(0); // x at degree (-1,-1)
        let k = mi(&[-1, 0]);
        match fam.act_function(&k, &mu) {
            Err(Error::CoverEscape(d)) => assert_eq!(d, mi(&[-2, -1])),
            other => panic!("expected escape, got {other:?}"),
        }
    }
}
