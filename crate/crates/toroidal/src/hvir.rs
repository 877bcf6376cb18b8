//! The twisted Heisenberg–Virasoro presentation in one variable: basis
//! `{x_i, I(j), C_D, C_DI, C_I}` with its three central charges.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum HVirSymbol {
    X(i64),
    I(i64),
    CD,
    CDI,
    CI,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HVirElement {
    terms: BTreeMap<HVirSymbol, Scalar>,
}

impl HVirElement {
    pub fn zero() -> Self {
        HVirElement::default()
    }

    pub fn from_symbol(sym: HVirSymbol) -> Self {
        let mut e = HVirElement::zero();
        e.add_term(sym, Scalar::one());
        e
    }

    pub fn x(i: i64) -> Self {
        Self::from_symbol(HVirSymbol::X(i))
    }

    pub fn current(j: i64) -> Self {
        Self::from_symbol(HVirSymbol::I(j))
    }

    pub fn add_term(&mut self, sym: HVirSymbol, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(sym.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&sym);
        }
    }

    pub fn add(&self, other: &HVirElement) -> HVirElement {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> HVirElement {
        if c.is_zero() {
            return HVirElement::zero();
        }
        HVirElement {
            terms: self
                .terms
                .iter()
                .map(|(s, v)| (s.clone(), v * c))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, sym: &HVirSymbol) -> Scalar {
        self.terms.get(sym).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HVirSymbol, &Scalar)> {
        self.terms.iter()
    }
}

fn bracket_symbols(a: &HVirSymbol, b: &HVirSymbol) -> HVirElement {
    use HVirSymbol::*;
    let mut out = HVirElement::zero();
    match (a, b) {
        // [x_i, x_j] = (j - i) x_{i+j} + delta_{i+j,0} (i^3 - i)/12 C_D
        (X(i), X(j)) => {
            out.add_term(X(i + j), Scalar::from_int(j - i));
            if i + j == 0 {
                out.add_term(CD, Scalar::ratio(i * i * i - i, 12));
            }
        }
        // [x_i, I(j)] = j I(i+j) + delta_{i+j,0} (i^2 + i) C_DI
        (X(i), I(j)) => {
            out.add_term(I(i + j), Scalar::from_int(*j));
            if i + j == 0 {
                out.add_term(CDI, Scalar::from_int(i * i + i));
            }
        }
        (I(_), X(_)) => return bracket_symbols(b, a).scale(&Scalar::from_int(-1)),
        // [I(i), I(j)] = i delta_{i+j,0} C_I
        (I(i), I(j)) => {
            if i + j == 0 {
                out.add_term(CI, Scalar::from_int(*i));
            }
        }
        // the three charges are central
        (CD | CDI | CI, _) | (_, CD | CDI | CI) => {}
    }
    out
}

/// Bilinear extension of the defining relations.
pub fn hvir_bracket(a: &HVirElement, b: &HVirElement) -> HVirElement {
    let mut out = HVirElement::zero();
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            out = out.add(&bracket_symbols(sa, sb).scale(&(ca * cb)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_charge_normalization() {
        // [x_2, x_-2] = -4 x_0 + (1/2) C_D
        let out = hvir_bracket(&HVirElement::x(2), &HVirElement::x(-2));
        assert_eq!(out.coefficient(&HVirSymbol::X(0)), Scalar::from_int(-4));
        assert_eq!(out.coefficient(&HVirSymbol::CD), Scalar::ratio(1, 2));
    }

    #[test]
    fn mixed_charge() {
        // [x_1, I(-1)] = -I(0) + 2 C_DI
        let out = hvir_bracket(&HVirElement::x(1), &HVirElement::current(-1));
        assert_eq!(out.coefficient(&HVirSymbol::I(0)), Scalar::from_int(-1));
        assert_eq!(out.coefficient(&HVirSymbol::CDI), Scalar::from_int(2));
    }

    #[test]
    fn charges_are_central() {
        for charge in [HVirSymbol::CD, HVirSymbol::CDI, HVirSymbol::CI] {
            let c = HVirElement::from_symbol(charge);
            for probe in [
                HVirElement::x(3),
                HVirElement::current(-2),
                HVirElement::from_symbol(HVirSymbol::CI),
            ] {
                assert!(hvir_bracket(&c, &probe).is_zero());
                assert!(hvir_bracket(&probe, &c).is_zero());
            }
        }
    }

    #[test]
    fn current_bracket() {
        let out = hvir_bracket(&HVirElement::current(3), &HVirElement::current(-3));
        assert_eq!(out.coefficient(&HVirSymbol::CI), Scalar::from_int(3));
        assert!(hvir_bracket(&HVirElement::current(3), &HVirElement::current(2)).is_zero());
    }
}
