//! External file formats: JSON schemas for algebra elements, configuration,
//! module vectors, representations, automorphism matrices and weight
//! tables. Parse errors carry the byte offset of the offending input.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraConfig, AlgebraElement, BasisSymbol, CocycleConfig};
use crate::error::Error;
use crate::lattice::MultiIndex;
use crate::reps::{gl_irrep, highest_weight_irrep, Generators, Irrep, WeightLabel};
use crate::scalar::Scalar;
use crate::simple::GFamily;
use crate::subalg::LatticeAutomorphism;
use crate::tensor::{ModuleVector, TensorModuleConfig};
use crate::verma::XModule;
use crate::weights::WeightTable;

fn parse_json<'a, T: Deserialize<'a>>(source: &'a str) -> Result<T, Error> {
    serde_json::from_str(source).map_err(|e| Error::from_json(e, source))
}

// ---------------------------------------------------------------------------
// algebra configuration
// ---------------------------------------------------------------------------

/// `{"n": 1, "g": "sl2", "mu1": "1", "mu2": "0"}`
#[derive(Serialize, Deserialize)]
pub struct ConfigDto {
    pub n: usize,
    pub g: String,
    #[serde(default = "zero_string")]
    pub mu1: String,
    #[serde(default = "zero_string")]
    pub mu2: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl ConfigDto {
    pub fn to_config(&self) -> Result<AlgebraConfig, Error> {
        let family = GFamily::parse(&self.g)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown coefficient algebra {:?}", self.g)))?;
        let mu1: Scalar = self.mu1.parse()?;
        let mu2: Scalar = self.mu2.parse()?;
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        Ok(AlgebraConfig::new(self.n, family, CocycleConfig::new(mu1, mu2)))
    }

    pub fn from_config(cfg: &AlgebraConfig) -> ConfigDto {
        ConfigDto {
            n: cfg.n(),
            g: cfg.g().family().to_string(),
            mu1: cfg.cocycle().mu1.to_string(),
            mu2: cfg.cocycle().mu2.to_string(),
        }
    }
}

pub fn parse_config(source: &str) -> Result<AlgebraConfig, Error> {
    parse_json::<ConfigDto>(source)?.to_config()
}

// ---------------------------------------------------------------------------
// algebra elements
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermDto {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<usize>,
    k: Vec<i64>,
    c: String,
}

/// `{"rank": 2, "terms": [{"kind": "d", "i": 0, "k": [1, 2], "c": "1"}]}`
#[derive(Serialize, Deserialize)]
struct ElementDto {
    rank: usize,
    terms: Vec<TermDto>,
}

pub fn parse_element(source: &str) -> Result<AlgebraElement, Error> {
    let dto: ElementDto = parse_json(source)?;
    let mut out = AlgebraElement::zero(dto.rank);
    for t in dto.terms {
        let k = MultiIndex::new(t.k);
        k.check_rank(dto.rank)?;
        let c: Scalar = t.c.parse()?;
        let sym = match t.kind.as_str() {
            "g" => BasisSymbol::G {
                x: t.x.ok_or_else(|| {
                    Error::InvalidConfig("loop terms need a basis index \"x\"".into())
                })?,
                k,
            },
            "K" => BasisSymbol::K {
                i: t.i.ok_or_else(|| {
                    Error::InvalidConfig("K terms need a direction \"i\"".into())
                })?,
                k,
            },
            "d" => BasisSymbol::D {
                i: t.i.ok_or_else(|| {
                    Error::InvalidConfig("d terms need a direction \"i\"".into())
                })?,
                k,
            },
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown term kind {other:?} (expected \"g\", \"K\" or \"d\")"
                )))
            }
        };
        out.add_term(sym, c);
    }
    Ok(out)
}

pub fn element_to_json(e: &AlgebraElement) -> serde_json::Value {
    let terms: Vec<TermDto> = e
        .terms()
        .map(|(sym, c)| match sym {
            BasisSymbol::G { x, k } => TermDto {
                kind: "g".into(),
                i: None,
                x: Some(*x),
                k: k.entries().to_vec(),
                c: c.to_string(),
            },
            BasisSymbol::K { i, k } => TermDto {
                kind: "K".into(),
                i: Some(*i),
                x: None,
                k: k.entries().to_vec(),
                c: c.to_string(),
            },
            BasisSymbol::D { i, k } => TermDto {
                kind: "d".into(),
                i: Some(*i),
                x: None,
                k: k.entries().to_vec(),
                c: c.to_string(),
            },
        })
        .collect();
    serde_json::to_value(ElementDto {
        rank: e.rank(),
        terms,
    })
    .expect("element serialization cannot fail")
}

// ---------------------------------------------------------------------------
// module vectors
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModuleTermDto {
    v1: usize,
    v2: usize,
    r: Vec<i64>,
    c: String,
}

/// `{"terms": [{"v1": 0, "v2": 1, "r": [0, 0], "c": "2/3"}]}`
#[derive(Serialize, Deserialize)]
struct ModuleVectorDto {
    terms: Vec<ModuleTermDto>,
}

pub fn parse_module_vector(source: &str, rank: usize) -> Result<ModuleVector, Error> {
    let dto: ModuleVectorDto = parse_json(source)?;
    let mut out = ModuleVector::zero(rank);
    for t in dto.terms {
        let r = MultiIndex::new(t.r);
        r.check_rank(rank)?;
        out.add_term(t.v1, t.v2, r, t.c.parse()?);
    }
    Ok(out)
}

pub fn module_vector_to_json(v: &ModuleVector) -> serde_json::Value {
    let terms: Vec<ModuleTermDto> = v
        .terms()
        .map(|((v1, v2, r), c)| ModuleTermDto {
            v1: *v1,
            v2: *v2,
            r: r.entries().to_vec(),
            c: c.to_string(),
        })
        .collect();
    serde_json::to_value(ModuleVectorDto { terms }).expect("vector serialization cannot fail")
}

// ---------------------------------------------------------------------------
// representations
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct IrrepDto {
    pub dim: usize,
    /// "gl" or "g".
    pub kind: String,
    /// gl size m, or the coefficient family tag for kind "g".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// One dense row-major matrix per generator.
    pub matrices: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<LabelDto>,
}

#[derive(Serialize, Deserialize)]
pub struct LabelDto {
    pub entries: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
}

fn matrix_from_rows(rows: &[Vec<String>], dim: usize) -> Result<crate::linalg::QMatrix, Error> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidIrrep("matrix of wrong shape".into()));
    }
    let mut m = crate::linalg::QMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, s.parse()?);
        }
    }
    Ok(m)
}

/// Parses and validates a representation (commutation relations, identity
/// scalar, highest-weight data when labelled).
pub fn parse_irrep(source: &str) -> Result<Irrep, Error> {
    let dto: IrrepDto = parse_json(source)?;
    let label = match &dto.label {
        None => None,
        Some(l) => {
            let mut label = WeightLabel::dominant(l.entries.clone())?;
            if let Some(c) = &l.c {
                label = label.with_trace(c.parse()?);
            }
            Some(label)
        }
    };
    let gens = match dto.kind.as_str() {
        "gl" => {
            let m = dto
                .m
                .ok_or_else(|| Error::InvalidIrrep("gl representations need \"m\"".into()))?;
            if dto.matrices.len() != m * m {
                return Err(Error::InvalidIrrep(format!(
                    "gl_{m} needs {} generator matrices, got {}",
                    m * m,
                    dto.matrices.len()
                )));
            }
            let e = dto
                .matrices
                .iter()
                .map(|rows| matrix_from_rows(rows, dto.dim))
                .collect::<Result<Vec<_>, _>>()?;
            Generators::Gl { m, e }
        }
        "g" => {
            let family = dto
                .family
                .as_deref()
                .and_then(GFamily::parse)
                .ok_or_else(|| Error::InvalidIrrep("unknown coefficient family".into()))?;
            let basis = dto
                .matrices
                .iter()
                .map(|rows| matrix_from_rows(rows, dto.dim))
                .collect::<Result<Vec<_>, _>>()?;
            Generators::OfG { family, basis }
        }
        other => {
            return Err(Error::InvalidIrrep(format!(
                "unknown representation kind {other:?}"
            )))
        }
    };
    let rep = Irrep::from_parts(dto.dim, gens, label);
    rep.validate()?;
    Ok(rep)
}

pub fn irrep_to_json(rep: &Irrep) -> serde_json::Value {
    let matrix_dto = |m: &crate::linalg::QMatrix| -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
            .collect()
    };
    let (kind, m, family, matrices) = match rep.generators() {
        Generators::Gl { m, e } => (
            "gl".to_string(),
            Some(*m),
            None,
            e.iter().map(matrix_dto).collect(),
        ),
        Generators::OfG { family, basis } => (
            "g".to_string(),
            None,
            Some(family.to_string()),
            basis.iter().map(matrix_dto).collect(),
        ),
    };
    let label = rep.label().map(|l| LabelDto {
        entries: l.entries.clone(),
        c: l.trace.as_ref().map(ToString::to_string),
    });
    serde_json::to_value(IrrepDto {
        dim: rep.dim(),
        kind,
        m,
        family,
        matrices,
        label,
    })
    .expect("representation serialization cannot fail")
}

// ---------------------------------------------------------------------------
// automorphisms
// ---------------------------------------------------------------------------

/// Row-major integer arrays: `[[0, 1], [1, 0]]`.
pub fn parse_automorphism(source: &str) -> Result<LatticeAutomorphism, Error> {
    let rows: Vec<Vec<i64>> = parse_json(source)?;
    LatticeAutomorphism::new(rows)
}

pub fn automorphism_to_json(a: &LatticeAutomorphism) -> serde_json::Value {
    serde_json::to_value(a.rows()).expect("matrix serialization cannot fail")
}

// ---------------------------------------------------------------------------
// tensor modules
// ---------------------------------------------------------------------------

/// Module description:
/// `{"flavor": "full", "n": 1, "g": "sl2", "lambda1": [1],
///   "lambda2": [1], "c": "1", "alpha": ["0", "1/2"]}`
/// plus `"a"`, `"b"` for the degree-zero flavor; `"x": "trivial"` selects
/// the one-dimensional inducing module for the Verma machinery.
#[derive(Serialize, Deserialize)]
pub struct ModuleConfigDto {
    #[serde(default = "full_string")]
    pub flavor: String,
    pub n: usize,
    #[serde(default = "none_string")]
    pub g: String,
    #[serde(default)]
    pub lambda1: Vec<i64>,
    #[serde(default)]
    pub lambda2: Vec<i64>,
    #[serde(default = "zero_string")]
    pub c: String,
    #[serde(default)]
    pub alpha: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

fn full_string() -> String {
    "full".to_string()
}

fn none_string() -> String {
    "none".to_string()
}

impl ModuleConfigDto {
    fn v1(&self) -> Result<Irrep, Error> {
        let family = GFamily::parse(&self.g)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown coefficient algebra {:?}", self.g)))?;
        match family {
            GFamily::None => Ok(Irrep::trivial_of_g(GFamily::None)),
            GFamily::Sl(_) => {
                let label = WeightLabel::dominant(self.lambda1.clone())?;
                highest_weight_irrep(&label, family)
            }
            GFamily::Cartan(_) => {
                let values = self
                    .lambda1
                    .iter()
                    .map(|&v| Scalar::from_int(v))
                    .collect();
                Irrep::character(family, values)
            }
        }
    }

    fn alpha(&self) -> Result<Vec<Scalar>, Error> {
        self.alpha.iter().map(|s| s.parse()).collect()
    }

    pub fn to_module(&self) -> Result<TensorModuleConfig, Error> {
        let c: Scalar = self.c.parse()?;
        match self.flavor.as_str() {
            "full" => {
                let v2 = gl_irrep(self.n + 1, self.lambda2.clone(), c)?;
                TensorModuleConfig::full(self.n, self.v1()?, v2, self.alpha()?)
            }
            "tau0" | "degree-zero" => {
                let v2 = gl_irrep(self.n, self.lambda2.clone(), c)?;
                let a: Scalar = self.a.as_deref().unwrap_or("0").parse()?;
                let b: Scalar = self.b.as_deref().unwrap_or("0").parse()?;
                TensorModuleConfig::degree_zero(self.n, self.v1()?, v2, self.alpha()?, a, b)
            }
            other => Err(Error::InvalidConfig(format!(
                "unknown module flavor {other:?}"
            ))),
        }
    }
}

pub fn parse_module_config(source: &str) -> Result<TensorModuleConfig, Error> {
    parse_json::<ModuleConfigDto>(source)?.to_module()
}

/// Inducing-module description for the Verma machinery: either
/// `{"x": "trivial", "n": 1}` or a degree-zero module configuration.
pub fn parse_x_module(source: &str) -> Result<XModule, Error> {
    #[derive(Deserialize)]
    struct Probe {
        x: Option<String>,
        n: Option<usize>,
    }
    let probe: Probe = parse_json(source)?;
    if probe.x.as_deref() == Some("trivial") {
        let n = probe
            .n
            .ok_or_else(|| Error::InvalidConfig("trivial inducing module needs \"n\"".into()))?;
        return Ok(XModule::Trivial { n });
    }
    let dto: ModuleConfigDto = parse_json(source)?;
    if dto.flavor == "full" {
        return Err(Error::FlavorMismatch(
            "the inducing module must be a degree-zero module".into(),
        ));
    }
    Ok(XModule::Tensor(dto.to_module()?))
}

// ---------------------------------------------------------------------------
// weight tables
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct WeightRowDto {
    pub offset: Vec<i64>,
    pub weight: Vec<String>,
    pub dim: u64,
}

#[derive(Serialize, Deserialize)]
pub struct WeightTableDto {
    pub alpha: Vec<String>,
    pub rows: Vec<WeightRowDto>,
}

pub fn weight_table_to_json(t: &WeightTable) -> serde_json::Value {
    let rows = t
        .rows()
        .map(|(r, v)| WeightRowDto {
            offset: r.entries().to_vec(),
            weight: t.weight_at(r).iter().map(ToString::to_string).collect(),
            dim: v,
        })
        .collect();
    serde_json::to_value(WeightTableDto {
        alpha: t.alpha.iter().map(ToString::to_string).collect(),
        rows,
    })
    .expect("table serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_round_trip() {
        let src = r#"{"rank": 2, "terms": [
            {"kind": "d", "i": 0, "k": [1, 2], "c": "1"},
            {"kind": "K", "i": 0, "k": [0, 0], "c": "-2/3"},
            {"kind": "g", "x": 1, "k": [-1, 0], "c": "5"}
        ]}"#;
        let e = parse_element(src).unwrap();
        assert_eq!(e.num_terms(), 3);
        let json = element_to_json(&e).to_string();
        let back = parse_element(&json).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn parse_error_reports_byte_offset() {
        let src = "{\"rank\": 2, \"terms\": [}";
        match parse_element(src) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 22),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_canonical_input_is_normalized_on_load() {
        // K(1,(4,6)) reduces against the exact-differential relation
        let src = r#"{"rank": 2, "terms": [{"kind": "K", "i": 1, "k": [4, 6], "c": "1"}]}"#;
        let e = parse_element(src).unwrap();
        assert_eq!(
            e.coefficient(&BasisSymbol::K {
                i: 0,
                k: MultiIndex::new(vec![4, 6])
            }),
            Scalar::ratio(-2, 3)
        );
    }

    #[test]
    fn config_round_trip() {
        let cfg = parse_config(r#"{"n": 2, "g": "sl2", "mu1": "1", "mu2": "-1/2"}"#).unwrap();
        assert_eq!(cfg.rank(), 3);
        assert_eq!(cfg.cocycle().mu2, Scalar::ratio(-1, 2));
        let dto = ConfigDto::from_config(&cfg);
        assert_eq!(dto.g, "sl2");
    }

    #[test]
    fn irrep_round_trip_with_validation() {
        let rep = crate::reps::standard_rep(2);
        let json = irrep_to_json(&rep).to_string();
        let back = parse_irrep(&json).unwrap();
        assert_eq!(back.dim(), 2);
        assert_eq!(back.identity_scalar(), Some(Scalar::one()));
    }

    #[test]
    fn invalid_irrep_is_rejected() {
        // wrong commutation relations: swap one generator for zero
        let rep = crate::reps::standard_rep(2);
        let mut json = serde_json::to_value(irrep_to_json(&rep)).unwrap();
        json["matrices"][1] = serde_json::json!([["0", "0"], ["0", "0"]]);
        assert!(parse_irrep(&json.to_string()).is_err());
    }

    #[test]
    fn module_and_x_configs() {
        let m = parse_module_config(
            r#"{"flavor": "full", "n": 1, "g": "sl2", "lambda1": [1],
                "lambda2": [1], "c": "1", "alpha": ["0", "1/2"]}"#,
        )
        .unwrap();
        assert_eq!(m.weight_dim(), 4);
        let x = parse_x_module(r#"{"x": "trivial", "n": 1}"#).unwrap();
        assert!(matches!(x, XModule::Trivial { n: 1 }));
        let x = parse_x_module(
            r#"{"flavor": "tau0", "n": 1, "g": "none", "lambda2": [],
                "c": "0", "alpha": ["0"], "a": "1", "b": "0"}"#,
        )
        .unwrap();
        assert!(matches!(x, XModule::Tensor(_)));
    }
}
