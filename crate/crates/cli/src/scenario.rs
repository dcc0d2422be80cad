//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! id = unipotent
//! n = 2
//! p = 2
//! m = 1
//! analysis = cr
//! gen = [[1, 1], [0, 1]]
//! ```
//!
//! `gen`, `normal_gen` and `sigma` may be repeated. See `docs/scenario-format.md`
//! for the analysis-specific keys.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;
use tits_cr::{BuildingAuto, Caps, Field, FqMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Analysis {
    Cr,
    SigmaCr,
    GsigmaCr,
    RelativeCr,
    SigmaVariantCr,
    Clifford,
    TauSearch,
    Topology,
    LeviSphere,
    Corpus,
}

impl Analysis {
    pub const ALL: [Analysis; 10] = [
        Analysis::Cr,
        Analysis::SigmaCr,
        Analysis::GsigmaCr,
        Analysis::RelativeCr,
        Analysis::SigmaVariantCr,
        Analysis::Clifford,
        Analysis::TauSearch,
        Analysis::Topology,
        Analysis::LeviSphere,
        Analysis::Corpus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Cr => "cr",
            Analysis::SigmaCr => "sigma_cr",
            Analysis::GsigmaCr => "gsigma_cr",
            Analysis::RelativeCr => "relative_cr",
            Analysis::SigmaVariantCr => "sigma_variant_cr",
            Analysis::Clifford => "clifford",
            Analysis::TauSearch => "tau_search",
            Analysis::Topology => "topology",
            Analysis::LeviSphere => "levi_sphere",
            Analysis::Corpus => "corpus",
        }
    }

    fn parse(s: &str) -> Option<Analysis> {
        Self::ALL.into_iter().find(|a| a.name() == s)
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Analysis-specific parameters; unused ones are rejected at parse time.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    /// Extension degree for `gsigma_cr`.
    pub r: Option<u32>,
    /// Degree of the fixed subfield when a `gsigma_cr` group is given over the extension.
    pub base_m: Option<u32>,
    /// Frobenius power `x ↦ x^{p^k}` for `sigma_cr`.
    pub frobenius: Option<u32>,
    pub blocks: Option<Vec<usize>>,
    pub kconj: Option<FqMatrix>,
    pub normal_gens: Vec<FqMatrix>,
    pub sigma: Vec<BuildingAuto>,
    pub r_max: Option<u32>,
    /// `cap_*` keys, applied on top of the defaults.
    pub caps: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub id: String,
    pub n: usize,
    pub field: Field,
    pub generators: Vec<FqMatrix>,
    pub analysis: Analysis,
    pub params: Params,
}

const CAP_KEYS: [&str; 7] = [
    "cap_order",
    "cap_subspaces",
    "cap_building_n",
    "cap_building_vertices",
    "cap_scan",
    "cap_levi_nodes",
    "cap_simplices",
];

/// Applies a `cap_*` key to `caps`.
pub fn set_cap(caps: &mut Caps, key: &str, value: u64) {
    match key {
        "cap_order" => caps.max_group_order = value as usize,
        "cap_subspaces" => caps.max_subspaces = value,
        "cap_building_n" => caps.max_building_n = value as usize,
        "cap_building_vertices" => caps.max_building_vertices = value,
        "cap_scan" => caps.max_scan = value,
        "cap_levi_nodes" => caps.max_levi_nodes = value,
        "cap_simplices" => caps.max_simplices = value as usize,
        _ => unreachable!("unknown cap key {key}"),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ParseError> {
    v.parse().map_err(|_| {
        at(
            line,
            format!("`{key}` expects a non-negative integer, got `{v}`"),
        )
    })
}

fn parse_rows(line: usize, v: &str) -> Result<Vec<Vec<i64>>, ParseError> {
    serde_json::from_str(v).map_err(|e| at(line, format!("bad matrix `{v}`: {e}")))
}

struct Raw {
    line: usize,
    key: String,
    value: String,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut raw = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let content = l.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| at(line, "expected `key = value`"))?;
        raw.push(Raw {
            line,
            key: k.trim().to_string(),
            value: v.trim().to_string(),
        });
    }

    let single = |key: &'static str| -> Result<Option<&Raw>, ParseError> {
        let mut it = raw.iter().filter(|r| r.key == key);
        let first = it.next();
        if let Some(dup) = it.next() {
            return Err(at(dup.line, format!("duplicate key `{key}`")));
        }
        Ok(first)
    };
    let id = single("id")?
        .ok_or(ParseError::Missing("id"))?
        .value
        .clone();
    let n_raw = single("n")?.ok_or(ParseError::Missing("n"))?;
    let n: usize = parse_num(n_raw.line, "n", &n_raw.value)?;
    if n == 0 {
        return Err(at(n_raw.line, "`n` must be positive"));
    }
    let p_raw = single("p")?.ok_or(ParseError::Missing("p"))?;
    let p: u32 = parse_num(p_raw.line, "p", &p_raw.value)?;
    let m: u32 = match single("m")? {
        Some(r) => parse_num(r.line, "m", &r.value)?,
        None => 1,
    };
    let field = Field::new(p, m).map_err(|e| at(p_raw.line, e.to_string()))?;
    let a_raw = single("analysis")?.ok_or(ParseError::Missing("analysis"))?;
    let analysis = Analysis::parse(&a_raw.value).ok_or_else(|| {
        let known: Vec<&str> = Analysis::ALL.iter().map(|a| a.name()).collect();
        at(
            a_raw.line,
            format!(
                "unknown analysis `{}` (expected one of {})",
                a_raw.value,
                known.join(", ")
            ),
        )
    })?;

    let matrix =
        |line: usize, v: &str, size: usize, field: &Field| -> Result<FqMatrix, ParseError> {
            let rows = parse_rows(line, v)?;
            if rows.len() != size || rows.iter().any(|r| r.len() != size) {
                return Err(at(line, format!("expected a {size} x {size} matrix")));
            }
            let m = FqMatrix::from_ints(field, &rows).map_err(|e| at(line, e.to_string()))?;
            if !m.is_invertible(field) {
                return Err(at(line, "matrix is not invertible"));
            }
            Ok(m)
        };

    let mut generators = Vec::new();
    let mut params = Params::default();
    for r in &raw {
        let (line, v) = (r.line, r.value.as_str());
        let allowed: &[Analysis] = match r.key.as_str() {
            "id" | "n" | "p" | "m" | "analysis" => continue,
            "gen" => {
                generators.push(matrix(line, v, n, &field)?);
                continue;
            }
            k if CAP_KEYS.contains(&k) => {
                if params
                    .caps
                    .insert(k.to_string(), parse_num(line, k, v)?)
                    .is_some()
                {
                    return Err(at(line, format!("duplicate key `{k}`")));
                }
                continue;
            }
            "r" => {
                params.r = Some(parse_num(line, "r", v)?);
                &[Analysis::GsigmaCr]
            }
            "base_m" => {
                params.base_m = Some(parse_num(line, "base_m", v)?);
                &[Analysis::GsigmaCr]
            }
            "frobenius" => {
                params.frobenius = Some(parse_num(line, "frobenius", v)?);
                &[Analysis::SigmaCr]
            }
            "blocks" => {
                let sizes: Vec<usize> = serde_json::from_str(v)
                    .map_err(|e| at(line, format!("bad block list `{v}`: {e}")))?;
                if sizes.iter().sum::<usize>() != n || sizes.contains(&0) {
                    return Err(at(
                        line,
                        format!("block sizes must be positive and sum to n = {n}"),
                    ));
                }
                params.blocks = Some(sizes);
                &[Analysis::RelativeCr, Analysis::LeviSphere]
            }
            "kconj" => {
                params.kconj = Some(matrix(line, v, n, &field)?);
                &[Analysis::RelativeCr]
            }
            "normal_gen" => {
                params.normal_gens.push(matrix(line, v, n, &field)?);
                &[Analysis::Clifford]
            }
            "sigma" => {
                params.sigma.push(parse_sigma(line, v, n, &field, &matrix)?);
                &[
                    Analysis::SigmaVariantCr,
                    Analysis::Topology,
                    Analysis::LeviSphere,
                ]
            }
            "r_max" => {
                params.r_max = Some(parse_num(line, "r_max", v)?);
                &[Analysis::TauSearch]
            }
            other => return Err(at(line, format!("unknown key `{other}`"))),
        };
        if !allowed.contains(&analysis) {
            return Err(at(
                line,
                format!("key `{}` does not apply to analysis `{analysis}`", r.key),
            ));
        }
    }
    if analysis == Analysis::RelativeCr && params.blocks.is_none() {
        return Err(ParseError::Missing("blocks"));
    }
    if analysis == Analysis::SigmaVariantCr && params.sigma.is_empty() {
        return Err(ParseError::Missing("sigma"));
    }
    Ok(Scenario {
        id,
        n,
        field,
        generators,
        analysis,
        params,
    })
}

fn parse_sigma(
    line: usize,
    v: &str,
    n: usize,
    field: &Field,
    matrix: &dyn Fn(usize, &str, usize, &Field) -> Result<FqMatrix, ParseError>,
) -> Result<BuildingAuto, ParseError> {
    let (kind, rest) = v
        .split_once(char::is_whitespace)
        .map_or((v, ""), |(k, r)| (k, r.trim()));
    match kind {
        "duality" if rest.is_empty() => Ok(BuildingAuto::Duality),
        "frobenius" => {
            let k: u32 = parse_num(
                line,
                "sigma frobenius",
                if rest.is_empty() { "1" } else { rest },
            )?;
            if k == 0 {
                return Err(at(line, "Frobenius power must be at least 1"));
            }
            Ok(BuildingAuto::Frobenius(k))
        }
        "inner" => Ok(BuildingAuto::Inner(matrix(line, rest, n, field)?)),
        _ => Err(at(
            line,
            format!("bad sigma `{v}` (expected `duality`, `frobenius k` or `inner [[..]]`)"),
        )),
    }
}

impl Scenario {
    /// Caps for this scenario: `base`, then the scenario's `cap_*` keys.
    pub fn caps(&self, base: &Caps) -> Caps {
        let mut caps = base.clone();
        for (k, &v) in &self.params.caps {
            set_cap(&mut caps, k, v);
        }
        caps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "id = u\nn = 2\np = 2\nm = 1\nanalysis = cr\ngen = [[1,1],[0,1]]\n";

    #[test]
    fn minimal() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.field, Field::new(2, 1).unwrap());
        assert_eq!(s.generators.len(), 1);
        assert_eq!(s.analysis, Analysis::Cr);
    }

    #[test]
    fn comments_and_defaults() {
        let s =
            parse_scenario("# header\nid = t # trailing\n\nn = 3\np = 3\nanalysis = topology\n")
                .unwrap();
        assert_eq!(s.field.order(), 3);
        assert!(s.generators.is_empty());
    }

    #[test]
    fn missing_n_is_named() {
        let err = parse_scenario("id = x\np = 2\nanalysis = cr\n").unwrap_err();
        assert_eq!(err, ParseError::Missing("n"));
        assert!(err.to_string().contains("`n`"));
    }

    #[test]
    fn singular_generator_is_rejected_with_line() {
        let err = parse_scenario("id = x\nn = 2\np = 2\nanalysis = cr\ngen = [[1,1],[1,1]]\n")
            .unwrap_err();
        assert_eq!(err, at(5, "matrix is not invertible"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("id = x\nn = 2\np = 2\nanalysis = magic\n", 4),
            (
                "id = x\nn = 2\np = 2\nanalysis = cr\ngen = [[1,0,0],[0,1,0],[0,0,1]]\n",
                5,
            ),
            ("id = x\nn = 2\np = 2\nanalysis = cr\nr = 2\n", 5),
            ("id = x\nn = 2\np = 4\nanalysis = cr\n", 3),
            ("id = x\nn = 2\np = 2\nanalysis = cr\nbogus\n", 5),
            ("id = x\nn = 2\nn = 3\np = 2\nanalysis = cr\n", 3),
            (
                "id = x\nn = 3\np = 2\nanalysis = relative_cr\nblocks = [2, 2]\n",
                5,
            ),
        ];
        for (text, line) in cases {
            match parse_scenario(text).unwrap_err() {
                ParseError::Line { line: l, .. } => assert_eq!(l, line, "{text}"),
                e => panic!("unexpected {e:?}"),
            }
        }
    }

    #[test]
    fn analysis_parameters() {
        let s = parse_scenario(
            "id = x\nn = 3\np = 2\nanalysis = sigma_variant_cr\nsigma = duality\nsigma = inner [[0,1,0],[1,0,0],[0,0,1]]\nsigma = frobenius\ncap_order = 10\n",
        )
        .unwrap();
        assert_eq!(s.params.sigma.len(), 3);
        assert_eq!(s.params.sigma[0], BuildingAuto::Duality);
        assert_eq!(s.params.sigma[2], BuildingAuto::Frobenius(1));
        assert_eq!(s.caps(&Caps::default()).max_group_order, 10);
        let s = parse_scenario("id = x\nn = 3\np = 2\nanalysis = relative_cr\nblocks = [2, 1]\n")
            .unwrap();
        assert_eq!(s.params.blocks, Some(vec![2, 1]));
        assert_eq!(
            parse_scenario("id = x\nn = 3\np = 2\nanalysis = relative_cr\n").unwrap_err(),
            ParseError::Missing("blocks")
        );
    }

    #[test]
    fn extension_field_entries() {
        // over F_4 codes 0..3 are field elements; 2 is a root of x^2 + x + 1
        let s = parse_scenario("id = x\nn = 2\np = 2\nm = 2\nanalysis = cr\ngen = [[2,0],[0,1]]\n")
            .unwrap();
        assert_eq!(s.generators[0].get(0, 0), 2);
        assert!(parse_scenario(
            "id = x\nn = 2\np = 2\nm = 2\nanalysis = cr\ngen = [[4,0],[0,1]]\n"
        )
        .is_err());
    }
}
