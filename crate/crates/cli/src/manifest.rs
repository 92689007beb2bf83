//! Manifest ingestion: a JSON tree with exact expression strings. Parsing
//! either produces valid engine objects or fails with a field-precise error;
//! no floats anywhere in the wire format.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use spaceform_core::acm::AcmStructure;
use spaceform_core::chart::{FramedChart, StructureCoefficients};
use spaceform_core::expr::Expr;
use spaceform_core::fit::SamplePoint;
use spaceform_core::matrix::ExprMat;
use spaceform_core::parse_expr;
use spaceform_core::poly::Symbol;
use spaceform_core::rat::{rat_from_str, Rat};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub chart: Option<ChartSpec>,
    #[serde(default)]
    pub structure: Option<StructureSpec>,
    #[serde(default)]
    pub sample_points: Option<Vec<BTreeMap<String, String>>>,
    #[serde(default)]
    pub expected: Option<ExpectedSpec>,
    /// Data-only manifests: fitted coefficient functions without a chart.
    #[serde(default)]
    pub coefficients: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub trans_sasakian: Option<TransSasakianSpec>,
    #[serde(default)]
    pub deformation: Option<DeformationSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub dimension: usize,
    #[serde(default)]
    pub coordinates: Option<Vec<String>>,
    #[serde(default)]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub structure_constants: Option<Vec<IndexedValue3>>,
    /// Expressions declared nonvanishing on the chart domain.
    #[serde(default)]
    pub nonzero: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    /// Column convention: `phi[k][j]` is the k-th frame component of
    /// `phi(e_j)`, 0-based rows/columns in the JSON arrays.
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexedValue3 {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexedValue4 {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExpectedSpec {
    #[serde(default)]
    pub contact_metric: Option<bool>,
    #[serde(default)]
    pub k_contact: Option<bool>,
    #[serde(default)]
    pub sasakian: Option<bool>,
    #[serde(default)]
    pub trans_sasakian: Option<bool>,
    /// Bracket table entries, 1-based frame indices with i < j.
    #[serde(default)]
    pub brackets: Option<Vec<IndexedValue3>>,
    #[serde(default)]
    pub brackets_all_unlisted_zero: Option<bool>,
    /// Connection table entries, 1-based (i, j, k).
    #[serde(default)]
    pub connection: Option<Vec<IndexedValue3>>,
    #[serde(default)]
    pub connection_all_unlisted_zero: Option<bool>,
    /// Curvature entries `g(R(e_i,e_j)e_k, e_l)`, 1-based, i < j.
    #[serde(default)]
    pub curvature: Option<Vec<IndexedValue4>>,
    #[serde(default)]
    pub curvature_all_unlisted_zero: Option<bool>,
    #[serde(default)]
    pub h: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub kappa: Option<String>,
    #[serde(default)]
    pub mu: Option<String>,
    #[serde(default)]
    pub lambda: Option<String>,
    /// Symbolic coefficient ansatz f1..f6.
    #[serde(default)]
    pub f: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub tau: Option<String>,
    #[serde(default)]
    pub classification: Option<String>,
    #[serde(default)]
    pub eta_einstein: Option<bool>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransSasakianSpec {
    pub alpha: String,
    pub beta: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationSpec {
    pub a: String,
}

/// Field-tagged input error.
#[derive(Debug)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

fn err(field: impl Into<String>, message: impl std::fmt::Display) -> InputError {
    InputError {
        field: field.into(),
        message: message.to_string(),
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, InputError> {
    serde_json::from_str(text).map_err(|e| err("manifest", e))
}

fn expr_at(field: &str, s: &str) -> Result<Expr, InputError> {
    parse_expr(s).map_err(|e| err(field, format!("`{s}`: {e}")))
}

/// Parses an expression and rejects symbols outside the declared coordinates.
fn expr_over_coords(field: &str, s: &str, coords: &[Symbol]) -> Result<Expr, InputError> {
    let e = expr_at(field, s)?;
    for v in e.variables() {
        if !coords.contains(&v) {
            return Err(err(
                field,
                format!("`{s}` mentions `{v}`, which is not a declared coordinate"),
            ));
        }
    }
    Ok(e)
}

/// The engine objects a geometric manifest builds into.
pub struct BuiltGeometry {
    pub structure: AcmStructure,
    pub points: Vec<SamplePoint>,
}

impl Manifest {
    pub fn has_geometry(&self) -> bool {
        self.chart.is_some() && self.structure.is_some()
    }

    pub fn build_chart(&self) -> Result<FramedChart, InputError> {
        let spec = self
            .chart
            .as_ref()
            .ok_or_else(|| err("chart", "missing chart block"))?;
        let dim = spec.dimension;
        match (&spec.coordinates, &spec.frame, &spec.structure_constants) {
            (Some(coords), Some(frame), None) => {
                if coords.len() != dim {
                    return Err(err(
                        "chart.coordinates",
                        format!("expected {dim} names, got {}", coords.len()),
                    ));
                }
                if frame.len() != dim || frame.iter().any(|r| r.len() != dim) {
                    return Err(err("chart.frame", format!("expected a {dim}x{dim} matrix")));
                }
                let symbols: Vec<Symbol> = coords.iter().map(|c| Symbol::new(c)).collect();
                let mut rows = Vec::with_capacity(dim);
                for (i, r) in frame.iter().enumerate() {
                    let mut row = Vec::with_capacity(dim);
                    for (j, cell) in r.iter().enumerate() {
                        row.push(expr_over_coords(
                            &format!("chart.frame[{i}][{j}]"),
                            cell,
                            &symbols,
                        )?);
                    }
                    rows.push(row);
                }
                let mut domain = Vec::new();
                for (i, d) in spec.nonzero.iter().flatten().enumerate() {
                    domain.push(expr_over_coords(
                        &format!("chart.nonzero[{i}]"),
                        d,
                        &symbols,
                    )?);
                }
                FramedChart::from_frame(
                    symbols,
                    ExprMat::from_rows(rows).map_err(|e| err("chart.frame", e))?,
                    domain,
                )
                .map_err(|e| err("chart", e))
            }
            (None, None, Some(constants)) => {
                let mut c = StructureCoefficients::zeros(dim);
                for (idx, entry) in constants.iter().enumerate() {
                    let field = format!("chart.structure_constants[{idx}]");
                    for (name, v) in [("i", entry.i), ("j", entry.j), ("k", entry.k)] {
                        if v < 1 || v > dim {
                            return Err(err(
                                format!("{field}.{name}"),
                                format!("index {v} out of range 1..={dim}"),
                            ));
                        }
                    }
                    let v = expr_over_coords(&format!("{field}.value"), &entry.value, &[])?;
                    c.set(entry.i - 1, entry.j - 1, entry.k - 1, v.clone());
                    c.set(entry.j - 1, entry.i - 1, entry.k - 1, v.neg());
                }
                FramedChart::from_structure_constants(dim, c).map_err(|e| err("chart", e))
            }
            _ => Err(err(
                "chart",
                "provide either coordinates+frame or structure_constants",
            )),
        }
    }

    pub fn build_geometry(&self) -> Result<BuiltGeometry, InputError> {
        let chart = Arc::new(self.build_chart()?);
        let spec = self
            .structure
            .as_ref()
            .ok_or_else(|| err("structure", "missing structure block"))?;
        let dim = chart.dim();
        if spec.phi.len() != dim || spec.phi.iter().any(|r| r.len() != dim) {
            return Err(err("structure.phi", format!("expected a {dim}x{dim} matrix")));
        }
        if spec.xi.len() != dim {
            return Err(err("structure.xi", format!("expected {dim} components")));
        }
        let coords = chart.coordinates().to_vec();
        let mut rows = Vec::with_capacity(dim);
        for (i, r) in spec.phi.iter().enumerate() {
            let mut row = Vec::with_capacity(dim);
            for (j, cell) in r.iter().enumerate() {
                row.push(expr_over_coords(
                    &format!("structure.phi[{i}][{j}]"),
                    cell,
                    &coords,
                )?);
            }
            rows.push(row);
        }
        let mut xi = Vec::with_capacity(dim);
        for (i, c) in spec.xi.iter().enumerate() {
            xi.push(expr_over_coords(&format!("structure.xi[{i}]"), c, &coords)?);
        }
        let structure = AcmStructure::new(
            chart.clone(),
            ExprMat::from_rows(rows).map_err(|e| err("structure.phi", e))?,
            xi,
        )
        .map_err(|e| err("structure", e))?;
        let points = self.resolve_points(&chart)?;
        Ok(BuiltGeometry { structure, points })
    }

    fn resolve_points(&self, chart: &FramedChart) -> Result<Vec<SamplePoint>, InputError> {
        if let Some(list) = &self.sample_points {
            let mut out = Vec::with_capacity(list.len());
            for (idx, entry) in list.iter().enumerate() {
                out.push(parse_point(entry, &format!("sample_points[{idx}]"))?);
            }
            return Ok(out);
        }
        Ok(default_points(chart))
    }
}

/// Default sample ladder: `{1, 2, 3, 5, 7}` on the last coordinate, zero on
/// the others; the single empty point for bracket-seeded charts.
pub fn default_points(chart: &FramedChart) -> Vec<SamplePoint> {
    let coords = chart.coordinates();
    if coords.is_empty() {
        return vec![SamplePoint::new()];
    }
    let primary = coords.last().expect("nonempty").clone();
    [1i64, 2, 3, 5, 7]
        .iter()
        .map(|&v| {
            let mut p = SamplePoint::new();
            for c in coords {
                p.insert(c.clone(), Rat::from_integer(0.into()));
            }
            p.insert(primary.clone(), Rat::from_integer(v.into()));
            p
        })
        .collect()
}

/// Points from a `--points` override: values assigned to the last
/// coordinate, zero elsewhere.
pub fn override_points(
    chart: &FramedChart,
    values: &[String],
) -> Result<Vec<SamplePoint>, InputError> {
    let coords = chart.coordinates();
    if coords.is_empty() {
        return Err(err(
            "--points",
            "this chart has no coordinates to sample",
        ));
    }
    let primary = coords.last().expect("nonempty").clone();
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let r = rat_from_str(v).map_err(|e| err("--points", e))?;
        let mut p = SamplePoint::new();
        for c in coords {
            p.insert(c.clone(), Rat::from_integer(0.into()));
        }
        p.insert(primary.clone(), r);
        out.push(p);
    }
    Ok(out)
}

pub fn parse_point(
    entry: &BTreeMap<String, String>,
    field: &str,
) -> Result<SamplePoint, InputError> {
    let mut p = SamplePoint::new();
    for (k, v) in entry {
        let r = rat_from_str(v).map_err(|e| err(format!("{field}.{k}"), e))?;
        p.insert(Symbol::new(k), r);
    }
    Ok(p)
}

/// Parses the expected coefficient ansatz into the f1..f6 array, with
/// missing entries defaulting to zero.
pub fn parse_coefficients(
    map: &BTreeMap<String, String>,
    field: &str,
) -> Result<[Expr; 6], InputError> {
    let mut f: [Expr; 6] = [
        Expr::zero(),
        Expr::zero(),
        Expr::zero(),
        Expr::zero(),
        Expr::zero(),
        Expr::zero(),
    ];
    for (k, v) in map {
        let idx = match k.as_str() {
            "f1" => 0,
            "f2" => 1,
            "f3" => 2,
            "f4" => 3,
            "f5" => 4,
            "f6" => 5,
            other => {
                return Err(err(
                    format!("{field}.{other}"),
                    "expected keys f1..f6",
                ))
            }
        };
        f[idx] = expr_at(&format!("{field}.{k}"), v)?;
    }
    Ok(f)
}
