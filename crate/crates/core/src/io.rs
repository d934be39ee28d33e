//! JSON file formats for representations, mixtures and reports.
//!
//! A representation is `{"n": 2, "d": 1, "grid": [[cell, ...], ...]}` where
//! each cell is a row-major `d × d` complex matrix written as a flat list of
//! `[re, im]` pairs (a list of rows of pairs is also accepted on input).
//! A mixture is `{"n": 3, "atoms": [{"weight": 0.5, "rep": ...}, ...]}`; a
//! classical atom may instead carry `"perm": [images]` with 0-based images.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distances::DistanceReport;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::magic::{MagicGrid, MagicUnitary, ValidationReport};
use crate::perm::Permutation;
use crate::states::{StateMixture, WEIGHT_SUM_TOL};

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum CellJson {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    n: usize,
    d: usize,
    grid: Vec<Vec<CellJson>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    weight: f64,
    #[serde(default)]
    rep: Option<RepJson>,
    #[serde(default)]
    perm: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureJson {
    n: usize,
    atoms: Vec<AtomJson>,
}

#[derive(Serialize)]
struct RepOut {
    n: usize,
    d: usize,
    grid: Vec<Vec<Vec<[f64; 2]>>>,
}

fn cell_matrix(cell: CellJson, d: usize) -> Result<CMatrix> {
    let flat: Vec<[f64; 2]> = match cell {
        CellJson::Flat(v) => v,
        CellJson::Rows(rows) => {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Parse(format!("cell is not {d}x{d}")));
            }
            rows.into_iter().flatten().collect()
        }
    };
    if flat.len() != d * d {
        return Err(Error::Parse(format!("cell has {} entries, expected {}", flat.len(), d * d)));
    }
    if flat.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("non-finite matrix entry".into()));
    }
    Ok(CMatrix::from_row_iterator(d, d, flat.into_iter().map(|[re, im]| c(re, im))))
}

fn grid_from_json(rep: RepJson) -> Result<MagicGrid> {
    let RepJson { n, d, grid } = rep;
    if n == 0 || d == 0 {
        return Err(Error::Parse("n and d must be positive".into()));
    }
    if grid.len() != n || grid.iter().any(|row| row.len() != n) {
        return Err(Error::Parse(format!("grid is not {n}x{n}")));
    }
    let cells = grid.into_iter().flatten().map(|cell| cell_matrix(cell, d)).collect::<Result<Vec<_>>>()?;
    Ok(MagicGrid { n, d, cells })
}

/// Parses a representation without checking the magic unitary relations.
pub fn parse_grid(text: &str) -> Result<MagicGrid> {
    grid_from_json(serde_json::from_str(text)?)
}

/// Parses and validates a representation.
pub fn parse_magic_unitary(text: &str) -> Result<MagicUnitary> {
    MagicUnitary::try_from(parse_grid(text)?)
}

fn atom_rep(atom: AtomJson, n: usize) -> Result<(f64, MagicGrid)> {
    let grid = match (atom.rep, atom.perm) {
        (Some(rep), None) => grid_from_json(rep)?,
        (None, Some(images)) => {
            let sigma = Permutation::new(images).map_err(|e| Error::Parse(e.to_string()))?;
            MagicUnitary::from_permutation(&sigma).to_grid()
        }
        _ => return Err(Error::Parse("each atom needs exactly one of \"rep\" or \"perm\"".into())),
    };
    if grid.n != n {
        return Err(Error::SizeMismatch { left: n, right: grid.n });
    }
    Ok((atom.weight, grid))
}

/// Parses and validates a mixture; weights must already sum to one.
pub fn parse_mixture(text: &str) -> Result<StateMixture> {
    let raw: MixtureJson = serde_json::from_str(text)?;
    let n = raw.n;
    let atoms = raw
        .atoms
        .into_iter()
        .map(|a| {
            let (w, grid) = atom_rep(a, n)?;
            Ok((w, MagicUnitary::try_from(grid)?))
        })
        .collect::<Result<Vec<_>>>()?;
    StateMixture::new(atoms)
}

/// What a file on disk turned out to contain.
#[derive(Clone, Debug)]
pub enum Document {
    Rep(MagicGrid),
    Mixture { n: usize, atoms: Vec<(f64, MagicGrid)> },
}

/// Parses either format, deciding by the presence of `"atoms"`.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("atoms").is_some() {
        let raw: MixtureJson = serde_json::from_value(value)?;
        let n = raw.n;
        let atoms = raw.atoms.into_iter().map(|a| atom_rep(a, n)).collect::<Result<Vec<_>>>()?;
        if atoms.is_empty() {
            return Err(Error::EmptyMixture);
        }
        Ok(Document::Mixture { n, atoms })
    } else {
        Ok(Document::Rep(grid_from_json(serde_json::from_value(value)?)?))
    }
}

/// Validation outcome for a whole file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileValidation {
    pub kind: &'static str,
    pub passed: bool,
    pub worst: f64,
    /// `|Σ w − 1|` for mixtures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_sum_residual: Option<f64>,
    pub reports: Vec<ValidationReport>,
}

pub fn validate_document(doc: &Document) -> FileValidation {
    match doc {
        Document::Rep(grid) => {
            let report = grid.validate();
            FileValidation {
                kind: "magic_unitary",
                passed: report.passed,
                worst: report.worst,
                weight_sum_residual: None,
                reports: vec![report],
            }
        }
        Document::Mixture { atoms, .. } => {
            let reports: Vec<ValidationReport> = atoms.iter().map(|(_, g)| g.validate()).collect();
            let weights_ok = atoms.iter().all(|(w, _)| w.is_finite() && *w >= 0.0);
            let residual = (atoms.iter().map(|(w, _)| w).sum::<f64>() - 1.0).abs();
            let worst = reports.iter().map(|r| r.worst).fold(0.0, f64::max);
            FileValidation {
                kind: "state_mixture",
                passed: weights_ok && residual <= WEIGHT_SUM_TOL && reports.iter().all(|r| r.passed),
                worst,
                weight_sum_residual: Some(if weights_ok { residual } else { f64::INFINITY }),
                reports,
            }
        }
    }
}

fn rep_out(rep: &MagicUnitary) -> RepOut {
    let n = rep.n();
    let grid = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let m = rep.cell(i, j).as_matrix();
                    let d = m.nrows();
                    (0..d * d)
                        .map(|k| {
                            let z = m[(k / d, k % d)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    RepOut { n, d: rep.d(), grid }
}

pub fn magic_unitary_to_json(rep: &MagicUnitary) -> String {
    serde_json::to_string(&rep_out(rep)).expect("finite matrices serialize")
}

/// Writes a mixture, using the `"perm"` shorthand for one-dimensional
/// permutation atoms.
pub fn mixture_to_json(phi: &StateMixture) -> String {
    let atoms: Vec<Value> = phi
        .atoms()
        .iter()
        .map(|wa| match (wa.atom.d(), wa.atom.classical_permutation()) {
            (1, Some(sigma)) => serde_json::json!({"weight": wa.weight, "perm": sigma.images()}),
            _ => serde_json::json!({"weight": wa.weight, "rep": rep_out(wa.atom.rep())}),
        })
        .collect();
    serde_json::json!({"n": phi.n(), "atoms": atoms}).to_string()
}

/// One report as an object, several as an array.
pub fn reports_to_json(reports: &[DistanceReport]) -> String {
    let text = match reports {
        [single] => serde_json::to_string_pretty(single),
        many => serde_json::to_string_pretty(many),
    };
    text.expect("reports serialize")
}

pub fn reports_to_csv(reports: &[DistanceReport]) -> String {
    let mut out = String::from("metric,lower,upper,exact_for_presented_atoms\n");
    for r in reports {
        out.push_str(&format!("{},{:?},{:?},{}\n", r.metric, r.lower, r.upper, r.exact_for_presented_atoms));
    }
    out
}
