//! The three benchmark tables.
//!
//! Published values live in `data/reference.toml`, stored as printed. Only
//! the ET and IET columns are recomputed; the other columns (`exact`,
//! `exp`, `hob0`) are external constants carried along for comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etsolver::{stationarize, SolverConfig};
use crate::model::{builtin_system, Builtin, QuantumSpec};

/// Hartree to electron-volt factor used for the atom table.
pub const HARTREE_EV: f64 = 27.21;

const REFERENCE: &str = include_str!("../data/reference.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Table1,
    Table2,
    Table3,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::Table1, Table::Table2, Table::Table3];
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::Table1 => "table1",
            Table::Table2 => "table2",
            Table::Table3 => "table3",
        })
    }
}

/// A number as printed, e.g. `"5.5971"` or `"1030"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Printed(pub String);

impl Printed {
    pub fn value(&self) -> f64 {
        self.0.parse().unwrap_or(f64::NAN)
    }

    pub fn decimals(&self) -> usize {
        self.0.split_once('.').map_or(0, |(_, frac)| frac.len())
    }

    /// One unit in the last printed digit.
    pub fn last_digit(&self) -> f64 {
        10f64.powi(-(self.decimals() as i32))
    }

    /// Whether `x` prints as this value at the same number of decimals.
    pub fn matches(&self, x: f64) -> bool {
        format!("{:.*}", self.decimals(), x) == self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub lambda: f64,
    pub et: Printed,
    pub iet: Printed,
    pub hob0: Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub mass: f64,
    pub exponent: f64,
    pub et: Printed,
    pub iet: Printed,
    pub exact: Printed,
    pub hob0: Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table3Row {
    pub label: String,
    pub charge: f64,
    pub electrons: usize,
    pub nuclear_mass: f64,
    pub et: Printed,
    pub iet: Option<Printed>,
    pub exp: Printed,
    pub hob0: Option<Printed>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceData {
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub table3: Vec<Table3Row>,
}

pub fn reference_data() -> Result<ReferenceData> {
    toml::from_str(REFERENCE).map_err(|e| Error::Config(format!("reference data: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "detail")]
pub enum CellStatus {
    Pass,
    Fail,
    /// No published value and no computable one (IET for many fermions).
    NotApplicable,
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub column: String,
    /// In the table's unit.
    pub computed: Option<f64>,
    /// Solver energy before any unit conversion.
    pub raw: Option<f64>,
    pub reference: Option<Printed>,
    pub tolerance: f64,
    pub abs_dev: Option<f64>,
    pub rel_dev: Option<f64>,
    pub status: CellStatus,
}

/// A published value from another method, never computed here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct External {
    pub column: String,
    pub value: Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
    pub external: Vec<External>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: Table,
    pub title: String,
    pub unit: String,
    pub rows: Vec<Row>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| {
            r.checks.iter().all(|c| c.passed)
                && r.cells.iter().all(|c| matches!(c.status, CellStatus::Pass | CellStatus::NotApplicable))
        })
    }

    pub fn cell(&self, row: usize, column: &str) -> Option<&Cell> {
        self.rows.get(row)?.cells.iter().find(|c| c.column == column)
    }
}

fn cell(column: &str, outcome: Result<f64>, scale: f64, reference: Option<&Printed>, tolerance: impl Fn(&Printed) -> f64) -> Cell {
    let mut c = Cell {
        column: column.into(),
        computed: None,
        raw: None,
        reference: reference.cloned(),
        tolerance: reference.map_or(0.0, &tolerance),
        abs_dev: None,
        rel_dev: None,
        status: CellStatus::NotApplicable,
    };
    match (outcome, reference) {
        (Ok(e), reference) => {
            let v = scale * e;
            c.raw = Some(e);
            c.computed = Some(v);
            if let Some(r) = reference {
                let dev = v - r.value();
                c.abs_dev = Some(dev);
                c.rel_dev = Some(dev / r.value().abs());
                c.status = if dev.abs() <= c.tolerance {
                    CellStatus::Pass
                } else {
                    CellStatus::Fail
                };
            }
        }
        (Err(Error::IetUnsupported(_)), None) => {}
        (Err(e), _) => c.status = CellStatus::Error(e.to_string()),
    }
    c
}

fn solve_energy(builtin: &Builtin, state: &QuantumSpec) -> Result<f64> {
    let spec = builtin_system(builtin)?;
    Ok(stationarize(&spec, state, &SolverConfig::default())?.energy)
}

fn absolute(tol: f64) -> impl Fn(&Printed) -> f64 {
    move |_| tol
}

/// `max(0.5 %, one unit in the last printed digit)`.
fn loose(p: &Printed) -> f64 {
    (0.005 * p.value().abs()).max(p.last_digit())
}

fn ext(column: &str, value: &Printed) -> External {
    External {
        column: column.into(),
        value: value.clone(),
    }
}

fn table1(data: &ReferenceData) -> TableReport {
    let rows = data
        .table1
        .iter()
        .map(|r| {
            let b = Builtin::UltraRelOsc { lambda: r.lambda, n: 3 };
            Row {
                label: format!("lambda = {}", r.lambda),
                cells: vec![
                    cell("ET", solve_energy(&b, &QuantumSpec::ground_state()), 1.0, Some(&r.et), absolute(1e-3)),
                    cell("IET", solve_energy(&b, &QuantumSpec::improved_ground_state()), 1.0, Some(&r.iet), absolute(1e-3)),
                ],
                external: vec![ext("HOB0", &r.hob0)],
                checks: vec![],
            }
        })
        .collect();
    TableReport {
        table: Table::Table1,
        title: "Three ultrarelativistic bosons, two harmonic couplings".into(),
        unit: "natural units".into(),
        rows,
    }
}

fn table2(data: &ReferenceData) -> TableReport {
    let rows = data
        .table2
        .iter()
        .map(|r| {
            let b = Builtin::PowerLawThreeBody {
                mass: r.mass,
                exponent: r.exponent,
            };
            let et = cell("ET", solve_energy(&b, &QuantumSpec::ground_state()), 1.0, Some(&r.et), absolute(1e-3));
            let iet = cell("IET", solve_energy(&b, &QuantumSpec::improved_ground_state()), 1.0, Some(&r.iet), absolute(1e-3));
            let exact = r.exact.value();
            let side = et.computed.map(|e| if r.exponent < 2.0 { e >= exact } else { e <= exact });
            Row {
                label: format!("m = {}, beta = {}", r.mass, r.exponent),
                cells: vec![et, iet],
                external: vec![ext("exact", &r.exact), ext("HOB0", &r.hob0)],
                checks: vec![Check {
                    name: if r.exponent < 2.0 { "ET >= exact" } else { "ET <= exact" }.into(),
                    passed: side.unwrap_or(false),
                }],
            }
        })
        .collect();
    TableReport {
        table: Table::Table2,
        title: "Masses 1, 1, m with pair potentials sgn(beta) r^beta / 2".into(),
        unit: "natural units".into(),
        rows,
    }
}

fn table3(data: &ReferenceData) -> TableReport {
    let rows = data
        .table3
        .iter()
        .map(|r| {
            let b = Builtin::Atom {
                charge: r.charge,
                electrons: r.electrons,
                nuclear_mass: r.nuclear_mass,
            };
            let et = cell("ET", solve_energy(&b, &QuantumSpec::ground_state()), -HARTREE_EV, Some(&r.et), loose);
            let iet = cell(
                "IET",
                solve_energy(&b, &QuantumSpec::improved_ground_state()),
                -HARTREE_EV,
                r.iet.as_ref(),
                loose,
            );
            let mut checks = Vec::new();
            if r.electrons == 1 {
                checks.push(Check {
                    name: "IET equals Exp".into(),
                    passed: iet.computed.is_some_and(|v| r.exp.matches(v)),
                });
            }
            let mut external = vec![ext("Exp", &r.exp)];
            external.extend(r.hob0.as_ref().map(|h| ext("HOB0", h)));
            Row {
                label: r.label.clone(),
                cells: vec![et, iet],
                external,
                checks,
            }
        })
        .collect();
    TableReport {
        table: Table::Table3,
        title: "Ground-state binding energies of atoms and ions".into(),
        unit: "eV".into(),
        rows,
    }
}

/// Recomputes a table. Solver failures are reported per cell.
pub fn reproduce(table: Table) -> Result<TableReport> {
    let data = reference_data()?;
    Ok(match table {
        Table::Table1 => table1(&data),
        Table::Table2 => table2(&data),
        Table::Table3 => table3(&data),
    })
}
