use serde::{Deserialize, Serialize};

use envelope::config::Resolved;
use envelope::etsolver::EtSolution;
use envelope::model::Builtin;
use envelope::observables::Observables;
use envelope::reproduce::{reference_data, External, Printed, HARTREE_EV};

/// Published numbers for a config that matches a benchmark row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReference {
    pub table: String,
    pub row: String,
    pub et: Printed,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iet: Option<Printed>,
    /// Values from other methods, not computed here.
    pub external: Vec<External>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: Resolved,
    pub solution: EtSolution,
    pub observables: Observables,
    pub binding_energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding_energy_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<TableReference>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn new(input: Resolved, solution: EtSolution, ev: bool) -> Self {
        let reference = find_reference(&input);
        let binding = -solution.energy;
        RunReport {
            observables: solution.observables.clone(),
            binding_energy: binding,
            binding_energy_ev: ev.then_some(binding * HARTREE_EV),
            reference,
            timing_ms: None,
            input,
            solution,
        }
    }
}

fn find_reference(input: &Resolved) -> Option<TableReference> {
    let data = reference_data().ok()?;
    let same = |b: Builtin| envelope::model::builtin_system(&b).is_ok_and(|s| s == input.spec);
    for r in &data.table1 {
        if same(Builtin::UltraRelOsc { lambda: r.lambda, n: 3 }) {
            return Some(TableReference {
                table: "table1".into(),
                row: format!("lambda = {}", r.lambda),
                et: r.et.clone(),
                iet: Some(r.iet.clone()),
                external: vec![External {
                    column: "HOB0".into(),
                    value: r.hob0.clone(),
                }],
            });
        }
    }
    for r in &data.table2 {
        if same(Builtin::PowerLawThreeBody {
            mass: r.mass,
            exponent: r.exponent,
        }) {
            return Some(TableReference {
                table: "table2".into(),
                row: format!("m = {}, beta = {}", r.mass, r.exponent),
                et: r.et.clone(),
                iet: Some(r.iet.clone()),
                external: vec![
                    External {
                        column: "exact".into(),
                        value: r.exact.clone(),
                    },
                    External {
                        column: "HOB0".into(),
                        value: r.hob0.clone(),
                    },
                ],
            });
        }
    }
    for r in &data.table3 {
        if same(Builtin::Atom {
            charge: r.charge,
            electrons: r.electrons,
            nuclear_mass: r.nuclear_mass,
        }) {
            let mut external = vec![External {
                column: "Exp".into(),
                value: r.exp.clone(),
            }];
            external.extend(r.hob0.as_ref().map(|h| External {
                column: "HOB0".into(),
                value: h.clone(),
            }));
            return Some(TableReference {
                table: "table3 (eV)".into(),
                row: r.label.clone(),
                et: r.et.clone(),
                iet: r.iet.clone(),
                external,
            });
        }
    }
    None
}
