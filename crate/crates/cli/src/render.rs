use std::fmt::Write;

use envelope::etsolver::EtSolution;
use envelope::hosolver::ModeBlock;
use envelope::reproduce::{Cell, CellStatus, TableReport};

use crate::report::RunReport;

fn params_flat(sol: &EtSolution) -> Vec<(String, f64)> {
    let p = &sol.params;
    let mut out = Vec::new();
    for (a, mu) in p.mu.iter().enumerate() {
        out.push((format!("mu.{a}"), *mu));
    }
    for (a, nu) in p.nu.iter().enumerate() {
        out.push((format!("nu.{a}"), *nu));
    }
    for a in 0..p.rho.len() {
        for b in a..p.rho.len() {
            out.push((format!("rho.{a}.{b}"), p.rho[a][b]));
        }
    }
    out
}

pub fn csv(report: &RunReport) -> String {
    let sol = &report.solution;
    let mut s = String::from("field,value\n");
    let mut row = |k: &str, v: String| writeln!(s, "{k},{v}").unwrap();
    row("energy", format!("{:.12e}", sol.energy));
    row("ho_energy", format!("{:.12e}", sol.ho_energy));
    row("b_value", format!("{:.12e}", sol.b_value));
    row("binding_energy", format!("{:.12e}", report.binding_energy));
    if let Some(ev) = report.binding_energy_ev {
        row("binding_energy_ev", format!("{ev:.6}"));
    }
    row("bound", format!("{:?}", sol.bound));
    row("stationarity", format!("{:?}", sol.stationarity));
    row("phi", format!("{}", sol.quanta.phi));
    row("gradient_norm", format!("{:.3e}", sol.residuals.gradient_norm));
    row("virial", format!("{:.3e}", sol.residuals.virial));
    row("fixed_point", format!("{:.3e}", sol.residuals.fixed_point));
    row("iterations", sol.iterations.to_string());
    for (k, v) in params_flat(sol) {
        row(&k, format!("{v:.12e}"));
    }
    if let Some(t) = report.timing_ms {
        row("timing_ms", format!("{t:.3}"));
    }
    s
}

pub fn markdown(report: &RunReport) -> String {
    let sol = &report.solution;
    let mut s = String::new();
    writeln!(s, "| quantity | value |\n|---|---|").unwrap();
    writeln!(s, "| energy | {:.10} |", sol.energy).unwrap();
    if let Some(ev) = report.binding_energy_ev {
        writeln!(s, "| binding energy (eV) | {ev:.4} |").unwrap();
    }
    writeln!(s, "| bound | {:?} |", sol.bound).unwrap();
    writeln!(s, "| stationarity | {:?} |", sol.stationarity).unwrap();
    writeln!(s, "| phi | {} |", sol.quanta.phi).unwrap();
    writeln!(s, "| gradient norm | {:.2e} |", sol.residuals.gradient_norm).unwrap();
    writeln!(s, "| virial residual | {:.2e} |", sol.residuals.virial).unwrap();
    writeln!(s, "| iterations | {} |", sol.iterations).unwrap();
    for (k, v) in params_flat(sol) {
        writeln!(s, "| {k} | {v:.10} |").unwrap();
    }
    if let Some(t) = report.timing_ms {
        writeln!(s, "| time (ms) | {t:.3} |").unwrap();
    }
    writeln!(s, "\n| mode | omega | multiplicity |\n|---|---|---|").unwrap();
    for m in &sol.modes {
        let block = match m.block {
            ModeBlock::Internal(a) => format!("internal {a}"),
            ModeBlock::CenterOfMass(k) => format!("centre of mass {k}"),
        };
        writeln!(s, "| {block} | {:.10} | {} |", m.omega, m.multiplicity).unwrap();
    }
    if let Some(r) = &report.reference {
        write!(s, "\nPublished ({} {}): ET {}", r.table, r.row, r.et.0).unwrap();
        if let Some(iet) = &r.iet {
            write!(s, ", IET {}", iet.0).unwrap();
        }
        for e in &r.external {
            write!(s, ", {} {} (external)", e.column, e.value.0).unwrap();
        }
        s.push('\n');
    }
    s
}

fn cell_text(c: &Cell) -> (String, String, String) {
    let value = match (&c.status, c.computed) {
        (CellStatus::Error(e), _) => format!("error: {e}"),
        (_, Some(v)) => format!("{v:.6}"),
        (_, None) => "-".into(),
    };
    let reference = c.reference.as_ref().map_or("-".into(), |p| p.0.clone());
    let dev = match (c.abs_dev, c.rel_dev) {
        (Some(a), Some(r)) => format!("{a:+.2e} ({:+.3}%)", 100.0 * r),
        _ => "-".into(),
    };
    (value, reference, dev)
}

fn status(c: &Cell) -> &'static str {
    match c.status {
        CellStatus::Pass => "ok",
        CellStatus::Fail => "FAIL",
        CellStatus::NotApplicable => "n/a",
        CellStatus::Error(_) => "ERROR",
    }
}

pub fn table_markdown(t: &TableReport) -> String {
    let mut s = format!("{} ({}): {}\n\n", t.table, t.unit, t.title);
    let ext_cols: Vec<String> = t
        .rows
        .iter()
        .flat_map(|r| r.external.iter().map(|e| e.column.clone()))
        .fold(Vec::new(), |mut acc, c| {
            if !acc.contains(&c) {
                acc.push(c);
            }
            acc
        });
    s.push_str("| row | ET | ET ref | ET dev | IET | IET ref | IET dev |");
    for c in &ext_cols {
        write!(s, " {c} (ext) |").unwrap();
    }
    s.push_str(" checks |\n|---|---|---|---|---|---|---|");
    for _ in &ext_cols {
        s.push_str("---|");
    }
    s.push_str("---|\n");
    for r in &t.rows {
        write!(s, "| {} |", r.label).unwrap();
        for c in &r.cells {
            let (v, rf, d) = cell_text(c);
            write!(s, " {v} | {rf} | {d} [{}] |", status(c)).unwrap();
        }
        for col in &ext_cols {
            let v = r.external.iter().find(|e| &e.column == col).map_or("-", |e| e.value.0.as_str());
            write!(s, " {v} |").unwrap();
        }
        let checks: Vec<String> = r
            .checks
            .iter()
            .map(|c| format!("{}: {}", c.name, if c.passed { "ok" } else { "FAIL" }))
            .collect();
        writeln!(s, " {} |", if checks.is_empty() { "-".into() } else { checks.join("; ") }).unwrap();
    }
    writeln!(s, "\n{}", if t.passed() { "all cells within tolerance" } else { "TOLERANCE MISSED" }).unwrap();
    s
}

pub fn table_csv(t: &TableReport) -> String {
    let mut s = String::from("table,row,column,computed,raw,reference,tolerance,abs_dev,rel_dev,status\n");
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.10e}"));
    for r in &t.rows {
        for c in &r.cells {
            writeln!(
                s,
                "{},\"{}\",{},{},{},{},{:e},{},{},{}",
                t.table,
                r.label,
                c.column,
                opt(c.computed),
                opt(c.raw),
                c.reference.as_ref().map_or("", |p| p.0.as_str()),
                c.tolerance,
                opt(c.abs_dev),
                opt(c.rel_dev),
                status(c),
            )
            .unwrap();
        }
    }
    s
}
