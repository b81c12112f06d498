use std::io::Write;
use std::path::Path;

use medial_core::enumerate::{census, census_pairs, count_quasigroups, for_each_quasigroup, EnumerationSpec, Mode};
use medial_core::equations::{catalog_entry, satisfies_with, CatalogEntry, CheckOptions};
use medial_core::linearize::{
    check_equation_implies_representation, linearize_pair, linearize_single, verify_relations, RepresentationReport,
};
use medial_core::{pair_catalog, parse_equation, single_catalog, BalancedEquation, Exec, Limits, Property};

use crate::report::{to_sorted_json, Classification, EquationRef, Report};
use crate::tablefile::{self, LoadedTable, TableFile};
use crate::{CheckArgs, CliError, EnumerateArgs, LinearizeArgs};

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn load_optional(path: Option<&Path>) -> Result<Option<LoadedTable>, CliError> {
    path.map(tablefile::load).transpose()
}

fn equation_ref(label: Option<&CatalogEntry>, eq: &BalancedEquation) -> EquationRef {
    EquationRef {
        label: label.map(|e| e.label.clone()),
        text: eq.to_string(),
        classification: label.map(|e| e.classification.name().to_string()),
        belousov: eq.is_belousov(),
    }
}

fn describe_counterexample(report: &Report, f: &TableFile) -> Option<String> {
    let c = report.counterexample.as_ref()?;
    let parts: Vec<String> = c
        .assignment
        .iter()
        .map(|(v, x)| format!("{v}={}", f.label(*x)))
        .collect();
    Some(format!(
        "counterexample {}: lhs={} rhs={}",
        parts.join(" "),
        f.label(c.lhs),
        f.label(c.rhs)
    ))
}

pub fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = tablefile::load(&args.table)?;
    let g = load_optional(args.table2.as_deref())?;
    let inputs: Vec<&LoadedTable> = std::iter::once(&f).chain(g.as_ref()).collect();
    let mut report = Report::new("check", &inputs);

    if let Some(label) = &args.label {
        let entry = catalog_entry(label)?;
        if entry.equation.ops().len() == 1 && g.is_some() {
            return Err(CliError::Usage(format!(
                "{label} has one operation symbol; drop --table2"
            )));
        }
        report.equation = Some(equation_ref(Some(&entry), &entry.equation));
        let t = check_equation_implies_representation(&entry, &f.file.table, g.as_ref().map(|g| &g.file.table), 0)?;
        report.satisfied = Some(t.satisfied);
        report.counterexample = t.counterexample;
        report.representation = t.representation;
        report.relations = t.relations;
        report.predicate = t.predicate;
        report.diagnostics = t.diagnostics;
        if let Some(err) = t.linearization_error {
            report.diagnostics.push(format!("linearization: {err}"));
        }
    } else {
        let eq = parse_equation(args.equation.as_deref().expect("clap requires --equation or --label"))?;
        let ops = eq.ops();
        let bindings: Vec<(&str, &medial_core::QuasigroupTable)> = match (ops.len(), &g) {
            (1, None) => vec![(ops[0].as_str(), &f.file.table)],
            (2, Some(g)) => vec![(ops[0].as_str(), &f.file.table), (ops[1].as_str(), &g.file.table)],
            (1, Some(_)) => {
                return Err(CliError::Usage(
                    "equation has one operation symbol; drop --table2".into(),
                ))
            }
            (2, None) => {
                return Err(CliError::Usage(
                    "equation has two operation symbols; pass --table2".into(),
                ))
            }
            (k, _) => {
                return Err(CliError::Usage(format!(
                    "equation has {k} operation symbols; at most 2 are supported"
                )))
            }
        };
        let opts = if args.force {
            CheckOptions::forced()
        } else {
            CheckOptions::default()
        };
        let verdict = satisfies_with(&eq, &bindings, &opts)?;
        report.equation = Some(equation_ref(None, &eq));
        report.satisfied = Some(verdict.holds());
        report.counterexample = verdict.counterexample().cloned();
    }
    if f.file.labels.is_some() {
        report.diagnostics.extend(describe_counterexample(&report, &f.file));
    }
    emit(out, &report.to_json())?;
    Ok(if report.satisfied == Some(true) { 0 } else { 1 })
}

pub fn classify(table: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = tablefile::load(table)?;
    let q = &t.file.table;
    let mut report = Report::new("classify", &[&t]);
    let mut entries = std::collections::BTreeMap::new();
    for entry in single_catalog() {
        entries.insert(
            entry.label.clone(),
            satisfies_with(&entry.equation, &[("f", q)], &CheckOptions::forced())?.holds(),
        );
    }
    let properties = Property::ALL
        .iter()
        .map(|p| (p.name().to_string(), q.check_property(*p)))
        .collect();
    report.classification = Some(Classification { entries, properties });
    match linearize_single(q, 0) {
        Ok(rep) => report.representation = Some(RepresentationReport::new(&rep.group, &[&rep])),
        Err(e) => report.diagnostics.push(format!("no linear representation: {e}")),
    }
    emit(out, &report.to_json())?;
    Ok(0)
}

pub fn linearize(args: &LinearizeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = tablefile::load(&args.table)?;
    let g = load_optional(args.table2.as_deref())?;
    let inputs: Vec<&LoadedTable> = std::iter::once(&f).chain(g.as_ref()).collect();
    let mut report = Report::new("linearize", &inputs);
    let e = args.base_element;
    if e >= f.file.table.order() {
        return Err(CliError::Usage(format!(
            "base element {e} is outside 0..{}",
            f.file.table.order()
        )));
    }
    let relations = match &args.relations {
        Some(label) => {
            let entry = catalog_entry(label)?;
            let rels = entry
                .classification
                .relations()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("{label} carries no relation set")))?;
            report.equation = Some(equation_ref(Some(&entry), &entry.equation));
            Some(rels)
        }
        None => None,
    };
    let mut ok = true;
    match &g {
        None => match linearize_single(&f.file.table, e) {
            Ok(rep) => report.representation = Some(RepresentationReport::new(&rep.group, &[&rep])),
            Err(err) => {
                ok = false;
                report.diagnostics.push(err.to_string());
            }
        },
        Some(g) => match linearize_pair(&f.file.table, &g.file.table, e) {
            Ok(pair) => {
                report.representation = Some(RepresentationReport::new(&pair.group, &[&pair.rep_f, &pair.rep_g]));
                if let Some(rels) = &relations {
                    let check = verify_relations(&pair, rels);
                    if check.holding_conventions().is_empty() {
                        ok = false;
                        report
                            .diagnostics
                            .push("relations fail under both composition conventions".into());
                    }
                    report.relations = Some(check);
                }
            }
            Err(err) => {
                ok = false;
                report.diagnostics.push(err.to_string());
            }
        },
    }
    emit(out, &report.to_json())?;
    Ok(if ok { 0 } else { 1 })
}

pub fn catalog(pairs: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let entries = if pairs { pair_catalog() } else { single_catalog() };
    let mut text = String::from("# label\tequation\trhs order\tbelousov\tclassification\trelations\n");
    for e in &entries {
        let rels = e
            .classification
            .relations()
            .map(ToString::to_string)
            .unwrap_or_else(|| "-".into());
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            e.label,
            e.equation,
            e.rhs_permutation_text(),
            if e.belousov { "belousov" } else { "non-belousov" },
            e.classification.name(),
            rels
        ));
    }
    emit(out, &text)?;
    Ok(0)
}

pub fn enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let limits = Limits::default();
    let exec = Exec::default();
    if args.pairs {
        eprintln!("pair census of order {}", args.order);
        let c = census_pairs(args.order, &pair_catalog(), args.force, &limits, exec)?;
        emit(out, &to_sorted_json(&c))?;
        return Ok(0);
    }
    let mode = if args.count_only {
        Mode::Count
    } else if args.census {
        Mode::Census
    } else {
        Mode::Stream
    };
    let mut spec = EnumerationSpec::new(args.order, mode);
    spec.force = args.force;
    spec.reduced = args.reduced;
    if let Some(label) = &args.label {
        spec = spec.with_filter(catalog_entry(label)?.equation);
    } else if let Some(text) = &args.equation {
        spec = spec.with_filter(parse_equation(text)?);
    }
    match mode {
        Mode::Count => emit(out, &format!("{}\n", count_quasigroups(&spec, &limits, exec)?))?,
        Mode::Census => {
            eprintln!("census of order {}", args.order);
            let c = census(&spec, &single_catalog(), &limits, exec)?;
            emit(out, &to_sorted_json(&c))?;
        }
        Mode::Stream => {
            let mut emitted = 0u64;
            let mut failure = None;
            for_each_quasigroup(&spec, &limits, |q| {
                if failure.is_some() {
                    return;
                }
                let sep = if emitted == 0 { "" } else { "\n" };
                if let Err(e) = emit(out, &format!("{sep}{q}")) {
                    failure = Some(e);
                }
                emitted += 1;
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            eprintln!("{emitted} tables");
        }
    }
    Ok(0)
}

pub fn belousov(text: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let eq = parse_equation(text)?;
    let yes = eq.is_belousov();
    emit(
        out,
        &format!("{eq}\t{}\n", if yes { "belousov" } else { "non-belousov" }),
    )?;
    Ok(if yes { 0 } else { 1 })
}
