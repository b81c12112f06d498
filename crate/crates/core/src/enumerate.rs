//! Exhaustive generation of Latin squares of small order.
//!
//! The primary generator fills cells row by row, tracking used symbols per
//! row and per column in bitmasks and trying symbols in increasing order, so
//! squares come out in row-major lexicographic order. Work is partitioned by
//! first row. A second generator fills column by column and exists only as an
//! independent cross-check.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equations::{satisfies, BalancedEquation, CatalogEntry, EquationError};
use crate::exec::Exec;
use crate::linearize::{linearize_pair, linearize_single};
use crate::tables::{Element, Property, QuasigroupTable};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("order {order} exceeds the enumeration cap {max}; force to run anyway")]
    OrderTooLarge { order: usize, max: usize },
    #[error("order must be positive")]
    ZeroOrder,
    #[error(transparent)]
    Equation(#[from] EquationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Stream,
    Count,
    Census,
}

#[derive(Debug, Clone)]
pub struct EnumerationSpec {
    pub order: usize,
    /// Keep only squares satisfying this equation with every operation
    /// symbol bound to the square.
    pub filter: Option<BalancedEquation>,
    pub mode: Mode,
    /// Restrict to squares whose first row is `0, 1, …, n-1`. This counts a
    /// different set than the full enumeration.
    pub reduced: bool,
    /// Ignore the order cap.
    pub force: bool,
}

impl EnumerationSpec {
    pub fn new(order: usize, mode: Mode) -> Self {
        EnumerationSpec {
            order,
            filter: None,
            mode,
            reduced: false,
            force: false,
        }
    }

    pub fn with_filter(mut self, eq: BalancedEquation) -> Self {
        self.filter = Some(eq);
        self
    }

    fn check(&self, limits: &Limits) -> Result<(), EnumerationError> {
        if self.order == 0 {
            return Err(EnumerationError::ZeroOrder);
        }
        if !self.force && self.order > limits.max_enumeration_order {
            return Err(EnumerationError::OrderTooLarge {
                order: self.order,
                max: limits.max_enumeration_order,
            });
        }
        Ok(())
    }

    fn first_rows(&self) -> Vec<Vec<Element>> {
        if self.reduced {
            vec![(0..self.order).collect()]
        } else {
            (0..self.order).permutations(self.order).collect()
        }
    }

    fn accepts(&self, q: &QuasigroupTable) -> bool {
        match &self.filter {
            None => true,
            Some(eq) => {
                let bindings: Vec<(&str, &QuasigroupTable)> = eq.ops().iter().map(|o| (o.as_str(), q)).collect();
                satisfies(eq, &bindings).map(|v| v.holds()).unwrap_or(false)
            }
        }
    }
}

/// Completes the square below `first_row`, calling `visit` on each completion
/// in lexicographic order.
fn fill_rows(n: usize, first_row: &[Element], visit: &mut dyn FnMut(&[Element])) {
    let mut cells = vec![0usize; n * n];
    let mut rows = vec![0u64; n];
    let mut cols = vec![0u64; n];
    for (c, &v) in first_row.iter().enumerate() {
        cells[c] = v;
        rows[0] |= 1 << v;
        cols[c] |= 1 << v;
    }
    fn go(
        n: usize,
        pos: usize,
        cells: &mut [usize],
        rows: &mut [u64],
        cols: &mut [u64],
        visit: &mut dyn FnMut(&[Element]),
    ) {
        if pos == n * n {
            visit(cells);
            return;
        }
        let (r, c) = (pos / n, pos % n);
        let full = (1u64 << n) - 1;
        let mut free = full & !(rows[r] | cols[c]);
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            cells[pos] = v;
            rows[r] |= 1 << v;
            cols[c] |= 1 << v;
            go(n, pos + 1, cells, rows, cols, visit);
            rows[r] &= !(1 << v);
            cols[c] &= !(1 << v);
        }
    }
    go(n, n, &mut cells, &mut rows, &mut cols, visit);
}

/// Streams every accepted square in row-major lexicographic order.
pub fn for_each_quasigroup(
    spec: &EnumerationSpec,
    limits: &Limits,
    mut visit: impl FnMut(&QuasigroupTable),
) -> Result<(), EnumerationError> {
    spec.check(limits)?;
    let n = spec.order;
    for first in spec.first_rows() {
        fill_rows(n, &first, &mut |cells| {
            let q = QuasigroupTable::from_flat(n, cells.to_vec()).expect("generator emits Latin squares");
            if spec.accepts(&q) {
                visit(&q);
            }
        });
    }
    Ok(())
}

/// All accepted squares, in row-major lexicographic order.
pub fn quasigroups(
    spec: &EnumerationSpec,
    limits: &Limits,
    exec: Exec,
) -> Result<Vec<QuasigroupTable>, EnumerationError> {
    spec.check(limits)?;
    let n = spec.order;
    let chunks = exec.map(&spec.first_rows(), |first| {
        let mut out = Vec::new();
        fill_rows(n, first, &mut |cells| {
            let q = QuasigroupTable::from_flat(n, cells.to_vec()).expect("generator emits Latin squares");
            if spec.accepts(&q) {
                out.push(q);
            }
        });
        out
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// All Latin squares of order `n`, with the default limits.
pub fn all_quasigroups(n: usize) -> Vec<QuasigroupTable> {
    quasigroups(
        &EnumerationSpec::new(n, Mode::Stream),
        &Limits::default(),
        Exec::default(),
    )
    .expect("order within the default cap")
}

pub fn count_quasigroups(spec: &EnumerationSpec, limits: &Limits, exec: Exec) -> Result<u64, EnumerationError> {
    spec.check(limits)?;
    let n = spec.order;
    let counts = exec.map(&spec.first_rows(), |first| {
        let mut count = 0u64;
        if spec.filter.is_none() {
            fill_rows(n, first, &mut |_| count += 1);
        } else {
            fill_rows(n, first, &mut |cells| {
                let q = QuasigroupTable::from_flat(n, cells.to_vec()).expect("generator emits Latin squares");
                count += u64::from(spec.accepts(&q));
            });
        }
        count
    });
    Ok(counts.into_iter().sum())
}

/// Counts Latin squares of order `n` by filling column by column.
pub fn count_column_major(n: usize) -> u64 {
    let mut count = 0;
    for_each_column_major(n, |_| count += 1);
    count
}

/// Second generator: fills `(r, c)` in column-major order and keeps the
/// used-symbol sets as boolean vectors.
pub fn for_each_column_major(n: usize, mut visit: impl FnMut(&[Element])) {
    fn go(
        n: usize,
        pos: usize,
        cells: &mut Vec<usize>,
        in_row: &mut Vec<Vec<bool>>,
        in_col: &mut Vec<Vec<bool>>,
        visit: &mut dyn FnMut(&[Element]),
    ) {
        if pos == n * n {
            visit(cells);
            return;
        }
        let (c, r) = (pos / n, pos % n);
        for v in 0..n {
            if in_row[r][v] || in_col[c][v] {
                continue;
            }
            in_row[r][v] = true;
            in_col[c][v] = true;
            cells[r * n + c] = v;
            go(n, pos + 1, cells, in_row, in_col, visit);
            in_row[r][v] = false;
            in_col[c][v] = false;
        }
    }
    if n == 0 {
        return;
    }
    let mut cells = vec![0; n * n];
    let mut in_row = vec![vec![false; n]; n];
    let mut in_col = vec![vec![false; n]; n];
    go(n, 0, &mut cells, &mut in_row, &mut in_col, &mut visit);
}

/// Per-entry satisfaction counts over an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub order: usize,
    pub reduced: bool,
    pub total: u64,
    /// Catalog label to number of squares satisfying that entry.
    pub entries: BTreeMap<String, u64>,
    /// Property name to number of squares having it; `linear` counts squares
    /// with a linear representation.
    pub properties: BTreeMap<String, u64>,
}

/// Single-catalog census over the squares accepted by `spec`.
pub fn census(
    spec: &EnumerationSpec,
    catalog: &[CatalogEntry],
    limits: &Limits,
    exec: Exec,
) -> Result<Census, EnumerationError> {
    spec.check(limits)?;
    let n = spec.order;
    let parts = exec.map(&spec.first_rows(), |first| {
        let mut entries = vec![0u64; catalog.len()];
        let mut props = [0u64; 4];
        let mut total = 0u64;
        fill_rows(n, first, &mut |cells| {
            let q = QuasigroupTable::from_flat(n, cells.to_vec()).expect("generator emits Latin squares");
            if !spec.accepts(&q) {
                return;
            }
            total += 1;
            for (slot, entry) in entries.iter_mut().zip(catalog) {
                let bindings: Vec<(&str, &QuasigroupTable)> =
                    entry.equation.ops().iter().map(|o| (o.as_str(), &q)).collect();
                if satisfies(&entry.equation, &bindings)
                    .map(|v| v.holds())
                    .unwrap_or(false)
                {
                    *slot += 1;
                }
            }
            for (i, p) in Property::ALL.iter().enumerate() {
                props[i] += u64::from(q.check_property(*p));
            }
            props[3] += u64::from(linearize_single(&q, 0).is_ok());
        });
        (total, entries, props)
    });
    let mut out = Census {
        order: n,
        reduced: spec.reduced,
        total: 0,
        entries: catalog.iter().map(|e| (e.label.clone(), 0)).collect(),
        properties: BTreeMap::new(),
    };
    let mut props = [0u64; 4];
    for (total, entries, p) in parts {
        out.total += total;
        for (entry, k) in catalog.iter().zip(entries) {
            *out.entries.get_mut(&entry.label).expect("label present") += k;
        }
        for i in 0..4 {
            props[i] += p[i];
        }
    }
    for (i, p) in Property::ALL.iter().enumerate() {
        out.properties.insert(p.name().to_string(), props[i]);
    }
    out.properties.insert("linear".to_string(), props[3]);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensusRow {
    pub satisfied: u64,
    pub both_commutative: u64,
    pub linear_pair: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensus {
    pub order: usize,
    pub pairs: u64,
    /// Pairs `(f, g)` with `f = g`, reported so diagonal counts can be
    /// compared with the single-operation census.
    pub entries: BTreeMap<String, PairCensusRow>,
    pub diagonal: BTreeMap<String, u64>,
}

/// Satisfaction counts for every ordered pair of order-`n` quasigroups.
pub fn census_pairs(
    order: usize,
    catalog: &[CatalogEntry],
    force: bool,
    limits: &Limits,
    exec: Exec,
) -> Result<PairCensus, EnumerationError> {
    if order == 0 {
        return Err(EnumerationError::ZeroOrder);
    }
    if !force && order > limits.max_pair_census_order {
        return Err(EnumerationError::OrderTooLarge {
            order,
            max: limits.max_pair_census_order,
        });
    }
    let mut spec = EnumerationSpec::new(order, Mode::Stream);
    spec.force = true;
    let tables = quasigroups(&spec, limits, exec)?;
    let commutative: Vec<bool> = tables.iter().map(|q| q.check_property(Property::Commutative)).collect();
    let rows = exec.map(catalog, |entry| {
        let mut row = PairCensusRow {
            satisfied: 0,
            both_commutative: 0,
            linear_pair: 0,
        };
        let mut diagonal = 0u64;
        for (i, f) in tables.iter().enumerate() {
            for (j, g) in tables.iter().enumerate() {
                if !satisfies(&entry.equation, &[("f", f), ("g", g)])
                    .map(|v| v.holds())
                    .unwrap_or(false)
                {
                    continue;
                }
                row.satisfied += 1;
                row.both_commutative += u64::from(commutative[i] && commutative[j]);
                row.linear_pair += u64::from(linearize_pair(f, g, 0).is_ok());
                diagonal += u64::from(i == j);
            }
        }
        (entry.label.clone(), row, diagonal)
    });
    let n = tables.len() as u64;
    let mut out = PairCensus {
        order,
        pairs: n * n,
        entries: BTreeMap::new(),
        diagonal: BTreeMap::new(),
    };
    for (label, row, diag) in rows {
        out.entries.insert(label.clone(), row);
        out.diagonal.insert(label, diag);
    }
    Ok(out)
}

/// Output of [`enumerate_quasigroups`], one variant per [`Mode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationOutput {
    Stream(Vec<QuasigroupTable>),
    Count(u64),
    Census(Census),
}

pub fn enumerate_quasigroups(
    spec: &EnumerationSpec,
    limits: &Limits,
    exec: Exec,
) -> Result<EnumerationOutput, EnumerationError> {
    Ok(match spec.mode {
        Mode::Stream => EnumerationOutput::Stream(quasigroups(spec, limits, exec)?),
        Mode::Count => EnumerationOutput::Count(count_quasigroups(spec, limits, exec)?),
        Mode::Census => EnumerationOutput::Census(census(spec, &crate::equations::single_catalog(), limits, exec)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{catalog_entry, pair_catalog, single_catalog};
    use crate::tables::validate_table;

    fn count(n: usize) -> u64 {
        count_quasigroups(
            &EnumerationSpec::new(n, Mode::Count),
            &Limits::default(),
            Exec::default(),
        )
        .unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!([count(1), count(2), count(3), count(4)], [1, 2, 12, 576]);
        assert_eq!((1..=4).map(count_column_major).collect::<Vec<_>>(), vec![1, 2, 12, 576]);
    }

    #[test]
    fn stream_is_sorted_and_valid() {
        let all = all_quasigroups(4);
        assert_eq!(all.len(), 576);
        assert!(all.windows(2).all(|w| w[0].cells() < w[1].cells()));
        for q in &all {
            assert!(validate_table(&q.rows()).is_ok());
        }
    }

    #[test]
    fn generators_produce_same_set() {
        let mut cm = Vec::new();
        for_each_column_major(4, |c| cm.push(c.to_vec()));
        cm.sort();
        let rm: Vec<Vec<usize>> = all_quasigroups(4).iter().map(|q| q.cells().to_vec()).collect();
        assert_eq!(cm, rm);
    }

    #[test]
    fn reduced_counts() {
        let mut spec = EnumerationSpec::new(4, Mode::Count);
        spec.reduced = true;
        assert_eq!(
            count_quasigroups(&spec, &Limits::default(), Exec::Sequential).unwrap(),
            24
        );
    }

    #[test]
    fn cap() {
        let spec = EnumerationSpec::new(6, Mode::Count);
        assert_eq!(
            count_quasigroups(&spec, &Limits::default(), Exec::Sequential),
            Err(EnumerationError::OrderTooLarge { order: 6, max: 5 })
        );
        assert_eq!(
            count_quasigroups(
                &EnumerationSpec::new(0, Mode::Count),
                &Limits::default(),
                Exec::Sequential
            ),
            Err(EnumerationError::ZeroOrder)
        );
    }

    #[test]
    fn census_trivial_entry() {
        let c = census(
            &EnumerationSpec::new(3, Mode::Census),
            &single_catalog(),
            &Limits::default(),
            Exec::default(),
        )
        .unwrap();
        assert_eq!(c.total, 12);
        assert_eq!(c.entries["1-0"], 12);
    }

    #[test]
    fn filter_commutes_with_stream() {
        let eq = catalog_entry("1-1").unwrap().equation;
        let spec = EnumerationSpec::new(4, Mode::Count).with_filter(eq.clone());
        let filtered = count_quasigroups(&spec, &Limits::default(), Exec::default()).unwrap();
        let post_hoc = all_quasigroups(4)
            .iter()
            .filter(|q| satisfies(&eq, &[("f", q)]).unwrap().holds())
            .count() as u64;
        assert_eq!(filtered, post_hoc);
        let mut streamed = 0;
        for_each_quasigroup(&spec, &Limits::default(), |_| streamed += 1).unwrap();
        assert_eq!(streamed, post_hoc);
    }

    #[test]
    fn pair_census_shapes() {
        let pc = census_pairs(2, &pair_catalog(), false, &Limits::default(), Exec::default()).unwrap();
        assert_eq!(pc.pairs, 4);
        assert!(pc.entries["2-1"].satisfied <= 4);
        assert!(census_pairs(4, &pair_catalog(), false, &Limits::default(), Exec::Sequential).is_err());
    }
}
