//! Cayley tables of finite quasigroups over the universe `{0, …, n-1}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Limits;

/// An element of the universe `{0, …, n-1}`.
pub type Element = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Row,
    Col,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row => f.write_str("row"),
            Line::Col => f.write_str("column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("not a Latin square: {line} {index} duplicates {value}")]
    NotLatin { line: Line, index: usize, value: Element },
    #[error("mapping is not a bijection: {value} is {problem}")]
    NotBijective { value: usize, problem: &'static str },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
}

/// A validated Latin square, read as the operation table `q(x, y) = cells[x][y]`.
///
/// Left and right division tables are computed once at validation time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuasigroupTable {
    order: usize,
    cells: Vec<Element>,
    ldiv: Vec<Element>,
    rdiv: Vec<Element>,
}

/// Validates `cells` as a Latin square with the default order limit.
pub fn validate_table(cells: &[Vec<Element>]) -> Result<QuasigroupTable, TableError> {
    validate_table_with(cells, Limits::default().max_table_order)
}

pub fn validate_table_with(cells: &[Vec<Element>], max_order: usize) -> Result<QuasigroupTable, TableError> {
    let n = cells.len();
    if n == 0 {
        return Err(TableError::Empty);
    }
    if n > max_order {
        return Err(TableError::OrderTooLarge {
            order: n,
            max: max_order,
        });
    }
    for (r, row) in cells.iter().enumerate() {
        if row.len() != n {
            return Err(TableError::NotSquare {
                row: r,
                len: row.len(),
                expected: n,
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(TableError::OutOfRange {
                    row: r,
                    col: c,
                    value: v,
                    order: n,
                });
            }
        }
    }
    let flat: Vec<Element> = cells.iter().flatten().copied().collect();
    QuasigroupTable::from_flat(n, flat)
}

impl QuasigroupTable {
    /// Builds a table from a row-major flat array of length `order²`.
    pub fn from_flat(order: usize, cells: Vec<Element>) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::Empty);
        }
        if cells.len() != order * order {
            return Err(TableError::NotSquare {
                row: cells.len() / order,
                len: cells.len() % order,
                expected: order,
            });
        }
        let n = order;
        let mut ldiv = vec![usize::MAX; n * n];
        let mut rdiv = vec![usize::MAX; n * n];
        // Row-major scan; the first repeated value in a row or column is reported.
        for r in 0..n {
            for c in 0..n {
                let v = cells[r * n + c];
                if v >= n {
                    return Err(TableError::OutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        order: n,
                    });
                }
                if ldiv[r * n + v] != usize::MAX {
                    return Err(TableError::NotLatin {
                        line: Line::Row,
                        index: r,
                        value: v,
                    });
                }
                if rdiv[c * n + v] != usize::MAX {
                    return Err(TableError::NotLatin {
                        line: Line::Col,
                        index: c,
                        value: v,
                    });
                }
                ldiv[r * n + v] = c;
                rdiv[c * n + v] = r;
            }
        }
        Ok(QuasigroupTable {
            order,
            cells,
            ldiv,
            rdiv,
        })
    }

    /// Tabulates `op` over `{0, …, order-1}²` and validates the result.
    pub fn from_fn(order: usize, op: impl Fn(Element, Element) -> Element) -> Result<Self, TableError> {
        let cells = (0..order)
            .flat_map(|x| (0..order).map(move |y| (x, y)))
            .map(|(x, y)| op(x, y))
            .collect();
        Self::from_flat(order, cells)
    }

    /// Addition table of `Z_n`.
    pub fn cyclic(order: usize) -> Self {
        Self::from_fn(order, |x, y| (x + y) % order).expect("Z_n addition is a Latin square")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, x: Element, y: Element) -> Element {
        self.cells[x * self.order + y]
    }

    pub fn cells(&self) -> &[Element] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.cells.chunks(self.order).map(<[Element]>::to_vec).collect()
    }

    /// The unique `x` with `q(a, x) = b`.
    #[inline]
    pub fn left_divide(&self, a: Element, b: Element) -> Element {
        self.ldiv[a * self.order + b]
    }

    /// The unique `y` with `q(y, a) = b`.
    #[inline]
    pub fn right_divide(&self, a: Element, b: Element) -> Element {
        self.rdiv[a * self.order + b]
    }

    pub fn check_property(&self, p: Property) -> bool {
        let n = self.order;
        match p {
            Property::Commutative => (0..n).all(|x| (0..n).all(|y| self.get(x, y) == self.get(y, x))),
            Property::Associative => (0..n).all(|x| {
                (0..n).all(|y| {
                    let xy = self.get(x, y);
                    (0..n).all(|z| self.get(xy, z) == self.get(x, self.get(y, z)))
                })
            }),
            Property::Idempotent => (0..n).all(|x| self.get(x, x) == x),
        }
    }

    /// Two-sided identity element, if any.
    pub fn identity(&self) -> Option<Element> {
        let n = self.order;
        (0..n).find(|&e| (0..n).all(|x| self.get(e, x) == x && self.get(x, e) == x))
    }

    /// The map `x ↦ q(x, e)`.
    pub fn right_translation(&self, e: Element) -> Mapping {
        Mapping {
            images: (0..self.order).map(|x| self.get(x, e)).collect(),
        }
    }

    /// The map `y ↦ q(e, y)`.
    pub fn left_translation(&self, e: Element) -> Mapping {
        Mapping {
            images: (0..self.order).map(|y| self.get(e, y)).collect(),
        }
    }

    /// The loop `x ∘ y = q(R⁻¹x, L⁻¹y)` with `R = q(·, e)` and `L = q(e, ·)`.
    /// Its identity element is `q(e, e)`.
    pub fn principal_isotope(&self, e: Element) -> QuasigroupTable {
        let n = self.order;
        let r_inv = self.right_translation(e).inverse();
        let l_inv = self.left_translation(e).inverse();
        Self::from_fn(n, |x, y| self.get(r_inv.apply(x), l_inv.apply(y)))
            .expect("isotope of a quasigroup is a quasigroup")
    }

    /// The isotope `g(x, y) = γ(q(α⁻¹x, β⁻¹y))`, so that `γ q(x,y) = g(αx, βy)`.
    pub fn apply_isotopy(
        &self,
        alpha: &Mapping,
        beta: &Mapping,
        gamma: &Mapping,
    ) -> Result<QuasigroupTable, TableError> {
        for m in [alpha, beta, gamma] {
            if m.order() != self.order {
                return Err(TableError::OrderMismatch {
                    expected: self.order,
                    found: m.order(),
                });
            }
        }
        let (ai, bi) = (alpha.inverse(), beta.inverse());
        Ok(
            Self::from_fn(self.order, |x, y| gamma.apply(self.get(ai.apply(x), bi.apply(y))))
                .expect("isotope of a quasigroup is a quasigroup"),
        )
    }

    /// Relabels elements by the bijection `m`: the result is `m q(m⁻¹x, m⁻¹y)`.
    pub fn relabel(&self, m: &Mapping) -> Result<QuasigroupTable, TableError> {
        self.apply_isotopy(m, m, m)
    }
}

impl fmt::Debug for QuasigroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuasigroupTable")
            .field("order", &self.order)
            .field("rows", &self.rows())
            .finish()
    }
}

impl fmt::Display for QuasigroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for row in self.cells.chunks(self.order) {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Commutative,
    Associative,
    Idempotent,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::Commutative, Property::Associative, Property::Idempotent];

    pub fn name(self) -> &'static str {
        match self {
            Property::Commutative => "commutative",
            Property::Associative => "associative",
            Property::Idempotent => "idempotent",
        }
    }
}

/// A bijection on `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Mapping {
    images: Vec<Element>,
}

impl Mapping {
    pub fn new(images: Vec<Element>) -> Result<Self, TableError> {
        let n = images.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(TableError::NotBijective {
                    value: v,
                    problem: "out of range",
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(TableError::NotBijective {
                    value: v,
                    problem: "hit twice",
                });
            }
        }
        Ok(Mapping { images })
    }

    pub fn identity(order: usize) -> Self {
        Mapping {
            images: (0..order).collect(),
        }
    }

    /// Tabulates `f` and checks bijectivity.
    pub fn from_fn(order: usize, f: impl Fn(Element) -> Element) -> Result<Self, TableError> {
        Self::new((0..order).map(f).collect())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.images[x]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Mapping) -> Mapping {
        Mapping {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Mapping {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Mapping { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }
}

impl TryFrom<Vec<usize>> for Mapping {
    type Error = TableError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Mapping::new(images)
    }
}

impl From<Mapping> for Vec<usize> {
    fn from(m: Mapping) -> Self {
        m.images
    }
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mapping{:?}", self.images)
    }
}
