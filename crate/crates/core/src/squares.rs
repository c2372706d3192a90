//! Latin squares, orthogonality checks, finite-field MOLS and MacNeish products.

use std::fmt;

use thiserror::Error;

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// A `d × d` grid over `0..d` with every symbol once per row and column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Line::Row => "row",
            Line::Column => "column",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatinViolation {
    pub line: Line,
    pub index: usize,
    pub symbol: usize,
}

impl fmt::Display for LatinViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} repeats symbol {}", self.line, self.index, self.symbol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatinReport {
    pub violation: Option<LatinViolation>,
}

impl LatinReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the row and column conditions, rows first. Shape and symbol range problems
/// are errors rather than violations.
pub fn validate_latin(grid: &[Vec<usize>]) -> Result<LatinReport> {
    let d = grid.len();
    for (row, r) in grid.iter().enumerate() {
        if r.len() != d {
            return Err(Error::NotSquare { row, len: r.len(), expected: d });
        }
        if let Some((col, &symbol)) = r.iter().enumerate().find(|(_, &s)| s >= d) {
            return Err(Error::SymbolOutOfRange { row, col, symbol, order: d });
        }
    }
    let first_repeat = |mut line: Box<dyn Iterator<Item = usize> + '_>| {
        let mut seen = vec![false; d];
        line.find(|&s| std::mem::replace(&mut seen[s], true))
    };
    for (index, r) in grid.iter().enumerate() {
        if let Some(symbol) = first_repeat(Box::new(r.iter().copied())) {
            return Ok(LatinReport { violation: Some(LatinViolation { line: Line::Row, index, symbol }) });
        }
    }
    for index in 0..d {
        if let Some(symbol) = first_repeat(Box::new(grid.iter().map(|r| r[index]))) {
            return Ok(LatinReport { violation: Some(LatinViolation { line: Line::Column, index, symbol }) });
        }
    }
    Ok(LatinReport { violation: None })
}

impl LatinSquare {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(v) = validate_latin(&grid)?.violation {
            return Err(Error::NotLatin(v.to_string()));
        }
        let order = grid.len();
        Ok(Self { order, cells: grid.into_iter().flatten().collect() })
    }

    /// `L_ij = (i + j) mod d`.
    pub fn cyclic(order: usize) -> Self {
        let cells = (0..order * order).map(|k| (k / order + k % order) % order).collect();
        Self { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[usize] {
        &self.cells[row * self.order..(row + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells.chunks(self.order).map(<[usize]>::to_vec).collect()
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for row in self.cells.chunks(self.order) {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Two cells carrying the same ordered pair of symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collision {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orthogonality {
    pub collision: Option<Collision>,
}

impl Orthogonality {
    pub fn is_orthogonal(&self) -> bool {
        self.collision.is_none()
    }
}

pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<Orthogonality> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    let d = a.order;
    let mut seen: Vec<Option<(usize, usize)>> = vec![None; d * d];
    for i in 0..d {
        for j in 0..d {
            let pair = (a.get(i, j), b.get(i, j));
            let slot = &mut seen[pair.0 * d + pair.1];
            if let Some(first) = *slot {
                return Ok(Orthogonality { collision: Some(Collision { first, second: (i, j), pair }) });
            }
            *slot = Some((i, j));
        }
    }
    Ok(Orthogonality { collision: None })
}

/// A list of pairwise orthogonal Latin squares of one order. May be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsFamily {
    order: usize,
    squares: Vec<LatinSquare>,
}

impl MolsFamily {
    pub fn new(order: usize, squares: Vec<LatinSquare>) -> Result<Self> {
        if order == 0 {
            return Err(Error::OutOfRange(order, "order must be positive"));
        }
        if let Some(s) = squares.iter().find(|s| s.order != order) {
            return Err(Error::OrderMismatch(order, s.order));
        }
        let max = order.saturating_sub(1).max(1);
        if squares.len() > max {
            return Err(Error::FamilyTooLarge { order, max, got: squares.len() });
        }
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                if !are_orthogonal(&squares[i], &squares[j])?.is_orthogonal() {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
        }
        Ok(Self { order, squares })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }
}

const MOLS10_FIRST: [[usize; 10]; 10] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
    [1, 2, 6, 5, 8, 0, 9, 3, 4, 7],
    [2, 9, 4, 0, 5, 7, 3, 8, 6, 1],
    [3, 4, 9, 7, 6, 8, 5, 1, 0, 2],
    [4, 3, 7, 8, 1, 6, 0, 2, 9, 5],
    [5, 8, 3, 6, 2, 9, 7, 0, 1, 4],
    [6, 5, 1, 9, 7, 3, 8, 4, 2, 0],
    [7, 0, 5, 2, 9, 1, 4, 6, 3, 8],
    [8, 7, 0, 4, 3, 2, 1, 9, 5, 6],
    [9, 6, 8, 1, 0, 4, 2, 5, 7, 3],
];

const MOLS10_SECOND: [[usize; 10]; 10] = [
    [0, 2, 4, 9, 1, 8, 7, 5, 3, 6],
    [1, 7, 3, 4, 5, 9, 2, 6, 0, 8],
    [2, 3, 8, 7, 6, 4, 1, 9, 5, 0],
    [3, 9, 5, 2, 4, 7, 0, 8, 6, 1],
    [4, 5, 6, 1, 9, 2, 8, 0, 7, 3],
    [5, 6, 2, 0, 8, 1, 9, 3, 4, 7],
    [6, 1, 7, 8, 3, 0, 4, 2, 9, 5],
    [7, 4, 9, 3, 0, 5, 6, 1, 8, 2],
    [8, 0, 1, 5, 7, 6, 3, 4, 2, 9],
    [9, 8, 0, 6, 2, 3, 5, 7, 1, 4],
];

/// The classical pair of orthogonal Latin squares of order ten, in published order.
pub fn builtin_mols10() -> MolsFamily {
    let to_grid = |rows: &[[usize; 10]; 10]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let squares = vec![
        LatinSquare::new(to_grid(&MOLS10_FIRST)).expect("embedded square is Latin"),
        LatinSquare::new(to_grid(&MOLS10_SECOND)).expect("embedded square is Latin"),
    ];
    MolsFamily::new(10, squares).expect("embedded squares are orthogonal")
}

/// Complete family of `q - 1` MOLS over GF(q) with the default modulus.
pub fn ff_complete_mols(q: usize) -> Result<MolsFamily> {
    Ok(ff_complete_mols_in(&FieldSpec::with_order(q)?))
}

/// `L_a(i, j) = i + a·j` for every nonzero `a`, in index order. Symbols, rows and
/// columns are field elements identified with integers by their base-`p` digits.
///
/// With this orientation the cell of square `a` through point 0 in the row-graph net
/// is `{(m, a·m)}`.
pub fn ff_complete_mols_in(field: &FieldSpec) -> MolsFamily {
    let q = field.order();
    let elems: Vec<_> = field.elements().collect();
    let squares = (1..q)
        .map(|a| {
            let cells = (0..q * q)
                .map(|k| {
                    let (i, j) = (k / q, k % q);
                    field.index_of(&field.add(&elems[i], &field.mul(&elems[a], &elems[j])))
                })
                .collect();
            LatinSquare { order: q, cells }
        })
        .collect();
    MolsFamily { order: q, squares }
}

/// Direct product of order `a·b`: entry at `(i·b + k, j·b + l)` is `A_ij·b + C_kl`.
pub fn macneish_product(a: &LatinSquare, c: &LatinSquare) -> LatinSquare {
    let (na, nb) = (a.order, c.order);
    let n = na * nb;
    let cells = (0..n * n)
        .map(|idx| {
            let (row, col) = (idx / n, idx % n);
            let (i, k) = (row / nb, row % nb);
            let (j, l) = (col / nb, col % nb);
            a.get(i, j) * nb + c.get(k, l)
        })
        .collect();
    LatinSquare { order: n, cells }
}

/// Pairs the i-th square of each family; the result has `min(L1, L2)` squares.
pub fn macneish_family(first: &MolsFamily, second: &MolsFamily) -> Result<MolsFamily> {
    let squares = first.squares.iter().zip(&second.squares).map(|(a, c)| macneish_product(a, c)).collect();
    MolsFamily::new(first.order * second.order, squares)
}

/// MOLS of order `d` from products of the complete families of its prime-power factors.
pub fn macneish_mols(d: usize) -> Result<MolsFamily> {
    if d < 2 {
        return Err(Error::OutOfRange(d, "MacNeish construction needs d >= 2"));
    }
    factorize(d).into_iter().try_fold(MolsFamily::new(1, vec![LatinSquare::cyclic(1)])?, |acc, (p, r)| {
        let part = ff_complete_mols(p.pow(r))?;
        if acc.order == 1 {
            return Ok(part);
        }
        macneish_family(&acc, &part)
    })
}

fn prime_power_parts(d: usize) -> Result<Vec<usize>> {
    if d < 2 {
        return Err(Error::OutOfRange(d, "bounds need d >= 2"));
    }
    Ok(factorize(d).into_iter().map(|(p, r)| p.pow(r)).collect())
}

/// `min_i (p_i^{r_i} - 1)` over the prime-power factors of `d`.
pub fn macneish_bound(d: usize) -> Result<usize> {
    Ok(prime_power_parts(d)?.into_iter().min().unwrap() - 1)
}

/// `min_i (p_i^{r_i} + 1)` over the prime-power factors of `d`.
pub fn quantum_macneish_bound(d: usize) -> Result<usize> {
    Ok(prime_power_parts(d)?.into_iter().min().unwrap() + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses the square text format: a line with `d`, then `d` lines of `d`
/// space-separated integers; squares are separated by a blank line.
///
/// Grids are returned unvalidated so callers can report Latin violations themselves.
pub fn parse_squares(text: &str) -> std::result::Result<Vec<Vec<Vec<usize>>>, ParseError> {
    let err = |line: usize, column: usize, message: String| ParseError { line, column, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut squares = Vec::new();
    loop {
        while lines.peek().is_some_and(|(_, l)| l.trim().is_empty()) {
            lines.next();
        }
        let Some((ln, header)) = lines.next() else { break };
        let tokens = tokenize(header);
        let d = match tokens.as_slice() {
            [(col, tok)] => {
                tok.parse::<usize>().map_err(|_| err(ln, *col, format!("expected order, found {tok:?}")))?
            }
            [] => unreachable!(),
            [_, (col, _), ..] => return Err(err(ln, *col, "expected a single order value".into())),
        };
        if d == 0 {
            return Err(err(ln, 1, "order must be positive".into()));
        }
        let mut grid = Vec::with_capacity(d);
        for _ in 0..d {
            let Some((ln, line)) = lines.next() else {
                return Err(err(ln + grid.len() + 1, 1, format!("expected {d} rows, found {}", grid.len())));
            };
            let tokens = tokenize(line);
            if tokens.len() != d {
                let col = tokens.get(d).map_or(line.len() + 1, |t| t.0);
                return Err(err(ln, col, format!("expected {d} entries, found {}", tokens.len())));
            }
            let row = tokens
                .into_iter()
                .map(|(col, tok)| tok.parse::<usize>().map_err(|_| err(ln, col, format!("invalid integer {tok:?}"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            grid.push(row);
        }
        if let Some((ln, line)) = lines.peek() {
            if !line.trim().is_empty() {
                return Err(err(*ln, 1, "expected a blank line between squares".into()));
            }
        }
        squares.push(grid);
    }
    if squares.is_empty() {
        return Err(err(1, 1, "no squares in input".into()));
    }
    Ok(squares)
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Writes squares in the text format, separated by one blank line.
pub fn format_squares<'a>(squares: impl IntoIterator<Item = &'a LatinSquare>) -> String {
    squares.into_iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn pair_counts(a: &LatinSquare, b: &LatinSquare) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for i in 0..a.order.min(b.order) {
            for j in 0..a.order.min(b.order) {
                *counts.entry((a.get(i, j), b.get(i, j))).or_default() += 1;
            }
        }
        counts
    }

    fn modular(d: usize, a: usize, b: usize) -> LatinSquare {
        let grid = (0..d).map(|i| (0..d).map(|j| (a * i + b * j) % d).collect()).collect();
        LatinSquare::new(grid).unwrap()
    }

    #[test]
    fn validate_examples() {
        let cyclic: Vec<Vec<usize>> = LatinSquare::cyclic(3).rows();
        assert!(validate_latin(&cyclic).unwrap().is_valid());

        let bad = vec![vec![0, 0], vec![1, 1]];
        let v = validate_latin(&bad).unwrap().violation.unwrap();
        assert_eq!(v, LatinViolation { line: Line::Row, index: 0, symbol: 0 });

        let cols = vec![vec![0, 1], vec![0, 1]];
        let v = validate_latin(&cols).unwrap().violation.unwrap();
        assert_eq!(v, LatinViolation { line: Line::Column, index: 0, symbol: 0 });

        assert!(matches!(validate_latin(&[vec![0, 1], vec![1]]), Err(Error::NotSquare { row: 1, .. })));
        assert!(matches!(validate_latin(&[vec![0, 2], vec![1, 0]]), Err(Error::SymbolOutOfRange { symbol: 2, .. })));
    }

    #[test]
    fn builtin_data() {
        let f = builtin_mols10();
        assert_eq!(f.squares()[0].row(0), &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(f.squares()[1].row(0), &[0, 2, 4, 9, 1, 8, 7, 5, 3, 6]);
        assert!(are_orthogonal(&f.squares()[0], &f.squares()[1]).unwrap().is_orthogonal());
    }

    #[test]
    fn orthogonality_examples() {
        let a = modular(3, 1, 1);
        let b = modular(3, 1, 2);
        // brute force: all 9 ordered pairs distinct
        let counts = pair_counts(&a, &b);
        assert_eq!(counts.len(), 9);
        assert!(are_orthogonal(&a, &b).unwrap().is_orthogonal());
        assert!(are_orthogonal(&b, &a).unwrap().is_orthogonal());

        for d in 2..6 {
            let s = LatinSquare::cyclic(d);
            let o = are_orthogonal(&s, &s).unwrap();
            let c = o.collision.unwrap();
            assert_eq!((c.first, c.second, c.pair), ((0, 1), (1, 0), (1, 1)));
        }
        assert_eq!(are_orthogonal(&LatinSquare::cyclic(2), &LatinSquare::cyclic(3)), Err(Error::OrderMismatch(2, 3)));
    }

    #[test]
    fn finite_field_families() {
        let f2 = ff_complete_mols(2).unwrap();
        assert_eq!(f2.len(), 1);
        assert_eq!(f2.squares()[0], LatinSquare::cyclic(2));
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let fam = ff_complete_mols(q).unwrap();
            assert_eq!(fam.len(), q - 1);
            // re-validate through the checked constructor
            for s in fam.squares() {
                assert!(validate_latin(&s.rows()).unwrap().is_valid());
            }
            let rebuilt = MolsFamily::new(q, fam.squares().to_vec()).unwrap();
            for (i, a) in rebuilt.squares().iter().enumerate() {
                for b in &rebuilt.squares()[i + 1..] {
                    assert_eq!(pair_counts(a, b).len(), q * q);
                }
            }
        }
        assert_eq!(ff_complete_mols(6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn products() {
        let p = macneish_product(&LatinSquare::cyclic(2), &LatinSquare::cyclic(3));
        assert_eq!(p.order(), 6);
        assert!(validate_latin(&p.rows()).unwrap().is_valid());

        let one = LatinSquare::cyclic(1);
        let s = modular(5, 1, 2);
        assert_eq!(macneish_product(&one, &s), s);
        assert_eq!(macneish_product(&s, &one), s);

        let f3 = ff_complete_mols(3).unwrap();
        let prod = macneish_family(&f3, &f3).unwrap();
        assert_eq!(prod.len(), 2);
        assert!(are_orthogonal(&prod.squares()[0], &prod.squares()[1]).unwrap().is_orthogonal());

        let m10 = macneish_mols(10).unwrap();
        assert_eq!((m10.order(), m10.len()), (10, 1));
        let m12 = macneish_mols(12).unwrap();
        assert_eq!((m12.order(), m12.len()), (12, 2));
        let m7 = macneish_mols(7).unwrap();
        assert_eq!(m7.len(), 6);
    }

    #[test]
    fn bounds() {
        assert_eq!(macneish_bound(10).unwrap(), 1);
        assert_eq!(quantum_macneish_bound(10).unwrap(), 3);
        assert_eq!(macneish_bound(35).unwrap(), 4);
        assert_eq!(quantum_macneish_bound(35).unwrap(), 6);
        assert_eq!(macneish_bound(7).unwrap(), 6);
        assert_eq!(quantum_macneish_bound(7).unwrap(), 8);
        assert_eq!(macneish_bound(12).unwrap(), 2);
        assert!(macneish_bound(1).is_err());
    }

    #[test]
    fn text_format() {
        let fam = builtin_mols10();
        let text = format_squares(fam.squares());
        let parsed = parse_squares(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0], fam.squares()[0].rows());
        assert_eq!(parsed[1], fam.squares()[1].rows());

        assert_eq!(parse_squares("").unwrap_err().message, "no squares in input");
        let e = parse_squares("2\n0 1\n1 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_squares("3\n0 1 2\n1 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_squares("2\n0 1\n1 0\n2\n").unwrap_err();
        assert_eq!(e.line, 4);
    }
}
