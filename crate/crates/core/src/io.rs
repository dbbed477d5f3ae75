//! Flat-file formats. All indices are 0-based. Reals are written with the
//! shortest representation that parses back to the same `f64`, so every
//! `format_*` / `parse_*` pair round-trips exactly.
//!
//! | format        | layout                                                    |
//! |---------------|-----------------------------------------------------------|
//! | bit matrix    | `R C`, then R lines of C characters from `{0,1}`          |
//! | scalar CSV    | R lines of C comma-separated reals, `inf` for +∞          |
//! | witness CSV   | R lines of C comma-separated indices, `-1` when absent    |
//! | graph         | `n m`, n weights, m lines `u v`                           |
//! | class graph   | `n m`, `q c_1 … c_q`, n weights, m lines `u v class`      |
//! | point set     | `n r`, then n lines `x y w`                               |
//! | tree dump     | `# nodes=N total=C`, then N-1 lines `u v cost`            |
//!
//! Blank lines are ignored everywhere.

use std::fmt::{Display, Write as _};
use std::str::FromStr;

use crate::apsp::{EdgeClassDigraph, VertexWeightedDigraph};
use crate::diskgraph::{Point, PointSet};
use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, ScalarMatrix, WitnessMatrix};
use crate::mst::{SpanningTree, TreeEdge};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-blank lines with 1-based line numbers.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Ok((i + 1, l));
            }
        }
        Err(parse_err(self.last + 1, format!("unexpected end of input, expected {what}")))
    }

    fn finish(mut self) -> Result<()> {
        for (i, l) in self.inner.by_ref() {
            if !l.trim().is_empty() {
                return Err(parse_err(i + 1, "trailing content"));
            }
        }
        Ok(())
    }
}

fn token<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn fields<T: FromStr>(line: usize, text: &str, expected: usize, what: &str) -> Result<Vec<T>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} {what} value(s), found {}", toks.len()),
        ));
    }
    toks.iter().map(|t| token(line, t, what)).collect()
}

fn header2<A: FromStr, B: FromStr>(lines: &mut Lines<'_>, what: &str) -> Result<(usize, A, B)> {
    let (ln, l) = lines.next_line(what)?;
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(ln, format!("malformed header, expected `{what}`")));
    }
    Ok((ln, token(ln, toks[0], what)?, token(ln, toks[1], what)?))
}

fn join<T: Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    let mut s = String::new();
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
        }
        write!(s, "{x}").unwrap();
    }
    s
}

pub fn format_bit_matrix(m: &BitMatrix) -> String {
    let mut s = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        s.extend((0..m.cols()).map(|c| if m.get(r, c) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn parse_bit_matrix(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines::new(text);
    let (_, rows, cols): (_, usize, usize) = header2(&mut lines, "R C")?;
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        let (ln, l) = if cols == 0 {
            // Zero-width rows are blank lines and hence skipped.
            continue;
        } else {
            lines.next_line("a matrix row")?
        };
        if l.len() != cols {
            return Err(parse_err(ln, format!("expected {cols} characters, found {}", l.len())));
        }
        for (c, ch) in l.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => m.set(r, c, true),
                _ => return Err(parse_err(ln, format!("invalid character `{}`", ch as char))),
            }
        }
    }
    lines.finish()?;
    Ok(m)
}

pub fn format_scalar_csv(m: &ScalarMatrix) -> String {
    let mut s = String::new();
    for r in 0..m.rows() {
        s.push_str(&join(m.row(r), ","));
        s.push('\n');
    }
    s
}

fn parse_csv<T>(text: &str, mut cell: impl FnMut(usize, &str) -> Result<T>) -> Result<(usize, usize, Vec<T>)> {
    let mut data = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    let mut lines = Lines::new(text);
    while let Ok((ln, l)) = lines.next_line("") {
        let before = data.len();
        for tok in l.split(',') {
            data.push(cell(ln, tok.trim())?);
        }
        let width = data.len() - before;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(parse_err(ln, format!("expected {c} columns, found {width}")));
            }
            _ => {}
        }
        rows += 1;
    }
    Ok((rows, cols.unwrap_or(0), data))
}

pub fn parse_scalar_csv(text: &str) -> Result<ScalarMatrix> {
    let (rows, cols, data) = parse_csv(text, |ln, tok| {
        let x: f64 = token(ln, tok, "real")?;
        if x.is_nan() {
            return Err(parse_err(ln, "NaN is not allowed"));
        }
        Ok(x)
    })?;
    ScalarMatrix::from_vec(rows, cols, data)
}

pub fn format_witness_csv(w: &WitnessMatrix) -> String {
    let mut s = String::new();
    for r in 0..w.rows() {
        let row = (0..w.cols()).map(|c| w.get(r, c).map_or(-1, |k| k as i64));
        s.push_str(&join(row, ","));
        s.push('\n');
    }
    s
}

pub fn parse_witness_csv(text: &str) -> Result<WitnessMatrix> {
    let (rows, cols, data) = parse_csv(text, |ln, tok| {
        let k: i64 = token(ln, tok, "witness")?;
        match k {
            -1 => Ok(None),
            k if k >= 0 && k < u32::MAX as i64 => Ok(Some(k as usize)),
            _ => Err(parse_err(ln, format!("witness {k} out of range"))),
        }
    })?;
    let mut w = WitnessMatrix::empty(rows, cols);
    for (i, k) in data.into_iter().enumerate() {
        w.set(i / cols.max(1), i % cols.max(1), k);
    }
    Ok(w)
}

pub fn format_graph(g: &VertexWeightedDigraph) -> String {
    let mut s = format!("{} {}\n{}\n", g.n(), g.edge_count(), join(g.weights(), " "));
    for u in 0..g.n() {
        for v in g.adjacency().row(u).ones() {
            writeln!(s, "{u} {v}").unwrap();
        }
    }
    s
}

fn read_weights(lines: &mut Lines<'_>, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let (ln, l) = lines.next_line("vertex weights")?;
    fields(ln, l, n, "weight")
}

fn read_edge(lines: &mut Lines<'_>, n: usize, arity: usize) -> Result<Vec<usize>> {
    let (ln, l) = lines.next_line("an edge line")?;
    let f: Vec<usize> = fields(ln, l, arity, "edge")?;
    if f[0] >= n || f[1] >= n {
        return Err(parse_err(ln, format!("edge ({}, {}) out of range for n={n}", f[0], f[1])));
    }
    Ok(f)
}

pub fn parse_graph(text: &str) -> Result<VertexWeightedDigraph> {
    let mut lines = Lines::new(text);
    let (_, n, m): (_, usize, usize) = header2(&mut lines, "n m")?;
    let weights = read_weights(&mut lines, n)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let f = read_edge(&mut lines, n, 2)?;
        edges.push((f[0], f[1]));
    }
    lines.finish()?;
    VertexWeightedDigraph::from_edges(n, weights, &edges)
}

pub fn format_edge_class_graph(g: &EdgeClassDigraph) -> String {
    let edges = g.edges();
    let mut s = format!(
        "{} {}\n{} {}\n{}\n",
        g.n(),
        edges.len(),
        g.class_costs().len(),
        join(g.class_costs(), " "),
        join(g.weights(), " ")
    );
    for (u, v, c) in edges {
        writeln!(s, "{u} {v} {c}").unwrap();
    }
    s
}

pub fn parse_edge_class_graph(text: &str) -> Result<EdgeClassDigraph> {
    let mut lines = Lines::new(text);
    let (_, n, m): (_, usize, usize) = header2(&mut lines, "n m")?;
    let (ln, l) = lines.next_line("class header `q c_1 ... c_q`")?;
    let mut toks = l.split_whitespace();
    let q: usize = token(ln, toks.next().unwrap_or(""), "class count")?;
    let costs: Vec<f64> = fields(ln, &toks.collect::<Vec<_>>().join(" "), q, "class cost")?;
    let weights = read_weights(&mut lines, n)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let f = read_edge(&mut lines, n, 3)?;
        edges.push((f[0], f[1], f[2]));
    }
    lines.finish()?;
    EdgeClassDigraph::new(weights, costs, &edges)
}

pub fn format_point_set(p: &PointSet) -> String {
    let mut s = format!("{} {}\n", p.len(), p.radius());
    for (pt, w) in p.points().iter().zip(p.weights()) {
        writeln!(s, "{} {} {}", pt.x, pt.y, w).unwrap();
    }
    s
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut lines = Lines::new(text);
    let (_, n, r): (_, usize, f64) = header2(&mut lines, "n r")?;
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, l) = lines.next_line("a point line `x y w`")?;
        let f: Vec<f64> = fields(ln, l, 3, "point")?;
        points.push(Point::new(f[0], f[1]));
        weights.push(f[2]);
    }
    lines.finish()?;
    PointSet::new(points, weights, r)
}

pub fn format_tree<W: Copy + Default + Display + std::ops::Add<Output = W>>(t: &SpanningTree<W>) -> String {
    let mut s = format!("# nodes={} total={}\n", t.node_count(), t.cost());
    for e in t.edges() {
        writeln!(s, "{} {} {}", e.u, e.v, e.cost).unwrap();
    }
    s
}

pub fn parse_tree<W>(text: &str) -> Result<SpanningTree<W>>
where
    W: Copy + Default + Display + FromStr + PartialEq + std::ops::Add<Output = W>,
{
    let mut lines = Lines::new(text);
    let (ln, l) = lines.next_line("tree header")?;
    let rest = l
        .strip_prefix('#')
        .ok_or_else(|| parse_err(ln, "expected `# nodes=N total=C`"))?;
    let mut nodes = None;
    let mut total = None;
    for tok in rest.split_whitespace() {
        match tok.split_once('=') {
            Some(("nodes", v)) => nodes = Some(token::<usize>(ln, v, "node count")?),
            Some(("total", v)) => total = Some(token::<W>(ln, v, "total cost")?),
            _ => return Err(parse_err(ln, format!("unexpected header field `{tok}`"))),
        }
    }
    let (Some(nodes), Some(total)) = (nodes, total) else {
        return Err(parse_err(ln, "header needs nodes= and total="));
    };
    let mut edges = Vec::with_capacity(nodes.saturating_sub(1));
    for _ in 1..nodes {
        let (ln, l) = lines.next_line("a tree edge `u v cost`")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, "expected `u v cost`"));
        }
        edges.push(TreeEdge {
            u: token(ln, toks[0], "node")?,
            v: token(ln, toks[1], "node")?,
            cost: token(ln, toks[2], "cost")?,
        });
    }
    lines.finish()?;
    let tree = SpanningTree::new(nodes, edges)?;
    if tree.cost() != total {
        return Err(parse_err(ln, format!("header total {total} disagrees with edge sum {}", tree.cost())));
    }
    Ok(tree)
}
