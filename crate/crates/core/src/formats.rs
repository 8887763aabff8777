//! Plain-text formats. Vertex ids and bag ids are 1-indexed in files and
//! 0-indexed in memory. Lines whose first token is `c` are comments.
//! Writers are canonical, so write, read, write reproduces the same bytes.
//!
//! * graphs: `p tw <vertices> <edges>`, then `u v` per edge; a comment
//!   `c family <kind> <m> <n>` restores coordinates;
//! * tree decompositions: `s td <bags> <max bag size> <vertices>`, then
//!   `b <id> <v...>` per bag, then `a b` per tree edge;
//! * brambles: `b <elements> <vertices>`, then one element per line; a
//!   comment `c label <name>` names the construction;
//! * divisors: `d <vertices> <degree>`, then `v chips` per nonzero vertex.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bramble::BrambleLabel;
use crate::chipfire::Divisor;
use crate::error::{Error, Result};
use crate::graph::{FamilyKind, Graph, VertexId, VertexSet};
use crate::treewidth::TreeDecomposition;

struct Parsed<'a> {
    data: Vec<(usize, Vec<&'a str>)>,
    comments: Vec<(usize, Vec<&'a str>)>,
}

fn tokenize(text: &str) -> Parsed<'_> {
    let mut data = Vec::new();
    let mut comments = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first() {
            None => {}
            Some(&"c") => comments.push((i + 1, tokens)),
            Some(_) => data.push((i + 1, tokens)),
        }
    }
    Parsed { data, comments }
}

fn num<T: FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{token}`")))
}

/// A 1-indexed vertex id in `1..=n`, returned 0-indexed.
fn vertex(token: &str, line: usize, n: usize) -> Result<VertexId> {
    let v: usize = num(token, line, "vertex id")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn header<'a, 'b>(parsed: &'b Parsed<'a>, tag: &[&str], fields: usize) -> Result<(usize, &'b [&'a str])> {
    let Some((line, tokens)) = parsed.data.first() else {
        return Err(Error::parse(1, format!("missing `{}` header", tag.join(" "))));
    };
    if tokens.len() != tag.len() + fields || tokens[..tag.len()] != *tag {
        return Err(Error::parse(*line, format!("expected `{} ...` header", tag.join(" "))));
    }
    Ok((*line, &tokens[tag.len()..]))
}

pub fn write_gr(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(meta) = g.family_meta() {
        if !matches!(meta.kind, FamilyKind::Other | FamilyKind::Product) {
            writeln!(out, "c family {} {} {}", meta.kind.name(), meta.m, meta.n).unwrap();
        }
    }
    writeln!(out, "p tw {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn read_gr(text: &str) -> Result<Graph> {
    let parsed = tokenize(text);
    let (line, fields) = header(&parsed, &["p", "tw"], 2)?;
    let n: usize = num(fields[0], line, "vertex count")?;
    let m: usize = num(fields[1], line, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line, tokens) in &parsed.data[1..] {
        if tokens.len() != 2 {
            return Err(Error::parse(*line, "expected `u v`"));
        }
        edges.push((vertex(tokens[0], *line, n)?, vertex(tokens[1], *line, n)?));
    }
    if edges.len() != m {
        return Err(Error::parse(line, format!("header promises {m} edges, found {}", edges.len())));
    }
    let g = Graph::from_edges(n, edges)?;

    let family = parsed
        .comments
        .iter()
        .find(|(_, t)| t.get(1) == Some(&"family"));
    let Some((line, tokens)) = family else {
        return Ok(g);
    };
    if tokens.len() != 5 {
        return Err(Error::parse(*line, "expected `c family <kind> <m> <n>`"));
    }
    let kind = FamilyKind::from_name(tokens[2])
        .ok_or_else(|| Error::parse(*line, format!("unknown family `{}`", tokens[2])))?;
    let fm: usize = num(tokens[3], *line, "family m")?;
    let fn_: usize = num(tokens[4], *line, "family n")?;
    let generated = Graph::family(kind, fm, fn_)?;
    if generated.vertex_count() != g.vertex_count() || !generated.edges().eq(g.edges()) {
        return Err(Error::parse(*line, "edges do not match the declared family"));
    }
    Ok(generated)
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "s td {} {} {}",
        td.node_count(),
        td.max_bag_size(),
        td.vertex_universe()
    )
    .unwrap();
    for (i, bag) in td.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag.iter() {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

pub fn read_td(text: &str) -> Result<TreeDecomposition> {
    let parsed = tokenize(text);
    let (line, fields) = header(&parsed, &["s", "td"], 3)?;
    let count: usize = num(fields[0], line, "bag count")?;
    let max_bag: usize = num(fields[1], line, "max bag size")?;
    let n: usize = num(fields[2], line, "vertex count")?;
    let mut bags: Vec<Option<VertexSet>> = vec![None; count];
    let mut edges = Vec::new();
    for (line, tokens) in &parsed.data[1..] {
        if tokens[0] == "b" {
            let id = tokens
                .get(1)
                .ok_or_else(|| Error::parse(*line, "bag line without id"))?;
            let id: usize = num(id, *line, "bag id")?;
            if id == 0 || id > count {
                return Err(Error::parse(*line, format!("bag id {id} outside 1..={count}")));
            }
            if bags[id - 1].is_some() {
                return Err(Error::parse(*line, format!("bag {id} listed twice")));
            }
            let mut bag = VertexSet::new(n);
            for t in &tokens[2..] {
                bag.insert(vertex(t, *line, n)?);
            }
            bags[id - 1] = Some(bag);
        } else if tokens.len() == 2 {
            edges.push((
                vertex(tokens[0], *line, count)?,
                vertex(tokens[1], *line, count)?,
            ));
        } else {
            return Err(Error::parse(*line, "expected a bag line or a tree edge"));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(line, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let td = TreeDecomposition::new(bags, edges)?;
    if td.max_bag_size() != max_bag {
        return Err(Error::parse(
            line,
            format!("header max bag size {max_bag}, actual {}", td.max_bag_size()),
        ));
    }
    Ok(td)
}

/// Elements as read from a bramble file; not yet validated as a bramble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrambleFile {
    pub vertex_count: usize,
    pub label: BrambleLabel,
    pub elements: Vec<VertexSet>,
}

pub fn write_bramble(label: BrambleLabel, vertex_count: usize, elements: &[VertexSet]) -> String {
    let mut out = String::new();
    if label != BrambleLabel::Custom {
        writeln!(out, "c label {}", label.name()).unwrap();
    }
    writeln!(out, "b {} {}", elements.len(), vertex_count).unwrap();
    for e in elements {
        let ids: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

pub fn read_bramble(text: &str) -> Result<BrambleFile> {
    let parsed = tokenize(text);
    let (line, fields) = header(&parsed, &["b"], 2)?;
    let count: usize = num(fields[0], line, "element count")?;
    let n: usize = num(fields[1], line, "vertex count")?;
    let mut elements = Vec::with_capacity(count);
    for (line, tokens) in &parsed.data[1..] {
        let mut set = VertexSet::new(n);
        for t in tokens {
            set.insert(vertex(t, *line, n)?);
        }
        elements.push(set);
    }
    if elements.len() != count {
        return Err(Error::parse(
            line,
            format!("header promises {count} elements, found {}", elements.len()),
        ));
    }
    let label = match parsed.comments.iter().find(|(_, t)| t.get(1) == Some(&"label")) {
        Some((line, t)) => t
            .get(2)
            .and_then(|name| BrambleLabel::from_name(name))
            .ok_or_else(|| Error::parse(*line, "expected `c label <name>`"))?,
        None => BrambleLabel::Custom,
    };
    Ok(BrambleFile {
        vertex_count: n,
        label,
        elements,
    })
}

pub fn write_divisor(d: &Divisor) -> String {
    let mut out = String::new();
    writeln!(out, "d {} {}", d.len(), d.degree()).unwrap();
    for (v, &c) in d.chips().iter().enumerate() {
        if c != 0 {
            writeln!(out, "{} {}", v + 1, c).unwrap();
        }
    }
    out
}

pub fn read_divisor(text: &str) -> Result<Divisor> {
    let parsed = tokenize(text);
    let (line, fields) = header(&parsed, &["d"], 2)?;
    let n: usize = num(fields[0], line, "vertex count")?;
    let degree: i64 = num(fields[1], line, "degree")?;
    let mut d = Divisor::zero(n);
    let mut seen = vec![false; n];
    for (line, tokens) in &parsed.data[1..] {
        if tokens.len() != 2 {
            return Err(Error::parse(*line, "expected `v chips`"));
        }
        let v = vertex(tokens[0], *line, n)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::parse(*line, format!("vertex {} listed twice", v + 1)));
        }
        d.0[v] = num(tokens[1], *line, "chip count")?;
    }
    if d.degree() != degree {
        return Err(Error::parse(
            line,
            format!("header degree {degree}, chips sum to {}", d.degree()),
        ));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bramble::gen_grid_bramble;
    use crate::treewidth::{exact_treewidth, SolverConfig};

    #[test]
    fn graph_round_trip_keeps_coordinates() {
        let g = Graph::stacked_prism(5, 3).unwrap();
        let text = write_gr(&g);
        assert!(text.starts_with("c family stacked_prism 5 3\np tw 15 25\n"));
        let back = read_gr(&text).unwrap();
        assert_eq!(back.family_meta(), g.family_meta());
        assert_eq!(write_gr(&back), text);
    }

    #[test]
    fn graph_parse_errors() {
        assert!(matches!(read_gr("p tw 3 2\n1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_gr("p tw 3 1\n1 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_gr("c hi\n\np tw 2 1\n1 x\n"), Err(Error::Parse { line: 4, .. })));
        assert!(read_gr("c family cycle 4 0\np tw 4 3\n1 2\n2 3\n3 4\n").is_err());
        let plain = read_gr("c anything\np tw 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(write_gr(&plain), "p tw 3 2\n1 2\n2 3\n");
    }

    #[test]
    fn decomposition_round_trip() {
        let g = Graph::toroidal_grid(4, 3).unwrap();
        let td = exact_treewidth(&g, &SolverConfig::default()).unwrap().decomposition;
        let text = write_td(&td);
        let back = read_td(&text).unwrap();
        assert_eq!(back, td);
        assert_eq!(write_td(&back), text);
        assert!(read_td("s td 2 1 2\nb 1 1\nb 2 2\n").is_err());
        assert!(read_td("s td 1 2 2\nb 1 1\n").is_err());
    }

    #[test]
    fn bramble_round_trip() {
        let g = Graph::grid(3, 3).unwrap();
        let b = gen_grid_bramble(&g).unwrap();
        let text = write_bramble(b.label(), 9, b.elements());
        let file = read_bramble(&text).unwrap();
        assert_eq!(file.label, BrambleLabel::GridB);
        assert_eq!(file.elements, b.elements());
        assert_eq!(write_bramble(file.label, 9, &file.elements), text);
    }

    #[test]
    fn divisor_round_trip() {
        let d = Divisor(vec![0, 3, -1, 0, 2]);
        let text = write_divisor(&d);
        assert_eq!(text, "d 5 4\n2 3\n3 -1\n5 2\n");
        assert_eq!(read_divisor(&text).unwrap(), d);
        assert!(read_divisor("d 2 5\n1 1\n").is_err());
        assert!(read_divisor("d 2 2\n1 1\n1 1\n").is_err());
    }
}
