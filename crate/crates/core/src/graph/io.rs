//! graph6 and JSON edge-list encodings.
//!
//! graph6 follows the published format: one size byte `n + 63` (small `n`
//! only, since graphs are capped at 24 vertices), then the upper triangle of
//! the adjacency matrix in column order `(0,1), (0,2), (1,2), (0,3), ..`,
//! six bits per byte, each byte offset by 63, zero padded.

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, MAX_VERTICES};

const GRAPH6_HEADER: &[u8] = b">>graph6<<";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    Json,
}

fn parse_err(offset: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        offset,
        message: message.into(),
    }
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(1 + (n * n / 12) + 1);
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Parses one graph6 record. An optional `>>graph6<<` header and trailing
/// whitespace are accepted.
pub fn read_graph6(input: &[u8]) -> Result<Graph, GraphError> {
    let mut start = 0;
    if input.starts_with(GRAPH6_HEADER) {
        start = GRAPH6_HEADER.len();
    }
    let mut end = input.len();
    while end > start && input[end - 1].is_ascii_whitespace() {
        end -= 1;
    }
    let body = &input[start..end];
    let Some(&first) = body.first() else {
        return Err(parse_err(start, "empty graph6 record"));
    };
    if !(63..=126).contains(&first) {
        return Err(parse_err(start, format!("invalid size byte {first:#04x}")));
    }
    if first == 126 {
        return Err(parse_err(
            start,
            format!("large graph6 sizes are unsupported (at most {MAX_VERTICES} vertices)"),
        ));
    }
    let n = (first - 63) as usize;
    if n > MAX_VERTICES {
        return Err(parse_err(start, format!("{n} vertices exceeds the cap of {MAX_VERTICES}")));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    let data = &body[1..];
    if data.len() != need {
        let at = start + 1 + data.len().min(need);
        return Err(parse_err(
            at,
            format!("expected {need} data bytes for n={n}, found {}", data.len()),
        ));
    }
    for (k, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(start + 1 + k, format!("invalid graph6 byte {b:#04x}")));
        }
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    // Padding bits must be zero; anything else encodes an edge past the matrix.
    if bits % 6 != 0 {
        let last = data[need - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(parse_err(start + need, "edge bit set beyond the adjacency matrix"));
        }
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn write_json_graph(g: &Graph) -> String {
    let jg = JsonGraph {
        n: g.n(),
        edges: g.edges().map(|(i, j)| [i, j]).collect(),
    };
    serde_json::to_string(&jg).expect("graph serializes")
}

pub fn read_json_graph(input: &[u8]) -> Result<Graph, GraphError> {
    let jg: JsonGraph = serde_json::from_slice(input).map_err(|e| {
        // serde_json reports line/column; convert to a byte offset.
        let (line, col) = (e.line(), e.column());
        let mut offset = 0;
        for (ln, text) in input.split(|&b| b == b'\n').enumerate() {
            if ln + 1 == line {
                offset += col.saturating_sub(1);
                break;
            }
            offset += text.len() + 1;
        }
        parse_err(offset, e.to_string())
    })?;
    let edges: Vec<(usize, usize)> = jg.edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::from_edges(jg.n, &edges)
}

/// Detects JSON by its first non-space byte, otherwise parses graph6.
pub fn read_graph(input: &[u8]) -> Result<(Graph, GraphFormat), GraphError> {
    let first = input.iter().position(|b| !b.is_ascii_whitespace());
    match first.map(|i| input[i]) {
        Some(b'{') => read_json_graph(input).map(|g| (g, GraphFormat::Json)),
        Some(_) => {
            let i = first.unwrap_or(0);
            read_graph6(&input[i..])
                .map(|g| (g, GraphFormat::Graph6))
                .map_err(|e| match e {
                    GraphError::Parse { offset, message } => GraphError::Parse {
                        offset: offset + i,
                        message,
                    },
                    other => other,
                })
        }
        None => Err(parse_err(0, "empty input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn c5_graph6() {
        // Reference bytes produced by networkx.to_graph6_bytes(cycle_graph(5)).
        let g = read_graph6(b"Dhc").unwrap();
        assert_eq!(g, Graph::cycle(5));
        assert_eq!(write_graph6(&Graph::cycle(5)), "Dhc");
        assert_eq!(write_graph6(&Graph::path(2)), "A_");
        assert_eq!(read_graph6(b">>graph6<<Dhc\n").unwrap(), Graph::cycle(5));
        // Five vertices, last four bits of the upper triangle: a star.
        let star = Graph::from_edges(5, &[(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert_eq!(read_graph6(b"D?{").unwrap(), star);
    }

    #[test]
    fn graph6_errors() {
        // 'D' then 'h' then 'd': last byte sets a padding bit.
        match read_graph6(b"Dhd") {
            Err(GraphError::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(read_graph6(b"Dh"), Err(GraphError::Parse { offset: 2, .. })));
        assert!(matches!(read_graph6(b"D h"), Err(GraphError::Parse { offset: 1, .. })));
        assert!(matches!(read_graph6(b"~"), Err(GraphError::Parse { .. })));
        assert!(matches!(read_graph6(b"X"), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn json_edge_list() {
        let g = read_json_graph(br#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        assert_eq!(g, Graph::path(2));
        assert_eq!(write_json_graph(&g), r#"{"n":2,"edges":[[0,1]]}"#);
        assert!(read_json_graph(br#"{"n":2,"edges":[[0,2]]}"#).is_err());
        match read_json_graph(b"{\"n\":2,\n\"edges\":[[0,1]") {
            Err(GraphError::Parse { offset, .. }) => assert!(offset > 7),
            other => panic!("expected parse error, got {other:?}"),
        }
        let (g, f) = read_graph(b"  {\"n\":3,\"edges\":[[0,1],[1,2]]}").unwrap();
        assert_eq!((g, f), (Graph::path(3), GraphFormat::Json));
        assert_eq!(read_graph(b"Dhc\n").unwrap().1, GraphFormat::Graph6);
    }

    proptest! {
        #[test]
        fn graph6_round_trip(n in 0usize..=24, seed in any::<u64>()) {
            let mut g = Graph::empty(n).unwrap();
            let mut s = seed;
            for j in 1..n {
                for i in 0..j {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if s >> 63 == 1 { g.add_edge(i, j); }
                }
            }
            let text = write_graph6(&g);
            prop_assert_eq!(read_graph6(text.as_bytes()).unwrap(), g);
            let json = write_json_graph(&g);
            prop_assert_eq!(read_json_graph(json.as_bytes()).unwrap(), g);
            prop_assert_eq!(write_graph6(&read_graph6(text.as_bytes()).unwrap()), text);
        }
    }
}
