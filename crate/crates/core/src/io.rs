//! Edge-list text format, consumed and produced by every CLI surface.
//!
//! First line `n m`, then `m` lines `u v mult` with 1-indexed endpoints and
//! an optional multiplicity (default 1).  Anything after `#` is a comment;
//! blank lines are skipped.  Serialization is canonical: lines sorted by
//! `(u, v)`, multiplicity omitted when 1, so parse-then-serialize is the
//! identity on canonical files up to line ordering.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};

pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
    let mut header: Option<(usize, usize, usize)> = None; // (n, m, line_no)
    let mut edges: Vec<(Vertex, Vertex, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let parse_num = |s: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("expected a nonnegative integer, got {s:?}"),
            })
        };
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "header must be `n m`".to_string(),
                    });
                }
                let n = parse_num(fields[0])? as usize;
                let m = parse_num(fields[1])? as usize;
                header = Some((n, m, line_no));
            }
            Some((_, m, _)) => {
                if edges.len() == m {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("more than the declared {m} edge lines"),
                    });
                }
                if fields.len() != 2 && fields.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "edge line must be `u v` or `u v mult`".to_string(),
                    });
                }
                let u = parse_num(fields[0])? as Vertex;
                let v = parse_num(fields[1])? as Vertex;
                let mult = if fields.len() == 3 {
                    parse_num(fields[2])?
                } else {
                    1
                };
                edges.push((u, v, mult));
            }
        }
    }
    let (n, m, header_line) = header.ok_or(Error::Parse {
        line: 1,
        msg: "empty input, expected `n m` header".to_string(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    MultiGraph::build(n, &edges).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line: header_line,
            msg: other.to_string(),
        },
    })
}

pub fn serialize_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_pair_count());
    for (u, v, mult) in g.edges() {
        if mult == 1 {
            out.push_str(&format!("{u} {v}\n"));
        } else {
            out.push_str(&format!("{u} {v} {mult}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_basic() {
        let g = parse_edge_list("3 3\n1 2\n2 3\n1 3\n").unwrap();
        assert_eq!(g, MultiGraph::simple(3, &[(1, 2), (2, 3), (1, 3)]).unwrap());
    }

    #[test]
    fn parse_with_comments_and_mult() {
        let text = "# a doubled edge\n2 1\n1 2 2  # both strands\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.multiplicity(1, 2), 2);
    }

    #[test]
    fn parse_accumulates_duplicates() {
        let g = parse_edge_list("2 2\n1 2\n1 2\n").unwrap();
        assert_eq!(g.multiplicity(1, 2), 2);
        // but the serialized form merges them
        assert_eq!(serialize_edge_list(&g), "2 1\n1 2 2\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("3 2\n1 2\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse_edge_list("3 1\n1 x\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse_edge_list("3 1\n1 1\n") {
            Err(Error::Parse { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn canonical_round_trip_is_identity() {
        let text = "4 3\n1 2\n2 4 3\n3 4\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(serialize_edge_list(&g), text);
    }

    fn arb_graph() -> impl Strategy<Value = MultiGraph> {
        (1usize..8).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                .collect();
            let len = pairs.len();
            proptest::collection::vec(0u64..3, len).prop_map(move |mults| {
                let edges: Vec<(usize, usize, u64)> = pairs
                    .iter()
                    .zip(&mults)
                    .filter(|(_, &m)| m > 0)
                    .map(|(&(u, v), &m)| (u, v, m))
                    .collect();
                MultiGraph::build(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(g in arb_graph()) {
            let text = serialize_edge_list(&g);
            let back = parse_edge_list(&text).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
