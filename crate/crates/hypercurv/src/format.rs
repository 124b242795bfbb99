//! Line-oriented text format for hypergraphs.
//!
//! ```text
//! # comment lines start with '#'
//! vertices <n>
//! multi              # optional: permit coinciding hyperedges
//! edge <w> <v1> ... <vk>
//! ```
//!
//! The first non-comment line must be `vertices <n>`. Serialization emits
//! hyperedges in input order with weights at 17 significant digits, which
//! round-trips every f64 exactly.

use crate::error::HypergraphError;
use crate::hypergraph::Hypergraph;

pub fn parse(text: &str) -> Result<Hypergraph, HypergraphError> {
    let mut n: Option<usize> = None;
    let mut allow_multi = false;
    let mut edges: Vec<(Vec<usize>, f64)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        match head {
            "vertices" => {
                if n.is_some() {
                    return parse_err(line_no, "duplicate 'vertices' line");
                }
                let count = tokens
                    .next()
                    .ok_or_else(|| parse_err_val(line_no, "missing vertex count"))?;
                if tokens.next().is_some() {
                    return parse_err(line_no, "trailing tokens after vertex count");
                }
                let count: usize = count
                    .parse()
                    .map_err(|_| parse_err_val(line_no, "vertex count is not an integer"))?;
                n = Some(count);
            }
            "multi" => {
                if n.is_none() {
                    return parse_err(line_no, "'multi' before 'vertices'");
                }
                allow_multi = true;
            }
            "edge" => {
                if n.is_none() {
                    return parse_err(line_no, "'edge' before 'vertices'");
                }
                let w = tokens
                    .next()
                    .ok_or_else(|| parse_err_val(line_no, "missing edge weight"))?;
                let w: f64 = w
                    .parse()
                    .map_err(|_| parse_err_val(line_no, "edge weight is not a number"))?;
                let mut verts = Vec::new();
                for t in tokens {
                    let v: usize = t.parse().map_err(|_| {
                        parse_err_val(line_no, &format!("vertex index '{t}' is not an integer"))
                    })?;
                    verts.push(v);
                }
                if verts.is_empty() {
                    return parse_err(line_no, "edge lists no vertices");
                }
                edges.push((verts, w));
            }
            other => {
                return parse_err(line_no, &format!("unknown directive '{other}'"));
            }
        }
    }

    let n = n.ok_or_else(|| HypergraphError::Parse {
        line: text.lines().count() + 1,
        message: "missing 'vertices' line".into(),
    })?;
    if allow_multi {
        Hypergraph::new_multi(n, edges)
    } else {
        Hypergraph::new(n, edges)
    }
}

pub fn serialize(h: &Hypergraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("vertices {}\n", h.vertex_count()));
    if h.allow_multi() {
        out.push_str("multi\n");
    }
    for e in h.edges() {
        out.push_str(&format!("edge {:.16e}", e.weight));
        for v in &e.vertices {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

fn parse_err<T>(line: usize, message: &str) -> Result<T, HypergraphError> {
    Err(parse_err_val(line, message))
}

fn parse_err_val(line: usize, message: &str) -> HypergraphError {
    HypergraphError::Parse {
        line,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_edge_file() {
        let h = parse("vertices 3\nedge 1.0 0 1 2").unwrap();
        assert_eq!(h.edges().len(), 1);
        assert_eq!(h.edges()[0].vertices, vec![0, 1, 2]);
        assert_eq!(h.metric().diam(), 1);
    }

    #[test]
    fn two_edge_file_with_comments() {
        let h = parse("# H2\nvertices 3\nedge 1 0 1 2\n# the pair edge\nedge 1 0 1\n").unwrap();
        assert_eq!(h.edges().len(), 2);
        assert_eq!(h.metric().vol(), 5.0);
    }

    #[test]
    fn negative_weight_is_a_validation_error() {
        let err = parse("vertices 2\nedge -1 0 1").unwrap_err();
        assert!(matches!(err, HypergraphError::Validation(_)), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse("vertices 2\nedge x 0 1").unwrap_err();
        assert_eq!(
            err,
            HypergraphError::Parse {
                line: 2,
                message: "edge weight is not a number".into()
            }
        );
        let err = parse("vertices 2\nfoo").unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 2, .. }));
    }

    #[test]
    fn disconnected_file_is_a_validation_failure() {
        let err = parse("vertices 4\nedge 1 0 1\nedge 1 2 3").unwrap_err();
        assert!(matches!(err, HypergraphError::Disconnected { .. }));
    }

    #[test]
    fn duplicate_edges_require_multi() {
        let text = "vertices 3\nedge 1 0 1 2\nedge 2 0 1 2";
        assert!(parse(text).is_err());
        let text = "vertices 3\nmulti\nedge 1 0 1 2\nedge 2 0 1 2";
        assert!(parse(text).is_ok());
    }

    #[test]
    fn round_trip_is_canonical() {
        let text = "vertices 4\nedge 0.5 0 1 2\nedge 1.25 2 3\nedge 3 0 3\n";
        let h = parse(text).unwrap();
        let s = serialize(&h);
        let h2 = parse(&s).unwrap();
        assert_eq!(serialize(&h2), s);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn serialize_parse_round_trip(
            weights in proptest::collection::vec(1e-6f64..1e6, 1..5),
            seed in any::<u64>(),
        ) {
            // Random connected hypergraph: a covering edge plus random extras.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..7);
            let mut edges = vec![((0..n).collect::<Vec<_>>(), weights[0])];
            for w in &weights[1..] {
                let mut verts: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if verts.is_empty() {
                    verts.push(rng.gen_range(0..n));
                }
                edges.push((verts, *w));
            }
            let h = Hypergraph::new_multi(n, edges).unwrap();
            let s = serialize(&h);
            let h2 = parse(&s).unwrap();
            prop_assert_eq!(h.vertex_count(), h2.vertex_count());
            prop_assert_eq!(h.edges().len(), h2.edges().len());
            for (a, b) in h.edges().iter().zip(h2.edges()) {
                prop_assert_eq!(&a.vertices, &b.vertices);
                prop_assert_eq!(a.weight.to_bits(), b.weight.to_bits());
            }
        }
    }
}
