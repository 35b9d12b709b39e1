use corrgraph::edgelist::{parse_edge_list, read_edge_list, write_edge_list, EdgeListError};
use corrgraph_core::graph::{sample_er, Graph};
use corrgraph_core::rng::RngSeed;

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let g = sample_er(40, 0.1, RngSeed::new(12)).unwrap();
    write_edge_list(&path, &g).unwrap();
    assert_eq!(read_edge_list(&path).unwrap(), g);
}

#[test]
fn comments_and_blank_lines() {
    let g = parse_edge_list("# header\n3 2\n\n0 1\n# mid\n1 2\n").unwrap();
    assert_eq!(g, Graph::path(3));
    assert_eq!(parse_edge_list("0 0\n").unwrap().n(), 0);
}

#[test]
fn malformed_inputs() {
    let cases = [
        ("", "missing header"),
        ("3\n", "expected 2 integers"),
        ("3 1\n1 1\n", "self-loop"),
        ("3 1\n2 1\n", "smaller end first"),
        ("3 1\n0 3\n", "out of range"),
        ("3 2\n0 1\n0 1\n", "duplicate"),
        ("3 2\n0 1\n", "promises 2 edges, found 1"),
        ("3 1\n0 x\n", "not a nonnegative integer"),
        ("3 1\n0 -1\n", "not a nonnegative integer"),
    ];
    for (text, needle) in cases {
        let err = parse_edge_list(text).unwrap_err().to_string();
        assert!(err.contains(needle), "{text:?}: {err}");
    }
    assert!(matches!(
        parse_edge_list("2 1\n0 1 1\n"),
        Err(EdgeListError::Syntax { line: 2, .. })
    ));
    let missing = std::path::Path::new("/nonexistent/graph.txt");
    assert!(matches!(read_edge_list(missing), Err(EdgeListError::Io { .. })));
}
