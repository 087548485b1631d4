//! Acceptance suite: one test per release criterion, each enforcing its
//! stated tolerance and runtime budget. Criteria 1-2 pin worked examples,
//! 3-6 exhaustively check the relation algebra and inference against
//! enumeration oracles, 7 checks the convolution kernel against a naive
//! evaluator, 8-10 cover serialization and the batch pipeline end to end.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tempograph::algebra::{
    build_composition_table, compose, relate, relate_days, TemporalRelation, RELATION_VOCABULARY,
};
use tempograph::chronon::{extract_question_time, normalize_timex, TimeInterval};
use tempograph::fusion::{
    err_serialize, gnn_export, relations_to_question_time, unfused_serialization,
};
use tempograph::graph::{build_graph, select_subgraph, GraphVariant};
use tempograph::inference::{fold_path, infer_all, infer_relation, shortest_path};
use tempograph::relconv::{forward, Activation, NodeStates, Normalizer, RelConvLayer};
use tempograph::{CalendarDate, TimePoint};

use common::{all_simple_paths, generate_corpus, oracle_fold, random_graph};

fn date(s: &str) -> TimePoint {
    s.parse().expect("test date")
}

fn interval(start: &str, end: &str) -> TimeInterval {
    TimeInterval::new(date(start), date(end)).expect("test interval")
}

/// Criterion 1: normalization of the two worked time expressions and their
/// AFTER relation, exact, under a millisecond once patterns are compiled.
#[test]
fn acceptance_01_normalization_worked_example() {
    // Prime the lazily compiled pattern set so the budget measures the
    // operations, not one-time setup.
    for warmup in ["the year 1999", "from 1000 to 1001"] {
        normalize_timex(warmup, None).unwrap();
    }

    let started = Instant::now();
    let doc_time = normalize_timex("the year 2022", None).unwrap();
    let question_time = normalize_timex("from 1789 to 1797", None).unwrap();
    let relation = relate(&doc_time, &question_time);
    let elapsed = started.elapsed();

    assert_eq!(doc_time, interval("2022-01-01", "2022-12-31"));
    assert_eq!(question_time, interval("1789-01-01", "1797-12-31"));
    assert_eq!(relation, TemporalRelation::After);
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
}

/// Criterion 2: the worked fusion fixture produces the exact question-time
/// and before markers, byte for byte, in under ten milliseconds.
#[test]
fn acceptance_02_err_worked_example() {
    let question = "What was George Washington's position between 1776 - 1780?";
    let text = "Congress created the Continental Army on June 14, 1775.";
    extract_question_time(question).ok();

    let started = Instant::now();
    let qspan = extract_question_time(question).unwrap().unwrap();
    let annotation = serde_json::from_value(serde_json::json!({
        "text": text,
        "events": [{"start": 9, "end": 16, "surface": "created"}],
        "timexes": [{"start": 41, "end": 54, "surface": "June 14, 1775"}],
        "tlinks": [{"source": 0, "target": 1, "relation": "INCLUDED_BY"}]
    }))
    .unwrap();
    let graph = build_graph(question, &qspan, &annotation).unwrap().graph;
    let relations = relations_to_question_time(&graph);
    let fused = err_serialize(question, text, &graph, &relations, false).unwrap();
    let elapsed = started.elapsed();

    assert!(fused
        .text
        .contains("<question time>between 1776 - 1780</question time>"));
    assert!(fused.text.contains("<before>June 14, 1775</before>"));
    assert!(fused.text.contains("Congress <before>created</before>"));
    assert!(elapsed < Duration::from_millis(10), "took {elapsed:?}");
}

/// Criterion 3: every determined composition cell survives exhaustive
/// enumeration in a width-12 window (wider than the generation window), and
/// the identity and inverse-symmetry invariants hold for all 36 cells.
#[test]
fn acceptance_03_composition_table_soundness() {
    let started = Instant::now();
    let table = build_composition_table().unwrap();

    let mut intervals = Vec::new();
    for s in 0..12i64 {
        for e in s..12 {
            intervals.push((s, e));
        }
    }
    let idx = |r: TemporalRelation| r.vocabulary_index().unwrap();
    let mut outcomes = [[0u8; 6]; 6];
    for &a in &intervals {
        for &b in &intervals {
            let i = idx(relate_days(a, b));
            for &c in &intervals {
                let j = idx(relate_days(b, c));
                outcomes[i][j] |= 1 << idx(relate_days(a, c));
            }
        }
    }
    for r1 in RELATION_VOCABULARY {
        for r2 in RELATION_VOCABULARY {
            let cell = table.get(r1, r2);
            let mask = outcomes[idx(r1)][idx(r2)];
            if cell.is_storable() {
                assert_eq!(
                    mask,
                    1 << idx(cell),
                    "counterexample for ({r1}, {r2}) -> {cell}"
                );
            } else {
                assert!(
                    mask.count_ones() >= 2,
                    "({r1}, {r2}) marked UNDETERMINED but enumeration is unanimous"
                );
            }
        }
    }
    for r in RELATION_VOCABULARY {
        assert_eq!(table.get(r, TemporalRelation::Simultaneous), r);
        assert_eq!(table.get(TemporalRelation::Simultaneous, r), r);
    }
    for r in RELATION_VOCABULARY {
        for s in RELATION_VOCABULARY {
            let fwd = table.get(r, s);
            if fwd.is_storable() {
                assert_eq!(table.get(s.inverse(), r.inverse()), fwd.inverse());
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
}

/// Criterion 4: the canonical transitivity example.
#[test]
fn acceptance_04_transitivity_example() {
    assert_eq!(
        compose(TemporalRelation::Before, TemporalRelation::Includes),
        TemporalRelation::Before
    );
}

/// Criterion 5: on 200 random graphs, batch inference equals per-node
/// shortest-path folding, and both agree with exhaustive simple-path
/// enumeration wherever every path folds to the same answer.
#[test]
fn acceptance_05_inference_oracle_equivalence() {
    let started = Instant::now();
    for seed in 0..200u64 {
        let g = random_graph(seed, 8, 14);
        let qt = g.question_time_id();
        let batch = infer_all(&g);
        for (&event, &inferred) in &batch {
            assert_eq!(inferred, infer_relation(&g, event), "seed {seed}");
            let by_path = shortest_path(&g, event, qt)
                .map(|hops| fold_path(&hops))
                .unwrap_or(TemporalRelation::Undetermined);
            assert_eq!(inferred, by_path, "seed {seed}");

            let paths = all_simple_paths(&g, event, qt);
            if paths.is_empty() {
                assert_eq!(inferred, TemporalRelation::Undetermined, "seed {seed}");
                continue;
            }
            let folds: BTreeSet<TemporalRelation> =
                paths.iter().map(|p| oracle_fold(&g, p)).collect();
            if folds.len() == 1 {
                assert_eq!(
                    inferred,
                    *folds.iter().next().unwrap(),
                    "seed {seed}, event {event}: diverged from unanimous oracle"
                );
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
}

/// Criterion 6: relate is total and exclusive — six independently stated
/// predicates admit exactly one winner per pair — exhaustively in a
/// width-10 window and on 100,000 random pairs with unbounded endpoints,
/// with inverse symmetry throughout.
#[test]
fn acceptance_06_relate_totality_antisymmetry() {
    let started = Instant::now();

    fn oracle(a: &TimeInterval, b: &TimeInterval) -> TemporalRelation {
        let simultaneous = a.start() == b.start() && a.end() == b.end();
        let before = a.end() < b.start();
        let after = a.start() > b.end();
        let includes = a.start() <= b.start() && b.end() <= a.end() && !simultaneous;
        let included_by = b.start() <= a.start() && a.end() <= b.end() && !simultaneous;
        let intersects = a.start() <= b.end() && b.start() <= a.end();
        let overlap = intersects && !includes && !included_by && !simultaneous;
        let flags = [before, after, includes, included_by, simultaneous, overlap];
        assert_eq!(flags.iter().filter(|f| **f).count(), 1, "{a:?} vs {b:?}");
        RELATION_VOCABULARY[flags.iter().position(|f| *f).unwrap()]
    }

    // Exhaustive over bounded day-offset intervals in a width-10 window,
    // anchored at a fixed date.
    let anchor = CalendarDate::new(1970, 1, 1).unwrap();
    let mut days = vec![anchor];
    for _ in 0..9 {
        days.push(days.last().unwrap().succ().unwrap());
    }
    let mut bounded = Vec::new();
    for i in 0..10 {
        for j in i..10 {
            bounded.push(TimeInterval::bounded(days[i], days[j]).unwrap());
        }
    }
    for a in &bounded {
        for b in &bounded {
            assert_eq!(relate(a, b), oracle(a, b));
            assert_eq!(relate(a, b).inverse(), relate(b, a));
        }
    }

    // Random pairs including unbounded endpoints.
    let mut rng = StdRng::seed_from_u64(0x7e3a);
    let mut random_interval = |rng: &mut StdRng| {
        let point = |rng: &mut StdRng| {
            let y = rng.random_range(1000..=2999);
            let m = rng.random_range(1..=12);
            let d = rng.random_range(1..=28);
            TimePoint::Date(CalendarDate::new(y, m, d).unwrap())
        };
        let start = match rng.random_range(0..10) {
            0 => TimePoint::NegInfinity,
            _ => point(rng),
        };
        let end = match rng.random_range(0..10) {
            0 => TimePoint::PosInfinity,
            _ => point(rng),
        };
        match TimeInterval::new(start, end) {
            Ok(iv) => iv,
            Err(_) => TimeInterval::new(end, start).expect("swapped bounds are ordered"),
        }
    };
    for _ in 0..100_000 {
        let a = random_interval(&mut rng);
        let b = random_interval(&mut rng);
        assert_eq!(relate(&a, &b), oracle(&a, &b));
        assert_eq!(relate(&a, &b).inverse(), relate(&b, &a));
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
}

/// Criterion 7: the convolution layer matches a naive scalar evaluation of
/// its equation within 1e-12 on 100 random instances, is permutation
/// equivariant, and collapses correctly under identity/zero weights.
#[test]
fn acceptance_07_relconv_reference() {
    use tempograph::fusion::{GnnEdge, GnnExport, GnnNode};
    use tempograph::graph::{NodeId, NodeKind};

    let started = Instant::now();

    fn export_of(n: usize, edges: &[(usize, usize, usize)]) -> GnnExport {
        GnnExport {
            version: "tg-gnn/1".into(),
            marked_text: String::new(),
            nodes: (0..n)
                .map(|i| GnnNode {
                    id: NodeId(i),
                    kind: if i == 0 { NodeKind::QuestionTime } else { NodeKind::DocEvent },
                    marker_index: i,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|&(s, d, r)| GnnEdge {
                    src: NodeId(s),
                    dst: NodeId(d),
                    relation_id: r,
                })
                .collect(),
            relation_vocabulary: RELATION_VOCABULARY.iter().map(|r| r.name().into()).collect(),
        }
    }

    // Naive evaluator: the double-sum equation, scalar by scalar.
    fn naive(layer: &RelConvLayer, export: &GnnExport, h: &NodeStates) -> Vec<Vec<f64>> {
        let n = export.nodes.len();
        let mut out = vec![vec![0.0; layer.output_dim()]; n];
        for i in 0..n {
            for k in 0..layer.output_dim() {
                let mut sum = 0.0;
                for r in 0..6 {
                    let neighbors: Vec<usize> = export
                        .edges
                        .iter()
                        .filter(|e| e.relation_id == r && e.dst.0 == i)
                        .map(|e| e.src.0)
                        .collect();
                    let c = match layer.normalizer {
                        Normalizer::Count => neighbors.len() as f64,
                        Normalizer::One => 1.0,
                    };
                    for &j in &neighbors {
                        for x in 0..layer.input_dim() {
                            sum += layer.relation_weights[r][[k, x]] * h.states[[j, x]] / c;
                        }
                    }
                }
                for x in 0..layer.input_dim() {
                    sum += layer.self_weight[[k, x]] * h.states[[i, x]];
                }
                out[i][k] = match layer.activation {
                    Activation::Identity => sum,
                    Activation::Relu => sum.max(0.0),
                };
            }
        }
        out
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..100 {
        let n = rng.random_range(1..=10);
        let d_in = rng.random_range(1..=8);
        let d_out = rng.random_range(1..=8);
        let mut mat = |r: usize, c: usize| {
            ndarray::Array2::from_shape_fn((r, c), |_| rng.random_range(-1.0..1.0))
        };
        let weights: Vec<_> = (0..6).map(|_| mat(d_out, d_in)).collect();
        let self_weight = mat(d_out, d_in);
        let h = NodeStates::new(mat(n, d_in));
        let mut edges = Vec::new();
        for _ in 0..rng.random_range(0..=2 * n) {
            let s = rng.random_range(0..n);
            let d = rng.random_range(0..n);
            if s != d {
                edges.push((s, d, rng.random_range(0..6)));
            }
        }
        let layer = RelConvLayer::new(
            weights,
            self_weight,
            if case % 2 == 0 { Activation::Identity } else { Activation::Relu },
            if case % 3 == 0 { Normalizer::One } else { Normalizer::Count },
        )
        .unwrap();
        let export = export_of(n, &edges);
        let fast = forward(&layer, &export, &h).unwrap();
        let slow = naive(&layer, &export, &h);
        for i in 0..n {
            for k in 0..d_out {
                assert!(
                    (fast.states[[i, k]] - slow[i][k]).abs() <= 1e-12,
                    "case {case}: node {i} dim {k}"
                );
            }
        }
    }

    // Permutation equivariance: relabeling rows permutes outputs.
    let mut rng = StdRng::seed_from_u64(0x0b57);
    for case in 0..20 {
        let n = rng.random_range(2..=10);
        let d = rng.random_range(1..=6);
        let mut mat = |r: usize, c: usize| {
            ndarray::Array2::from_shape_fn((r, c), |_| rng.random_range(-1.0..1.0))
        };
        let layer = RelConvLayer::new(
            (0..6).map(|_| mat(d, d)).collect(),
            mat(d, d),
            Activation::Relu,
            Normalizer::Count,
        )
        .unwrap();
        let h = NodeStates::new(mat(n, d));
        let mut edges = Vec::new();
        for _ in 0..2 * n {
            let s = rng.random_range(0..n);
            let t = rng.random_range(0..n);
            if s != t {
                edges.push((s, t, rng.random_range(0..6)));
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let base = forward(&layer, &export_of(n, &edges), &h).unwrap();
        let permuted_edges: Vec<(usize, usize, usize)> = edges
            .iter()
            .map(|&(s, t, r)| (perm[s], perm[t], r))
            .collect();
        let mut permuted_h = ndarray::Array2::zeros((n, d));
        for old in 0..n {
            for x in 0..d {
                permuted_h[[perm[old], x]] = h.states[[old, x]];
            }
        }
        let permuted = forward(
            &layer,
            &export_of(n, &permuted_edges),
            &NodeStates::new(permuted_h),
        )
        .unwrap();
        for old in 0..n {
            for k in 0..d {
                assert!(
                    (base.states[[old, k]] - permuted.states[[perm[old], k]]).abs() <= 1e-12,
                    "case {case}"
                );
            }
        }
    }

    // Identity collapse: identity self-loop fixes states; zero weights zero
    // them out.
    let export = export_of(1, &[]);
    let identity = RelConvLayer::new(
        (0..6).map(|_| ndarray::Array2::zeros((3, 3))).collect(),
        ndarray::Array2::eye(3),
        Activation::Identity,
        Normalizer::Count,
    )
    .unwrap();
    let h = NodeStates::new(ndarray::arr2(&[[1.0, -2.0, 3.5]]));
    assert_eq!(forward(&identity, &export, &h).unwrap().states, h.states);
    let zero = RelConvLayer::new(
        (0..6).map(|_| ndarray::Array2::zeros((3, 3))).collect(),
        ndarray::Array2::zeros((3, 3)),
        Activation::Relu,
        Normalizer::Count,
    )
    .unwrap();
    assert!(forward(&zero, &export, &h)
        .unwrap()
        .states
        .iter()
        .all(|v| *v == 0.0));

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
}

/// Criterion 8: over a 1,000-document synthetic corpus, deleting every
/// delimiter substring from ERR and GNN outputs reproduces the unfused
/// serialization byte-exactly.
#[test]
fn acceptance_08_strip_round_trip_corpus() {
    let started = Instant::now();
    let corpus = generate_corpus(0xc0ffee, 1000);

    let strip = |text: &str| {
        let mut out = text.to_string();
        for label in [
            "question time", "before", "after", "includes", "included by", "simultaneous",
            "overlap", "e",
        ] {
            out = out.replace(&format!("<{label}>"), "");
            out = out.replace(&format!("</{label}>"), "");
        }
        out
    };

    let mut fused_docs = 0usize;
    for example in &corpus {
        let unfused = unfused_serialization(&example.question, &example.context);
        let Some(qspan) = extract_question_time(&example.question).unwrap() else {
            continue;
        };
        let graph = build_graph(&example.question, &qspan, &example.annotation)
            .unwrap()
            .graph;
        for variant in [GraphVariant::Full, GraphVariant::Dt2qt, GraphVariant::Dte2qt] {
            let selected = select_subgraph(&graph, variant);
            let relations = relations_to_question_time(&selected);
            let fused =
                err_serialize(&example.question, &example.context, &selected, &relations, false)
                    .unwrap();
            assert_eq!(strip(&fused.text), unfused, "ERR {} {variant:?}", example.id);
            assert_eq!(fused.unfused(), unfused, "ERR spans {} {variant:?}", example.id);
        }
        let (export, gnn_fused) =
            gnn_export(&example.question, &example.context, &graph).unwrap();
        assert_eq!(strip(&export.marked_text), unfused, "GNN {}", example.id);
        assert_eq!(gnn_fused.unfused(), unfused, "GNN spans {}", example.id);
        fused_docs += 1;
    }
    assert!(fused_docs >= 900, "corpus should mostly carry question times");

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
}

/// Criterion 9: 100% question-time extraction over a checked-in suite of
/// template questions covering every supported pattern class.
#[test]
fn acceptance_09_question_time_extraction_suite() {
    // (question, expected surface, expected start, expected end);
    // None means the corresponding side is unbounded.
    let suite: &[(&str, &str, Option<&str>, Option<&str>)] = &[
        // bare year and "the year"
        ("Was 1066 an important year?", "1066", Some("1066-01-01"), Some("1066-12-31")),
        ("Which party won in 1860?", "in 1860", Some("1860-01-01"), Some("1860-12-31")),
        ("Did the events of the year 2022 help?", "the year 2022", Some("2022-01-01"), Some("2022-12-31")),
        ("Who was champion during the year 1999?", "the year 1999", Some("1999-01-01"), Some("1999-12-31")),
        // month-name year, abbreviated and full
        ("Was Apr 1956 a turning point?", "Apr 1956", Some("1956-04-01"), Some("1956-04-30")),
        ("Was December 1941 decisive?", "December 1941", Some("1941-12-01"), Some("1941-12-31")),
        ("Who resigned in May 1989?", "in May 1989", Some("1989-05-01"), Some("1989-05-31")),
        ("Where was Joe Burrow educated in Feb 2015?", "in Feb 2015", Some("2015-02-01"), Some("2015-02-28")),
        ("Which school did Kyriakos Mitsotakis attend in February 1985?", "in February 1985", Some("1985-02-01"), Some("1985-02-28")),
        ("What was her role in Sep 1939?", "in Sep 1939", Some("1939-09-01"), Some("1939-09-30")),
        ("What was his rank in October 1962?", "in October 1962", Some("1962-10-01"), Some("1962-10-31")),
        ("What position did Roland Burris take in May 1989?", "in May 1989", Some("1989-05-01"), Some("1989-05-31")),
        // full dates
        ("What happened on June 14, 1775 in Philadelphia?", "June 14, 1775", Some("1775-06-14"), Some("1775-06-14")),
        ("Was the treaty signed March 3, 1801?", "March 3, 1801", Some("1801-03-03"), Some("1801-03-03")),
        ("Who was born February 29, 2000?", "February 29, 2000", Some("2000-02-29"), Some("2000-02-29")),
        ("Who was president August 15, 1945?", "August 15, 1945", Some("1945-08-15"), Some("1945-08-15")),
        ("Who died July 4 1826 at home?", "July 4 1826", Some("1826-07-04"), Some("1826-07-04")),
        // ISO forms and bare ranges
        ("Did production start 1992-12-25 as planned?", "1992-12-25", Some("1992-12-25"), Some("1992-12-25")),
        ("Is 1992-12 the right month?", "1992-12", Some("1992-12-01"), Some("1992-12-31")),
        ("Did he teach at Bryn Mawr 1928-1965 without a break?", "1928-1965", Some("1928-01-01"), Some("1965-12-31")),
        // from .. to ..
        ("What was George Washington's position from 1789 to 1797?", "from 1789 to 1797", Some("1789-01-01"), Some("1797-12-31")),
        ("Which team did the player Rivaldo belong to from 1996 to 1997?", "from 1996 to 1997", Some("1996-01-01"), Some("1997-12-31")),
        ("Lucas Papademos was an employee for whom from 2010 to 2011?", "from 2010 to 2011", Some("2010-01-01"), Some("2011-12-31")),
        ("Which school did Alexander Dvorkin go to from 1975 to 1978?", "from 1975 to 1978", Some("1975-01-01"), Some("1978-12-31")),
        ("What was the position of Albert Reynolds from Dec 1992 to Nov 1994?", "from Dec 1992 to Nov 1994", Some("1992-12-01"), Some("1994-11-30")),
        ("Segenet Kelemu was an employee for whom from Nov 2013 to Nov 2014?", "from Nov 2013 to Nov 2014", Some("2013-11-01"), Some("2014-11-30")),
        ("What was the capital of Kolomna from 1929 to Apr 2017?", "from 1929 to Apr 2017", Some("1929-01-01"), Some("2017-04-30")),
        ("What operated LMR 57 Lion from 1838 to 1845?", "from 1838 to 1845", Some("1838-01-01"), Some("1845-12-31")),
        ("Where did Ryan Gander work from 2007 to 2015?", "from 2007 to 2015", Some("2007-01-01"), Some("2015-12-31")),
        ("Which team did the player Simone Verdi belong to from 2014 to 2015?", "from 2014 to 2015", Some("2014-01-01"), Some("2015-12-31")),
        // between .. and / - ..
        ("What was his position between 1997 and 2003?", "between 1997 and 2003", Some("1997-01-01"), Some("2003-12-31")),
        ("Who held office between Apr 1956 and Dec 1992?", "between Apr 1956 and Dec 1992", Some("1956-04-01"), Some("1992-12-31")),
        ("Who held office between June 14, 1775 and July 4, 1776?", "between June 14, 1775 and July 4, 1776", Some("1775-06-14"), Some("1776-07-04")),
        ("What was George Washington's position between 1776 - 1780?", "between 1776 - 1780", Some("1776-01-01"), Some("1780-12-31")),
        ("What was his position between 1776-1780?", "between 1776-1780", Some("1776-01-01"), Some("1780-12-31")),
        // before
        ("Which position did Knox Cunningham hold before Apr 1956?", "before Apr 1956", None, Some("1956-03-31")),
        ("Thomas Broughton was an employee for whom before Jun 1926?", "before Jun 1926", None, Some("1926-05-31")),
        ("Who led before 2000?", "before 2000", None, Some("1999-12-31")),
        ("Who led before the year 2000?", "before the year 2000", None, Some("1999-12-31")),
        ("Who led before January 1, 2000?", "before January 1, 2000", None, Some("1999-12-31")),
        ("Who resigned before 1969?", "before 1969", None, Some("1968-12-31")),
        // after
        ("Who served after 1797?", "after 1797", Some("1798-01-01"), None),
        ("Who ruled after Nov 1994?", "after Nov 1994", Some("1994-12-01"), None),
        ("Who ruled after June 14, 1775?", "after June 14, 1775", Some("1775-06-15"), None),
        ("Who commanded after Feb 1945?", "after Feb 1945", Some("1945-03-01"), None),
        ("Which league did he join after March 31, 1999?", "after March 31, 1999", Some("1999-04-01"), None),
        // since
        ("What changed since 1990?", "since 1990", Some("1990-01-01"), None),
        ("What changed since Oct 1962?", "since Oct 1962", Some("1962-10-01"), None),
        ("Who joined since February 29, 1996?", "since February 29, 1996", Some("1996-02-29"), None),
        // as of
        ("Which COVID-19 vaccines were authorized as of Jan 2021?", "as of Jan 2021", Some("2021-01-01"), Some("2021-01-31")),
        ("Which vaccines were authorized as of Apr 10, 2021?", "as of Apr 10, 2021", Some("2021-04-10"), Some("2021-04-10")),
        ("What was valid as of 2020?", "as of 2020", Some("2020-01-01"), Some("2020-12-31")),
        ("What was valid as of the year 2020?", "as of the year 2020", Some("2020-01-01"), Some("2020-12-31")),
        // in + year at sentence start
        ("In 1985, who led the march?", "In 1985", Some("1985-01-01"), Some("1985-12-31")),
        ("Donald Thobega played for which team in 2006?", "in 2006", Some("2006-01-01"), Some("2006-12-31")),
        ("Who was the champion in 1985?", "in 1985", Some("1985-01-01"), Some("1985-12-31")),
    ];
    assert!(suite.len() >= 50);

    for (question, surface, start, end) in suite {
        let got = extract_question_time(question)
            .unwrap_or_else(|e| panic!("{question}: {e}"))
            .unwrap_or_else(|| panic!("{question}: nothing extracted"));
        assert_eq!(got.surface, *surface, "{question}");
        assert_eq!(
            &question[got.span.start..got.span.end],
            *surface,
            "{question}: span mismatch"
        );
        let expect_start = start.map_or(TimePoint::NegInfinity, date);
        let expect_end = end.map_or(TimePoint::PosInfinity, date);
        assert_eq!(got.interval.start(), expect_start, "{question}");
        assert_eq!(got.interval.end(), expect_end, "{question}");
    }
}

/// Criterion 10: the batch CLI is deterministic across worker counts:
/// workers=1 and workers=8 produce byte-identical outputs and reports.
#[test]
fn acceptance_10_pipeline_determinism() {
    use std::io::Write;
    let started = Instant::now();

    let corpus = generate_corpus(0xd15c, 1000);
    let tmp = tempfile::tempdir().unwrap();
    let annot_dir = tmp.path().join("annots");
    std::fs::create_dir(&annot_dir).unwrap();
    let dataset_path = tmp.path().join("dataset.jsonl");
    let mut dataset = std::fs::File::create(&dataset_path).unwrap();
    for ex in &corpus {
        std::fs::write(
            annot_dir.join(format!("{}.json", ex.id)),
            ex.annotation.to_json_string(),
        )
        .unwrap();
        writeln!(
            dataset,
            "{}",
            serde_json::json!({
                "id": ex.id,
                "question": ex.question,
                "context": ex.context,
                "answers": ex.answers,
                "annotation_path": format!("{}.json", ex.id),
            })
        )
        .unwrap();
    }
    drop(dataset);

    let run = |workers: usize, out: &str| {
        let out_dir = tmp.path().join(out);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_tempograph"))
            .args([
                "run",
                "--dataset",
                dataset_path.to_str().unwrap(),
                "--annotations",
                annot_dir.to_str().unwrap(),
                "--variant",
                "dt2qt",
                "--mode",
                "err",
                "--workers",
                &workers.to_string(),
                "--out",
                out_dir.to_str().unwrap(),
            ])
            .output()
            .expect("binary runs");
        assert!(
            status.status.success(),
            "exit: {:?}, stderr: {}",
            status.status,
            String::from_utf8_lossy(&status.stderr)
        );
        (
            std::fs::read(out_dir.join("fused.jsonl")).unwrap(),
            std::fs::read(out_dir.join("report.json")).unwrap(),
        )
    };
    let (fused_one, report_one) = run(1, "out1");
    let (fused_eight, report_eight) = run(8, "out8");
    assert_eq!(fused_one, fused_eight, "outputs differ across worker counts");
    assert_eq!(report_one, report_eight, "reports differ across worker counts");
    assert!(!fused_one.is_empty());

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
}
