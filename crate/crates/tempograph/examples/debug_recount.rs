#[path = "../tests/common/mod.rs"]
mod common;
use std::io::Write;
use tempograph::chronon::extract_question_time;
use tempograph::fusion::{err_serialize, relations_to_question_time, unfused_serialization, whitespace_token_count};
use tempograph::graph::{build_graph, graph_stats, select_subgraph, GraphVariant};
use tempograph::pipeline::{run, RunConfig};

fn main() {
    let corpus = common::generate_corpus(0xad17, 100);
    let tmp = tempfile::tempdir().unwrap();
    let annot_dir = tmp.path().join("annots");
    std::fs::create_dir_all(&annot_dir).unwrap();
    let dataset_path = tmp.path().join("dataset.jsonl");
    let mut dataset = std::fs::File::create(&dataset_path).unwrap();
    for ex in &corpus {
        std::fs::write(annot_dir.join(format!("{}.json", ex.id)), ex.annotation.to_json_string()).unwrap();
        writeln!(dataset, "{}", serde_json::json!({
            "id": ex.id, "question": ex.question, "context": ex.context,
            "answers": ex.answers, "annotation_path": format!("{}.json", ex.id),
        })).unwrap();
    }
    drop(dataset);
    let mut config = RunConfig::new(tmp.path().join("out"));
    config.annotations_dir = Some(annot_dir);
    let report = run(&config, &dataset_path).unwrap();

    let mut processed = 0usize;
    let mut node_sum = 0.0f64;
    let mut edge_sum = 0.0f64;
    for ex in &corpus {
        let Some(qspan) = extract_question_time(&ex.question).unwrap() else { continue };
        let g = build_graph(&ex.question, &qspan, &ex.annotation).unwrap().graph;
        let s = graph_stats(&select_subgraph(&g, GraphVariant::Dt2qt));
        node_sum += s.nodes as f64;
        edge_sum += s.edges as f64;
        processed += 1;
        let relations = relations_to_question_time(&select_subgraph(&g, GraphVariant::Dt2qt));
        let fused = err_serialize(&ex.question, &ex.context, &select_subgraph(&g, GraphVariant::Dt2qt), &relations, false).unwrap();
        let _ = (unfused_serialization(&ex.question, &ex.context), whitespace_token_count(&fused.text));
    }
    println!("report: processed={} mean_nodes={:?} mean_edges={:?}", report.processed, report.mean_nodes, report.mean_edges);
    println!("recount: processed={} mean_nodes={:?} mean_edges={:?}", processed, node_sum / processed as f64, edge_sum / processed as f64);
    println!("sums: nodes={node_sum} edges={edge_sum}  report_mean*n={} {}", report.mean_nodes * report.processed as f64, report.mean_edges * report.processed as f64);
}
