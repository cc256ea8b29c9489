use tannaka_bench::workloads;

#[test]
fn every_workload_runs() {
    for w in workloads() {
        let b = w.run().unwrap_or_else(|e| panic!("{}: {e}", w.name));
        assert!(!b.table().is_empty(), "{}", w.name);
    }
}
