
from tesslab.graph import Graph, canonical_graph6, cycle_graph
from tesslab.sweep import (
    SweepRecord,
    analyse_graph,
    check_record,
    connected_graphs,
    records_to_csv,
    run_sweep,
    sweep_violations,
)

# OEIS A001349: connected graphs on n unlabelled vertices
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}

def test_connected_counts():
    for n, count in CONNECTED_COUNTS.items():
        gs = connected_graphs(n)
        assert len(gs) == count
        assert len({canonical_graph6(g) for g in gs}) == count
        assert all(g.is_connected() for g in gs)

def test_augmentation_matches_atlas():
    # n = 6 from the augmentation path must agree with the atlas
    from tesslab import sweep

    seen = set()
    for g in connected_graphs(5):
        for mask in range(1, 1 << 5):
            h = Graph(6, g.edges + tuple((v, 5) for v in range(5) if mask >> v & 1))
            seen.add(canonical_graph6(h))
    assert seen == {canonical_graph6(g) for g in connected_graphs(6)}
    assert sweep.ATLAS_LIMIT == 7

def test_c9_record():
    r = analyse_graph(cycle_graph(9))
    assert (r.T, r.T_t, r.chi_total) == (3, 3, 3)
    assert r.cycle and check_record(r) == []

def test_check_record_catches_violations():
    good = analyse_graph(cycle_graph(5))
    bad = SweepRecord(**{**good.__dict__, "T_t": good.chi_total + 1})
    rules = {v.rule for v in check_record(bad)}
    assert "total colouring bound" in rules and "triangle-free" in rules
    fake = SweepRecord(**{**good.__dict__, "T": 3, "T_t": 3, "cycle": False})
    assert "odd cycle" in {v.rule for v in check_record(fake)}

def test_small_sweep_clean_and_deterministic():
    records = run_sweep(5)
    assert len(records) == 31
    assert sweep_violations(records) == []
    first = records_to_csv(records)
    assert first == records_to_csv(run_sweep(5))
    assert first.splitlines()[0] == "graph,omega,is,chi,T,T_t"
    assert len(first.splitlines()) == 32

def test_parallel_matches_serial():
    assert records_to_csv(run_sweep(5, threads=2), full=True) == records_to_csv(run_sweep(5), full=True)
