import math

import pytest

import kgqr

TINY = """
dataset = synthetic
synth_clusters = 3
synth_items_per_cluster = 8
synth_users = 40
synth_observed_fraction = 0.5
simulator_epochs = 20
transe_epochs = 20
item_mf_epochs = 20
embedding_dim = 4
hidden_dim = 4
head_hidden = 6
horizon = 5
batch_size = 8
budget = 100
eval_every = 50
seeds = 1,2
"""


@pytest.fixture(scope="module")
def tiny():
    cfg = kgqr.Config.parse(TINY)
    cfg.validate()
    return cfg, kgqr.ingest(cfg)


def test_config_round_trip():
    cfg = kgqr.Config.parse(TINY)
    back = kgqr.Config.parse(cfg.canonical())
    assert back.canonical() == cfg.canonical()
    assert back.hash == cfg.hash
    assert cfg.variant == "KGQR"
    assert cfg.seeds == [1, 2]
    assert "candidate_max" in kgqr.config_keys()


def test_config_errors():
    with pytest.raises(kgqr.ConfigError):
        kgqr.Config.parse("no_such_key = 1")
    with pytest.raises(ValueError):
        kgqr.Config().set("horizon", "abc")
    cfg = kgqr.Config.parse(TINY)
    cfg.set("eta", "0.3")
    with pytest.raises(kgqr.ConfigError):
        cfg.validate()


def test_variant_names():
    names = set()
    for kg, gcn, cs in [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)]:
        cfg = kgqr.Config.parse(TINY)
        cfg.set("kg_embeddings", str(bool(kg)).lower())
        cfg.set("gcn_propagation", str(bool(gcn)).lower())
        cfg.set("candidate_selection", str(bool(cs)).lower())
        names.add(cfg.variant)
    assert names == {"KGQR-KG", "KGQR-GCN-CS", "KGQR-CS", "KGQR"}


def test_synth_world_shape():
    w = kgqr.synth("clusters = 3\nitems_per_cluster = 4\nusers = 10")
    assert len(w["item_cluster"]) == 12
    assert len(w["user_primary"]) == 10
    assert w["ratings"].strip()
    assert w["triples"].strip()


def test_graph_queries():
    g = kgqr.Graph.parse("a\tr\tb\nb\tr\tc\nc\tr\td\n")
    assert g.triple_count == 3
    a = g.entities.index("a")
    sets = g.k_hop_sets([a], 2)
    assert [[g.entities[e] for e in s] for s in sets] == [["b"], ["c"]]
    assert [g.entities[e] for e in g.neighbors(a)] == ["b"]


def test_metrics():
    # (1 + 0.5) / T
    assert kgqr.average_reward([[1.0, 1.0]], 0.5) == pytest.approx(0.75)
    assert kgqr.precision_at_T([[True, False, True, False]]) == pytest.approx(0.5)
    assert kgqr.recall_at_T([[True, True]], [4]) == pytest.approx(0.5)


def test_wilcoxon():
    a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    w = kgqr.wilcoxon(a, a)
    assert w["degenerate"] and w["p_value"] == 1.0
    w = kgqr.wilcoxon([x + 1 for x in a], a)
    assert w["exact"] and w["n"] == 6
    assert w["p_value"] == pytest.approx(2 / 64)
    with pytest.raises(ValueError):
        kgqr.wilcoxon([1.0, 2.0], [0.0, 0.0])


def test_double_q_target():
    # online prefers item 1, target values it at 2
    y = kgqr.double_q_target(1.0, False, 0.5, [0.1, 0.9], [5.0, 2.0], [0, 1])
    assert y == pytest.approx(2.0)
    assert kgqr.double_q_target(1.0, True, 0.5, [0.1, 0.9], [5.0, 2.0], [0, 1]) == 1.0


def test_threshold():
    curve = [(100, 0.1), (200, 0.3), (300, 0.5)]
    assert kgqr.interactions_to_threshold(curve, 0.25) == 200
    assert kgqr.interactions_to_threshold(curve, 0.9) is None


def test_dataset(tiny):
    cfg, d = tiny
    assert d.users == 40
    assert d.items == 24
    assert len(d.train_users) + len(d.test_users) == 40
    raw, norm, hit = d.predict(0, 0)
    assert -1.0 <= norm <= 1.0
    assert isinstance(hit, bool)


def test_run_seed_deterministic(tiny, tmp_path):
    cfg, d = tiny
    r1 = kgqr.run_seed(d, cfg, 1, tmp_path / "a")
    r2 = kgqr.run_seed(d, cfg, 1, tmp_path / "b")
    assert r1["curve_csv"] == r2["curve_csv"]
    assert r1["interactions"] >= 100
    rep = r1["report"]
    assert math.isfinite(rep["reward"])
    assert len(rep["per_user"]) == len(d.test_users)
    assert (tmp_path / "a" / "checkpoint.bin").exists() or r1["checkpoint"]


def test_random_baseline(tiny):
    cfg, d = tiny
    a = kgqr.evaluate_random(d, cfg, 3)
    b = kgqr.evaluate_random(d, cfg, 3)
    assert a["reward"] == b["reward"]
