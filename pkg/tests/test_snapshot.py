import pytest

from faultpath.dso.snapshot import SnapshotError, load_dso, save_dso
from faultpath.dso.static import IncrementalDso
from faultpath.families import random_connected
from faultpath.reference import dist_avoiding


def test_round_trip_preserves_answers(tmp_path):
    g = random_connected(14, seed=4)
    dso = IncrementalDso.build(g, seed=1)
    p = tmp_path / "d.dso"
    save_dso(dso, str(p))
    loaded = load_dso(str(p))
    assert loaded.table == dso.table
    f = loaded.forest
    for u in range(0, g.n, 2):
        for v in range(u + 1, g.n):
            if f.dist(u, v) is None:
                continue
            for eid in f.path_edge_ids(u, v):
                a, _ = loaded.query_edge_failure(u, v, eid)
                assert a == dist_avoiding(g, u, v, [eid])


def test_bad_magic_rejected(tmp_path):
    p = tmp_path / "x.dso"
    p.write_bytes(b"NOTADSO")
    with pytest.raises(SnapshotError):
        load_dso(str(p))


def test_corrupt_length_detected(tmp_path):
    g = random_connected(10, seed=2)
    dso = IncrementalDso.build(g, seed=1)
    p = tmp_path / "d.dso"
    save_dso(dso, str(p))
    blob = bytearray(p.read_bytes())
    # flip a byte near the end (inside some entry's stored length)
    blob[-3] ^= 0xFF
    p.write_bytes(bytes(blob))
    with pytest.raises(SnapshotError):
        load_dso(str(p))
