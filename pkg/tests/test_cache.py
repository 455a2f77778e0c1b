import json
import threading

import pytest

from multiseg import cache, derivative as D, quantum as Q, weyl
from multiseg.core import Weight, ms


@pytest.fixture
def fresh():
    Q.clear_caches()
    D.clear_caches()
    weyl.clear_caches()
    yield
    Q.clear_caches()
    D.clear_caches()
    weyl.clear_caches()


def test_pmatrix_roundtrip(tmp_path):
    store = cache.Store(tmp_path)
    pm = Q.compute_canonical_basis(Weight({1: 1, 2: 1}))
    assert store.save_pmatrix(pm)
    assert store.load_pmatrix(pm.weight) == pm
    assert store.stats.hits == 1 and store.stats.writes == 1
    assert store.entries()["pmatrix"] == 1


def test_interval_roundtrip(tmp_path):
    store = cache.Store(tmp_path)
    a = ms("[1]+[2]+[3]")
    pm = Q.interval_basis(a)
    store.save_interval(a, pm)
    assert store.load_interval(a) == pm
    assert store.load_interval(ms("[1,2]+[3]")) is None


def test_version_bump_is_a_miss(tmp_path):
    pm = Q.compute_canonical_basis(Weight({1: 1, 2: 1}))
    cache.Store(tmp_path, version=1).save_pmatrix(pm)
    newer = cache.Store(tmp_path, version=2)
    assert newer.load_pmatrix(pm.weight) is None
    assert newer.stats.discarded == 1
    assert newer.entries()["pmatrix"] == 0


@pytest.mark.parametrize("damage", ["truncate", "garbage", "wrong_key", "bad_payload"])
def test_corrupted_entries_are_discarded(tmp_path, damage):
    store = cache.Store(tmp_path)
    pm = Q.compute_canonical_basis(Weight({1: 1, 2: 1}))
    store.save_pmatrix(pm)
    path = store._path("pmatrix", cache.weight_key(pm.weight))
    text = path.read_text()
    if damage == "truncate":
        path.write_text(text[: len(text) // 2])
    elif damage == "garbage":
        path.write_bytes(b"\x00\xff not json")
    elif damage == "wrong_key":
        doc = json.loads(text)
        doc["key"] = "pm:other"
        path.write_text(json.dumps(doc))
    else:
        doc = json.loads(text)
        doc["payload"] = {"weight": [[1, 1]], "labels": ["[1"], "entries": []}
        path.write_text(json.dumps(doc))
    if damage == "wrong_key":
        # a key mismatch is an ordinary miss, not worth a warning
        assert store.load_pmatrix(pm.weight) is None
    else:
        with pytest.warns(UserWarning):
            assert store.load_pmatrix(pm.weight) is None
    assert not path.exists()
    assert store.stats.discarded == 1


def test_unwritable_root_warns_and_continues(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    store = cache.Store(blocker / "sub")
    with pytest.warns(UserWarning):
        assert not store.save_pmatrix(Q.compute_canonical_basis(Weight({1: 1})))
    assert store.stats.errors == 1


def test_kl_roundtrip(tmp_path, fresh):
    store = cache.install(tmp_path)
    perms = weyl.all_perms(4)
    before = [weyl.kl_poly(x, (4, 3, 2, 1)) for x in perms]
    store.flush_kl()
    weyl.clear_caches()
    fresh_store = cache.install(tmp_path)
    assert [weyl.kl_poly(x, (4, 3, 2, 1)) for x in perms] == before
    assert fresh_store.stats.hits == 1


def test_cache_does_not_change_results(tmp_path, fresh):
    cases = [(ms("[1]+[2]+[3]"), 2), (ms("[1,2]+[2]+[3]"), 3), (ms("2[1]+[2]+[2,3]"), 2)]
    plain = [D.derive_irreducible(a, k) for a, k in cases]
    cache.install(tmp_path)
    Q.clear_caches()
    D.clear_caches()
    warm = [D.derive_irreducible(a, k) for a, k in cases]
    Q.clear_caches()
    D.clear_caches()
    store = cache.install(tmp_path)
    cold = [D.derive_irreducible(a, k) for a, k in cases]
    assert plain == warm == cold
    assert store.stats.hits > 0


def test_readers_never_see_a_torn_entry(tmp_path):
    store = cache.Store(tmp_path)
    small = Q.compute_canonical_basis(Weight({1: 1, 2: 1}))
    store.save_pmatrix(small)
    big = {"blob": list(range(20000))}
    seen, stop = [], threading.Event()

    def writer():
        for i in range(40):
            store.write("pmatrix", "x", {"i": i, **big})
        stop.set()

    def reader():
        r = cache.Store(tmp_path)
        while not stop.is_set():
            got = r.read("pmatrix", "x")
            if got is not None:
                seen.append(len(got["blob"]))
        seen.append(-1 if r.stats.discarded else 0)

    threads = [threading.Thread(target=writer)] + [threading.Thread(target=reader) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(n in (20000, 0) for n in seen)


def test_clear(tmp_path):
    store = cache.Store(tmp_path)
    store.save_pmatrix(Q.compute_canonical_basis(Weight({1: 1, 2: 1})))
    assert store.size_bytes() > 0
    assert store.clear() == 1
    assert store.entries() == {"pmatrix": 0, "kl": 0}
