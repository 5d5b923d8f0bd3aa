"""Smoke test for the Python bindings; run after `maturin develop`."""

import consensus_md as cm


def main():
    assert "example1" in cm.fixture_names()
    assert cm.verify_fixtures(0) == []

    p = cm.fixture("example1")
    assert (p.n, p.m) == (5, 3)
    fin = p.run_md("ab,bc,ac")
    assert fin.is_complete()
    assert all(sorted(r) == [("a", "c"), ("b", "a"), ("b", "c")] for r in fin.relations())
    assert fin.consensus()["CW"] == "b"

    q = cm.Profile.from_json(p.to_json())
    assert q.relations() == p.relations()

    manual = cm.Profile(["x", "y", "z"], [[("x", "y")], [("x", "z")], []])
    assert manual.consensus()["UnanUD"] == "x"
    effects = manual.classify()
    assert effects["UnanUD"]["effect"] in {"preserved_identity", "preserved_existence_only", "lost"}

    reports = cm.fixture("prop12_two_unanud").control_search("UnanUD")
    assert reports[0]["orders_examined"] == 48
    assert reports[0]["initial"] is None
    assert reports[0]["choosable"] == ["a", "b"]
    assert reports[0]["negative_control_available"] is True

    sampled = p.control_search(sample=20, seed=3)
    assert len(sampled) == len(cm.NOTIONS) and sampled[0]["orders_examined"] == 20

    try:
        cm.fixture("missing")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown fixture accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
