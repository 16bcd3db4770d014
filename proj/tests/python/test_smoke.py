import pytest

import nearsearch as ns


def test_parse_and_serialize():
    a = ns.LatinArray.parse("2 2\n0 1\n1 0\n")
    assert (a.rows, a.cols, a.universe) == (2, 2, 2)
    assert a[0, 1] == 1
    assert a.is_latin()
    assert str(a) == "2 2\n0 1\n1 0\n"
    b = ns.LatinArray.parse("2 2\n0 .\nx 0\n")
    assert b[0, 1] is None
    assert b[1, 0] == "x"
    with pytest.raises(ns.GridParseError):
        ns.LatinArray.parse("2 2\n0 .\n0 x\n")
    with pytest.raises(IndexError):
        a[2, 0]


def test_oracle():
    value, sigma = ns.max_diagonal_weight(ns.LatinArray.parse("2 2\n0 1\n1 0\n"))
    assert value == 1
    assert sorted(sigma) == [0, 1]
    value, entries = ns.max_partial_transversal(ns.drisko(4, 6))
    assert value == 3
    assert len({s for _, _, s in entries}) == 3
    cyclic = "12 12\n" + "".join(" ".join(str((i + j) % 12) for j in range(12)) + "\n" for i in range(12))
    with pytest.raises(ns.OracleCapError):
        ns.max_diagonal_weight(ns.LatinArray.parse(cyclic))


def test_verify_order():
    r = ns.verify_order(7, "naive")
    assert r["proved"]
    assert r["stats"]["false_leaves"] == 0
    r = ns.verify_order(8, "naive")
    assert not r["proved"]
    assert r["stats"]["false_leaves"] == 14
    assert len(r["failures"]) == 14
    assert all(f.rows == 8 for f in r["failures"])
    assert ns.verify_order(8, "advanced")["proved"]


def test_drisko_certificate():
    cert = ns.certify_no_transversal(ns.drisko(5, 8))
    assert cert["no_transversal"]
    assert 1 <= cert["min_count"] <= cert["max_count"] <= 4


def test_bounds():
    levels = ns.minimize_nk(5)
    assert [n for _, n, _ in levels] == [11, 17, 28, 41]
    assert levels[-1][2][-1] == 41
    assert ns.check_sequence([11, 17, 31, 41]) == (True, "valid")
    assert not ns.check_sequence([11, 16])[0]
    assert ns.guarantee_length(1448) == {"length": 1428, "rule": "bound-table", "k_star": 21}
    assert ns.guarantee_length(11)["length"] == 10


def test_cli():
    code, out, _ = ns.run_cli(["bounds", "lookup", "--order", "100"])
    assert code == 0
    assert "93" in out
    assert ns.run_cli(["near", "--order", "2"])[0] == 2
    assert ns.__version__ == "0.1.0"
