import numpy as np

from srflow import io


def test_fmt_round_trip():
    for v in (0.1, 1 / 3, np.pi * 1e-300, -2.5e17):
        assert float(io.fmt(v)) == v
    assert io.fmt(7) == "7"
    assert io.fmt(np.int64(3)) == "3"
    assert io.fmt(float("nan")) == "nan"


def test_config_hash_is_order_independent():
    a = {"x": 1, "y": {"b": 2, "a": [1, 2]}}
    b = {"y": {"a": [1, 2], "b": 2}, "x": 1}
    assert io.config_hash(a) == io.config_hash(b)
    assert io.config_hash(a) != io.config_hash({"x": 2, "y": {"b": 2, "a": [1, 2]}})


def test_csv_round_trip(tmp_path):
    p = tmp_path / "t.csv"
    t = np.linspace(0, 1, 7)
    r = np.exp(-t) / 3
    head = io.header_line({"k": 1}, "trajectory")
    io.write_csv(p, ("t", "rho"), [t, r], header=head)
    h, cols = io.read_csv(p)
    assert h == head
    assert h.startswith("# srflow trajectory schema=")
    np.testing.assert_array_equal(cols["t"], t)
    np.testing.assert_array_equal(cols["rho"], r)
