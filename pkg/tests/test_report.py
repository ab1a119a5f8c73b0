"""Report envelope: determinism, strict JSON, fingerprints."""

import dataclasses
import json
import math

import numpy as np
import pytest

from sclab.report import (
    REPORT_SCHEMA,
    build_report,
    fingerprint_bytes,
    fingerprint_file,
    fingerprint_text,
    jsonable,
    render_report,
    write_report,
)


def test_envelope_shape():
    rep = build_report("volume", {"steps": 4}, {"volume": {"value": 1.0}},
                       inputs={"graph": "ab" * 32})
    assert rep["schema"] == REPORT_SCHEMA
    assert rep["command"] == "volume"
    assert "timings" not in rep
    assert "warnings" not in rep
    rep2 = build_report("volume", {}, {}, warnings=["w"],
                        timings={"b": 1.23456789, "a": 0.1})
    assert rep2["warnings"] == ["w"]
    assert rep2["timings"] == {"a": 0.1, "b": 1.234568}


def test_render_is_deterministic():
    rep = build_report("x", {"n": 2}, {"z": 1, "a": 2})
    assert render_report(rep) == render_report(rep)
    assert render_report(rep).endswith("\n")
    # key order is canonical regardless of insertion order
    a = render_report(build_report("x", {"p": 1, "q": 2}, {}))
    b = render_report(build_report("x", {"q": 2, "p": 1}, {}))
    assert a == b


def test_jsonable_handles_numpy_and_dataclasses():
    @dataclasses.dataclass
    class Inner:
        xs: tuple
        arr: np.ndarray
        _hidden: int = 0

    obj = Inner((1.0, 2.0), np.array([3.0, np.nan]))
    out = jsonable({"inner": obj, "scalar": np.float64(1.5), "i": np.int32(7)})
    assert out == {"inner": {"xs": [1.0, 2.0], "arr": [3.0, None]},
                   "scalar": 1.5, "i": 7}
    assert jsonable(math.inf) is None
    # the rendered form is strict JSON and parses back
    text = render_report(build_report("x", {}, {"v": math.nan}))
    assert json.loads(text)["analyses"]["v"] is None
    assert "NaN" not in text


def test_fingerprints(tmp_path):
    assert fingerprint_text("abc") == fingerprint_bytes(b"abc")
    assert len(fingerprint_text("abc")) == 64
    p = tmp_path / "f.bin"
    p.write_bytes(b"abc")
    assert fingerprint_file(p) == fingerprint_text("abc")


def test_write_report(tmp_path, capsys):
    rep = build_report("x", {}, {"v": 1})
    out = tmp_path / "r.json"
    write_report(rep, str(out))
    assert json.loads(out.read_text())["analyses"]["v"] == 1
    write_report(rep, None)
    assert json.loads(capsys.readouterr().out)["command"] == "x"
