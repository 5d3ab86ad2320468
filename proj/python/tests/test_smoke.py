import pathlib

import pytest

import tilthall

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def fx(name):
    return FIXTURES / f"{name}.json"


def test_suite_names():
    names = tilthall.suite_names()
    assert names[-1] == "all"
    assert "verify-prop47" in names


def test_algebra_info():
    info = tilthall.algebra_info(str(fx("a2_f3")))
    assert info["q"] == 3
    assert info["dim"] == 3
    assert info["vertices"] == 2


def test_run_all_on_apr_tilt_passes():
    doc = tilthall.run(fx("a2_f2"), tilting=fx("a2_tilt_p1s1"))
    assert doc["summary"]["fail"] == 0
    assert doc["summary"]["unknown"] == 0
    assert doc["tool"]["version"] == tilthall.__version__
    assert doc == tilthall.run(fx("a2_f2"), tilting=fx("a2_tilt_p1s1"))


def test_hall_table_on_d2():
    doc = tilthall.run(fx("d2"), suite="hall-table", dim_bound=2)
    rec = next(r for r in doc["records"] if r["id"] == "hall-table.d2.structure-constants")
    terms = [p["terms"] for p in rec["certificate"]["products"] if p["m"] == p["n"] == 1]
    assert sorted(terms[0].values()) == ["1/2", "1/2"]


def test_errors_are_raised():
    with pytest.raises(tilthall.TilthallError, match="IoError"):
        tilthall.run(fx("missing"))
    with pytest.raises(tilthall.TilthallError, match="ConfigError"):
        tilthall.run(fx("d2"), suite="nope")
