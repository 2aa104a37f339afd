import csv
import io
import json
import logging
import threading

import pytest

from lindep.cache import ENV_VAR, ValueCache, default_cache_dir
from lindep.characters import DirichletCharacter
from lindep.harness import verify_theorem_odd
from lindep.lvalues import l_one_digamma
from lindep.numerics import PrecisionContext
from lindep.report import CSV_FIELDS, render, to_csv_text, to_table_text

CHI5 = DirichletCharacter(5, (1,))


@pytest.fixture
def cache(tmp_path):
    return ValueCache(tmp_path / "values")


def test_store_then_lookup(cache):
    rec = l_one_digamma(CHI5, PrecisionContext(256))
    cache.store(rec)
    hit = cache.lookup(CHI5.id, "digamma", 256)
    assert hit is not None and hit.agrees_with(rec)
    assert hit.err >= rec.err


def test_lower_precision_request_hits(cache):
    cache.store(l_one_digamma(CHI5, PrecisionContext(512)))
    assert cache.lookup(CHI5.id, "digamma", 256) is not None


def test_higher_precision_request_misses(cache):
    cache.store(l_one_digamma(CHI5, PrecisionContext(256)))
    assert cache.lookup(CHI5.id, "digamma", 512) is None
    assert cache.lookup(CHI5.id, "series", 256) is None


def test_keeps_highest_precision(cache):
    cache.store(l_one_digamma(CHI5, PrecisionContext(512)))
    path = cache.store(l_one_digamma(CHI5, PrecisionContext(256)))
    assert json.loads(path.read_text())["precision"] == 512


def test_entry_has_provenance(cache):
    path = cache.store(l_one_digamma(CHI5, PrecisionContext(256)))
    data = json.loads(path.read_text())
    assert {"subject", "method", "precision", "value", "imag", "err", "version"} <= set(data)
    assert isinstance(data["value"], str) and "e" in data["err"]


def test_corrupt_entry_warns_and_misses(cache, caplog):
    path = cache.store(l_one_digamma(CHI5, PrecisionContext(256)))
    path.write_text("{not json")
    with caplog.at_level(logging.WARNING):
        assert cache.lookup(CHI5.id, "digamma", 256) is None
    assert "corrupt" in caplog.text
    cache.store(l_one_digamma(CHI5, PrecisionContext(256)))
    assert cache.lookup(CHI5.id, "digamma", 256) is not None


def test_concurrent_writers_leave_a_valid_entry(cache):
    recs = [l_one_digamma(CHI5, PrecisionContext(b)) for b in (128, 256, 384, 512)]
    threads = [threading.Thread(target=cache.store, args=(r,)) for r in recs * 3]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert cache.lookup(CHI5.id, "digamma", 128) is not None
    assert not list(cache.directory.glob(".tmp-*"))


def test_harness_uses_cache(cache):
    verify_theorem_odd([5, 7], 1, 2**12, PrecisionContext(512), cache=cache)
    assert len(list(cache.directory.glob("*.json"))) == 5
    again = verify_theorem_odd([5, 7], 1, 2**12, PrecisionContext(512), cache=cache)
    assert again.verdict == "consistent"


def test_env_var(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert default_cache_dir() == str(tmp_path)


@pytest.fixture(scope="module")
def report_data():
    return verify_theorem_odd([5, 7], 1, 2**12, PrecisionContext(512)).to_json()


def test_csv_is_subjects_only(report_data):
    rows = list(csv.DictReader(io.StringIO(to_csv_text(report_data))))
    assert len(rows) == len(report_data["subjects"]) == 5
    assert tuple(rows[0]) == CSV_FIELDS


def test_table_mentions_verdict(report_data):
    text = to_table_text(report_data)
    assert "verdict: consistent" in text and "chi5(1)" in text


@pytest.mark.parametrize("fmt", ["json", "csv", "table"])
def test_render_formats(report_data, fmt):
    assert render(report_data, fmt).endswith("\n")


def test_render_unknown_format(report_data):
    with pytest.raises(ValueError):
        render(report_data, "xml")


def test_json_stable_keys(report_data):
    assert {"experiment", "config", "hypothesis", "subjects", "certificates", "verdict", "timestamp"} <= set(report_data)
    assert {"precision", "bound", "m", "moduli"} <= set(report_data["config"])
    for s in report_data["subjects"]:
        assert {"id", "kind", "method", "value", "err"} <= set(s)
        assert all(isinstance(s[k], str) for k in ("value", "err"))
