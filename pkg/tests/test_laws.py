"""Law suite: the default run passes, mutations are caught, reports are
deterministic and well-formed."""

import re
from functools import lru_cache

from llmk.gen import GenConfig
from llmk.laws import (
    LawReport,
    LawResult,
    law_pair_copy,
    law_sample_fusion,
    law_sample_identity,
    run_laws,
)
from llmk.matrix import BOOL

SMALL = GenConfig(seed=1, instances=10)


@lru_cache(maxsize=None)
def cached_run(seed: int, instances: int) -> LawReport:
    return run_laws(GenConfig(seed=seed, instances=instances))


def test_default_run_all_pass():
    report = cached_run(1, 10)
    failing = [r.name for r in report.results if not r.passed]
    assert failing == []
    assert report.passed


def test_report_is_deterministic():
    a = run_laws(GenConfig(seed=2, instances=4)).to_text()
    b = run_laws(GenConfig(seed=2, instances=4)).to_text()
    assert a == b


def test_report_line_format():
    report = cached_run(1, 10)
    for line in report.to_text().splitlines():
        if line.startswith("LAW"):
            fields = line.split()
            assert len(fields) in (5, 6)
            assert fields[3] in ("pass", "fail")
            assert fields[4].isdigit()
        else:
            assert line.startswith(("SUMMARY", "    "))


def test_kv_report_keys():
    report = cached_run(1, 10)
    kv = report.to_kv()
    assert "report.failures=0" in kv
    assert re.search(r"law\.sample-identity\.status=pass", kv)
    assert re.search(r"law\.sample-identity\.instances=10", kv)


def test_vacuous_run_is_flagged():
    report = cached_run(1, 0)
    generated = [r for r in report.results if r.name == "sample-identity"]
    assert generated[0].instances == 0
    assert generated[0].vacuous
    line = next(
        l for l in report.to_text().splitlines()
        if l.startswith("LAW sample-identity ")
    )
    assert line.endswith("vacuous")
    assert "law.sample-identity.vacuous=true" in report.to_kv()


def test_mutation_dropping_braid_is_caught():
    mutated = law_pair_copy(SMALL, with_braid=False)
    assert not mutated.passed
    assert mutated.failures  # counterexample names the offending sizes
    assert any("2" in c for c in mutated.failures)


def test_rel_variants_run_in_bool_semiring():
    ident = law_sample_identity(SMALL, BOOL, tag="rel-sample-identity")
    fusion = law_sample_fusion(SMALL, BOOL, tag="rel-sample-fusion")
    assert ident.passed and fusion.passed
    assert ident.anchor.startswith("observe")


def test_law_result_properties():
    r = LawResult("x", "a", 0)
    assert r.passed and r.vacuous
    r2 = LawResult("y", "a", 3, failures=["boom"])
    assert not r2.passed
