"""One test per acceptance criterion.

Each case prints a single ``ACCEPTANCE n: PASS/FAIL`` line (visible with -v
through the test id as well) and fails if the criterion does.  The criteria
themselves live in curvelog.selftest so the installed package and this suite
run the identical battery; every derived constant in there is checked against
an oracle computed by independent means.
"""

import pytest

from curvelog import selftest

IDS = [f"ACCEPTANCE-{num:02d}-{label.replace(' ', '-').replace(',', '')}"
       for num, label, _ in selftest.CRITERIA]


@pytest.mark.parametrize("criterion", selftest.CRITERIA, ids=IDS)
def test_acceptance(criterion):
    num, label, fn = criterion
    passed, detail = fn(selftest.DEFAULT_SEED)
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {num}: {status} - {label} ({detail})")
    assert passed, f"ACCEPTANCE {num}: FAIL - {label} ({detail})"


def test_runner_reports_every_criterion():
    results = selftest.run(numbers=[8, 9])
    assert [r.number for r in results] == [8, 9]
    assert all(r.passed for r in results)
    assert all(r.detail for r in results)


def test_runner_swallows_crashes_into_failures(monkeypatch):
    def boom(seed):
        raise RuntimeError("synthetic")
    patched = ((1, "synthetic case", boom),)
    monkeypatch.setattr(selftest, "CRITERIA", patched)
    res = selftest.run()
    assert len(res) == 1 and not res[0].passed
    assert "synthetic" in res[0].detail
