"""Every acceptance criterion, one test each, with a PASS/FAIL line on the terminal."""

import pytest

from equitor.acceptance import CRITERIA, LIMITS, run_one


@pytest.mark.parametrize("label", [label for label, _ in CRITERIA])
def test_criterion(label, capsys):
    r = run_one(label)
    line = f"{'PASS' if r['ok'] else 'FAIL'}  {label}  ({r['seconds']} s"
    if label in LIMITS:
        line += f", limit {LIMITS[label]} s"
    line += ")"
    d = r["detail"]
    if isinstance(d, dict) and "agreements" in d:
        line += f"  groups={d['groups']} agreements={d['agreements']} " \
                f"disagreements={d['disagreements']} unchecked={d['unchecked']}"
    with capsys.disabled():
        print("\n" + line)
    assert r["ok"], r["detail"]
