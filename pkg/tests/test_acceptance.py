"""Acceptance suite: one test per criterion, each printing a pass/fail line."""

import pytest

from quadfock.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: fn.__name__)
def test_criterion(criterion, capsys):
    result = criterion()
    status = "PASS" if result["passed"] else "FAIL"
    with capsys.disabled():
        print(f"[{status}] criterion {result['id']:2d}: {result['name']}")
    assert result["passed"], result["details"]
