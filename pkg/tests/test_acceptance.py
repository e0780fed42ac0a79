"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from galcount.acceptance import CHECKS, run_check

NUMBERS = [number for number, *_ in CHECKS]


@pytest.mark.parametrize("number", NUMBERS, ids=[f"criterion_{n:02d}" for n in NUMBERS])
def test_criterion(number, capsys):
    result = run_check(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
