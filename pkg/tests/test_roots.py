import math

import pytest

from coinvest.errors import NoRootError
from coinvest.roots import bisect, find_root, scan_bracket


def test_scan_bracket_finds_sign_change():
    a, b = scan_bracket(lambda x: x - 2.0, 0.1, 10.0)
    assert a < 2.0 < b


def test_scan_bracket_exact_zero_on_grid():
    # the grid includes the endpoints exactly, so a root at lo is detected
    a, b = scan_bracket(lambda x: math.log(x), 1.0, 100.0)
    assert a == b == 1.0


def test_scan_bracket_no_change_raises():
    with pytest.raises(NoRootError):
        scan_bracket(lambda x: 1.0 + x * x, 0.1, 10.0)


def test_bisect_converges():
    root = bisect(lambda x: x * x - 2.0, 1.0, 2.0)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-11)


def test_bisect_requires_bracket():
    with pytest.raises(NoRootError):
        bisect(lambda x: x * x - 2.0, 2.0, 3.0)


def test_bisect_endpoint_root():
    assert bisect(lambda x: x - 1.0, 1.0, 2.0) == 1.0


def test_find_root_combined():
    root = find_root(lambda x: math.log(x), 0.1, 10.0)
    assert root == pytest.approx(1.0, abs=1e-10)
