import doctest

import pytest

from mahonia import permstat, qpoly, wreath


@pytest.mark.parametrize("module", [qpoly, permstat, wreath], ids=lambda m: m.__name__)
def test_module_doctests(module):
    failed, attempted = doctest.testmod(module)
    assert attempted and not failed
