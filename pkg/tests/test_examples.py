import pytest

from worked_examples import EXAMPLES


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_worked_example(name):
    EXAMPLES[name]()
