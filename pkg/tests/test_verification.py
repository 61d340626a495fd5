import pytest

from fraktur.verification import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    results = run_suite(name)
    assert results
    failed = [r for r in results if not r.passed]
    assert not failed, "; ".join(f"{r.name}: {r.measured}" for r in failed)


def test_all_concatenates():
    assert len(run_suite("all")) == sum(len(run_suite(n)) for n in SUITES)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nonsense")
