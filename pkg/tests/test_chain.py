import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulsecorr.corr_model import TabulatedModel
from pulsecorr.verifier import SourceSpec, check_chain, random_instance


def test_reference_history_has_zero_steps():
    spec = SourceSpec.from_model(TabulatedModel((0.1, 0.05, 0.02, 0.01)), 2, 4)
    report = check_chain(spec, 5, 1, 5, [0, 0, 0, 0, 1])
    assert all(dist < 1e-15 for _, dist, _ in report.steps)
    assert report.end_to_end < 1e-15
    assert report.passed


@pytest.mark.parametrize("l", [2, 3, 4])
def test_single_differing_entry(l):
    eps = (0.1, 0.05, 0.02, 0.01)
    spec = SourceSpec.from_model(TabulatedModel(eps), 3, 4)
    k = 5
    settings_ = [0] * k
    settings_[k - 1 - l] = 1  # g(1) = 1/2
    report = check_chain(spec, 5, 1, k, settings_)
    nonzero = [(sep, dist) for sep, dist, _ in report.steps if dist > 1e-15]
    expected = np.sqrt(1 - np.cos(spec.kernel[l - 1] * 0.5 / 2) ** 2)
    assert len(nonzero) == 1
    assert nonzero[0][0] == l
    assert nonzero[0][1] == pytest.approx(expected, rel=1e-12)


def test_precondition():
    spec = SourceSpec.uncorrelated(2, 4)
    with pytest.raises(ValueError):
        check_chain(spec, 5, 3, 4, [0] * 5)
    with pytest.raises(ValueError):
        check_chain(spec, 5, 1, 6, [0] * 6)


def test_records_both_exponents():
    spec = SourceSpec.from_model(TabulatedModel((0.2, 0.2, 0.2)), 2, 3)
    report = check_chain(spec, 4, 1, 4, [1, 1, 0, 1])
    N, l_e = 4, 1
    base = 1 - report.delta_le
    assert report.global_bound_factor_count == pytest.approx(max(base, 0) ** ((N - l_e - 1) / 2))
    assert report.global_bound_printed == pytest.approx(max(base, 0) ** ((N - l_e - 2) / 2))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_random_histories_satisfy_every_inequality(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, max_N=6, max_J=4)
    if inst.N < inst.l_e + 2:
        return
    spec = inst.source()
    settings_ = rng.integers(0, inst.J, size=inst.N)
    for k in range(inst.l_e + 2, inst.N + 1):
        report = check_chain(spec, inst.N, inst.l_e, k, settings_)
        assert report.steps_ok and report.triangle_ok and report.round_overlap_ok and report.global_overlap_ok
