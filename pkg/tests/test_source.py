import numpy as np
import pytest

from pulsecorr.corr_model import ExponentialModel, TabulatedModel
from pulsecorr.verifier import (
    ResourceLimitError,
    SourceSpec,
    emitted_state,
    kernel_from_epsilon,
    measure_correlation_strength,
)

from oracles import emitted_loop


def two_setting_source(kernel, kick=None, probs=(0.5, 0.5)):
    return SourceSpec(probs=np.array(probs), base_states=np.array([[1, 0], [0, 1]]),
                      kernel=np.array(kernel), phase_kick=None if kick is None else np.array(kick))


def test_empty_history_returns_base_state():
    spec = two_setting_source([0.3, 0.2])
    for j in range(2):
        np.testing.assert_array_equal(emitted_state(spec, j, []), spec.base_states[j])


def test_reference_history_is_fixed_point():
    spec = two_setting_source([0.3, 0.2])
    np.testing.assert_allclose(emitted_state(spec, 1, [0, 0]), spec.base_states[1], atol=0)


def test_half_turn_flips():
    spec = two_setting_source([np.pi])
    out = emitted_state(spec, 0, [1])
    assert abs(np.vdot([1, 0], out)) < 1e-15
    assert abs(abs(out[1]) - 1) < 1e-15


def test_truncation_replaces_old_settings():
    spec = two_setting_source([0.3, 0.2, 0.1])
    np.testing.assert_allclose(emitted_state(spec, 0, [1, 1, 1], truncate_at=1),
                               emitted_state(spec, 0, [1, 0, 0]))
    np.testing.assert_allclose(emitted_state(spec, 0, [1, 1, 1], truncate_at=3),
                               emitted_state(spec, 0, [1, 1, 1]))


def test_matches_loop_oracle_with_kick():
    rng = np.random.default_rng(3)
    spec = SourceSpec.from_model(TabulatedModel((0.1, 0.05, 0.01)), 4, 3, phase_kick=rng.uniform(0, 6, 3))
    for _ in range(20):
        seq = rng.integers(0, 4, size=4)
        got = emitted_state(spec, seq[-1], list(seq[:-1][::-1]))
        want = emitted_loop(spec.base_states, spec.kernel, spec.weights, spec.phase_kick, list(seq))
        np.testing.assert_allclose(got, want, atol=1e-15)


def test_out_of_alphabet_setting():
    spec = two_setting_source([0.3])
    with pytest.raises(ValueError):
        emitted_state(spec, 2, [])
    with pytest.raises(ValueError):
        emitted_state(spec, 0, [5])


def test_history_longer_than_kernel():
    with pytest.raises(ValueError):
        emitted_state(two_setting_source([0.3]), 0, [1, 1])


@pytest.mark.parametrize("kwargs", [
    dict(probs=[0.5, 0.6], base_states=[[1, 0], [0, 1]], kernel=[0.1]),
    dict(probs=[0.5, 0.5], base_states=[[1, 1], [0, 1]], kernel=[0.1]),
    dict(probs=[0.5, 0.5], base_states=[[1, 0], [0, 1]], kernel=[4.0]),
    dict(probs=[0.5, 0.5], base_states=[[1, 0], [0, 1]], kernel=[0.1], weights=[0, 2]),
])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SourceSpec(**kwargs)


def test_strength_zero_kernel():
    assert measure_correlation_strength(two_setting_source([0.0, 0.0]), 1, 3) == 0.0


def test_strength_saturates_target():
    eps = 1e-3
    spec = two_setting_source(kernel_from_epsilon([eps, 0.0]))
    closed = np.sin(spec.kernel[0] / 2) ** 2
    assert abs(closed - eps) < 1e-15
    assert abs(measure_correlation_strength(spec, 1, 3) - eps) < 1e-12


def test_strength_orthogonal_extremes():
    assert measure_correlation_strength(two_setting_source([np.pi]), 1, 2) == pytest.approx(1.0, abs=1e-15)


def test_strength_realizes_model_for_every_separation():
    model = ExponentialModel(0.2, 0.7)
    for J in (2, 3, 4):
        spec = SourceSpec.from_model(model, J, 4, phase_kick=np.full(4, 1.3))
        for l in range(1, 5):
            measured = measure_correlation_strength(spec, l, 5)
            assert abs(measured - model.epsilon1 * np.exp(-model.decay_C * (l - 1))) <= 1e-10


def test_strength_resource_cap():
    with pytest.raises(ResourceLimitError):
        measure_correlation_strength(two_setting_source([0.1] * 12), 1, 12, cap=4**10)
