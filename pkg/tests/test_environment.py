import math

import mpmath
import numpy as np
import pytest

from fpplab.distributions import Uniform
from fpplab.environment import TauField, build_tau_field, sample_environment, tau_norm_sq, tau_value
from fpplab.lattice import Axis, BoxSpec, EdgeId, Vertex, annulus_of_edge, edges_of_box
from fpplab.streams import edge_uniforms


def test_sample_support_and_size(narrow):
    env = sample_environment(BoxSpec(2), narrow, 42)
    weights = env.weights()
    assert len(weights) == 40
    assert all(1.0 <= w <= 1.5 for w in weights.values())


def test_sampling_is_bit_reproducible(narrow):
    a = sample_environment(BoxSpec(5), narrow, 42)
    b = sample_environment(BoxSpec(5), narrow, 42)
    assert a.same_weights(b)
    assert not a.same_weights(sample_environment(BoxSpec(5), narrow, 43))


def test_weights_do_not_depend_on_region(narrow):
    small = sample_environment(BoxSpec(3), narrow, 9)
    big = sample_environment(BoxSpec(7, Vertex(2, -1)), narrow, 9)
    for e, w in small.items():
        assert big.weight(e) == w


def test_layout_matches_stream_keys(narrow):
    env = sample_environment(BoxSpec(2, Vertex(1, 0)), narrow, 77)
    for e, w in env.items():
        u = edge_uniforms(77, np.array([e.base.x]), np.array([e.base.y]), int(e.axis))[0]
        assert w == narrow.ppf(u)


def test_environment_is_immutable(narrow):
    env = sample_environment(BoxSpec(2), narrow, 1)
    with pytest.raises(ValueError):
        env.horizontal[0, 0] = 5.0
    with pytest.raises(KeyError):
        env.weight(EdgeId(Vertex(10, 10), Axis.HORIZONTAL))


def test_region_must_have_edges(narrow):
    with pytest.raises(ValueError):
        sample_environment(BoxSpec(0), narrow, 1)


@pytest.mark.parametrize("k, expected", [(2, 0.6229809), (10, 0.0606276)])
def test_tau_values_against_high_precision(k, expected):
    mpmath.mp.dps = 30
    exact = float(1 / (mpmath.mpf(k) * mpmath.log(k) ** mpmath.mpf("0.6")))
    assert tau_value(k, 0.1, 100) == pytest.approx(exact, rel=1e-14)
    assert exact == pytest.approx(expected, abs=1e-7)
    # loose sanity band around the commonly quoted rounded values
    assert abs(exact - {2: 0.6228, 10: 0.0605}[k]) < 2e-4


def test_tau_field_values():
    field = build_tau_field(5, 0.1)
    e1 = EdgeId.between(Vertex(0, 0), Vertex(1, 0))
    e2 = EdgeId.between(Vertex(1, 1), Vertex(2, 1))
    outside = EdgeId.between(Vertex(5, 0), Vertex(6, 0))
    assert annulus_of_edge(e1) == 1 and field.value(e1) == 0.0
    assert field.value(e2) == pytest.approx(0.5 * math.log(2) ** -0.6)
    assert field.value(outside) == 0.0
    assert all(0.0 <= v <= 1.0 for v in field.values().values())


@pytest.mark.parametrize("m, kappa", [(1, 0.1), (5, 0.0), (5, 0.5), (5, -0.2)])
def test_tau_field_rejects(m, kappa):
    with pytest.raises(ValueError):
        build_tau_field(m, kappa)


@pytest.mark.parametrize("m", [2, 3, 6])
def test_tau_norm_sq_equals_edge_enumeration(m):
    field = build_tau_field(m, 0.1)
    brute = math.fsum(field.value(e) ** 2 for e in edges_of_box(BoxSpec(m + 2)))
    assert tau_norm_sq(field) == pytest.approx(brute, rel=1e-13)


def test_tau_norm_sq_at_m2():
    field = build_tau_field(2, 0.1)
    assert tau_norm_sq(field) == pytest.approx(28 * (0.5 * math.log(2) ** -0.6) ** 2, rel=1e-14)
    assert tau_norm_sq(build_tau_field(2, 0.1)) == pytest.approx(10.86695, abs=1e-5)


def test_tau_arrays_match_edge_values():
    field = build_tau_field(4, 0.2)
    region = BoxSpec(6, Vertex(1, 0))
    h, v = field.arrays(region)
    for axis, arr in ((Axis.HORIZONTAL, h), (Axis.VERTICAL, v)):
        for (i, j), val in np.ndenumerate(arr):
            e = EdgeId(region.vertex_at(i, j), axis)
            assert val == field.value(e)


def test_tau_norm_sq_increments_shrink():
    values = [tau_norm_sq(build_tau_field(m, 0.1)) for m in (10, 100, 1000, 10_000)]
    inc = np.diff(values)
    assert np.all(inc > 0)
    assert np.all(inc[1:] / inc[:-1] < 0.9)


def test_zero_field():
    field = TauField.zero(4)
    assert tau_norm_sq(field) == 0.0
    assert all(v == 0.0 for v in field.values().values())
