import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secmod.constellation import (ALPHABET, LABELS, bits_to_labels, detect_outer,
                                  labels_to_bits, modulate_outer, offsets, parse_label,
                                  random_inner, recover_outer, superpose)
from secmod.errors import FrameMismatchError, PacDomainError

H = 1 / math.sqrt(2)


class TestModulateOuter:
    @pytest.mark.parametrize("label, point", [
        ("00", H + 1j * H),
        ("11", -H - 1j * H),
        ("10", -H + 1j * H),
        ("01", H - 1j * H),
    ])
    def test_label_to_point(self, label, point):
        assert modulate_outer([label])[0] == pytest.approx(point, abs=1e-15)

    def test_ints_and_strings_agree(self):
        np.testing.assert_array_equal(modulate_outer(["00", "01", "10", "11"]),
                                      modulate_outer(np.arange(4)))

    def test_unit_average_power(self):
        assert np.mean(np.abs(ALPHABET) ** 2) == pytest.approx(1.0, abs=1e-15)

    def test_neighbouring_inner_offset(self):
        # region '1010' sits 2*d2 left of '0010' at equal height
        d1, d2 = offsets(0.04)
        y0010 = superpose(modulate_outer(["10"]), modulate_outer(["00"]), 0.04)[0]
        y1010 = superpose(modulate_outer(["10"]), modulate_outer(["10"]), 0.04)[0]
        assert (y1010 - y0010) == pytest.approx(-2 * d2, abs=1e-15)

    @pytest.mark.parametrize("bad", ["2", "012", "ab", 4, -1])
    def test_rejects_bad_labels(self, bad):
        with pytest.raises(ValueError):
            parse_label(bad)


class TestRandomInner:
    def test_uniform_frequencies(self):
        n = 4 * 10**6
        frame = random_inner(n, seed=7)
        tol = 3 * math.sqrt(0.25 * 0.75 / n)
        for point in ALPHABET:
            freq = np.count_nonzero(np.isclose(frame, point)) / n
            assert abs(freq - 0.25) <= tol

    def test_deterministic(self):
        assert random_inner(1, seed=99)[0] == random_inner(1, seed=99)[0]
        np.testing.assert_array_equal(random_inner(1000, 5), random_inner(1000, 5))

    def test_seeds_differ(self):
        assert not np.array_equal(random_inner(1000, 1), random_inner(1000, 2))

    def test_empty(self):
        assert random_inner(0, seed=3).size == 0

    def test_prefix_stable(self):
        # a longer frame extends a shorter one from the same seed
        np.testing.assert_array_equal(random_inner(70000, 4)[:100], random_inner(100, 4))


class TestSuperpose:
    def test_worked_example(self):
        y = superpose(modulate_outer(["00"]), modulate_outer(["00"]), 0.04)[0]
        d1, d2 = math.sqrt(0.02), math.sqrt(0.48)
        assert d1 == pytest.approx(0.141421, abs=1e-6)
        assert d2 == pytest.approx(0.692820, abs=1e-6)
        assert y == pytest.approx(complex(d2 + d1, d2 + d1), abs=1e-15)

    def test_sixteen_distinct_points(self):
        pairs = list(itertools.product(range(4), range(4)))
        y = superpose(ALPHABET[[o for o, _ in pairs]], ALPHABET[[i for _, i in pairs]], 0.014)
        assert len({(round(v.real, 12), round(v.imag, 12)) for v in y}) == 16

    def test_length_mismatch(self):
        with pytest.raises(FrameMismatchError):
            superpose(ALPHABET[:3], ALPHABET[:2], 0.1)

    @pytest.mark.parametrize("a", [0.0, 0.5, -0.1, 0.7, float("nan")])
    def test_rejects_pac_outside_open_interval(self, a):
        with pytest.raises(PacDomainError):
            superpose(ALPHABET, ALPHABET, a)

    def test_average_power(self):
        n = 10**5
        outer = ALPHABET[np.random.default_rng(1).integers(0, 4, n)]
        y = superpose(outer, random_inner(n, 2), 0.2)
        assert np.mean(np.abs(y) ** 2) == pytest.approx(1.0, abs=0.02)


class TestRecoverOuter:
    def test_first_quadrant(self):
        d1, d2 = offsets(0.04)
        assert recover_outer(complex(d2 + d1, d2 + d1), 0.04) == pytest.approx(
            complex(0.141421, 0.141421), abs=1e-6)

    def test_second_quadrant(self):
        d1, d2 = offsets(0.04)
        assert recover_outer(complex(-d2 - d1, d2 + d1), 0.04) == pytest.approx(
            complex(-d1, d1), abs=1e-15)

    def test_origin_takes_nonnegative_branch(self):
        s = math.sqrt((1 - 0.3) / 2)
        assert recover_outer(0j, 0.3) == pytest.approx(complex(-s, -s), abs=1e-15)


class TestDetectOuter:
    @pytest.mark.parametrize("z, label", [
        (0.3 + 0.2j, "00"),
        (-0.001 + 5.0j, "10"),
        (0j, "00"),
        (0.2 - 0.1j, "01"),
        (-1 - 1j, "11"),
    ])
    def test_quadrants(self, z, label):
        assert detect_outer(z) == int(label, 2)

    def test_nearest_point(self):
        z = np.random.default_rng(0).normal(size=(2000, 2)) @ [1, 1j]
        nearest = np.argmin(np.abs(z[:, None] - ALPHABET[None, :]), axis=1)
        np.testing.assert_array_equal(detect_outer(z), nearest)


@pytest.mark.parametrize("a", [0.01, 0.1, 0.25, 0.49])
def test_noiseless_round_trip(a):
    for o, i in itertools.product(range(4), range(4)):
        y = superpose(ALPHABET[[o]], ALPHABET[[i]], a)
        assert detect_outer(recover_outer(y, a))[0] == o


def _rotate_label(v):
    # clockwise quarter turn (x, y) -> (y, -x)
    p = ALPHABET[v] * -1j
    return int(np.argmin(np.abs(ALPHABET - p)))


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=50),
       st.floats(0.001, 0.499))
def test_quarter_turn_symmetry(pairs, a):
    o = np.array([p[0] for p in pairs])
    i = np.array([p[1] for p in pairs])
    rotated = superpose(ALPHABET[[_rotate_label(v) for v in o]],
                        ALPHABET[[_rotate_label(v) for v in i]], a)
    np.testing.assert_allclose(rotated, -1j * superpose(ALPHABET[o], ALPHABET[i], a), atol=1e-14)


nonzero = st.floats(-3, 3).filter(lambda v: abs(v) > 1e-9)


@settings(max_examples=200)
@given(nonzero, nonzero, st.floats(0.001, 0.499))
def test_reflection_commutes_with_recovery(x, y, a):
    z = complex(x, y)
    assert recover_outer(z.conjugate(), a) == pytest.approx(recover_outer(z, a).conjugate(), abs=1e-12)
    assert recover_outer(-z.conjugate(), a) == pytest.approx(-recover_outer(z, a).conjugate(), abs=1e-12)
    r = recover_outer(z, a)
    if r.real != 0 and r.imag != 0:
        assert detect_outer(recover_outer(z.conjugate(), a)) == detect_outer(r) ^ 1
        assert detect_outer(recover_outer(-z.conjugate(), a)) == detect_outer(r) ^ 2


def test_bits_labels_round_trip():
    bits = np.random.default_rng(3).integers(0, 2, 200).astype(np.uint8)
    np.testing.assert_array_equal(labels_to_bits(bits_to_labels(bits)), bits)
    assert list(bits_to_labels([1, 0, 0, 1])) == [2, 1]
    assert LABELS[2] == "10"
