"""Reduced-form enumeration and cycle counting, checked against an
exhaustive-scan oracle that shares nothing with the windowed search."""

from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geolab.class_numbers import (
    Discriminant,
    QuadraticForm,
    class_number,
    h_star_range,
    is_reduced,
    list_reduced_forms,
    reduction_cycles,
    reduction_step,
    tally,
)
from geolab.errors import InvalidDiscriminantError, NonReducedFormError


def oracle_reduced_forms(D: int) -> set[QuadraticForm]:
    """Brute force: scan every (a, b) with |a|, b <= sqrt(D), derive c."""
    w = isqrt(D)
    out = set()
    for a in range(-w, w + 1):
        if a == 0:
            continue
        for b in range(1, w + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c == 0:
                continue
            # |sqrt(D) - 2|a|| < b < sqrt(D) via integer squaring
            if b * b >= D:
                continue
            v = D + 4 * a * a - b * b
            if v <= 0 or v * v < 16 * a * a * D:
                out.add(QuadraticForm(a, b, c))
    return out


def oracle_class_number(D: int) -> int:
    remaining = set(oracle_reduced_forms(D))
    cycles = 0
    while remaining:
        start = next(iter(remaining))
        f = start
        while True:
            remaining.discard(f)
            f = reduction_step(f, D)
            if f == start:
                break
        cycles += 1
    return cycles


class TestDiscriminant:
    def test_from_trace(self):
        assert Discriminant.from_trace(3).value == 5
        assert int(Discriminant.from_trace(7)) == 45

    @pytest.mark.parametrize("bad", [0, -4, 9, 7, 16, 25, 100, 6, 11])
    def test_rejects(self, bad):
        with pytest.raises(InvalidDiscriminantError):
            Discriminant(bad)

    def test_rejects_non_integer(self):
        with pytest.raises(InvalidDiscriminantError):
            Discriminant(5.0)

    def test_trace_below_three(self):
        with pytest.raises(InvalidDiscriminantError):
            Discriminant.from_trace(2)


class TestListReducedForms:
    def test_d5(self):
        assert list_reduced_forms(5) == {
            QuadraticForm(1, 1, -1),
            QuadraticForm(-1, 1, 1),
        }

    def test_d12(self):
        assert list_reduced_forms(12) == {
            QuadraticForm(1, 2, -2),
            QuadraticForm(-2, 2, 1),
            QuadraticForm(-1, 2, 2),
            QuadraticForm(2, 2, -1),
        }

    def test_square_rejected(self):
        with pytest.raises(InvalidDiscriminantError):
            list_reduced_forms(9)

    @pytest.mark.parametrize("D", [5, 8, 12, 13, 17, 21, 24, 28, 32, 140, 1020, 9996])
    def test_matches_oracle(self, D):
        assert list_reduced_forms(D) == oracle_reduced_forms(D)


class TestReductionStep:
    def test_d5_cycle_closed(self):
        f = QuadraticForm(1, 1, -1)
        g = reduction_step(f, 5)
        assert g in list_reduced_forms(5)
        assert reduction_step(g, 5) == f

    def test_d12_two_cycles(self):
        cycles = reduction_cycles(12)
        assert len(cycles) == 2
        assert sorted(len(c) for c in cycles) == [2, 2]

    def test_cycle_closure(self):
        for D in (5, 12, 21, 45, 1020):
            for start in list_reduced_forms(D):
                f = reduction_step(start, D)
                seen = 0
                while f != start:
                    f = reduction_step(f, D)
                    seen += 1
                    assert seen < 10_000
                assert (seen + 1) % 2 == 0  # even cycle length

    def test_non_reduced_rejected(self):
        with pytest.raises(NonReducedFormError):
            reduction_step(QuadraticForm(1, 9, -1), 45)

    @given(st.integers(min_value=3, max_value=120))
    @settings(max_examples=40, deadline=None)
    def test_step_is_bijection(self, t):
        D = t * t - 4
        forms = list_reduced_forms(D)
        images = {reduction_step(f, D) for f in forms}
        assert images == forms

    def test_cycles_partition_forms(self):
        for D in (5, 12, 45, 320, 1596):
            cycles = reduction_cycles(D)
            flat = [f for c in cycles for f in c]
            assert len(flat) == len(set(flat))
            assert set(flat) == list_reduced_forms(D)


class TestClassNumber:
    def test_examples(self):
        assert class_number(5) == 1
        assert class_number(12) == 2

    def test_invalid_residue(self):
        with pytest.raises(InvalidDiscriminantError):
            class_number(7)

    def test_trace_discriminants_nonzero(self):
        for t in range(3, 120):
            assert class_number(t * t - 4) >= 1

    @pytest.mark.parametrize("t", list(range(3, 40)) + [61, 97, 128, 200])
    def test_oracle_equivalence_traces(self, t):
        assert class_number(t * t - 4) == oracle_class_number(t * t - 4)

    @given(st.integers(min_value=5, max_value=10**6))
    @settings(max_examples=60, deadline=None)
    def test_windowed_matches_exhaustive_sampled(self, D):
        if D % 4 not in (0, 1) or isqrt(D) ** 2 == D:
            return
        assert class_number(D) == oracle_class_number(D)

    def test_tally(self):
        res = tally(12)
        assert res.class_count == 2
        assert res.reduced_count == 4
        assert res.reduced_count % 2 == 0


class TestBatchKernel:
    def test_matches_pure_path(self):
        hs = h_star_range(3, 220)
        assert hs == [class_number(t * t - 4) for t in range(3, 220)]

    def test_empty_and_bounds(self):
        assert h_star_range(5, 5) == []
        with pytest.raises(InvalidDiscriminantError):
            h_star_range(2, 10)

    def test_spot_large_trace(self):
        (h,) = h_star_range(4001, 4002)
        assert h == class_number(4001 * 4001 - 4)
