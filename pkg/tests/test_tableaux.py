"""Tableau registry: parsing, classification, structural properties."""

import numpy as np
import pytest

from srkflow.tableaux import (Tableau, available_schemes, load_all,
                              load_tableau, parse_tableau)

EXPECTED = {
    # name stem -> (kind, stages, order, form)
    "ars111": ("ARS", 2, 1, "I"),
    "ars121": ("ARS", 2, 1, "I"),
    "ars222": ("ARS", 3, 2, "I"),
    "ars232": ("ARS", 3, 2, "I"),
    "ars343": ("ARS", 4, 3, "I"),
    "ars443": ("ARS", 5, 3, "I"),
    "ark324": ("CK", 4, 3, "I"),
    "ark436": ("CK", 6, 4, "I"),
    "ark548": ("CK", 8, 5, "I"),
    "bhr553": ("CK", 5, 3, "I"),
    "ssp2_322": ("A", 3, 2, "II"),
    "si_imex_332": ("A", 3, 2, "II"),
    "si_imex_433": ("A", 4, 3, "II"),
    "si_imex_443": ("A", 4, 3, "II"),
}


def test_registry_complete():
    assert set(available_schemes()) == set(EXPECTED)


@pytest.mark.parametrize("stem", sorted(EXPECTED))
def test_structure(stem):
    kind, stages, order, form = EXPECTED[stem]
    tab = load_tableau(stem)
    assert tab.kind == kind
    assert tab.stages == stages
    assert tab.order == order
    assert tab.form == form
    assert tab.stiffly_accurate
    assert tab.a_ss > 0.0
    # explicit part is genuinely explicit
    assert np.all(np.triu(tab.Ahat) == 0.0)


@pytest.mark.parametrize("stem", sorted(EXPECTED))
def test_order_conditions(stem):
    tab = load_tableau(stem)
    res = tab.order_condition_residuals()
    # two schemes carry ~1e-10 coefficient transcription noise
    tol = 5e-10 if stem in ("ars343", "ark548") else 1e-12
    worst = max(abs(v) for v in res.values())
    assert worst <= tol, f"{stem}: worst residual {worst:.2e} ({res})"


@pytest.mark.parametrize("stem", sorted(EXPECTED))
def test_d_vector_annihilates_rows(stem):
    tab = load_tableau(stem)
    d = tab.d_vector()
    assert d[0] == 1.0
    prod = tab.A @ d
    assert np.max(np.abs(prod[1:])) < 1e-9


def test_theta_zero_for_matching_weights():
    for tab in load_all():
        if np.allclose(tab.b, tab.bhat, atol=1e-14):
            assert abs(tab.theta()) < 1e-9


def test_pressure_solve_count():
    assert load_tableau("bhr553").pressure_order_count == 4
    assert load_tableau("ars343").pressure_order_count == 3
    assert load_tableau("si_imex_443").pressure_order_count == 4


def test_load_by_display_name():
    tab = load_tableau("ARS(3,4,3)")
    assert tab.name == "ARS(3,4,3)"


def test_parse_rejects_incomplete():
    with pytest.raises(ValueError):
        parse_tableau("name x\nform I\norder 1\nA\n0\nb\n1\n", source="t")


def test_explicit_stability_polynomial_low_order():
    """For any 2nd-order pair, R(z) = 1 + z + z^2/2 + O(z^3)."""
    tab = load_tableau("ars232")
    m = tab.explicit_stability_coeffs()
    assert m[0] == pytest.approx(1.0, abs=1e-13)
    assert m[1] == pytest.approx(0.5, abs=1e-13)


def test_cfl_max_quick():
    # the 3-stage 2nd-order scheme hits the classic sqrt(3) limit
    assert load_tableau("ars232").cfl_max(scan_limit=4.0) == pytest.approx(
        np.sqrt(3.0), abs=1e-2)
    # a method whose stability region excludes the imaginary axis: the
    # measured limit is zero up to the scan granularity
    assert load_tableau("ars222").cfl_max(scan_limit=4.0) < 0.01
