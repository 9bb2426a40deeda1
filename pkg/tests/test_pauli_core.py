"""Pauli-string algebra against the independent np.kron oracle."""

import numpy as np
import pytest

from qsakit.pauli_core import (
    PauliFormatError,
    PauliString,
    WeightedPauliSum,
    commutes,
    is_involution,
    multiply,
    square,
    sum_commutes,
)

from conftest import kron_string, kron_sum, random_string_letters

SEED = 20240811


def random_string(rng, n_sites, min_weight=0):
    letters = tuple(rng.choice(["I", "X", "Y", "Z"]) for _ in range(n_sites))
    if min_weight and sum(1 for l in letters if l != "I") < min_weight:
        letters = random_string_letters(rng, n_sites, min_weight)
    return PauliString(n_sites, letters, int(rng.integers(0, 4)))


def test_parse_format_round_trip():
    for text in ["XZZX", "IY", "-iXY", "iZ", "-Z", "IIXII", "YYYY"]:
        assert PauliString.parse(text).format() == text


def test_parse_rejects_garbage():
    for bad in ["", "-i", "XQ", "ix", "X Z"]:
        with pytest.raises(PauliFormatError):
            PauliString.parse(bad)
    with pytest.raises(PauliFormatError):
        PauliString.parse("XZ", n_sites=3)


def test_phase_prefix_values():
    assert PauliString.parse("X").phase == 1
    assert PauliString.parse("iX").phase == 1j
    assert PauliString.parse("-X").phase == -1
    assert PauliString.parse("-iX").phase == -1j


def test_support_weight_letter():
    s = PauliString.parse("IXIZY")
    assert s.support == (1, 3, 4)
    assert s.weight == 3
    assert s.letter(3) == "Z"
    assert not s.is_identity()
    assert PauliString.identity(4).is_identity()


def test_multiply_matches_kron_oracle():
    rng = np.random.default_rng(SEED)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        a = random_string(rng, n)
        b = random_string(rng, n)
        got = kron_string(multiply(a, b))
        want = kron_string(a) @ kron_string(b)
        assert np.allclose(got, want, atol=1e-12)


def test_multiply_known_products():
    x = PauliString.parse("X")
    y = PauliString.parse("Y")
    z = PauliString.parse("Z")
    assert multiply(x, y).format() == "iZ"
    assert multiply(y, x).format() == "-iZ"
    assert multiply(x, x).format() == "I"
    assert multiply(z, x).format() == "iY"


def test_adjoint_conjugates_phase():
    rng = np.random.default_rng(SEED + 1)
    for _ in range(50):
        s = random_string(rng, int(rng.integers(1, 5)))
        assert np.allclose(
            kron_string(s.adjoint()), kron_string(s).conj().T, atol=1e-12
        )


def test_commutes_matches_kron_commutator():
    rng = np.random.default_rng(SEED + 2)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        a = random_string(rng, n)
        b = random_string(rng, n)
        ma, mb = kron_string(a), kron_string(b)
        assert commutes(a, b) == bool(
            np.allclose(ma @ mb, mb @ ma, atol=1e-12)
        )


def test_register_width_mismatch_raises():
    with pytest.raises(ValueError):
        multiply(PauliString.parse("XX"), PauliString.parse("X"))


def test_sum_folds_duplicates_and_orders():
    x = PauliString.parse("XI")
    z = PauliString.parse("ZZ")
    s = WeightedPauliSum.from_terms(2, [(0.5, x), (1.0, z), (0.25, x)])
    assert len(s.terms) == 2
    assert np.allclose(
        kron_sum(s), 0.75 * kron_string(x) + kron_string(z), atol=1e-12
    )


def test_sum_folds_phases_into_real_coefficients():
    s = WeightedPauliSum.from_terms(1, [(1.0, PauliString.parse("-X"))])
    ((coeff, string),) = s.terms
    assert coeff == -1.0 and string.phase_exp == 0
    with pytest.raises(ValueError):
        WeightedPauliSum.from_terms(1, [(1.0, PauliString.parse("iX"))])


def test_sum_drops_cancelled_terms():
    x = PauliString.parse("X")
    s = WeightedPauliSum.from_terms(1, [(1.0, x), (-1.0, x)])
    assert s.is_zero()


def test_sum_square_matches_kron():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(60):
        n = int(rng.integers(1, 5))
        a = WeightedPauliSum.from_terms(
            n,
            [
                (float(rng.normal()), random_string(rng, n).with_phase_exp(0))
                for _ in range(int(rng.integers(1, 4)))
            ],
        )
        if a.is_zero():
            continue
        m = kron_sum(a)
        assert np.allclose(kron_sum(square(a)), m @ m, atol=1e-10)


def test_sum_product_rejects_non_real_results():
    x = WeightedPauliSum.from_string(PauliString.parse("X"))
    y = WeightedPauliSum.from_string(PauliString.parse("Y"))
    with pytest.raises(ValueError):
        x * y  # X*Y = iZ has no real-coefficient representation


def test_sum_commutes_matches_kron():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        a = WeightedPauliSum.from_terms(
            n,
            [
                (float(rng.normal()), random_string(rng, n).with_phase_exp(0))
                for _ in range(2)
            ],
        )
        b = WeightedPauliSum.from_terms(
            n,
            [
                (float(rng.normal()), random_string(rng, n).with_phase_exp(0))
                for _ in range(2)
            ],
        )
        if a.is_zero() or b.is_zero():
            continue
        ma, mb = kron_sum(a), kron_sum(b)
        assert sum_commutes(a, b) == bool(
            np.allclose(ma @ mb, mb @ ma, atol=1e-10)
        )


def test_square_and_involution():
    root2 = np.sqrt(2.0)
    h = WeightedPauliSum.from_terms(
        1,
        [(1 / root2, PauliString.parse("X")), (1 / root2, PauliString.parse("Z"))],
    )
    assert is_involution(h)
    assert square(h).is_identity()
    attach = WeightedPauliSum.from_terms(
        2,
        [(1 / root2, PauliString.parse("ZI")), (1 / root2, PauliString.parse("XX"))],
    )
    assert is_involution(attach)
    not_inv = WeightedPauliSum.from_terms(
        1, [(1.0, PauliString.parse("X")), (1.0, PauliString.parse("Z"))]
    )
    assert not is_involution(not_inv)


def test_single_string_sums_are_involutions():
    rng = np.random.default_rng(SEED + 5)
    for _ in range(40):
        n = int(rng.integers(1, 5))
        s = random_string(rng, n, min_weight=1).with_phase_exp(0)
        assert is_involution(WeightedPauliSum.from_string(s))
