from __future__ import annotations

import itertools

import numpy as np
import pytest

from conftest import gm_to_complex, kron_letters, random_word, word_to_complex
from mgstate.pauli import (
    CONJUGATION_TABLE,
    BoundExceeded,
    DimensionError,
    GaussianMatrix,
    PauliWord,
    ordered_product,
)
from paper_data import TRIANGLE, TRIANGLE_S_WORDS


def all_words(n):
    for x in range(1 << n):
        for z in range(1 << n):
            for ph in range(4):
                yield PauliWord(n, x, z, ph)


def phaseless_words(n):
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliWord(n, x, z, 0)


def test_letter_round_trip():
    for letters in itertools.product("IXZY", repeat=3):
        w = PauliWord.from_letters("".join(letters))
        assert w.letters() == "".join(letters)
        assert w.letter_phase() == 0


def test_single_qubit_dense_values():
    assert np.array_equal(word_to_complex(PauliWord.from_letters("Y")), kron_letters("Y"))
    for c in "IXZ":
        assert np.array_equal(word_to_complex(PauliWord.from_letters(c)), kron_letters(c))
    # XZ stored with phase 0 renders as -iY
    w = PauliWord(1, 1, 1, 0)
    assert np.array_equal(word_to_complex(w), -1j * kron_letters("Y"))


def test_x_times_z_is_minus_i_y():
    x = PauliWord.from_letters("X")
    z = PauliWord.from_letters("Z")
    prod = x.mul(z)
    assert (prod.x, prod.z) == (1, 1)
    assert np.array_equal(word_to_complex(prod), -1j * kron_letters("Y"))


def test_sec2_product_phase_is_plus_i():
    p = PauliWord.from_letters("XZI")
    q = PauliWord.from_letters("IXZ")
    prod = p.mul(q)
    assert np.array_equal(word_to_complex(prod), 1j * kron_letters("XYZ"))


def test_mul_identity_keeps_phase():
    for w in all_words(2):
        ident = PauliWord.identity(2)
        assert w.mul(ident) == w
        assert ident.mul(w) == w


def test_mul_dense_oracle_exhaustive_n2():
    words = list(phaseless_words(2))
    dense = {(w.x, w.z): word_to_complex(w) for w in words}
    for p in words:
        for q in words:
            prod = p.mul(q)
            expect = dense[(p.x, p.z)] @ dense[(q.x, q.z)]
            assert np.array_equal(word_to_complex(prod), expect)


def test_mul_dense_oracle_random_n3(rng):
    for _ in range(1000):
        p, q = random_word(rng, 3), random_word(rng, 3)
        assert np.array_equal(
            word_to_complex(p.mul(q)), word_to_complex(p) @ word_to_complex(q)
        )


def test_mul_associative(rng):
    for _ in range(300):
        a, b, c = (random_word(rng, 3) for _ in range(3))
        assert a.mul(b).mul(c) == a.mul(b.mul(c))


def test_mul_dimension_mismatch():
    with pytest.raises(DimensionError):
        PauliWord.identity(2).mul(PauliWord.identity(3))
    with pytest.raises(DimensionError):
        PauliWord.identity(2).commutes(PauliWord.identity(3))


def test_commutes_examples():
    x = PauliWord.from_letters("X")
    z = PauliWord.from_letters("Z")
    assert not x.commutes(z)
    assert x.commutes(x)
    # path-mixed rows: 0 and 2 commute, 1 and 2 commute, 0 and 1 do not
    r0 = PauliWord.from_letters("XZI")
    r1 = PauliWord.from_letters("IXZ")
    r2 = PauliWord.from_letters("IZX")
    assert r0.commutes(r2) and r1.commutes(r2)
    assert not r0.commutes(r1)


def test_commutes_dense_oracle_exhaustive_n2():
    words = list(phaseless_words(2))
    for p in words:
        for q in words:
            mp = word_to_complex(p) @ word_to_complex(q)
            mq = word_to_complex(q) @ word_to_complex(p)
            assert p.commutes(q) == np.array_equal(mp, mq)


def test_commutes_dense_oracle_sampled_n3(rng):
    for _ in range(400):
        p, q = random_word(rng, 3), random_word(rng, 3)
        mp = word_to_complex(p) @ word_to_complex(q)
        mq = word_to_complex(q) @ word_to_complex(p)
        assert p.commutes(q) == np.array_equal(mp, mq)


def triangle_duals():
    from mgstate import dual_stabilizer, parse_graph

    return dual_stabilizer(parse_graph(TRIANGLE))


def test_ordered_product_empty_is_identity():
    rows = triangle_duals()
    assert ordered_product(rows, []) == PauliWord.identity(3)


def test_ordered_product_triangle_listing():
    rows = triangle_duals()
    for bits, expect in TRIANGLE_S_WORDS.items():
        indices = [j for j, b in enumerate(bits) if b == "1"]
        assert str(ordered_product(rows, indices)) == expect


def test_ordered_product_out_of_range():
    rows = triangle_duals()
    with pytest.raises(IndexError):
        ordered_product(rows, [3])


def _reorder_sign(rows, left, right):
    """Independent oracle: bubble the concatenation left+right into sorted
    order with duplicate cancellation, counting anticommuting swaps."""
    seq = sorted(left) + sorted(right)
    sign = 0
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(seq):
            a, b = seq[i], seq[i + 1]
            if a == b:
                del seq[i : i + 2]
                changed = True
                continue
            if a > b:
                if not rows[a].commutes(rows[b]):
                    sign ^= 1
                seq[i], seq[i + 1] = b, a
                changed = True
            i += 1
    return sign


def test_ordered_product_group_law(rng):
    from mgstate import dual_stabilizer, parse_graph
    from paper_data import FOURNODE

    rows = dual_stabilizer(parse_graph(FOURNODE))
    n = 4
    for ka in range(1 << n):
        for kb in range(1 << n):
            left = [j for j in range(n) if (ka >> j) & 1]
            right = [j for j in range(n) if (kb >> j) & 1]
            combined = ordered_product(rows, [j for j in range(n) if ((ka ^ kb) >> j) & 1])
            product = ordered_product(rows, left).mul(ordered_product(rows, right))
            delta = (product.phase - combined.phase) % 4
            assert delta in (0, 2)
            assert (product.x, product.z) == (combined.x, combined.z)
            assert delta == 2 * _reorder_sign(rows, left, right)


def test_conjugation_table_closure():
    # all 18 table entries against exact unitary conjugation
    sqrt2_h = np.array([[1, 1], [1, -1]], dtype=complex)
    sqrt2_n = np.array([[1, 1j], [1, -1j]], dtype=complex)
    mats = {
        "I": (np.eye(2, dtype=complex), 1),
        "H": (sqrt2_h, 2),
        "N": (sqrt2_n, 2),
        "N2": (sqrt2_n @ sqrt2_n, 4),
        "NH": (sqrt2_n @ sqrt2_h, 4),
        "HN": (sqrt2_h @ sqrt2_n, 4),
    }
    for tag, (u, norm) in mats.items():
        for letter in "XZY":
            w = PauliWord.from_letters(letter)
            got = w.conjugate_single(0, tag)
            expect = u @ kron_letters(letter) @ u.conj().T / norm
            assert np.allclose(word_to_complex(got), expect)
            sign, new_letter = CONJUGATION_TABLE[tag][letter]
            assert np.array_equal(
                word_to_complex(got), sign * kron_letters(new_letter)
            )


def test_conjugation_examples():
    z = PauliWord.from_letters("Z")
    assert str(z.conjugate_single(0, "H")) == "+X"
    y = PauliWord.from_letters("Y")
    assert str(y.conjugate_single(0, "N")) == "-Z"
    x = PauliWord.from_letters("X")
    assert str(x.conjugate_single(0, "I")) == "+X"
    with pytest.raises(ValueError):
        x.conjugate_single(0, "Q")


def test_conjugation_multi_qubit_leaves_other_qubits(rng):
    for _ in range(200):
        w = random_word(rng, 3)
        j = rng.randrange(3)
        tag = rng.choice(["H", "N", "N2", "NH", "HN"])
        got = w.conjugate_single(j, tag)
        u = {
            "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
            "N": np.array([[1, 1j], [1, -1j]], dtype=complex) / np.sqrt(2),
        }
        full = {
            "H": u["H"],
            "N": u["N"],
            "N2": u["N"] @ u["N"],
            "NH": u["N"] @ u["H"],
            "HN": u["H"] @ u["N"],
        }[tag]
        op = np.array([[1]], dtype=complex)
        for q in range(3):
            op = np.kron(op, full if q == j else np.eye(2))
        assert np.allclose(
            word_to_complex(got), op @ word_to_complex(w) @ op.conj().T
        )


def test_is_hermitian_examples():
    # dual rows (X Z / I X): their product is +-i (X x Y), not Hermitian;
    # scaling by a further +-i makes it Hermitian
    prod = ordered_product(
        [PauliWord.from_letters("XZ"), PauliWord.from_letters("IX")], [0, 1]
    )
    assert np.array_equal(word_to_complex(prod), 1j * kron_letters("XY"))
    assert not prod.is_hermitian()
    assert PauliWord(2, prod.x, prod.z, prod.phase + 1).is_hermitian()
    assert PauliWord.from_letters("XY").is_hermitian()
    assert PauliWord.identity(3).is_hermitian()


def test_is_hermitian_dense_oracle():
    for w in all_words(2):
        dense = word_to_complex(w)
        assert w.is_hermitian() == np.array_equal(dense, dense.conj().T)


def test_to_dense_examples():
    ii = PauliWord.from_letters("II")
    assert np.array_equal(word_to_complex(ii), np.eye(4))
    w = PauliWord.from_letters("YXZ", phase=2)  # -Y x X x Z
    assert np.array_equal(word_to_complex(w), -kron_letters("YXZ"))


def test_to_dense_bound(monkeypatch):
    monkeypatch.setenv("MGSTATE_MAX_QUBITS", "2")
    with pytest.raises(BoundExceeded):
        PauliWord.identity(3).to_dense()
    monkeypatch.setenv("MGSTATE_MAX_QUBITS", "3")
    PauliWord.identity(3).to_dense()


def test_entry_matches_dense(rng):
    for _ in range(100):
        w = random_word(rng, 3)
        dense = w.to_dense()
        for row in range(8):
            for col in range(8):
                re, im = w.entry(row, col)
                assert (re, im) == (dense.re[row, col], dense.im[row, col])


def test_gaussian_matrix_arithmetic():
    a = GaussianMatrix(np.array([[2, 0], [0, 2]]), np.zeros((2, 2), int), 1)
    b = GaussianMatrix(np.eye(2, dtype=int), np.zeros((2, 2), int), 0)
    assert a == b
    assert a.add(b) == b.scale_int(2)
    assert a.matmul(b) == b
    assert b.scale_i_power(1).scale_i_power(3) == b
    assert a.trace_is_one() is False
    assert GaussianMatrix.identity(2).divided_by_pow2(1).trace_is_one()


def test_gaussian_matrix_json_round_trip():
    m = PauliWord.from_letters("XY").to_dense().divided_by_pow2(2)
    again = GaussianMatrix.from_json_dict(m.to_json_dict())
    assert m == again


def test_gaussian_text_grid():
    m = PauliWord.from_letters("Y").to_dense()
    assert m.to_text_grid() == " 0 -i\n i  0"
