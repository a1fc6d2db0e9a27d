"""Tests for the matrix-to-automorphism embedding: letter codecs, the base
machines, elementary factors, factorization and the embedding itself.

The two-state adder machine is pinned in both directions: its displayed
recursions and the group relations that force the carry rule (commuting
images of commuting matrices).  The relations are the stronger pin — they
fail for every other exit rule of the carry state.
"""

from __future__ import annotations

import json
import random

import pytest

from glnztree import (
    IntMatrix,
    InvalidAlphabet,
    InvalidIndex,
    InvalidLetter,
    NotUnimodular,
    ParseError,
    ShapeError,
    SignFlip,
    Transposition,
    Transvection,
    base_permutation,
    bits_from_letter,
    elementary_to_automorphism,
    expected_states,
    factor_from_json,
    factor_product,
    factor_to_json,
    factorize,
    factors_from_json,
    factors_to_json,
    generator_automorphism,
    identity_automorphism,
    letter_from_bits,
    phi,
)

# ----------------------------------------------------------------------
# base permutations and letter codecs


def test_base_permutation_pinned():
    # 1-based cycle notation in comments
    assert base_permutation("tau", 2) == (0, 1, 3, 2)  # (34)
    assert base_permutation("sigma", 2) == (1, 0, 3, 2)  # (12)(34)
    assert base_permutation("pi", 2, 1, 2) == (0, 2, 1, 3)  # (23)
    assert base_permutation("sigma", 3) == (1, 0, 3, 2, 5, 4, 7, 6)
    assert base_permutation("tau", 3) == (0, 1, 3, 2, 4, 5, 7, 6)


def test_base_permutation_involutions():
    rng = random.Random("glnztree/tests/perm")
    for _ in range(20):
        n = rng.randint(2, 5)
        size = 1 << n
        for kind in ("tau", "sigma"):
            p = base_permutation(kind, n)
            assert sorted(p) == list(range(size))
            assert all(p[p[v]] == v for v in range(size))
        i = rng.randint(1, n - 1)
        j = rng.randint(i + 1, n)
        p = base_permutation("pi", n, i, j)
        assert sorted(p) == list(range(size))
        assert all(p[p[v]] == v for v in range(size))


def test_base_permutation_validation():
    with pytest.raises(InvalidAlphabet):
        base_permutation("tau", 1)
    with pytest.raises(InvalidIndex):
        base_permutation("pi", 2, 2, 1)
    with pytest.raises(InvalidIndex):
        base_permutation("pi", 3, 1, 5)
    with pytest.raises(InvalidIndex):
        base_permutation("pi", 2, None, None)
    with pytest.raises(ValueError):
        base_permutation("rho", 2)


def test_letter_codec_pinned():
    assert letter_from_bits((1, 0)) == 2
    assert letter_from_bits((0, 0, 0)) == 1
    assert letter_from_bits((1, 1)) == 4
    assert bits_from_letter(2, 2) == (1, 0)
    assert bits_from_letter(1, 3) == (0, 0, 0)
    assert bits_from_letter(4, 2) == (1, 1)


def test_letter_codec_roundtrip():
    for n in (2, 3, 4):
        for letter in range(1, (1 << n) + 1):
            bits = bits_from_letter(letter, n)
            assert len(bits) == n
            assert letter_from_bits(bits) == letter


def test_letter_codec_validation():
    with pytest.raises(InvalidLetter):
        bits_from_letter(0, 2)
    with pytest.raises(InvalidLetter):
        bits_from_letter(5, 2)
    with pytest.raises(InvalidAlphabet):
        bits_from_letter(1, 0)
    with pytest.raises(ValueError):
        letter_from_bits(())
    with pytest.raises(ValueError):
        letter_from_bits((2, 0))


# ----------------------------------------------------------------------
# the generator machines


def test_generator_machines_pinned():
    for n in (2, 3, 4):
        t1 = generator_automorphism("t1", n)
        t2 = generator_automorphism("t2", n)
        assert t1.state_count() == 2
        assert t2.state_count() == 2
        assert t1.outputs[0] == base_permutation("tau", n)
        # the carry appears exactly on letters with x1 = x2 = 1 and is
        # absorbed exactly on letters with x1 = x2 = 0
        for v in range(1 << n):
            assert t1.state_at((v,)).equal(t2 if v & 3 == 3 else t1)
            assert t2.state_at((v,)).equal(t1 if v & 3 == 0 else t2)
    s13 = generator_automorphism("s", 3, 1, 3)
    assert len(s13.outputs) == 1
    assert s13.outputs[0] == base_permutation("pi", 3, 1, 3)


def test_generator_machine_displays():
    t1 = generator_automorphism("t1", 2)
    t2 = generator_automorphism("t2", 2)
    sections, root = t1.first_level_states()
    assert root == (0, 1, 3, 2)  # (34)
    assert [section.equal(t2) for section in sections] == [False, False, False, True]
    sections, root = t2.first_level_states()
    assert root == (1, 0, 2, 3)  # (12)
    assert [section.equal(t1) for section in sections] == [True, False, False, False]


def test_generator_validation():
    with pytest.raises(InvalidAlphabet):
        generator_automorphism("t1", 1)
    with pytest.raises(InvalidIndex):
        generator_automorphism("t1", 2, 1, 2)
    with pytest.raises(InvalidIndex):
        generator_automorphism("s", 2, 2, 1)
    with pytest.raises(InvalidIndex):
        generator_automorphism("s", 2, 1, 5)
    with pytest.raises(ValueError):
        generator_automorphism("t3", 2)


def test_carry_rule_group_relations():
    """The relations that pin the carry state's exit rule (n = 3).

    Adding column 2 to column 1 commutes with adding column 3 to column 1,
    and the commutator of "column 1 += column 3" with "column 2 += column 1"
    is "column 2 += column 3".  Both fail for any other exit rule."""
    t1 = generator_automorphism("t1", 3)
    s23 = generator_automorphism("s", 3, 2, 3)
    other = s23.compose(t1).compose(s23).minimize()
    assert t1.compose(other).equal(other.compose(t1))

    g = phi(Transvection(3, 1, 1).matrix(3))
    h = phi(Transvection(1, 2, 1).matrix(3))
    commutator_matrix = (
        Transvection(3, 1, 1).matrix(3)
        * Transvection(1, 2, 1).matrix(3)
        * Transvection(3, 1, -1).matrix(3)
        * Transvection(1, 2, -1).matrix(3)
    )
    machine = g.compose(h).compose(g.inverse()).compose(h.inverse()).minimize()
    assert machine.equal(phi(commutator_matrix))
    # the commutator of those two column operations is itself elementary
    assert commutator_matrix in (
        Transvection(3, 2, 1).matrix(3),
        Transvection(3, 2, -1).matrix(3),
    )


# ----------------------------------------------------------------------
# matrices


def test_intmatrix_basics():
    eye = IntMatrix.identity(3)
    assert eye.det() == 1
    assert eye.is_unimodular()
    rot = IntMatrix([[0, -1], [1, 0]])
    assert rot.det() == 1
    assert (rot * rot).rows == ((-1, 0), (0, -1))
    assert IntMatrix([[2, 0], [0, 1]]).det() == 2
    assert not IntMatrix([[2, 0], [0, 1]]).is_unimodular()
    assert IntMatrix([[1, 0, 0], [3, 1, 0], [2, -1, 1]]).det() == 1
    assert IntMatrix([[0, 1], [1, 0]]).det() == -1
    assert IntMatrix([[1, 2], [2, 4]]).det() == 0


def test_intmatrix_validation():
    with pytest.raises(ShapeError):
        IntMatrix([[1, 0], [0, 1], [0, 0]])
    with pytest.raises(ShapeError):
        IntMatrix([[1]])
    with pytest.raises(TypeError):
        IntMatrix([[1, 0], [0, 1.0]])
    with pytest.raises(TypeError):
        IntMatrix([[1, 0], [0, True]])
    with pytest.raises(OverflowError):
        IntMatrix([[2 ** 63, 0], [0, 1]])
    big = IntMatrix([[2 ** 62, 0], [0, 1]])
    with pytest.raises(OverflowError):
        big * IntMatrix([[2, 0], [0, 1]])
    with pytest.raises(ShapeError):
        IntMatrix.identity(2) * IntMatrix.identity(3)


def test_intmatrix_json():
    mat = IntMatrix([[1, 0], [2, 1]])
    assert mat.to_json() == {"n": 2, "rows": [[1, 0], [2, 1]]}
    assert IntMatrix.from_json(json.loads(json.dumps(mat.to_json()))) == mat
    with pytest.raises(ParseError):
        IntMatrix.from_json({"rows": [[1, 0], [0, 1]]})
    with pytest.raises(ParseError):
        IntMatrix.from_json({"n": 2, "rows": "nope"})
    with pytest.raises(ShapeError):
        IntMatrix.from_json({"n": 3, "rows": [[1, 0], [0, 1]]})


# ----------------------------------------------------------------------
# elementary factors


def test_factor_matrices_and_inverses():
    assert Transvection(2, 1, 3).matrix(2).rows == ((1, 0), (3, 1))
    assert Transvection(1, 2, -2).matrix(3).rows == ((1, -2, 0), (0, 1, 0), (0, 0, 1))
    assert SignFlip(2).matrix(2).rows == ((1, 0), (0, -1))
    assert Transposition(1, 3).matrix(3).rows == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    for f in (Transvection(2, 1, 3), SignFlip(1), Transposition(1, 2)):
        n = 3
        assert f.matrix(n) * f.inverse().matrix(n) == IntMatrix.identity(n)


def test_factor_validation():
    with pytest.raises(ValueError):
        Transvection(1, 2, 0)
    with pytest.raises(InvalidIndex):
        Transvection(2, 2, 1)
    with pytest.raises(InvalidIndex):
        Transvection(0, 1, 1)
    with pytest.raises(InvalidIndex):
        SignFlip(0)
    with pytest.raises(InvalidIndex):
        Transposition(2, 1)
    with pytest.raises(InvalidIndex):
        Transposition(2, 2)
    with pytest.raises(InvalidIndex):
        Transvection(1, 5, 1).matrix(3)
    with pytest.raises(InvalidIndex):
        SignFlip(4).matrix(3)
    with pytest.raises(OverflowError):
        Transvection(1, 2, 2 ** 63)


def test_factor_json():
    factors = [Transvection(2, 1, 1), SignFlip(1), Transposition(1, 3)]
    payload = factors_to_json(factors)
    assert payload == [{"T": [2, 1, 1]}, {"E": 1}, {"P": [1, 3]}]
    assert factors_from_json(json.loads(json.dumps(payload))) == factors
    assert factor_from_json(factor_to_json(SignFlip(2))) == SignFlip(2)
    with pytest.raises(ParseError):
        factor_from_json({"X": 1})
    with pytest.raises(ParseError):
        factor_from_json({"T": [1, 2, 0]})
    with pytest.raises(ParseError):
        factor_from_json({"T": [1, 2], "E": 1})
    with pytest.raises(ParseError):
        factor_from_json("T 1 2 3")
    with pytest.raises(ParseError):
        factors_from_json({"T": [1, 2, 3]})
    with pytest.raises(TypeError):
        factor_to_json(IntMatrix.identity(2))


def test_factor_product():
    assert factor_product([], 2) == IntMatrix.identity(2)
    factors = [Transvection(2, 1, 1), Transposition(1, 2)]
    assert factor_product(factors, 2) == (
        Transvection(2, 1, 1).matrix(2) * Transposition(1, 2).matrix(2)
    )


# ----------------------------------------------------------------------
# factorization


def test_factorize_pinned():
    assert factorize(IntMatrix.identity(2)) == []
    assert factorize(IntMatrix.identity(4)) == []
    assert factorize(IntMatrix([[1, 0], [1, 1]])) == [Transvection(2, 1, 1)]
    rot = IntMatrix([[0, -1], [1, 0]])
    factors = factorize(rot)
    assert factor_product(factors, 2) == rot
    # determinism matters for byte-stable CLI output
    assert factorize(rot) == factors == [SignFlip(1), Transposition(1, 2)]


def test_factorize_roundtrip_random():
    rng = random.Random("glnztree/tests/factorize")
    dims = (2, 3, 4)
    for _ in range(60):
        n = rng.choice(dims)
        factors = [_random_factor(n, rng) for _ in range(rng.randint(0, 12))]
        mat = factor_product(factors, n)
        assert factor_product(factorize(mat), n) == mat


def _random_factor(n, rng):
    kind = rng.randrange(3)
    if kind == 0:
        i, j = rng.sample(range(1, n + 1), 2)
        return Transvection(i, j, rng.choice([-3, -2, -1, 1, 2, 3]))
    if kind == 1:
        return SignFlip(rng.randint(1, n))
    i, j = sorted(rng.sample(range(1, n + 1), 2))
    return Transposition(i, j)


def test_factorize_validation():
    with pytest.raises(NotUnimodular):
        factorize(IntMatrix([[2, 0], [0, 1]]))
    with pytest.raises(NotUnimodular):
        factorize(IntMatrix([[1, 2], [2, 4]]))
    with pytest.raises(TypeError):
        factorize([[1, 0], [0, 1]])


def test_factorize_stays_exact_on_large_entries():
    k = 2 ** 40
    mat = IntMatrix([[1, 0], [k, 1]])
    assert factorize(mat) == [Transvection(2, 1, k)]
    mixed = IntMatrix([[1, k], [0, 1]]) * IntMatrix([[1, 0], [7, 1]])
    assert factor_product(factorize(mixed), 2) == mixed


# ----------------------------------------------------------------------
# elementary images and the embedding


def test_elementary_images_pinned():
    assert elementary_to_automorphism(Transposition(1, 2), 2).equal(
        generator_automorphism("s", 2, 1, 2)
    )
    assert elementary_to_automorphism(Transposition(1, 2), 2).state_count() == 1
    t1 = generator_automorphism("t1", 2)
    assert elementary_to_automorphism(Transvection(2, 1, 1), 2).equal(t1)
    assert elementary_to_automorphism(Transvection(2, 1, 3), 2).equal(t1.power(3))
    # the (1,2)-transvection is the swap conjugate of the base machine
    s12 = generator_automorphism("s", 2, 1, 2)
    s1 = s12.compose(t1).compose(s12).minimize()
    assert elementary_to_automorphism(Transvection(1, 2, 1), 2).equal(s1)
    assert elementary_to_automorphism(Transvection(2, 1, -7), 3).state_count() == 8


def test_elementary_images_agree_with_their_matrices():
    rng = random.Random("glnztree/tests/elementary")
    n = 3
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            k = rng.choice([-3, -2, -1, 1, 2, 3])
            f = Transvection(i, j, k)
            machine = elementary_to_automorphism(f, n)
            assert machine.state_count() == abs(k) + 1
            assert machine.equal(phi(f.matrix(n)))


def test_sign_flip_images():
    for n in (2, 3):
        for i in range(1, n + 1):
            machine = elementary_to_automorphism(SignFlip(i), n)
            assert machine.state_count() == 2
            assert machine.compose(machine).is_identity()
            assert machine.equal(phi(SignFlip(i).matrix(n)))
    with pytest.raises(InvalidIndex):
        elementary_to_automorphism(SignFlip(3), 2)
    with pytest.raises(TypeError):
        elementary_to_automorphism(IntMatrix.identity(2), 2)


def test_sign_flip_negates_the_coordinate_stream():
    """phi(diag(-1, 1)) maps the digit stream of (x, y) to that of (-x, y):
    acting on the expansion of e1 = (1, 0, 0, ...) yields -e1, whose 2-adic
    first coordinate is all ones (two's complement)."""
    machine = elementary_to_automorphism(SignFlip(1), 2)
    one = (letter_from_bits((1, 0)) - 1,) + (letter_from_bits((0, 0)) - 1,) * 5
    minus_one = (letter_from_bits((1, 0)) - 1,) * 6
    assert machine.act(one) == minus_one


def test_expected_states():
    assert expected_states(Transposition(1, 3)) == 1
    assert expected_states(SignFlip(2)) == 2
    assert expected_states(Transvection(1, 2, 4)) == 5
    assert expected_states(Transvection(2, 1, -7)) == 8
    with pytest.raises(TypeError):
        expected_states("T21")


def test_phi_pinned():
    t1 = generator_automorphism("t1", 2)
    machine = phi(IntMatrix([[1, 0], [2, 1]]))
    assert machine.equal(t1.power(2).minimize())
    assert machine.state_count() == 3
    assert phi(IntMatrix([[0, 1], [1, 0]])).state_count() == 1
    assert phi(IntMatrix.identity(2)).is_identity()
    assert phi(IntMatrix.identity(3)).is_identity()


def test_phi_triangular_example_within_bound():
    mat = IntMatrix([[1, 0, 0], [3, 1, 0], [2, -1, 1]])
    machine = phi(mat)
    assert machine.state_count() == 12
    bound = (1 + 3) * (1 + 2) * (1 + 1)
    assert machine.state_count() <= bound == 24


def test_phi_is_factorization_independent():
    mat = IntMatrix([[1, 0, 0], [3, 1, 0], [2, -1, 1]])
    alternative = [Transvection(2, 1, 3), Transvection(3, 1, 2), Transvection(3, 2, -1)]
    assert factor_product(alternative, 3) == mat
    machine = identity_automorphism(8)
    for f in alternative:
        machine = machine.compose(elementary_to_automorphism(f, 3)).minimize()
    assert machine.equal(phi(mat))


def test_phi_homomorphism_sample():
    rng = random.Random("glnztree/tests/phi-hom")
    for _ in range(10):
        n = rng.choice((2, 3))
        a = factor_product([_random_factor(n, rng) for _ in range(rng.randint(0, 3))], n)
        b = factor_product([_random_factor(n, rng) for _ in range(rng.randint(0, 3))], n)
        assert phi(a * b).equal(phi(a).compose(phi(b)))


def test_phi_validation():
    with pytest.raises(NotUnimodular):
        phi(IntMatrix([[2, 0], [0, 1]]))
