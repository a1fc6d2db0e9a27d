"""Embedding of GL(n, Z) into finite-state automorphisms of the 2^n-ary tree.

A column vector over Z/2 is read as one letter: the letter for bits
(x1, ..., xn) is 1 + x1 + 2*x2 + ... + 2^(n-1)*xn, so x1 is the least
significant bit and (1,1) is letter 4.  An integer matrix acts on the tree
whose vertices are sequences of such letters (2-adic expansions of integer
vectors, least significant digit first: a linear map moves digits and
propagates carries, which is a finite-state process exactly when the matrix
is invertible over Z).

The embedding sends a matrix to the automorphism via an elementary-factor
decomposition: transvections (one off-diagonal entry), sign flips (negate one
basis vector) and transpositions (swap two basis vectors).  Two base machines
suffice; everything else is conjugation by permutations.

All matrix arithmetic is exact.  Entries are plain Python ints checked
against a signed 64-bit range at construction and after every arithmetic
step; violations raise OverflowError.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    InvalidAlphabet,
    InvalidIndex,
    InvalidLetter,
    NotUnimodular,
    ParseError,
    ShapeError,
)
from .mealy import TreeAutomorphism, identity_automorphism

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


def _check64(value):
    if value < INT64_MIN or value > INT64_MAX:
        raise OverflowError(f"integer {value} leaves the checked 64-bit range")
    return value


# ----------------------------------------------------------------------
# letters <-> bit vectors

def bits_from_letter(letter, n):
    """1-based letter -> bit vector (x1, ..., xn), x1 least significant."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidAlphabet(f"bit count must be a positive integer, got {n!r}")
    if not (isinstance(letter, int) and not isinstance(letter, bool) and 1 <= letter <= 1 << n):
        raise InvalidLetter(f"letter {letter!r} outside 1..{1 << n}")
    v = letter - 1
    return tuple((v >> i) & 1 for i in range(n))


def letter_from_bits(bits):
    """Bit vector (x1, ..., xn) -> 1-based letter; inverse of bits_from_letter."""
    bits = tuple(bits)
    if not bits:
        raise ValueError("empty bit vector")
    v = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {b!r} is not 0 or 1")
        v |= b << i
    return v + 1


# ----------------------------------------------------------------------
# base alphabet permutations and generator machines

def base_permutation(kind, n, i=None, j=None):
    """Rooted permutation of the 2^n letters, 0-based.

    "tau":   x1 += x2        (carry-free part of adding column 2 to column 1)
    "sigma": x1 += 1         (carry-free part of adding the vector e1)
    "pi":    swap bits i, j  (requires 1 <= i < j <= n)
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidAlphabet(f"need an integer n >= 2, got {n!r}")
    size = 1 << n
    if kind == "tau":
        return tuple(v ^ ((v >> 1) & 1) for v in range(size))
    if kind == "sigma":
        return tuple(v ^ 1 for v in range(size))
    if kind == "pi":
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
            raise InvalidIndex(f"pi needs 1 <= i < j <= n, got i={i!r}, j={j!r}")
        a, b = i - 1, j - 1

        def swap(v):
            if ((v >> a) ^ (v >> b)) & 1:
                return v ^ (1 << a) ^ (1 << b)
            return v

        return tuple(swap(v) for v in range(size))
    raise ValueError(f"unknown permutation kind {kind!r}")


@lru_cache(maxsize=None)
def generator_automorphism(name, n, i=None, j=None):
    """The finite-state machine of a group generator over 2^n letters.

    "t1": adds column 2 to column 1, least-significant bit first (two
          states; a carry is produced exactly on letters with x1 = x2 = 1)
    "t2": the carry state of t1 (adds column 2 plus one to column 1; the
          carry is absorbed exactly on letters with x1 = x2 = 0)
    "s":  swaps basis vectors i and j (single state, pure permutation)

    t1 and t2 share one two-state machine: the full adder for streams of
    bits read low-order first, with t2 the carry-in-1 state.  Any other
    exit rule for t2 breaks the group relations the embedding depends on
    (for n >= 3 the images of commuting elementary matrices stop
    commuting), so the machine is pinned by the arithmetic, not just by
    its displayed table.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidAlphabet(f"need an integer n >= 2, got {n!r}")
    size = 1 << n
    if name == "s":
        pi = base_permutation("pi", n, i, j)
        return TreeAutomorphism._trusted(size, (pi,), ((0,) * size,), minimal=True)
    if i is not None or j is not None:
        raise InvalidIndex(f"generator {name!r} takes no indices")
    if name not in ("t1", "t2"):
        raise ValueError(f"unknown generator {name!r}")
    tau = base_permutation("tau", n)
    tau_sigma = tuple(v ^ 1 for v in tau)
    # state 0 = t1 (carry 0), state 1 = t2 (carry 1); transitions are the
    # full-adder carry logic on the low two bits of each letter
    t1_row = tuple(1 if v & 3 == 3 else 0 for v in range(size))
    t2_row = tuple(0 if v & 3 == 0 else 1 for v in range(size))
    states = ((tau, t1_row), (tau_sigma, t2_row))
    return TreeAutomorphism(size, states, initial=0 if name == "t1" else 1)


# ----------------------------------------------------------------------
# integer matrices

class IntMatrix:
    """Immutable square integer matrix with checked 64-bit entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise ShapeError(f"expected a square matrix of dimension >= 2, got {n} rows")
        for r in rows:
            for e in r:
                if not isinstance(e, int) or isinstance(e, bool):
                    raise TypeError(f"matrix entries must be ints, got {e!r}")
                _check64(e)
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if r == c else 0 for c in range(n)) for r in range(n)))

    def __mul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.n != other.n:
            raise ShapeError(f"dimension mismatch: {self.n} vs {other.n}")
        n = self.n
        a, b = self.rows, other.rows
        return IntMatrix(
            tuple(
                tuple(_check64(sum(a[r][k] * b[k][c] for k in range(n))) for c in range(n))
                for r in range(n)
            )
        )

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMatrix({list(map(list, self.rows))})"

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination, exact."""
        n = self.n
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for r in range(k + 1, n):
                    if m[r][k] != 0:
                        m[k], m[r] = m[r], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self):
        return self.det() in (1, -1)

    def to_json(self):
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data):
        try:
            n = data["n"]
            rows = data["rows"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed matrix JSON: {exc}") from exc
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise ParseError("malformed matrix JSON: \"rows\" must be a list of lists")
        matrix = cls(rows)
        if matrix.n != n:
            raise ShapeError(f"\"n\" is {n} but the matrix has {matrix.n} rows")
        return matrix


# ----------------------------------------------------------------------
# elementary factors

@dataclass(frozen=True)
class Transvection:
    """Identity plus k in entry (i, j); as a column operation it adds k times
    column i to column j.  Indices 1-based, i != j, k != 0."""

    i: int
    j: int
    k: int

    def __post_init__(self):
        if not (isinstance(self.i, int) and isinstance(self.j, int)
                and self.i >= 1 and self.j >= 1 and self.i != self.j):
            raise InvalidIndex(f"transvection needs distinct 1-based indices, got ({self.i}, {self.j})")
        if not isinstance(self.k, int) or self.k == 0:
            raise ValueError(f"transvection parameter must be a nonzero int, got {self.k!r}")
        _check64(self.k)

    def matrix(self, n):
        _require_dim(max(self.i, self.j), n)
        rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        rows[self.i - 1][self.j - 1] = self.k
        return IntMatrix(rows)

    def inverse(self):
        return Transvection(self.i, self.j, -self.k)


@dataclass(frozen=True)
class SignFlip:
    """Diagonal matrix negating basis vector i (1-based)."""

    i: int

    def __post_init__(self):
        if not isinstance(self.i, int) or self.i < 1:
            raise InvalidIndex(f"sign flip needs a 1-based index, got {self.i!r}")

    def matrix(self, n):
        _require_dim(self.i, n)
        rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        rows[self.i - 1][self.i - 1] = -1
        return IntMatrix(rows)

    def inverse(self):
        return self


@dataclass(frozen=True)
class Transposition:
    """Permutation matrix swapping basis vectors i < j (1-based)."""

    i: int
    j: int

    def __post_init__(self):
        if not (isinstance(self.i, int) and isinstance(self.j, int) and 1 <= self.i < self.j):
            raise InvalidIndex(f"transposition needs 1 <= i < j, got ({self.i!r}, {self.j!r})")

    def matrix(self, n):
        _require_dim(self.j, n)
        perm = list(range(n))
        perm[self.i - 1], perm[self.j - 1] = perm[self.j - 1], perm[self.i - 1]
        return IntMatrix([[1 if c == perm[r] else 0 for c in range(n)] for r in range(n)])

    def inverse(self):
        return self


ElementaryFactor = Transvection | SignFlip | Transposition


def _require_dim(index, n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidAlphabet(f"need an integer n >= 2, got {n!r}")
    if index > n:
        raise InvalidIndex(f"index {index} exceeds dimension {n}")


def factor_to_json(factor):
    if isinstance(factor, Transvection):
        return {"T": [factor.i, factor.j, factor.k]}
    if isinstance(factor, SignFlip):
        return {"E": factor.i}
    if isinstance(factor, Transposition):
        return {"P": [factor.i, factor.j]}
    raise TypeError(f"not an elementary factor: {factor!r}")


def factor_from_json(data):
    if not isinstance(data, dict) or len(data) != 1:
        raise ParseError(f"malformed factor JSON: {data!r}")
    try:
        if "T" in data:
            i, j, k = data["T"]
            return Transvection(i, j, k)
        if "E" in data:
            return SignFlip(data["E"])
        if "P" in data:
            i, j = data["P"]
            return Transposition(i, j)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"malformed factor JSON: {data!r}") from exc
    raise ParseError(f"unknown factor tag in {data!r}")


def factors_to_json(factors):
    return [factor_to_json(f) for f in factors]


def factors_from_json(data):
    if not isinstance(data, list):
        raise ParseError("factor list JSON must be a list")
    return [factor_from_json(item) for item in data]


def factor_product(factors, n):
    """Product of the factor matrices, in list order."""
    acc = IntMatrix.identity(n)
    for f in factors:
        acc = acc * f.matrix(n)
    return acc


# ----------------------------------------------------------------------
# factorization into elementary matrices

def factorize(matrix):
    """Ordered elementary factors whose product equals `matrix`.

    Column reduction: per pivot position p, Euclid on row p across columns
    >= p (pivot = entry of least absolute value, ties to the lowest column,
    swapped into column p), then floor-quotient transvections shrink the
    rest of the row; once the matrix is lower triangular with unit-magnitude
    diagonal, below-diagonal entries are cleared and -1 diagonal entries
    flipped.  The recorded right-multiplications, inverted and reversed,
    are the factorization."""
    if not isinstance(matrix, IntMatrix):
        raise TypeError("factorize expects an IntMatrix")
    d = matrix.det()
    if d not in (1, -1):
        raise NotUnimodular(f"determinant is {d}, expected +1 or -1")
    n = matrix.n
    m = [list(r) for r in matrix.rows]
    ops = []

    def add_col(i, j, t):
        # column j += t * column i
        for r in range(n):
            m[r][j] = _check64(m[r][j] + t * m[r][i])
        ops.append(Transvection(i + 1, j + 1, t))

    def swap_cols(i, j):
        for r in range(n):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        ops.append(Transposition(i + 1, j + 1))

    for p in range(n):
        while True:
            best = p
            for q in range(p, n):
                if m[p][q] != 0 and (m[p][best] == 0 or abs(m[p][q]) < abs(m[p][best])):
                    best = q
            # a zero row segment here would force det = 0
            if best != p:
                swap_cols(p, best)
            done = True
            for q in range(p + 1, n):
                if m[p][q]:
                    t = m[p][q] // m[p][p]
                    if t:
                        add_col(p, q, -t)
                    if m[p][q]:
                        done = False
            if done:
                break
    for p in range(n):
        for q in range(p + 1, n):
            if m[q][p]:
                # column q has unit diagonal m[q][q]; cancel m[q][p] exactly
                add_col(q, p, -m[q][p] * m[q][q])
    for p in range(n):
        if m[p][p] == -1:
            for r in range(n):
                m[r][p] = -m[r][p]
            ops.append(SignFlip(p + 1))
    assert all(m[r][c] == (1 if r == c else 0) for r in range(n) for c in range(n))
    return [op.inverse() for op in reversed(ops)]


# ----------------------------------------------------------------------
# the embedding

def _conjugators(i, j):
    """Transpositions (outermost first) carrying the base (2,1)-transvection
    to position (i, j): T_ij = P1 P2 T21 P2 P1 for the returned [P1, P2]."""
    if (i, j) == (2, 1):
        return []
    if (i, j) == (1, 2):
        return [(1, 2)]
    if j == 1:
        return [(2, i)]
    if i == 2:
        return [(1, j)]
    if i == 1:
        return [(1, 2), (1, j)]
    if j == 2:
        return [(1, i), (1, 2)]
    return [(2, i), (1, j)]


@lru_cache(maxsize=None)
def _sign_flip_first(n):
    # diag(-1, 1, ..., 1) = T21(1) P12 T21(-1) P12 T21(1) P12
    t1 = generator_automorphism("t1", n)
    s12 = generator_automorphism("s", n, 1, 2)
    acc = identity_automorphism(1 << n)
    for g in (t1, s12, t1.inverse(), s12, t1, s12):
        acc = acc.compose(g).minimize()
    return acc


def elementary_to_automorphism(factor, n):
    """Machine of one elementary factor acting on the 2^n-ary tree."""
    if isinstance(factor, Transposition):
        return generator_automorphism("s", n, factor.i, factor.j)
    if isinstance(factor, SignFlip):
        _require_dim(factor.i, n)
        flip = _sign_flip_first(n)
        if factor.i == 1:
            return flip
        s = generator_automorphism("s", n, 1, factor.i)
        return s.compose(flip).compose(s).minimize()
    if isinstance(factor, Transvection):
        _require_dim(max(factor.i, factor.j), n)
        acc = generator_automorphism("t1", n).power(factor.k)
        for a, b in reversed(_conjugators(factor.i, factor.j)):
            s = generator_automorphism("s", n, a, b)
            acc = s.compose(acc).compose(s).minimize()
        return acc
    raise TypeError(f"not an elementary factor: {factor!r}")


def expected_states(factor):
    """Exact minimal state count of an elementary factor's machine:
    1 for a transposition, 2 for a sign flip, |k| + 1 for a transvection.

    A sign flip negates one coordinate stream; two's-complement negation
    (invert every bit, then add one) needs exactly two states: "carry
    still pending" and "plain inversion"."""
    if isinstance(factor, Transposition):
        return 1
    if isinstance(factor, SignFlip):
        return 2
    if isinstance(factor, Transvection):
        return abs(factor.k) + 1
    raise TypeError(f"not an elementary factor: {factor!r}")


def phi(matrix):
    """The embedding: factorize, map each factor to its machine, compose
    left to right with minimization interleaved."""
    factors = factorize(matrix)
    acc = identity_automorphism(1 << matrix.n)
    for f in factors:
        acc = acc.compose(elementary_to_automorphism(f, matrix.n)).minimize()
    return acc
