"""Subshifts of finite type: validation, word enumeration, recoding.

A shift space is described by a finite alphabet of symbol labels and a
0/1 transition matrix A, where A[i, j] = 1 allows label j to follow
label i.  All outputs involving words are in lexicographic label order,
so repeated runs are bit-stable.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import NoPath, NotPrimitive, RowColumnEmpty, SizeGuard, ValidationError

DEFAULT_ENUM_CAP = 2**20
ENUM_CAP_ENV = "GIBBSLAB_ENUM_CAP"


def enumeration_cap():
    """Word-count guard; the environment variable overrides the default."""
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"{ENUM_CAP_ENV} must be an integer, got {raw!r}")
    if cap < 1:
        raise ValidationError(f"{ENUM_CAP_ENV} must be positive")
    return cap


@dataclass(frozen=True, eq=False)
class ShiftSpace:
    """A topologically mixing subshift of finite type.

    Attributes
    ----------
    symbols : tuple
        Strictly increasing symbol labels (ints, or tuples for
        higher-block presentations).
    transitions : ndarray
        0/1 matrix indexed by symbol position; rows are source symbols.
    mixing_time : int
        Least M with all entries of transitions**M positive.
    """

    symbols: tuple
    transitions: np.ndarray
    mixing_time: int
    _index: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.symbols)})
        self.transitions.setflags(write=False)

    @property
    def alphabet_size(self):
        return len(self.symbols)

    def index(self, symbol):
        try:
            return self._index[symbol]
        except KeyError:
            raise ValidationError(f"unknown symbol {symbol!r}")

    def allows(self, i, j):
        """Whether label j may follow label i."""
        return bool(self.transitions[self.index(i), self.index(j)])

    def is_admissible(self, word):
        if len(word) == 0:
            return False
        idx = self._index
        if any(s not in idx for s in word):
            return False
        A = self.transitions
        return all(A[idx[a], idx[b]] for a, b in zip(word, word[1:]))

    def successors(self, symbol):
        """Labels allowed after `symbol`, in increasing order."""
        row = self.transitions[self.index(symbol)]
        return tuple(self.symbols[j] for j in np.flatnonzero(row))

    def same_as(self, other):
        return self is other or (
            self.symbols == other.symbols
            and np.array_equal(self.transitions, other.transitions)
        )


def validate(alphabet_size, transitions, symbols=None):
    """Check a transition matrix and return the shift space it defines.

    The matrix must be 0/1 with no empty row or column, and primitive:
    some power up to the Wielandt bound (N-1)**2 + 1 must be strictly
    positive.  The minimal such power is the mixing time.

    Raises
    ------
    RowColumnEmpty, NotPrimitive, ValidationError
    """
    A = np.asarray(transitions)
    n = int(alphabet_size)
    if n < 2:
        raise ValidationError("alphabet size must be at least 2")
    if A.shape != (n, n):
        raise ValidationError(f"transitions must be {n}x{n}, got {A.shape}")
    if not np.isin(A, (0, 1)).all():
        raise ValidationError("transitions entries must be 0 or 1")
    A = A.astype(np.uint8)
    if (A.sum(axis=1) == 0).any() or (A.sum(axis=0) == 0).any():
        raise RowColumnEmpty("every symbol needs an allowed successor and predecessor")

    if symbols is None:
        symbols = tuple(range(1, n + 1))
    else:
        symbols = tuple(symbols)
        if len(symbols) != n or len(set(symbols)) != n:
            raise ValidationError("symbols must be distinct and match the alphabet size")
        if list(symbols) != sorted(symbols):
            raise ValidationError("symbols must be strictly increasing")

    M = _mixing_time(A)
    return ShiftSpace(symbols=symbols, transitions=A, mixing_time=M)


def _mixing_time(A):
    n = A.shape[0]
    wielandt = (n - 1) ** 2 + 1
    P = (A > 0)
    for m in range(1, wielandt + 1):
        if P.all():
            return m
        P = (P.astype(np.uint8) @ A) > 0
    if P.all():
        return wielandt
    raise NotPrimitive(f"no power up to {(n - 1)**2 + 1} is strictly positive")


def enumerate_words(space, n, cap=None):
    """All admissible words of length n, lexicographically ordered.

    The count equals the sum of entries of A**(n-1).  Guarded by the
    enumeration cap on alphabet_size**n.
    """
    if n < 1:
        raise ValidationError("word length must be at least 1")
    if cap is None:
        cap = enumeration_cap()
    if space.alphabet_size**n > cap:
        raise SizeGuard(
            f"{space.alphabet_size}**{n} exceeds enumeration cap {cap}"
        )
    words = [(s,) for s in space.symbols]
    for _ in range(n - 1):
        words = [w + (s,) for w in words for s in space.successors(w[-1])]
    return words


def word_count(space, n):
    """Number of admissible n-words, via powers of the transition matrix."""
    if n < 1:
        raise ValidationError("word length must be at least 1")
    P = np.linalg.matrix_power(space.transitions.astype(np.int64), n - 1)
    return int(P.sum())


def connecting_word(space, i, j, m):
    """Lexicographically smallest admissible m-word starting at i whose
    concatenation with j is admissible.

    Always exists for m >= mixing_time; raises NoPath otherwise when no
    path exists.
    """
    if m < 1:
        raise ValidationError("connecting length must be at least 1")
    A = space.transitions
    # reach[r][s, t]: path with r edges from s to t exists
    reach = [np.eye(space.alphabet_size, dtype=bool)]
    for _ in range(m):
        reach.append((reach[-1].astype(np.uint8) @ A) > 0)
    ji = space.index(j)
    if not reach[m][space.index(i), ji]:
        raise NoPath(f"no admissible word of length {m} from {i!r} to {j!r}")
    word = (i,)
    cur = space.index(i)
    for k in range(1, m):
        # m - k edges remain from position k to j
        for s in np.flatnonzero(A[cur]):
            if reach[m - k][s, ji]:
                word += (space.symbols[s],)
                cur = s
                break
    return word


def canonical_extension(space, word, horizon):
    """Extend a word by `horizon` symbols, choosing at each step the
    smallest admissible successor.  Deterministic cylinder representative."""
    if not space.is_admissible(word):
        raise ValidationError(f"word {word!r} is not admissible")
    out = tuple(word)
    for _ in range(horizon):
        out += (space.successors(out[-1])[0],)
    return out


def recode(space, block_length, cap=None):
    """Higher-block presentation: symbols become admissible block_length-words.

    Blocks u -> v are allowed when they overlap in block_length - 1
    symbols and the combined (block_length + 1)-word is admissible.
    block_length = 1 returns the space unchanged.
    """
    if block_length < 1:
        raise ValidationError("block length must be at least 1")
    if block_length == 1:
        return space
    states = enumerate_words(space, block_length, cap=cap)
    k = len(states)
    B = np.zeros((k, k), dtype=np.uint8)
    pos = {w: i for i, w in enumerate(states)}
    for i, u in enumerate(states):
        for s in space.successors(u[-1]):
            v = u[1:] + (s,)
            if v in pos:
                B[i, pos[v]] = 1
    return validate(k, B, symbols=tuple(states))
