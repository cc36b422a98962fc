"""Finite-memory potentials and observables as value tables.

A memory-m function assigns a real value to every admissible m-word and
is constant on the corresponding cylinders, so var_n vanishes for
n >= m and every norm below is an exact finite computation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TooShort, ValidationError
from .shift_space import enumerate_words

DEFAULT_ALPHA = 0.5


@dataclass(frozen=True, eq=False)
class FiniteMemoryFunction:
    """Value table of a potential/observable on admissible memory-words.

    values must cover exactly the admissible words of length `memory`;
    missing or extraneous entries are validation errors (no silent
    defaults).  alpha is the metric parameter used for Holder norms.
    """

    space: object
    memory: int
    values: dict
    alpha: float = DEFAULT_ALPHA
    _words: tuple = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.memory < 1:
            raise ValidationError("memory must be at least 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError("alpha must lie in (0, 1)")
        words = enumerate_words(self.space, self.memory)
        missing = [w for w in words if w not in self.values]
        if missing:
            raise ValidationError(f"missing values for admissible words: {missing[:5]}")
        extra = [w for w in self.values if w not in set(words)]
        if extra:
            raise ValidationError(f"values given for inadmissible words: {extra[:5]}")
        for w, v in self.values.items():
            if not math.isfinite(v):
                raise ValidationError(f"non-finite value at {w!r}")
        object.__setattr__(self, "_words", tuple(words))

    @classmethod
    def constant(cls, space, c, memory=1, alpha=DEFAULT_ALPHA):
        words = enumerate_words(space, memory)
        return cls(space, memory, {w: float(c) for w in words}, alpha)

    @classmethod
    def indicator(cls, space, word, alpha=DEFAULT_ALPHA):
        """1 on the cylinder of `word`, 0 elsewhere; memory = len(word)."""
        word = tuple(word)
        words = enumerate_words(space, len(word))
        return cls(space, len(word), {w: float(w == word) for w in words}, alpha)

    def __call__(self, word):
        """Evaluate on the first `memory` symbols of an admissible word."""
        if len(word) < self.memory:
            raise TooShort(f"need {self.memory} symbols, got {len(word)}")
        key = tuple(word[: self.memory])
        try:
            return self.values[key]
        except KeyError:
            raise ValidationError(f"word {key!r} is not admissible")

    @property
    def sup_norm(self):
        return max(abs(v) for v in self.values.values())

    def table(self):
        """(words, values) in lexicographic word order."""
        return self._words, np.array([self.values[w] for w in self._words])


def var_n(f, n):
    """Oscillation over pairs of memory-words agreeing in the first
    min(n, memory) coordinates; zero for n >= memory."""
    if n < 0:
        raise ValidationError("n must be nonnegative")
    if n >= f.memory:
        return 0.0
    groups = {}
    for w in f._words:
        key = w[:n]
        v = f.values[w]
        lo, hi = groups.get(key, (v, v))
        groups[key] = (min(lo, v), max(hi, v))
    return max(hi - lo for lo, hi in groups.values())


def total_variation(f):
    """V(f) = sum of var_n over n < memory (all later terms vanish)."""
    return sum(var_n(f, n) for n in range(f.memory))


def holder_seminorm(f, alpha=None):
    """max over n < memory of alpha**(-n) * var_n(f)."""
    a = f.alpha if alpha is None else alpha
    if not 0.0 < a < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    return max(var_n(f, n) / a**n for n in range(f.memory))


def fnorm(f):
    """Summable-variation norm: sup norm plus total variation."""
    return f.sup_norm + total_variation(f)


def birkhoff_sum(f, word, n):
    """Sum of f over the first n shifts; needs n + memory - 1 symbols."""
    if len(word) < n + f.memory - 1:
        raise TooShort(
            f"need {n + f.memory - 1} symbols for a length-{n} sum, got {len(word)}"
        )
    return sum(f(word[k : k + f.memory]) for k in range(n))


def affine_combine(f, g, s):
    """f + s*g on the common memory max(m_f, m_g).

    A memory-m table lifts to any larger memory by ignoring trailing
    coordinates, so the combination is exact.
    """
    if not f.space.same_as(g.space):
        raise ValidationError("operands must live on the same shift space")
    m = max(f.memory, g.memory)
    words = enumerate_words(f.space, m)
    vals = {w: f(w) + s * g(w) for w in words}
    return FiniteMemoryFunction(f.space, m, vals, f.alpha)
