"""Finite matrix algebras and the generator correspondence.

The 2**n-dimensional side: Pauli words as dense operators, the product state
with per-site density diag(lambda, 1 - lambda), and the map sending the
matrix generators into the convolution algebra,

    sigma1 at site k  ->  V at the single-flip word e_k,
    sigma3 at site k  ->  multiplication by the parity function psi_k.

Site 1 is the first tensor factor, so the matrix row index carries site 1 in
its most significant bit.  Prefixes keep site 1 in the least significant bit;
the two sides are never index-matched directly, equality of expectations is
checked through the state values themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .algebra import (
    AlgebraElement,
    canonical_weight,
    convolve,
    pukanszky_L,
    pukanszky_V,
    unit,
)
from .errors import InvalidSpec, SiteOutOfRange
from .groupoid import e
from .measures import Bernoulli, CylinderFunction
from .sampling import rng_for

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])
ID2 = np.eye(2)


class DenseOperator:
    """A 2**n x 2**n matrix acting on n qubit sites."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries):
        entries = np.asarray(entries)
        if entries.shape != (1 << n, 1 << n):
            raise InvalidSpec(
                f"entries shape {entries.shape} does not match n={n}"
            )
        self.n = n
        self.entries = entries

    @classmethod
    def identity(cls, n: int) -> "DenseOperator":
        return cls(n, np.eye(1 << n))

    def embed(self) -> "DenseOperator":
        """Adjoin one fresh site on the right: A -> A tensor I2."""
        return DenseOperator(self.n + 1, np.kron(self.entries, ID2))

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.n, self.entries.conj().T)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if self.n != other.n:
            raise InvalidSpec("operator size mismatch")
        return DenseOperator(self.n, self.entries @ other.entries)

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        if self.n != other.n:
            raise InvalidSpec("operator size mismatch")
        return DenseOperator(self.n, self.entries + other.entries)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        return self + (-1) * other

    def __mul__(self, scalar):
        return DenseOperator(self.n, scalar * self.entries)

    __rmul__ = __mul__

    def __repr__(self):
        return f"DenseOperator(n={self.n})"


@dataclass(frozen=True)
class PauliWord:
    """Product of one-site generators: map site -> letter, letters in {1, 3}.

    Factors at distinct sites commute, so the site-ascending storage order is
    a canonical form, not a choice of operator.
    """

    letters: tuple = ()

    def __post_init__(self):
        seen = set()
        for site, letter in self.letters:
            if not isinstance(site, int) or site < 1:
                raise SiteOutOfRange(f"site {site!r} must be a positive int")
            if site in seen:
                raise InvalidSpec(f"site {site} appears twice in one word")
            if letter not in (1, 3):
                raise InvalidSpec(f"letter {letter!r} not in {{1, 3}}")
            seen.add(site)
        object.__setattr__(
            self, "letters", tuple(sorted(self.letters))
        )

    @classmethod
    def from_map(cls, mapping: dict) -> "PauliWord":
        return cls(tuple(sorted(mapping.items())))

    @property
    def sites(self) -> tuple:
        return tuple(site for site, _ in self.letters)

    @property
    def max_site(self) -> int:
        return max(self.sites, default=0)

    def __repr__(self):
        body = ", ".join(f"{s}:{l}" for s, l in self.letters)
        return f"PauliWord({{{body}}})"


_FACTOR = {1: SIGMA1, 3: SIGMA3}


def pauli_operator(w: PauliWord, n: int) -> DenseOperator:
    """Dense matrix of a Pauli word on n sites, site 1 as first factor."""
    if w.max_site > n:
        raise SiteOutOfRange(f"word uses site {w.max_site} but n={n}")
    lookup = dict(w.letters)
    factors = [_FACTOR.get(lookup.get(k), ID2) for k in range(1, n + 1)]
    entries = reduce(np.kron, factors, np.eye(1))
    return DenseOperator(n, entries)


def powers_state(A: DenseOperator, lam) -> complex:
    """Product-state expectation Tr(rho**tensor n A), rho = diag(lam, 1-lam)."""
    lam = float(lam)
    if not 0 < lam <= 0.5:
        raise InvalidSpec(f"lambda={lam} outside (0, 1/2]")
    site = np.array([lam, 1.0 - lam])
    diag_weights = reduce(np.kron, [site] * A.n, np.array([1.0]))
    diag_entries = np.diagonal(A.entries)
    re = math.fsum(diag_weights * np.real(diag_entries))
    im = math.fsum(diag_weights * np.imag(diag_entries))
    return complex(re, im)


def glimm_map(w: PauliWord, spec) -> AlgebraElement:
    """Image of a Pauli word in the convolution algebra.

    Letter 1 at site k maps to the weighted flip V_{e_k}, letter 3 to
    multiplication by psi_k; the images are star-multiplied site-ascending.
    Star-homomorphism on words holds because distinct-site images commute.
    """
    if not isinstance(spec, Bernoulli):
        raise InvalidSpec("the generator correspondence needs a Bernoulli measure")
    out = unit()
    for site, letter in w.letters:
        if letter == 1:
            factor = pukanszky_V(e(site), spec)
        else:
            factor = pukanszky_L(
                CylinderFunction.psi(site, site, exact=spec.exact)
            )
        out = convolve(out, factor)
    return out


def gns_expectation(w: PauliWord, spec) -> complex:
    """Vector-state expectation of the mapped word at the cyclic unit vector.

    Because the unit is the cyclic vector, this is just the canonical weight
    of the image; it must agree with powers_state of the dense operator.
    """
    return canonical_weight(glimm_map(w, spec), spec)


def random_pauli_word(rng: np.random.Generator, n: int) -> PauliWord:
    """Each site independently blank, letter 1, or letter 3."""
    letters = []
    for site in range(1, n + 1):
        r = int(rng.integers(0, 3))
        if r:
            letters.append((site, 1 if r == 1 else 3))
    return PauliWord(tuple(letters))


def gns_compare_random(n: int, trials: int, lam, seed: int) -> dict:
    """Randomized two-sided comparison of the two state evaluations.

    Each trial draws a complex combination of Pauli-word products (including
    sigma2-style i * sigma1 sigma3 pairs at a random site), evaluates the
    product state on the dense side and the cyclic-vector weight on the
    algebra side, and records the absolute deviation.
    """
    if n > 8:
        raise InvalidSpec(f"n={n} too large for dense 2**n matrices")
    lam = float(lam)
    spec = Bernoulli(lam)
    worst = 0.0
    for i in range(trials):
        rng = rng_for(seed, i)
        M = DenseOperator(n, np.zeros((1 << n, 1 << n), dtype=complex))
        F = AlgebraElement({})
        for _ in range(int(rng.integers(1, 4))):
            c = complex(rng.standard_normal(), rng.standard_normal())
            words = [random_pauli_word(rng, n)]
            if int(rng.integers(0, 2)):
                k = int(rng.integers(1, n + 1))
                c *= 1j
                words += [PauliWord(((k, 1),)), PauliWord(((k, 3),))]
            term_m = DenseOperator.identity(n)
            term_a = unit()
            for word in words:
                term_m = term_m @ pauli_operator(word, n)
                term_a = convolve(term_a, glimm_map(word, spec))
            M = M + c * term_m
            F = F + c * term_a
        lhs = complex(canonical_weight(F, spec))
        rhs = powers_state(M, lam)
        worst = max(worst, abs(lhs - rhs))
    return {
        "n": n,
        "lambda": lam,
        "trials": trials,
        "max_abs_deviation": worst,
        "seed": seed,
    }
