"""Coefficient rings: exact rationals, F_p and Z/p^k."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import is_prime

DEFAULT_PRECISION = 6


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarRing:
    """Descriptor of a coefficient ring.

    ``kind`` is ``"Q"``, ``"Fp"`` or ``"Zpk"``.  F_p behaves as Z/p^1 for
    arithmetic but is kept distinct because the radical needs a prime field.
    """

    kind: str
    p: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None or self.k is not None:
                raise RingError("rational ring takes no prime")
            return
        if self.kind not in ("Fp", "Zpk"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.p is None or not is_prime(self.p):
            raise RingError(f"{self.p} is not prime")
        if self.kind == "Fp" and self.k != 1:
            raise RingError("F_p has precision 1")
        if self.k is None or self.k < 1:
            raise RingError("precision k must be >= 1")

    @classmethod
    def rational(cls) -> "ScalarRing":
        return cls("Q")

    @classmethod
    def prime_field(cls, p: int) -> "ScalarRing":
        return cls("Fp", p, 1)

    @classmethod
    def padic(cls, p: int, k: int = DEFAULT_PRECISION) -> "ScalarRing":
        return cls("Zpk", p, k)

    @property
    def is_modular(self) -> bool:
        return self.kind != "Q"

    @property
    def modulus(self) -> int:
        if not self.is_modular:
            raise RingError("rational ring has no modulus")
        return self.p ** self.k

    @property
    def dtype(self):
        return np.int64 if self.is_modular else object

    def residue_field(self) -> "ScalarRing":
        return ScalarRing.prime_field(self.p)

    def with_precision(self, k: int) -> "ScalarRing":
        return ScalarRing.prime_field(self.p) if k == 1 and self.kind == "Fp" else ScalarRing("Zpk", self.p, k)

    def __str__(self):
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"F_{self.p}"
        return f"Z/{self.p}^{self.k}"

    # -- scalars --------------------------------------------------------------

    def scalar(self, x):
        """Canonical form of a Python int/Fraction in this ring."""
        if not self.is_modular:
            return Fraction(x)
        x = Fraction(x)
        m = self.modulus
        if x.denominator % self.p == 0:
            raise RingError(f"{x} has a denominator divisible by {self.p}")
        return x.numerator * pow(x.denominator, -1, m) % m

    def array(self, values) -> np.ndarray:
        if self.is_modular:
            arr = np.array([self.scalar(v) for v in values], dtype=np.int64)
            return arr
        return np.array([Fraction(v) for v in values], dtype=object)

    def zeros(self, n: int) -> np.ndarray:
        if self.is_modular:
            return np.zeros(n, dtype=np.int64)
        return np.array([Fraction(0)] * n, dtype=object)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.is_modular:
            return np.asarray(arr, dtype=np.int64) % self.modulus
        return np.array([Fraction(v) for v in np.ravel(arr)], dtype=object).reshape(np.shape(arr))

    def is_unit(self, x) -> bool:
        if self.is_modular:
            return int(x) % self.p != 0
        return x != 0

    def inverse(self, x):
        if self.is_modular:
            if not self.is_unit(x):
                raise RingError(f"{x} is not a unit in {self}")
            return pow(int(x), -1, self.modulus)
        if x == 0:
            raise RingError("division by zero")
        return 1 / Fraction(x)

    def valuation(self, x) -> int:
        """p-adic valuation of a residue, capped at k."""
        x = int(x) % self.modulus
        if x == 0:
            return self.k
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def show(self, x) -> str:
        if self.is_modular:
            x = int(x)
            m = self.modulus
            return str(x - m) if x > m // 2 else str(x)
        return str(x)
