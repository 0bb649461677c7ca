"""N-adic interval dynamics on X = [0, 1).

The expanding map x -> N*x mod 1, its N inverse branches
(x + j)/N, and the digit-word bookkeeping that ties nonnegative
integers (base-N expansion, least significant digit first) and
negative integers (modular complement) to branch compositions and
to N-adic subintervals.

Everything here is pure arithmetic and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DigitOutOfRange, EmptyWord


def frac(x: float) -> float:
    """Fractional part in [0, 1); the endpoint 1 is identified with 0."""
    r = x % 1.0
    return r if r < 1.0 else 0.0


@dataclass(frozen=True)
class DigitWord:
    """A finite word (i_1, ..., i_n) of base-N digits.

    The first entry is the least significant digit of the integer the
    word encodes, and the first branch applied when the word drives a
    composition of inverse branches.
    """

    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for d in self.digits:
            if d < 0:
                raise DigitOutOfRange(f"negative digit {d}")

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __bool__(self) -> bool:
        return bool(self.digits)

    def extended(self, j: int) -> "DigitWord":
        """Append one digit."""
        return DigitWord(self.digits + (j,))

    def to_json(self) -> list[int]:
        """JSON form: plain array, least significant digit first."""
        return list(self.digits)


@dataclass(frozen=True)
class PathSystem:
    """The branch system at a fixed integer scale N >= 2."""

    scale_n: int = 2

    def __post_init__(self) -> None:
        if self.scale_n < 2:
            raise ValueError(f"scale must be >= 2, got {self.scale_n}")

    def shift(self, x: float) -> float:
        """The expanding map N*x mod 1."""
        return frac(self.scale_n * frac(x))

    def branch(self, j: int, x: float) -> float:
        """Inverse branch (x + j)/N, the j-th right inverse of the shift."""
        self._check_digit(j)
        return (x + j) / self.scale_n

    def digits_of(self, k: int) -> DigitWord:
        """Base-N digits of k >= 0, least significant first; empty word for 0."""
        if k < 0:
            raise ValueError(f"digits_of needs k >= 0, got {k}")
        digits = []
        while k:
            k, d = divmod(k, self.scale_n)
            digits.append(d)
        return DigitWord(tuple(digits))

    def word_of_int(self, k: int) -> DigitWord:
        """Digit word addressing the integer k, negative values included.

        For k < 0 the word encodes N**(n+1) + k where n is the least
        integer with N**n >= -k; the result has length n + 1 and its
        last digit is N - 1, i.e. it is the shortest prefix of the
        N-adic expansion of k that pins the value mod N**(n+1).
        """
        if k >= 0:
            return self.digits_of(k)
        n = 0
        while self.scale_n**n < -k:
            n += 1
        return self.digits_of(self.scale_n ** (n + 1) + k)

    def word_to_int(self, word: DigitWord) -> int:
        """Inverse of digits_of: i_1 + i_2*N + ... + i_n*N**(n-1)."""
        k = 0
        for d in reversed(word.digits):
            self._check_digit(d)
            k = k * self.scale_n + d
        return k

    def apply_word(self, word: DigitWord, x: float) -> float:
        """Compose branches along the word: branch(i_n) o ... o branch(i_1).

        Equals (x + word_to_int(word)) / N**len(word).
        """
        y = x
        for d in word:
            y = self.branch(d, y)
        return y

    def word_interval(self, word: DigitWord) -> tuple[float, float]:
        """The N-adic interval [i_1/N + ... + i_n/N**n, same + 1/N**n).

        This is the image of X under branch(i_1) o ... o branch(i_2) o
        branch(i_n) applied in the written order, i.e. the interval the
        cylinder with this prefix corresponds to.
        """
        if not word:
            raise EmptyWord("word_interval needs a nonempty word")
        left = 0.0
        scale = 1.0
        for d in word:
            self._check_digit(d)
            scale /= self.scale_n
            left += d * scale
        return (left, left + scale)

    def _check_digit(self, j: int) -> None:
        if not 0 <= j < self.scale_n:
            raise DigitOutOfRange(f"digit {j} not in [0, {self.scale_n})")
