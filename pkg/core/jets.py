"""Jet variables and the variable universe of a session.

A jet variable is the symbol d^k v of a differential indeterminate v.  The
indeterminates are the coordinates x_1..x_n of the curve plus auxiliary
symbols (the scale g, the test function y, the bracket symbols s and r_i,
the relation symbols t_j).
"""

import re
from typing import FrozenSet, Iterable, NamedTuple, Optional, Tuple

COORDINATE = "x"

# Names the expression language resolves without an explicit declaration.
DEFAULT_AUXILIARIES: Tuple[str, ...] = ("g", "s", "y", "t", "r")

_NAME_PATTERN = re.compile(r"^([A-Za-z]+?)(\d*)$")


class VarKey(NamedTuple):
    """d^order applied to the indeterminate (base, index).

    Unnumbered auxiliaries such as g use index 0.  Tuple ordering gives the
    total order on variables used by the monomial order.
    """
    base: str
    index: int
    order: int

    def raised(self, k: int = 1) -> "VarKey":
        """Return d^k of this variable."""
        return VarKey(self.base, self.index, self.order + k)

    def at_order(self, order: int) -> "VarKey":
        return VarKey(self.base, self.index, order)

    @property
    def symbol(self) -> str:
        """Name of the underlying indeterminate, e.g. 'x1', 'g', 't2'."""
        return f"{self.base}{self.index}" if self.index else self.base

    def is_coordinate(self) -> bool:
        return self.base == COORDINATE

    def __str__(self) -> str:
        if self.order == 0:
            return self.symbol
        if self.order == 1:
            return f"D({self.symbol})"
        return f"D({self.symbol},{self.order})"


def x(i: int, k: int = 0) -> VarKey:
    """Jet variable d^k x_i."""
    if i < 1:
        raise ValueError(f"coordinate index must be positive, got {i}")
    if k < 0:
        raise ValueError(f"derivative order must be nonnegative, got {k}")
    return VarKey(COORDINATE, i, k)


def aux(name: str, k: int = 0) -> VarKey:
    """Jet variable d^k of an auxiliary indeterminate named like 'g' or 't1'."""
    base, index = split_symbol(name)
    if base == COORDINATE:
        raise ValueError("use x() for coordinate variables")
    return VarKey(base, index, k)


def split_symbol(name: str) -> Tuple[str, int]:
    """Split 't12' into ('t', 12) and 'g' into ('g', 0)."""
    match = _NAME_PATTERN.match(name)
    if not match:
        raise ValueError(f"not a variable name: {name!r}")
    base, digits = match.groups()
    return base, int(digits) if digits else 0


def display_key(key: VarKey) -> Tuple[int, str, int]:
    """Factor order inside a printed monomial: lower jets first."""
    return (key.order, key.base, key.index)


class JetSpace:
    """Declared variable universe: dimension n and auxiliary symbol bases.

    Jet orders are unbounded; only the set of indeterminates is fixed.
    """

    def __init__(self, n: int, auxiliaries: Iterable[str] = DEFAULT_AUXILIARIES):
        if n < 1:
            raise ValueError(f"dimension must be at least 1, got {n}")
        self.n = n
        self.auxiliaries: FrozenSet[str] = frozenset(auxiliaries)

    def __repr__(self) -> str:
        return f"JetSpace(n={self.n}, auxiliaries={sorted(self.auxiliaries)})"

    def contains(self, key: VarKey) -> bool:
        if key.is_coordinate():
            return 1 <= key.index <= self.n
        return key.base in self.auxiliaries

    def resolve(self, name: str) -> Optional[VarKey]:
        """Map a scalar name to its base variable, or None when undeclared."""
        try:
            base, index = split_symbol(name)
        except ValueError:
            return None
        if base == COORDINATE and index == 0:
            return None
        key = VarKey(base, index, 0)
        return key if self.contains(key) else None

    def coordinates(self, order: int = 0) -> Tuple[VarKey, ...]:
        """The jet vector d^order x as a tuple of variables."""
        return tuple(x(i, order) for i in range(1, self.n + 1))

    def validate(self, keys: Iterable[VarKey]) -> None:
        """Raise ValueError for variables outside the universe."""
        for key in keys:
            if not self.contains(key):
                if key.is_coordinate():
                    raise ValueError(
                        f"dimension mismatch: {key.symbol} used in a space of dimension {self.n}")
                raise ValueError(f"unknown variable: {key.symbol}")
