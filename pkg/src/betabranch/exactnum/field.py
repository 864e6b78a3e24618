"""Arithmetic in Q(q) for a single real algebraic generator q.

Elements are polynomials in q with rational coefficients, reduced modulo a
*working modulus*: initially the squarefree part of q's defining polynomial.
That polynomial may be reducible, in which case Q[x]/(modulus) has zero
divisors.  Whenever an inversion or a zero test meets a nontrivial gcd g with
the modulus, the modulus is replaced by whichever of g and modulus/g has q as
a root.  The modulus therefore only shrinks, and every value ever computed
stays valid, since reducing modulo a factor that vanishes at q preserves the
value at q.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

from betabranch.errors import IncompatibleGenerators
from betabranch.exactnum import qpoly
from betabranch.exactnum.algebraic import AlgebraicReal, Ordering, decimal_from_enclosure
from betabranch.exactnum.polynomial import IntPolynomial, format_poly


class QField:
    """The field generated over Q by one AlgebraicReal."""

    def __init__(self, root: AlgebraicReal):
        self.root = root
        self._lock = threading.RLock()
        self._mod = qpoly.monic(root.squarefree.to_qpoly())
        self.epoch = 0
        self._cache: dict[str, Any] = {}
        self._float_root = (None, None)

    # modulus management -------------------------------------------------------
    @property
    def modulus(self) -> IntPolynomial:
        return IntPolynomial.from_qpoly(self._mod).primitive()

    def reduce(self, p) -> tuple:
        mod = self._mod
        if len(p) < len(mod):
            return qpoly.trim(p)
        return qpoly.rem(p, mod)

    def _vanishes_at_root(self, g) -> bool:
        """Whether the factor g of the modulus has the generator as a root."""
        gi = IntPolynomial.from_qpoly(g)
        lo, hi = self.root.interval
        if lo == hi:
            return gi.sign_at(lo) == 0
        # roots of g are roots of the defining polynomial; (lo, hi) holds exactly one
        return gi.sign_at(lo) * gi.sign_at(hi) < 0

    def _split(self, g) -> bool:
        """Shrink the modulus using its nontrivial factor g; report g(q) == 0."""
        with self._lock:
            g = qpoly.gcd_(g, self._mod)
            if qpoly.degree(g) < 1:
                return False
            hit = self._vanishes_at_root(g)
            if hit:
                new = g
            else:
                new = qpoly.monic(qpoly.divmod_(self._mod, g)[0])
            if new != self._mod:
                self._mod = new
                self.epoch += 1
            return hit

    # exact predicates ----------------------------------------------------------
    def is_zero(self, p) -> bool:
        r = self.reduce(p)
        if not r:
            return True
        if len(r) == 1 or self._float_sign(r):
            return False
        g = qpoly.gcd_(r, self._mod)
        if qpoly.degree(g) < 1:
            return False
        return self._split(g)

    def inverse(self, p) -> tuple:
        while True:
            r = self.reduce(p)
            if not r:
                raise ZeroDivisionError("division by zero")
            g, s, _ = qpoly.xgcd(r, self._mod)
            if qpoly.degree(g) < 1:
                return self.reduce(s)
            if self._split(g):
                raise ZeroDivisionError("division by zero")

    def enclosure(self, p) -> tuple[Fraction, Fraction]:
        lo, hi = self.root.interval
        return qpoly.interval_eval(self.reduce(p), lo, hi)

    def _float_sign(self, r) -> int:
        """Sign from an outward-rounded float enclosure, or 0 if undecided."""
        iv = self.root.interval
        key, bounds = self._float_root
        if key != iv:
            bounds = (qpoly.float_bounds(iv[0]), qpoly.float_bounds(iv[1]))
            self._float_root = (iv, bounds)
        try:
            lo, hi = qpoly.float_interval_eval(r, *bounds)
        except OverflowError:
            return 0
        if lo > 0 and lo != math.inf:
            return 1
        if hi < 0 and hi != -math.inf:
            return -1
        return 0

    def sign(self, p) -> int:
        r = self.reduce(p)
        if not r:
            return 0
        if len(r) == 1:
            return 1 if r[0] > 0 else -1
        s = self._float_sign(r)
        if s:
            return s
        tested = False
        while True:
            lo, hi = self.enclosure(r)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if not tested:
                if self.is_zero(r):
                    return 0
                r = self.reduce(r)
                tested = True
            self.root.refine(8)
            s = self._float_sign(r)
            if s:
                return s

    # element construction ------------------------------------------------------
    def element(self, coeffs) -> "QFieldElement":
        return QFieldElement(self, self.reduce(qpoly.make(coeffs)))

    def __call__(self, value) -> "QFieldElement":
        if isinstance(value, QFieldElement):
            if value.field is not self:
                raise IncompatibleGenerators()
            return value
        if isinstance(value, (int, Fraction)):
            return QFieldElement(self, qpoly.make((value,)))
        if isinstance(value, IntPolynomial):
            return self.element(value.coeffs)
        if hasattr(value, "num") and hasattr(value, "den"):
            return self.element(value.num.coeffs) / self.element(value.den.coeffs)
        raise TypeError(f"cannot build a field element from {type(value).__name__}")

    @property
    def gen(self) -> "QFieldElement":
        return self.element((0, 1))

    def cached(self, key: str, build: Callable[[], Any]) -> Any:
        """Per-field memo for derived constants (region endpoints and such)."""
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    def __repr__(self):
        return f"QField({self.root!r})"


class QFieldElement:
    """Immutable element of a QField."""

    __slots__ = ("field", "rep")

    def __init__(self, field: QField, rep: tuple):
        self.field = field
        self.rep = rep

    def _other(self, other) -> Optional["QFieldElement"]:
        if isinstance(other, QFieldElement):
            if other.field is not self.field:
                raise IncompatibleGenerators()
            return other
        if isinstance(other, (int, Fraction)):
            return QFieldElement(self.field, qpoly.make((other,)))
        if isinstance(other, AlgebraicReal) and other is self.field.root:
            return self.field.gen
        return None

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QFieldElement(self.field, self.field.reduce(qpoly.add(self.rep, o.rep)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QFieldElement(self.field, self.field.reduce(qpoly.sub(self.rep, o.rep)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QFieldElement(self.field, qpoly.neg(self.rep))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QFieldElement(self.field, self.field.reduce(qpoly.mul(self.rep, o.rep)))

    __rmul__ = __mul__

    def inverse(self) -> "QFieldElement":
        return QFieldElement(self.field, self.field.inverse(self.rep))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QFieldElement(self.field, qpoly.ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.field.is_zero(self.rep)

    def sign(self) -> int:
        return self.field.sign(self.rep)

    def compare(self, other) -> Ordering:
        if isinstance(other, AlgebraicReal) and other is not self.field.root:
            if other != self.field.root:
                raise IncompatibleGenerators()
            other = self.field.root
        o = self._other(other)
        if o is None:
            raise TypeError(f"cannot compare QFieldElement with {type(other).__name__}")
        return Ordering((self - o).sign())

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.field.is_zero(qpoly.sub(self.rep, o.rep))

    __hash__ = None  # see ExactMemo for keyed lookup

    def __lt__(self, other):
        return self.compare(other) == Ordering.LESS

    def __le__(self, other):
        return self.compare(other) != Ordering.GREATER

    def __gt__(self, other):
        return self.compare(other) == Ordering.GREATER

    def __ge__(self, other):
        return self.compare(other) != Ordering.LESS

    # approximation -----------------------------------------------------------
    def enclosure(self, width: Optional[Fraction] = None) -> tuple[Fraction, Fraction]:
        """Rational interval containing the value, optionally narrower than `width`."""
        lo, hi = self.field.enclosure(self.rep)
        if width is None:
            return lo, hi
        while hi - lo > width:
            if self.field.root.is_rational:
                break
            self.field.root.refine(8)
            lo, hi = self.field.enclosure(self.rep)
        return lo, hi

    def decimal(self, digits: int = 5) -> str:
        return decimal_from_enclosure(
            lambda: self.field.enclosure(self.rep),
            lambda: self.field.root.refine(4),
            lambda t: self.field.is_zero(qpoly.sub(self.rep, (t,))),
            digits,
        )

    def __float__(self):
        lo, hi = self.enclosure(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def key(self) -> tuple:
        """Reduced coefficient tuple under the current modulus."""
        return self.field.reduce(self.rep)

    def to_rf_text(self) -> str:
        """Exact value as 'num_coeffs/den' in the ascending-coefficient format."""
        r = self.key()
        if not r:
            return "0/1"
        from math import lcm

        den = lcm(*(c.denominator for c in r))
        num = [int(c * den) for c in r]
        return ",".join(str(c) for c in num) + "/" + str(den)

    def __repr__(self):
        return f"QFieldElement({self})"

    def __str__(self):
        r = self.key()
        if not r:
            return "0"
        return format_poly(r, var="q")


class ExactMemo:
    """Dictionary keyed by field elements with exact equality semantics.

    Lookups first try the reduced coefficient tuple, then a bucket of elements
    with nearly equal numerical values, confirmed by an exact zero test.  This
    stays correct even while the field's working modulus is still reducible.
    """

    _BITS = 32

    def __init__(self, field: QField):
        self.field = field
        self._items: list[tuple[QFieldElement, Any]] = []
        self._by_key: dict[tuple, int] = {}
        self._buckets: dict[int, list[int]] = {}
        self._epoch = field.epoch

    def _bucket(self, x: QFieldElement) -> int:
        lo, hi = x.enclosure(Fraction(1, 2 ** (self._BITS + 8)))
        return int(((lo + hi) / 2) * 2**self._BITS // 1)

    def _rekey(self):
        if self._epoch != self.field.epoch:
            self._by_key = {x.key(): i for i, (x, _) in enumerate(self._items)}
            self._epoch = self.field.epoch

    def index(self, x: QFieldElement) -> Optional[int]:
        self._rekey()
        i = self._by_key.get(x.key())
        if i is not None:
            return i
        b = self._bucket(x)
        for bb in (b - 1, b, b + 1):
            for j in self._buckets.get(bb, ()):
                if self._items[j][0] == x:
                    return j
        return None

    def get(self, x: QFieldElement, default=None):
        i = self.index(x)
        return default if i is None else self._items[i][1]

    def __contains__(self, x: QFieldElement) -> bool:
        return self.index(x) is not None

    def __setitem__(self, x: QFieldElement, value):
        i = self.index(x)
        if i is not None:
            self._items[i] = (self._items[i][0], value)
            return
        self._items.append((x, value))
        i = len(self._items) - 1
        self._by_key[x.key()] = i
        self._buckets.setdefault(self._bucket(x), []).append(i)

    def __getitem__(self, x: QFieldElement):
        i = self.index(x)
        if i is None:
            raise KeyError(str(x))
        return self._items[i][1]

    def __len__(self):
        return len(self._items)

    def items(self) -> Iterator[tuple[QFieldElement, Any]]:
        return iter(list(self._items))
