"""Term sequences a_1, a_2, ... and the family-spec grammar.

Families::

    constant:a=1/4
    osc31
    pq:p=11/50,q=6/25[,eps=1/50,gamma=3/5]
    eps:table=[1/3,1/15,...][,to_zero=1]
    table=[0.1,0.2,...]
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .numeric import Backend, Scalar, make, parse_scalar, quarter


class IndexOutOfRange(IndexError):
    pass


class NotEpsilonForm(ValueError):
    pass


class SpecError(ValueError):
    """A family spec string could not be parsed."""


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class TermSequence:
    backend: Backend = Backend.EXACT

    # Structural facts used by the certifiers. Finite prefixes never decide
    # these; the family does.
    oscillates_about_quarter = False

    @property
    def limit(self) -> Scalar | None:
        return None

    @property
    def length(self) -> int | None:
        return None

    def term(self, n: int) -> Scalar:
        if n < 1:
            raise IndexOutOfRange(f"terms are indexed from 1, got {n}")
        if self.length is not None and n > self.length:
            raise IndexOutOfRange(f"index {n} beyond table of length {self.length}")
        return self._term(n)

    def _term(self, n: int) -> Scalar:
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(TermSequence):
    a: Scalar = Fraction(1, 4)

    def __post_init__(self):
        object.__setattr__(self, "a", make(self.a, self.backend))
        if not self.a > 0:
            raise ValueError("constant sequence needs a > 0")

    @property
    def limit(self):
        return self.a

    def _term(self, n):
        return self.a

    def spec(self):
        return f"constant:a={_fmt(self.a)}"


@dataclass(frozen=True)
class OscExample31(TermSequence):
    """a_n = 1/4 + (-1)^n / (4(4n^2 - 1))."""

    oscillates_about_quarter = True

    @property
    def limit(self):
        return quarter(self.backend)

    def _term(self, n):
        if self.backend is Backend.EXACT:
            return Fraction(1, 4) + Fraction(_sign(n), 4 * (4 * n * n - 1))
        return 0.25 + _sign(n) / (4.0 * (4 * n * n - 1))

    def spec(self):
        return "osc31"


@dataclass(frozen=True)
class PQPeriodic(TermSequence):
    """a_{2k-1} = 1/4 - p, a_{2k} = 1/4 + q.

    ``eps`` and ``gamma`` optionally name the invariant interval used to
    certify the family (see :mod:`chainseq.pq_constructor`).
    """

    p: Scalar = Fraction(11, 50)
    q: Scalar = Fraction(6, 25)
    eps: Scalar | None = None
    gamma: Scalar | None = None

    oscillates_about_quarter = True

    def __post_init__(self):
        for name in ("p", "q", "eps", "gamma"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, make(v, self.backend))
        if not (self.p > 0 and self.q > 0):
            raise ValueError("pq family needs p > 0 and q > 0")
        if not self.p < quarter(self.backend):
            raise ValueError("pq family needs p < 1/4 so that a_odd = 1/4 - p > 0")

    def _term(self, n):
        qt = quarter(self.backend)
        return qt - self.p if n % 2 else qt + self.q

    def spec(self):
        s = f"pq:p={_fmt(self.p)},q={_fmt(self.q)}"
        if self.eps is not None and self.gamma is not None:
            s += f",eps={_fmt(self.eps)},gamma={_fmt(self.gamma)}"
        return s


@dataclass(frozen=True)
class EpsilonRule:
    """n -> eps_n, given either as a callable or as a finite table.

    ``tends_to_zero`` is the caller's claim; :meth:`spot_check` tests it.
    """

    rule: Callable[[int], Scalar] | None = None
    table: tuple | None = None
    tends_to_zero: bool = False
    strictly_positive: bool = False

    def __post_init__(self):
        if (self.rule is None) == (self.table is None):
            raise ValueError("give exactly one of rule= or table=")
        if self.table is not None:
            vals = tuple(self.table)
            object.__setattr__(self, "table", vals)
            if any(v < 0 for v in vals):
                raise ValueError("eps_n must be >= 0")

    @property
    def length(self) -> int | None:
        return None if self.table is None else len(self.table)

    def __call__(self, n: int) -> Scalar:
        if n < 1:
            raise IndexOutOfRange(f"eps is indexed from 1, got {n}")
        if self.table is not None:
            if n > len(self.table):
                raise IndexOutOfRange(f"index {n} beyond eps table of length {len(self.table)}")
            return self.table[n - 1]
        v = self.rule(n)
        if v < 0:
            raise ValueError(f"eps_{n} = {v} < 0")
        return v

    def spot_check(self) -> bool | None:
        """eps at n = 10^3, 10^4 must be below 1e-2 * eps_1 when flagged.

        Returns None when the rule is not long enough to check.
        """
        if not self.tends_to_zero:
            return None
        e1 = self(1)
        idx = [n for n in (10**3, 10**4) if self.length is None or n <= self.length]
        if not idx:
            return None
        return all(self(n) < Fraction(1, 100) * e1 for n in idx)


@dataclass(frozen=True)
class EpsilonForm(TermSequence):
    """a_n = (1 + (-1)^n eps_n) / 4."""

    eps: EpsilonRule = field(default_factory=lambda: EpsilonRule(table=()))

    @property
    def length(self):
        return self.eps.length

    @property
    def oscillates_about_quarter(self):
        return self.eps.strictly_positive and self.eps.length is None

    @property
    def limit(self):
        return quarter(self.backend) if self.eps.tends_to_zero else None

    def _term(self, n):
        e = make(self.eps(n), self.backend)
        return (1 + _sign(n) * e) / 4

    def spec(self):
        if self.eps.table is None:
            raise SpecError("closed-form eps rules have no spec string")
        body = ",".join(_fmt(make(v, self.backend)) for v in self.eps.table)
        s = f"eps:table=[{body}]"
        return s + (",to_zero=1" if self.eps.tends_to_zero else "")


@dataclass(frozen=True)
class UserTable(TermSequence):
    values: tuple = ()

    def __post_init__(self):
        vals = tuple(make(v, self.backend) for v in self.values)
        if not vals:
            raise ValueError("user table is empty")
        if any(not (0 < v < 1) for v in vals):
            raise ValueError("user table values must lie in (0, 1)")
        object.__setattr__(self, "values", vals)

    @property
    def length(self):
        return len(self.values)

    def _term(self, n):
        return self.values[n - 1]

    def spec(self):
        return "table=[" + ",".join(_fmt(v) for v in self.values) + "]"


def term(seq: TermSequence, n: int) -> Scalar:
    return seq.term(n)


def epsilon_of(seq: TermSequence, n: int) -> Scalar:
    """eps_n = (-1)^n (4 a_n - 1); raises NotEpsilonForm if negative."""
    e = _sign(n) * (4 * seq.term(n) - 1)
    if e < 0:
        raise NotEpsilonForm(f"a_{n} = {seq.term(n)} is on the wrong side of 1/4 for index parity")
    return e


def epsilon_rule_of(seq: TermSequence) -> EpsilonRule:
    """The eps-rule of a sequence, as a callable over its terms."""
    if isinstance(seq, EpsilonForm):
        return seq.eps
    tends = seq.limit is not None and seq.limit == quarter(seq.backend)
    if seq.length is not None:
        table = tuple(epsilon_of(seq, n) for n in range(1, seq.length + 1))
        return EpsilonRule(table=table, tends_to_zero=tends)
    return EpsilonRule(rule=lambda n: epsilon_of(seq, n), tends_to_zero=tends)


def from_epsilon(eps: EpsilonRule, backend: Backend = Backend.EXACT) -> EpsilonForm:
    return EpsilonForm(backend=backend, eps=eps)


def osc31_epsilon(backend: Backend = Backend.EXACT) -> EpsilonRule:
    """eps_n = 1 / (4n^2 - 1), the closed form behind :class:`OscExample31`."""
    if backend is Backend.EXACT:
        rule = lambda n: Fraction(1, 4 * n * n - 1)
    else:
        rule = lambda n: 1.0 / (4 * n * n - 1)
    return EpsilonRule(rule=rule, tends_to_zero=True, strictly_positive=True)


# -- spec grammar -----------------------------------------------------------

def _fmt(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x)


_LIST_RE = re.compile(r"^\[(.*)\]$", re.S)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SpecError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _kv(body: str, allowed: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in _split_top(body):
        if "=" not in item:
            raise SpecError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if k not in allowed:
            raise SpecError(f"unknown key {k!r} (allowed: {', '.join(allowed)})")
        out[k] = v.strip()
    return out


def _scalar(token: str, backend: Backend) -> Scalar:
    try:
        return parse_scalar(token, backend)
    except ValueError:
        raise SpecError(f"bad number {token!r}") from None


def _list(token: str, backend: Backend) -> tuple:
    m = _LIST_RE.match(token.strip())
    if not m:
        raise SpecError(f"expected [v1,v2,...], got {token!r}")
    items = [t.strip() for t in m.group(1).split(",") if t.strip()]
    return tuple(_scalar(t, backend) for t in items)


def _flag(token: str) -> bool:
    t = token.lower()
    if t in ("1", "true", "yes"):
        return True
    if t in ("0", "false", "no"):
        return False
    raise SpecError(f"bad flag {token!r}")


def parse_family(spec: str, backend: Backend = Backend.EXACT) -> TermSequence:
    s = spec.strip()
    if s.startswith("table="):
        vals = _list(s[len("table="):], backend)
        try:
            return UserTable(backend=backend, values=vals)
        except ValueError as e:
            raise SpecError(str(e)) from None
    name, _, body = s.partition(":")
    name = name.strip()
    try:
        if name == "osc31":
            if body.strip():
                raise SpecError("osc31 takes no parameters")
            return OscExample31(backend=backend)
        if name == "constant":
            kv = _kv(body, ["a"])
            if "a" not in kv:
                raise SpecError("constant needs a=")
            return Constant(backend=backend, a=_scalar(kv["a"], backend))
        if name == "pq":
            kv = _kv(body, ["p", "q", "eps", "gamma"])
            if "p" not in kv or "q" not in kv:
                raise SpecError("pq needs p= and q=")
            extra = {k: _scalar(kv[k], backend) for k in ("eps", "gamma") if k in kv}
            return PQPeriodic(backend=backend, p=_scalar(kv["p"], backend),
                              q=_scalar(kv["q"], backend), **extra)
        if name == "eps":
            kv = _kv(body, ["table", "to_zero"])
            if "table" not in kv:
                raise SpecError("eps needs table=[...]")
            vals = _list(kv["table"], backend)
            rule = EpsilonRule(table=vals, tends_to_zero=_flag(kv.get("to_zero", "0")))
            return EpsilonForm(backend=backend, eps=rule)
    except SpecError:
        raise
    except ValueError as e:
        raise SpecError(str(e)) from None
    raise SpecError(f"unknown family {name!r}")
