"""Canonical string labels for hashable values.

Element ids are opaque; labels are used only to order output
deterministically and to serialize structured ids (tuples, frozensets).
"""

from fractions import Fraction


def label(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, tuple):
        return "(" + ",".join(label(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(label(y) for y in x)) + "}"
    return repr(x)


def sort_key(x):
    # ints sort numerically so that "10" does not land before "2"
    if isinstance(x, int) and not isinstance(x, bool):
        return (0, x, "")
    if isinstance(x, str) and x.isdigit():
        return (0, int(x), x)
    if isinstance(x, (tuple, frozenset)):
        return (1, 0, label(x))
    return (1, 0, label(x))


def ordered(xs):
    return sorted(xs, key=sort_key)


def frac_str(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"rationals must be strings 'p/q' or integers, got {s!r}")
