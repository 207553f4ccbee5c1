"""Exception hierarchy. Every error carries the offending data as attributes."""


class StratError(Exception):
    """Base class for all input and validation errors."""


class DuplicateElement(StratError):
    pass


class UnknownElement(StratError):
    def __init__(self, element, where="poset"):
        super().__init__(f"unknown element {element!r} in {where}")
        self.element = element


class CycleDetected(StratError):
    def __init__(self, cycle):
        super().__init__(f"cover relation has a cycle through {cycle!r}")
        self.cycle = cycle


class RedundantCover(StratError):
    def __init__(self, a, b):
        super().__init__(f"cover ({a!r}, {b!r}) is implied by a longer path")
        self.pair = (a, b)


class NotMonotone(StratError):
    def __init__(self, a, b):
        super().__init__(f"map is not monotone on {a!r} <= {b!r}")
        self.pair = (a, b)


class NotDownwardClosed(StratError):
    def __init__(self, n, a, b):
        super().__init__(
            f"level {n} is not downward closed: {b!r} <= {a!r} but {b!r} is missing")
        self.level, self.a, self.b = n, a, b


class NotUpwardClosed(StratError):
    def __init__(self, a, b):
        super().__init__(f"not upward closed: {a!r} <= {b!r} but {b!r} is missing")
        self.a, self.b = a, b


class NotSubposet(StratError):
    pass


class MissingTransition(StratError):
    def __init__(self, cover):
        super().__init__(f"no transition map on cover {cover!r}")
        self.cover = cover


class MalformedMap(StratError):
    pass


class SheafConditionViolated(StratError):
    def __init__(self, open_set, reason):
        super().__init__(f"sheaf condition fails on {sorted(map(str, open_set))}: {reason}")
        self.open_set, self.reason = open_set, reason


class NotLeftFibration(StratError):
    def __init__(self, element, a, b, count):
        super().__init__(
            f"element {element!r} over {a!r} has {count} lifts over {b!r} (need exactly 1)")
        self.element, self.a, self.b, self.count = element, a, b, count


class AdjunctionViolation(StratError):
    def __init__(self, element, reason):
        super().__init__(f"adjunction fails at {element!r}: {reason}")
        self.element, self.reason = element, reason


class BaseMismatch(StratError):
    pass


class InvalidComparison(StratError):
    def __init__(self, level, element, reason):
        super().__init__(f"comparison {level} invalid at {element!r}: {reason}")
        self.level, self.element, self.reason = level, element, reason


class NotClosedUnderFaces(StratError):
    pass


class ApexCollision(StratError):
    pass


class IncompleteEnumeration(StratError):
    def __init__(self, vertex, edge):
        super().__init__(f"edge {sorted(edge)} at vertex {vertex!r} is missing from the enumeration")
        self.vertex, self.edge = vertex, edge


class MalformedSubdivision(StratError):
    pass


class SimplicialIdentityViolation(StratError):
    pass


class BoundTooLow(StratError):
    pass


class SpaceMismatch(StratError):
    pass


class MetricViolation(StratError):
    pass


class TooLarge(StratError):
    """An exhaustive enumeration would exceed its configured cap."""


class ValidationFailed(StratError):
    def __init__(self, artifact, reason):
        super().__init__(f"{artifact}: {reason}")
        self.artifact, self.reason = artifact, reason


class UnknownVerb(StratError):
    pass


class Unsupported(StratError):
    """The artifact has no rendering for the requested output."""
