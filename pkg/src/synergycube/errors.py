"""Exception types raised across the package.

Everything derives from SynergyError so callers can catch the package's
failures with one except clause. Configuration/input problems and
validation problems are distinct branches; the CLI maps them to distinct
exit codes.
"""


class SynergyError(Exception):
    """Base class for all errors raised by this package."""


# --- registry -------------------------------------------------------------

class DuplicateCode(SynergyError):
    def __init__(self, code, source=None):
        self.code = code
        self.source = source
        where = f" in {source}" if source else ""
        super().__init__(f"duplicate code {code!r}{where}")


class EmptyAxis(SynergyError):
    def __init__(self, source=None):
        self.source = source
        where = f" {source}" if source else ""
        super().__init__(f"category axis{where} has no codes")


class OrphanCode(SynergyError):
    def __init__(self, code, level):
        self.code = code
        self.level = level
        super().__init__(f"code {code!r} at level {level!r} has no parent")


class MultipleParents(SynergyError):
    def __init__(self, code, level=None):
        self.code = code
        self.level = level
        at = f" at level {level!r}" if level else ""
        super().__init__(f"code {code!r}{at} declared with more than one parent")


class LevelOrder(SynergyError):
    def __init__(self, from_level, to_level):
        self.from_level = from_level
        self.to_level = to_level
        super().__init__(
            f"cannot roll up from {from_level!r} to {to_level!r}: "
            "target must be the same level or coarser"
        )


class UnknownLevel(SynergyError):
    def __init__(self, level):
        self.level = level
        super().__init__(f"level {level!r} is not part of the hierarchy")


class InvalidHierarchy(SynergyError):
    """Structural violation: no single root, empty level, malformed file."""


# --- ingest ---------------------------------------------------------------

class UnknownCode(SynergyError):
    def __init__(self, row, axis, code):
        self.row = row
        self.axis = axis
        self.code = code
        super().__init__(f"row {row}: unknown {axis} code {code!r}")


class ParseError(SynergyError):
    def __init__(self, row, reason):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class AxisMismatch(SynergyError):
    """Two cubes do not share identical axes."""


class UnknownGroup(SynergyError):
    def __init__(self, group):
        self.group = group
        super().__init__(f"group {group!r} does not exist at the target level")


# --- metrics / decomposition ---------------------------------------------

class EmptyDistribution(SynergyError):
    """All weights are zero; entropy is undefined."""


class EmptyCube(SynergyError):
    """Cube contains no observations."""


class EmptySubset(SynergyError):
    """A share was requested over an empty group subset."""


# --- synthgen / report ----------------------------------------------------

class InvalidWeights(SynergyError):
    """Generator weights are negative, mis-sized, or do not sum to one."""


class ConfigConflict(SynergyError):
    """Contradictory options were supplied to an analysis run."""
