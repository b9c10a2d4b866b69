# src/core/exceptions.py
"""
Exception hierarchy shared by every app.

Management commands catch CycleWalkError and turn it into a CommandError, so
library code never has to know about exit codes.
"""


class CycleWalkError(Exception):
    """Base class for all sampler errors"""


class ConfigError(CycleWalkError):
    """Invalid or inconsistent run configuration"""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class GraphLoadError(CycleWalkError):
    """Malformed or invalid graph document"""

    def __init__(self, message, vertex=None, edge=None):
        self.vertex = vertex
        self.edge = edge
        where = ""
        if vertex is not None:
            where = f" (vertex {vertex})"
        elif edge is not None:
            where = f" (edge {edge[0]}-{edge[1]})"
        super().__init__(f"{message}{where}")


class ForestError(CycleWalkError):
    """Contract violation on the dynamic forest"""


class StateError(CycleWalkError):
    """Invalid partition state; carries the offending district"""

    def __init__(self, message, district=None):
        self.district = district
        prefix = f"district {district}: " if district is not None else ""
        super().__init__(f"{prefix}{message}")


class StateAuditError(StateError):
    """Incremental indexes disagree with a from-scratch recomputation"""

    def __init__(self, discrepancies):
        self.discrepancies = list(discrepancies)
        super().__init__("; ".join(self.discrepancies) or "audit failed")


class SeedingError(CycleWalkError):
    """No balanced initial plan found within the retry budget"""


class TreeCountError(CycleWalkError):
    """Matrix-Tree evaluation failed"""


class EnumerationGuardError(CycleWalkError):
    """Graph too large for exhaustive enumeration"""


class DiagnosticsError(CycleWalkError):
    """Inputs to a diagnostic are inconsistent or malformed"""
