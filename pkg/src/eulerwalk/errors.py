"""Exception hierarchy.

Validation problems derive from :class:`ValidationError` and numeric
breakdowns at a sample point derive from :class:`NumericError`; the CLI maps
the two families onto different exit codes.
"""


class EulerWalkError(Exception):
    pass


class ValidationError(EulerWalkError):
    pass


class DuplicateId(ValidationError):
    pass


class DanglingEndpoint(ValidationError):
    pass


class NotEulerian(ValidationError):
    def __init__(self, imbalance):
        # imbalance: {vertex: (in_count, out_count)}
        self.imbalance = dict(imbalance)
        detail = ", ".join(f"{v}: in={i} out={o}" for v, (i, o) in self.imbalance.items())
        super().__init__(f"graph is not Eulerian ({detail})")


class TailCountMismatch(ValidationError):
    pass


class SlotMismatch(ValidationError):
    pass


class NotUnitary(ValidationError):
    def __init__(self, vertex, defect):
        self.vertex = vertex
        self.defect = defect
        super().__init__(f"local matrix at vertex {vertex!r} is not unitary (defect {defect:.3e})")


class NotAnAutomorphism(ValidationError):
    pass


class BadTailIndex(ValidationError):
    pass


class NotAnInteriorEdge(ValidationError):
    pass


class NotTwoTailGraphs(ValidationError):
    pass


class TruncationTooShallow(ValidationError):
    pass


class NumericError(EulerWalkError):
    pass


class EigSolverFailure(NumericError):
    pass


class LeakyBoundState(NumericError):
    def __init__(self, leak):
        self.leak = leak
        super().__init__(f"unit-modulus eigenvector leaks onto outgoing tails (|Cv| = {leak:.3e})")


class NearSingularResolvent(NumericError):
    def __init__(self, z, sigma_min=None):
        self.z = z
        self.sigma_min = sigma_min
        super().__init__(f"resolvent is near-singular at z={z!r} (sigma_min={sigma_min})")


class HandleResonance(NumericError):
    def __init__(self, z):
        self.z = z
        super().__init__(f"1 - t(z) vanishes at z={z!r}")


class MultiHandleResonance(NumericError):
    def __init__(self, z):
        self.z = z
        super().__init__(f"multi-handle system is near-singular at z={z!r}")


class CutResonance(NumericError):
    def __init__(self, z):
        self.z = z
        super().__init__(f"cut-edge inversion is near-singular at z={z!r}")
