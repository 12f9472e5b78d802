"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures without
inspecting types: 2 for input/usage problems, 3 for numerical failures.
"""


class GSEError(Exception):
    exit_code = 3


class InputError(GSEError):
    exit_code = 2


class EmptyGraph(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class SelfLoop(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class UnknownNode(InputError):
    pass


class UnknownEdge(InputError):
    pass


class InvalidCounts(InputError):
    pass


class EmptyFailureSet(InputError):
    pass


class NumericalError(GSEError):
    exit_code = 3


class IsolatedNode(NumericalError):
    pass


class ZeroCentralityEdge(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class NearSingularPencil(NumericalError):
    pass


class AllValuesBelowFloor(NumericalError):
    pass


class ZeroSignal(NumericalError):
    pass


class DisconnectedJointGraph(NumericalError):
    pass


class DisconnectedSimilarityGraph(NumericalError):
    pass


class DegenerateClustering(NumericalError):
    pass
