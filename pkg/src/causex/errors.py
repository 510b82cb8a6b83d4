"""Exception hierarchy shared by every engine module."""


class CausexError(Exception):
    """Base class for all errors raised by causex."""


class ModelError(CausexError, ValueError):
    pass


class CyclicModel(ModelError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("endogenous dependency cycle: " + " -> ".join(self.cycle))


class PartialEquation(ModelError):
    pass


class RangeViolation(ModelError):
    pass


class DuplicateVariable(ModelError):
    pass


class UnknownVariable(ModelError):
    pass


class FormulaSyntaxError(CausexError, ValueError):
    def __init__(self, message, text="", pos=0, line=None):
        self.text = text
        self.pos = pos
        self.line = line
        where = f"line {line}, col {pos + 1}" if line is not None else f"position {pos}"
        super().__init__(f"{message} at {where}")


class DuplicateInterventionTarget(CausexError, ValueError):
    pass


class SearchBudgetExceeded(CausexError):
    def __init__(self, limit, visited):
        self.limit = limit
        self.visited = visited
        super().__init__(f"search budget of {limit} formula evaluations exhausted ({visited} visited)")


class EmptyEpistemicState(CausexError, ValueError):
    pass


class DisjunctiveCandidate(CausexError, ValueError):
    """Explanations and causes must be conjunctions of primitive events.

    To explain with "A or B", add a variable to the model whose value records
    the disjunction and use it as the candidate.
    """


class CoreNotExplanation(CausexError):
    def __init__(self, core, report):
        self.core = core
        self.report = report
        failing = [name for name in ("ex1", "ex2", "ex3", "ex4") if not getattr(report, name)]
        super().__init__("candidate is not an explanation on its partial core (fails "
                         + ", ".join(c.upper() for c in failing) + ")")


class ZeroProbabilityCandidate(CausexError, ValueError):
    pass


class InconsistentPrior(CausexError, ValueError):
    pass


class EmptyHypothesisSet(CausexError, ValueError):
    pass


class VariableMismatch(CausexError, ValueError):
    pass
