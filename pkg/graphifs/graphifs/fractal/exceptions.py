class IfsError(Exception):
    pass


class IfsInputError(IfsError):
    pass


class SolverError(IfsError):
    pass


class CertificationError(IfsError):
    pass


# Parameters and documents

class NonRationalParameter(IfsInputError):
    pass


class DocumentError(IfsInputError):
    pass


class RatioOutOfRange(IfsInputError):
    pass


class ReflectionNotSupported(IfsInputError):
    pass


class NonPositiveParameter(IfsInputError):
    pass


class SumNotOne(IfsInputError):
    pass


# Graph structure

class EmptyEdgeList(IfsInputError):
    pass


class DuplicateEdgeId(IfsInputError):
    pass


class UnknownVertex(IfsInputError):
    pass


class NotStronglyConnected(IfsInputError):
    pass


class OutDegreeTooSmall(IfsInputError):
    pass


class DegenerateHull(IfsInputError):
    pass


class PathNotComposable(IfsInputError):
    pass


class SameEndpoints(IfsInputError):
    pass


class InvalidDepth(IfsInputError):
    pass


class CsscViolated(IfsInputError):
    pass


class NotCanonicalFamily(IfsInputError):
    pass


class NotOneVertex(IfsInputError):
    pass


# Intervals and measures

class InvalidInterval(IfsInputError):
    pass


class IntervalOutsideHull(IfsInputError):
    pass


class ZeroLengthInterval(IfsInputError):
    pass


class SamePath(IfsInputError):
    pass


class DimensionAtOne(IfsInputError):
    pass


class InvalidTolerance(IfsInputError):
    pass


# Gap algebra

class NonPositive(IfsInputError):
    pass


class ContainsOne(IfsInputError):
    pass


class PrimeFactorTooLarge(IfsInputError):
    pass


class GeneratorNotContracting(IfsInputError):
    pass


class BdMismatch(IfsInputError):
    pass


# Rendering

class LevelTooDeep(IfsInputError):
    pass


# Solver

class BracketFailure(SolverError):
    pass


class NotAtEigenvalueOne(SolverError):
    pass


# Certification

class NotCertified(CertificationError):
    pass
