"""Exception hierarchy shared by all modules."""


class PhyloError(Exception):
    """Base class for every error raised by this package."""


class NotTree(PhyloError):
    pass


class DegreeTwoVertex(PhyloError):
    pass


class LeafLabelMismatch(PhyloError):
    pass


class TooManyLeaves(PhyloError):
    pass


class ParseError(PhyloError):
    pass


class UnknownTaxon(PhyloError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SubsetTooSmall(PhyloError):
    pass


class ConstraintConflict(PhyloError):
    """Two different topologies were given for the same 4-subset."""


class UnrealizableBranch(PhyloError):
    pass


class TriggerMismatch(PhyloError):
    pass


class SpaceTooLarge(PhyloError):
    pass


class UnresolvedQuartetQuery(PhyloError):
    pass


class IndexOutOfRange(PhyloError, IndexError):
    pass
