'''Exception types raised by the otcapp library and mapped to exit codes by otcapp.py'''


class OtcError(Exception):
    '''Base class of every otcapp failure'''


class NotHermitian(OtcError, ValueError):
    pass


class NotUnitary(OtcError, ValueError):
    pass


class Singular(OtcError, ArithmeticError):
    pass


class DimensionMismatch(OtcError, ValueError):
    pass


class LabelOutOfRange(OtcError, ValueError):
    pass


class AncillaBudgetExceeded(OtcError, ValueError):
    pass


class WrongMode(OtcError, ValueError):
    pass


class UnsupportedCavitySize(OtcError, ValueError):
    pass


class UnsupportedQ(OtcError, ValueError):
    pass


class EmptyEnsemble(OtcError, ValueError):
    pass


class StepTooLarge(OtcError, ValueError):
    pass


class ZeroDenominator(OtcError, ArithmeticError):
    pass


class AllBatchesDegenerate(OtcError, ArithmeticError):
    pass


class RegisterTooLarge(OtcError, ValueError):
    pass


class ConfigInvalid(OtcError, ValueError):
    pass


class ToleranceFailure(OtcError):
    '''A post-run self-check found a state outside its numerical tolerance'''
