""" exception hierarchy shared by the crypto layer, the protocol roles and
the simulator """


class SecureAggError(Exception):
    pass


class ParameterError(SecureAggError, ValueError):
    """ a violated precondition on an argument or a configuration value """


class ConfigurationError(ParameterError):
    """ bad scenario / deployment record. the message names the field """
    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super(ConfigurationError, self).__init__(
            "field '{}': {}".format(field, reason))

    def __reduce__(self):
        # joblib workers send exceptions back pickled
        return ConfigurationError, (self.field, self.reason)


# numeric
class NonInvertible(SecureAggError, ArithmeticError):
    pass


# elliptic curve group
class CurveValidationError(ParameterError):
    pass


class FieldNotPrime(CurveValidationError):
    pass


class UnsupportedFieldRepresentation(CurveValidationError):
    pass


class SingularCurve(CurveValidationError):
    pass


class BasePointOffCurve(CurveValidationError):
    pass


class CompositeOrder(CurveValidationError):
    pass


class BadBasePointOrder(CurveValidationError):
    pass


class BadCofactor(CurveValidationError):
    pass


class PointNotOnCurve(ParameterError):
    pass


class InfinityHasNoX(SecureAggError, ArithmeticError):
    pass


# okamoto-uchiyama
class PlaintextOutOfRange(ParameterError):
    pass


class MalformedCiphertext(SecureAggError):
    pass


# aggregate signatures. all of these abort the current epoch
class DegenerateOutcome(SecureAggError):
    pass


class DegenerateSignature(DegenerateOutcome):
    pass


class DegenerateAggregate(DegenerateOutcome):
    pass


class DegenerateKeySum(DegenerateOutcome):
    pass


# protocol
class ProtocolError(SecureAggError):
    pass


class RoleError(ProtocolError):
    pass


class ReadingOutOfRange(ProtocolError):
    pass


class EpochAbort(ProtocolError):
    """ the epoch nonce produced a degenerate value, a fresh one is needed """


class EpochMismatch(ProtocolError):
    pass


class DuplicateContributor(ProtocolError):
    pass


class CapacityExceeded(ProtocolError):
    pass


class UnknownContributor(ProtocolError):
    pass


# wire codec
class DecodeError(ProtocolError):
    pass


class Truncated(DecodeError):
    pass


class UnsupportedVersion(DecodeError):
    pass


class InvalidPoint(DecodeError):
    pass


class InvalidCiphertext(DecodeError):
    pass


class MalformedMessage(DecodeError):
    pass
