"""
This module contains the exceptions raised by the simulator.
"""

from django.utils.encoding import force_text
from rest_framework.exceptions import APIException


class HspError(APIException):
    """
    Base exception. `default_detail` is formatted with the keyword arguments
    given to the constructor unless an explicit `detail` is passed.
    """
    status_code = 422
    default_detail = 'Hidden subgroup simulator error.'
    default_code = 'error'

    def __init__(self, detail=None, code=None, **context):
        if detail is None:
            detail = force_text(self.default_detail).format(**context)
        if code is None:
            code = self.default_code
        self.context = context
        super(HspError, self).__init__(detail, code)


class FieldError(HspError):
    """
    Exception to raise when field parameters are invalid.
    """
    default_detail = 'Cannot build F_{p}^{r}: {reason}.'
    default_code = 'invalid_field'


class ZeroDivisionInField(HspError):
    """
    Exception to raise when zero is inverted.
    """
    default_detail = 'Zero has no inverse in F_{q}.'
    default_code = 'zero_division'


class NotAnNthPower(HspError):
    """
    Exception to raise when an n-th root is required but does not exist.
    """
    default_detail = 'Element {value} is not a {n}-th power in F_{q}.'
    default_code = 'not_nth_power'


class SingularMatrix(HspError):
    """
    Exception to raise when an invertible matrix is required.
    """
    default_detail = 'Matrix is singular; "{action}" needs an invertible one.'
    default_code = 'singular'


class DimensionMismatch(HspError):
    """
    Exception to raise when operands have incompatible shapes.
    """
    default_detail = 'Incompatible shapes {left} and {right} for "{action}".'
    default_code = 'dimension_mismatch'


class CapExceeded(HspError):
    """
    Exception to raise when an enumeration or table would exceed its cap.
    """
    default_detail = '"{action}" needs {size} items, above the cap of {cap}.'
    default_code = 'cap_exceeded'


class OutsideDomain(HspError):
    """
    Exception to raise when an oracle is queried outside its group.
    """
    default_detail = 'Oracle input is outside its domain: {reason}.'
    default_code = 'outside_domain'


class RoundBudgetExhausted(HspError):
    """
    Exception to raise when the solver runs out of guess rounds on a level.
    """
    default_detail = 'No verified guess after {rounds} rounds at degree {n}.'
    default_code = 'round_budget_exhausted'
