"""Entanglement of Gaussian-windowed detector pairs in vacuum, thermal and de Sitter fields."""
from .errors import (AccuracyError, AsymptoticBreakdownError, DegenerateExpansionError, DomainError,
                     GuardError, IndeterminateError, PoleCrossingError, SingularityError,
                     TopologyError, UdwError)
from .kernels import KernelInput, ScenarioSpec
from .observables import (DetectorParams, ObservableResult, closed_form_A0, closed_form_X0,
                          exchange_amplitude, negativity, observe, response_probability)
from .quadrature import QuadratureSpec
from .scaled import ScaledComplex
from .threshold import (ThresholdCurve, classify, critical_frequencies, subset_check,
                        trace_curve)

__version__ = "0.1.0"
