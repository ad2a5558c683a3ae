"""Unit conventions used across the package.

Angular frequencies are stored in rad/ns and times in ns (hbar = 1).
A frequency quoted as "2*pi x f MHz" is stored as 2*pi*f*1e-3 rad/ns; the
`*_over_2pi` helpers below convert between that convention and rad/ns so
that no 2*pi factor ever appears at a call site.
"""

import math

_MHZ = 2.0 * math.pi * 1e-3  # rad/ns per (MHz over 2*pi)
_GHZ = 2.0 * math.pi         # rad/ns per (GHz over 2*pi)


def from_mhz(f_over_2pi: float) -> float:
    """rad/ns from a frequency given as f in '2*pi x f MHz'."""
    return f_over_2pi * _MHZ


def to_mhz(omega: float) -> float:
    """Inverse of :func:`from_mhz`."""
    return omega / _MHZ


def from_ghz(f_over_2pi: float) -> float:
    """rad/ns from a frequency given as f in '2*pi x f GHz'."""
    return f_over_2pi * _GHZ


def to_ghz(omega: float) -> float:
    return omega / _GHZ


def from_us(t_us: float) -> float:
    """ns from microseconds (used for T1/T2 table entries)."""
    return t_us * 1e3
