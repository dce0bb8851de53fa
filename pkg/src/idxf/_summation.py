"""Vectorized Neumaier (improved Kahan) summation for complex arrays."""

from __future__ import annotations

import numpy as np


def _two_sum(s, c, t):
    big = np.abs(s) >= np.abs(t)
    u = s + t
    c = c + np.where(big, (s - u) + t, (t - u) + s)
    return u, c


class CompensatedSum:
    """Running compensated sum over arrays of a fixed shape."""

    def __init__(self, shape=()):
        self._re = np.zeros(shape)
        self._im = np.zeros(shape)
        self._cre = np.zeros(shape)
        self._cim = np.zeros(shape)

    def add(self, term, mask=None) -> None:
        term = np.asarray(term, dtype=complex)
        if mask is not None:
            term = np.where(mask, term, 0.0)
        self._re, self._cre = _two_sum(self._re, self._cre, term.real)
        self._im, self._cim = _two_sum(self._im, self._cim, term.imag)

    @property
    def value(self) -> np.ndarray:
        return (self._re + self._cre) + 1j * (self._im + self._cim)
