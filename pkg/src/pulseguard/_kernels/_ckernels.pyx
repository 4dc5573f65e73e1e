# cython: language_level=3
"""Compiled lane for the SU(2) window product.

Same contract as _pykernels.su2_window, computed as one sequential C loop
over samples with the running 2x2 product kept in registers.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()


def su2_window(const double complex[::1] weights, double rabi_dt, double detune_angle):
    cdef Py_ssize_t n = weights.shape[0]
    cdef double complex u00 = 1.0, u01 = 0.0, u10 = 0.0, u11 = 0.0
    u11 = 1.0

    cdef double half = 0.5 * detune_angle
    cdef double c = -half
    cdef double complex em = cos(half) - 1j * sin(half)
    cdef double complex ep = cos(half) + 1j * sin(half)

    cdef double a, b, r, s, cr
    cdef double complex wk, v00, v01, v10, v11, t00, t01, t10, t11
    cdef Py_ssize_t k

    for k in range(n):
        wk = weights[k]
        a = 0.5 * rabi_dt * wk.real
        b = 0.5 * rabi_dt * wk.imag
        r = sqrt(a * a + b * b + c * c)
        if r == 0.0:
            s = 1.0
        else:
            s = sin(r) / r
        cr = cos(r)

        v00 = (cr - 1j * (s * c)) * em
        v01 = (-(s * b) - 1j * (s * a)) * em
        v10 = ((s * b) - 1j * (s * a)) * ep
        v11 = (cr + 1j * (s * c)) * ep

        t00 = v00 * u00 + v01 * u10
        t01 = v00 * u01 + v01 * u11
        t10 = v10 * u00 + v11 * u10
        t11 = v10 * u01 + v11 * u11
        u00 = t00
        u01 = t01
        u10 = t10
        u11 = t11

    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = u00
    out[0, 1] = u01
    out[1, 0] = u10
    out[1, 1] = u11
    return out
