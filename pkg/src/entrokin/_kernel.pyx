# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernel: Dormand-Prince 5(4) for the reduced flow.

Twin of ``_kernel_py``; see that module for the algorithm notes. Every
floating-point operation is kept in the same order as the Python twin and
the extension is built with -ffp-contract=off, so both backends produce
bit-identical trajectories.
"""

from libc.math cimport fabs, pow

BACKEND_NAME = "compiled"

OK = 0
BLOW_UP = 1
STEP_UNDERFLOW = 2

cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0, _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0, _E3 = -71.0 / 16695.0, _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0, _E6 = 22.0 / 525.0, _E7 = -1.0 / 40.0

cdef double _MIN_FACTOR = 0.2
cdef double _MAX_FACTOR = 5.0
cdef double _SAFETY = 0.9


def solve_reduced(double w, double jt_w3, double r, double kdrive,
                  double y0, double[::1] ts, double[::1] out,
                  double rtol, double atol, double max_step, double h0,
                  double y_limit):
    """Integrate the reduced flow over the fixed sample grid ``ts``.

    Fills ``out`` and returns ``(status, n_accepted, n_rejected, t_stop,
    y_stop)``; see the Python twin for the contract.
    """
    cdef Py_ssize_t n = ts.shape[0]
    cdef Py_ssize_t i
    cdef double y = y0
    cdef double t = ts[0]
    cdef double h = h0
    cdef long nacc = 0, nrej = 0
    cdef double tt, rem, hs, u, c, ynew, err, sc, enorm, fac, ay, aynew
    cdef double k1, k2, k3, k4, k5, k6, k7
    cdef bint clipped

    out[0] = y
    c = y / w
    k1 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * y

    for i in range(1, n):
        tt = ts[i]
        while t < tt:
            rem = tt - t
            if rem <= h * 1.0000000001:
                hs = rem
                clipped = True
            else:
                hs = h
                clipped = False

            u = y + hs * (_A21 * k1)
            c = u / w
            k2 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * u
            u = y + hs * (_A31 * k1 + _A32 * k2)
            c = u / w
            k3 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * u
            u = y + hs * (_A41 * k1 + _A42 * k2 + _A43 * k3)
            c = u / w
            k4 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * u
            u = y + hs * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4)
            c = u / w
            k5 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * u
            u = y + hs * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5)
            c = u / w
            k6 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * u
            ynew = y + hs * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
            c = ynew / w
            k7 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * ynew

            err = hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
            ay = fabs(y)
            aynew = fabs(ynew)
            sc = atol + rtol * (ay if ay > aynew else aynew)
            enorm = fabs(err) / sc

            if enorm <= 1.0:
                t = tt if clipped else t + hs
                y = ynew
                k1 = k7
                nacc += 1
                if fabs(y) > y_limit:
                    return BLOW_UP, nacc, nrej, t, y
                if enorm == 0.0:
                    fac = _MAX_FACTOR
                else:
                    fac = _SAFETY * pow(enorm, -0.2)
                    if fac > _MAX_FACTOR:
                        fac = _MAX_FACTOR
                    elif fac < _MIN_FACTOR:
                        fac = _MIN_FACTOR
                h = hs * fac
                if h > max_step:
                    h = max_step
            else:
                nrej += 1
                fac = _SAFETY * pow(enorm, -0.2)
                if fac < _MIN_FACTOR:
                    fac = _MIN_FACTOR
                elif fac > 1.0:
                    fac = 1.0
                h = hs * fac
                if h < 1e-14 * (t if t > 1.0 else 1.0):
                    return STEP_UNDERFLOW, nacc, nrej, t, y
        out[i] = y

    return OK, nacc, nrej, t, y
