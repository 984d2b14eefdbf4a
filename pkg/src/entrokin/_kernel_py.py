"""Pure-Python stepping kernel: Dormand-Prince 5(4) for the reduced flow.

This is the fallback twin of the Cython extension ``_kernel``. The two
implementations keep every floating-point operation in the same order (and
the extension is compiled with FMA contraction disabled), so their outputs
are expected to agree bit for bit.

The right-hand side is evaluated in the factored form

    rhs(y) = Jt*w^3 * (c - 1) * (c^2 + c - r) - kdrive*y,   c = y/w

with r = Vt/Jt and kdrive = 0.25*Kt*w^2. The factoring makes the thermal
point y = w an exact fixed point of the drive-free flow in floating-point
arithmetic, so undriven runs started there stay put bit-exactly.
"""

from __future__ import annotations

BACKEND_NAME = "python"

# status codes shared with the compiled kernel
OK = 0
BLOW_UP = 1
STEP_UNDERFLOW = 2

# Dormand-Prince 5(4) tableau (FSAL: stage 7 is reused as stage 1)
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# error coefficients: 5th-order weights minus the embedded 4th-order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


def solve_reduced(w, jt_w3, r, kdrive, y0, ts, out, rtol, atol, max_step, h0, y_limit):
    """Integrate the reduced flow over the fixed sample grid ``ts``.

    Fills ``out`` (same length as ``ts``, with ``ts[0]`` the initial time)
    and returns ``(status, n_accepted, n_rejected, t_stop, y_stop)``.
    Steps are clipped so every sample time is hit exactly.
    """
    n = len(ts)
    y = float(y0)
    t = float(ts[0])
    out[0] = y
    h = float(h0)
    nacc = 0
    nrej = 0

    c = y / w
    k1 = jt_w3 * ((c - 1.0) * (c * c + c - r)) - kdrive * y

    for i in range(1, n):
        tt = float(ts[i])
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
            ay = abs(y)
            aynew = abs(ynew)
            sc = atol + rtol * (ay if ay > aynew else aynew)
            enorm = abs(err) / sc

            if enorm <= 1.0:
                t = tt if clipped else t + hs
                y = ynew
                k1 = k7
                nacc += 1
                if abs(y) > y_limit:
                    return BLOW_UP, nacc, nrej, t, y
                if enorm == 0.0:
                    fac = _MAX_FACTOR
                else:
                    fac = _SAFETY * enorm ** -0.2
                    if fac > _MAX_FACTOR:
                        fac = _MAX_FACTOR
                    elif fac < _MIN_FACTOR:
                        fac = _MIN_FACTOR
                h = hs * fac
                if h > max_step:
                    h = max_step
            else:
                nrej += 1
                fac = _SAFETY * enorm ** -0.2
                if fac < _MIN_FACTOR:
                    fac = _MIN_FACTOR
                elif fac > 1.0:
                    fac = 1.0
                h = hs * fac
                if h < 1e-14 * (t if t > 1.0 else 1.0):
                    return STEP_UNDERFLOW, nacc, nrej, t, y
        out[i] = y

    return OK, nacc, nrej, t, y
