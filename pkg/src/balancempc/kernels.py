"""Batched execution of one input over every randomness transcript.

Both backends take the per-bag outcomes of :func:`engine.weighing_outcomes`
and the index arrays of :class:`engine.RandomnessSpace`, and return, per
transcript, the view encoded as an integer and the raw protocol output.

A view ``(o_0, ..., o_{r-1})`` is encoded as ``sum((o_i + 1) * 4**i)``; the
zero digit never occurs inside a view, so the length is recoverable.

Set ``BALANCEMPC_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

from .apparatus import ScaleOutcome

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("BALANCEMPC_DISABLE_NUMBA", "").strip() in ("", "0")
BACKEND = "numba" if USE_NUMBA else "numpy"


def enumerate_views_numpy(base, perms, sides, accept, stop_on_accept):
    P, m = perms.shape
    F = sides.shape[0]
    if m == 0:
        return np.zeros(P * F, dtype=np.int64), np.zeros(P * F, dtype=np.uint8)
    ordered = base[perms].astype(np.int64)                      # (P, m)
    flipped = np.where(sides[None, :, :] != 0, 2 - ordered[:, None, :], ordered[:, None, :])
    outcomes = flipped.reshape(P * F, m)
    hits = outcomes == accept
    raw = hits.any(axis=1)
    digits = outcomes + 1
    if stop_on_accept:
        first = np.where(raw, hits.argmax(axis=1), m)
        digits = np.where(np.arange(m)[None, :] <= first[:, None], digits, 0)
    codes = digits @ (4 ** np.arange(m, dtype=np.int64))
    return codes, raw.astype(np.uint8)


if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def enumerate_views_numba(base, perms, sides, accept, stop_on_accept):
        P, m = perms.shape
        F = sides.shape[0]
        codes = np.zeros(P * F, dtype=np.int64)
        raw = np.zeros(P * F, dtype=np.uint8)
        for p in range(P):
            for f in range(F):
                t = p * F + f
                code = 0
                scale = 1
                hit = 0
                for i in range(m):
                    o = np.int64(base[perms[p, i]])
                    if sides[f, i] != 0:
                        o = 2 - o
                    code += (o + 1) * scale
                    scale *= 4
                    if o == accept:
                        hit = 1
                        if stop_on_accept:
                            break
                codes[t] = code
                raw[t] = hit
        return codes, raw

else:  # pragma: no cover
    enumerate_views_numba = None


def enumerate_views(base, perms, sides, accept, stop_on_accept):
    """Dispatch to the selected backend; arguments are normalised first."""
    base = np.ascontiguousarray(base, dtype=np.int8)
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    sides = np.ascontiguousarray(sides, dtype=np.int8)
    fn = enumerate_views_numba if USE_NUMBA else enumerate_views_numpy
    return fn(base, perms, sides, int(accept), bool(stop_on_accept))


def decode_view(code: int) -> tuple[ScaleOutcome, ...]:
    out = []
    code = int(code)
    while code:
        code, digit = divmod(code, 4)
        out.append(ScaleOutcome(digit - 1))
    return tuple(out)


def encode_view(view) -> int:
    return sum((int(o) + 1) * 4**i for i, o in enumerate(view))
