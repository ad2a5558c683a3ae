"""Optional numba-compiled inner loops for the density-matrix integrator.

The serial kernel is bitwise deterministic. dynamics falls back to a
scipy/numpy implementation when numba is unavailable (or when
LMGSIM_NO_NUMBA is set), so this module must stay import-safe.
"""

from __future__ import annotations

import os

import numpy as np

HAVE_NUMBA = False

if not os.environ.get("LMGSIM_NO_NUMBA"):
    try:
        from numba import njit

        @njit(cache=True)
        def lindblad_rhs(indptr, indices, data, rho, srows, scols, sweights,
                         sptr, out):
            """out = -i(A rho - (A rho)^H) + sum_k L_k rho L_k^H.

            A is CSR (indptr/indices/data); the collapse operators are flat
            coordinate lists (srows/scols/sweights) segmented by sptr.
            Relies on rho being Hermitian, which the Lindblad flow preserves.
            """
            n = indptr.shape[0] - 1
            g = np.zeros((n, n), dtype=np.complex128)
            for i in range(n):
                for p in range(indptr[i], indptr[i + 1]):
                    a = data[p]
                    j = indices[p]
                    for k in range(n):
                        g[i, k] += a * rho[j, k]
            for i in range(n):
                for k in range(n):
                    out[i, k] = -1j * (g[i, k] - np.conj(g[k, i]))
            for q in range(sptr.shape[0] - 1):
                lo, hi = sptr[q], sptr[q + 1]
                for ii in range(lo, hi):
                    r_ii = srows[ii]
                    c_ii = scols[ii]
                    w_ii = sweights[ii]
                    for jj in range(lo, hi):
                        out[r_ii, srows[jj]] += (w_ii * np.conj(sweights[jj])) \
                            * rho[c_ii, scols[jj]]

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via LMGSIM_NO_NUMBA
        pass
