"""Compiled batch kernel behind class_numbers.h_star_range.

Module-level njit functions so numba's on-disk cache applies; importing this
module pays the compile cost once per machine, not once per process.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _isqrt64(n):
    if n < 0:
        return -1
    x = int(np.sqrt(n))
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


@numba.njit(cache=True)
def h_star_many(ts, primes):
    out = np.zeros(len(ts), dtype=np.int64)
    cap = 4096
    fa = np.empty(cap, dtype=np.int64)
    fb = np.empty(cap, dtype=np.int64)
    divbuf = np.empty(4096, dtype=np.int64)
    for it in range(len(ts)):
        t = ts[it]
        D = t * t - 4
        w = _isqrt64(D)
        nf = 0
        b0 = 2 - (D & 1)
        for b in range(b0, w + 1, 2):
            m = (D - b * b) // 4
            lo = (w - b) // 2
            if lo < 1:
                lo = 1
            while (2 * lo + b) ** 2 <= D:
                lo += 1
            while lo > 1 and (2 * (lo - 1) + b) ** 2 > D:
                lo -= 1
            hi = (w + b) // 2 + 1
            while hi > 0 and not (2 * hi <= b or (2 * hi - b) ** 2 < D):
                hi -= 1
            while 2 * (hi + 1) <= b or (2 * (hi + 1) - b) ** 2 < D:
                hi += 1
            if hi < lo:
                continue
            nd = 0
            if hi - lo <= 900:
                for dd in range(lo, hi + 1):
                    if m % dd == 0:
                        divbuf[nd] = dd
                        nd += 1
            else:
                divbuf[0] = 1
                nd = 1
                rem = m
                for ip in range(len(primes)):
                    p = primes[ip]
                    if p * p > rem:
                        break
                    if rem % p != 0:
                        continue
                    e = 0
                    while rem % p == 0:
                        rem //= p
                        e += 1
                    base = nd
                    pk = 1
                    for _ in range(e):
                        pk *= p
                        if pk > hi:
                            break
                        for j in range(base):
                            v = divbuf[j] * pk
                            if v <= hi:
                                if nd >= len(divbuf):
                                    grown = np.empty(2 * len(divbuf), dtype=np.int64)
                                    grown[:nd] = divbuf[:nd]
                                    divbuf = grown
                                divbuf[nd] = v
                                nd += 1
                if rem > 1 and rem <= hi:
                    base = nd
                    for j in range(base):
                        v = divbuf[j] * rem
                        if v <= hi:
                            if nd >= len(divbuf):
                                grown = np.empty(2 * len(divbuf), dtype=np.int64)
                                grown[:nd] = divbuf[:nd]
                                divbuf = grown
                            divbuf[nd] = v
                            nd += 1
                k = 0
                for j in range(nd):
                    if divbuf[j] >= lo:
                        divbuf[k] = divbuf[j]
                        k += 1
                nd = k
            if nf + 2 * nd > cap:
                while cap < nf + 2 * nd:
                    cap *= 2
                na = np.empty(cap, dtype=np.int64)
                nb = np.empty(cap, dtype=np.int64)
                na[:nf] = fa[:nf]
                nb[:nf] = fb[:nf]
                fa, fb = na, nb
            for j in range(nd):
                dd = divbuf[j]
                fa[nf] = dd
                fb[nf] = b
                fa[nf + 1] = -dd
                fb[nf + 1] = b
                nf += 2
        # Count reduction cycles by walking the neighbor permutation.
        keys = fa[:nf] * 4294967296 + fb[:nf]
        order = np.argsort(keys)
        skeys = keys[order]
        sa = fa[:nf][order]
        sb = fb[:nf][order]
        visited = np.zeros(nf, dtype=np.uint8)
        ncycles = 0
        for i in range(nf):
            if visited[i]:
                continue
            ncycles += 1
            j = i
            while not visited[j]:
                visited[j] = 1
                a = sa[j]
                b = sb[j]
                c = (b * b - D) // (4 * a)
                m2 = 2 * (c if c > 0 else -c)
                bp = w - ((w - ((-b) % m2)) % m2)
                key = c * 4294967296 + bp
                j = np.searchsorted(skeys, key)
        out[it] = ncycles
    return out
