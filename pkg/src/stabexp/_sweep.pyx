# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fault-classification sweep; same contract as ``_sweep_py.sweep``
with rows packed in a single 64-bit word."""

from libc.stdint cimport uint64_t, int32_t, int8_t
from libc.stdlib cimport malloc, free


cdef int[15] EXC
cdef int[15] EZC
cdef int[15] EXT
cdef int[15] EZT

# Must match _sweep_py.ERROR_BITS.
_bits = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_labels = [a + b for a in "IXYZ" for b in "IXYZ" if a + b != "II"]
for _e, _lab in enumerate(_labels):
    EXC[_e], EZC[_e] = _bits[_lab[0]]
    EXT[_e], EZT[_e] = _bits[_lab[1]]


def sweep(const int8_t[::1] ops, const int32_t[::1] qa, const int32_t[::1] qb,
          xcol_in, zcol_in, uint64_t check_mask, uint64_t logical_mask,
          uint64_t analog_bit, int8_t[::1] out):
    cdef Py_ssize_t nq = len(xcol_in)
    cdef uint64_t* xcol = <uint64_t*> malloc(nq * sizeof(uint64_t))
    cdef uint64_t* zcol = <uint64_t*> malloc(nq * sizeof(uint64_t))
    if xcol == NULL or zcol == NULL:
        free(xcol)
        free(zcol)
        raise MemoryError()
    cdef Py_ssize_t i, q
    for q in range(nq):
        xcol[q] = <uint64_t> xcol_in[q]
        zcol[q] = <uint64_t> zcol_in[q]
    cdef Py_ssize_t site = out.shape[0] // 15
    cdef long l = 0, nd = 0, nb = 0
    cdef int c, t, e, op, axis
    cdef uint64_t g_xc, g_zc, g_xt, g_zt, m, tmp
    cdef Py_ssize_t base
    try:
        for i in range(ops.shape[0] - 1, -1, -1):
            op = ops[i]
            if op == 0:
                c = qa[i]
                t = qb[i]
                site -= 1
                g_xc = zcol[c]
                g_zc = xcol[c]
                g_xt = zcol[t]
                g_zt = xcol[t]
                base = 15 * site
                for e in range(15):
                    m = 0
                    if EXC[e]:
                        m ^= g_xc
                    if EZC[e]:
                        m ^= g_zc
                    if EXT[e]:
                        m ^= g_xt
                    if EZT[e]:
                        m ^= g_zt
                    if m & check_mask:
                        out[base + e] = 0
                        nd += 1
                    elif m & logical_mask:
                        out[base + e] = 2
                        l += 1
                    else:
                        out[base + e] = 1
                        nb += 1
                xcol[t] ^= xcol[c]
                zcol[c] ^= zcol[t]
            elif op == 1:
                q = qa[i]
                tmp = xcol[q]
                xcol[q] = zcol[q]
                zcol[q] = tmp
            elif op == 2:
                q = qa[i]
                xcol[q] ^= zcol[q]
            elif op == 3:
                q = qa[i]
                zcol[q] ^= xcol[q]
            elif op == 4:
                q = qa[i]
                axis = qb[i]
                if axis & 1:
                    xcol[q] |= analog_bit
                if axis & 2:
                    zcol[q] |= analog_bit
    finally:
        free(xcol)
        free(zcol)
    return l, nd, nb
