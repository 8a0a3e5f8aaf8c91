"""Pure-Python fault-classification sweep (fallback for the compiled kernel).

Instead of pushing each of the 15·G faults forward through the circuit, every
check / logical row is pulled backward once.  A fault after a CNOT then
anticommutes with a row at the end iff it anticommutes with the pulled-back
row at the fault location, so each site costs a handful of XORs.

Column ``xcol[q]`` is a bitmask over rows whose X-part touches qubit ``q``.
"""

OP_CNOT, OP_H, OP_SX, OP_SZ, OP_ROT, OP_NOP = 0, 1, 2, 3, 4, 5
DETECTED, BENIGN, LOGICAL = 0, 1, 2

# (x_c, z_c, x_t, z_t) for the 15 two-qubit errors, control letter first,
# in the order I X Y Z x I X Y Z without II.
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
ERROR_LABELS = tuple(a + b for a in "IXYZ" for b in "IXYZ" if a + b != "II")
ERROR_BITS = tuple(_BITS[lab[0]] + _BITS[lab[1]] for lab in ERROR_LABELS)


def sweep(ops, qa, qb, xcol, zcol, check_mask, logical_mask, analog_bit, out):
    """Classify all CNOT fault sites.

    ``ops``/``qa``/``qb`` encode the gates; for ROT, ``qb`` holds the axis as
    ``x | z << 1``.  ``xcol``/``zcol`` are the end-of-circuit columns (copied).
    ``out`` (length 15·#CNOT) receives class codes in circuit order.
    Returns ``(l, n_detected, n_benign)``.
    """
    xcol = list(xcol)
    zcol = list(zcol)
    site = len(out) // 15
    l = nd = nb = 0
    for i in range(len(ops) - 1, -1, -1):
        op = ops[i]
        if op == OP_CNOT:
            c, t = qa[i], qb[i]
            site -= 1
            g_xc, g_zc, g_xt, g_zt = zcol[c], xcol[c], zcol[t], xcol[t]
            base = 15 * site
            for e, (exc, ezc, ext, ezt) in enumerate(ERROR_BITS):
                m = 0
                if exc:
                    m ^= g_xc
                if ezc:
                    m ^= g_zc
                if ext:
                    m ^= g_xt
                if ezt:
                    m ^= g_zt
                if m & check_mask:
                    out[base + e] = DETECTED
                    nd += 1
                elif m & logical_mask:
                    out[base + e] = LOGICAL
                    l += 1
                else:
                    out[base + e] = BENIGN
                    nb += 1
            xcol[t] ^= xcol[c]
            zcol[c] ^= zcol[t]
        elif op == OP_H:
            q = qa[i]
            xcol[q], zcol[q] = zcol[q], xcol[q]
        elif op == OP_SX:
            q = qa[i]
            xcol[q] ^= zcol[q]
        elif op == OP_SZ:
            q = qa[i]
            zcol[q] ^= xcol[q]
        elif op == OP_ROT:
            q, axis = qa[i], qb[i]
            if axis & 1:
                xcol[q] |= analog_bit
            if axis & 2:
                zcol[q] |= analog_bit
    return l, nd, nb
