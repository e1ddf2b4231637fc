# cython: language_level=3
"""Compiled forcing kernel; see veltman._kernel_py for the contract.

The two kernels must stay in lockstep: same opcodes, same sweep order,
same tie-breaking.  Parity is enforced by tests/test_kernel.py.
"""

KIND = "compiled"

DEF MAXW = 24
DEF MAXOPS = 512


def sweep(int n, R, S, ops, int nvars, bint want_falsified):
    cdef unsigned long long Rloc[MAXW]
    cdef unsigned long long Sloc[MAXW * MAXW]
    cdef int opcode[MAXOPS]
    cdef int arg1[MAXOPS]
    cdef int arg2[MAXOPS]
    cdef unsigned long long regs[MAXOPS]
    cdef int nops = len(ops)
    cdef int i, w, u, a, b, op
    cdef unsigned long long val, total, full, acc, m, ra, rb, res
    cdef unsigned long long steps = 0
    cdef bint ok

    if n > MAXW or nops > MAXOPS:
        raise ValueError("kernel capacity exceeded")
    if n * nvars > 62:
        raise ValueError("valuation space exceeds 2**62")

    for w in range(n):
        Rloc[w] = R[w]
        for u in range(n):
            Sloc[w * n + u] = S[w * n + u]
    for i in range(nops):
        opcode[i] = ops[i][0]
        arg1[i] = ops[i][1]
        arg2[i] = ops[i][2]

    full = (<unsigned long long> 1 << n) - 1
    total = <unsigned long long> 1 << (n * nvars)

    for val in range(total):
        steps += 1
        for i in range(nops):
            op = opcode[i]
            a = arg1[i]
            b = arg2[i]
            if op == 0:
                regs[i] = 0
            elif op == 1:
                regs[i] = (val >> (a * n)) & full
            elif op == 2:
                regs[i] = (~regs[a] | regs[b]) & full
            elif op == 3:
                acc = 0
                ra = regs[a]
                for w in range(n):
                    if Rloc[w] & ~ra == 0:
                        acc |= <unsigned long long> 1 << w
                regs[i] = acc
            else:
                acc = 0
                ra = regs[a]
                rb = regs[b]
                for w in range(n):
                    m = Rloc[w] & ra
                    ok = True
                    while m:
                        u = _lowbit(m)
                        if Sloc[w * n + u] & rb == 0:
                            ok = False
                            break
                        m &= m - 1
                    if ok:
                        acc |= <unsigned long long> 1 << w
                regs[i] = acc
        res = regs[nops - 1]
        if want_falsified:
            if res != full:
                for w in range(n):
                    if not (res >> w) & 1:
                        return val, w, steps
        else:
            if res != 0:
                for w in range(n):
                    if (res >> w) & 1:
                        return val, w, steps
    return None, None, steps


cdef inline int _lowbit(unsigned long long m):
    cdef int k = 0
    while not (m >> k) & 1:
        k += 1
    return k


def sweep_signatures(int n, R, S, ops, int nvars, roots):
    """All realized root-register signatures over every valuation and
    world; see the pure kernel for the contract."""
    cdef unsigned long long Rloc[MAXW]
    cdef unsigned long long Sloc[MAXW * MAXW]
    cdef int opcode[MAXOPS]
    cdef int arg1[MAXOPS]
    cdef int arg2[MAXOPS]
    cdef int rootreg[64]
    cdef unsigned long long regs[MAXOPS]
    cdef int nops = len(ops)
    cdef int nroots = len(roots)
    cdef int i, w, u, a, b, op
    cdef unsigned long long val, total, full, acc, m, ra, rb, sig
    cdef bint ok

    if n > MAXW or nops > MAXOPS or nroots > 64:
        raise ValueError("kernel capacity exceeded")
    if n * nvars > 62:
        raise ValueError("valuation space exceeds 2**62")
    for w in range(n):
        Rloc[w] = R[w]
        for u in range(n):
            Sloc[w * n + u] = S[w * n + u]
    for i in range(nops):
        opcode[i] = ops[i][0]
        arg1[i] = ops[i][1]
        arg2[i] = ops[i][2]
    for i in range(nroots):
        rootreg[i] = roots[i]

    full = (<unsigned long long> 1 << n) - 1
    total = <unsigned long long> 1 << (n * nvars)
    out = set()
    for val in range(total):
        for i in range(nops):
            op = opcode[i]
            a = arg1[i]
            b = arg2[i]
            if op == 0:
                regs[i] = 0
            elif op == 1:
                regs[i] = (val >> (a * n)) & full
            elif op == 2:
                regs[i] = (~regs[a] | regs[b]) & full
            elif op == 3:
                acc = 0
                ra = regs[a]
                for w in range(n):
                    if Rloc[w] & ~ra == 0:
                        acc |= <unsigned long long> 1 << w
                regs[i] = acc
            else:
                acc = 0
                ra = regs[a]
                rb = regs[b]
                for w in range(n):
                    m = Rloc[w] & ra
                    ok = True
                    while m:
                        u = _lowbit(m)
                        if Sloc[w * n + u] & rb == 0:
                            ok = False
                            break
                        m &= m - 1
                    if ok:
                        acc |= <unsigned long long> 1 << w
                regs[i] = acc
        for w in range(n):
            sig = 0
            for i in range(nroots):
                if (regs[rootreg[i]] >> w) & 1:
                    sig |= <unsigned long long> 1 << i
            out.add(sig)
    return out


def eval_masks(int n, R, S, ops, var_masks):
    cdef unsigned long long Rloc[MAXW]
    cdef unsigned long long Sloc[MAXW * MAXW]
    cdef unsigned long long vm[MAXW]
    cdef unsigned long long regs[MAXOPS]
    cdef int nops = len(ops)
    cdef int i, w, u, a, b, op
    cdef unsigned long long full, acc, m
    cdef bint ok

    if n > MAXW or nops > MAXOPS or len(var_masks) > MAXW:
        raise ValueError("kernel capacity exceeded")
    for w in range(n):
        Rloc[w] = R[w]
        for u in range(n):
            Sloc[w * n + u] = S[w * n + u]
    for i in range(len(var_masks)):
        vm[i] = var_masks[i]

    full = (<unsigned long long> 1 << n) - 1
    for i in range(nops):
        op = ops[i][0]
        a = ops[i][1]
        b = ops[i][2]
        if op == 0:
            regs[i] = 0
        elif op == 1:
            regs[i] = vm[a] & full
        elif op == 2:
            regs[i] = (~regs[a] | regs[b]) & full
        elif op == 3:
            acc = 0
            for w in range(n):
                if Rloc[w] & ~regs[a] == 0:
                    acc |= <unsigned long long> 1 << w
            regs[i] = acc
        else:
            acc = 0
            for w in range(n):
                m = Rloc[w] & regs[a]
                ok = True
                while m:
                    u = _lowbit(m)
                    if Sloc[w * n + u] & regs[b] == 0:
                        ok = False
                        break
                    m &= m - 1
                if ok:
                    acc |= <unsigned long long> 1 << w
            regs[i] = acc
    return regs[nops - 1]
