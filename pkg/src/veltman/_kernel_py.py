"""Pure-Python forcing kernel; semantics identical to veltman._kernel.

A frame is encoded as bitmasks: R[w] is the successor mask of world w and
S[w*n+u] is the mask of z with u S_w z.  A compiled formula is a flat
program over mask registers; instruction opcodes:

    0 BOT          reg = 0
    1 VAR a        reg = valuation mask of variable a
    2 IMP a b      reg = ~reg[a] | reg[b]
    3 BOX a        reg = worlds whose R-successors all lie in reg[a]
    4 RHD a b      reg = worlds w s.t. every u in R[w] & reg[a]
                         has S[w][u] & reg[b] nonempty

The sweep walks valuation counters 0 .. 2**(n*nvars)-1 in ascending order;
variable i takes bits [i*n, (i+1)*n).  Worlds are scanned in index order,
so results are deterministic and must match the compiled kernel bit for bit.
"""

KIND = "python"


def sweep(n, R, S, ops, nvars, want_falsified):
    """Scan all valuations; return (val_counter, world, steps) or (None, None, steps).

    want_falsified true: find the first world where the root formula fails.
    want_falsified false: find the first world where it holds.
    """
    full = (1 << n) - 1
    total = 1 << (n * nvars)
    regs = [0] * len(ops)
    steps = 0
    for val in range(total):
        steps += 1
        for i, (op, a, b) in enumerate(ops):
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
                    if R[w] & ~ra == 0:
                        acc |= 1 << w
                regs[i] = acc
            else:
                acc = 0
                ra = regs[a]
                rb = regs[b]
                for w in range(n):
                    m = R[w] & ra
                    ok = True
                    while m:
                        u = (m & -m).bit_length() - 1
                        if S[w * n + u] & rb == 0:
                            ok = False
                            break
                        m &= m - 1
                    if ok:
                        acc |= 1 << w
                regs[i] = acc
        res = regs[len(ops) - 1]
        if want_falsified:
            if res != full:
                for w in range(n):
                    if not res >> w & 1:
                        return val, w, steps
        else:
            if res != 0:
                for w in range(n):
                    if res >> w & 1:
                        return val, w, steps
    return None, None, steps


def sweep_signatures(n, R, S, ops, nvars, roots):
    """Scan all valuations and worlds, collecting the signatures of the
    root registers: bit i of a signature says whether roots[i] is forced.
    Returns the set of signatures realized anywhere on this frame."""
    full = (1 << n) - 1
    total = 1 << (n * nvars)
    regs = [0] * len(ops)
    out = set()
    for val in range(total):
        for i, (op, a, b) in enumerate(ops):
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
                    if R[w] & ~ra == 0:
                        acc |= 1 << w
                regs[i] = acc
            else:
                acc = 0
                ra = regs[a]
                rb = regs[b]
                for w in range(n):
                    m = R[w] & ra
                    ok = True
                    while m:
                        u = (m & -m).bit_length() - 1
                        if S[w * n + u] & rb == 0:
                            ok = False
                            break
                        m &= m - 1
                    if ok:
                        acc |= 1 << w
                regs[i] = acc
        for w in range(n):
            sig = 0
            for i, reg in enumerate(roots):
                if regs[reg] >> w & 1:
                    sig |= 1 << i
            out.add(sig)
    return out


def eval_masks(n, R, S, ops, var_masks):
    """Evaluate the program once under explicit variable masks; returns the
    mask of worlds forcing the root formula."""
    full = (1 << n) - 1
    regs = [0] * len(ops)
    for i, (op, a, b) in enumerate(ops):
        if op == 0:
            regs[i] = 0
        elif op == 1:
            regs[i] = var_masks[a] & full
        elif op == 2:
            regs[i] = (~regs[a] | regs[b]) & full
        elif op == 3:
            acc = 0
            for w in range(n):
                if R[w] & ~regs[a] == 0:
                    acc |= 1 << w
            regs[i] = acc
        else:
            acc = 0
            for w in range(n):
                m = R[w] & regs[a]
                ok = True
                while m:
                    u = (m & -m).bit_length() - 1
                    if S[w * n + u] & regs[b] == 0:
                        ok = False
                        break
                    m &= m - 1
                if ok:
                    acc |= 1 << w
            regs[i] = acc
    return regs[len(ops) - 1]
