# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Per-point stack-machine executor for compiled expressions.

Mirrors the numpy executor instruction for instruction; the operation
order inside POW_INT (square-and-multiply) is identical, so the two
backends agree to rounding.  Returns 0 on success or a nonzero error
code (1 division by zero, 2 log of negative, 3 zero to negative power).
"""

import numpy as np

cimport cython
cimport numpy as cnp
from libc.math cimport cos, exp, hypot, isnan, log, sin

cdef enum:
    STACK_LIMIT = 64

cdef enum:
    OP_LOAD_VAR = 0
    OP_LOAD_CONST = 1
    OP_NEG = 2
    OP_CONJ = 3
    OP_RE = 4
    OP_IM = 5
    OP_ABS = 6
    OP_LOG_REAL = 7
    OP_EXP = 8
    OP_ADD = 9
    OP_SUB = 10
    OP_MUL = 11
    OP_DIV = 12
    OP_POW_INT = 13
    OP_MAXN = 14
    OP_MINN = 15

cdef double NEG_INF = float("-inf")
cdef double NAN_VAL = float("nan")


cdef inline double complex _cexp(double complex a) noexcept nogil:
    cdef double m = exp(a.real)
    return m * cos(a.imag) + 1j * (m * sin(a.imag))


cdef inline double complex _pow_int(double complex base, long e, int* err) noexcept nogil:
    cdef double complex acc, result
    cdef bint have = False
    cdef bint neg = e < 0
    if e == 0:
        return 1.0 + 0j
    if neg:
        e = -e
    acc = base
    result = 1.0 + 0j
    while e:
        if e & 1:
            if have:
                result = result * acc
            else:
                result = acc
                have = True
        e >>= 1
        if e:
            acc = acc * acc
    if neg:
        if result == 0:
            err[0] = 3
            return 0
        return 1.0 / result
    return result


def run_program(const cnp.int32_t[::1] ops, const cnp.int64_t[::1] args,
                const double complex[::1] consts,
                const double complex[:, ::1] pts, double[::1] out):
    """Run the program on every row of pts, writing real parts into out."""
    cdef Py_ssize_t n_ops = ops.shape[0]
    cdef Py_ssize_t npts = pts.shape[0]
    cdef double complex stack[STACK_LIMIT]
    cdef Py_ssize_t p, k, j
    cdef int sp, op, err = 0
    cdef long arg
    cdef double complex a, b
    cdef double v, acc
    with nogil:
        for p in range(npts):
            sp = 0
            for k in range(n_ops):
                op = ops[k]
                arg = <long> args[k]
                if op == OP_LOAD_VAR:
                    stack[sp] = pts[p, arg]
                    sp += 1
                elif op == OP_LOAD_CONST:
                    stack[sp] = consts[arg]
                    sp += 1
                elif op == OP_NEG:
                    stack[sp - 1] = -stack[sp - 1]
                elif op == OP_CONJ:
                    a = stack[sp - 1]
                    stack[sp - 1] = a.real - 1j * a.imag
                elif op == OP_RE:
                    stack[sp - 1] = stack[sp - 1].real + 0j
                elif op == OP_IM:
                    stack[sp - 1] = stack[sp - 1].imag + 0j
                elif op == OP_ABS:
                    a = stack[sp - 1]
                    stack[sp - 1] = hypot(a.real, a.imag) + 0j
                elif op == OP_LOG_REAL:
                    v = stack[sp - 1].real
                    if v < 0:
                        err = 2
                        break
                    elif v == 0:
                        stack[sp - 1] = NEG_INF + 0j
                    else:
                        stack[sp - 1] = log(v) + 0j
                elif op == OP_EXP:
                    stack[sp - 1] = _cexp(stack[sp - 1])
                elif op == OP_ADD:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] + stack[sp]
                elif op == OP_SUB:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] - stack[sp]
                elif op == OP_MUL:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] * stack[sp]
                elif op == OP_DIV:
                    sp -= 1
                    b = stack[sp]
                    if b == 0:
                        err = 1
                        break
                    stack[sp - 1] = stack[sp - 1] / b
                elif op == OP_POW_INT:
                    stack[sp - 1] = _pow_int(stack[sp - 1], arg, &err)
                    if err:
                        break
                else:
                    # MAXN / MINN: reduce the top <arg> reals in push order
                    sp -= <int> arg
                    acc = stack[sp].real
                    for j in range(1, <Py_ssize_t> arg):
                        v = stack[sp + j].real
                        if isnan(v) or isnan(acc):
                            acc = NAN_VAL
                        elif op == OP_MAXN:
                            if v > acc:
                                acc = v
                        else:
                            if v < acc:
                                acc = v
                    stack[sp] = acc + 0j
                    sp += 1
            if err:
                break
            out[p] = stack[sp - 1].real
    return err
