"""Compilation of expression trees to a small stack program.

Two executors share the instruction set: a numpy one that runs each
instruction vectorized across all sample points, and an optional compiled
kernel (pshcheck._vmkernel) that runs the whole program per point.  The
compiled kernel is used when it was built and the program fits its fixed
stack; PSHCHECK_BACKEND=numpy|cython overrides the choice.

All stack slots are complex128.  Instructions producing real values
(abs, re, im, log, max, min) leave the imaginary part exactly zero, so
real-typed subexpressions stay exactly real.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import (
    ConfigError,
    DimensionMismatchError,
    EvaluationError,
    ExprTypeError,
)

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

_UN_OPS = {"neg": OP_NEG, "conj": OP_CONJ, "re": OP_RE, "im": OP_IM,
           "abs": OP_ABS, "log": OP_LOG_REAL, "exp": OP_EXP}
_BIN_OPS = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV}

KERNEL_STACK_LIMIT = 64

try:  # compiled kernel is optional; absence is not an error
    from . import _vmkernel as _kernel
except ImportError:  # pragma: no cover - depends on build environment
    _kernel = None

_FORCED = os.environ.get("PSHCHECK_BACKEND", "").strip().lower() or None
if _FORCED not in (None, "numpy", "cython"):
    raise ConfigError(
        f"PSHCHECK_BACKEND must be 'numpy' or 'cython', got {_FORCED!r}"
    )


def available_backends() -> tuple[str, ...]:
    return ("numpy", "cython") if _kernel is not None else ("numpy",)


def default_backend() -> str:
    """Backend used when none is forced: the compiled kernel if present."""
    if _FORCED == "numpy":
        return "numpy"
    if _FORCED == "cython":
        if _kernel is None:
            raise ConfigError(
                "PSHCHECK_BACKEND=cython but the compiled kernel is not built"
            )
        return "cython"
    return "cython" if _kernel is not None else "numpy"


@dataclass(frozen=True)
class Program:
    """Postfix instruction stream with its constant pool."""

    ops: np.ndarray  # int32
    args: np.ndarray  # int64, parallel to ops
    consts: np.ndarray  # complex128
    stack_need: int
    dim: int  # number of distinct leading variables required


def compile_node(node: ex.Node) -> Program:
    ops: list[int] = []
    args: list[int] = []
    consts: list[complex] = []
    const_index: dict[complex, int] = {}
    depth = 0
    max_depth = 0

    def push(delta: int):
        nonlocal depth, max_depth
        depth += delta
        max_depth = max(max_depth, depth)

    def emit(op: int, arg: int = 0):
        ops.append(op)
        args.append(arg)

    def const_slot(value: complex) -> int:
        if value not in const_index:
            const_index[value] = len(consts)
            consts.append(value)
        return const_index[value]

    def walk(nd: ex.Node):
        if isinstance(nd, ex.Lit):
            emit(OP_LOAD_CONST, const_slot(complex(nd.value)))
            push(1)
        elif isinstance(nd, ex.Var):
            emit(OP_LOAD_VAR, nd.index - 1)
            push(1)
        elif isinstance(nd, ex.Un):
            walk(nd.child)
            emit(_UN_OPS[nd.op])
        elif isinstance(nd, ex.Bin):
            walk(nd.left)
            walk(nd.right)
            emit(_BIN_OPS[nd.op])
            push(-1)
        elif isinstance(nd, ex.Pow):
            walk(nd.base)
            emit(OP_POW_INT, nd.exponent)
        elif isinstance(nd, ex.Nary):
            for a in nd.args:
                walk(a)
            emit(OP_MAXN if nd.op == "max" else OP_MINN, len(nd.args))
            push(-(len(nd.args) - 1))
        else:
            raise ExprTypeError(f"cannot compile node {nd!r}")

    walk(node)
    _, dim = ex.variable_profile(node)
    return Program(
        ops=np.asarray(ops, dtype=np.int32),
        args=np.asarray(args, dtype=np.int64),
        consts=np.asarray(consts, dtype=np.complex128),
        stack_need=max_depth,
        dim=dim,
    )


def _pow_int_numpy(base: np.ndarray, e: int) -> np.ndarray:
    """Square-and-multiply; 0^0 = 1 by convention, 0^negative is an error."""
    if e == 0:
        return np.ones_like(base)
    neg = e < 0
    e = abs(e)
    result = None
    acc = base
    while e:
        if e & 1:
            result = acc.copy() if result is None else result * acc
        e >>= 1
        if e:
            acc = acc * acc
    if neg:
        if np.any(result == 0):
            raise EvaluationError("zero raised to a negative power")
        return np.ones_like(result) / result
    return result


def run_numpy(program: Program, pts: np.ndarray) -> np.ndarray:
    """Execute vectorized over pts (N, n) complex128; returns (N,) float64."""
    stack: list[np.ndarray] = []
    npts = pts.shape[0]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for op, arg in zip(program.ops, program.args):
            if op == OP_LOAD_VAR:
                stack.append(pts[:, arg].copy())
            elif op == OP_LOAD_CONST:
                stack.append(np.full(npts, program.consts[arg]))
            elif op == OP_NEG:
                stack[-1] = -stack[-1]
            elif op == OP_CONJ:
                stack[-1] = np.conj(stack[-1])
            elif op == OP_RE:
                stack[-1] = stack[-1].real + 0j
            elif op == OP_IM:
                stack[-1] = stack[-1].imag + 0j
            elif op == OP_ABS:
                stack[-1] = np.abs(stack[-1]) + 0j
            elif op == OP_LOG_REAL:
                v = stack[-1].real
                if np.any(v < 0):
                    raise EvaluationError("log of a negative number")
                stack[-1] = np.log(v) + 0j  # log(0) -> -inf, by design
            elif op == OP_EXP:
                stack[-1] = np.exp(stack[-1])
            elif op == OP_ADD:
                b = stack.pop()
                stack[-1] = stack[-1] + b
            elif op == OP_SUB:
                b = stack.pop()
                stack[-1] = stack[-1] - b
            elif op == OP_MUL:
                b = stack.pop()
                stack[-1] = stack[-1] * b
            elif op == OP_DIV:
                b = stack.pop()
                if np.any(b == 0):
                    raise EvaluationError("division by zero")
                stack[-1] = stack[-1] / b
            elif op == OP_POW_INT:
                stack[-1] = _pow_int_numpy(stack[-1], int(arg))
            elif op in (OP_MAXN, OP_MINN):
                k = int(arg)
                vals = [stack.pop().real for _ in range(k)][::-1]
                acc = vals[0]
                fn = np.maximum if op == OP_MAXN else np.minimum
                for v in vals[1:]:
                    acc = fn(acc, v)
                stack.append(acc + 0j)
            else:  # pragma: no cover - compiler emits known opcodes only
                raise EvaluationError(f"unknown opcode {op}")
    return np.ascontiguousarray(stack[-1].real)


_KERNEL_ERRORS = {
    1: "division by zero",
    2: "log of a negative number",
    3: "zero raised to a negative power",
}


def run_cython(program: Program, pts: np.ndarray) -> np.ndarray:
    out = np.empty(pts.shape[0], dtype=np.float64)
    code = _kernel.run_program(
        program.ops, program.args, program.consts,
        np.ascontiguousarray(pts), out,
    )
    if code != 0:
        raise EvaluationError(_KERNEL_ERRORS.get(code, f"kernel error {code}"))
    return out


@dataclass(frozen=True)
class CompiledExpr:
    """A parsed, type-checked, executable real-valued expression.

    family is 'z' (points in C^n), 'x' (points in R^m), or 'any' for
    constant expressions.  Calling evaluates on an (N, dim+) array of the
    matching dtype and returns (N,) float64; values may be -inf, while
    NaN or +inf raise EvaluationError.
    """

    text: str
    family: str
    dim: int
    program: Program
    backend: str

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts)
        if pts.ndim != 2:
            raise DimensionMismatchError(
                f"expected a 2-D array of points, got shape {pts.shape}"
            )
        if pts.shape[1] < self.dim:
            raise DimensionMismatchError(
                f"expression {self.text!r} needs {self.dim} coordinates, "
                f"points have {pts.shape[1]}"
            )
        if self.family == "x" and np.iscomplexobj(pts):
            raise DimensionMismatchError(
                f"expression {self.text!r} is real-domain; got complex points"
            )
        pts = np.ascontiguousarray(pts, dtype=np.complex128)
        if self.backend == "cython" and self.program.stack_need <= KERNEL_STACK_LIMIT:
            out = run_cython(self.program, pts)
        else:
            out = run_numpy(self.program, pts)
        bad = np.isnan(out)
        if bad.any():
            raise EvaluationError(
                f"expression {self.text!r} produced NaN at sample "
                f"{int(np.argmax(bad))}"
            )
        if np.isposinf(out).any():
            raise EvaluationError(
                f"expression {self.text!r} produced +inf (values must lie in [-inf, inf))"
            )
        return out

    def eval_point(self, point) -> float:
        """Evaluate at a single point (a 1-D coordinate array)."""
        arr = np.asarray(point)
        if arr.ndim != 1:
            raise DimensionMismatchError("eval_point expects a 1-D point")
        return float(self(arr[None, :])[0])

    def as_real_domain(self):
        """View as a function on R^(2 dim) by pairing (x, y) coordinates.

        Real-domain expressions are returned unchanged.
        """
        if self.family == "x":
            return self

        def eval_real(x: np.ndarray) -> np.ndarray:
            x = np.asarray(x, dtype=np.float64)
            if x.ndim != 2 or x.shape[1] < 2 * self.dim or x.shape[1] % 2:
                raise DimensionMismatchError(
                    f"need (N, {2 * self.dim}) real coordinates, got {x.shape}"
                )
            return self(x[:, 0::2] + 1j * x[:, 1::2])

        return eval_real


def compile_expression(text: str, backend: str | None = None) -> CompiledExpr:
    """Parse, type-check, and compile an expression string.

    The root must be real-valued.  backend overrides the module default
    ('numpy' or 'cython').
    """
    node = ex.parse(text)
    ex.require_real(node)
    family, _ = ex.variable_profile(node)
    program = compile_node(node)
    if backend is None:
        backend = default_backend()
    elif backend not in available_backends():
        raise ConfigError(
            f"backend {backend!r} not available (have: {', '.join(available_backends())})"
        )
    return CompiledExpr(
        text=ex.to_text(node),
        family=family,
        dim=program.dim,
        program=program,
        backend=backend,
    )
