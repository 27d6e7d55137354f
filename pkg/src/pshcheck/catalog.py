"""Built-in labeled test functions.

Each entry's label is ground truth established by hand (the note says
why); the automated checks are judged against these labels.  Names are
stable public identifiers.

Labels: 'psh' / 'not-psh' for complex-domain entries; 'harmonic' for
(pluri)harmonic ones; 'subharmonic-only' for real-domain functions that
are subharmonic but have no complex structure; 'not-subharmonic' for
real-domain counterexamples.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .vm import CompiledExpr, compile_expression

LABELS = ("psh", "not-psh", "harmonic", "subharmonic-only", "not-subharmonic")
SMOOTHNESS = ("C2", "usc-only")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    text: str
    dim: int  # ambient dimension: complex n for z-entries, real m for x-entries
    label: str
    smoothness: str
    family: str  # 'z' or 'x'
    note: str

    def compile(self, backend: str | None = None) -> CompiledExpr:
        fn = compile_expression(self.text, backend=backend)
        if fn.family != self.family or fn.dim > self.dim:
            raise ConfigError(
                f"catalog entry {self.name!r} metadata disagrees with its expression"
            )
        return fn


_ENTRIES = (
    CatalogEntry(
        name="ball-quadratic",
        text="abs(z1)^2+abs(z2)^2",
        dim=2,
        label="psh",
        smoothness="C2",
        family="z",
        note="squared norm; Levi form is the identity, strictly positive",
    ),
    CatalogEntry(
        name="remark-3.4",
        text="abs(z1)^2-abs(z2)^2",
        dim=2,
        label="not-psh",
        smoothness="C2",
        family="z",
        note=(
            "quadratic saddle with Levi eigenvalues +1 and -1; the identity-frame "
            "difference quotient at 0 is positive, so only a frame search exposes it"
        ),
    ),
    CatalogEntry(
        name="log-modulus",
        text="log(abs(z1))",
        dim=2,
        label="psh",
        smoothness="usc-only",
        family="z",
        note="log of the modulus of a coordinate; -inf on {z1=0}",
    ),
    CatalogEntry(
        name="log-shifted",
        text="log(abs(z1-0.3))",
        dim=2,
        label="psh",
        smoothness="usc-only",
        family="z",
        note="translate of log-modulus; singular set {z1=0.3} off the origin",
    ),
    CatalogEntry(
        name="log-quadric",
        text="log(abs(z1^2+z2^2))",
        dim=2,
        label="psh",
        smoothness="usc-only",
        family="z",
        note="log|f| for the holomorphic f = z1^2+z2^2; -inf on the quadric f=0",
    ),
    CatalogEntry(
        name="pluriharmonic-re",
        text="re(z1^2)",
        dim=2,
        label="harmonic",
        smoothness="C2",
        family="z",
        note="real part of a holomorphic function; Levi form vanishes identically",
    ),
    CatalogEntry(
        name="max-log",
        text="max(log(abs(z1)),log(abs(z2)))",
        dim=2,
        label="psh",
        smoothness="usc-only",
        family="z",
        note="max of two psh functions; kinked along |z1|=|z2|",
    ),
    CatalogEntry(
        name="neg-ball-quadratic",
        text="-(abs(z1)^2+abs(z2)^2)",
        dim=2,
        label="not-psh",
        smoothness="C2",
        family="z",
        note="negated squared norm; Levi form is minus the identity",
    ),
    CatalogEntry(
        name="exp-re",
        text="exp(re(z1))",
        dim=2,
        label="psh",
        smoothness="C2",
        family="z",
        note="exp of a pluriharmonic function; Levi form diag(exp(x1)/4, 0) >= 0",
    ),
    CatalogEntry(
        name="radial-square",
        text="x1^2+x2^2+x3^2+x4^2",
        dim=4,
        label="subharmonic-only",
        smoothness="C2",
        family="x",
        note="squared norm on R^4; Laplacian is the constant 8",
    ),
    CatalogEntry(
        name="quartic-x1",
        text="x1^4",
        dim=4,
        label="subharmonic-only",
        smoothness="C2",
        family="x",
        note="Laplacian 12 x1^2 >= 0, vanishing on the hyperplane x1=0",
    ),
    CatalogEntry(
        name="saddle-harmonic",
        text="x1^2-x2^2",
        dim=4,
        label="harmonic",
        smoothness="C2",
        family="x",
        note="harmonic polynomial; sphere means equal the center value exactly",
    ),
    CatalogEntry(
        name="exp-x1",
        text="exp(x1)",
        dim=4,
        label="subharmonic-only",
        smoothness="C2",
        family="x",
        note="Laplacian exp(x1) > 0",
    ),
    CatalogEntry(
        name="linear-x1",
        text="x1",
        dim=3,
        label="harmonic",
        smoothness="C2",
        family="x",
        note="affine, hence harmonic in every dimension",
    ),
    CatalogEntry(
        name="neg-norm",
        text="-abs(abs(x1+i*x2)+i*x3)",
        dim=3,
        label="not-subharmonic",
        smoothness="usc-only",
        family="x",
        note=(
            "minus the euclidean norm on R^3, written with nested moduli; "
            "Laplacian of |x| is 2/|x| > 0, so -|x| is strictly superharmonic"
        ),
    ),
)

_BY_NAME = {e.name: e for e in _ENTRIES}


def catalog(label: str | None = None) -> tuple[CatalogEntry, ...]:
    """All entries, optionally filtered by label."""
    if label is None:
        return _ENTRIES
    if label not in LABELS:
        raise ConfigError(
            f"unknown label {label!r}; known labels: {', '.join(LABELS)}"
        )
    return tuple(e for e in _ENTRIES if e.label == label)


def lookup(name: str) -> CatalogEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        known = ", ".join(sorted(_BY_NAME))
        raise ConfigError(f"unknown catalog entry {name!r} (known: {known})") from None
