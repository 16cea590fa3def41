"""Structure files.

A structure file is TOML with these (all optional) keys::

    seed = 1
    window = 6

    [chart]                       # the base manifold M
    variables = [["x1", "even"], ["x2", "even"], ["xi", "odd"]]
    params = []

    [expressions]                 # named expressions, usable in later ones
    Q = "x1*xs2"

    [structure]
    fixture = "A"                 # a built-in fixture, or
    P = "3*xs2*xs1"               # a multivector on the odd cotangent chart
    rho = "1"                     # volume element on M
    sigma = "1 + x1*xs1*xs2"      # generator of a rank-one module

    [suites]
    run = ["ordpoiss", "pencil"]

Expressions are parsed on the first chart among ``M``, ``PiTM``, ``PiT*M``,
``T*(PiTM)``, ``T*(PiT*M)`` and ``T*M`` that has every identifier they use.
"""

from dataclasses import dataclass, field

import tomli

from .errors import KoszulError, ParseError
from .fixtures import fixture
from .geometry import cotangent_chart, pi_cotangent_chart, pi_tangent_chart
from .parser import parse_expression, tokenize
from .superalgebra import RESERVED, declare_chart


@dataclass
class StructureFile:
    M: object
    expressions: dict = field(default_factory=dict)
    P: object = None
    rho: object = None
    sigma: object = None
    fixture: str = None
    suites: list = field(default_factory=list)
    seed: int = 0
    window: int = None

    def charts(self):
        M = self.M
        Y, X = pi_tangent_chart(M), pi_cotangent_chart(M)
        return [M, Y, X, cotangent_chart(Y), cotangent_chart(X), cotangent_chart(M)]

    def parse(self, text, chart=None):
        """Parse ``text`` on ``chart`` (resolved from its identifiers if None),
        with the named expressions in scope."""
        idents = {t[1] for t in tokenize(text) if t[0] == "name"} - set(RESERVED)
        used = set()
        for n in idents:
            if n in self.expressions:
                e = self.expressions[n]
                used |= {e.chart.names[i] for i in range(e.chart.nvars)
                         if any(m[i] for m in e.terms)}
            else:
                used.add(n)
        if chart is None:
            for C in self.charts():
                if used <= set(C.names):
                    chart = C
                    break
            else:
                known = set().union(*(C.names for C in self.charts()))
                missing = sorted(used - known)
                if missing:
                    raise ParseError(f"unknown identifier {missing[0]!r}", text.find(missing[0]), text)
                raise ParseError(f"no chart has all of {sorted(used)}")
        return parse_expression(text, chart, self.expressions)


def load_structure(text):
    """Build a StructureFile from TOML text."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise KoszulError(f"invalid structure file: {exc}") from None
    chart = data.get("chart", {})
    st = data.get("structure", {})
    name = st.get("fixture")
    if name is not None:
        pf = fixture(name)
        M = pf.M
    else:
        variables = chart.get("variables")
        if not variables:
            raise KoszulError("structure file needs [chart] variables or a fixture")
        M = declare_chart([tuple(v) for v in variables], chart.get("params", ()))
    sf = StructureFile(M, seed=int(data.get("seed", 0)), fixture=name)
    if "window" in data:
        sf.window = int(data["window"])
    for key, text_ in data.get("expressions", {}).items():
        if key in M.names or key in RESERVED:
            raise KoszulError(f"expression name {key!r} clashes with a variable")
        sf.expressions[key] = sf.parse(text_)
    if name is not None:
        sf.P = fixture(name).P
    if "P" in st:
        sf.P = sf.parse(st["P"], pi_cotangent_chart(M))
    if "rho" in st:
        sf.rho = sf.parse(st["rho"], M)
    if "sigma" in st:
        sf.sigma = sf.parse(st["sigma"], pi_cotangent_chart(M))
    suites = data.get("suites", {}).get("run", [])
    sf.suites = [suites] if isinstance(suites, str) else list(suites)
    return sf


def load_structure_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_structure(fh.read())
