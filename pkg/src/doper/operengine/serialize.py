"""Plain-text serialization of opers.

The format is line oriented, ``key: value``; matrices are written one row
per line with entries separated by `` | `` in the ``(num)/(den)`` syntax::

    doper-oper 1
    p: 3
    marked: 0,1,inf
    rank: 3
    B.tangent_power: 1
    B.divisor: -
    omega0: 0
    A[0]: 0 | 0 | 0
    G[0]: ...
    flag[1][0]: 1 | 0
    b[0]: 1
"""

from __future__ import annotations

from ..errors import DomainError
from ..funcfield import RatMatrix, parse_rf
from .base import LineBundleDatum, MarkedLine
from .connection import LogConnection
from .detdata import DeterminantData
from .oper import OperData

HEADER = "doper-oper 1"


def _rows(name: str, M: RatMatrix) -> list[str]:
    return [f"{name}[{i}]: " + " | ".join(v.expr() for v in row) for i, row in enumerate(M.rows)]


def dumps(F: OperData) -> str:
    B = F.det.B
    lines = [
        HEADER,
        f"p: {F.p}",
        f"marked: {F.base.describe()}",
        f"rank: {F.n}",
        f"B.tangent_power: {B.tangent_power}",
        "B.divisor: " + (",".join(f"{pt}:{m}" for pt, m in B.divisor) or "-"),
        f"omega0: {F.det.omega0.expr()}",
    ]
    lines += _rows("A", F.conn.A_d)
    lines += _rows("G", F.conn.G)
    for j, K in enumerate(F.flag):
        if j:
            lines += _rows(f"flag[{j}]", K)
    lines += _rows("b", F.b)
    return "\n".join(lines) + "\n"


def loads(text: str) -> OperData:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0] != HEADER:
        raise DomainError("not an oper file (missing header)")
    fields: dict[str, str] = {}
    for ln in lines[1:]:
        key, sep, val = ln.partition(":")
        if not sep:
            raise DomainError(f"malformed line {ln!r}")
        fields[key.strip()] = val.strip()
    try:
        p = int(fields["p"])
        n = int(fields["rank"])
        base = MarkedLine.parse(p, fields["marked"])
        div_text = fields["B.divisor"]
        divisor = []
        if div_text != "-":
            for item in div_text.split(","):
                pt, m = item.rsplit(":", 1)
                divisor.append((pt, int(m)))
        B = LineBundleDatum(base, int(fields["B.tangent_power"]), tuple(divisor))
        omega0 = parse_rf(fields["omega0"], p)
    except KeyError as exc:
        raise DomainError(f"missing field {exc}") from exc
    except ValueError as exc:
        raise DomainError(f"bad value: {exc}") from exc

    def matrix(name: str, nrows: int, ncols: int) -> RatMatrix:
        rows = []
        for i in range(nrows):
            key = f"{name}[{i}]"
            if key not in fields:
                raise DomainError(f"missing row {key}")
            entries = [parse_rf(t, p) for t in fields[key].split("|")]
            if len(entries) != ncols:
                raise DomainError(f"row {key} has {len(entries)} entries, expected {ncols}")
            rows.append(entries)
        return RatMatrix(p, rows, ncols)

    A = matrix("A", n, n)
    G = matrix("G", n, n)
    flag = [RatMatrix.identity(p, n)]
    for j in range(1, n):
        flag.append(matrix(f"flag[{j}]", n, n - j))
    b = matrix("b", n, 1)
    return OperData(LogConnection(base, A, G), tuple(flag), b, DeterminantData(n, B, omega0))
