"""Command-line interface.

Exit status: 0 on success, 1 when the input is mathematically invalid or a
validation fails, 2 on usage errors (reported by click).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import fpcalc, fusion, verlinde
from .errors import DomainError, IntegralityFailure, InternalInconsistency, SaturationFailure

CACHE_ENV = "DOPER_CACHE_DIR"
DEFAULT_CACHE = "./.doper-cache"


class DomainExit(click.ClickException):
    exit_code = 1


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except IntegralityFailure as exc:
        raise DomainExit(f"integrality failure: value {exc.value}, residual {exc.residual}")
    except DomainError as exc:
        raise DomainExit(str(exc))
    except (InternalInconsistency, SaturationFailure) as exc:
        raise DomainExit(f"internal error: {exc}")


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        click.echo(json.dumps(obj, sort_keys=True))
    else:
        click.echo(text)


def _parse_radii(p: int, text: str) -> list[fpcalc.RadiusClass]:
    out = []
    for tok in text.split(";"):
        tok = tok.strip()
        if tok:
            out.append(fpcalc.radius_canonicalize(fpcalc.ExponentMultiset(p, fpcalc.parse_entries(tok))))
    return out


def _cache_dir(cache_dir: str | None) -> Path:
    return Path(cache_dir or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)


def _cache_key(kind: str, **params) -> str:
    body = ",".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{kind}-" + hashlib.sha256(f"{kind}:{body}".encode()).hexdigest()[:16] + ".json"


def _json_option(f):
    return click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")(f)


def _cache_options(f):
    f = click.option("--no-cache", is_flag=True, help="Recompute even when a cached result exists.")(f)
    f = click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help=f"Cache directory (default ${CACHE_ENV} or {DEFAULT_CACHE}).")(f)
    return f


def _threads_option(f):
    return click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True, help="Worker count.")(f)


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Dormant opers, their dualities and degree counts over F_p."""


# ---------------------------------------------------------------------------
# radii


@main.group()
def radii() -> None:
    """Exponent multisets and their shift classes."""


@radii.command("enumerate")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--distinct", is_flag=True, help="Only classes without repeated entries.")
@_json_option
def radii_enumerate(p: int, n: int, distinct: bool, as_json: bool) -> None:
    def go():
        fpcalc.check_prime(p)
        return fpcalc.enumerate_radii(p, n, distinct)

    rows = _run(go)
    width = len(str(len(rows)))
    text = "\n".join(f"{i:>{width}}  {r}" for i, r in enumerate(rows))
    _emit([str(r) for r in rows], as_json, text)


@radii.command("star")
@click.option("--p", "p", type=int, required=True)
@click.option("--rho", required=True, help='Radius as "[a,b,...]".')
@_json_option
def radii_star(p: int, rho: str, as_json: bool) -> None:
    def go():
        fpcalc.check_prime(p)
        r = fpcalc.radius_canonicalize(fpcalc.ExponentMultiset(p, fpcalc.parse_entries(rho)))
        return fpcalc.radius_star(r)

    out = _run(go)
    _emit(str(out), as_json, str(out))


@radii.command("lift")
@click.option("--p", "p", type=int, required=True)
@click.option("--rho", required=True)
@click.option("--a", "a", type=int, default=0, show_default=True, help="Required entry sum mod p.")
@_json_option
def radii_lift(p: int, rho: str, a: int, as_json: bool) -> None:
    def go():
        fpcalc.check_prime(p)
        r = fpcalc.radius_canonicalize(fpcalc.ExponentMultiset(p, fpcalc.parse_entries(rho)))
        return fpcalc.exponent_lift(r, a)

    out = _run(go)
    _emit(str(out), as_json, str(out))


# ---------------------------------------------------------------------------
# fusion


def _load_table(p: int, n: int, cache_dir: str | None, no_cache: bool) -> fusion.ThreePointTable:
    path = _cache_dir(cache_dir) / _cache_key("fusion", p=p, n=n)
    if not no_cache and path.is_file():
        return fusion.ThreePointTable.from_json(path.read_text())
    table = fusion.table_for(p, n)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(table.to_json())
    return table


@main.group("fusion")
def fusion_group() -> None:
    """Three-point tables, fusion rings and genus-g counts."""


@fusion_group.command("table")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, default=2, show_default=True)
@_cache_options
@_json_option
def fusion_table(p: int, n: int, cache_dir, no_cache: bool, as_json: bool) -> None:
    table = _run(lambda: (fpcalc.check_prime(p), _load_table(p, n, cache_dir, no_cache))[1])
    if as_json:
        click.echo(table.to_json(), nl=False)
        return
    click.echo("basis: " + " ".join(f"{i}={b}" for i, b in enumerate(table.basis)))
    for (i, j, k), v in sorted(table.values.items()):
        click.echo(f"{i} {j} {k}  {v}")


def _ring(p: int, n: int, cache_dir, no_cache: bool) -> fusion.FusionRing:
    return fusion.build_fusion_ring(_load_table(p, n, cache_dir, no_cache))


@fusion_group.command("degree")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--genus", "genera", type=int, multiple=True, required=True, help="May be repeated for a sweep.")
@click.option("--radii", "radii_text", default="", help='Semicolon-separated radii, e.g. "[0,1];[0,1];[0,1]".')
@click.option("--method", type=click.Choice(["character", "factorization"]), default="character", show_default=True)
@click.option("--csv", "as_csv", is_flag=True, help="Emit CSV rows p,n,genus,radii,method,value.")
@_threads_option
@_cache_options
@_json_option
def fusion_degree(p, n, genera, radii_text, method, as_csv, threads, cache_dir, no_cache, as_json) -> None:
    def go():
        fpcalc.check_prime(p)
        ring = _ring(p, n, cache_dir, no_cache)
        rads = _parse_radii(p, radii_text)
        ring.characters  # computed once before any worker starts

        def one(g):
            return fusion.genus_degree(ring, g, rads, method=method)

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return rads, list(pool.map(one, genera))

    rads, values = _run(go)
    rad_text = ";".join(str(r) for r in rads)
    rows = [dict(p=p, n=n, genus=g, radii=rad_text, method=method, value=v) for g, v in zip(genera, values)]
    _emit_rows(rows, as_csv, as_json)


def _emit_rows(rows: list[dict], as_csv: bool, as_json: bool) -> None:
    if as_csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["p", "n", "genus", "radii", "method", "value"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        click.echo(buf.getvalue(), nl=False)
    elif as_json:
        click.echo(json.dumps(rows if len(rows) > 1 else rows[0], sort_keys=True))
    else:
        for r in rows:
            click.echo(str(r["value"]))


@fusion_group.command("verify-factorization")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--g1", type=int, required=True)
@click.option("--g2", type=int, required=True)
@click.option("--x", "x_text", default="")
@click.option("--y", "y_text", default="")
@_cache_options
@_json_option
def fusion_verify(p, n, g1, g2, x_text, y_text, cache_dir, no_cache, as_json) -> None:
    def go():
        fpcalc.check_prime(p)
        ring = _ring(p, n, cache_dir, no_cache)
        x, y = _parse_radii(p, x_text), _parse_radii(p, y_text)
        lhs = fusion.genus_degree(ring, g1 + g2, x + y)
        return lhs, fusion.verify_factorization(ring, g1, g2, x, y)

    lhs, ok = _run(go)
    _emit({"value": lhs, "holds": ok}, as_json, f"{lhs} {'OK' if ok else 'FAILED'}")
    if not ok:
        sys.exit(1)


# ---------------------------------------------------------------------------
# verlinde


@main.command("verlinde")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "ns", type=int, multiple=True, required=True, help="May be repeated for a sweep.")
@click.option("--genus", "genera", type=int, multiple=True, required=True, help="May be repeated for a sweep.")
@click.option("--check-duality", is_flag=True, help="Also evaluate rank p - n and compare.")
@click.option("--csv", "as_csv", is_flag=True)
@_threads_option
@_cache_options
@_json_option
def verlinde_cmd(p, ns, genera, check_duality, as_csv, threads, cache_dir, no_cache, as_json) -> None:
    """Exact Verlinde-type count of dormant sl_n opers of genus g."""

    def value(n, g):
        path = _cache_dir(cache_dir) / _cache_key("verlinde", p=p, n=n, genus=g)
        if not no_cache and path.is_file():
            return json.loads(path.read_text())["value"]
        v = verlinde.verlinde_degree(p, n, g, workers=threads)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"p": p, "n": n, "genus": g, "value": v}, sort_keys=True) + "\n")
        return v

    if check_duality:
        if len(ns) != 1 or len(genera) != 1:
            raise click.UsageError("--check-duality takes a single --n and --genus")
        n, g = ns[0], genera[0]
        a, b = _run(lambda: (value(n, g), value(p - n, g)))
        ok = a == b
        text = f"{a} == {b} OK" if ok else f"{a} != {b} MISMATCH"
        _emit({"value": a, "dual_value": b, "equal": ok}, as_json, text)
        if not ok:
            sys.exit(1)
        return
    rows = []
    for n in ns:
        for g in genera:
            rows.append(dict(p=p, n=n, genus=g, radii="", method="verlinde", value=_run(value, n, g)))
    _emit_rows(rows, as_csv, as_json)


# ---------------------------------------------------------------------------
# oper


@main.group("oper")
def oper_group() -> None:
    """Explicit opers on the marked projective line."""


def _describe_exponents(F) -> str:
    exps = F.exponents()
    fmt = ["{" + ",".join(str(e) for e in x.entries) + "}" for x in exps]
    if len(set(fmt)) == 1:
        return f"exponents {fmt[0]} at all marked points"
    return "exponents " + ", ".join(f"{pt}:{s}" for pt, s in zip(F.base.points, fmt))


def _report(F) -> str:
    from .operengine import oper_check

    oper_check(F)
    dormant = F.is_dormant()
    parts = [f"rank {F.n}", "dormant" if dormant else "not dormant"]
    if dormant:
        parts.append(_describe_exponents(F))
    parts.append(f"degree {F.degree}")
    return ", ".join(parts)


def _report_json(F) -> dict:
    dormant = F.is_dormant()
    return {
        "rank": F.n,
        "dormant": dormant,
        "degree": F.degree,
        "exponents": [list(e.entries) for e in F.exponents()] if dormant else None,
        "marked": [str(t) for t in F.base.points],
    }


def _write_oper(F, out: str | None) -> None:
    from .operengine import dump_oper

    if out:
        Path(out).write_text(dump_oper(F))


def _parse_divisor(text: str) -> tuple:
    items = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            pt, _, m = tok.rpartition(":")
            if not pt:
                raise DomainError(f"divisor entries look like point:multiplicity, got {tok!r}")
            try:
                items.append((pt, int(m)))
            except ValueError as exc:
                raise DomainError(f"bad multiplicity in {tok!r}") from exc
    return tuple(items)


@oper_group.command("dpsi")
@click.option("--p", "p", type=int, required=True)
@click.option("--marked", default="0,1,inf", show_default=True)
@click.option("--tangent-power", type=int, default=0, show_default=True, help="k in B = T^k(D).")
@click.option("--divisor", default="", help='D as "point:mult,...".')
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the oper to this file.")
@_json_option
def oper_dpsi(p, marked, tangent_power, divisor, out, as_json) -> None:
    from .operengine import LineBundleDatum, MarkedLine, build_DPsi

    def go():
        base = MarkedLine.parse(p, marked)
        B = LineBundleDatum(base, tangent_power, _parse_divisor(divisor))
        return build_DPsi(B)

    F = _run(go)
    _write_oper(F, out)
    _emit(_report_json(F), as_json, _run(_report, F))


def _read_oper(path: str):
    from .operengine import load_oper

    return _run(load_oper, Path(path).read_text())


@oper_group.command("check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@_json_option
def oper_check_cmd(path, as_json) -> None:
    F = _read_oper(path)
    text = _run(_report, F)
    _emit(_report_json(F), as_json, text)


@oper_group.command("dualize")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--twice", is_flag=True, help="Dualize twice and compare with the input.")
@click.option("--compare", type=click.Path(exists=True, dir_okay=False), default=None, help="Oper file to compare the result with.")
@_json_option
def oper_dualize(path, out, twice, compare, as_json) -> None:
    from .operengine import find_isomorphism, star_oper

    F = _read_oper(path)
    G = _run(star_oper, F)
    if twice:
        G = _run(star_oper, G)
    _write_oper(G, out)
    ref = F if twice else (_read_oper(compare) if compare else None)
    text = _run(_report, G)
    payload = _report_json(G)
    if ref is not None:
        iso = _run(find_isomorphism, G, ref) is not None
        text += f"\nisomorphic to {'original' if twice else 'reference'}: {'yes' if iso else 'no'}"
        payload["isomorphic"] = iso
    _emit(payload, as_json, text)


@oper_group.command("unique-glp1")
@click.option("--p", "p", type=int, required=True)
@click.option("--marked", default="0,1,inf", show_default=True)
@click.option("--exponents", "exps", required=True, help="Comma-separated residues, one per marked point.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_json_option
def oper_unique(p, marked, exps, out, as_json) -> None:
    from .operengine import MarkedLine, determinant_data_construct, unique_gl_pminus1

    def go():
        base = MarkedLine.parse(p, marked)
        a = [int(t) for t in exps.split(",") if t.strip()]
        return unique_gl_pminus1(determinant_data_construct(base, 1, a))

    try:
        F = _run(go)
    except ValueError as exc:
        raise DomainExit(f"bad exponents: {exc}")
    _write_oper(F, out)
    _emit(_report_json(F), as_json, _run(_report, F))


@oper_group.command("brute-sl2")
@click.option("--p", "p", type=int, required=True)
@click.option("--radii", "radii_text", required=True)
@_json_option
def oper_brute(p, radii_text, as_json) -> None:
    from .operengine import brute_force_sl2_count

    def go():
        fpcalc.check_prime(p)
        rads = _parse_radii(p, radii_text)
        return brute_force_sl2_count(p, tuple(rads))

    count = _run(go)
    _emit(count, as_json, str(count))


if __name__ == "__main__":  # pragma: no cover
    main()
