"""Explicit log connections and opers on the marked projective line over F_p."""

from __future__ import annotations

from .base import LineBundleDatum, LineConnection, LogVectorField, MarkedLine, symbolic_power
from .brute import brute_force_sl2, brute_force_sl2_count, star_table
from .connection import LogConnection, ore_power, p_curvature_matrix
from .detdata import DeterminantData, construct as determinant_data_construct
from .oper import (
    OperData,
    OperReport,
    build_DPsi,
    companion_oper,
    dualize_nabla,
    dualize_triangle,
    eta_tilde,
    eta_tilde_via_ore,
    find_isomorphism,
    oper_check,
    opers_isomorphic,
    rank1_oper,
    star_oper,
    tensor_line_oper,
    unique_gl_pminus1,
)
from .serialize import dumps as dump_oper, loads as load_oper


def p_curvature(conn: LogConnection, field: LogVectorField | None = None):
    """p-curvature of ``conn`` along ``field`` (default: the global log field)."""
    if field is None:
        return conn.p_curvature
    return p_curvature_matrix(conn.A_d.scale(field.h / conn.base.h_rf), field.h)


def is_dormant(conn: LogConnection) -> bool:
    return conn.is_dormant()


def monodromy(conn: LogConnection, i: int):
    return conn.monodromy(i)


def exponents(conn: LogConnection, i: int):
    return conn.exponents(i)


__all__ = [
    "DeterminantData",
    "LineBundleDatum",
    "LineConnection",
    "LogConnection",
    "LogVectorField",
    "MarkedLine",
    "OperData",
    "OperReport",
    "brute_force_sl2",
    "brute_force_sl2_count",
    "build_DPsi",
    "companion_oper",
    "determinant_data_construct",
    "dump_oper",
    "dualize_nabla",
    "dualize_triangle",
    "eta_tilde",
    "eta_tilde_via_ore",
    "exponents",
    "find_isomorphism",
    "is_dormant",
    "load_oper",
    "monodromy",
    "ore_power",
    "oper_check",
    "opers_isomorphic",
    "p_curvature",
    "p_curvature_matrix",
    "rank1_oper",
    "star_oper",
    "star_table",
    "symbolic_power",
    "tensor_line_oper",
    "unique_gl_pminus1",
]
