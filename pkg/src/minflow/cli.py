"""Batch runner: JSON scenario in, JSON report and CSV series out.

    minflow run --config scenario.json --out results/ [--seed N] [--threads N]
    minflow verify-report results/report.json
    minflow list-catalog

Exit codes: 0 when every query ran (Unknown verdicts are flagged, not
failures), 1 when a query raised, 2 when the config does not parse or
validate.  Exact rationals are written as "p/q" strings.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import numlab, spectra
from .basesys import (
    CATALOG,
    BaseSystem,
    CircleRotation,
    DeclaredSystem,
    Denjoy,
    Furstenberg,
    Odometer,
    Point,
    TorusTranslation,
    UnknownGroupError,
)
from .functions import Constant, CylinderLocallyConstant, DeclaredFunction, TrigPoly
from .qlinear import (
    ExactReal,
    FgSubgroup,
    GeneratorBasis,
    decimal_generator,
    opaque_generator,
    sqrt_generator,
)
from .suspension import SuspensionFlow, SuspensionPoint
from .verdicts import Minimal, NotMinimal, Unknown

SCHEMA_VERSION = 1
REPORT_NAME = "report.json"

QUERY_OPS = ("decide", "eigens", "lambdak", "decompose", "realize-clopen", "simulate", "detect", "cycle",
             "conjugacy-check")


class ConfigError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


class QueryError(RuntimeError):
    def __init__(self, query_id: str, cause: BaseException):
        super().__init__(f"query {query_id!r} failed: {type(cause).__name__}: {cause}")
        self.query_id = query_id
        self.cause = cause


# --------------------------------------------------------------------------
# Serialization helpers
# --------------------------------------------------------------------------


def fmt_q(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def exact_json(x: ExactReal) -> dict[str, str]:
    return {name: fmt_q(c) for name, c in zip(x.basis.names(), x.coeffs) if c}


def _render(v) -> str:
    if isinstance(v, Fraction):
        return fmt_q(v)
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("booleans are not series values")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def emit_csv(path: Union[str, Path], series: Iterable[tuple[Any, Any]]) -> Path:
    """Write ``checkpoint,value`` rows (UTF-8, newline-terminated)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["checkpoint", "value"])
        for cp, v in series:
            w.writerow([_render(cp), _render(v)])
    return path


def _parse_value(text: str):
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_csv(path: Union[str, Path]) -> list[tuple[Any, Any]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["checkpoint", "value"]:
        raise ValueError(f"{path}: missing checkpoint,value header")
    return [(_parse_value(a), _parse_value(b)) for a, b in rows[1:]]


# --------------------------------------------------------------------------
# Config parsing and validation
# --------------------------------------------------------------------------


@dataclass
class Query:
    id: str
    op: str
    raw: dict
    params: dict


@dataclass
class Scenario:
    basis: GeneratorBasis
    systems: dict[str, BaseSystem]
    ceilings: dict[str, Any]
    flows: dict[str, SuspensionFlow]
    queries: list[Query]
    seed: int
    thresholds: dict[str, float]
    out: Optional[str] = None
    raw: dict = field(default_factory=dict, repr=False)


def _obj(v, where) -> dict:
    if not isinstance(v, dict):
        raise ConfigError(where, f"expected an object, got {type(v).__name__}")
    return v


def _list(v, where) -> list:
    if not isinstance(v, list):
        raise ConfigError(where, f"expected a list, got {type(v).__name__}")
    return v


def _req(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}.{key}", "missing required field")
    return d[key]


def _int(v, where, minimum: Optional[int] = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(where, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(where, f"must be >= {minimum}, got {v}")
    return v


def _str(v, where) -> str:
    if not isinstance(v, str):
        raise ConfigError(where, f"expected a string, got {v!r}")
    return v


def _rational(v, where) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ConfigError(where, f"exact rationals must be integers or 'p/q' strings, got {v!r}")
    try:
        return Fraction(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(where, f"not a rational: {v!r}") from None


def _number(v, where) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(where, f"expected a number, got {v!r}")
    return float(v)


def _expr(basis: GeneratorBasis, v, where) -> ExactReal:
    if isinstance(v, bool) or isinstance(v, float):
        raise ConfigError(where, f"expected an exact expression, got {v!r}")
    if isinstance(v, int):
        return basis.rational(v)
    if isinstance(v, dict):
        try:
            return basis.element({k: _rational(c, f"{where}.{k}") for k, c in v.items()})
        except KeyError as e:
            raise ConfigError(where, e.args[0]) from None
    text = _str(v, where)
    try:
        return basis.parse(text)
    except KeyError as e:
        raise ConfigError(where, e.args[0]) from None
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(where, str(e)) from None


def _time(basis: GeneratorBasis, v, where) -> tuple[float, Optional[ExactReal]]:
    """Numeric times may be floats; exact expressions are kept as well."""
    if isinstance(v, float):
        return v, None
    x = _expr(basis, v, where)
    return float(x), x


def _build_generator(g: dict, where: str):
    name = _str(_req(g, "name", where), f"{where}.name")
    refiner = _str(g.get("refiner", "opaque"), f"{where}.refiner").split()
    closure = g.get("quadratic_closure", False)
    if not isinstance(closure, bool):
        raise ConfigError(f"{where}.quadratic_closure", "expected true or false")
    enclosure = g.get("enclosure")
    if enclosure is not None:
        enclosure = _list(enclosure, f"{where}.enclosure")
        if len(enclosure) != 2:
            raise ConfigError(f"{where}.enclosure", "expected [lo, hi]")
        lo = _rational(enclosure[0], f"{where}.enclosure[0]")
        hi = _rational(enclosure[1], f"{where}.enclosure[1]")
        if not lo < hi:
            raise ConfigError(f"{where}.enclosure", f"generator {name!r}: need lo < hi")
    try:
        if refiner[0] == "sqrt" and len(refiner) == 2:
            gen = sqrt_generator(name, Fraction(refiner[1]), quadratic_closure=closure)
        elif refiner[0] == "decimal-literal" and len(refiner) == 2:
            if closure:
                raise ConfigError(f"{where}.quadratic_closure", f"generator {name!r}: needs a sqrt refiner")
            gen = decimal_generator(name, refiner[1])
        elif refiner == ["opaque"]:
            if enclosure is None:
                raise ConfigError(f"{where}.enclosure", f"opaque generator {name!r} needs an enclosure")
            if closure:
                raise ConfigError(f"{where}.quadratic_closure", f"generator {name!r}: needs a sqrt refiner")
            gen = opaque_generator(name, lo, hi)
        else:
            raise ConfigError(f"{where}.refiner",
                              f"generator {name!r}: expected 'sqrt n', 'decimal-literal d' or 'opaque'")
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(where, f"generator {name!r}: {e}") from None
    if enclosure is not None and refiner[0] != "opaque":
        glo, ghi = gen.enclosure
        if ghi <= lo or glo >= hi:
            raise ConfigError(f"{where}.enclosure", f"generator {name!r}: enclosure [{lo}, {hi}] misses its value")
    return gen


def _build_basis(cfg: dict) -> GeneratorBasis:
    b = _obj(_req(cfg, "basis", "config"), "basis")
    gens = [_build_generator(_obj(g, f"basis.generators[{i}]"), f"basis.generators[{i}]")
            for i, g in enumerate(_list(b.get("generators", []), "basis.generators"))]
    note = b.get("independence_note")
    try:
        return GeneratorBasis(gens, id=b.get("id", "main"), independence_note=note)
    except ValueError as e:
        raise ConfigError("basis.generators", str(e)) from None


def _subgroup(basis, v, where) -> FgSubgroup:
    return FgSubgroup(basis, [_expr(basis, x, f"{where}[{i}]") for i, x in enumerate(_list(v, where))])


def _trig_terms(v, where) -> list:
    out = []
    for i, t in enumerate(_list(v, where)):
        w = f"{where}[{i}]"
        t = _list(t, w)
        if len(t) != 3:
            raise ConfigError(w, "expected [frequency, cos, sin]")
        freq = t[0]
        if isinstance(freq, list):
            freq = tuple(_int(k, f"{w}[0]") for k in freq)
        else:
            freq = _int(freq, f"{w}[0]")
        out.append((freq, _rational(t[1], f"{w}[1]"), _rational(t[2], f"{w}[2]")))
    return out


def _build_system(basis, d: dict, where: str) -> BaseSystem:
    kind = _str(_req(d, "kind", where), f"{where}.kind")
    try:
        if kind == "point":
            return Point(basis)
        if kind == "rotation":
            return CircleRotation(_expr(basis, _req(d, "s", where), f"{where}.s"))
        if kind == "torus":
            return TorusTranslation(_expr(basis, _req(d, "s1", where), f"{where}.s1"),
                                    _expr(basis, _req(d, "s2", where), f"{where}.s2"))
        if kind == "odometer":
            digits = [_int(x, f"{where}.digits[{i}]", 2) for i, x in enumerate(_list(_req(d, "digits", where),
                                                                                      f"{where}.digits"))]
            return Odometer(digits, basis, repeat=d.get("repeat", "last"),
                            depth=_int(d.get("depth", 6), f"{where}.depth", 1))
        if kind == "denjoy":
            markers = [_expr(basis, m, f"{where}.markers[{i}]")
                       for i, m in enumerate(_list(_req(d, "markers", where), f"{where}.markers"))]
            return Denjoy(_expr(basis, _req(d, "s", where), f"{where}.s"), markers)
        if kind == "furstenberg":
            return Furstenberg(_expr(basis, _req(d, "theta", where), f"{where}.theta"),
                               _int(_req(d, "n", where), f"{where}.n"),
                               _trig_terms(d.get("xi", []), f"{where}.xi"))
        if kind == "declared":
            integrals = {}
            for mid, table in _obj(_req(d, "integrals", where), f"{where}.integrals").items():
                w = f"{where}.integrals.{mid}"
                integrals[mid] = {fid: _expr(basis, v, f"{w}.{fid}") for fid, v in _obj(table, w).items()}
            return DeclaredSystem(
                d.get("name", where), basis,
                _subgroup(basis, _req(d, "eigen_lift", where), f"{where}.eigen_lift"),
                _subgroup(basis, _req(d, "trace_range", where), f"{where}.trace_range"),
                integrals,
                traces_agree_on_K0=bool(d.get("traces_agree_on_K0", False)),
                minimal=bool(d.get("minimal", True)),
            )
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(where, str(e)) from None
    raise ConfigError(f"{where}.kind", f"unknown system kind {kind!r}; known: {', '.join(CATALOG)}")


def _build_ceiling(basis, d: dict, where: str):
    variant = _str(_req(d, "variant", where), f"{where}.variant")
    try:
        if variant == "constant":
            return Constant(_expr(basis, _req(d, "value", where), f"{where}.value"))
        if variant == "trig":
            return TrigPoly.make(_rational(_req(d, "constant", where), f"{where}.constant"),
                                 _trig_terms(d.get("terms", []), f"{where}.terms"),
                                 _int(d.get("dim", 1), f"{where}.dim", 1))
        if variant == "cylinder":
            depth = _int(_req(d, "depth", where), f"{where}.depth", 1)
            values = {}
            for word, v in _obj(_req(d, "values", where), f"{where}.values").items():
                w = f"{where}.values.{word}"
                try:
                    key = tuple(int(c) for c in word.split(","))
                except ValueError:
                    raise ConfigError(w, "cylinder words are comma-separated digits") from None
                values[key] = _rational(v, w)
            return CylinderLocallyConstant.make(depth, values)
        if variant == "declared":
            lb = d.get("lower_bound")
            return DeclaredFunction(_str(_req(d, "function_id", where), f"{where}.function_id"),
                                    lower_bound=None if lb is None else _number(lb, f"{where}.lower_bound"))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(where, str(e)) from None
    raise ConfigError(f"{where}.variant", f"unknown ceiling variant {variant!r}")


def _check_ceiling(system: BaseSystem, ceiling, where: str) -> None:
    if isinstance(ceiling, TrigPoly) and getattr(system, "trig_dim", None) != ceiling.dim:
        raise ConfigError(where, f"{system.kind} does not admit trigonometric polynomials of dimension {ceiling.dim}")
    if isinstance(ceiling, CylinderLocallyConstant):
        if not isinstance(system, Odometer):
            raise ConfigError(where, f"cylinder ceilings need an odometer, not {system.kind}")
        words = set(ceiling.table)
        missing = [c.word for c in system.cylinders(ceiling.depth) if c.word not in words]
        if missing:
            raise ConfigError(where, f"no value for cylinder {','.join(map(str, missing[0]))}")
    if isinstance(ceiling, DeclaredFunction):
        if not isinstance(system, DeclaredSystem):
            raise ConfigError(where, "declared ceilings need a declared system")
        for mid, table in system.integrals.items():
            if ceiling.function_id not in table:
                raise ConfigError(where, f"no integral of {ceiling.function_id!r} under measure {mid!r}")


def _ref(table: dict, key, kind: str, where: str):
    if not isinstance(key, str) or key not in table:
        raise ConfigError(where, f"undeclared {kind} {key!r}")
    return table[key]


def _validate_query(sc: Scenario, q: dict, i: int, seen: set) -> Query:
    where = f"queries[{i}]"
    qid = _str(q.get("id", f"q{i}"), f"{where}.id")
    if qid in seen:
        raise ConfigError(f"{where}.id", f"duplicate query id {qid!r}")
    seen.add(qid)
    op = _str(_req(q, "op", where), f"{where}.op")
    if op not in QUERY_OPS:
        raise ConfigError(f"{where}.op", f"unknown query op {op!r}; known: {', '.join(QUERY_OPS)}")
    b = sc.basis
    p: dict[str, Any] = {}
    if op == "realize-clopen":
        p["system"] = _ref(sc.systems, _req(q, "system", where), "system", f"{where}.system")
        if not isinstance(p["system"], Odometer):
            raise ConfigError(f"{where}.system", "clopen realization needs an odometer")
        p["gamma"] = _rational(_req(q, "gamma", where), f"{where}.gamma")
        p["max_depth"] = _int(q.get("max_depth", 12), f"{where}.max_depth", 0)
        return Query(qid, op, q, p)
    fl = p["flow"] = _ref(sc.flows, _req(q, "flow", where), "flow", f"{where}.flow")
    base = fl.base
    if op == "decide":
        if ("rho" in q) == ("t" in q):
            raise ConfigError(where, "give exactly one of 'rho' (reciprocal time) or 't'")
        key = "rho" if "rho" in q else "t"
        p[key] = _expr(b, q[key], f"{where}.{key}")
        if key == "rho" and not p[key]:
            raise ConfigError(f"{where}.rho", "rho = 0 corresponds to no finite time")
    elif op == "lambdak":
        mid = q.get("measure")
        if mid is not None and mid not in base.measure_ids():
            raise ConfigError(f"{where}.measure", f"unknown measure {mid!r}; known: {base.measure_ids()}")
        p["measure"] = mid
    elif op == "decompose":
        p["t"] = _expr(b, _req(q, "t", where), f"{where}.t")
        if not fl.is_standard:
            raise ConfigError(f"{where}.flow", "decomposition needs the standard suspension (constant ceiling 1)")
    elif op == "simulate":
        p["t"], p["t_exact"] = _time(b, _req(q, "t", where), f"{where}.t")
        p["N"] = _int(_req(q, "N", where), f"{where}.N", 1)
        grid = _list(q.get("grid", [64, 64]), f"{where}.grid")
        if len(grid) != 2:
            raise ConfigError(f"{where}.grid", "expected [g1, g2]")
        p["grid"] = (_int(grid[0], f"{where}.grid[0]", 1), _int(grid[1], f"{where}.grid[1]", 1))
        if not isinstance(base, (CircleRotation, Denjoy, Odometer, Point)):
            raise ConfigError(f"{where}.flow", f"coverage chart unavailable for {base.kind}")
    elif op in ("detect", "cycle"):
        p["lambda"] = _expr(b, _req(q, "lambda", where), f"{where}.lambda")
        p["N"] = _int(_req(q, "N", where), f"{where}.N", 1)
        if not base.uniquely_ergodic:
            raise ConfigError(f"{where}.flow", f"{op} needs a uniquely ergodic base, {base.kind} is not")
        if op == "detect":
            p["order"] = _int(q.get("order", 8), f"{where}.order", 0)
            try:
                base.character_family(0)
            except NotImplementedError:
                raise ConfigError(f"{where}.flow", f"{base.kind} provides no test characters") from None
    elif op == "conjugacy-check":
        p["t"], _ = _time(b, _req(q, "t", where), f"{where}.t")
        p["samples"] = _int(q.get("samples", 1000), f"{where}.samples", 1)
        if not (isinstance(base, CircleRotation) and fl.is_standard):
            raise ConfigError(f"{where}.flow", "conjugacy check needs the standard suspension of a rotation")
    return Query(qid, op, q, p)


def build_scenario(cfg: Any) -> Scenario:
    cfg = _obj(cfg, "config")
    version = cfg.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r}")
    basis = _build_basis(cfg)
    systems = {name: _build_system(basis, _obj(d, f"systems.{name}"), f"systems.{name}")
               for name, d in _obj(cfg.get("systems", {}), "systems").items()}
    ceilings = {name: _build_ceiling(basis, _obj(d, f"ceilings.{name}"), f"ceilings.{name}")
                for name, d in _obj(cfg.get("ceilings", {}), "ceilings").items()}
    flows = {}
    for name, d in _obj(cfg.get("flows", {}), "flows").items():
        where = f"flows.{name}"
        d = _obj(d, where)
        system = _ref(systems, _req(d, "system", where), "system", f"{where}.system")
        ceiling = _ref(ceilings, _req(d, "ceiling", where), "ceiling", f"{where}.ceiling")
        _check_ceiling(system, ceiling, f"{where}.ceiling")
        try:
            flows[name] = SuspensionFlow(system, ceiling)
        except ValueError as e:
            raise ConfigError(where, str(e)) from None
    th = _obj(cfg.get("thresholds", {}), "thresholds")
    thresholds = {
        "eigen_positive": _number(th.get("eigen_positive", numlab.DEFAULT_EIGEN_POSITIVE), "thresholds.eigen_positive"),
        "eigen_negative": _number(th.get("eigen_negative", numlab.DEFAULT_EIGEN_NEGATIVE), "thresholds.eigen_negative"),
    }
    sc = Scenario(basis, systems, ceilings, flows, [], _int(cfg.get("seed", 0), "seed", 0), thresholds,
                  cfg.get("out"), cfg)
    seen: set = set()
    sc.queries = [_validate_query(sc, _obj(q, f"queries[{i}]"), i, seen)
                  for i, q in enumerate(_list(cfg.get("queries", []), "queries"))]
    return sc


def load_config(path: Union[str, Path]) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(str(path), e.strerror or str(e)) from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    return build_scenario(cfg)


# --------------------------------------------------------------------------
# Query execution
# --------------------------------------------------------------------------


def _certificate_json(cert) -> dict:
    return {
        "rho": exact_json(cert.rho),
        "r": fmt_q(cert.r),
        "lambda": exact_json(cert.lam),
        "combination": list(cert.combination),
        "generators": [exact_json(g) for g in cert.generators],
    }


def _verdict_json(v, basis: GeneratorBasis) -> dict:
    out: dict[str, Any] = {"verdict": v.name, "reason": v.reason}
    if isinstance(v, Minimal):
        out["conditional_on"] = v.conditional_on or basis.independence_note
    elif isinstance(v, NotMinimal) and v.certificate is not None:
        out["certificate"] = _certificate_json(v.certificate)
    return out


def _start_point(flow: SuspensionFlow, rng: np.random.Generator) -> SuspensionPoint:
    x = flow.base.random_state(rng)
    return flow.point(x, float(rng.random()) * flow.f(x))


def _q_decide(sc, q, rng, out_dir):
    fl = q.params["flow"]
    v = spectra.decide_time_map(fl, q.params["rho"]) if "rho" in q.params else spectra.decide_time(fl, q.params["t"])
    return _verdict_json(v, sc.basis)


def _q_eigens(sc, q, rng, out_dir):
    eg = spectra.suspension_eigen_group(q.params["flow"])
    if isinstance(eg, Unknown):
        return {"verdict": "Unknown", "reason": eg.reason}
    out = {"generators": [exact_json(g) for g in eg.group.generators], "provenance": eg.provenance}
    if isinstance(q.params["flow"].base, Odometer):
        out["truncated_at_depth"] = q.params["flow"].base.depth
    return out


def _q_lambdak(sc, q, rng, out_dir):
    try:
        im = spectra.lambdaK_trace_image(q.params["flow"], q.params["measure"])
    except UnknownGroupError as e:
        return {"verdict": "Unknown", "reason": str(e)}
    return {
        "measure": im.measure_id,
        "image": [exact_json(g) for g in im.subgroup.generators],
        "trace_range": [exact_json(g) for g in im.trace_range.generators],
        "containment": [None if c is None else list(c) for c in im.containment],
        "contained": im.contained,
        "equals_trace_range": im.equals_trace_range(),
        "missing_from_image": [exact_json(g) for g in im.missing_from_image()],
    }


def _q_decompose(sc, q, rng, out_dir):
    fl = q.params["flow"]
    d = spectra.rieffel_decomposition(fl, q.params["t"])
    eg = spectra.suspension_eigen_group(fl)
    return {
        "t": exact_json(d.t), "r1": fmt_q(d.r1), "r2": fmt_q(d.r2), "gamma": exact_json(d.gamma),
        "gamma_combination": list(d.gamma_combination or ()),
        "eigen_generators": [exact_json(g) for g in eg.group.generators],
    }


def _q_clopen(sc, q, rng, out_dir):
    cyl = spectra.clopen_realization(q.params["system"], q.params["gamma"], q.params["max_depth"])
    return {
        "gamma": fmt_q(q.params["gamma"]),
        "cylinders": [{"word": list(c.word), "measure": fmt_q(c.measure)} for c in cyl],
    }


def _q_simulate(sc, q, rng, out_dir):
    fl = q.params["flow"]
    start = _start_point(fl, rng)
    rep = numlab.orbit_coverage(fl, q.params["t"], start, q.params["N"], q.params["grid"])
    path = emit_csv(out_dir / f"{q.id}-coverage.csv", rep.curve)
    out = {"coverage": rep.fraction, "grid": list(rep.grid), "steps": rep.steps, "evidence": [path.name]}
    if q.params["t_exact"] is not None:
        v = spectra.decide_time(fl, q.params["t_exact"])
        out["exact_verdict"] = v.name
    return out


def _q_detect(sc, q, rng, out_dir):
    fl = q.params["flow"]
    start = fl.base.random_state(rng)
    tests = numlab.character_tests(fl, q.params["order"])
    rep = numlab.weyl_detector(fl, float(q.params["lambda"]), start, q.params["N"], tests,
                               positive=sc.thresholds["eigen_positive"], negative=sc.thresholds["eigen_negative"],
                               family=f"characters-{q.params['order']}")
    path = emit_csv(out_dir / f"{q.id}-detector.csv", rep.curve)
    out = {"detector": rep.verdict, "final": rep.final, "family": rep.family, "evidence": [path.name]}
    eg = spectra.suspension_eigen_group(fl)
    if not isinstance(eg, Unknown):
        out["exact_member"] = eg.group.contains(q.params["lambda"])
    return out


def _q_cycle(sc, q, rng, out_dir):
    fl = q.params["flow"]
    lam = q.params["lambda"]
    est = numlab.asymptotic_cycle_estimate(fl, float(lam), fl.base.random_state(rng), q.params["N"])
    tau = fl.mean_ceiling()
    exact = lam * tau if lam.is_rational() or tau.is_rational() else None
    out = {"estimate": est, "tau_f": exact_json(tau)}
    if exact is not None:
        out["exact"] = exact_json(exact)
        out["residual"] = abs(est - float(exact))
    return out


def _q_conjugacy(sc, q, rng, out_dir):
    seed = int(rng.integers(0, 2**63 - 1))
    return {"residual": numlab.torus_conjugacy_check(q.params["flow"], q.params["t"], q.params["samples"], seed)}


_HANDLERS: dict[str, Callable] = {
    "decide": _q_decide,
    "eigens": _q_eigens,
    "lambdak": _q_lambdak,
    "decompose": _q_decompose,
    "realize-clopen": _q_clopen,
    "simulate": _q_simulate,
    "detect": _q_detect,
    "cycle": _q_cycle,
    "conjugacy-check": _q_conjugacy,
}


def run_query(sc: Scenario, index: int, q: Query, out_dir: Path) -> dict:
    """One report record.  Randomness comes from (seed, index) only, so the
    result does not depend on scheduling."""
    rng = np.random.default_rng([sc.seed, index])
    t0 = time.perf_counter()
    try:
        body = _HANDLERS[q.op](sc, q, rng, out_dir)
    except Exception as e:
        raise QueryError(q.id, e) from e
    rec = {"id": q.id, "op": q.op, "query": q.raw}
    rec["status"] = "unknown" if body.get("verdict") == "Unknown" else "ok"
    rec.update(body)
    rec["independence_note"] = sc.basis.independence_note
    rec["wall_clock_s"] = round(time.perf_counter() - t0, 6)
    return rec


def execute(sc: Scenario, out_dir: Union[str, Path], threads: int = 1) -> dict:
    """Run every query; records keep query order whatever ``threads`` is."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()

    def task(item):
        i, q = item
        try:
            return run_query(sc, i, q, out_dir)
        except QueryError as e:
            return e

    items = list(enumerate(sc.queries))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(task, items))
    else:
        results = [task(it) for it in items]
    records, failure = [], None
    for r in results:
        if isinstance(r, QueryError):
            failure = failure or r
            records.append({"id": r.query_id, "status": "error", "error": str(r.cause)})
        else:
            records.append(r)
    report = {
        "schema_version": SCHEMA_VERSION,
        "seed": sc.seed,
        "basis": {
            "id": sc.basis.id,
            "generators": [{"name": g.name, "refiner": g.kind} for g in sc.basis.generators],
            "independence_note": sc.basis.independence_note,
        },
        "thresholds": sc.thresholds,
        "records": records,
        "summary": {
            "queries": len(records),
            "unknown": sum(r["status"] == "unknown" for r in records),
            "errors": sum(r["status"] == "error" for r in records),
        },
        "wall_clock_s": round(time.perf_counter() - t0, 6),
    }
    (out_dir / REPORT_NAME).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    if failure is not None:
        raise failure
    return report


# --------------------------------------------------------------------------
# Independent report checker (fractions only)
# --------------------------------------------------------------------------


def _vec(d: dict) -> dict[str, Fraction]:
    return {k: Fraction(v) for k, v in d.items() if Fraction(v) != 0}


def _vadd(a: dict, b: dict, k: Fraction = Fraction(1)) -> dict:
    out = dict(a)
    for name, c in b.items():
        out[name] = out.get(name, Fraction(0)) + k * c
    return {n: c for n, c in out.items() if c != 0}


def _vscale(a: dict, k: Fraction) -> dict:
    return {n: c * k for n, c in a.items() if c * k != 0}


def _combo(ns: Sequence[int], gens: Sequence[dict]) -> dict:
    total: dict = {}
    for n, g in zip(ns, gens):
        total = _vadd(total, _vec(g), Fraction(n))
    return total


def check_record(rec: dict) -> Optional[str]:
    """None when the record's exact claims recombine, else a reason."""
    op = rec.get("op")
    cert = rec.get("certificate")
    if op == "decide" and rec.get("verdict") == "NotMinimal" and cert is not None:
        r = Fraction(cert["r"])
        if r == 0:
            return "r = 0"
        if len(cert["combination"]) != len(cert["generators"]):
            return "combination and generators differ in length"
        lam = _vec(cert["lambda"])
        if _vscale(lam, r) != _vec(cert["rho"]):
            return "r * lambda != rho"
        if _combo(cert["combination"], cert["generators"]) != lam:
            return "lambda is not the stated combination of eigen generators"
    elif op == "decompose":
        r1, r2 = Fraction(rec["r1"]), Fraction(rec["r2"])
        gamma = _vec(rec["gamma"])
        if _vadd(_vscale(gamma, r2), {"1": r1}) != _vec(rec["t"]):
            return "r1 + r2 * gamma != t"
        if gamma and _combo(rec["gamma_combination"], rec["eigen_generators"]) != gamma:
            return "gamma is not the stated combination of eigen generators"
    elif op == "realize-clopen":
        words = [tuple(c["word"]) for c in rec["cylinders"]]
        for i, a in enumerate(words):
            for b in words[i + 1:]:
                n = min(len(a), len(b))
                if a[:n] == b[:n]:
                    return f"cylinders {a} and {b} overlap"
        if sum((Fraction(c["measure"]) for c in rec["cylinders"]), Fraction(0)) != Fraction(rec["gamma"]):
            return "cylinder measures do not sum to gamma"
    elif op == "lambdak":
        for g, c in zip(rec["image"], rec["containment"]):
            if c is not None and _combo(c, rec["trace_range"]) != _vec(g):
                return f"containment certificate for {g} does not recombine"
    return None


def verify_report(path: Union[str, Path]) -> tuple[int, list[str]]:
    """Returns (number of failures, printable lines)."""
    report = json.loads(Path(path).read_text(encoding="utf-8"))
    if report.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {report.get('schema_version')!r}")
    lines, failures = [], 0
    for rec in report["records"]:
        if rec.get("status") == "error":
            continue
        try:
            why = check_record(rec)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            why = f"malformed record: {e}"
        if why is None:
            lines.append(f"{rec['id']}: ok")
        else:
            failures += 1
            lines.append(f"{rec['id']}: FAIL {why}")
    return failures, lines


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minflow", description="Minimality of time maps of suspension flows.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a scenario config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", type=Path, default=None, help="output directory (default: config 'out' or ./out)")
    run.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    run.add_argument("--threads", type=int, default=1, help="worker threads (affects speed only)")
    ver = sub.add_parser("verify-report", help="recombine every certificate in a report exactly")
    ver.add_argument("report", type=Path)
    sub.add_parser("list-catalog", help="list system kinds, ceiling variants and query ops")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-catalog":
        for kind, text in CATALOG.items():
            print(f"system {kind}: {text}")
        for v in ("constant", "trig", "cylinder", "declared"):
            print(f"ceiling {v}")
        for op in QUERY_OPS:
            print(f"query {op}")
        return 0
    if args.command == "verify-report":
        try:
            failures, lines = verify_report(args.report)
        except (OSError, ValueError, KeyError) as e:
            print(f"error: cannot read report {args.report}: {e}", file=sys.stderr)
            return 2
        print("\n".join(lines))
        print(f"{len(lines) - failures} ok, {failures} failed")
        return 1 if failures else 0
    if args.seed is not None and args.seed < 0:
        print("error: --seed must be non-negative", file=sys.stderr)
        return 2
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        sc = load_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    if args.seed is not None:
        sc.seed = args.seed
    out = args.out or Path(sc.out or "out")
    try:
        report = execute(sc, out, args.threads)
    except QueryError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    s = report["summary"]
    print(f"{s['queries']} queries, {s['unknown']} unknown; report in {out / REPORT_NAME}")
    for rec in report["records"]:
        if rec["status"] == "unknown":
            print(f"  flagged {rec['id']}: Unknown ({rec.get('reason', '')})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
