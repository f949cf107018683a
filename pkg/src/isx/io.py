"""JSON encoding of instances and approximations.

Blocks are objects keyed by degree; absent or all-zero blocks are omitted
and every rational is written as a string ("3", "-2/5").
"""
from __future__ import annotations

import json
from typing import Any

from .approximation import Approximation
from .globalspace import GlobalDatum
from .graded import ChainComplex, GradedMap, GradedPairing, GradedSpace, cone_model
from .instance import Instance
from .linalg import Matrix, format_fraction, to_fraction
from .report import ValidationError
from .tube import Ladder, TubeDatum


class SchemaError(ValidationError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


LADDER_KEYS = ("absolute_dims", "relative_dims", "b_to_p", "p_to_rel", "rel_bdry", "D_abs_rel")
APPROX_KEYS = ("dims", "f", "differential")


# --- encoding -----------------------------------------------------------------

def encode_matrix(m: Matrix) -> list[list[str]]:
    return [[format_fraction(x) for x in row] for row in m.tolist()]


def encode_blocks(obj: GradedMap | GradedPairing) -> dict[str, Any]:
    degrees = obj.source.degrees() if isinstance(obj, GradedMap) else obj.left.degrees()
    out = {}
    for i in degrees:
        b = obj.block(i)
        if b.rows and b.cols and not b.is_zero():
            out[str(i)] = encode_matrix(b)
    return out


def _encode_ladder(lad: Ladder) -> dict[str, Any]:
    return {
        "absolute_dims": list(lad.P.dims),
        "relative_dims": list(lad.P_rel.dims),
        "b_to_p": encode_blocks(lad.b_to_p),
        "p_to_rel": encode_blocks(lad.p_to_rel),
        "rel_bdry": encode_blocks(lad.rel_bdry),
        "D_abs_rel": encode_blocks(lad.D_abs_rel),
    }


def encode_approximation(a: Approximation) -> dict[str, Any]:
    out = {"dims": list(a.space.dims), "f": encode_blocks(a.f)}
    d = encode_blocks(a.A.differential)
    if d:
        out["differential"] = d
    return out


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    t, g = inst.tube, inst.glob
    lo, hi = t.degree_range
    if t.witt:
        tube = {**_encode_ladder(t.ladder("p")), "D_bdry": encode_blocks(t.D_bdry)}
    else:
        tube = {"D_bdry": encode_blocks(t.D_bdry), "p": _encode_ladder(t.ladder("p")),
                "q": _encode_ladder(t.ladder("q"))}
    out: dict[str, Any] = {
        "name": inst.name,
        "dimension": t.N,
        "witt": t.witt,
        "min_degree": lo,
        "max_degree": hi,
        "boundary": {"dims": list(t.B.dims)},
        "tube": tube,
        "complement": {"dims": list(g.M.dims), "iota": encode_blocks(g.iota),
                       "lefschetz": encode_blocks(g.lefschetz)},
    }
    if inst.approximations:
        out["approximations"] = approximations_to_dict(t.witt, inst.approximations)
    return out


def approximations_to_dict(witt: bool, approximations) -> dict[str, Any]:
    if witt:
        return encode_approximation(approximations["p"])
    return {x: encode_approximation(a) for x, a in sorted(approximations.items())}


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def dump_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


# --- decoding -----------------------------------------------------------------

def _expect(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise SchemaError(where, message)


def _object(data: Any, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    _expect(isinstance(data, dict), where, "expected an object")
    unknown = sorted(set(data) - set(required) - set(optional))
    _expect(not unknown, where, f"unknown field(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in data]
    _expect(not missing, where, f"missing field(s) {', '.join(missing)}")
    return data


def _int(data: Any, where: str) -> int:
    _expect(isinstance(data, int) and not isinstance(data, bool), where, "expected an integer")
    return data


def _dims(data: Any, where: str, lo: int, hi: int) -> GradedSpace:
    _expect(isinstance(data, list), where, "expected a list of dimensions")
    n = hi - lo + 1
    _expect(len(data) <= n, where, f"{len(data)} entries for {n} degrees")
    dims = [_int(x, f"{where}[{k}]") for k, x in enumerate(data)]
    _expect(all(d >= 0 for d in dims), where, "negative dimension")
    return GradedSpace(lo, hi, tuple(dims + [0] * (n - len(dims))))


def decode_matrix(data: Any, where: str, shape: tuple[int, int]) -> Matrix:
    rows, cols = shape
    _expect(isinstance(data, list), where, "expected a list of rows")
    _expect(len(data) == rows, where, f"expected {rows} rows, got {len(data)}")
    out = []
    for r, row in enumerate(data):
        _expect(isinstance(row, list) and len(row) == cols, f"{where}[{r}]", f"expected a row of {cols} entries")
        vals = []
        for c, x in enumerate(row):
            try:
                vals.append(to_fraction(x))
            except (TypeError, ValueError) as e:
                raise SchemaError(f"{where}[{r}][{c}]", str(e)) from None
        out.append(vals)
    return Matrix(out, rows, cols)


def _blocks(data: Any, where: str, degrees: range, shape) -> dict[int, Matrix]:
    _expect(isinstance(data, dict), where, "expected an object keyed by degree")
    out = {}
    for key, val in data.items():
        try:
            i = int(key)
        except ValueError:
            raise SchemaError(f"{where}.{key}", "degree keys must be integers") from None
        _expect(i in degrees, f"{where}.{key}", f"degree outside {degrees.start}..{degrees.stop - 1}")
        out[i] = decode_matrix(val, f"{where}.{key}", shape(i))
    return out


def _map(data, where, source: GradedSpace, target: GradedSpace, shift: int) -> GradedMap:
    blocks = _blocks(data, where, source.degrees(), lambda i: (target.dim(i + shift), source.dim(i)))
    return GradedMap(source, target, shift, blocks)


def _pairing(data, where, left: GradedSpace, right: GradedSpace, total: int) -> GradedPairing:
    blocks = _blocks(data, where, left.degrees(), lambda i: (left.dim(i), right.dim(total - i)))
    return GradedPairing(left, right, total, blocks)


def _ladder_spaces(data, where, lo, hi):
    _object(data, where, LADDER_KEYS)
    return (_dims(data["absolute_dims"], f"{where}.absolute_dims", lo, hi),
            _dims(data["relative_dims"], f"{where}.relative_dims", lo, hi))


def _approximation(data, where, perversity, B: GradedSpace) -> Approximation:
    _object(data, where, ("dims", "f"), ("differential",))
    space = _dims(data["dims"], f"{where}.dims", B.min_degree, B.max_degree)
    f = _map(data["f"], f"{where}.f", space, B, 0)
    d = _map(data.get("differential", {}), f"{where}.differential", space, space, -1)
    try:
        return Approximation(perversity, ChainComplex(space, d), f)
    except ValueError as e:
        raise SchemaError(where, str(e)) from None


def instance_from_dict(data: Any) -> Instance:
    _object(data, "", ("name", "dimension", "witt", "min_degree", "max_degree", "boundary", "tube", "complement"),
            ("approximations",))
    _expect(isinstance(data["name"], str), "name", "expected a string")
    N = _int(data["dimension"], "dimension")
    _expect(isinstance(data["witt"], bool), "witt", "expected true or false")
    witt = data["witt"]
    lo, hi = _int(data["min_degree"], "min_degree"), _int(data["max_degree"], "max_degree")
    _expect(lo <= hi, "max_degree", "must not be below min_degree")
    B = _dims(_object(data["boundary"], "boundary", ("dims",))["dims"], "boundary.dims", lo, hi)

    tube_data = data["tube"]
    if witt:
        _object(tube_data, "tube", LADDER_KEYS + ("D_bdry",))
        sub = {"p": ({k: tube_data[k] for k in LADDER_KEYS}, "tube")}
    else:
        _object(tube_data, "tube", ("D_bdry", "p", "q"))
        sub = {x: (tube_data[x], f"tube.{x}") for x in ("p", "q")}
    spaces = {x: _ladder_spaces(d, w, lo, hi) for x, (d, w) in sub.items()}
    ladders = {}
    for x, (d, w) in sub.items():
        P, Prel = spaces[x]
        dual_rel = spaces["p" if witt else ("q" if x == "p" else "p")][1]
        ladders[x] = Ladder(
            P, Prel,
            _map(d["b_to_p"], f"{w}.b_to_p", B, P, 0),
            _map(d["p_to_rel"], f"{w}.p_to_rel", P, Prel, 0),
            _map(d["rel_bdry"], f"{w}.rel_bdry", Prel, B, -1),
            _pairing(d["D_abs_rel"], f"{w}.D_abs_rel", P, dual_rel, N),
        )
    tube = TubeDatum(N, witt, B, _pairing(tube_data["D_bdry"], "tube.D_bdry", B, B, N - 1), ladders)

    comp = _object(data["complement"], "complement", ("dims", "iota", "lefschetz"))
    M = _dims(comp["dims"], "complement.dims", lo, hi)
    iota = _map(comp["iota"], "complement.iota", B, M, 0)
    R = cone_model(iota).space
    L = _pairing(comp["lefschetz"], "complement.lefschetz", R, M, N)

    approx = {}
    if "approximations" in data:
        ad = data["approximations"]
        if witt:
            approx["p"] = _approximation(ad, "approximations", "p", B)
        else:
            _object(ad, "approximations", (), ("p", "q"))
            approx = {x: _approximation(v, f"approximations.{x}", x, B) for x, v in ad.items()}
    return Instance(data["name"], tube, GlobalDatum(M, iota, L), approx)


def loads_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", f"malformed JSON ({e.msg})") from None
    return instance_from_dict(data)
