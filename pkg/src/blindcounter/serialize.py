"""Canonical JSON for vectors, semilinear sets, automata and groups.

Output is byte-stable: keys sorted, two-space indent, trailing newline.
Integers of magnitude 2^53 or more are written as decimal strings so that
readers with double-precision numbers lose nothing; loaders accept both.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .blind import Alphabet, AutomatonError, BlindAutomaton, Edge, Letter
from .cho import ChoAutomaton
from .groups import FiniteGroupTable, GenMap, GroupElement, VAGroup
from .semilinear import LinearSet, SemilinearSet

SAFE = 2 ** 53


class FormatError(ValueError):
    """Input JSON does not describe the expected object."""


def enc_int(x: int):
    return int(x) if abs(x) < SAFE else str(int(x))


def dec_int(x) -> int:
    if isinstance(x, bool):
        raise FormatError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            pass
    raise FormatError(f"expected an integer, got {x!r}")


def enc_vec(v) -> list:
    return [enc_int(x) for x in v]


def dec_vec(v, dim: int | None = None) -> tuple[int, ...]:
    if not isinstance(v, list):
        raise FormatError(f"expected an integer array, got {v!r}")
    out = tuple(dec_int(x) for x in v)
    if dim is not None and len(out) != dim:
        raise FormatError(f"vector {list(out)} does not have dimension {dim}")
    return out


def _plain(obj: Any) -> Any:
    """Recursively encode ints, fractions and tuples for JSON."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return enc_int(obj)
    if isinstance(obj, Fraction):
        return enc_int(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Canonical JSON text for a plain structure or a library object."""
    if not isinstance(obj, (dict, list, tuple, int, str, Fraction)) or isinstance(obj, bool):
        obj = to_json(obj)
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# semilinear sets


def linear_to_json(L: LinearSet) -> dict:
    return {"offset": enc_vec(L.offset), "periods": [enc_vec(p) for p in L.periods]}


def linear_from_json(d: dict, dim: int | None = None) -> LinearSet:
    _require(d, ("offset", "periods"))
    off = dec_vec(d["offset"], dim)
    return LinearSet(off, tuple(dec_vec(p, len(off)) for p in d["periods"]))


def semilinear_to_json(S: SemilinearSet) -> dict:
    return {"dim": S.dim, "components": [linear_to_json(c) for c in S]}


def semilinear_from_json(d: dict) -> SemilinearSet:
    _require(d, ("dim", "components"))
    dim = dec_int(d["dim"])
    if dim < 0:
        raise FormatError("negative dimension")
    return SemilinearSet(dim, tuple(linear_from_json(c, dim) for c in d["components"]))


# ---------------------------------------------------------------------------
# automata


def _alphabet_to_json(A: Alphabet) -> list:
    return [{"symbol": x.symbol, "inverse": x.inverse} for x in A.letters()]


def _alphabet_from_json(items) -> Alphabet:
    if not isinstance(items, list):
        raise FormatError("alphabet must be a list")
    letters = []
    for item in items:
        _require(item, ("symbol", "inverse"))
        letters.append(Letter(str(item["symbol"]), str(item["inverse"])))
    return Alphabet(letters)


def _state(x):
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise FormatError(f"state names must be strings or integers, got {x!r}")


def _edges_to_json(edges) -> list:
    return [{"src": e.src, "inc": enc_vec(e.inc), "input": e.input, "dst": e.dst} for e in edges]


def _edges_from_json(items, dim: int) -> tuple[Edge, ...]:
    out = []
    for item in items:
        _require(item, ("src", "inc", "input", "dst"))
        out.append(Edge(_state(item["src"]), dec_vec(item["inc"], dim), item["input"],
                        _state(item["dst"])))
    return tuple(out)


def automaton_to_json(A: BlindAutomaton) -> dict:
    return {
        "dim": A.dim,
        "alphabet": _alphabet_to_json(A.alphabet),
        "states": list(A.states),
        "initial": A.initial,
        "terminals": [q for q in A.states if q in A.terminals],
        "edges": _edges_to_json(A.edges),
    }


def automaton_from_json(d: dict) -> BlindAutomaton:
    _require(d, ("dim", "alphabet", "states", "initial", "terminals", "edges"))
    if d.get("kind", "blind") != "blind":
        raise FormatError(f"expected a blind automaton, got kind {d['kind']!r}")
    dim = dec_int(d["dim"])
    return BlindAutomaton(dim, _alphabet_from_json(d["alphabet"]),
                          tuple(_state(q) for q in d["states"]), _state(d["initial"]),
                          frozenset(_state(q) for q in d["terminals"]),
                          _edges_from_json(d["edges"], dim))


def cho_to_json(B: ChoAutomaton) -> dict:
    return {
        "kind": "cho",
        "dim": B.k,
        "alphabet": _alphabet_to_json(B.alphabet),
        "states": list(B.states),
        "initial": B.initial,
        "edges": _edges_to_json(B.edges),
        "accept_sets": {str(q): semilinear_to_json(B.accept_sets[q]) for q in B.states},
    }


def cho_from_json(d: dict) -> ChoAutomaton:
    _require(d, ("kind", "dim", "alphabet", "states", "initial", "edges", "accept_sets"))
    if d["kind"] != "cho":
        raise FormatError(f"expected kind 'cho', got {d['kind']!r}")
    k = dec_int(d["dim"])
    states = tuple(_state(q) for q in d["states"])
    by_name = {str(q): q for q in states}
    sets = {}
    for name, S in d["accept_sets"].items():
        if name not in by_name:
            raise FormatError(f"accept set for unknown state {name!r}")
        sets[by_name[name]] = semilinear_from_json(S)
    return ChoAutomaton(k, _alphabet_from_json(d["alphabet"]), states, _state(d["initial"]),
                        _edges_from_json(d["edges"], k), sets)


# ---------------------------------------------------------------------------
# groups


def group_to_json(g: GenMap) -> dict:
    """Group plus generators; inverse letters are implied by the x' naming."""
    G = g.group
    for x in g.alphabet.letters():
        if x.inverse != x.symbol + "'":
            raise FormatError(f"letter {x.symbol!r} does not use the x' inverse naming")
    return {
        "n": G.n,
        "F": {"size": G.F.size, "mult": [list(r) for r in G.F.mult],
              "inverse": list(G.F.inverse), "identity": G.F.identity},
        "action": [[enc_vec(row) for row in m] for m in G.action],
        "generators": {x.symbol: {"vec": enc_vec(g.images[x.symbol].vec), "f": g.images[x.symbol].f}
                       for x in g.alphabet.letters()},
    }


def group_from_json(d: dict) -> GenMap:
    _require(d, ("n", "F", "action", "generators"))
    F = d["F"]
    _require(F, ("size", "mult", "inverse", "identity"))
    size = dec_int(F["size"])
    table = FiniteGroupTable(tuple(tuple(dec_int(x) for x in row) for row in F["mult"]),
                             tuple(dec_int(x) for x in F["inverse"]), dec_int(F["identity"]))
    if table.size != size:
        raise FormatError(f"F.size is {size} but the table has {table.size} rows")
    n = dec_int(d["n"])
    G = VAGroup(n, table, tuple(tuple(dec_vec(row, n) for row in m) for m in d["action"]))
    gens = {}
    for name, item in d["generators"].items():
        _require(item, ("vec", "f"))
        if name.endswith("'"):
            raise FormatError(f"list generators only, not inverse letters ({name!r})")
        gens[name] = GroupElement(dec_vec(item["vec"], n), dec_int(item["f"]))
    return GenMap.from_generators(G, dict(sorted(gens.items())))


# ---------------------------------------------------------------------------
# dispatch


def to_json(obj) -> dict:
    if isinstance(obj, SemilinearSet):
        return semilinear_to_json(obj)
    if isinstance(obj, LinearSet):
        return linear_to_json(obj)
    if isinstance(obj, BlindAutomaton):
        return automaton_to_json(obj)
    if isinstance(obj, ChoAutomaton):
        return cho_to_json(obj)
    if isinstance(obj, GenMap):
        return group_to_json(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def from_json(d: dict):
    """Guess the object kind from its keys."""
    if not isinstance(d, dict):
        raise FormatError("top-level JSON value must be an object")
    if d.get("kind") == "cho":
        return cho_from_json(d)
    if "edges" in d:
        return automaton_from_json(d)
    if "components" in d:
        return semilinear_from_json(d)
    if "generators" in d:
        return group_from_json(d)
    if "offset" in d:
        return linear_from_json(d)
    raise FormatError("unrecognised JSON object")


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    try:
        return from_json(data)
    except (KeyError, TypeError, AutomatonError) as exc:
        raise FormatError(str(exc)) from exc


def load(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def _require(d, keys):
    if not isinstance(d, dict):
        raise FormatError(f"expected an object with keys {list(keys)}")
    missing = [k for k in keys if k not in d]
    if missing:
        raise FormatError(f"missing keys {missing}")
