"""Versioned JSON serialization for the workbench's object kinds.

All files carry a "format": 1 field; matrices are row-major integer
arrays; simplicial-set maps are arrays aligned with the element lists.
"""

from __future__ import annotations

import json

from .abelian import PresentedGroup
from .delta_core import DeltaSAb, SAb
from .intlin import Mat
from .moore import BisimplicialAbelianGroup
from .pi_algebra import PiAlgebraFragment
from .simplicial import BASE, FiniteSimplicialSet
from .synthesis import HomotopyDegeneracyData

FORMAT = 1


class SchemaError(ValueError):
    pass


def _check_format(data, kind):
    if data.get("format") != FORMAT:
        raise SchemaError(f"{kind}: unsupported format {data.get('format')!r}, expected {FORMAT}")
    declared = data.get("kind")
    if declared is not None and declared != kind:
        raise SchemaError(f"expected a {kind} file, found kind {declared!r}")


def mat_to_json(M):
    return [row[:] for row in M.a]


def mat_from_json(rows, r, c):
    if len(rows) != r or any(len(row) != c for row in rows):
        raise SchemaError(f"matrix shape mismatch: expected {r}x{c}")
    return Mat(r, c, [[int(x) for x in row] for row in rows])


def group_to_json(G):
    return {"gens": G.ngens, "relations": mat_to_json(G.rels)}


def group_from_json(data):
    g = int(data["gens"])
    rels = data.get("relations", [])
    if not rels:
        return PresentedGroup(g, Mat(g, 0, [[] for _ in range(g)]))
    return PresentedGroup(g, mat_from_json(rels, g, len(rels[0])))


def sset_to_json(K):
    out = {
        "format": FORMAT,
        "kind": "sset",
        "cap": K.cap,
        "basepoint": BASE,
        "elements": [list(K.elements[n]) for n in range(K.cap + 1)],
        "faces": {
            str(n): [[K.faces[n][i][x] for x in K.elements[n]] for i in range(n + 1)]
            for n in range(1, K.cap + 1)
        },
        "degeneracies": {
            str(n): [[K.degeneracies[n][j][x] for x in K.elements[n]] for j in range(n + 1)]
            for n in range(0, K.cap)
        },
    }
    return out


def sset_from_json(data):
    _check_format(data, "sset")
    cap = int(data["cap"])
    elements = [list(map(str, row)) for row in data["elements"]]
    faces = {}
    for n_str, tables in data["faces"].items():
        n = int(n_str)
        faces[n] = [
            {x: str(img) for x, img in zip(elements[n], table)} for table in tables
        ]
    degeneracies = {}
    for n_str, tables in data["degeneracies"].items():
        n = int(n_str)
        degeneracies[n] = [
            {x: str(img) for x, img in zip(elements[n], table)} for table in tables
        ]
    return FiniteSimplicialSet(cap, elements, faces, degeneracies)


def dsab_to_json(V):
    out = {
        "format": FORMAT,
        "kind": "dsab",
        "cap": V.cap,
        "levels": [group_to_json(g) for g in V.levels],
        "faces": {str(n): [mat_to_json(V.face(n, i)) for i in range(n + 1)] for n in range(1, V.cap + 1)},
    }
    if isinstance(V, SAb):
        out["degeneracies"] = {
            str(n): [mat_to_json(V.degeneracy(n, j)) for j in range(n + 1)] for n in range(0, V.cap)
        }
    return out


def dsab_from_json(data):
    _check_format(data, "dsab")
    cap = int(data["cap"])
    levels = [group_from_json(g) for g in data["levels"]]
    faces = {}
    for n_str, mats in data["faces"].items():
        n = int(n_str)
        faces[n] = [mat_from_json(m, levels[n - 1].ngens, levels[n].ngens) for m in mats]
    if "degeneracies" in data:
        degs = {}
        for n_str, mats in data["degeneracies"].items():
            n = int(n_str)
            degs[n] = [mat_from_json(m, levels[n + 1].ngens, levels[n].ngens) for m in mats]
        return SAb(levels, faces, degs, cap)
    return DeltaSAb(levels, faces, cap)


def bisab_to_json(B):
    return {
        "format": FORMAT,
        "kind": "bisab",
        "hcap": B.hcap,
        "vcap": B.vcap,
        "levels": [[group_to_json(B.levels[p][q]) for q in range(B.vcap + 1)] for p in range(B.hcap + 1)],
        "h_faces": {f"{p},{q}": [mat_to_json(m) for m in B.h_faces[(p, q)]] for (p, q) in B.h_faces},
        "v_faces": {f"{p},{q}": [mat_to_json(m) for m in B.v_faces[(p, q)]] for (p, q) in B.v_faces},
        "h_degeneracies": {f"{p},{q}": [mat_to_json(m) for m in B.h_degs[(p, q)]] for (p, q) in B.h_degs},
        "v_degeneracies": {f"{p},{q}": [mat_to_json(m) for m in B.v_degs[(p, q)]] for (p, q) in B.v_degs},
    }


def bisab_from_json(data):
    _check_format(data, "bisab")
    hcap, vcap = int(data["hcap"]), int(data["vcap"])
    levels = [[group_from_json(data["levels"][p][q]) for q in range(vcap + 1)] for p in range(hcap + 1)]

    def load_family(key, row_of, col_of):
        out = {}
        for pq, mats in data[key].items():
            p, q = (int(x) for x in pq.split(","))
            out[(p, q)] = [
                mat_from_json(m, levels[row_of(p, q)][col_of(p, q)].ngens, levels[p][q].ngens) for m in mats
            ]
        return out

    h_faces = load_family("h_faces", lambda p, q: p - 1, lambda p, q: q)
    v_faces = load_family("v_faces", lambda p, q: p, lambda p, q: q - 1)
    h_degs = load_family("h_degeneracies", lambda p, q: p + 1, lambda p, q: q)
    v_degs = load_family("v_degeneracies", lambda p, q: p, lambda p, q: q + 1)
    return BisimplicialAbelianGroup(levels, h_faces, v_faces, h_degs, v_degs, hcap, vcap)


def fragment_to_json(F):
    return {
        "format": FORMAT,
        "kind": "pialg",
        "degrees": [F.d_lo, F.d_hi],
        "groups": {
            str(d): {
                "factors": list(_declared_factors(F.groups[d])),
                "gens": list(F.gen_names.get(d, [])),
            }
            for d in F.groups
        },
        "action": [
            {"theta": theta, "degree": deg, "gen": gen, "value": list(value)}
            for (theta, (deg, gen)), value in sorted(F.action.items(), key=str)
        ],
        "whitehead": [
            {"left": [d1, g1], "right": [d2, g2], "value": list(value)}
            for ((d1, g1), (d2, g2)), value in sorted(F.whitehead.items(), key=str)
        ],
    }


def _declared_factors(G):
    # fragment groups are kept in diagonal presentation (one factor per generator)
    if G.rels.c != G.ngens:
        raise SchemaError("fragment group is not in diagonal presentation")
    for i in range(G.ngens):
        for j in range(G.rels.c):
            if i != j and G.rels.a[i][j] != 0:
                raise SchemaError("fragment group is not in diagonal presentation")
    return [G.rels.a[i][i] for i in range(G.ngens)]


def fragment_from_json(data):
    _check_format(data, "pialg")
    d_lo, d_hi = (int(x) for x in data["degrees"])
    groups = {}
    gen_names = {}
    for d_str, spec in data["groups"].items():
        d = int(d_str)
        groups[d] = PresentedGroup.from_factors([int(x) for x in spec["factors"]])
        gen_names[d] = list(spec["gens"])
        if len(gen_names[d]) != groups[d].ngens:
            raise SchemaError(f"degree {d}: generator list does not match factor list")
    action = {}
    for entry in data.get("action", []):
        action[(entry["theta"], (int(entry["degree"]), entry["gen"]))] = [int(x) for x in entry["value"]]
    whitehead = {}
    for entry in data.get("whitehead", []):
        d1, g1 = int(entry["left"][0]), entry["left"][1]
        d2, g2 = int(entry["right"][0]), entry["right"][1]
        whitehead[((d1, g1), (d2, g2))] = [int(x) for x in entry["value"]]
    return PiAlgebraFragment(
        d_lo=d_lo,
        d_hi=d_hi,
        groups=groups,
        gen_names=gen_names,
        action=action,
        whitehead=whitehead,
    )


def hdeg_to_json(H, V):
    return {
        "format": FORMAT,
        "kind": "hdeg",
        "maps": {str(n): [mat_to_json(m) for m in H.maps[n]] for n in H.maps},
    }


def hdeg_from_json(data, V):
    _check_format(data, "hdeg")
    maps = {}
    for n_str, mats in data["maps"].items():
        n = int(n_str)
        maps[n] = [mat_from_json(m, V.rank(n + 1), V.rank(n)) for m in mats]
    return HomotopyDegeneracyData(maps=maps)


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
