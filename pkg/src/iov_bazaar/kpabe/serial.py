"""Canonical JSON serialization for keys and public parameters.

Group elements serialize as base64 big-endian exponents (matching the
sealed-ciphertext encoding); time nodes as comma-joined integer paths.
"""

from __future__ import annotations

import json

from .backend import G1Element, GTElement
from .hybrid import _b64, _unb64
from .lsss import AccessStructure
from .scheme import MasterKey, PrivateKey, PublicParams
from .timetree import Node, TimeTree


def _node_key(node: Node) -> str:
    return ",".join(map(str, node))


def _parse_node(key: str) -> Node:
    return tuple(int(x) for x in key.split(","))


def serialize_public_params(pk: PublicParams) -> str:
    payload = {
        "num_attributes": pk.num_attributes,
        "tree": {"base_year": pk.tree.base_year, "year_span": pk.tree.year_span},
        "g": _b64(pk.g.exp),
        "g_alpha": _b64(pk.g_alpha.exp),
        "g_alpha2": _b64(pk.g_alpha2.exp),
        "g_inv_alpha": _b64(pk.g_inv_alpha.exp),
        "g_beta": _b64(pk.g_beta.exp),
        "g_beta2": _b64(pk.g_beta2.exp),
        "e_gg_alpha": _b64(pk.e_gg_alpha.exp),
        "h_beta": [_b64(e.exp) for e in pk.h_beta],
        "v_elems": [_b64(e.exp) for e in pk.v_elems],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def deserialize_public_params(text: str) -> PublicParams:
    p = json.loads(text)
    return PublicParams(
        num_attributes=p["num_attributes"],
        tree=TimeTree(p["tree"]["base_year"], p["tree"]["year_span"]),
        g=G1Element(_unb64(p["g"])),
        g_alpha=G1Element(_unb64(p["g_alpha"])),
        g_alpha2=G1Element(_unb64(p["g_alpha2"])),
        g_inv_alpha=G1Element(_unb64(p["g_inv_alpha"])),
        g_beta=G1Element(_unb64(p["g_beta"])),
        g_beta2=G1Element(_unb64(p["g_beta2"])),
        e_gg_alpha=GTElement(_unb64(p["e_gg_alpha"])),
        h_beta=tuple(G1Element(_unb64(e)) for e in p["h_beta"]),
        v_elems=tuple(G1Element(_unb64(e)) for e in p["v_elems"]),
    )


def serialize_master_key(mk: MasterKey) -> str:
    payload = {
        "alpha": _b64(mk.alpha),
        "beta": _b64(mk.beta),
        "h_exps": [_b64(x) for x in mk.h_exps],
        "v_exps": [_b64(x) for x in mk.v_exps],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def deserialize_master_key(text: str) -> MasterKey:
    p = json.loads(text)
    return MasterKey(
        alpha=_unb64(p["alpha"]),
        beta=_unb64(p["beta"]),
        h_exps=tuple(_unb64(x) for x in p["h_exps"]),
        v_exps=tuple(_unb64(x) for x in p["v_exps"]),
    )


def serialize_private_key(sk: PrivateKey) -> str:
    payload = {
        "identity": sk.identity,
        "periods": [list(n) for n in sk.periods],
        "access": {
            "matrix": [list(row) for row in sk.access.matrix],
            "row_attrs": list(sk.access.row_attrs),
        },
        "row_attr_index": list(sk.row_attr_index),
        "d0": _b64(sk.d0.exp),
        "d0_prime": _b64(sk.d0_prime.exp),
        "d_time": {_node_key(n): _b64(e.exp) for n, e in sk.d_time.items()},
        "d_deleg": [_b64(e.exp) for e in sk.d_deleg],
        "d_attr": [_b64(e.exp) for e in sk.d_attr],
        "lit_d_time": {_node_key(n): _b64(e.exp) for n, e in sk.lit_d_time.items()},
        "lit_d_rows": [[_b64(a.exp), _b64(b.exp)] for a, b in sk.lit_d_rows],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def deserialize_private_key(text: str) -> PrivateKey:
    p = json.loads(text)
    return PrivateKey(
        identity=p["identity"],
        periods=tuple(tuple(n) for n in p["periods"]),
        access=AccessStructure(
            matrix=tuple(tuple(row) for row in p["access"]["matrix"]),
            row_attrs=tuple(p["access"]["row_attrs"]),
        ),
        row_attr_index=tuple(p["row_attr_index"]),
        d0=GTElement(_unb64(p["d0"])),
        d0_prime=G1Element(_unb64(p["d0_prime"])),
        d_time={_parse_node(k): G1Element(_unb64(v))
                for k, v in p["d_time"].items()},
        d_deleg=tuple(G1Element(_unb64(e)) for e in p["d_deleg"]),
        d_attr=tuple(G1Element(_unb64(e)) for e in p["d_attr"]),
        lit_d_time={_parse_node(k): G1Element(_unb64(v))
                    for k, v in p["lit_d_time"].items()},
        lit_d_rows=tuple((G1Element(_unb64(a)), G1Element(_unb64(b)))
                         for a, b in p["lit_d_rows"]),
    )
