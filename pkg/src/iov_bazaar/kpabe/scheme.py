"""The four KP-ABE algorithms over the bilinear backend.

Two decryption variants exist:

- ``literal``: the equation as published.  Its quotient does not cancel
  (the pairing ``e(C_0', D_0')`` is a GT element where a G1 element is
  required, and the per-row attribute factor survives reconstruction),
  so round-trips fail; the variant is kept for documentation and tests.
- corrected (default): a repaired construction using the same component
  names.  The time unit recovers e(g,g)^{w x} through the key's
  delegatable tree components, the attribute unit recovers
  e(g,g)^{(a - w) x} through the LSSS shares, and their product is the
  blinding factor e(g,g)^{a x}.  Corrections relative to the published
  equations: D'' carries exponent w/a instead of w and is accompanied by
  delegation elements V_j^{w/a}; D_i is replaced by
  g^{(a-w) ID lambda_i / (w b eta_i)}; k_y is an actual ciphertext
  component (h_y^b)^x instead of a public constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backend import BilinearBackend, G1Element, GTElement, inv
from .lsss import AccessStructure, lsss_satisfy
from .timetree import Node, TimeTree, covers, is_prefix


class InvalidIdentity(ValueError):
    pass


class UnknownAttribute(ValueError):
    pass


class Bottom:
    """Typed decryption failure (not an exception)."""

    reason = "bottom"

    def __repr__(self) -> str:
        return f"<bottom: {self.reason}>"


class AttributeMismatch(Bottom):
    reason = "attribute-mismatch"


class TimeMismatch(Bottom):
    reason = "time-mismatch"


@dataclass(frozen=True)
class PublicParams:
    num_attributes: int
    tree: TimeTree
    g: G1Element
    g_alpha: G1Element
    g_alpha2: G1Element
    g_inv_alpha: G1Element
    g_beta: G1Element
    g_beta2: G1Element
    e_gg_alpha: GTElement
    h_beta: tuple[G1Element, ...]   # h_1^b .. h_U^b
    v_elems: tuple[G1Element, ...]  # V_0 .. V_T


@dataclass(frozen=True)
class MasterKey:
    alpha: int
    beta: int
    # discrete logs of the h and V elements; kept master-side so KeyGen
    # can form the corrected per-row components
    h_exps: tuple[int, ...]
    v_exps: tuple[int, ...]


@dataclass(frozen=True)
class PrivateKey:
    identity: int
    periods: tuple[Node, ...]
    access: AccessStructure
    row_attr_index: tuple[int, ...]   # 1-based attribute index per LSSS row
    d0: GTElement                     # e(g,g)^{a w}
    d0_prime: G1Element               # g^{w/a}
    d_time: dict[Node, G1Element]     # (V_0 prod V_j^{tau_j})^{w/a} per node
    d_deleg: tuple[G1Element, ...]    # V_j^{w/a} for j = 1..T
    d_attr: tuple[G1Element, ...]     # corrected per-row components
    # published-form components, kept for the literal variant
    lit_d_time: dict[Node, G1Element]
    lit_d_rows: tuple[tuple[G1Element, G1Element], ...]  # (D_i, D_i')


@dataclass(frozen=True)
class Ciphertext:
    periods: tuple[Node, ...]
    attributes: tuple[int, ...]       # attribute indices, 1-based
    c0: GTElement
    c0_prime: G1Element
    c_time: dict[Node, tuple[G1Element, G1Element]]  # node -> (C_{0,t}, C_{1,t})
    k_attr: dict[int, G1Element]      # corrected: (h_y^b)^x per attribute


def _node_product(backend: BilinearBackend, v_elems: tuple[G1Element, ...],
                  scalars: tuple[int, ...]) -> G1Element:
    out = v_elems[0]
    for j, t in enumerate(scalars, start=1):
        out = out * (v_elems[j] ** t)
    return out


def setup(num_attributes: int, tree: TimeTree, rng,
          backend: BilinearBackend) -> tuple[PublicParams, MasterKey]:
    if num_attributes < 1:
        raise ValueError("need at least one attribute")
    if tree.depth < 2:
        raise ValueError("time tree depth must be >= 2")
    g = backend.generator()
    alpha = backend.random_scalar(rng)
    beta = backend.random_scalar(rng)
    h_exps = tuple(backend.random_scalar(rng) for _ in range(num_attributes))
    v_exps = tuple(backend.random_scalar(rng) for _ in range(tree.depth + 1))
    order = backend.order
    pk = PublicParams(
        num_attributes=num_attributes,
        tree=tree,
        g=g,
        g_alpha=g ** alpha,
        g_alpha2=g ** (alpha * alpha % order),
        g_inv_alpha=g ** inv(alpha),
        g_beta=g ** beta,
        g_beta2=g ** (beta * beta % order),
        e_gg_alpha=backend.pair(g, g) ** alpha,
        h_beta=tuple((g ** e) ** beta for e in h_exps),
        v_elems=tuple(g ** e for e in v_exps),
    )
    return pk, MasterKey(alpha, beta, h_exps, v_exps)


def keygen(mk: MasterKey, pk: PublicParams, identity: int, periods: list[Node],
           access: AccessStructure, row_attr_index: list[int], rng,
           backend: BilinearBackend,
           literal_lambda1: bool = False) -> PrivateKey:
    """Key for ``identity`` bound to a period set-cover and an LSSS policy.

    ``row_attr_index[i]`` is the 1-based universe index of the attribute
    mapped by LSSS row i.  ``literal_lambda1`` reproduces the published
    D_i' exponent (constant lambda_1) instead of the per-row lambda_i.
    """
    order = backend.order
    if identity % order == 0:
        raise InvalidIdentity("identity must be nonzero")
    if len(row_attr_index) != access.num_rows:
        raise ValueError("row_attr_index length must match LSSS rows")
    for idx in row_attr_index:
        if not 1 <= idx <= pk.num_attributes:
            raise UnknownAttribute(f"attribute index {idx} outside universe")
    g = pk.g
    # masking vector (w, y_2, ..., y_n) and the shares lambda_i
    vec = [backend.random_scalar(rng) for _ in range(access.num_cols)]
    w = vec[0]
    shares = [sum(m * v for m, v in zip(row, vec)) % order for row in access.matrix]

    w_over_a = w * inv(mk.alpha) % order
    d_time, lit_d_time = {}, {}
    for node in periods:
        scalars = pk.tree.node_scalars(node)
        base = _node_product(backend, pk.v_elems, scalars)
        d_time[node] = base ** w_over_a
        lit_d_time[node] = base ** w
    d_deleg = tuple(v ** w_over_a for v in pk.v_elems[1:])

    a_minus_w = (mk.alpha - w) % order
    d_attr = []
    lit_rows = []
    for i, lam in enumerate(shares):
        eta = mk.h_exps[row_attr_index[i] - 1]
        exp = a_minus_w * identity % order * lam % order
        exp = exp * inv(w * mk.beta % order * eta % order) % order
        d_attr.append(g ** exp)
        lam_for_lit = shares[0] if literal_lambda1 else lam
        lit_d = g ** (mk.beta * lam % order)
        lit_d_prime = (g * pk.h_beta[row_attr_index[i] - 1]) ** (lam_for_lit * identity % order)
        lit_rows.append((lit_d, lit_d_prime))

    return PrivateKey(
        identity=identity,
        periods=tuple(periods),
        access=access,
        row_attr_index=tuple(row_attr_index),
        d0=backend.pair(g, g) ** (mk.alpha * w % order),
        d0_prime=g ** w_over_a,
        d_time=d_time,
        d_deleg=d_deleg,
        d_attr=tuple(d_attr),
        lit_d_time=lit_d_time,
        lit_d_rows=tuple(lit_rows),
    )


def encrypt(pk: PublicParams, message: GTElement, periods: list[Node],
            attributes: list[int], rng, backend: BilinearBackend) -> Ciphertext:
    """Encrypt a GT-encoded message under attribute indices and time nodes."""
    for y in attributes:
        if not 1 <= y <= pk.num_attributes:
            raise UnknownAttribute(f"attribute index {y} outside universe")
    order = backend.order
    x = backend.random_scalar(rng)
    c_time = {}
    for node in periods:
        v_tau = backend.random_scalar(rng)
        scalars = pk.tree.node_scalars(node)
        base = _node_product(backend, pk.v_elems, scalars)
        c0_tau = pk.g ** v_tau
        c1_tau = (pk.g_alpha ** x) * pk.g_beta2 * (base ** v_tau)
        c_time[node] = (c0_tau, c1_tau)
    return Ciphertext(
        periods=tuple(periods),
        attributes=tuple(attributes),
        c0=message * (pk.e_gg_alpha ** x),
        c0_prime=pk.g_alpha2 ** x,
        c_time=c_time,
        k_attr={y: pk.h_beta[y - 1] ** x for y in attributes},
    )


def _select_time_pair(sk: PrivateKey, ct: Ciphertext) -> tuple[Node, Node] | None:
    """(key node, ciphertext node) with the key node at or above the ct node."""
    for ct_node in ct.periods:
        for key_node in sk.periods:
            if is_prefix(key_node, ct_node):
                return key_node, ct_node
    return None


def decrypt(ct: Ciphertext, sk: PrivateKey, pk: PublicParams,
            backend: BilinearBackend, literal: bool = False):
    """Recover the GT message, or a typed Bottom.

    Attribute and time conditions are both checked before any pairing:
    the attribute set S (carried in the clear) must satisfy the key's
    LSSS, and the key's period cover must contain every ciphertext node.
    """
    attr_names = {sk.access.row_attrs[i] for i in range(sk.access.num_rows)
                  if sk.row_attr_index[i] in ct.attributes}
    omegas = lsss_satisfy(sk.access, attr_names)
    if omegas is None:
        return AttributeMismatch()
    if not covers(list(sk.periods), list(ct.periods)):
        return TimeMismatch()
    pair = _select_time_pair(sk, ct)
    if pair is None:
        return TimeMismatch()
    key_node, ct_node = pair

    inv_id = inv(sk.identity)
    if literal:
        return _decrypt_literal(ct, sk, pk, backend, key_node, ct_node, omegas, inv_id)

    # delegate the time component down to the ciphertext node
    d_node = sk.d_time[key_node]
    scalars = pk.tree.node_scalars(ct_node)
    for j in range(len(key_node) + 1, len(ct_node) + 1):
        d_node = d_node * (sk.d_deleg[j - 1] ** scalars[j - 1])

    c0_tau, c1_tau = ct.c_time[ct_node]
    time_unit = backend.pair(c1_tau, sk.d0_prime) \
        / backend.pair(d_node, c0_tau) \
        / backend.pair(pk.g_beta2, sk.d0_prime)

    attr_unit = GTElement(0)
    for i, omega in omegas.items():
        k_y = ct.k_attr[sk.row_attr_index[i]]
        attr_unit = attr_unit * (backend.pair(sk.d_attr[i], k_y) ** (omega * inv_id))

    return ct.c0 / (time_unit * attr_unit)


def _decrypt_literal(ct, sk, pk, backend, key_node, ct_node, omegas, inv_id):
    """The published quotient, as close as its typing allows.

    The published numerator pairs C_{0,tau} with a GT element; the
    nearest well-typed reading multiplies the two pairings instead.
    The result does not equal the message in general.
    """
    c0_tau, c1_tau = ct.c_time[ct_node]
    numerator = ct.c0 \
        * backend.pair(sk.lit_d_time[key_node], c0_tau) \
        * backend.pair(ct.c0_prime, sk.d0_prime)
    denominator = backend.pair(ct.c0_prime, pk.g_inv_alpha)
    for i, omega in omegas.items():
        d_i, d_i_prime = sk.lit_d_rows[i]
        k_lit = (pk.g_beta * pk.h_beta[sk.row_attr_index[i] - 1]).inverse()
        denominator = denominator \
            * backend.pair(c1_tau, d_i_prime ** (omega * inv_id % backend.order)) \
            * (backend.pair(d_i, k_lit) ** omega)
    return numerator / denominator
