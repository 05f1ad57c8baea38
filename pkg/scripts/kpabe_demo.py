#!/usr/bin/env python3
"""Demo of the time-sensitive KP-ABE content workflow.

Walks setup -> keygen -> seal -> open on the symbolic pairing backend and
shows the typed refusals for an expired period and a missing attribute.
"""

import numpy as np

from iov_bazaar import kpabe


def main() -> None:
    backend = kpabe.SymbolicBackend()
    rng = np.random.default_rng(2022)
    tree = kpabe.TimeTree(base_year=2020)
    pk, mk = kpabe.setup(3, tree, rng, backend)

    import datetime as dt
    periods = kpabe.set_cover(tree, dt.date(2022, 7, 1), dt.date(2022, 9, 2))
    print("subscription cover:", periods)

    access = kpabe.formula_to_lsss("attr_1 AND (attr_2 OR attr_3)")
    sk = kpabe.keygen(mk, pk, 42, periods, access, [1, 2, 3], rng, backend)

    content = b"multimedia chunk payload"
    sealed = kpabe.hybrid_seal(
        content, pk, kpabe.set_cover(tree, dt.date(2022, 8, 1),
                                     dt.date(2022, 8, 15)),
        [1, 2], rng, backend)
    print("sealed bytes:", len(sealed))
    opened = kpabe.hybrid_open(sealed, sk, pk, backend)
    print("round-trip ok:", opened == content)

    expired = kpabe.hybrid_seal(
        content, pk, kpabe.set_cover(tree, dt.date(2023, 1, 1),
                                     dt.date(2023, 1, 2)),
        [1, 2], rng, backend)
    print("expired period ->", type(kpabe.hybrid_open(expired, sk, pk, backend)).__name__)

    unattributed = kpabe.hybrid_seal(
        content, pk, kpabe.set_cover(tree, dt.date(2022, 8, 1),
                                     dt.date(2022, 8, 2)),
        [2], rng, backend)
    print("missing attribute ->",
          type(kpabe.hybrid_open(unattributed, sk, pk, backend)).__name__)


if __name__ == "__main__":
    main()
