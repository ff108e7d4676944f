"""Invariants of an order-4 automorphism on an exterior algebra model.

The invariant complex degenerates at E_1 and has only dots and length-3
zigzags, so it satisfies the dd^c+3 condition but not the dd^c condition.
"""
from __future__ import annotations

from bicomplexes.fixtures import construction2, fixture_data
from bicomplexes.dba import isotypic
from bicomplexes.spectral import purity_table
from bicomplexes.zigzag import check_property, decompose


def main() -> None:
    full = fixture_data("construction2")
    print(f"full algebra: total dimension {construction2().total_dim()}")
    for j in range(4):
        part = isotypic(full.complex, full.action, j)
        print(f"  character {j}: dimension {part.total_dim()}")
    B = isotypic(full.complex, full.action, 0)
    print("\ninvariant dimensions up to the middle degree:")
    for (p, q) in sorted(B.support, key=lambda b: (b[0] + b[1], -b[0])):
        if p + q <= 4:
            print(f"  ({p},{q}): {B.dim(p, q)}")
    for prop in ("ddc3", "ddbar"):
        r = check_property(B, prop)
        print(f"{prop}: {r.holds}" + (f"  ({r.witness})" if r.witness else ""))
    print("\nimpure b-numbers:")
    for (k, p, q), n in purity_table(B).impure():
        print(f"  b_{k}^({p},{q}) = {n}")
    print("\nsummands:")
    print(decompose(B).table())


if __name__ == "__main__":
    main()
