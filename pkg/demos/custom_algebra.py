"""Author a presentation in the text format, compile it, and export it."""
from __future__ import annotations

import sys

from bicomplexes.dsl import parse_dsl
from bicomplexes.io import dumps
from bicomplexes.spectral import degeneration_page
from bicomplexes.complex import total_cohomology
from bicomplexes.zigzag import decompose

IWASAWA = """\
name iwasawa
field 4
gen a (1,0) conj=abar
gen b (1,0) conj=bbar
gen c (1,0) conj=cbar; d = a^b
gen abar (0,1)
gen bbar (0,1)
gen cbar (0,1)
"""


def main() -> None:
    spec = parse_dsl(IWASAWA)
    A = spec.compile()
    H = total_cohomology(A).dims
    print("Betti numbers:", [H.get(k, 0) for k in range(7)])
    print("degeneration pages (column, row):", degeneration_page(A))
    print(decompose(A).table())
    if "--json" in sys.argv:
        print(dumps(A))


if __name__ == "__main__":
    main()
