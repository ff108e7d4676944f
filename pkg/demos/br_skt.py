"""Long Froelicher differentials on the BR nilmanifolds and a pluriclosed variant."""
from __future__ import annotations

from bicomplexes.cyclotomic import format_scalar
from bicomplexes.dba import complement_direct_summand_check, eval_dd_bar
from bicomplexes.fixtures import br, br_skt_spec, br_spec
from bicomplexes.spectral import fss


def main() -> None:
    rep = fss(br(2))
    print(f"br(2): column sequence degenerates at E_{rep.stabilization_page}; d_2 rank at (0,1) = {rep.rank(2, 0, 1)}")
    rep = fss(br(3, window=4))
    print(f"br(3), total degrees <= 4: degenerates at E_{rep.stabilization_page}; "
          f"d_3 rank at (0,2) = {rep.rank(3, 0, 2)}")

    print("\nsigma on the distinguished forms beta_k (z = i):")
    for n in (2, 3, 4, 5):
        s = br_spec(n)
        sigma = s.actions["sigma"]
        factors = set()
        for k in range(1, n + 1):
            beta = s.expressions[f"beta{k}"]
            m = next(iter(beta.terms))
            factors.add(format_scalar(s.F.lift(sigma(beta).coefficient(m) / beta.coefficient(m))))
        print(f"  n={n}: sigma(beta_k) = c * beta_k for every k, with c in {sorted(factors)}")

    print("\npluriclosed metric:")
    for n in (2, 3, 4):
        s = br_skt_spec(n)
        print(f"  n={n}: del delbar of the metric form is zero: {not eval_dd_bar(s, s.expressions['metric'])}")
        betas = [s.expressions[f"beta{k}"] for k in range(1, n + 1)]
        dist = betas + [s.del_(b) for b in betas if s.del_(b)]
        print(f"        span of beta_k and del beta_k has a complement: {complement_direct_summand_check(s, dist)}")


if __name__ == "__main__":
    main()
