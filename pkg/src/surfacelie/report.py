"""One deterministic structured report covering every check the library offers.

The report holds no timings or paths, so two runs on the same code give
byte-identical JSON.
"""
from __future__ import annotations

import numpy as np

from . import exact_linalg as xl
from . import sp_modules as sp
from .corpus import load_corpus, verify_corpus
from .finite_coh import bockstein_check, cyclic_group, cyclic_module, h1_bruteforce, invariants_mod_p
from .free_lie import DEFAULT_MAX_DEGREE, witt_dimension
from .johnson import inner_endo, johnson_tau, symplectic_automorphisms, validate_endo
from .magnus import leibniz_defects, surface_gr
from .words import Word

LEIBNIZ_ENTRIES = ("inner_a1", "comm", "inner_a1_comm")


def _labute(max_degree):
    out = {}
    for g in (1, 2, 3):
        for n in range(1, max_degree + 1):
            gr = surface_gr(g, n, max_degree)
            out[f"g{g}_n{n}"] = {"rank": gr.rank, "free_rank": witt_dimension(2 * g, n),
                                 "torsion_free": all(d == 1 for d in gr.divisors)}
    return out


def _invariants():
    out = {}
    for g, mods in ((1, ("H",)), (2, ("H", "L", "LmodH")), (3, ("H", "L", "LmodH"))):
        acts = sp.sp_generator_action(g)
        m = sp.build_standard_maps(g)
        for mod in mods:
            pick = {"H": lambda a: a.h, "L": lambda a: a.lambda3, "LmodH": lambda a: a.lmodh}[mod]
            rank = {"H": 2 * g, "L": m.c.source.rank, "LmodH": m.p.target.rank}[mod]
            out[f"g{g}_{mod}"] = len(invariants_mod_p([pick(a).matrix for a in acts], rank, 2))
    return out


def _finite():
    out = {}
    G = cyclic_group(2)
    for k in range(1, 5):
        for r in (1, 2):
            neg = [[-int(i == j) for j in range(r)] for i in range(r)]
            h1 = h1_bruteforce(G, cyclic_module(2, neg, 2 ** k))
            b = bockstein_check(G, cyclic_module(2, neg, 2 ** (k + 1)).action, r, k)
            out[f"k{k}_r{r}"] = {"h1": list(h1.divisors), "exponent": h1.exponent, "bockstein": b.passed}
    return out


def _johnson(entries):
    g = 3
    m = sp.build_standard_maps(g)
    inner = {}
    for i in range(2 * g):
        w = Word.gen(g, i)
        t = johnson_tau(inner_endo(w))
        in_qh = xl.solve_in_image(m.i.matrix, t) is not None
        inner[str(w)] = {"tau": [int(x) for x in t], "in_qH": in_qh, "LmodH_zero": not np.any(m.p(t))}
    byid = {e.id: e for e in entries}
    seed = validate_endo(byid["seed"].endo, 3)
    tau_seed = johnson_tau(seed)
    equiv = {}
    for a in symplectic_automorphisms(g):
        lhs = johnson_tau(validate_endo(a.conjugate(byid["seed"].endo), 3))
        equiv[a.label] = bool(np.array_equal(lhs, sp.wedge_power(a.matrix, 3).dot(tau_seed)))
    comp = inner_endo(Word.a(g, 1)) @ byid["comm"].endo
    additive = bool(np.array_equal(johnson_tau(validate_endo(comp)),
                                   johnson_tau(inner_endo(Word.a(g, 1))) + johnson_tau(byid["comm"].validate())))
    return {"inner": inner, "equivariance": equiv, "additivity": additive}


def full_report(max_degree: int = DEFAULT_MAX_DEGREE) -> dict:
    entries = load_corpus()
    rep = {
        "labute": _labute(max_degree),
        "jacobi": {f"g{g}": sp.jacobi_exactness(g).details for g in (1, 2, 3)},
        "ci": {f"g{g}": sp.check_ci_identity(g).details["factor"] for g in range(1, 6)},
        "lmodh": {f"g{g}": sp.check_lmodh_roundtrip(g).passed for g in (2, 3)},
        "decomp": {f"g{g}": sp.check_decomposition(g).passed for g in (2, 3)},
        "mod2_injection": {f"g{g}": sp.check_mod2_injection(g).passed for g in (2, 3)},
        "corpus": verify_corpus(entries).to_dict(),
        "johnson": _johnson(entries),
        "invariants_mod2": _invariants(),
        "finite": _finite(),
    }
    rep["corpus"].pop("stale_oracle")
    byid = {e.id: e for e in entries}
    if max_degree >= 4:
        rep["leibniz"] = {}
        for eid in LEIBNIZ_ENTRIES:
            n, bad = leibniz_defects(byid[eid].validate(), 1, 2, max_degree)
            rep["leibniz"][eid] = {"pairs": n, "failures": len(bad)}
    j = rep["johnson"]
    rep["passed"] = bool(
        all(v["torsion_free"] for v in rep["labute"].values())
        and all(rep["lmodh"].values()) and all(rep["decomp"].values())
        and all(rep["mod2_injection"].values())
        and rep["corpus"]["passed"] and rep["corpus"]["span_rank"] == 20
        and all(v["in_qH"] and v["LmodH_zero"] for v in j["inner"].values())
        and all(j["equivariance"].values()) and j["additivity"]
        and not any(rep["invariants_mod2"].values())
        and all(v["exponent"] <= 2 and v["bockstein"] for v in rep["finite"].values())
        and all(v["failures"] == 0 for v in rep.get("leibniz", {}).values()))
    return rep
