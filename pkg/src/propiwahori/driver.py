"""High-level drivers shared by the CLI and the acceptance suite.

Each driver returns a plain JSON-serializable report dict; determinism comes
from explicit seeds and sorted iteration everywhere.
"""

from __future__ import annotations

import itertools
import random

from . import linalg
from .hecke import HeckeAlgebra
from .levi import run_all_levi
from .modules import (
    induce,
    is_irreducible,
    is_supersingular,
    levi_algebra,
    supersingular_search,
    tensor_induce,
)
from .presets import Preset
from .rep import contains_invertible, hom_space, is_isomorphic
from .roots import _root_sign
from .stdmod import (
    StdModule,
    ThetaCharacter,
    equivariance_residual,
    phi_matrix,
    std_iso_check,
)
from .verify import run_all


def make_algebra(preset: Preset) -> HeckeAlgebra:
    return HeckeAlgebra(preset.datum, preset.field)


# ---------------------------------------------------------------------------
# character sampling
# ---------------------------------------------------------------------------
def torsion_value_space(field, orders):
    """All torsion character tuples (value per Z_kappa generator)."""
    pools = []
    for o in orders:
        root = field.element_of_order(o) if o > 1 else field.one
        pool = [field.one]
        x = root
        while x != field.one:
            pool.append(x)
            x = field.mul(x, root)
        pools.append(sorted(pool))
    return [tuple(t) for t in itertools.product(*pools)]


def sample_units(field, count, rng):
    units = list(range(1, field.q))
    out = []
    for _ in range(count):
        out.append(tuple(rng.choice(units) for _ in range(1)))
    return out


def sample_characters(algebra: HeckeAlgebra, theta, count, seed):
    """Deterministic sample of ThetaCharacters for the given Theta, sweeping
    torsion characters first and sampling free-part units."""
    dat = algebra.dat
    field = algebra.field
    rng = random.Random(seed)
    theta = frozenset(theta)
    twists = sorted(
        w
        for w in algebra.wm
        if all(
            _root_sign(dat.W.act_root(w, dat.datum.simple_roots[s])) > 0
            for s in theta
        )
    )
    n_free = _kernel_size(algebra, theta)
    torsions = torsion_value_space(field, dat.zk_orders)
    units = list(range(1, field.q))
    out = []
    i = 0
    while len(out) < count:
        tv = torsions[i % len(torsions)]
        fv = tuple(rng.choice(units) for _ in range(n_free))
        w = twists[i % len(twists)]
        out.append(ThetaCharacter(algebra, theta, w, tv, fv))
        i += 1
    return out


def _kernel_size(algebra, theta):
    from .stdmod import lattice_kernel_basis

    roots = [algebra.dat.datum.simple_roots[s] for s in sorted(theta)]
    return len(lattice_kernel_basis(roots, algebra.dat.rank))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------
def verify_report(preset: Preset, max_pairing=2, seed=0):
    H = make_algebra(preset)
    checks = run_all(H, max_pairing=max_pairing, seed=seed)
    checks += run_all_levi(H, seed=seed)
    return {
        "command": "verify",
        "preset": preset.name,
        "p": preset.p,
        "field_degree": preset.field_degree,
        "seed": seed,
        "max_pairing": max_pairing,
        "checks": checks,
        "counts": _status_counts(checks),
        "all_passed": all(c["status"] == "pass" for c in checks),
    }


def _status_counts(checks):
    out = {}
    for c in checks:
        key = c["relation"]
        entry = out.setdefault(key, {"pass": 0, "fail": 0})
        entry[c["status"]] += 1
    return dict(sorted(out.items()))


def bernstein_report(preset: Preset, radius=2):
    H = make_algebra(preset)
    dat = preset.datum
    rows = []
    for lam in sorted(itertools.product(range(-radius, radius + 1), repeat=dat.rank)):
        for w in range(dat.W.size):
            x = dat.mul(dat.from_lattice(lam), dat.lift_w(w))
            e = H.E(x)
            rows.append(
                {
                    "lattice": list(lam),
                    "weyl_word": list(dat.W.word[w]),
                    "length": H.sub.length(x),
                    "n_terms": len(e.terms),
                    "integral": e.is_integral(),
                    "terms": H.serialize(e),
                }
            )
    return {
        "command": "bernstein-table",
        "preset": preset.name,
        "p": preset.p,
        "radius": radius,
        "rows": rows,
        "all_integral": all(r["integral"] for r in rows),
    }


def std_module_report(preset: Preset, count=6, seed=0, theta=None):
    H = make_algebra(preset)
    dat = preset.datum
    F = preset.field
    W = dat.W
    thetas = (
        [frozenset(theta)]
        if theta is not None
        else [
            frozenset(c)
            for r in range(dat.datum.nsimple + 1)
            for c in itertools.combinations(range(dat.datum.nsimple), r)
        ]
    )
    rows = []
    per = max(1, count // len(thetas))
    modules = {}
    for th in thetas:
        chars = sample_characters(H, th, per, seed)
        for char in chars:
            M = StdModule(char)
            modules[char.key()] = (char, M)
            relations_ok = all(ok for _, ok in M.verify_relations())
            row = {
                "theta": sorted(th),
                "twist_word": list(W.word[char.w]),
                "torsion_values": list(char.torsion_values),
                "free_values": list(char.free_values),
                "dim": M.dim,
                "dim_equals_W": M.dim == len(H.wm),
                "relations_ok": relations_ok,
                "delta_X": sorted(char.delta_X()),
                "phi": [],
            }
            # Phi towards longer twists, with injectivity check
            for s in sorted(H.theta_set):
                sw = W.s_mult[s][char.w]
                if W.length[sw] <= W.length[char.w] or sw not in H.wm:
                    continue
                try:
                    char2 = ThetaCharacter(
                        H, th, sw, char.torsion_values, char.free_values
                    )
                except ValueError:
                    continue
                M2 = StdModule(char2)
                Phi = phi_matrix(M, M2, s)
                inj = linalg.rank(F, Phi) == M.dim
                want_inj = all(
                    _root_sign(W.act_root(sw, dat.datum.simple_roots[t])) > 0
                    for t in th
                )
                row["phi"].append(
                    {
                        "s": s,
                        "equivariant": not equivariance_residual(M, M2, Phi),
                        "injective": inj,
                        "expected_injective": want_inj,
                        "ok": (not want_inj) or inj,
                    }
                )
            rows.append(row)
    # isomorphism pattern across twists for a fixed (theta, chi)
    iso_rows = []
    for th in thetas:
        chars = sample_characters(H, th, 1, seed + 17)
        base = chars[0]
        delta_X = base.delta_X()
        mods = {}
        for w in sorted(H.wm):
            if not all(
                _root_sign(W.act_root(w, dat.datum.simple_roots[s])) > 0
                for s in th
            ):
                continue
            cw = ThetaCharacter(H, th, w, base.torsion_values, base.free_values)
            mods[w] = StdModule(cw)
        ws = sorted(mods)
        for w1, w2 in itertools.combinations(ws, 2):
            expected = (W.delta_w(w1) & delta_X) == (W.delta_w(w2) & delta_X)
            got = std_iso_check(mods[w1], mods[w2])
            iso_rows.append(
                {
                    "theta": sorted(th),
                    "w1_word": list(W.word[w1]),
                    "w2_word": list(W.word[w2]),
                    "same_delta_w_cap_delta_X": expected,
                    "isomorphic": got,
                    "ok": (not expected) or got,
                }
            )
    all_ok = (
        all(r["relations_ok"] for r in rows)
        and all(p["ok"] for r in rows for p in r["phi"])
        and all(r["ok"] for r in iso_rows)
    )
    return {
        "command": "std-module",
        "preset": preset.name,
        "p": preset.p,
        "seed": seed,
        "modules": rows,
        "iso_checks": iso_rows,
        "all_passed": all_ok,
    }


def induce_report(preset: Preset, seed=0):
    H = make_algebra(preset)
    dat = preset.datum
    F = preset.field
    rows = []
    nsimple = dat.datum.nsimple
    for r in range(nsimple):
        for th in itertools.combinations(range(nsimple), r):
            th = frozenset(th)
            levi = levi_algebra(H, th)
            sigmas = []
            for tv, fv, sid in _inventory_characters(H, th, 2, seed):
                sigmas.extend(
                    (s, f"{sid}.{i}")
                    for i, s in enumerate(supersingular_search(H, th, tv, fv, seed=seed))
                )
            for sigma, sid in sigmas[:3]:
                I = induce(levi, sigma)
                T, B = tensor_induce(levi, sigma, induced=I)
                homs = hom_space(I, T)
                inv = contains_invertible(F, homs, I.dim) if homs else None
                rows.append(
                    {
                        "theta": sorted(th),
                        "sigma_id": sid,
                        "sigma_dim": sigma.dim,
                        "dim": I.dim,
                        "expected_dim": len(I.reps) * sigma.dim,
                        "relations_ok": I.relations_ok() and T.relations_ok(),
                        "hom_dim": len(homs),
                        "invertible_intertwiner": inv is not None,
                    }
                )
    return {
        "command": "induce",
        "preset": preset.name,
        "p": preset.p,
        "seed": seed,
        "rows": rows,
        "all_passed": all(
            r["dim"] == r["expected_dim"]
            and r["relations_ok"]
            and r["invertible_intertwiner"]
            for r in rows
        ),
    }


def _inventory_characters(H, theta, free_count, seed, full_torsion=False):
    """(torsion_values, free_values, id) samples of central characters of
    the Levi of type theta."""
    field = H.field
    dat = H.dat
    rng = random.Random(seed)
    torsions = torsion_value_space(field, dat.zk_orders)
    if not full_torsion:
        torsions = torsions[:: max(1, len(torsions) // 4)][:4]
    n_free = _kernel_size_theta(H, theta)
    units = list(range(1, field.q))
    out = []
    for i, tv in enumerate(torsions):
        for j in range(free_count):
            fv = tuple(rng.choice(units) for _ in range(n_free))
            out.append((tv, fv, f"P{sorted(theta)}t{i}f{j}"))
    return out


def _kernel_size_theta(H, theta):
    from .stdmod import lattice_kernel_basis

    roots = [H.dat.datum.simple_roots[s] for s in sorted(theta)]
    return len(lattice_kernel_basis(roots, H.dat.rank))


def search_report(preset: Preset, theta=None, count=4, seed=0, dim_bound=None):
    H = make_algebra(preset)
    theta = frozenset(theta) if theta is not None else frozenset()
    levi = levi_algebra(H, theta)
    rows = []
    for tv, fv, sid in _inventory_characters(H, theta, 1, seed)[:count]:
        found = supersingular_search(H, theta, tv, fv, seed=seed, dim_bound=dim_bound)
        for i, f in enumerate(found):
            ok, diag = is_supersingular(levi, f)
            rows.append(
                {
                    "character_id": sid,
                    "torsion_values": list(tv),
                    "free_values": list(fv),
                    "index": i,
                    "dim": f.dim,
                    "irreducible": is_irreducible(f, seed=seed),
                    "supersingular": ok,
                    "criteria": diag,
                }
            )
    return {
        "command": "supersingular-search",
        "preset": preset.name,
        "p": preset.p,
        "theta": sorted(theta),
        "seed": seed,
        "rows": rows,
        "all_passed": all(r["supersingular"] and r["irreducible"] for r in rows),
    }


def build_inventory(
    preset: Preset, free_count=2, seed=0, full_torsion=False, cap=None, dim_bound=None
):
    """Supersingular inventory over every standard Levi, deduplicated up to
    isomorphism (sampling may repeat characters)."""
    H = make_algebra(preset)
    dat = preset.datum
    inventory = []
    nsimple = dat.datum.nsimple
    for r in range(nsimple + 1):
        for th in itertools.combinations(range(nsimple), r):
            th = frozenset(th)
            chars = _inventory_characters(H, th, free_count, seed, full_torsion)
            if cap is not None:
                chars = chars[:cap]
            seen_chars = set()
            found = []
            for tv, fv, sid in chars:
                if (tv, fv) in seen_chars:
                    continue
                seen_chars.add((tv, fv))
                for i, s in enumerate(
                    supersingular_search(H, th, tv, fv, seed=seed, dim_bound=dim_bound)
                ):
                    if any(is_isomorphic(s, other) for _, other, _ in found):
                        continue
                    found.append((th, s, f"{sid}#{i}"))
            inventory.extend(found)
    return H, inventory


def with_field_escalation(preset: Preset, fn, max_doublings=2):
    """Run fn(preset); on a too-small-field signal (an eigenvalue outside
    the field, or a non-scalar endomorphism ring reported by fn through
    FieldTooSmall), double the field degree and retry."""
    from .modules import FieldTooSmall

    attempt = preset
    last = None
    for _ in range(max_doublings + 1):
        try:
            out = fn(attempt)
            out["field_degree_used"] = attempt.field_degree
            return out
        except FieldTooSmall as exc:
            last = exc
            attempt = attempt.with_field_degree(attempt.field_degree * 2)
    raise last


def classify_report(
    preset: Preset,
    free_count=2,
    seed=0,
    full_torsion=False,
    cap=None,
    dim_bound=None,
):
    return with_field_escalation(
        preset,
        lambda pre: _classify_report_once(
            pre,
            free_count=free_count,
            seed=seed,
            full_torsion=full_torsion,
            cap=cap,
            dim_bound=dim_bound,
        ),
    )


def _classify_report_once(
    preset: Preset,
    free_count=2,
    seed=0,
    full_torsion=False,
    cap=None,
    dim_bound=None,
):
    H, inventory = build_inventory(
        preset,
        free_count=free_count,
        seed=seed,
        full_torsion=full_torsion,
        cap=cap,
        dim_bound=dim_bound,
    )
    from .modules import FieldTooSmall, classify

    results, modules, hom_matrix = classify(H, inventory, seed=seed)
    n_mods = len(modules)
    if any(hom_matrix[i][i] != 1 for i in range(n_mods)):
        # a classified simple module with End bigger than the scalars is not
        # absolutely simple over this field
        raise FieldTooSmall("non-scalar endomorphism ring in the classification")
    ok_irr = all(r["irreducible"] for r in results)
    n = len(modules)
    ok_pairwise = all(
        hom_matrix[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)
    )
    supersingular_iff_full = True
    for r, m in zip(results, modules):
        ss, diag = is_supersingular(H, m)
        expected = set(r["delta_P"]) == set(range(preset.datum.datum.nsimple))
        r["supersingular"] = ss
        r["criteria_agree"] = diag["crit2"] == diag["crit3"] == diag["crit4"]
        if ss != expected or not r["criteria_agree"]:
            supersingular_iff_full = False
    return {
        "command": "classify",
        "preset": preset.name,
        "p": preset.p,
        "seed": seed,
        "inventory_size": len(inventory),
        "rows": results,
        "hom_diagnostics": hom_matrix,
        "irreducible_all": ok_irr,
        "pairwise_nonisomorphic": ok_pairwise,
        "supersingular_iff_P_full": supersingular_iff_full,
        "all_passed": ok_irr and ok_pairwise and supersingular_iff_full,
    }
