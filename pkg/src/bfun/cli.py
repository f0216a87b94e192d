"""Command-line front end: ``bfun bfunction`` and ``bfun verify <target>``.

Exit codes: 0 every check passed, 1 a mathematical mismatch, 2 a resource
guard or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path

from bfun import __version__
from bfun.cache import Cache

log = logging.getLogger("bfun")

EXIT_PASS, EXIT_MISMATCH, EXIT_GUARD = 0, 1, 2
TARGETS = ("bernstein", "radial", "chart", "semiinvariance", "shift", "recursion", "factorization")
METHOD_NAMES = {"jets": "jet", "symbolic": "symbolic"}
DEFAULT_MAX_N = 3


class GuardExceeded(Exception):
    pass


class Report:
    """Ordered list of named checks plus a result payload."""

    def __init__(self, command: str, n: int, **meta):
        self.command = command
        self.n = n
        self.meta = meta
        self.checks: list[dict] = []
        self.result: dict = {}

    def check(self, name: str, anchor: str, ok: bool, detail: str = "", informational: bool = False) -> bool:
        self.checks.append(
            {"name": name, "anchor": anchor, "pass": bool(ok), "detail": detail, "informational": informational}
        )
        return ok

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks if not c["informational"])

    def first_failure(self) -> dict | None:
        return next((c for c in self.checks if not c["pass"] and not c["informational"]), None)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "n": self.n,
            **self.meta,
            "version": __version__,
            "pass": self.passed,
            "checks": self.checks,
            "result": self.result,
        }

    def to_markdown(self) -> str:
        title = " ".join(str(x) for x in [self.command, *self.meta.values()] if x is not None)
        lines = [f"# bfun {title} (n={self.n})", "", f"status: **{'PASS' if self.passed else 'FAIL'}**", ""]
        lines += ["| check | anchor | status | detail |", "|---|---|---|---|"]
        for c in self.checks:
            status = "pass" if c["pass"] else ("note" if c["informational"] else "FAIL")
            lines.append(f"| {c['name']} | {c['anchor']} | {status} | {c['detail']} |")
        if self.result:
            lines += ["", "```json", json.dumps(self.result, indent=2, sort_keys=True), "```"]
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _roots_str(roots) -> str:
    return "{" + ", ".join(f"{_fmt(r)}" + (f" x{m}" if m > 1 else "") for r, m in roots) + "}"


def _guard(args, n: int, limit: int | None = None, what: str = "") -> None:
    if n < 1:
        raise GuardExceeded("n must be at least 1")
    cap = args.max_n if limit is None else min(args.max_n, limit)
    if n > cap and not args.force:
        raise GuardExceeded(f"{what or args.command} with n={n} exceeds the guard n <= {cap}; pass --force to override")


def _announce_memory(n: int) -> None:
    from bfun.bernstein import degree_bound
    from bfun.core.jet import simplex_size

    m = degree_bound(n)
    nv = n * n + n
    print(
        f"[bfun] jet order {m} in {nv} variables: full simplex would hold {simplex_size(nv, m)} coefficients; "
        "only the downset of the operator's support is materialized",
        file=sys.stderr,
    )


# ---------------------------------------------------------------- commands


def cmd_bfunction(args, cache: Cache) -> Report:
    from bfun.bernstein import STRETCH_MAX_N, BFunctionResult, bhat_poly, btilde, btilde_roots, theorem_poly
    from bfun.core.unipoly import UniPoly, rational_roots

    n = args.n
    _guard(args, n)
    if n > STRETCH_MAX_N:
        raise GuardExceeded(f"n={n} is beyond the largest supported size {STRETCH_MAX_N}")
    method = METHOD_NAMES[args.method]
    if method == "jet" and n >= 3:
        _announce_memory(n)

    def compute():
        return bhat_poly(n, method, max_n=max(n, DEFAULT_MAX_N))

    def dump(res: BFunctionResult) -> str:
        return json.dumps({"coeffs": [_fmt(c) for c in res.bhat.coeffs], "samples": [[k, _fmt(v)] for k, v in res.samples]})

    def load(text: str) -> BFunctionResult:
        d = json.loads(text)
        poly = UniPoly([Fraction(c) for c in d["coeffs"]], "k")
        samples = [(k, Fraction(v)) for k, v in d["samples"]]
        th = theorem_poly(n)
        return BFunctionResult(n, poly, rational_roots(poly), poly.lead, th.b1, th.b2, method, samples)

    res = cache.cached("bhat_poly", {"n": n, "method": method}, compute, dump, load)
    rep = Report("bfunction", n, method=args.method)
    expected = btilde_roots(n)
    rep.check(
        "monic b-hat equals b-tilde",
        "b-function-closed-form",
        res.matches_theorem(),
        f"roots {_roots_str(res.btilde_roots)}; expected {_roots_str(expected)}",
    )
    th = theorem_poly(n)
    rep.check(
        "leading constant",
        "b-function-closed-form",
        res.bhat == th.bhat,
        f"observed {_fmt(res.alpha)}, alpha_n = {_fmt(th.alpha)}",
    )
    rep.check("b1 * b2 factorization", "b-function-factorization", th.b1 * th.b2 == th.bhat)
    rep.result = res.to_json()
    rep.result["btilde"] = str(btilde(n, "s"))
    return rep


def verify_bernstein(args, rep: Report) -> None:
    from bfun.bernstein import (
        STRETCH_MAX_N,
        _JetEvaluator,
        bhat_eval,
        theorem_poly,
        verify_bernstein_identity,
        TheoremViolation,
    )

    n = args.n
    _guard(args, n)
    if n > STRETCH_MAX_N:
        raise GuardExceeded(f"n={n} is beyond the largest supported size {STRETCH_MAX_N}")
    ks = [args.k] if args.k is not None else ([0, 1] if n >= 4 else list(range(4)))
    th = theorem_poly(n)
    method = METHOD_NAMES[args.method]
    if n >= 4:
        method = "jet"
    if method == "jet" and n >= 3:
        _announce_memory(n)
    ev = _JetEvaluator(n) if method == "jet" else None
    for k in ks:
        target = th.bhat(k)
        if n <= 2:
            try:
                ok = verify_bernstein_identity(n, k, max_k=max(k, 3))
                detail = f"S f^{k + 1} = {_fmt(target)} f^{k} term by term"
            except TheoremViolation as exc:
                ok, detail = False, str(exc)
        else:
            got = ev.value(k) if ev is not None else bhat_eval(n, k, method)
            ok = got == target
            detail = f"S f^{k + 1} / f^{k} = {_fmt(got)}; closed form {_fmt(target)}"
        rep.check(f"identity at k={k}", "bernstein-identity", ok, detail)
    rep.result = {"ks": ks, "values": [_fmt(th.bhat(k)) for k in ks]}


def verify_radial(args, rep: Report) -> None:
    from bfun.radial import cm_conjugation, cm_specialization, is_w_invariant, cm_operator, laplacian_conjugation, p_plus, pplus_conjugation, rational_operator

    n = args.n
    if not 2 <= n <= 4:
        raise GuardExceeded("radial identities are checked for 2 <= n <= 4")
    checks = [
        (laplacian_conjugation(n), "laplacian-conjugation", False),
        (pplus_conjugation(n, factor=1), "pplus-conjugation", False),
        (pplus_conjugation(n, factor=2), "pplus-conjugation-as-quoted", True),
        (cm_conjugation(n), "radial-part-conjugation", False),
    ]
    ks = [args.k] if args.k is not None else [0, 1, 2, 3]
    checks += [(cm_specialization(n, k), "radial-part-conjugation", False) for k in ks]
    for c, anchor, info in checks:
        rep.check(c.name, anchor, c.holds, c.first_residual()[:200], informational=info)
    rep.check("W-invariance of L(k), L_k, P+", "weyl-equivariance",
              all(is_w_invariant(A) for A in (rational_operator(n), cm_operator(n), p_plus(n))))


def verify_chart(args, rep: Report) -> None:
    from bfun.cyclic import local_b1_check, local_chart_identity

    n = args.n
    _guard(args, n, 3, "chart")
    ci = local_chart_identity(n, max_n=3)
    rep.check("chart identity", "local-chart", ci.holds, f"det(T) power {ci.det_power}, {ci.lhs_terms} terms")
    ks = [args.k] if args.k is not None else [0, 1, 2]
    for k in ks:
        try:
            lb = local_b1_check(n, k)
            rep.check(f"local b1 at k={k}", "local-b1", True, f"(k+1)^{n}; observed constant {_fmt(lb.observed_constant)}")
        except ArithmeticError as exc:
            rep.check(f"local b1 at k={k}", "local-b1", False, str(exc))


def verify_semiinvariance(args, rep: Report) -> None:
    from bfun.cyclic import random_invertible, random_rational_matrix, semiinvariance_check

    n = args.n
    _guard(args, n, 4, "semiinvariance")
    rng = random.Random(args.seed)
    trials = args.trials
    bad = 0
    for _ in range(trials):
        T = random_invertible(rng, n)
        M = random_rational_matrix(rng, n)
        v = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
        if not semiinvariance_check(n, T, M, v):
            bad += 1
    rep.check("f(T M T^-1, T v) = det(T) f(M, v)", "semi-invariance", bad == 0, f"{trials - bad}/{trials} samples exact")


def verify_shift(args, rep: Report) -> None:
    from bfun.shift import module_closure, pn_determines, shift_defect, solve_shift_generator, summary_json

    n = args.n
    if not 2 <= n <= 3 and not args.force:
        raise GuardExceeded("the shift solver is guarded to 2 <= n <= 3; pass --force to override")
    sol = solve_shift_generator(n)
    summary = summary_json(sol)
    rep.check("defect D L(k) - L(k-1) D = 0", "shift-intertwining", shift_defect(sol.operator, -1).is_zero())
    rep.check("unique solution at minimal order", "shift-generator", sol.nullspace_dim == 1,
              f"strata scanned (grade: dim) {sol.scanned}; order {sol.order()}")
    rep.check("top index N = (1,...,1)", "shift-top-index", sol.N == (1,) * len(sol.N), f"N={sol.N}")
    rep.check("prod alpha divides p_N", "shift-top-divisibility", len(summary["pN_factors"]) >= len(sol.N),
              "p_N = " + " * ".join(f"({f})" for f in summary["pN_factors"]))
    rep.check("p_N determines D", "shift-injectivity", pn_determines(n))
    rep.check("left and right L-multiples stay shift operators", "shift-module", module_closure(sol))
    rep.result = summary
    rep.result["generator"] = sol.operator.to_text()


def verify_recursion(args, rep: Report) -> None:
    from bfun.shift import recursion_residuals, solve_shift_generator

    n = args.n
    if not 2 <= n <= 3 and not args.force:
        raise GuardExceeded("the shift solver is guarded to 2 <= n <= 3; pass --force to override")
    sol = solve_shift_generator(n)
    rep.check("formal lift exists in the ansatz", "coefficient-recursion", sol.formal_dim > 0,
              f"{sol.formal_dim} formal solutions vs {sol.nullspace_dim} operator solutions")
    res = recursion_residuals(sol.generator, -1)
    bad = {M: p for M, p in res.items() if not p.is_zero()}
    detail = f"{len(res) - len(bad)}/{len(res)} indices vanish"
    if bad:
        M = min(bad)
        detail += f"; first nonzero at M={M}: {bad[M]}"
    rep.check("all recursion residuals vanish", "coefficient-recursion", not bad, detail[:300])


def verify_factorization(args, rep: Report) -> None:
    from bfun.shift import FactorizationViolation, verify_factorization as vf

    n = args.n
    _guard(args, n, 3, "factorization")
    try:
        fr = vf(n, strict=False)
    except FactorizationViolation as exc:
        rep.check("factorization", "ct-factorization", False, str(exc))
        return
    rep.check("monic CT(g(k+2)) = monic product formula", "ct-factorization", fr.matches_ct_formula,
              f"{fr.ct_shifted_monic} vs {fr.formula_monic}")
    rep.check("b-hat / ((k+1)^n CT) constant", "ct-factorization", fr.quotient_constant is not None,
              f"observed {_fmt(fr.quotient_constant) if fr.quotient_constant is not None else 'non-constant'}; "
              f"alpha_n = {fr.expected_constant}")
    rep.result = {
        "CT": str(fr.ct),
        "CT_shifted_monic": str(fr.ct_shifted_monic),
        "quotient_constant": _fmt(fr.quotient_constant) if fr.quotient_constant is not None else None,
        "alpha_n": fr.expected_constant,
    }


VERIFIERS = {
    "bernstein": verify_bernstein,
    "radial": verify_radial,
    "chart": verify_chart,
    "semiinvariance": verify_semiinvariance,
    "shift": verify_shift,
    "recursion": verify_recursion,
    "factorization": verify_factorization,
}


def cmd_verify(args, cache: Cache) -> Report:
    rep = Report("verify", args.n, target=args.target)
    VERIFIERS[args.target](args, rep)
    return rep


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="matrix size")
    common.add_argument("--method", choices=sorted(METHOD_NAMES), default="jets")
    common.add_argument("--k", type=int, default=None, help="single parameter value to check")
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "md"), default="json")
    common.add_argument("--cache", default=None, help="cache directory (default: $BFUN_CACHE)")
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    common.add_argument("--force", action="store_true", help="run past the size guards")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="bfun", description="Exact b-function and shift-operator verification.")
    ap.add_argument("--version", action="version", version=f"bfun {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("bfunction", parents=[common], help="interpolate b-hat(k) and compare with the closed form")
    v = sub.add_parser("verify", parents=[common], help="run one verification target")
    v.add_argument("target", choices=TARGETS)
    v.add_argument("--trials", type=int, default=100, help="samples for semiinvariance")
    v.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="[%(name)s] %(message)s")
    if args.max_n < 1:
        ap.error("--max-n must be positive")
    cache = Cache.from_env(args.cache)
    try:
        rep = cmd_bfunction(args, cache) if args.command == "bfunction" else cmd_verify(args, cache)
    except GuardExceeded as exc:
        print(f"bfun: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except Exception as exc:  # resource guards raised deeper in the library
        from bfun.cyclic import ResourceGuardError

        if isinstance(exc, (ResourceGuardError, MemoryError)):
            print(f"bfun: {exc}", file=sys.stderr)
            return EXIT_GUARD
        raise
    text = json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n" if args.format == "json" else rep.to_markdown()
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if not rep.passed:
        bad = rep.first_failure()
        print(f"bfun: FAIL {bad['name']}: {bad['detail']}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_PASS


if __name__ == "__main__":
    raise SystemExit(main())
