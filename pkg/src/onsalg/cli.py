"""Command-line harness: run named verification suites, report text or JSON.

Exit codes: 0 every check passed, 1 at least one failed, 2 usage or
configuration error (including a window too small for a requested check).
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import envelope, kacmoody, onsager, tensormat
from .currents import B_FAMILIES, check_exchange, check_frt_relations
from .exactalg import spectral
from .onsager import FAMILIES, FIXING_MAP
from .tensormat import build_boundary, build_r, build_rbar

SUITE_ORDER = (
    "rmatrix",
    "frt",
    "currents",
    "onsager",
    "augmented",
    "invariant",
    "kappa",
    "charges",
)


@dataclass
class SuiteConfig:
    suite: str
    window: int = 6
    max_k: int = 4
    format: str = "text"
    seed: int = 0
    parallel: bool = False

    def validate(self):
        if self.suite not in SUITE_ORDER and self.suite != "all":
            raise ValueError(
                f"unknown suite {self.suite!r} (choose from "
                f"{', '.join(SUITE_ORDER + ('all',))})"
            )
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if self.max_k < 0:
            raise ValueError(f"max-k must be >= 0, got {self.max_k}")
        if self.max_k > self.window:
            raise ValueError(
                f"max-k ({self.max_k}) must not exceed window ({self.window})"
            )
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")


# --- check runners -----------------------------------------------------
#
# Module-level so the process pool can pickle them.  The tensormat checks
# need their inputs built on the worker side, hence the small wrappers.


def _check_cybe():
    return tensormat.check_cybe(build_r(spectral("u")))


def _check_r_symmetries():
    return tensormat.check_r_symmetries(build_r(spectral("u")))


def _check_u_conditions(family, epsilon):
    return tensormat.check_U_conditions(build_boundary(family), epsilon)


def _check_reflection():
    return tensormat.check_reflection(build_boundary("k_general"))


def _check_nscybe(family):
    x, y = spectral("x"), spectral("y")
    rbar = build_rbar(build_boundary(family, x=x), x, y)
    return tensormat.check_nscybe(rbar, label=family)


def _check_m_condition(m_family, current_family):
    # pair each M with the rbar of the boundary its family actually uses
    x, y = spectral("x"), spectral("y")
    k_family, k_params = B_FAMILIES[current_family]
    rbar = build_rbar(build_boundary(k_family, params=k_params, x=x), x, y)
    return tensormat.check_M_condition(build_boundary(m_family, x=x), rbar)


def suite_checks(cfg):
    """The (callable, args) list for one suite, in its fixed order."""
    w, mk, seed = cfg.window, cfg.max_k, cfg.seed

    def family_block(fam):
        return [
            (onsager.check_jacobi, (fam, min(w, 4))),
            (onsager.check_jacobi_sampled, (fam, 3 * w, seed)),
            (onsager.check_dolan_grady, (fam,)),
            (onsager.check_morphism, (fam, w)),
            (kacmoody.check_automorphism, (FIXING_MAP[fam], w)),
            (onsager.check_fixed_point, (fam, w)),
        ]

    suites = {
        "rmatrix": [
            (_check_cybe, ()),
            (_check_r_symmetries, ()),
            (_check_u_conditions, ("U_diag", 1)),
            (_check_u_conditions, ("U_offdiag", -1)),
            (_check_reflection, ()),
            (_check_nscybe, ("U_diag",)),
            (_check_nscybe, ("U_offdiag",)),
            (_check_nscybe, ("kappa_plus",)),
            (_check_nscybe, ("kappa_minus",)),
            (_check_nscybe, ("k_general",)),
            (_check_m_condition, ("M_ons", "onsager")),
            (_check_m_condition, ("M_aug", "augmented")),
            (_check_m_condition, ("M_inv", "invariant")),
        ],
        "frt": [
            (kacmoody.check_serre_chevalley, (w,)),
            (check_frt_relations, (w,)),
        ],
        "currents": [
            (check_exchange, (fam, w))
            for fam in ("onsager", "augmented", "invariant", "kappa_minus")
        ]
        + [(onsager.check_current_relations, (fam, w)) for fam in FAMILIES],
        "onsager": family_block("onsager"),
        "augmented": family_block("augmented"),
        "invariant": family_block("invariant"),
        "kappa": [
            (onsager.check_morphism, ("kappa_minus", w)),
            (kacmoody.check_automorphism, ("lusztig_minus", w)),
            (kacmoody.check_automorphism, ("shift", w)),
            (onsager.check_fixed_point, ("kappa_minus", w)),
            (onsager.check_kappa_isomorphism, (w,)),
        ],
        "charges": [(envelope.check_linear_charges, (fam, w)) for fam in FAMILIES]
        + [(envelope.check_quadratic_charges, (fam, mk)) for fam in FAMILIES],
    }
    if cfg.suite == "all":
        out = []
        for name in SUITE_ORDER:
            out.extend(suites[name])
        return out
    return suites[cfg.suite]


def suite_notes(cfg):
    """Informational lines with no pass/fail verdict."""
    if cfg.suite not in ("charges", "all"):
        return []
    return [envelope.note_mixed_commutator(fam, 1, 1) for fam in FAMILIES]


def _run_one(job):
    fn, args = job
    return fn(*args)


def _execute(checks, parallel):
    if parallel and len(checks) > 1:
        with ProcessPoolExecutor() as pool:
            futures = [pool.submit(_run_one, job) for job in checks]
            return [f.result() for f in futures]
    return [_run_one(job) for job in checks]


# --- argument handling -------------------------------------------------

_CONFIG_KEYS = ("suite", "window", "max_k", "format", "seed", "parallel")


def _build_parser():
    p = argparse.ArgumentParser(
        prog="verify",
        description="Run a named verification suite over the algebra library.",
    )
    p.add_argument(
        "suite",
        nargs="?",
        help=f"one of: {', '.join(SUITE_ORDER + ('all',))}",
    )
    p.add_argument("--window", type=int, help="series truncation window (default 6)")
    p.add_argument(
        "--max-k", type=int, dest="max_k", help="quadratic charge depth (default 4)"
    )
    p.add_argument("--format", choices=("text", "json"), help="report format")
    p.add_argument("--seed", type=int, help="seed for randomized spot checks")
    p.add_argument(
        "--parallel", action="store_true", default=None,
        help="run the suite's checks in worker processes",
    )
    p.add_argument("--config", help="JSON file with the same fields; flags win")
    return p


def _resolve_config(args):
    file_vals = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_vals = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ValueError(f"cannot read config {args.config!r}: {e}")
        if not isinstance(file_vals, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = sorted(set(file_vals) - set(_CONFIG_KEYS))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")

    def pick(name, flag_val, default):
        if flag_val is not None:
            return flag_val
        return file_vals.get(name, default)

    suite = pick("suite", args.suite, None)
    if suite is None:
        raise ValueError("no suite given (pass one or set it in --config)")
    cfg = SuiteConfig(
        suite=str(suite),
        window=int(pick("window", args.window, 6)),
        max_k=int(pick("max_k", args.max_k, 4)),
        format=str(pick("format", args.format, "text")),
        seed=int(pick("seed", args.seed, 0)),
        parallel=bool(pick("parallel", args.parallel, False)),
    )
    cfg.validate()
    return cfg


def _emit(cfg, reports, notes):
    npass = sum(1 for r in reports if r.passed)
    nfail = len(reports) - npass
    if cfg.format == "json":
        doc = {
            "suite": cfg.suite,
            "window": cfg.window,
            "checks": [r.as_dict() for r in reports],
            "summary": {"pass": npass, "fail": nfail},
        }
        if notes:
            doc["notes"] = notes
        print(json.dumps(doc, indent=2))
    else:
        for r in reports:
            print(r)
        for note in notes:
            print(f"note: {note}")
        total_ms = sum(r.duration_ms for r in reports)
        print(f"summary: {npass} passed, {nfail} failed ({total_ms:.0f} ms)")
    return 0 if nfail == 0 else 1


def run(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _resolve_config(args)
        reports = _execute(suite_checks(cfg), cfg.parallel)
        notes = suite_notes(cfg)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return _emit(cfg, reports, notes)


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
