"""Command-line access to the engines.

Exit codes: 0 for any definite answer (including "no"), 2 for usage,
parse and model errors, 3 when the search budget runs out.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import corpus
from .causality import check_actual_cause, enumerate_actual_causes, enumerate_sufficient_causes
from .dsl import parse_context_file, parse_context_spec
from .errors import CausexError, SearchBudgetExceeded
from .explanation import (
    EpistemicState,
    PriorState,
    check_explanation,
    enumerate_explanations,
    explanatory_power,
    gardenfors_power,
    goodness,
    partial_explanation,
)
from .formula import World, as_budget, format_formula, parse_conjunct, parse_formula
from .general import (
    GeneralExplanation,
    ProbabilisticCausalModel,
    SituationSet,
    characterizing_formula,
    check_general_explanation,
    enumerate_general_explanations,
    probability_of_cause,
    probability_of_formula,
)
from .model import Situation, enumerate_contexts, intervene, solve


class UsageError(Exception):
    pass


def rational(q) -> str | None:
    if q is None:
        return None
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class Result:
    """A query result with a human rendering and a deterministic JSON form."""

    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.verdict = None
        self.clauses = {}
        self.witnesses = []
        self.values = {}
        self.lines = []

    def to_json(self) -> str:
        doc = {"command": self.command, "inputs": self.inputs, "verdict": self.verdict,
               "clauses": self.clauses, "witnesses": self.witnesses, "values": self.values}
        return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# argument helpers

def _model(ref):
    loaded = corpus.load_model(ref)
    if isinstance(loaded, ProbabilisticCausalModel):
        return loaded.model, loaded
    return loaded, None


def _context(model, text):
    return model.context(parse_context_spec(text))


def _state(model, args, phi):
    if args.k:
        ctxs, weights = corpus.load_contexts(args.k, model.signature)
        return EpistemicState(model, ctxs, weights)
    # default epistemic state: every context where the explanandum holds
    ctxs = [c for c in enumerate_contexts(model) if World(model, c, budget=None).holds(phi)]
    return EpistemicState(model, ctxs)


def _prior(model, pmodel, args):
    if getattr(args, "prior", None):
        ctxs, weights = corpus.load_contexts(args.prior, model.signature)
        if weights is None:
            raise UsageError("the prior file must weight every context")
        return PriorState(model, ctxs, weights)
    if pmodel is not None:
        return PriorState.from_weights(model, pmodel.weights)
    return None


def _psi(text):
    text = text.strip()
    if text.startswith("@"):
        model, _ = _model(text[1:])
        return characterizing_formula(model)
    return parse_formula(text)


def _psi_set(path):
    path = corpus.resolve(path, suffix=".txt")
    out = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(_psi(line))
    return out


def _ctx_str(ctx) -> str:
    return str(ctx)


def _witness_json(w):
    return {"W": list(w.partition.wside), "Z": list(w.partition.zside),
            "x_prime": dict(w.alt_x), "w_prime": dict(w.alt_w), "z_star": dict(w.baseline_z)}


# ---------------------------------------------------------------------------
# commands

def cmd_eval(args, res):
    model, _ = _model(args.model)
    phi = parse_formula(args.formula, model.signature)
    ctx = _context(model, args.context)
    ok = World(model, ctx, as_budget(args.budget)).holds(phi)
    res.verdict = ok
    res.lines.append("true" if ok else "false")


def cmd_solve(args, res):
    model, _ = _model(args.model)
    ctx = _context(model, args.context)
    if args.do:
        model = intervene(model, model.signature.setting(parse_context_spec(args.do)))
    sol = solve(model, ctx)
    res.values = {"solution": dict(sol)}
    res.lines.append(str(sol))
    if args.edges:
        res.values["edges"] = [list(e) for e in model.edges()]
        res.lines += [f"{a} -> {b}" for a, b in model.edges()]


def _cause(args, res, sufficient_only):
    model, _ = _model(args.model)
    phi = parse_formula(args.phi, model.signature)
    sit = Situation(model, _context(model, args.context))
    if args.candidate:
        cand = parse_conjunct(args.candidate, model.signature)
        v = check_actual_cause(sit, cand, phi, budget=args.budget)
        res.verdict = v.is_sufficient if sufficient_only else v.is_actual
        res.clauses = {"AC1": v.ac1, "AC2": v.ac2 is not None, "AC3": v.ac3}
        res.values["classification"] = v.classification.value
        if v.ac2 is not None:
            res.witnesses.append(_witness_json(v.ac2))
        res.lines.append(f"{cand}: {v.classification.value}")
        res.lines.append(f"  AC1 {v.ac1}  AC2 {v.ac2 is not None}  AC3 {v.ac3}")
        if v.ac2 is not None:
            res.lines.append("  witness " + v.ac2.describe())
        return
    enum = enumerate_sufficient_causes if sufficient_only else enumerate_actual_causes
    found = enum(sit, phi, max_width=args.max_width, budget=args.budget)
    res.verdict = bool(found)
    res.values["causes"] = [str(v.candidate) for v in found]
    res.witnesses = [dict(_witness_json(v.ac2), candidate=str(v.candidate)) for v in found]
    res.lines += [str(v.candidate) for v in found] or ["(none)"]


def cmd_cause(args, res):
    _cause(args, res, sufficient_only=False)


def cmd_suffcause(args, res):
    _cause(args, res, sufficient_only=True)


def cmd_explain(args, res):
    model, _ = _model(args.model)
    phi = parse_formula(args.phi, model.signature)
    state = _state(model, args, phi)
    res.values["contexts"] = [_ctx_str(c) for c in state.contexts]
    if args.candidate:
        rep = check_explanation(state, parse_conjunct(args.candidate, model.signature), phi,
                                require_actual=args.require_actual, actual_in_k=args.actual_in_k,
                                budget=args.budget)
        res.verdict = rep.verdict
        res.clauses = rep.clauses()
        res.values["failing_contexts"] = [_ctx_str(c) for c in rep.failing_contexts]
        res.values["ex3_blockers"] = [str(b) for b in rep.ex3_blockers]
        res.lines.append(f"{rep.candidate}: {'explanation' if rep.verdict else 'not an explanation'}")
        res.lines.append("  " + "  ".join(f"{k} {v}" for k, v in rep.clauses().items()))
        for c in rep.failing_contexts:
            res.lines.append(f"  not a sufficient cause at {c}")
        return
    found = enumerate_explanations(state, phi, max_width=args.max_width,
                                   include_trivial=args.include_trivial, budget=args.budget)
    if args.require_actual:
        u = _context(model, args.require_actual)
        found = [e for e in found if World(model, u, budget=None).conjunct_holds(e)
                 and (not args.actual_in_k or u in state.contexts)]
    res.verdict = bool(found)
    res.values["explanations"] = [str(e) for e in found]
    res.lines += [str(e) for e in found] or ["(no explanation)"]


def _partial_inputs(args):
    model, pmodel = _model(args.model)
    phi = parse_formula(args.phi, model.signature)
    cand = parse_conjunct(args.candidate, model.signature)
    return model, pmodel, phi, cand


def cmd_partial(args, res):
    model, pmodel, phi, cand = _partial_inputs(args)
    prior = _prior(model, pmodel, args)
    state = _state(model, args, phi) if args.k or prior is None else prior.condition(phi)
    rep = partial_explanation(state, cand, phi, prior=prior, budget=args.budget)
    res.verdict = rep.core_is_explanation
    res.clauses = rep.core_report.clauses()
    res.values = {"core": [_ctx_str(c) for c in rep.core], "goodness": rational(rep.goodness),
                  "probability_of_explanation": rational(rep.probability_of_explanation),
                  "power": rational(rep.power), "gardenfors_power": rational(rep.gardenfors_power)}
    res.lines.append("core:")
    res.lines += [f"  {c}" for c in rep.core]
    res.lines.append(f"explanation on core: {rep.core_is_explanation}")
    for key in ("goodness", "probability_of_explanation", "power", "gardenfors_power"):
        if res.values[key] is not None:
            res.lines.append(f"{key}: {res.values[key]}")


def cmd_goodness(args, res):
    model, pmodel, phi, cand = _partial_inputs(args)
    if args.k:
        state = _state(model, args, phi)
    elif pmodel is not None:
        state = PriorState.from_weights(model, pmodel.weights).condition(phi)
    else:
        raise UsageError("goodness needs weights: pass --k with a weighted context file")
    g = goodness(state, cand, phi, budget=args.budget)
    res.values["goodness"] = rational(g)
    res.lines.append(rational(g))


def cmd_power(args, res):
    model, pmodel, phi, cand = _partial_inputs(args)
    prior = _prior(model, pmodel, args)
    if prior is None:
        raise UsageError("power needs a prior: a prob block in the model or --prior FILE")
    state = _state(model, args, phi) if args.k else None
    fn = explanatory_power if args.measure == "causal" else gardenfors_power
    p = fn(prior, state, cand, phi, budget=args.budget)
    res.values = {"measure": args.measure, "power": rational(p)}
    res.lines.append(rational(p))


def cmd_general_explain(args, res):
    situations, weights = corpus.load_situations(args.situations)
    sset = SituationSet(tuple(situations), weights)
    hyp = _psi_set(args.psi_set) if args.psi_set else []
    if args.candidate:
        if not args.psi:
            raise UsageError("--candidate needs --psi")
        psi = _psi(args.psi)
        if not hyp:
            hyp = [psi]
        rep = check_general_explanation(sset, GeneralExplanation(psi, parse_conjunct(args.candidate)),
                                        args.phi, hyp, budget=args.budget)
        res.verdict = rep.verdict
        res.clauses = rep.clauses()
        res.values["ex3_blockers"] = [str(b) for b in rep.ex3_blockers]
        res.lines.append(f"({args.psi}, {rep.candidate}): "
                         f"{'explanation' if rep.verdict else 'not an explanation'}")
        res.lines.append("  " + "  ".join(f"{k} {v}" for k, v in rep.clauses().items()))
        return
    if args.psi:
        psi = _psi(args.psi)
        if psi not in hyp:
            hyp.append(psi)
    found = enumerate_general_explanations(sset, args.phi, hyp, max_width=args.max_width,
                                           include_trivial=args.include_trivial, budget=args.budget)
    res.verdict = bool(found)
    res.values["explanations"] = [{"psi": format_formula(g.psi), "event": str(g.event)} for g in found]
    res.lines += [f"({format_formula(g.psi)}, {g.event})" for g in found] or ["(no explanation)"]


def cmd_prob(args, res):
    model, pmodel = _model(args.model)
    if args.weights:
        text = corpus.resolve(args.weights, suffix=".ctx").read_text()
        ctxs, weights = parse_context_file(text, model.signature)
        if weights is None:
            raise UsageError("the weights file must weight every context")
        pmodel = ProbabilisticCausalModel(model, weights)
    if pmodel is None:
        raise UsageError("prob needs weights: a prob block in the model or --weights FILE")
    if args.cause:
        p = probability_of_cause(pmodel, parse_conjunct(args.cause, model.signature),
                                 args.phi, budget=args.budget)
    else:
        p = probability_of_formula(pmodel, args.phi)
    res.values["probability"] = rational(p)
    res.lines.append(rational(p))


def cmd_fixtures(args, res):
    names = corpus.fixture_names()
    res.values["models"] = {n: corpus.DESCRIPTIONS.get(n, "") for n in names}
    res.values["files"] = sorted(p.name for p in corpus.FIXTURE_DIR.iterdir()
                                 if p.suffix in (".ctx", ".sit", ".txt"))
    res.lines += [f"{n:22} {corpus.DESCRIPTIONS.get(n, '')}" for n in names]
    res.lines += [f"{f}" for f in res.values["files"]]


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def globals_(suppress):
        # subcommands repeat the global flags without clobbering earlier values
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--json", action="store_true", help="machine-readable output", **kw)
        g.add_argument("--budget", type=int, help="maximum formula evaluations (default 10^7)", **kw)
        g.add_argument("--max-width", type=int, help="largest conjunction searched when enumerating", **kw)
        g.add_argument("--require-actual", metavar="CONTEXT", help="explanations must hold in this context", **kw)
        return g

    common = globals_(True)
    p = argparse.ArgumentParser(prog="causex", parents=[globals_(False)],
                                description="Actual causes and explanations in finite structural models.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "evaluate a causal formula in a situation")
    sp.add_argument("model")
    sp.add_argument("--context", required=True)
    sp.add_argument("--formula", required=True)

    sp = add("solve", cmd_solve, "solve the equations in a context")
    sp.add_argument("model")
    sp.add_argument("--context", required=True)
    sp.add_argument("--do", help="intervention, e.g. ML1=0, ML2=1")
    sp.add_argument("--edges", action="store_true", help="also list parent edges")

    for name, fn, help_ in (("cause", cmd_cause, "check or enumerate actual causes"),
                            ("suffcause", cmd_suffcause, "check or enumerate sufficient causes")):
        sp = add(name, fn, help_)
        sp.add_argument("model")
        sp.add_argument("--context", required=True)
        sp.add_argument("--phi", required=True)
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--candidate")
        g.add_argument("--enumerate", action="store_true")

    sp = add("explain", cmd_explain, "check or enumerate explanations")
    sp.add_argument("model")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--k", help="context file (default: every context satisfying phi)")
    sp.add_argument("--candidate")
    sp.add_argument("--include-trivial", action="store_true",
                    help="also offer candidates that mention variables of phi")
    sp.add_argument("--actual-in-k", action="store_true",
                    help="with --require-actual, the actual context must lie in K")

    for name, fn, help_ in (("partial", cmd_partial, "partial explanation report"),
                            ("goodness", cmd_goodness, "goodness of a partial explanation"),
                            ("power", cmd_power, "explanatory power")):
        sp = add(name, fn, help_)
        sp.add_argument("model")
        sp.add_argument("--phi", required=True)
        sp.add_argument("--candidate", required=True)
        sp.add_argument("--k")
        if name != "goodness":
            sp.add_argument("--prior", help="weighted context file for the prior")
        if name == "power":
            sp.add_argument("--measure", choices=("causal", "gardenfors"), default="causal")

    sp = add("general-explain", cmd_general_explain, "explanations over a set of situations")
    sp.add_argument("situations", help="situation file: MODEL @ CONTEXT per line")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--psi", help="causal formula; @MODEL stands for a formula characterizing MODEL")
    sp.add_argument("--psi-set", help="file of hypothesis formulas, one per line")
    sp.add_argument("--candidate")
    sp.add_argument("--include-trivial", action="store_true")

    sp = add("prob", cmd_prob, "probability of a formula or of a cause")
    sp.add_argument("model")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--cause", metavar="CANDIDATE")
    sp.add_argument("--weights", help="weighted context file (default: the model's prob block)")

    add("fixtures", cmd_fixtures, "list bundled example files")
    return p


def _inputs(args) -> dict:
    skip = {"func", "json", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False)}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.max_width is not None and args.max_width < 1:
        print("error: --max-width must be at least 1", file=stderr)
        return 2
    res = Result(args.command, _inputs(args))
    try:
        args.func(args, res)
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=stderr)
        return 3
    except (CausexError, UsageError, ValueError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    if args.json:
        print(res.to_json(), file=stdout)
    else:
        for line in res.lines:
            print(line, file=stdout)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
